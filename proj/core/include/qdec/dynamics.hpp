// dynamics.hpp - Closed-form evolution, reduced dynamics, Kraus families,
// correlated initial states, and the rotating-frame map with its ODE oracle.

#pragma once

#include <optional>
#include <vector>

#include "qdec/linalg.hpp"
#include "qdec/model.hpp"
#include "qdec/riccati.hpp"

namespace qdec::dynamics {

using linalg::BlockOperator;
using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using model::EnvironmentPair;
using model::ModelParams;
using riccati::RiccatiSolution;

// 2x2 density matrix: Hermitian, unit trace, positive semidefinite.
class QubitState {
public:
    explicit QubitState(const Eigen::Matrix2cd& rho);

    static QubitState from_bloch(double x, double y, double z);

    const Eigen::Matrix2cd& rho() const { return rho_; }
    Eigen::Vector3d bloch() const;
    double coherence_abs() const { return std::abs(rho_(0, 1)); }
    double purity() const;
    double trace_error() const { return std::abs(rho_.trace() - std::complex<double>(1.0, 0.0)); }

private:
    Eigen::Matrix2cd rho_;
};

// Correlated initial state Σ_ij γ_ij · ρ_Q^i ⊗ ρ_E^j with a coefficient grid
// that need not factor.
struct StructuredJoint {
    ComplexMatrix gamma;                        // coefficient grid γ_ij
    std::vector<Eigen::Matrix2cd> qubit_factors;  // ρ_Q^i
    std::vector<ComplexMatrix> env_factors;       // ρ_E^j

    // Σ_ij γ_ij · ρ_Q^i ⊗ ρ_E^j as a 2d x 2d matrix.
    ComplexMatrix materialize_flat() const;
};

// Joint system-environment density matrix, either materialized into 2x2
// blocks or kept in structured (coefficient grid) form.
class JointState {
public:
    static JointState full(const BlockOperator& rho);
    static JointState product(const QubitState& rho_q, const ComplexMatrix& rho_env);
    static JointState structured(StructuredJoint joint);

    const BlockOperator& block() const { return block_; }
    bool is_structured() const { return structured_.has_value(); }
    const StructuredJoint& structured_form() const;

    QubitState marginal() const;

private:
    explicit JointState(BlockOperator block) : block_(std::move(block)) {}

    BlockOperator block_;
    std::optional<StructuredJoint> structured_;
};

// Evolution operator U_t of the total system,
// G(X)·[[U⁺ + X²U⁻, (U⁺-U⁻)X], [(U⁺-U⁻)X, U⁻ + X²U⁺]] with
// U^± = exp(-i(H_± ± β·I ± αX)t). Unitary when flattened.
BlockOperator evolve_block(const RiccatiSolution& sol, const ModelParams& params, double t);

// Factored form U_t = Σ_n U_n(t) ⊗ |φ_n⟩⟨φ_n| with U_n(t) = exp(-i·H_n·t);
// returns the 2x2 unitaries indexed by n.
std::vector<Eigen::Matrix2cd> evolve_factored(const RiccatiSolution& sol,
                                              const ModelParams& params, double t);

// ρ_Q(t) = Tr_E(U_t · ρ_QE · U_t†).
QubitState reduced_dynamics(const JointState& joint, const RiccatiSolution& sol,
                            const ModelParams& params, double t);

// Kraus family K_n(t) = √ρ_n · U_n(t) with weights ρ_n = ⟨φ_n|ρ_E|φ_n⟩.
class KrausFamily {
public:
    KrausFamily(std::vector<double> weights, std::vector<Eigen::Matrix2cd> unitaries,
                double time);

    std::size_t size() const { return weights_.size(); }
    double weight(std::size_t n) const { return weights_[n]; }
    const Eigen::Matrix2cd& unitary(std::size_t n) const { return unitaries_[n]; }
    double time() const { return time_; }

    Eigen::Matrix2cd kraus(std::size_t n) const;  // √ρ_n · U_n
    double completeness_defect() const;           // ||Σ K_n†K_n - I||_F

private:
    std::vector<double> weights_;
    std::vector<Eigen::Matrix2cd> unitaries_;
    double time_ = 0.0;
};

KrausFamily kraus_family(const HermitianOperator& rho_env, const RiccatiSolution& sol,
                         const ModelParams& params, double t);

// Operator-sum application ρ ↦ Σ K_n ρ K_n†.
QubitState kraus_apply(const KrausFamily& family, const QubitState& rho_q);

// Reduced dynamics of a correlated initial state,
// ρ_Q(t) = Σ_n Σ_ij ε_ij^n U_n ρ_Q^i U_n† with ε_ij^n = γ_ij⟨φ_n|ρ_E^j|φ_n⟩.
QubitState correlated_dynamics(const StructuredJoint& joint, const RiccatiSolution& sol,
                               const ModelParams& params, double t);

// Operator-Schmidt defect of a flattened qubit ⊗ environment unitary:
// 1 - (largest Schmidt weight)/(total weight); 0 iff U = U_Q ⊗ U_E.
double operator_schmidt_defect(const ComplexMatrix& flat_u, Eigen::Index env_dim);

// Schmidt defect of evolve_block(t); strictly positive defects witness that
// the joint evolution is not locally unitary.
double local_unitarity_defect(const RiccatiSolution& sol, const ModelParams& params, double t);

// Rotating-frame map ρ̄_t = V_t · ρ_t(β̄) · V_t†, V_t = diag(e^{-iωt/2}, e^{iωt/2}).
QubitState rotating_frame_map(const QubitState& rho_ti, const ModelParams& params, double t);

// Propagates the full-space frame U over [t0, t1] with fixed-step classical
// RK4 on i·U̇ = H_QE(t, β)·U. Exposed so convergence-order checks can drive
// the step count directly.
ComplexMatrix ode_propagate_frame(const ModelParams& params, const EnvironmentPair& env,
                                  double t0, double t1, int steps,
                                  const ComplexMatrix& u_start);

// Lab-frame integration oracle: reduced states of the time-dependent model
// on a time grid. Runs an h vs h/2 Richardson audit and checks unitarity
// drift of the propagated frame; refuses when either audit fails.
std::vector<QubitState> ode_oracle(const ModelParams& params, const EnvironmentPair& env,
                                   const JointState& joint, const std::vector<double>& t_grid);

}  // namespace qdec::dynamics
