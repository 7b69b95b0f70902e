// model.hpp - Hamiltonians of the driven-qubit + finite environment family,
// including the spin-bath environment.

#pragma once

#include <vector>

#include "qdec/linalg.hpp"

namespace qdec::model {

using linalg::BlockOperator;
using linalg::ComplexMatrix;
using linalg::HermitianOperator;

struct ModelParams {
    double alpha = 0.0;  // drive amplitude
    double beta = 0.0;   // detuning
    double omega = 0.0;  // drive angular frequency
    Eigen::Index env_dim = 1;

    // Effective detuning of the equivalent time-independent model.
    double effective_beta() const { return beta - 0.5 * omega; }
};

void validate_params(const ModelParams& params);

// Environment Hamiltonian H_E and coupling operator V, with a certified
// commutation status: commuting ⇔ ||[H_E,V]||_F <= 1e-10·||H_E||_F·||V||_F.
class EnvironmentPair {
public:
    EnvironmentPair(HermitianOperator h_env, HermitianOperator coupling);

    Eigen::Index dim() const { return h_env_.dim(); }
    const HermitianOperator& h_env() const { return h_env_; }
    const HermitianOperator& coupling() const { return coupling_; }

    bool commuting() const { return commuting_; }
    double commutator_residual() const { return commutator_residual_; }

    ComplexMatrix h_plus() const;   // H_E + V
    ComplexMatrix h_minus() const;  // H_E - V

private:
    HermitianOperator h_env_;
    HermitianOperator coupling_;
    double commutator_residual_ = 0.0;
    bool commuting_ = false;
};

// Spin bath of N sites: H_E = Σ ω_n σ₃(n), V = Σ g_n σ₃(n) on dimension 2^N.
// Site n is the n-th Kronecker factor from the left. Both operators are real
// diagonal and commute exactly.
EnvironmentPair spin_bath(const std::vector<double>& omegas,
                          const std::vector<double>& couplings);

// Time-independent Hamiltonian H_QE = H_QE(0, β):
// blocks [[H_E + V + β·I, α·I], [α·I, H_E - V - β·I]].
BlockOperator build_hqe(const ModelParams& params, const EnvironmentPair& env);

// Lab-frame Hamiltonian H_QE(t, β); the off-diagonal qubit block carries the
// drive phase e^{∓iωt}. Equals build_hqe at t = 0.
BlockOperator build_hqe_t(double t, const ModelParams& params, const EnvironmentPair& env);

// Interaction-picture Hamiltonian H_t with blocks [[H_E, z_t*·V_β], [z_t·V_β, H_E]],
// z_t = e^{-i2αt}, V_β = V + β·I.
BlockOperator build_ht(double t, const ModelParams& params, const EnvironmentPair& env);

struct HbarPair {
    BlockOperator u;     // unitary (1/√2)[[I, iI],[iI, I]]
    BlockOperator hbar;  // u† · H_QE · u, computed numerically
};

// Conjugates H_QE by the fixed unitary u. The diagonal blocks of hbar equal
// H_E; the off-diagonal blocks come out as α·I + i·V_β and its adjoint.
HbarPair build_hbar(const ModelParams& params, const EnvironmentPair& env);

}  // namespace qdec::model
