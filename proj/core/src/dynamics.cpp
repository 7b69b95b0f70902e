// dynamics.cpp - Evolution operators, reduced dynamics, and Kraus machinery.

#include "qdec/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qdec::dynamics {

using linalg::Complex;
using linalg::RealVector;

namespace {

constexpr double kStateTol = 1e-12;
constexpr double kJointTol = 1e-10;
// Target ||H||·h per RK4 step; keeps the accumulated error well under the
// 1e-6 state tolerance the oracle certifies.
constexpr double kStepScale = 0.02;

void check_density_flat(const ComplexMatrix& rho, double tol, const char* what) {
    if (!linalg::all_finite(rho) || rho.rows() != rho.cols()) {
        throw std::invalid_argument(std::string(what) + ": malformed density matrix");
    }
    if (linalg::hermiticity_defect(rho) > tol) {
        throw std::invalid_argument(std::string(what) + ": density matrix not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > tol) {
        throw std::invalid_argument(std::string(what) + ": density matrix trace != 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint().eval()));
    if (solver.eigenvalues().minCoeff() < -tol) {
        throw std::invalid_argument(std::string(what) + ": density matrix not positive semidefinite");
    }
}

// Spectral function of the solution: basis · diag(f(x_n)) · basis†.
template <typename F>
ComplexMatrix solution_function(const RiccatiSolution& sol, F&& f) {
    RealVector values(sol.dim());
    for (Eigen::Index n = 0; n < sol.dim(); ++n) values(n) = f(n);
    return sol.basis * values.cast<Complex>().asDiagonal() * sol.basis.adjoint();
}

Eigen::Matrix2cd local_generator(const RiccatiSolution& sol, const ModelParams& params,
                                 Eigen::Index n) {
    Eigen::Matrix2cd h_n;
    const double e_plus = sol.e_h_env(n) + sol.e_coupling(n);
    const double e_minus = sol.e_h_env(n) - sol.e_coupling(n);
    h_n << Complex(e_plus + params.beta, 0.0), Complex(params.alpha, 0.0),
        Complex(params.alpha, 0.0), Complex(e_minus - params.beta, 0.0);
    return h_n;
}

}  // namespace

QubitState::QubitState(const Eigen::Matrix2cd& rho) {
    if (!linalg::all_finite(rho)) {
        throw std::invalid_argument("QubitState: non-finite entries");
    }
    if ((rho - rho.adjoint().eval()).norm() > kStateTol * std::max(1.0, rho.norm())) {
        throw std::invalid_argument("QubitState: not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kStateTol) {
        throw std::invalid_argument("QubitState: trace != 1");
    }
    rho_ = 0.5 * (rho + rho.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(rho_);
    if (solver.eigenvalues().minCoeff() < -kStateTol) {
        throw std::invalid_argument("QubitState: not positive semidefinite");
    }
}

QubitState QubitState::from_bloch(double x, double y, double z) {
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r > 1.0 + kStateTol) {
        throw std::invalid_argument("QubitState: Bloch vector lies outside the unit ball");
    }
    Eigen::Matrix2cd rho;
    rho << Complex(0.5 * (1.0 + z), 0.0), Complex(0.5 * x, -0.5 * y),
        Complex(0.5 * x, 0.5 * y), Complex(0.5 * (1.0 - z), 0.0);
    return QubitState(rho);
}

Eigen::Vector3d QubitState::bloch() const {
    return Eigen::Vector3d(2.0 * rho_(0, 1).real(), -2.0 * rho_(0, 1).imag(),
                           (rho_(0, 0) - rho_(1, 1)).real());
}

double QubitState::purity() const {
    return (rho_ * rho_).trace().real();
}

ComplexMatrix StructuredJoint::materialize_flat() const {
    if (gamma.rows() != static_cast<Eigen::Index>(qubit_factors.size()) ||
        gamma.cols() != static_cast<Eigen::Index>(env_factors.size()) || qubit_factors.empty() ||
        env_factors.empty()) {
        throw std::invalid_argument("StructuredJoint: gamma grid does not match the factor lists");
    }
    const Eigen::Index d = env_factors.front().rows();
    ComplexMatrix flat = ComplexMatrix::Zero(2 * d, 2 * d);
    for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
        for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
            if (env_factors[j].rows() != d || env_factors[j].cols() != d) {
                throw std::invalid_argument("StructuredJoint: environment factors must share dimension");
            }
            flat += gamma(i, j) * linalg::kron(qubit_factors[i], env_factors[j]);
        }
    }
    return flat;
}

JointState JointState::full(const BlockOperator& rho) {
    check_density_flat(rho.flat(), kJointTol, "JointState");
    return JointState(rho);
}

JointState JointState::product(const QubitState& rho_q, const ComplexMatrix& rho_env) {
    check_density_flat(rho_env, kJointTol, "JointState: environment factor");
    const Eigen::Matrix2cd& q = rho_q.rho();
    return JointState(BlockOperator(q(0, 0) * rho_env, q(0, 1) * rho_env,
                                    q(1, 0) * rho_env, q(1, 1) * rho_env));
}

JointState JointState::structured(StructuredJoint joint) {
    const ComplexMatrix flat = joint.materialize_flat();
    check_density_flat(flat, kJointTol, "JointState: materialized structured state");
    JointState state(BlockOperator::from_flat(flat));
    state.structured_ = std::move(joint);
    return state;
}

const StructuredJoint& JointState::structured_form() const {
    if (!structured_) {
        throw std::logic_error("JointState: no structured form available");
    }
    return *structured_;
}

QubitState JointState::marginal() const {
    return QubitState(linalg::partial_trace_env(block_));
}

BlockOperator evolve_block(const RiccatiSolution& sol, const ModelParams& params, double t) {
    const ComplexMatrix x = sol.materialize();
    const ComplexMatrix h_env = solution_function(sol, [&](Eigen::Index n) { return sol.e_h_env(n); });
    const ComplexMatrix v = solution_function(sol, [&](Eigen::Index n) { return sol.e_coupling(n); });
    const Eigen::Index d = sol.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);

    const HermitianOperator h_up(h_env + v + params.beta * id + params.alpha * x);
    const HermitianOperator h_dn(h_env - v - params.beta * id - params.alpha * x);
    const ComplexMatrix u_plus = linalg::exp_scaled(h_up, t);
    const ComplexMatrix u_minus = linalg::exp_scaled(h_dn, t);

    const ComplexMatrix g =
        solution_function(sol, [&](Eigen::Index n) { return 1.0 / (1.0 + sol.x(n) * sol.x(n)); });
    const ComplexMatrix x2 = x * x;
    const ComplexMatrix diff_x = (u_plus - u_minus) * x;
    return BlockOperator(g * (u_plus + x2 * u_minus), g * diff_x,
                         g * diff_x, g * (u_minus + x2 * u_plus));
}

std::vector<Eigen::Matrix2cd> evolve_factored(const RiccatiSolution& sol,
                                              const ModelParams& params, double t) {
    std::vector<Eigen::Matrix2cd> out;
    out.reserve(static_cast<std::size_t>(sol.dim()));
    for (Eigen::Index n = 0; n < sol.dim(); ++n) {
        const ComplexMatrix u_n =
            linalg::exp_scaled(HermitianOperator(local_generator(sol, params, n)), t);
        out.push_back(Eigen::Matrix2cd(u_n));
    }
    return out;
}

QubitState reduced_dynamics(const JointState& joint, const RiccatiSolution& sol,
                            const ModelParams& params, double t) {
    const BlockOperator u = evolve_block(sol, params, t);
    return QubitState(linalg::partial_trace_env(u * joint.block() * u.adjoint()));
}

KrausFamily::KrausFamily(std::vector<double> weights, std::vector<Eigen::Matrix2cd> unitaries,
                         double time)
    : weights_(std::move(weights)), unitaries_(std::move(unitaries)), time_(time) {
    if (weights_.empty() || weights_.size() != unitaries_.size()) {
        throw std::invalid_argument("KrausFamily: weights and unitaries must match and be non-empty");
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (w < 0.0) throw std::invalid_argument("KrausFamily: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("KrausFamily: weights must sum to 1");
    }
    for (const auto& u : unitaries_) {
        if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() > 1e-10) {
            throw std::invalid_argument("KrausFamily: non-unitary factor");
        }
    }
}

Eigen::Matrix2cd KrausFamily::kraus(std::size_t n) const {
    return std::sqrt(weights_[n]) * unitaries_[n];
}

double KrausFamily::completeness_defect() const {
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    for (std::size_t n = 0; n < size(); ++n) {
        const Eigen::Matrix2cd k = kraus(n);
        sum += k.adjoint() * k;
    }
    return (sum - Eigen::Matrix2cd::Identity()).norm();
}

KrausFamily kraus_family(const HermitianOperator& rho_env, const RiccatiSolution& sol,
                         const ModelParams& params, double t) {
    if (rho_env.dim() != sol.dim()) {
        throw std::invalid_argument("kraus_family: dimension mismatch");
    }
    check_density_flat(rho_env.matrix(), kJointTol, "kraus_family");

    std::vector<double> weights(static_cast<std::size_t>(sol.dim()));
    for (Eigen::Index n = 0; n < sol.dim(); ++n) {
        const Complex w = sol.basis.col(n).dot(rho_env.matrix() * sol.basis.col(n));
        if (w.real() < -1e-12) {
            throw std::invalid_argument("kraus_family: invalid density, negative weight");
        }
        weights[static_cast<std::size_t>(n)] = std::max(0.0, w.real());
    }
    return KrausFamily(std::move(weights), evolve_factored(sol, params, t), t);
}

QubitState kraus_apply(const KrausFamily& family, const QubitState& rho_q) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (std::size_t n = 0; n < family.size(); ++n) {
        out += family.weight(n) * family.unitary(n) * rho_q.rho() * family.unitary(n).adjoint();
    }
    return QubitState(out);
}

QubitState correlated_dynamics(const StructuredJoint& joint, const RiccatiSolution& sol,
                               const ModelParams& params, double t) {
    const ComplexMatrix flat = joint.materialize_flat();
    check_density_flat(flat, kJointTol, "correlated_dynamics");
    if (joint.env_factors.front().rows() != sol.dim()) {
        throw std::invalid_argument("correlated_dynamics: dimension mismatch");
    }

    const std::vector<Eigen::Matrix2cd> unitaries = evolve_factored(sol, params, t);
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (Eigen::Index n = 0; n < sol.dim(); ++n) {
        // M_n = Σ_ij ε_ij^n ρ_Q^i with ε_ij^n = γ_ij ⟨φ_n|ρ_E^j|φ_n⟩.
        Eigen::Matrix2cd m_n = Eigen::Matrix2cd::Zero();
        for (Eigen::Index i = 0; i < joint.gamma.rows(); ++i) {
            Complex coeff(0.0, 0.0);
            for (Eigen::Index j = 0; j < joint.gamma.cols(); ++j) {
                coeff += joint.gamma(i, j) *
                         sol.basis.col(n).dot(joint.env_factors[static_cast<std::size_t>(j)] *
                                              sol.basis.col(n));
            }
            m_n += coeff * joint.qubit_factors[static_cast<std::size_t>(i)];
        }
        const Eigen::Matrix2cd& u_n = unitaries[static_cast<std::size_t>(n)];
        out += u_n * m_n * u_n.adjoint();
    }
    return QubitState(out);
}

double operator_schmidt_defect(const ComplexMatrix& flat_u, Eigen::Index env_dim) {
    if (flat_u.rows() != 2 * env_dim || flat_u.cols() != 2 * env_dim) {
        throw std::invalid_argument("operator_schmidt_defect: dimension mismatch");
    }
    // Reshuffle U[(q,k),(q',l)] -> R[(q,q'),(k,l)]; the singular values of R
    // are the operator-Schmidt coefficients of the qubit ⊗ environment split.
    ComplexMatrix r(4, env_dim * env_dim);
    for (Eigen::Index q = 0; q < 2; ++q) {
        for (Eigen::Index qp = 0; qp < 2; ++qp) {
            for (Eigen::Index k = 0; k < env_dim; ++k) {
                for (Eigen::Index l = 0; l < env_dim; ++l) {
                    r(2 * q + qp, k * env_dim + l) = flat_u(q * env_dim + k, qp * env_dim + l);
                }
            }
        }
    }
    const ComplexMatrix gram = r * r.adjoint();  // 4x4, eigenvalues are Schmidt weights
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
    const RealVector weights = solver.eigenvalues().cwiseMax(0.0);
    const double total = weights.sum();
    if (total <= 0.0) {
        throw std::invalid_argument("operator_schmidt_defect: zero operator");
    }
    return 1.0 - weights.maxCoeff() / total;
}

double local_unitarity_defect(const RiccatiSolution& sol, const ModelParams& params, double t) {
    return operator_schmidt_defect(evolve_block(sol, params, t).flat(), sol.dim());
}

QubitState rotating_frame_map(const QubitState& rho_ti, const ModelParams& params, double t) {
    Eigen::Matrix2cd v_t = Eigen::Matrix2cd::Zero();
    v_t(0, 0) = std::exp(Complex(0.0, -0.5 * params.omega * t));
    v_t(1, 1) = std::exp(Complex(0.0, 0.5 * params.omega * t));
    return QubitState(v_t * rho_ti.rho() * v_t.adjoint());
}

ComplexMatrix ode_propagate_frame(const ModelParams& params, const EnvironmentPair& env,
                                  double t0, double t1, int steps,
                                  const ComplexMatrix& u_start) {
    if (steps < 1) throw std::invalid_argument("ode_propagate_frame: steps must be >= 1");
    const double h = (t1 - t0) / steps;
    const Complex minus_i(0.0, -1.0);
    const auto rhs = [&](double t, const ComplexMatrix& u) -> ComplexMatrix {
        return minus_i * (model::build_hqe_t(t, params, env).flat() * u);
    };

    ComplexMatrix u = u_start;
    for (int step = 0; step < steps; ++step) {
        const double t = t0 + step * h;
        const ComplexMatrix k1 = rhs(t, u);
        const ComplexMatrix k2 = rhs(t + 0.5 * h, u + (0.5 * h) * k1);
        const ComplexMatrix k3 = rhs(t + 0.5 * h, u + (0.5 * h) * k2);
        const ComplexMatrix k4 = rhs(t + h, u + h * k3);
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return u;
}

std::vector<QubitState> ode_oracle(const ModelParams& params, const EnvironmentPair& env,
                                   const JointState& joint, const std::vector<double>& t_grid) {
    model::validate_params(params);
    if (t_grid.empty()) return {};

    // The drive is a rotation of the t = 0 Hamiltonian, so the spectral norm
    // at t = 0 bounds it for all t.
    const linalg::HermEig eig =
        linalg::herm_eig(HermitianOperator(model::build_hqe_t(0.0, params, env).flat()));
    const double h_norm = std::max({1e-8, std::abs(eig.eigenvalues.minCoeff()),
                                    std::abs(eig.eigenvalues.maxCoeff())});

    const Eigen::Index d = env.dim();
    const ComplexMatrix rho0 = joint.block().flat();
    ComplexMatrix u_coarse = ComplexMatrix::Identity(2 * d, 2 * d);
    ComplexMatrix u_fine = u_coarse;

    std::vector<QubitState> states;
    states.reserve(t_grid.size());
    double t_prev = 0.0;
    for (double t_next : t_grid) {
        const double span = std::abs(t_next - t_prev);
        if (span > 0.0) {
            const int steps = std::max(4, static_cast<int>(std::ceil(span * h_norm / kStepScale)));
            u_coarse = ode_propagate_frame(params, env, t_prev, t_next, steps, u_coarse);
            u_fine = ode_propagate_frame(params, env, t_prev, t_next, 2 * steps, u_fine);
        }
        t_prev = t_next;

        const double drift =
            (u_fine.adjoint() * u_fine - ComplexMatrix::Identity(2 * d, 2 * d)).norm();
        if (drift > 1e-8) {
            std::ostringstream msg;
            msg << "ode_oracle: unitarity drift " << drift << " exceeds 1e-8";
            throw std::runtime_error(msg.str());
        }
        // The frame is unitary only to the drift bound above, so the reduced
        // densities carry a ~drift-sized trace defect; rescale it away. The
        // drift itself stays audited by the 1e-8 check.
        Eigen::Matrix2cd rho_c =
            linalg::partial_trace_env(BlockOperator::from_flat(u_coarse * rho0 * u_coarse.adjoint()));
        Eigen::Matrix2cd rho_f =
            linalg::partial_trace_env(BlockOperator::from_flat(u_fine * rho0 * u_fine.adjoint()));
        rho_c /= rho_c.trace().real();
        rho_f /= rho_f.trace().real();
        // Classical 4th-order scheme: the fine-grid error is about (coarse - fine)/15.
        const double estimate = (rho_c - rho_f).norm() / 15.0;
        if (estimate > 1e-6) {
            std::ostringstream msg;
            msg << "ode_oracle: step-size audit failure, Richardson estimate " << estimate;
            throw std::runtime_error(msg.str());
        }
        states.emplace_back(rho_f);
    }
    return states;
}

}  // namespace qdec::dynamics
