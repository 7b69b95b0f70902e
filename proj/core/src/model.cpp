// model.cpp - Construction of the model Hamiltonian family.

#include "qdec/model.hpp"

#include <cmath>
#include <stdexcept>

namespace qdec::model {

using linalg::Complex;

namespace {

constexpr int kMaxSpinBathSites = 12;

void check_env_dim(const ModelParams& params, const EnvironmentPair& env) {
    validate_params(params);
    if (env.dim() != params.env_dim) {
        throw std::invalid_argument("model: environment dimension does not match params.env_dim");
    }
}

}  // namespace

void validate_params(const ModelParams& params) {
    if (params.env_dim < 1) {
        throw std::invalid_argument("ModelParams: env_dim must be >= 1");
    }
    if (!std::isfinite(params.alpha) || !std::isfinite(params.beta) || !std::isfinite(params.omega)) {
        throw std::invalid_argument("ModelParams: alpha, beta, omega must be finite");
    }
}

EnvironmentPair::EnvironmentPair(HermitianOperator h_env, HermitianOperator coupling)
    : h_env_(std::move(h_env)), coupling_(std::move(coupling)) {
    if (h_env_.dim() != coupling_.dim()) {
        throw std::invalid_argument("EnvironmentPair: H_E and V must share dimension");
    }
    const ComplexMatrix& he = h_env_.matrix();
    const ComplexMatrix& v = coupling_.matrix();
    commutator_residual_ = (he * v - v * he).norm();
    commuting_ = commutator_residual_ <= 1e-10 * he.norm() * v.norm();
}

ComplexMatrix EnvironmentPair::h_plus() const {
    return h_env_.matrix() + coupling_.matrix();
}

ComplexMatrix EnvironmentPair::h_minus() const {
    return h_env_.matrix() - coupling_.matrix();
}

EnvironmentPair spin_bath(const std::vector<double>& omegas,
                          const std::vector<double>& couplings) {
    const std::size_t sites = omegas.size();
    if (sites != couplings.size()) {
        throw std::invalid_argument("spin_bath: omegas and couplings must have equal length");
    }
    if (sites < 1) {
        throw std::invalid_argument("spin_bath: need at least one site");
    }
    if (sites > kMaxSpinBathSites) {
        throw std::invalid_argument("spin_bath: more than 12 sites exceeds desk scale");
    }

    const Eigen::Index dim = Eigen::Index{1} << sites;
    Eigen::VectorXd he_diag = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd v_diag = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        for (std::size_t n = 0; n < sites; ++n) {
            // Site n is the n-th Kronecker factor from the left, so it owns
            // bit (sites-1-n) of the basis index; bit 0 of a site ↔ σ₃ = +1.
            const int bit = static_cast<int>((idx >> (sites - 1 - n)) & 1);
            const double sign = bit == 0 ? 1.0 : -1.0;
            he_diag(idx) += omegas[n] * sign;
            v_diag(idx) += couplings[n] * sign;
        }
    }
    ComplexMatrix he = he_diag.cast<Complex>().asDiagonal();
    ComplexMatrix v = v_diag.cast<Complex>().asDiagonal();
    return EnvironmentPair(HermitianOperator(he), HermitianOperator(v));
}

BlockOperator build_hqe(const ModelParams& params, const EnvironmentPair& env) {
    check_env_dim(params, env);
    const Eigen::Index d = env.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    return BlockOperator(env.h_plus() + params.beta * id, params.alpha * id,
                         params.alpha * id, env.h_minus() - params.beta * id);
}

BlockOperator build_hqe_t(double t, const ModelParams& params, const EnvironmentPair& env) {
    check_env_dim(params, env);
    const Eigen::Index d = env.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const Complex drive = params.alpha * std::exp(Complex(0.0, -params.omega * t));
    return BlockOperator(env.h_plus() + params.beta * id, drive * id,
                         std::conj(drive) * id, env.h_minus() - params.beta * id);
}

BlockOperator build_ht(double t, const ModelParams& params, const EnvironmentPair& env) {
    check_env_dim(params, env);
    const Eigen::Index d = env.dim();
    const ComplexMatrix v_beta =
        env.coupling().matrix() + params.beta * ComplexMatrix::Identity(d, d);
    const Complex z = std::exp(Complex(0.0, -2.0 * params.alpha * t));
    return BlockOperator(env.h_env().matrix(), std::conj(z) * v_beta,
                         z * v_beta, env.h_env().matrix());
}

HbarPair build_hbar(const ModelParams& params, const EnvironmentPair& env) {
    check_env_dim(params, env);
    const Eigen::Index d = env.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex i_unit(0.0, 1.0);

    BlockOperator u(inv_sqrt2 * id, inv_sqrt2 * i_unit * id,
                    inv_sqrt2 * i_unit * id, inv_sqrt2 * id);
    BlockOperator hbar = u.adjoint() * build_hqe(params, env) * u;
    return HbarPair{std::move(u), std::move(hbar)};
}

}  // namespace qdec::model
