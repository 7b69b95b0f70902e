// riccati.cpp - Commuting-case Riccati solver and block diagonalization.

#include "qdec/riccati.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qdec/linalg.hpp"

namespace qdec::riccati {

using linalg::Complex;
using linalg::HermEig;
using linalg::HermitianOperator;
using linalg::herm_eig;

ComplexMatrix RiccatiSolution::materialize() const {
    return basis * x.cast<Complex>().asDiagonal() * basis.adjoint();
}

JointSpectrum joint_diagonalize(const EnvironmentPair& env) {
    if (!env.commuting()) {
        std::ostringstream msg;
        msg << "joint_diagonalize: commutator residual " << env.commutator_residual()
            << " above tolerance";
        throw std::invalid_argument(msg.str());
    }

    HermEig he = herm_eig(env.h_env());
    const Eigen::Index d = env.dim();
    ComplexMatrix basis = he.basis;
    RealVector e_h_env = he.eigenvalues;
    RealVector e_coupling(d);

    // [H_E, V] = 0 makes V block diagonal across the eigenspaces of H_E;
    // re-diagonalize V inside each (possibly degenerate) eigenspace.
    const double scale = std::max(1.0, std::abs(e_h_env(d - 1)) + std::abs(e_h_env(0)));
    const double gap_tol = 1e-9 * scale;
    Eigen::Index start = 0;
    while (start < d) {
        Eigen::Index stop = start + 1;
        while (stop < d && e_h_env(stop) - e_h_env(stop - 1) <= gap_tol) ++stop;
        const Eigen::Index width = stop - start;
        const ComplexMatrix sub_basis = basis.middleCols(start, width);
        const ComplexMatrix v_sub = sub_basis.adjoint() * env.coupling().matrix() * sub_basis;
        if (width == 1) {
            e_coupling(start) = v_sub(0, 0).real();
        } else {
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> sub_solver(
                0.5 * (v_sub + v_sub.adjoint().eval()));
            if (sub_solver.info() != Eigen::Success) {
                throw std::runtime_error("joint_diagonalize: subspace eigensolver failed");
            }
            basis.middleCols(start, width) = sub_basis * sub_solver.eigenvectors();
            e_coupling.segment(start, width) = sub_solver.eigenvalues();
        }
        start = stop;
    }
    return JointSpectrum{std::move(basis), std::move(e_h_env), std::move(e_coupling)};
}

double branch_value(Branch branch, double alpha, double lambda) {
    if (alpha == 0.0) {
        throw std::domain_error("branch_value: undefined at alpha = 0");
    }
    const double s = std::hypot(lambda, alpha);
    const double mu = lambda * (alpha > 0.0 ? 1.0 : -1.0);
    // Positive root of α·x² + 2λ·x - α = 0 in a cancellation-free form.
    const double positive = mu >= 0.0 ? std::abs(alpha) / (s + mu) : (s - mu) / std::abs(alpha);
    return branch == Branch::PositiveF ? positive : -1.0 / positive;
}

RiccatiSolution solve_commuting(const EnvironmentPair& env, const ModelParams& params,
                                Branch branch) {
    model::validate_params(params);
    if (env.dim() != params.env_dim) {
        throw std::invalid_argument("solve_commuting: environment dimension mismatch");
    }
    if (!env.commuting()) {
        throw std::invalid_argument("commuting solver inapplicable: [H_E, V] != 0");
    }

    JointSpectrum joint = joint_diagonalize(env);
    RiccatiSolution sol;
    sol.basis = std::move(joint.basis);
    sol.e_h_env = std::move(joint.e_h_env);
    sol.e_coupling = std::move(joint.e_coupling);
    sol.branch = branch;

    if (params.alpha == 0.0) {
        if (branch == Branch::NegativeFbar) {
            throw std::domain_error(
                "solve_commuting: the NegativeFbar branch diverges as alpha -> 0");
        }
        sol.x = RealVector::Zero(env.dim());
        sol.alpha_zero = true;
        return sol;
    }

    sol.x.resize(env.dim());
    for (Eigen::Index n = 0; n < env.dim(); ++n) {
        sol.x(n) = branch_value(branch, params.alpha, sol.e_coupling(n) + params.beta);
    }
    return sol;
}

ComplexMatrix riccati_residual_linear(const BlockOperator& h, const ComplexMatrix& x) {
    const Eigen::Index d = h.block_dim();
    if (x.rows() != d || x.cols() != d) {
        throw std::invalid_argument("riccati_residual_linear: dimension mismatch");
    }
    const ComplexMatrix& a = h.block(0, 0);
    const ComplexMatrix& b = h.block(0, 1);
    const ComplexMatrix& b_dag = h.block(1, 0);
    const ComplexMatrix& c = h.block(1, 1);
    return x * b * x + x * a - c * x - b_dag;
}

AntilinearResidual riccati_residual_antilinear(const BlockOperator& h, const AntilinearMap& tau) {
    if (tau.dim() != h.block_dim()) {
        throw std::invalid_argument("riccati_residual_antilinear: dimension mismatch");
    }
    if (!tau.is_involution()) {
        throw std::invalid_argument("invalid antilinear map: candidate must be involutive");
    }
    const ComplexMatrix& m = tau.factor();
    const ComplexMatrix& a = h.block(0, 0);
    const ComplexMatrix& b = h.block(0, 1);
    const ComplexMatrix& b_dag = h.block(1, 0);
    const ComplexMatrix& c = h.block(1, 1);
    return AntilinearResidual{m * b.conjugate() * m.conjugate() - b_dag,
                              m * a.conjugate() - c * m};
}

SxPair build_sx(const ComplexMatrix& x_hermitian) {
    const HermitianOperator x_op(x_hermitian);  // validates Hermiticity
    const Eigen::Index d = x_op.dim();
    const ComplexMatrix& x = x_op.matrix();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);

    BlockOperator sx(id, -x, x, id);

    // g(X) = (I + X²)⁻¹ applied spectrally; 1 + λ² never vanishes for real λ.
    HermEig eig = herm_eig(x_op);
    RealVector g_values(d);
    for (Eigen::Index n = 0; n < d; ++n) {
        g_values(n) = 1.0 / (1.0 + eig.eigenvalues(n) * eig.eigenvalues(n));
    }
    const ComplexMatrix g =
        eig.basis * g_values.cast<Complex>().asDiagonal() * eig.basis.adjoint();

    BlockOperator sx_adj = sx.adjoint();
    BlockOperator sx_inv(g * sx_adj.block(0, 0), g * sx_adj.block(0, 1),
                         g * sx_adj.block(1, 0), g * sx_adj.block(1, 1));
    return SxPair{std::move(sx), std::move(sx_inv)};
}

BlockOperator block_diagonalize(const BlockOperator& h, const ComplexMatrix& x,
                                double tolerance_scale) {
    const double residual = riccati_residual_linear(h, x).norm();
    const double tolerance = tolerance_scale * 1e-10 * (1.0 + h.flat().norm());
    if (residual > tolerance) {
        std::ostringstream msg;
        msg << "block_diagonalize: Riccati residual " << residual << " above tolerance "
            << tolerance << "; refusing";
        throw std::invalid_argument(msg.str());
    }

    // S_X = [[I, -X†], [X, I]] with the closed-form inverse
    // diag((I+X†X)⁻¹, (I+XX†)⁻¹)·S_X†, valid for any X.
    const Eigen::Index d = h.block_dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    BlockOperator sx(id, -x.adjoint(), x, id);
    const ComplexMatrix upper_inv = (id + x.adjoint() * x).inverse();
    const ComplexMatrix lower_inv = (id + x * x.adjoint()).inverse();
    BlockOperator sx_adj = sx.adjoint();
    BlockOperator sx_inv(upper_inv * sx_adj.block(0, 0), upper_inv * sx_adj.block(0, 1),
                         lower_inv * sx_adj.block(1, 0), lower_inv * sx_adj.block(1, 1));
    return sx_inv * h * sx;
}

std::vector<LocalFrame> local_frames(const RiccatiSolution& sol, const ModelParams& params,
                                     bool normalize_f) {
    if (sol.alpha_zero) {
        throw std::domain_error("local_frames: both branch values are required, alpha = 0 has none");
    }
    std::vector<LocalFrame> frames;
    frames.reserve(static_cast<std::size_t>(sol.dim()));
    for (Eigen::Index n = 0; n < sol.dim(); ++n) {
        LocalFrame frame;
        frame.index = n;
        frame.e_h_env = sol.e_h_env(n);
        frame.e_coupling = sol.e_coupling(n);
        frame.x = sol.x(n);
        frame.x_bar = -1.0 / sol.x(n);

        frame.f_n << 1.0, -frame.x, frame.x, 1.0;
        if (normalize_f) frame.f_n /= std::sqrt(1.0 + frame.x * frame.x);
        frame.g_n << -frame.x_bar, -frame.x, 1.0, 1.0;

        const double e_plus = frame.e_h_env + frame.e_coupling;
        const double e_minus = frame.e_h_env - frame.e_coupling;
        frame.h_n << e_plus + params.beta, params.alpha, params.alpha, e_minus - params.beta;
        frame.h_plus = (e_plus + params.beta) + params.alpha * frame.x;
        frame.h_minus = (e_minus - params.beta) - params.alpha * frame.x;
        frames.push_back(frame);
    }
    return frames;
}

}  // namespace qdec::riccati
