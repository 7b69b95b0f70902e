// riccati.hpp - Riccati residuals, the closed-form commuting-case solver,
// block diagonalization, and the per-eigenvalue F_n/G_n frame analysis.

#pragma once

#include <vector>

#include "qdec/antilinear.hpp"
#include "qdec/linalg.hpp"
#include "qdec/model.hpp"

namespace qdec::riccati {

using linalg::AntilinearMap;
using linalg::BlockOperator;
using linalg::ComplexMatrix;
using linalg::RealVector;
using model::EnvironmentPair;
using model::ModelParams;

enum class Branch {
    PositiveF,     // positive root of α·x² + 2λ·x - α = 0
    NegativeFbar,  // negative root; x̄_n = -1/x_n
};

// Spectral solution X = Σ x_n |φ_n⟩⟨φ_n| over the joint eigenbasis of (H_E, V).
struct RiccatiSolution {
    ComplexMatrix basis;    // unitary, columns |φ_n⟩
    RealVector e_h_env;     // E_n
    RealVector e_coupling;  // V_n
    RealVector x;           // x_n, sign fixed by branch
    Branch branch = Branch::PositiveF;
    bool alpha_zero = false;  // α = 0 degenerate case, X = 0

    Eigen::Index dim() const { return basis.rows(); }
    ComplexMatrix materialize() const;  // Σ x_n |φ_n⟩⟨φ_n|
};

struct JointSpectrum {
    ComplexMatrix basis;
    RealVector e_h_env;
    RealVector e_coupling;
};

// Common eigenbasis of a commuting pair. Degenerate H_E eigenspaces are
// resolved by re-diagonalizing the projection of V inside each of them.
// Throws when the certified commutator residual is above tolerance.
JointSpectrum joint_diagonalize(const EnvironmentPair& env);

// Branch value at eigenvalue λ of V_β; stable against cancellation for
// |λ| >> |α|. PositiveF returns the positive root for either sign of α.
double branch_value(Branch branch, double alpha, double lambda);

// Closed-form solution of α·X² + X(H_+ + β) - (H_- - β)X - α = 0 for a
// commuting environment. α = 0 yields the flagged zero solution on
// PositiveF; the NegativeFbar branch has no finite α = 0 limit.
RiccatiSolution solve_commuting(const EnvironmentPair& env, const ModelParams& params,
                                Branch branch);

// R_H[X] = X·B·X + X·A - C·X - B† for h = [[A, B], [B†, C]].
ComplexMatrix riccati_residual_linear(const BlockOperator& h, const ComplexMatrix& x);

struct AntilinearResidual {
    ComplexMatrix linear_part;      // M·conj(B)·conj(M) - B†
    ComplexMatrix antilinear_part;  // M·conj(A) - C·M

    double norm() const { return std::hypot(linear_part.norm(), antilinear_part.norm()); }
};

// Residual of an antilinear candidate τ = (conjugate, then M); both parts
// vanish exactly when R_h[τ] = 0. Requires τ involutive.
AntilinearResidual riccati_residual_antilinear(const BlockOperator& h, const AntilinearMap& tau);

struct SxPair {
    BlockOperator sx;      // [[I, -X], [X, I]]
    BlockOperator sx_inv;  // diag(g(X), g(X))·sx†, g(λ) = 1/(1+λ²)
};

// Similarity matrix S_X and its closed-form inverse for Hermitian X.
SxPair build_sx(const ComplexMatrix& x_hermitian);

// Literal similarity product S_X⁻¹·h·S_X for a (not necessarily Hermitian)
// Riccati solution X, with S_X = [[I, -X†], [X, I]]. Refuses, reporting the
// measured value, when the Riccati residual of (h, x) is above tolerance.
BlockOperator block_diagonalize(const BlockOperator& h, const ComplexMatrix& x,
                                double tolerance_scale = 1.0);

// Per-eigenvalue 2x2 data: the Riccati similarity frame F_n, the eigenvector
// frame G_n, and the local generator H_n with its eigenvalues h_n^±.
struct LocalFrame {
    Eigen::Index index = 0;
    double e_h_env = 0.0;     // E_n
    double e_coupling = 0.0;  // V_n
    double x = 0.0;           // x_n
    double x_bar = 0.0;       // -1/x_n
    Eigen::Matrix2d f_n;      // [[1, -x_n], [x_n, 1]], det = 1 + x_n²
    Eigen::Matrix2d g_n;      // [[-x̄_n, -x_n], [1, 1]]
    Eigen::Matrix2d h_n;      // [[E_n + V_n + β, α], [α, E_n - V_n - β]]
    double h_plus = 0.0;      // (E_n + V_n + β) + α·x_n
    double h_minus = 0.0;     // (E_n - V_n - β) - α·x_n
};

// Optional unitary rescaling F_n → F_n/√det(F_n); off by default since the
// closed-form inverse assumes the unnormalized convention.
std::vector<LocalFrame> local_frames(const RiccatiSolution& sol, const ModelParams& params,
                                     bool normalize_f = false);

}  // namespace qdec::riccati
