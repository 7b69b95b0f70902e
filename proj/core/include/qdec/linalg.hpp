// linalg.hpp - Dense complex linear algebra: Hermitian spectral calculus,
// matrix exponentials, Kronecker/partial-trace tensor structure.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qdec::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;

// True when every entry of a is finite (no NaN/Inf).
bool all_finite(const ComplexMatrix& a);

// Frobenius norm of (a - a†) relative to ||a||_F; 0 for the zero matrix.
double hermiticity_defect(const ComplexMatrix& a);

// Dense Hermitian operator. Construction rejects matrices whose
// anti-Hermitian part exceeds kHermitianTol relative Frobenius norm;
// accepted inputs are stored as (A + A†)/2.
class HermitianOperator {
public:
    explicit HermitianOperator(const ComplexMatrix& a);

    Eigen::Index dim() const { return mat_.rows(); }
    const ComplexMatrix& matrix() const { return mat_; }

private:
    ComplexMatrix mat_;
};

// 2x2 grid of equal-dimension square blocks acting on H ⊕ H ≅ C² ⊗ H.
class BlockOperator {
public:
    BlockOperator(ComplexMatrix b00, ComplexMatrix b01,
                  ComplexMatrix b10, ComplexMatrix b11);

    static BlockOperator identity(Eigen::Index block_dim);
    static BlockOperator zero(Eigen::Index block_dim);
    // Splits an even-dimension square matrix into four blocks.
    static BlockOperator from_flat(const ComplexMatrix& flat);

    Eigen::Index block_dim() const { return blocks_[0].rows(); }
    const ComplexMatrix& block(int row, int col) const;

    // Flattens to the 2·block_dim square matrix; from_flat inverts exactly.
    ComplexMatrix flat() const;

    BlockOperator adjoint() const;
    double off_diagonal_norm() const;

    friend BlockOperator operator*(const BlockOperator& a, const BlockOperator& b);
    friend BlockOperator operator+(const BlockOperator& a, const BlockOperator& b);
    friend BlockOperator operator-(const BlockOperator& a, const BlockOperator& b);

private:
    std::array<ComplexMatrix, 4> blocks_;  // row-major: 00, 01, 10, 11
};

struct HermEig {
    RealVector eigenvalues;  // ascending
    ComplexMatrix basis;     // unitary, columns are eigenvectors
};

// Spectral decomposition A = basis · diag(eigenvalues) · basis†.
HermEig herm_eig(const HermitianOperator& a);

// exp(-i·A·t) through the spectral decomposition of A. Unitary by construction.
ComplexMatrix exp_scaled(const HermitianOperator& a, double t);

// General-purpose exp(a) by scaling and squaring with a truncated Taylor
// series. Deliberately shares no code path with exp_scaled so the two can
// cross-check each other. Throws std::domain_error for extreme norms.
ComplexMatrix expm_oracle(const ComplexMatrix& a);

// Partial trace over the environment factor: entry (q, q') is Tr block(q, q').
Eigen::Matrix2cd partial_trace_env(const BlockOperator& m);

// Kronecker product, row-major convention: (a ⊗ b)[i·rb + k, j·cb + l] = a(i,j)·b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qdec::linalg
