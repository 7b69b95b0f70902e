// linalg.cpp - Implementation of the dense complex linear algebra layer.

#include "qdec/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace qdec::linalg {

bool all_finite(const ComplexMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const Complex& v = a(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        }
    }
    return true;
}

double hermiticity_defect(const ComplexMatrix& a) {
    const double scale = a.norm();
    if (scale == 0.0) return 0.0;
    return (a - a.adjoint().eval()).norm() / scale;
}

HermitianOperator::HermitianOperator(const ComplexMatrix& a) {
    if (a.rows() < 1 || a.rows() != a.cols()) {
        throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty");
    }
    if (!all_finite(a)) {
        throw std::invalid_argument("HermitianOperator: matrix has non-finite entries");
    }
    if (hermiticity_defect(a) > kHermitianTol) {
        throw std::invalid_argument("HermitianOperator: anti-Hermitian part exceeds tolerance");
    }
    mat_ = 0.5 * (a + a.adjoint().eval());
}

BlockOperator::BlockOperator(ComplexMatrix b00, ComplexMatrix b01,
                             ComplexMatrix b10, ComplexMatrix b11)
    : blocks_{std::move(b00), std::move(b01), std::move(b10), std::move(b11)} {
    const Eigen::Index d = blocks_[0].rows();
    if (d < 1) throw std::invalid_argument("BlockOperator: blocks must be non-empty");
    for (const auto& b : blocks_) {
        if (b.rows() != d || b.cols() != d) {
            throw std::invalid_argument("BlockOperator: all four blocks must be square with equal dimension");
        }
    }
}

BlockOperator BlockOperator::identity(Eigen::Index block_dim) {
    ComplexMatrix id = ComplexMatrix::Identity(block_dim, block_dim);
    ComplexMatrix z = ComplexMatrix::Zero(block_dim, block_dim);
    return BlockOperator(id, z, z, id);
}

BlockOperator BlockOperator::zero(Eigen::Index block_dim) {
    ComplexMatrix z = ComplexMatrix::Zero(block_dim, block_dim);
    return BlockOperator(z, z, z, z);
}

BlockOperator BlockOperator::from_flat(const ComplexMatrix& flat) {
    if (flat.rows() != flat.cols() || flat.rows() % 2 != 0 || flat.rows() < 2) {
        throw std::invalid_argument("BlockOperator::from_flat: need an even-dimension square matrix");
    }
    const Eigen::Index d = flat.rows() / 2;
    return BlockOperator(flat.block(0, 0, d, d), flat.block(0, d, d, d),
                         flat.block(d, 0, d, d), flat.block(d, d, d, d));
}

const ComplexMatrix& BlockOperator::block(int row, int col) const {
    return blocks_[static_cast<std::size_t>(2 * row + col)];
}

ComplexMatrix BlockOperator::flat() const {
    const Eigen::Index d = block_dim();
    ComplexMatrix out(2 * d, 2 * d);
    out.block(0, 0, d, d) = blocks_[0];
    out.block(0, d, d, d) = blocks_[1];
    out.block(d, 0, d, d) = blocks_[2];
    out.block(d, d, d, d) = blocks_[3];
    return out;
}

BlockOperator BlockOperator::adjoint() const {
    return BlockOperator(blocks_[0].adjoint(), blocks_[2].adjoint(),
                         blocks_[1].adjoint(), blocks_[3].adjoint());
}

double BlockOperator::off_diagonal_norm() const {
    return std::hypot(blocks_[1].norm(), blocks_[2].norm());
}

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
    return BlockOperator(a.blocks_[0] * b.blocks_[0] + a.blocks_[1] * b.blocks_[2],
                         a.blocks_[0] * b.blocks_[1] + a.blocks_[1] * b.blocks_[3],
                         a.blocks_[2] * b.blocks_[0] + a.blocks_[3] * b.blocks_[2],
                         a.blocks_[2] * b.blocks_[1] + a.blocks_[3] * b.blocks_[3]);
}

BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
    return BlockOperator(a.blocks_[0] + b.blocks_[0], a.blocks_[1] + b.blocks_[1],
                         a.blocks_[2] + b.blocks_[2], a.blocks_[3] + b.blocks_[3]);
}

BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
    return BlockOperator(a.blocks_[0] - b.blocks_[0], a.blocks_[1] - b.blocks_[1],
                         a.blocks_[2] - b.blocks_[2], a.blocks_[3] - b.blocks_[3]);
}

HermEig herm_eig(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("herm_eig: eigensolver failed to converge");
    }
    return HermEig{solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix exp_scaled(const HermitianOperator& a, double t) {
    const HermEig eig = herm_eig(a);
    ComplexVector phases(eig.eigenvalues.size());
    for (Eigen::Index n = 0; n < eig.eigenvalues.size(); ++n) {
        phases(n) = std::exp(Complex(0.0, -eig.eigenvalues(n) * t));
    }
    return eig.basis * phases.asDiagonal() * eig.basis.adjoint();
}

ComplexMatrix expm_oracle(const ComplexMatrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw std::invalid_argument("expm_oracle: matrix must be square and non-empty");
    }
    if (!all_finite(a)) {
        throw std::invalid_argument("expm_oracle: matrix has non-finite entries");
    }
    const double norm = a.norm();
    if (norm > 1024.0) {
        throw std::domain_error("expm_oracle: norm too large");
    }

    // Scale until ||a/2^s|| <= 0.25, Taylor to machine precision, square back.
    int squarings = 0;
    double scaled_norm = norm;
    while (scaled_norm > 0.25) {
        scaled_norm *= 0.5;
        ++squarings;
    }
    const ComplexMatrix b = a / std::ldexp(1.0, squarings);

    const Eigen::Index n = a.rows();
    ComplexMatrix sum = ComplexMatrix::Identity(n, n);
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    for (int k = 1; k <= 64; ++k) {
        term = (term * b) / static_cast<double>(k);
        sum += term;
        if (term.norm() <= 1e-17 * sum.norm()) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

Eigen::Matrix2cd partial_trace_env(const BlockOperator& m) {
    Eigen::Matrix2cd out;
    out(0, 0) = m.block(0, 0).trace();
    out(0, 1) = m.block(0, 1).trace();
    out(1, 0) = m.block(1, 0).trace();
    out(1, 1) = m.block(1, 1).trace();
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace qdec::linalg
