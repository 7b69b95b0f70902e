// antilinear.cpp - Antilinear and mixed-operator algebra.

#include "qdec/antilinear.hpp"

#include <stdexcept>

namespace qdec::linalg {

AntilinearMap::AntilinearMap(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
        throw std::invalid_argument("AntilinearMap: factor must be square and non-empty");
    }
    if (!all_finite(m_)) {
        throw std::invalid_argument("AntilinearMap: factor has non-finite entries");
    }
}

AntilinearMap AntilinearMap::conjugation(Eigen::Index dim) {
    return AntilinearMap(ComplexMatrix::Identity(dim, dim));
}

bool AntilinearMap::is_involution(double tol) const {
    const ComplexMatrix square = m_ * m_.conjugate();
    return (square - ComplexMatrix::Identity(dim(), dim())).norm() <= tol;
}

ComplexVector AntilinearMap::apply(const ComplexVector& psi) const {
    return m_ * psi.conjugate();
}

ComplexMatrix antilinear_conjugate(const AntilinearMap& tau, const ComplexMatrix& a) {
    if (a.rows() != tau.dim() || a.cols() != tau.dim()) {
        throw std::invalid_argument("antilinear_conjugate: dimension mismatch");
    }
    // τ A τ⁻¹ = M·conj(A)·M⁻¹ with τ⁻¹: φ ↦ conj(M)⁻¹·conj(φ). For an
    // involution conj(M) = M⁻¹, so the inverse factor is conj(M) exactly.
    if (tau.is_involution()) {
        return tau.factor() * a.conjugate() * tau.factor().conjugate();
    }
    Eigen::FullPivLU<ComplexMatrix> lu(tau.factor());
    if (!lu.isInvertible()) {
        throw std::invalid_argument("invalid antilinear map: singular factor");
    }
    return tau.factor() * a.conjugate() * lu.inverse();
}

MixedOperator::MixedOperator(ComplexMatrix l, ComplexMatrix m)
    : linear(std::move(l)), antilinear(std::move(m)) {
    if (linear.rows() < 1 || linear.rows() != linear.cols() ||
        antilinear.rows() != linear.rows() || antilinear.cols() != linear.cols()) {
        throw std::invalid_argument("MixedOperator: parts must be square with equal dimension");
    }
}

MixedOperator MixedOperator::purely_linear(ComplexMatrix l) {
    ComplexMatrix z = ComplexMatrix::Zero(l.rows(), l.cols());
    return MixedOperator(std::move(l), std::move(z));
}

MixedOperator MixedOperator::purely_antilinear(ComplexMatrix m) {
    ComplexMatrix z = ComplexMatrix::Zero(m.rows(), m.cols());
    return MixedOperator(std::move(z), std::move(m));
}

ComplexVector MixedOperator::apply(const ComplexVector& psi) const {
    return linear * psi + antilinear * psi.conjugate();
}

MixedOperator mixed_compose(const MixedOperator& x, const MixedOperator& y) {
    if (x.dim() != y.dim()) {
        throw std::invalid_argument("mixed_compose: dimension mismatch");
    }
    return MixedOperator(x.linear * y.linear + x.antilinear * y.antilinear.conjugate(),
                         x.linear * y.antilinear + x.antilinear * y.linear.conjugate());
}

MixedOperator mixed_adjoint(const MixedOperator& x) {
    return MixedOperator(x.linear.adjoint(), x.antilinear.transpose());
}

}  // namespace qdec::linalg
