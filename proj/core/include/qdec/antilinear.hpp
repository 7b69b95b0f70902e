// antilinear.hpp - Antilinear maps (conjugate then multiply) and operators
// with mixed linear/antilinear parts.

#pragma once

#include "qdec/linalg.hpp"

namespace qdec::linalg {

// Antilinear map ψ ↦ M·conj(ψ). M = I is the conjugation operator K.
class AntilinearMap {
public:
    explicit AntilinearMap(ComplexMatrix m);

    // The conjugation operator K (M = I): Hermitian, unitary, involutive.
    static AntilinearMap conjugation(Eigen::Index dim);

    Eigen::Index dim() const { return m_.rows(); }
    const ComplexMatrix& factor() const { return m_; }

    // ||M·conj(M) - I||_F <= tol, i.e. τ² = 𝕀.
    bool is_involution(double tol = kHermitianTol) const;

    ComplexVector apply(const ComplexVector& psi) const;

private:
    ComplexMatrix m_;
};

// Linear matrix of τ·A·τ⁻¹. For M = I this is conj(A), which equals Aᵀ on
// Hermitian A. Throws std::invalid_argument when M is singular.
ComplexMatrix antilinear_conjugate(const AntilinearMap& tau, const ComplexMatrix& a);

// Operator ψ ↦ L·ψ + M·conj(ψ). Closed under composition and adjoint, which
// is what makes residuals of antilinear Riccati candidates computable.
struct MixedOperator {
    ComplexMatrix linear;      // L
    ComplexMatrix antilinear;  // M

    MixedOperator(ComplexMatrix l, ComplexMatrix m);

    static MixedOperator purely_linear(ComplexMatrix l);
    static MixedOperator purely_antilinear(ComplexMatrix m);

    Eigen::Index dim() const { return linear.rows(); }
    ComplexVector apply(const ComplexVector& psi) const;
};

// (L1,M1)∘(L2,M2) = (L1·L2 + M1·conj(M2), L1·M2 + M1·conj(L2)).
MixedOperator mixed_compose(const MixedOperator& x, const MixedOperator& y);

// Adjoint of (L,M) is (L†, Mᵀ), with the antilinear-part adjoint defined by
// ⟨T†φ, ψ⟩ = ⟨Tψ, φ⟩.
MixedOperator mixed_adjoint(const MixedOperator& x);

}  // namespace qdec::linalg
