// test_linalg.cpp - Unit tests for the dense linear algebra layer.

#include <cmath>

#include <doctest.h>

#include "qdec/linalg.hpp"
#include "test_support.hpp"

using namespace qdec;
using linalg::BlockOperator;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianOperator;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// Entrywise Kronecker definition, independent of the implementation.
ComplexMatrix kron_index_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
        }
    }
    return out;
}

}  // namespace

TEST_CASE("kron: identity and diagonal cases") {
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    CHECK((linalg::kron(i2, i2) - ComplexMatrix::Identity(4, 4)).norm() == 0.0);

    ComplexMatrix diag(2, 2);
    diag << 1, 0, 0, -1;
    const ComplexMatrix product = linalg::kron(pauli_z(), diag);
    Eigen::Vector4cd expected(1, -1, -1, 1);
    CHECK((product - ComplexMatrix(expected.asDiagonal())).norm() == 0.0);
}

TEST_CASE("kron: matches the index-loop oracle on random input") {
    std::mt19937_64 rng(11);
    const ComplexMatrix a = test::random_matrix(rng, 3, 3);
    CHECK((linalg::kron(pauli_x(), a) - kron_index_oracle(pauli_x(), a)).norm() == 0.0);
    const ComplexMatrix b = test::random_matrix(rng, 2, 4);
    const ComplexMatrix c = test::random_matrix(rng, 3, 2);
    CHECK((linalg::kron(b, c) - kron_index_oracle(b, c)).norm() == 0.0);
}

TEST_CASE("HermitianOperator: accepts Hermitian input, rejects the rest") {
    ComplexMatrix good(2, 2);
    good << 1.0, Complex(0.0, 2.0), Complex(0.0, -2.0), 3.0;
    CHECK_NOTHROW(HermitianOperator{good});

    ComplexMatrix bad = good;
    bad(0, 1) = Complex(0.0, 2.1);
    CHECK_THROWS_AS(HermitianOperator{bad}, std::invalid_argument);

    ComplexMatrix nan = good;
    nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(HermitianOperator{nan}, std::invalid_argument);

    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(HermitianOperator{test::random_matrix(rng, 2, 3)}, std::invalid_argument);
}

TEST_CASE("herm_eig: diagonal input is sorted ascending") {
    ComplexMatrix m(2, 2);
    m << 3, 0, 0, 1;
    const linalg::HermEig eig = linalg::herm_eig(HermitianOperator(m));
    CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(3.0));
    CHECK((eig.basis.adjoint() * eig.basis - ComplexMatrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("herm_eig: 2x2 with characteristic polynomial computed by hand") {
    // [[2,1],[1,2]] has lambda^2 - 4 lambda + 3 = 0, roots 1 and 3.
    ComplexMatrix m(2, 2);
    m << 2, 1, 1, 2;
    const linalg::HermEig eig = linalg::herm_eig(HermitianOperator(m));
    CHECK(eig.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues(1) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("herm_eig: random 8x8 reconstruction oracle") {
    std::mt19937_64 rng(17);
    const ComplexMatrix a = test::random_hermitian(rng, 8);
    const HermitianOperator op(a);
    const linalg::HermEig eig = linalg::herm_eig(op);
    const ComplexMatrix rebuilt =
        eig.basis * eig.eigenvalues.cast<Complex>().asDiagonal() * eig.basis.adjoint();
    CHECK((rebuilt - op.matrix()).norm() <= 1e-10 * op.matrix().norm());
    CHECK((eig.basis.adjoint() * eig.basis - ComplexMatrix::Identity(8, 8)).norm() <= 1e-12);
}

TEST_CASE("exp_scaled: t = 0 gives the identity") {
    std::mt19937_64 rng(23);
    const HermitianOperator a(test::random_hermitian(rng, 5));
    CHECK((linalg::exp_scaled(a, 0.0) - ComplexMatrix::Identity(5, 5)).norm() <= 1e-14);
}

TEST_CASE("exp_scaled: sigma_z at t = pi is -I") {
    const ComplexMatrix u = linalg::exp_scaled(HermitianOperator(pauli_z()), M_PI);
    CHECK((u + ComplexMatrix::Identity(2, 2)).norm() <= 1e-13);
}

TEST_CASE("exp_scaled: agrees with the series oracle and inverts cleanly") {
    std::mt19937_64 rng(29);
    const ComplexMatrix a = test::random_hermitian(rng, 6);
    const HermitianOperator op(a);
    const double t = 0.7;
    const ComplexMatrix via_spectrum = linalg::exp_scaled(op, t);
    const ComplexMatrix via_series = linalg::expm_oracle(Complex(0.0, -t) * op.matrix());
    CHECK((via_spectrum - via_series).norm() <= 1e-10);
    CHECK((via_spectrum * linalg::exp_scaled(op, -t) - ComplexMatrix::Identity(6, 6)).norm() <=
          1e-10);
}

TEST_CASE("expm_oracle: zero and nilpotent special cases") {
    CHECK((linalg::expm_oracle(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() ==
          0.0);

    ComplexMatrix nilpotent(2, 2);
    nilpotent << 0, 1, 0, 0;
    ComplexMatrix expected(2, 2);
    expected << 1, 1, 0, 1;
    CHECK((linalg::expm_oracle(nilpotent) - expected).norm() <= 1e-15);
}

TEST_CASE("expm_oracle: refuses extreme norms") {
    const ComplexMatrix huge = 1e5 * ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(linalg::expm_oracle(huge), std::domain_error);
}

TEST_CASE("BlockOperator: flatten and split is the identity") {
    std::mt19937_64 rng(31);
    const ComplexMatrix flat = test::random_matrix(rng, 10, 10);
    const BlockOperator split = BlockOperator::from_flat(flat);
    CHECK((split.flat() - flat).norm() == 0.0);

    const BlockOperator direct(test::random_matrix(rng, 3, 3), test::random_matrix(rng, 3, 3),
                               test::random_matrix(rng, 3, 3), test::random_matrix(rng, 3, 3));
    const BlockOperator round = BlockOperator::from_flat(direct.flat());
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            CHECK((round.block(r, c) - direct.block(r, c)).norm() == 0.0);
        }
    }
}

TEST_CASE("BlockOperator: rejects mismatched blocks") {
    std::mt19937_64 rng(37);
    CHECK_THROWS_AS(BlockOperator(test::random_matrix(rng, 2, 2), test::random_matrix(rng, 3, 3),
                                  test::random_matrix(rng, 2, 2), test::random_matrix(rng, 2, 2)),
                    std::invalid_argument);
}

TEST_CASE("partial_trace_env: product state returns the qubit factor") {
    std::mt19937_64 rng(41);
    const ComplexMatrix rho_q = test::random_density(rng, 2);
    const ComplexMatrix rho_e = test::random_density(rng, 5);
    const BlockOperator joint = BlockOperator::from_flat(linalg::kron(rho_q, rho_e));
    CHECK((linalg::partial_trace_env(joint) - Eigen::Matrix2cd(rho_q)).norm() <= 1e-14);
}

TEST_CASE("partial_trace_env: identity block operator scales with the dimension") {
    const Eigen::Index d = 7;
    const Eigen::Matrix2cd traced = linalg::partial_trace_env(BlockOperator::identity(d));
    CHECK((traced - static_cast<double>(d) * Eigen::Matrix2cd::Identity()).norm() == 0.0);
}

TEST_CASE("partial_trace_env: index-summation oracle, trace preservation, positivity") {
    std::mt19937_64 rng(43);
    const Eigen::Index d = 6;
    const ComplexMatrix rho = test::random_density(rng, 2 * d);
    const BlockOperator joint = BlockOperator::from_flat(rho);
    const Eigen::Matrix2cd traced = linalg::partial_trace_env(joint);

    Eigen::Matrix2cd oracle = Eigen::Matrix2cd::Zero();
    for (Eigen::Index q = 0; q < 2; ++q) {
        for (Eigen::Index qp = 0; qp < 2; ++qp) {
            for (Eigen::Index k = 0; k < d; ++k) oracle(q, qp) += rho(q * d + k, qp * d + k);
        }
    }
    CHECK((traced - oracle).norm() == 0.0);
    CHECK(std::abs(traced.trace() - rho.trace()) <= 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(traced);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
}
