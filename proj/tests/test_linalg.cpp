#include <doctest.h>

#include "tcrelax/errors.hpp"
#include "tcrelax/linalg.hpp"

#include <algorithm>
#include <random>

using namespace tcrelax;

namespace {

Matrix random_matrix(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = cplx(d(rng), d(rng));
    return m;
}

} // namespace

TEST_CASE("kron matches the index formula") {
    const Matrix a = random_matrix(2, 1), b = random_matrix(3, 2);
    const Matrix k = kron(a, b);
    REQUIRE(k.rows() == 6);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j)
            for (Index r = 0; r < 3; ++r)
                for (Index s = 0; s < 3; ++s) CHECK(std::abs(k(3 * i + r, 3 * j + s) - a(i, j) * b(r, s)) < 1e-15);
    const Matrix ks = Matrix(kron(to_sparse(a), to_sparse(b)));
    CHECK((ks - k).norm() < 1e-14);
}

TEST_CASE("eig_general recovers a similarity-transformed diagonal") {
    const std::vector<cplx> want = {{-3.0, 0.0}, {-1.0, 2.0}, {-1.0, -2.0}, {0.0, 0.0}, {-0.5, 0.0}};
    Matrix d = Matrix::Zero(5, 5);
    for (Index k = 0; k < 5; ++k) d(k, k) = want[static_cast<std::size_t>(k)];
    const Matrix s = random_matrix(5, 7);
    const Matrix m = s * d * s.inverse();
    const EigenDecomposition dec = eig_general(m);
    for (const cplx w : want) {
        double best = 1e300;
        for (Index k = 0; k < 5; ++k) best = std::min(best, std::abs(dec.eigenvalues(k) - w));
        CHECK(best < 1e-10);
    }
    CHECK(dec.condition_estimate >= 1.0);
    CHECK(dec.max_relative_residual(m) < 1e-12);
}

TEST_CASE("eigenvalue polishing tightens an upper-triangular spectrum") {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = -1e-7;
    m(1, 1) = -1.0;
    m(2, 2) = -2.0;
    m(3, 3) = -5.0;
    m(0, 1) = 3.0;
    m(1, 3) = 2.0;
    m(2, 3) = 1.0;
    EigenDecomposition dec = eig_general(m);
    polish_eigenvalues(m, dec, 1e-6);
    for (Index k = 0; k < 4; ++k) {
        const cplx v = dec.eigenvalues(k);
        const double dist = std::min({std::abs(v + 1e-7), std::abs(v + 1.0), std::abs(v + 2.0), std::abs(v + 5.0)});
        CHECK(dist <= 1e-16 + 1e-15 * std::abs(v));
    }
}

TEST_CASE("hermitian eigensolver and null space") {
    const Matrix r = random_matrix(4, 3);
    const Matrix h = r + r.adjoint();
    CHECK(hermiticity_defect(h) < 1e-15);
    const HermitianEigen he = eig_hermitian(h);
    for (Index k = 0; k < 4; ++k) {
        const Vector v = he.vectors.col(k);
        CHECK((h * v - he.eigenvalues(k) * v).norm() < 1e-12);
    }
    Matrix rank2 = r.leftCols(2) * r.leftCols(2).adjoint();
    const auto ns = null_space(rank2, 1e-10);
    CHECK(ns.size() == 2);
    for (const Vector& v : ns) CHECK((rank2 * v).norm() < 1e-10);
}

TEST_CASE("dense routines refuse non-finite input") {
    Matrix m = Matrix::Identity(3, 3);
    m(1, 2) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(eig_general(m), NumericalError);
}
