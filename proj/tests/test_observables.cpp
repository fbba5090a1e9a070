#include <doctest.h>

#include "tcrelax/errors.hpp"
#include "tcrelax/observables.hpp"

#include <cmath>

using namespace tcrelax;

namespace {

DensityMatrix atomic(std::initializer_list<cplx> amplitudes) {
    Vector psi(4);
    Index k = 0;
    for (const cplx a : amplitudes) psi(k++) = a;
    return DensityMatrix::pure(psi.normalized(), atomic_space());
}

} // namespace

TEST_CASE("entropy of textbook states in bits") {
    CHECK(von_neumann_entropy(Matrix::Identity(4, 4) / 4.0) == doctest::Approx(2.0));
    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = 0.25;
    q(1, 1) = 0.75;
    const double h = -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75));
    CHECK(von_neumann_entropy(q) == doctest::Approx(h).epsilon(1e-14));
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = 1.1;
    bad(1, 1) = -0.1;
    CHECK_THROWS_AS(von_neumann_entropy(bad), StateValidityError);
}

TEST_CASE("mutual information: Bell state 2 bits, product 0, classical mixture 1") {
    CHECK(mutual_information(atomic({1.0, 0.0, 0.0, 1.0})) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(mutual_information(atomic({0.5, 0.5, 0.5, 0.5}))) < 1e-12);
    Matrix mix = Matrix::Zero(4, 4);
    mix(0, 0) = 0.5;
    mix(3, 3) = 0.5;
    CHECK(mutual_information(DensityMatrix(mix, atomic_space())) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mutual information is computed on the unit-trace state") {
    Matrix mix = Matrix::Zero(4, 4);
    mix(0, 0) = 0.5;
    mix(3, 3) = 0.5;
    const double ref = mutual_information(DensityMatrix(mix, atomic_space()));
    const DensityMatrix drifted = DensityMatrix::unchecked(mix * (1.0 + 1e-7), atomic_space());
    CHECK(mutual_information(drifted) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("partial traces") {
    const SystemSpace s = make_space(3);
    // |e g> (x) (|0> + |2>)/sqrt2
    const Vector psi = (basis_state(s, 1, 0, 0) + basis_state(s, 1, 0, 2)) / std::sqrt(2.0);
    const DensityMatrix rho = DensityMatrix::pure(psi, s);
    const DensityMatrix at = partial_trace_field(rho);
    CHECK(at.dim() == 4);
    CHECK(std::abs(at.matrix()(2, 2) - 1.0) < 1e-14);
    const Matrix a1 = partial_trace_atom(at, Atom::first), a2 = partial_trace_atom(at, Atom::second);
    CHECK(std::abs(a1(1, 1) - 1.0) < 1e-14);
    CHECK(std::abs(a2(0, 0) - 1.0) < 1e-14);
    CHECK(photon_number(rho) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("trace distance of orthogonal pure states is 2") {
    const DensityMatrix a = atomic({1.0, 0.0, 0.0, 0.0}), b = atomic({0.0, 1.0, 0.0, 0.0});
    CHECK(trace_distance(a.matrix(), b.matrix()) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(trace_distance(a.matrix(), a.matrix()) < 1e-14);
}
