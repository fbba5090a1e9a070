#include <doctest.h>

#include "tcrelax/operators.hpp"
#include "tcrelax/state.hpp"

using namespace tcrelax;

namespace {

// Brute-force single-atom embedding: sigma acts on factor `which` of atom1 (x) atom2 (x) field.
Matrix embed(const Matrix& q, int which, int cutoff) {
    const Matrix i2 = Matrix::Identity(2, 2), f = Matrix::Identity(cutoff, cutoff);
    return which == 0 ? kron(kron(q, i2), f) : kron(kron(i2, q), f);
}

} // namespace

TEST_CASE("Fock operators satisfy [a, a^+] = 1 below the cutoff") {
    const SystemSpace s = make_space(5);
    const Matrix a = annihilation(s).matrix, ad = creation(s).matrix;
    const Matrix comm = a * ad - ad * a;
    const Matrix n = number(s).matrix;
    CHECK((ad * a - n).norm() < 1e-14);
    for (int atoms = 0; atoms < 4; ++atoms)
        for (int k = 0; k < 4; ++k) {
            const Index i = atoms * 5 + k;
            CHECK(std::abs(comm(i, i) - 1.0) < 1e-14);
        }
}

TEST_CASE("product basis puts atom 1 first and the field last") {
    const SystemSpace s = make_space(3);
    const Vector v = basis_state(s, 1, 0, 2);
    CHECK(std::abs(v(2 * 3 + 0 * 3 + 2) - 1.0) < 1e-15);
    CHECK(std::abs(v.norm() - 1.0) < 1e-15);
    const Matrix sm1 = atom_operator(s, Atom::first, Pauli::minus).matrix;
    CHECK((sm1 * v - basis_state(s, 0, 0, 2)).norm() < 1e-15);
}

TEST_CASE("collective spin matches explicit sums and S_x^2 by hand") {
    const int c = 2;
    const SystemSpace s = make_space(c);
    const Matrix sx = collective_spin(s, CollectiveSpin::x).matrix;
    const Matrix px = qubit_operator(Pauli::x);
    const Matrix brute = embed(px, 0, c) + embed(px, 1, c);
    CHECK((sx - brute).norm() < 1e-14);
    // (s1 + s2)^2 = 2 + 2 s1 s2 for Pauli x.
    const Matrix sq = 2.0 * Matrix::Identity(s.dim(), s.dim()) + 2.0 * embed(px, 0, c) * embed(px, 1, c);
    CHECK((sx * sx - sq).norm() < 1e-14);
    const Matrix sp = collective_spin(s, CollectiveSpin::plus).matrix;
    CHECK((sp + sp.adjoint() - sx).norm() < 1e-14);
}

TEST_CASE("dressed J_z equals the collective S_x") {
    const SystemSpace s = make_space(3);
    CHECK((dressed_spin(s, DressedSpin::z).matrix - collective_spin(s, CollectiveSpin::x).matrix).norm() < 1e-14);
    const Matrix jp = dressed_spin(s, DressedSpin::plus).matrix, jm = dressed_spin(s, DressedSpin::minus).matrix;
    CHECK((jp.adjoint() - jm).norm() < 1e-14);
    // Spin-one algebra on the symmetric subspace and spin-half per atom: [J+, J-] = J_z.
    CHECK((jp * jm - jm * jp - dressed_spin(s, DressedSpin::z).matrix).norm() < 1e-13);
}

TEST_CASE("column-stacking vectorization round-trips") {
    Matrix m(3, 3);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) m(i, j) = cplx(static_cast<double>(i), static_cast<double>(j));
    const Vector v = vectorize_state(m);
    CHECK(std::abs(v(1) - m(1, 0)) < 1e-15);
    CHECK(std::abs(v(3) - m(0, 1)) < 1e-15);
    CHECK((devectorize_state(v, 3) - m).norm() < 1e-15);
    CHECK(std::abs(trace_functional(3).dot(v) - m.trace()) < 1e-15);
}
