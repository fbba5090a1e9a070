#include "tcrelax/operators.hpp"

#include "tcrelax/errors.hpp"

#include <cmath>
#include <string>

namespace tcrelax {

namespace {

Matrix embed_single_atom(const SystemSpace& space, Atom atom, const Matrix& op2) {
    const Matrix id2 = Matrix::Identity(2, 2);
    const Matrix pair = atom == Atom::first ? kron(op2, id2) : kron(id2, op2);
    return embed_atomic(space, pair);
}

// |ket><bra| for dressed states |+-> = (|g> +- |e>)/sqrt2, in the (g, e) basis.
// Entries are exactly +-1/2, so derived identities (J_z == S_x) hold bit for bit.
Matrix dressed_projector(int bra_sign, int ket_sign) {
    Vector ket(2), bra(2);
    ket << 1.0, static_cast<double>(ket_sign);
    bra << 1.0, static_cast<double>(bra_sign);
    return 0.5 * ket * bra.adjoint();
}

} // namespace

SystemSpace make_space(int fock_cutoff) {
    if (fock_cutoff < 1)
        throw ArgumentError("make_space: fock_cutoff must be >= 1, got " + std::to_string(fock_cutoff));
    return SystemSpace{fock_cutoff};
}

Matrix qubit_operator(Pauli which) {
    Matrix m = Matrix::Zero(2, 2);
    switch (which) {
    case Pauli::x: m << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::y: m << 0.0, I_unit, -I_unit, 0.0; break;  // (g, e) ordering: sigma_y = -i|e><g| + i|g><e|
    case Pauli::z: m << -1.0, 0.0, 0.0, 1.0; break;
    case Pauli::plus: m(1, 0) = 1.0; break;                 // |e><g|
    case Pauli::minus: m(0, 1) = 1.0; break;                // |g><e|
    }
    return m;
}

Matrix fock_annihilation(int cutoff) {
    Matrix a = Matrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix embed_atomic(const SystemSpace& space, const Matrix& atomic) {
    if (atomic.rows() != SystemSpace::atomic_dim || atomic.cols() != SystemSpace::atomic_dim)
        throw ShapeError("embed_atomic: expected a 4x4 operator");
    return kron(atomic, Matrix::Identity(space.fock_cutoff, space.fock_cutoff));
}

LabeledOperator identity(const SystemSpace& space) {
    return {"I", Matrix::Identity(space.dim(), space.dim())};
}

LabeledOperator annihilation(const SystemSpace& space) {
    return {"a", kron(Matrix::Identity(4, 4), fock_annihilation(space.fock_cutoff))};
}

LabeledOperator creation(const SystemSpace& space) { return annihilation(space).adjoint("a+"); }

LabeledOperator number(const SystemSpace& space) {
    const Matrix a = annihilation(space).matrix;
    return {"a+a", a.adjoint() * a};
}

LabeledOperator atom_operator(const SystemSpace& space, Atom atom, Pauli which) {
    static constexpr const char* names[] = {"sx", "sy", "sz", "s+", "s-"};
    std::string label = names[static_cast<int>(which)];
    label += atom == Atom::first ? "1" : "2";
    return {std::move(label), embed_single_atom(space, atom, qubit_operator(which))};
}

LabeledOperator collective_spin(const SystemSpace& space, CollectiveSpin which) {
    const auto sum = [&](Pauli p) {
        return Matrix(atom_operator(space, Atom::first, p).matrix +
                      atom_operator(space, Atom::second, p).matrix);
    };
    switch (which) {
    case CollectiveSpin::plus: return {"S+", sum(Pauli::plus)};
    case CollectiveSpin::minus: return {"S-", sum(Pauli::minus)};
    case CollectiveSpin::x: return {"Sx", sum(Pauli::plus) + sum(Pauli::minus)};
    }
    throw ArgumentError("collective_spin: unknown component");
}

LabeledOperator dressed_spin(const SystemSpace& space, DressedSpin which) {
    const auto sum = [&](const Matrix& single) {
        return Matrix(embed_single_atom(space, Atom::first, single) +
                      embed_single_atom(space, Atom::second, single));
    };
    const Matrix raise = dressed_projector(-1, +1);  // |+><-|
    switch (which) {
    case DressedSpin::z: return {"Jz", sum(dressed_projector(+1, +1) - dressed_projector(-1, -1))};
    case DressedSpin::plus: return {"J+", sum(raise)};
    case DressedSpin::minus: return {"J-", sum(Matrix(raise.adjoint()))};
    case DressedSpin::x: return {"Jx", sum(raise + Matrix(raise.adjoint()))};
    }
    throw ArgumentError("dressed_spin: unknown component");
}

Vector basis_state(const SystemSpace& space, int atom1, int atom2, int photons) {
    if (atom1 < 0 || atom1 > 1 || atom2 < 0 || atom2 > 1)
        throw ArgumentError("basis_state: atom labels must be 0 (g) or 1 (e)");
    if (photons < 0 || photons >= space.fock_cutoff)
        throw ArgumentError("basis_state: photon number outside the retained Fock space");
    Vector v = Vector::Zero(space.dim());
    v((2 * atom1 + atom2) * space.fock_cutoff + photons) = 1.0;
    return v;
}

} // namespace tcrelax
