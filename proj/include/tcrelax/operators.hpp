// operators.hpp: Operators on two qubits ⊗ a truncated cavity mode
//
// Tensor ordering is fixed once: atom1 ⊗ atom2 ⊗ field. Each atom has basis
// |g> = index 0, |e> = index 1; the field keeps Fock states 0..cutoff-1, so
// the product basis index is (2 * atom1 + atom2) * cutoff + n.
//
// Truncation is not renormalized: [a, a^dagger] = I except on the top Fock
// level, where it equals -(cutoff - 1).

#pragma once

#include "tcrelax/linalg.hpp"

#include <string>

namespace tcrelax {

struct SystemSpace {
    static constexpr int n_atoms = 2;
    static constexpr Index atomic_dim = 4;

    int fock_cutoff = 1;

    Index dim() const { return atomic_dim * fock_cutoff; }
    /// A cutoff of 1 keeps only the vacuum: the space is purely atomic.
    bool atomic_only() const { return fock_cutoff == 1; }

    friend bool operator==(const SystemSpace&, const SystemSpace&) = default;
};

/// Throws ArgumentError unless fock_cutoff >= 1.
SystemSpace make_space(int fock_cutoff);

/// The 4-dimensional atomic space used by the effective models.
inline SystemSpace atomic_space() { return make_space(1); }

struct LabeledOperator {
    std::string label;
    Matrix matrix;

    LabeledOperator adjoint(std::string adjoint_label) const {
        return {std::move(adjoint_label), matrix.adjoint()};
    }
};

enum class Atom { first, second };
enum class Pauli { x, y, z, plus, minus };
enum class CollectiveSpin { plus, minus, x };
enum class DressedSpin { z, plus, minus, x };

// Building blocks on the factor spaces.
Matrix qubit_operator(Pauli which);  // 2x2, basis (g, e)
Matrix fock_annihilation(int cutoff);

LabeledOperator identity(const SystemSpace& space);
LabeledOperator annihilation(const SystemSpace& space);
LabeledOperator creation(const SystemSpace& space);
LabeledOperator number(const SystemSpace& space);

/// sigma_{x,y,z,+,-} of one atom embedded in the full space.
LabeledOperator atom_operator(const SystemSpace& space, Atom atom, Pauli which);

/// S_+/- = sum_j sigma_+/-^j, S_x = S_+ + S_-.
LabeledOperator collective_spin(const SystemSpace& space, CollectiveSpin which);

/// Collective operators in the sigma_x eigenbasis |+-> = (|g> +- |e>)/sqrt2:
/// J_z = sum_j (|+><+| - |-><-|), J_+ = J_-^dagger = sum_j |+><-|, J_x = J_+ + J_-.
LabeledOperator dressed_spin(const SystemSpace& space, DressedSpin which);

/// Product-basis vector |atom1, atom2, n> (atoms: 0 = g, 1 = e).
Vector basis_state(const SystemSpace& space, int atom1, int atom2, int photons);

/// Embeds a 4x4 atomic operator as op ⊗ I_field.
Matrix embed_atomic(const SystemSpace& space, const Matrix& atomic);

} // namespace tcrelax
