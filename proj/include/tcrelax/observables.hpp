// observables.hpp: Reduced states, entropies, mutual information, distances

#pragma once

#include "tcrelax/state.hpp"

namespace tcrelax {

/// Trace over the cavity mode. The result lives on `atomic_space()`.
/// An atomic-only input is passed through unchanged (with a warning).
DensityMatrix partial_trace_field(const DensityMatrix& rho);

/// Reduced 2x2 state of atom `keep` from a 4x4 atomic state.
Matrix partial_trace_atom(const DensityMatrix& rho_at, Atom keep);

/// -Tr(rho log2 rho), in bits. Eigenvalues down to -1e-8 are clipped to 0;
/// anything more negative is a StateValidityError.
double von_neumann_entropy(const Matrix& rho);

/// S(rho_1) + S(rho_2) - S(rho_at), in bits.
double mutual_information(const DensityMatrix& rho_at);

/// Convenience: mutual information of the atoms of a full-space state.
double atomic_mutual_information(const DensityMatrix& rho);

/// Tr sqrt((rho - sigma)^+ (rho - sigma)); no 1/2 normalization.
double trace_distance(const Matrix& rho, const Matrix& sigma);

/// Tr(rho a^dagger a).
double photon_number(const DensityMatrix& rho);

} // namespace tcrelax
