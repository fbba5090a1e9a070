// krylov.hpp: Shift-invert Krylov–Schur eigensolver for sparse generators
//
// Finds the eigenvalues of L closest to a complex shift s by running
// Krylov–Schur on (L - sI)^{-1}, whose action is a sparse LU solve.

#pragma once

#include "tcrelax/linalg.hpp"

#include <cstdint>
#include <vector>

namespace tcrelax {

struct KrylovOptions {
    int nev = 12;
    /// Krylov subspace size; 0 selects max(2 nev + 10, 30).
    int ncv = 0;
    int max_restarts = 300;
    /// Converged when ||(L - s)^{-1} x - theta x|| <= tol |theta|.
    double tol = 1e-11;
    std::uint64_t seed = 0x5eed;
    /// Deflated restarts: each pass locks the vectors found so far and starts
    /// afresh in their orthogonal complement, which recovers repeated
    /// eigenvalues a single Krylov sequence cannot see. Passes stop early once
    /// nothing new enters the nearest `nev`.
    int max_passes = 4;
    bool vectors = false;
};

struct KrylovResult {
    /// Eigenvalues of L ordered by distance to the shift.
    std::vector<cplx> eigenvalues;
    /// Orthonormal basis of the computed invariant subspace, when requested.
    Matrix vectors;
    int converged = 0;
    int restarts = 0;
};

/// Throws NonConvergenceError if fewer than `nev` Ritz pairs converge.
KrylovResult eig_shift_invert(const SparseMatrix& generator, cplx shift, const KrylovOptions& opts = {});

/// Reorders a complex Schur form (t, z) so that diagonal entries flagged in
/// `select` lead. Exposed for testing.
void reorder_schur(Matrix& t, Matrix& z, std::vector<bool> select);

} // namespace tcrelax
