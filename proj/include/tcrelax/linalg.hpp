// linalg.hpp: Dense/sparse complex kernels: Kronecker products, eigen- and
// singular-value decompositions, null spaces.
//
// Storage is Eigen throughout. Dense matrices are `Matrix` (column-major
// MatrixXcd), sparse ones are compressed column-major `SparseMatrix`.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <string_view>
#include <vector>

namespace tcrelax {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

inline constexpr cplx I_unit{0.0, 1.0};

namespace limits {
/// Largest admissible extent of any axis produced by `kron`.
inline constexpr Index kron_axis_cap = 1'000'000;
/// Largest square matrix handed to the dense general eigensolver.
inline constexpr Index dense_eig_cap = 4096;
} // namespace limits

/// Throws ShapeError/NumericalError unless every entry is finite.
void require_finite(const Matrix& m, std::string_view what);
void require_square(const Matrix& m, std::string_view what);

Matrix kron(const Matrix& a, const Matrix& b);
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

SparseMatrix sparse_identity(Index n);
SparseMatrix to_sparse(const Matrix& m, double drop_tol = 0.0);

/// Frobenius norm of m - m^dagger relative to the Frobenius norm of m.
double hermiticity_defect(const Matrix& m);

struct EigenDecomposition {
    Vector eigenvalues;
    /// Right eigenvectors as unit-norm columns; empty when not requested.
    Matrix right_vectors;
    /// 2-norm condition number of `right_vectors` (infinity if singular,
    /// NaN when vectors were not computed).
    double condition_estimate = 0.0;

    bool has_vectors() const { return right_vectors.size() > 0; }
    Index dim() const { return eigenvalues.size(); }

    /// max_i ||A v_i - lambda_i v_i|| / (||A||_F ||v_i||)
    double max_relative_residual(const Matrix& a) const;
};

struct EigOptions {
    bool vectors = true;
    /// Also compute the eigenvector-matrix condition number (one extra SVD).
    bool condition = true;
    Index cap = limits::dense_eig_cap;
    /// Relative residual accepted as the postcondition.
    double residual_tol = 1e-9;
};

/// Full spectrum of a general complex matrix (LAPACK zgeev).
EigenDecomposition eig_general(const Matrix& m, const EigOptions& opts = {});

/// Polishes each eigenvalue by inverse iteration in extended precision,
/// starting from the stored right vectors. A correction larger than
/// `max_correction` (absolute) is rejected and the value kept. Returns the
/// number of eigenvalues changed. Cost O(n^4); meant for small matrices.
int polish_eigenvalues(const Matrix& m, EigenDecomposition& decomp, double max_correction, int iterations = 3);

struct HermitianEigen {
    RealVector eigenvalues;  // ascending
    Matrix vectors;          // orthonormal columns
};

/// Requires ||m - m^dagger|| <= 1e-10 ||m|| (Frobenius).
HermitianEigen eig_hermitian(const Matrix& m);

/// Descending singular values.
RealVector singular_values(const Matrix& m);

/// Orthonormal basis of the right kernel: right singular vectors whose
/// singular value is <= tol * sigma_max.
std::vector<Vector> null_space(const Matrix& m, double tol);

/// Inner product <a, b> = a^dagger b.
inline cplx dot(const Vector& a, const Vector& b) { return a.dot(b); }

} // namespace tcrelax
