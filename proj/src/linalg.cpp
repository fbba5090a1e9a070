#include "tcrelax/linalg.hpp"

#include "tcrelax/errors.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace tcrelax {

namespace {

lapack_complex_double* as_lapack(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

void check_kron_extent(Index a, Index b, std::string_view axis) {
    if (a != 0 && b > limits::kron_axis_cap / a) {
        std::ostringstream os;
        os << "kron: " << axis << " extent " << a << " x " << b << " exceeds cap "
           << limits::kron_axis_cap;
        throw DimensionError(os.str());
    }
}

} // namespace

void require_finite(const Matrix& m, std::string_view what) {
    if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite entry");
}

void require_square(const Matrix& m, std::string_view what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw ShapeError(os.str());
    }
}

Matrix kron(const Matrix& a, const Matrix& b) {
    check_kron_extent(a.rows(), b.rows(), "row");
    check_kron_extent(a.cols(), b.cols(), "column");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    check_kron_extent(a.rows(), b.rows(), "row");
    check_kron_extent(a.cols(), b.cols(), "column");
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (Index ja = 0; ja < a.outerSize(); ++ja)
        for (SparseMatrix::InnerIterator ia(a, ja); ia; ++ia)
            for (Index jb = 0; jb < b.outerSize(); ++jb)
                for (SparseMatrix::InnerIterator ib(b, jb); ib; ++ib)
                    trips.emplace_back(ia.row() * b.rows() + ib.row(), ja * b.cols() + jb,
                                       ia.value() * ib.value());
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

SparseMatrix sparse_identity(Index n) {
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

SparseMatrix to_sparse(const Matrix& m, double drop_tol) {
    std::vector<Eigen::Triplet<cplx>> trips;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > drop_tol) trips.emplace_back(i, j, m(i, j));
    SparseMatrix s(m.rows(), m.cols());
    s.setFromTriplets(trips.begin(), trips.end());
    s.makeCompressed();
    return s;
}

double hermiticity_defect(const Matrix& m) {
    const double n = m.norm();
    if (n == 0.0) return 0.0;
    return (m - m.adjoint()).norm() / n;
}

double EigenDecomposition::max_relative_residual(const Matrix& a) const {
    if (!has_vectors()) throw PreconditionError("max_relative_residual: decomposition has no vectors");
    const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (Index k = 0; k < eigenvalues.size(); ++k) {
        const auto v = right_vectors.col(k);
        const double r = (a * v - eigenvalues(k) * v).norm() / (scale * v.norm());
        worst = std::max(worst, r);
    }
    return worst;
}

EigenDecomposition eig_general(const Matrix& m, const EigOptions& opts) {
    require_square(m, "eig_general");
    if (m.rows() > opts.cap) {
        std::ostringstream os;
        os << "eig_general: dimension " << m.rows() << " exceeds dense cap " << opts.cap;
        throw SizeError(os.str());
    }
    require_finite(m, "eig_general");

    const auto n = static_cast<lapack_int>(m.rows());
    Matrix work = m;
    EigenDecomposition out;
    out.eigenvalues.resize(n);
    Matrix vr;
    if (opts.vectors) vr.resize(n, n);
    cplx dummy{};
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', opts.vectors ? 'V' : 'N', n, as_lapack(work.data()), n,
        as_lapack(out.eigenvalues.data()), as_lapack(&dummy), 1,
        opts.vectors ? as_lapack(vr.data()) : as_lapack(&dummy), opts.vectors ? n : 1);
    if (info != 0) {
        std::ostringstream os;
        os << "eig_general: QR iteration failed (zgeev info=" << info << ", n=" << n << ")";
        throw NumericalError(os.str());
    }
    if (!out.eigenvalues.allFinite()) throw NumericalError("eig_general: non-finite eigenvalue");

    if (!opts.vectors) {
        out.condition_estimate = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    for (Index k = 0; k < n; ++k) vr.col(k).normalize();
    out.right_vectors = std::move(vr);

    const double residual = out.max_relative_residual(m);
    if (!(residual <= opts.residual_tol)) {
        std::ostringstream os;
        os << "eig_general: residual " << residual << " exceeds tolerance " << opts.residual_tol;
        throw NumericalError(os.str());
    }
    if (opts.condition) {
        const RealVector s = singular_values(out.right_vectors);
        const double smin = s(s.size() - 1);
        out.condition_estimate =
            smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
    } else {
        out.condition_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

int polish_eigenvalues(const Matrix& m, EigenDecomposition& decomp, double max_correction, int iterations) {
    using Wide = std::complex<long double>;
    using WideMatrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
    using WideVector = Eigen::Matrix<Wide, Eigen::Dynamic, 1>;
    require_square(m, "polish_eigenvalues");
    if (!decomp.has_vectors() || decomp.dim() != m.rows())
        throw PreconditionError("polish_eigenvalues: decomposition needs matching eigenvectors");

    const Index n = m.rows();
    const WideMatrix wide = m.cast<Wide>();
    int changed = 0;
    for (Index k = 0; k < n; ++k) {
        const Wide mu(decomp.eigenvalues(k).real(), decomp.eigenvalues(k).imag());
        WideMatrix shifted = wide;
        shifted.diagonal().array() -= mu;
        const Eigen::PartialPivLU<WideMatrix> lu(shifted);
        WideVector x = decomp.right_vectors.col(k).cast<Wide>();
        Wide lambda = mu;
        bool finite = true;
        for (int it = 0; it < iterations && finite; ++it) {
            const WideVector y = lu.solve(x);
            const Wide theta = x.dot(y) / x.dot(x);
            finite = y.allFinite() && std::abs(theta) > 0.0L;
            if (!finite) break;
            lambda = mu + Wide(1.0L) / theta;
            x = y / y.norm();
        }
        const cplx refined(static_cast<double>(lambda.real()), static_cast<double>(lambda.imag()));
        if (!finite || !std::isfinite(refined.real()) || !std::isfinite(refined.imag())) continue;
        if (std::abs(refined - decomp.eigenvalues(k)) > max_correction) continue;
        if (refined != decomp.eigenvalues(k)) ++changed;
        decomp.eigenvalues(k) = refined;
    }
    return changed;
}

HermitianEigen eig_hermitian(const Matrix& m) {
    require_square(m, "eig_hermitian");
    require_finite(m, "eig_hermitian");
    const double defect = (m - m.adjoint()).norm();
    if (defect > 1e-10 * m.norm()) {
        std::ostringstream os;
        os << "eig_hermitian: matrix is not Hermitian (||m - m^+|| = " << defect << ")";
        throw PreconditionError(os.str());
    }
    const Matrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: solver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector singular_values(const Matrix& m) {
    if (m.size() == 0) return RealVector();
    Matrix work = m;
    const auto rows = static_cast<lapack_int>(m.rows());
    const auto cols = static_cast<lapack_int>(m.cols());
    RealVector s(std::min(rows, cols));
    cplx dummy{};
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, as_lapack(work.data()),
                                           rows, s.data(), as_lapack(&dummy), 1, as_lapack(&dummy), 1);
    if (info != 0) throw NumericalError("singular_values: zgesdd failed, info=" + std::to_string(info));
    return s;
}

std::vector<Vector> null_space(const Matrix& m, double tol) {
    require_square(m, "null_space");
    require_finite(m, "null_space");
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    const double threshold = tol * (s.size() > 0 ? s(0) : 0.0);
    std::vector<Vector> basis;
    for (Index k = 0; k < s.size(); ++k)
        if (s(k) <= threshold) basis.emplace_back(svd.matrixV().col(k));
    return basis;
}

} // namespace tcrelax
