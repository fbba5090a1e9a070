#include "tcrelax/krylov.hpp"

#include "tcrelax/errors.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace tcrelax {

namespace {

// Swap the adjacent 1x1 diagonal blocks k, k+1 of an upper-triangular t.
void swap_adjacent(Matrix& t, Matrix& z, Index k) {
    const cplx a = t(k, k), b = t(k, k + 1), c = t(k + 1, k + 1);
    // Eigenvector of the 2x2 block belonging to c is (b, c - a).
    cplx x = b, y = c - a;
    const double r = std::hypot(std::abs(x), std::abs(y));
    if (r == 0.0) return;
    x /= r;
    y /= r;
    // Unitary G with first column (x, y).
    Eigen::Matrix2cd g;
    g << x, -std::conj(y), y, std::conj(x);
    t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
    t.middleCols(k, 2) = t.middleCols(k, 2) * g;
    z.middleCols(k, 2) = z.middleCols(k, 2) * g;
    t(k + 1, k) = 0.0;
}

Vector random_unit(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = cplx(normal(rng), normal(rng));
    return v.normalized();
}

} // namespace

void reorder_schur(Matrix& t, Matrix& z, std::vector<bool> select) {
    const Index n = t.rows();
    Index placed = 0;
    for (Index k = 0; k < n; ++k) {
        if (!select[static_cast<std::size_t>(k)]) continue;
        for (Index j = k; j > placed; --j) {
            swap_adjacent(t, z, j - 1);
            std::swap(select[static_cast<std::size_t>(j)], select[static_cast<std::size_t>(j - 1)]);
        }
        ++placed;
    }
}

namespace {

struct PassResult {
    std::vector<cplx> theta;  // Ritz values of (L - s)^{-1}, nearest the shift first
    Matrix vectors;           // matching unit Ritz vectors
    int converged = 0;
    int restarts = 0;
};

using Factorization = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

// Removes the components along the orthonormal columns of `q` (twice).
void project_out(const Matrix& q, Vector& w) {
    if (q.cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass) w.noalias() -= q * (q.adjoint() * w);
}

// One Krylov–Schur run on (I - QQ^+) (L - s)^{-1} restricted to span(Q)^perp.
PassResult run_pass(const Factorization& lu, Index n, int nev, int m, const Matrix& locked,
                    const KrylovOptions& opts, std::uint64_t seed) {
    Matrix v = Matrix::Zero(n, m + 1);
    Matrix h = Matrix::Zero(m + 1, m);
    Vector start = random_unit(n, seed);
    project_out(locked, start);
    v.col(0) = start.normalized();

    int kept = 0;
    Vector w(n), coeffs;
    for (int restart = 0;; ++restart) {
        int active = m;
        for (int j = kept; j < m; ++j) {
            w = lu.solve(Vector(v.col(j)));
            project_out(locked, w);
            // Classical Gram–Schmidt with one reorthogonalization pass.
            coeffs = v.leftCols(j + 1).adjoint() * w;
            w.noalias() -= v.leftCols(j + 1) * coeffs;
            Vector again = v.leftCols(j + 1).adjoint() * w;
            w.noalias() -= v.leftCols(j + 1) * again;
            coeffs += again;
            h.col(j).head(j + 1) += coeffs;
            const double beta = w.norm();
            h(j + 1, j) = beta;
            if (beta <= 1e-14 * h.col(j).head(j + 1).norm()) {
                // Invariant subspace found.
                active = j + 1;
                break;
            }
            v.col(j + 1) = w / beta;
        }

        const Matrix hm = h.topLeftCorner(active, active);
        Eigen::ComplexSchur<Matrix> schur(hm);
        if (schur.info() != Eigen::Success) throw NumericalError("eig_shift_invert: Schur form failed");
        Matrix t = schur.matrixT();
        Matrix z = schur.matrixU();

        // Rank Ritz values by modulus (largest modulus = nearest the shift).
        std::vector<Index> order(static_cast<std::size_t>(active));
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(), [&t](Index a, Index b) {
            return std::abs(t(a, a)) > std::abs(t(b, b));
        });

        Eigen::ComplexEigenSolver<Matrix> ritz(hm, true);
        const Eigen::RowVectorXcd residual_row = h.row(active).head(active);
        const bool breakdown = active < m;
        std::vector<std::pair<double, Index>> ranked;
        for (Index i = 0; i < active; ++i) ranked.emplace_back(-std::abs(ritz.eigenvalues()(i)), i);
        std::sort(ranked.begin(), ranked.end());
        const int want = std::min<int>(nev, active);
        int converged = 0;
        for (int i = 0; i < want; ++i) {
            const Index idx = ranked[static_cast<std::size_t>(i)].second;
            const cplx theta = ritz.eigenvalues()(idx);
            const Vector y = ritz.eigenvectors().col(idx).normalized();
            const double res = breakdown ? 0.0 : std::abs((residual_row * y)(0));
            if (res <= opts.tol * std::abs(theta)) ++converged;
        }

        const bool done = converged >= want || breakdown || active == n;
        if (done || restart >= opts.max_restarts) {
            if (!done) {
                std::ostringstream os;
                os << "eig_shift_invert: " << converged << " of " << nev << " Ritz pairs converged after "
                   << restart << " restarts";
                throw NonConvergenceError(os.str());
            }
            PassResult out;
            out.restarts = restart;
            out.converged = converged;
            out.vectors.resize(n, want);
            for (int i = 0; i < want; ++i) {
                const Index idx = ranked[static_cast<std::size_t>(i)].second;
                out.theta.push_back(ritz.eigenvalues()(idx));
                out.vectors.col(i) = (v.leftCols(active) * ritz.eigenvectors().col(idx)).normalized();
            }
            return out;
        }

        // Thick restart: keep the leading Schur vectors of the wanted Ritz values.
        const int keep = std::min(active - 1, nev + (active - nev) / 2);
        std::vector<bool> select(static_cast<std::size_t>(active), false);
        for (int i = 0; i < keep; ++i) select[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
        reorder_schur(t, z, select);

        const Matrix zk = z.leftCols(keep);
        const Matrix v_new = v.leftCols(active) * zk;
        const Eigen::RowVectorXcd b = residual_row * zk;
        const Vector next = v.col(active);
        v.setZero();
        v.leftCols(keep) = v_new;
        v.col(keep) = next;
        h.setZero();
        h.topLeftCorner(keep, keep) = t.topLeftCorner(keep, keep).triangularView<Eigen::Upper>();
        h.row(keep).head(keep) = b;
        kept = keep;
    }
}

// Orthonormal basis of span([q, extra]) via Householder QR.
Matrix extend_basis(const Matrix& q, const Matrix& extra) {
    Matrix all(extra.rows(), q.cols() + extra.cols());
    all << q, extra;
    Eigen::HouseholderQR<Matrix> qr(all);
    return qr.householderQ() * Matrix::Identity(all.rows(), all.cols());
}

} // namespace

KrylovResult eig_shift_invert(const SparseMatrix& generator, cplx shift, const KrylovOptions& opts) {
    const Index n = generator.rows();
    if (generator.cols() != n || n == 0) throw ShapeError("eig_shift_invert: generator not square");
    if (opts.nev < 1) throw ArgumentError("eig_shift_invert: nev must be positive");
    if (opts.max_passes < 1) throw ArgumentError("eig_shift_invert: max_passes must be positive");

    const int nev = static_cast<int>(std::min<Index>(opts.nev, n));
    int m = opts.ncv > 0 ? opts.ncv : std::max(2 * nev + 10, 30);
    m = static_cast<int>(std::min<Index>(m, n));
    if (m <= nev && m < n) m = static_cast<int>(std::min<Index>(nev + 1, n));

    SparseMatrix shifted = generator - shift * sparse_identity(n);
    shifted.makeCompressed();
    Factorization lu;
    lu.analyzePattern(shifted);
    lu.factorize(shifted);
    if (lu.info() != Eigen::Success)
        throw NumericalError("eig_shift_invert: LU of (L - s I) failed; move the shift off the spectrum");

    KrylovResult result;
    Matrix locked(n, 0);
    std::vector<cplx> theta;
    for (int pass = 0; pass < opts.max_passes; ++pass) {
        const Index room = n - locked.cols();
        if (room <= 0) break;
        const int pass_nev = static_cast<int>(std::min<Index>(nev, room));
        const int pass_m = static_cast<int>(std::min<Index>(std::max(m, pass_nev + 1), room));
        const PassResult pr = run_pass(lu, n, pass_nev, pass_m, locked, opts, opts.seed + 7919u * pass);
        result.restarts += pr.restarts;

        // Stop once a pass contributes nothing nearer than the current nev-th value.
        double threshold = 0.0;
        if (static_cast<int>(theta.size()) >= nev) {
            std::vector<double> mags;
            for (const cplx x : theta) mags.push_back(std::abs(x));
            std::nth_element(mags.begin(), mags.begin() + (nev - 1), mags.end(), std::greater<>());
            threshold = mags[static_cast<std::size_t>(nev - 1)];
        }
        bool contributed = false;
        for (const cplx x : pr.theta)
            if (std::abs(x) > threshold * (1.0 + 1e-9)) contributed = true;
        theta.insert(theta.end(), pr.theta.begin(), pr.theta.end());
        locked = extend_basis(locked, pr.vectors);
        if (!contributed && pass > 0) break;
    }

    std::sort(theta.begin(), theta.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
    if (static_cast<int>(theta.size()) > nev) theta.resize(static_cast<std::size_t>(nev));
    result.converged = static_cast<int>(theta.size());
    for (const cplx x : theta) result.eigenvalues.push_back(shift + 1.0 / x);
    if (opts.vectors) result.vectors = locked;
    return result;
}

} // namespace tcrelax
