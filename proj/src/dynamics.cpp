#include "tcrelax/dynamics.hpp"

#include "tcrelax/errors.hpp"
#include "tcrelax/observables.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

namespace tcrelax {

namespace {

void merge_worst(StateDefects& worst, const StateDefects& d) {
    worst.hermiticity = std::max(worst.hermiticity, d.hermiticity);
    worst.trace = std::max(worst.trace, d.trace);
    worst.negativity = std::max(worst.negativity, d.negativity);
}

void require_matching(const Superoperator& sup, const DensityMatrix& rho0) {
    if (rho0.space() != sup.space()) {
        std::ostringstream os;
        os << "initial state lives on a space of dimension " << rho0.dim() << ", generator '" << sup.tag()
           << "' on dimension " << sup.hilbert_dim();
        throw DimensionError(os.str());
    }
}

SparseMatrix principal_submatrix(const SparseMatrix& l, const std::vector<Index>& keep) {
    std::vector<Index> local(static_cast<std::size_t>(l.rows()), -1);
    for (std::size_t k = 0; k < keep.size(); ++k) local[static_cast<std::size_t>(keep[k])] = static_cast<Index>(k);
    std::vector<Eigen::Triplet<cplx>> entries;
    for (std::size_t k = 0; k < keep.size(); ++k)
        for (SparseMatrix::InnerIterator it(l, keep[k]); it; ++it) {
            const Index r = local[static_cast<std::size_t>(it.row())];
            if (r >= 0) entries.emplace_back(r, static_cast<Index>(k), it.value());
        }
    SparseMatrix out(static_cast<Index>(keep.size()), static_cast<Index>(keep.size()));
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

double residual_ratio(const SparseMatrix& l, const Vector& x) {
    const double norm = one_norm(l);
    const double xn = x.norm();
    if (norm == 0.0 || xn == 0.0) return 0.0;
    return (l * x).norm() / (norm * xn);
}

DensityMatrix finish_steady(const Superoperator& sup, const Vector& x, const SteadyStateOptions& opts) {
    const double res = residual_ratio(sup.sparse(), x);
    if (!(res <= opts.residual_tol)) {
        std::ostringstream os;
        os << "steady_state: residual " << res << " exceeds " << opts.residual_tol;
        throw NumericalError(os.str());
    }
    // Kernel projections carry roundoff-level anti-Hermitian parts; accept them
    // at the trace/positivity slack and return the Hermitian part.
    StateTolerance tol;
    tol.hermiticity = 1e-8;
    const DensityMatrix checked(devectorize_state(x, sup.hilbert_dim()), sup.space(), tol);
    return DensityMatrix(0.5 * (checked.matrix() + checked.matrix().adjoint()), sup.space());
}

Vector trace_row_solve(const Superoperator& sup) {
    const SparseMatrix& l = sup.sparse();
    const Index d = sup.hilbert_dim();
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(static_cast<std::size_t>(l.nonZeros() + d));
    for (Index j = 0; j < l.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(l, j); it; ++it)
            if (it.row() != 0) entries.emplace_back(it.row(), j, it.value());
    for (Index i = 0; i < d; ++i) entries.emplace_back(0, i * d + i, 1.0);
    SparseMatrix a(l.rows(), l.cols());
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw AmbiguityError("steady_state: kernel is not one-dimensional; supply an initial state");
    Vector rhs = Vector::Zero(l.rows());
    rhs(0) = 1.0;
    Vector x = lu.solve(rhs);
    if (!x.allFinite()) throw AmbiguityError("steady_state: kernel is not one-dimensional; supply an initial state");
    return x;
}

// x <- (I - L / s)^{-1} x on a descending ladder of shifts s: every decaying
// component shrinks by |s / (s - lambda)| per sweep, kernel components stay.
Vector shifted_limit(const SparseMatrix& l, const Vector& x0, const SteadyStateOptions& opts) {
    const double norm = one_norm(l);
    const SparseMatrix id = sparse_identity(l.rows());
    Vector x = x0;
    constexpr int levels = 6;
    constexpr int sweeps_per_level = 6;
    constexpr int final_sweeps = 4000;
    for (int level = 1; level <= levels; ++level) {
        const double s = norm * std::pow(10.0, -level);
        SparseMatrix a = id - l / s;
        a.makeCompressed();
        Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) throw NumericalError("steady_state: shifted factorization failed");
        const int sweeps = level == levels ? final_sweeps : sweeps_per_level;
        for (int k = 0; k < sweeps; ++k) {
            Vector next = lu.solve(x);
            const double change = (next - x).norm();
            x = std::move(next);
            if (level == levels && residual_ratio(l, x) <= 0.1 * opts.residual_tol) return x;
            if (change <= 1e-15 * x.norm()) break;
        }
    }
    return x;
}

} // namespace

std::vector<Index> reachable_indices(const SparseMatrix& generator, const Vector& seed) {
    if (seed.size() != generator.cols()) throw ShapeError("reachable_indices: seed length mismatch");
    std::vector<char> seen(static_cast<std::size_t>(seed.size()), 0);
    std::deque<Index> queue;
    for (Index i = 0; i < seed.size(); ++i)
        if (seed(i) != cplx(0.0, 0.0)) {
            seen[static_cast<std::size_t>(i)] = 1;
            queue.push_back(i);
        }
    while (!queue.empty()) {
        const Index j = queue.front();
        queue.pop_front();
        for (SparseMatrix::InnerIterator it(generator, j); it; ++it) {
            auto& flag = seen[static_cast<std::size_t>(it.row())];
            if (!flag && it.value() != cplx(0.0, 0.0)) {
                flag = 1;
                queue.push_back(it.row());
            }
        }
    }
    std::vector<Index> out;
    for (Index i = 0; i < seed.size(); ++i)
        if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

ReachableSector reachable_sector(const Superoperator& sup, const DensityMatrix& rho0) {
    require_matching(sup, rho0);
    ReachableSector out;
    out.full_dim = sup.dim();
    out.indices = reachable_indices(sup.sparse(), vectorize_state(rho0.matrix()));
    out.generator = out.proper() ? principal_submatrix(sup.sparse(), out.indices) : sup.sparse();
    return out;
}

Trajectory evolve_ode(const Superoperator& sup, const DensityMatrix& rho0, std::span<const double> t_grid,
                      const EvolveOptions& opts, const StateObserver& observer, OdeStats* stats) {
    validate_time_grid(t_grid);
    require_matching(sup, rho0);
    const Index d = sup.hilbert_dim();
    const Vector y0 = vectorize_state(rho0.matrix());

    std::vector<Index> keep;
    bool restricted = false;
    if (opts.restrict_to_reachable) {
        keep = reachable_indices(sup.sparse(), y0);
        restricted = static_cast<Index>(keep.size()) < sup.dim();
    }
    SparseMatrix sub;
    Vector start = y0;
    if (restricted) {
        sub = principal_submatrix(sup.sparse(), keep);
        start.resize(static_cast<Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k) start(static_cast<Index>(k)) = y0(keep[k]);
    }

    Trajectory traj;
    traj.tag = sup.tag();
    traj.times.assign(t_grid.begin(), t_grid.end());
    if (opts.keep_states) traj.states.reserve(t_grid.size());
    Vector full = Vector::Zero(sup.dim());

    const SampleSink sink = [&](std::size_t index, double t, const Vector& y) {
        if (restricted) {
            for (std::size_t k = 0; k < keep.size(); ++k) full(keep[k]) = y(static_cast<Index>(k));
        } else {
            full = y;
        }
        DensityMatrix rho = DensityMatrix::unchecked(devectorize_state(full, d), sup.space());
        const StateDefects def = rho.defects();
        merge_worst(traj.worst, def);
        if (!(def.hermiticity <= opts.invariant_tol && def.trace <= opts.invariant_tol &&
              def.negativity <= opts.invariant_tol)) {
            std::ostringstream os;
            os << "evolve_ode: state invariants broken at t = " << t << " (hermiticity " << def.hermiticity
               << ", trace error " << def.trace << ", negativity " << def.negativity
               << "); tighten rtol/atol";
            throw IntegrationAccuracyError(os.str());
        }
        if (observer) observer(index, t, rho);
        if (opts.keep_states) traj.states.push_back(std::move(rho));
    };
    integrate_ode_streaming(restricted ? sub : sup.sparse(), start, t_grid, sink, opts.ode, stats);
    return traj;
}

Trajectory evolve_spectral(const EigenDecomposition& decomp, const DensityMatrix& rho0, std::span<const double> t_grid,
                           double defect_threshold) {
    validate_time_grid(t_grid);
    if (!decomp.has_vectors()) throw PreconditionError("evolve_spectral: decomposition has no eigenvectors");
    if (!(decomp.condition_estimate <= defect_threshold)) {
        std::ostringstream os;
        os << "evolve_spectral: eigenvector condition " << decomp.condition_estimate
           << " marks the generator near-defective; use evolve_ode";
        throw NearDefectiveError(os.str());
    }
    const Index d = rho0.dim();
    if (decomp.dim() != d * d) throw DimensionError("evolve_spectral: decomposition does not match the state");
    const Vector c = decomp.right_vectors.partialPivLu().solve(vectorize_state(rho0.matrix()));
    // Kernel eigenvalues are exactly zero for a trace-preserving generator;
    // their roundoff would otherwise grow linearly in t.
    Vector lambda = decomp.eigenvalues;
    const double zero_cut = 1e-12 * lambda.cwiseAbs().maxCoeff();
    for (Index k = 0; k < lambda.size(); ++k)
        if (std::abs(lambda(k)) <= zero_cut) lambda(k) = 0.0;

    Trajectory traj;
    traj.tag = "spectral";
    traj.times.assign(t_grid.begin(), t_grid.end());
    for (const double t : t_grid) {
        const Vector w = c.cwiseProduct((lambda * t).array().exp().matrix());
        DensityMatrix rho = DensityMatrix::unchecked(devectorize_state(decomp.right_vectors * w, d), rho0.space());
        merge_worst(traj.worst, rho.defects());
        traj.states.push_back(std::move(rho));
    }
    return traj;
}

DensityMatrix steady_state(const Superoperator& sup, const std::optional<DensityMatrix>& rho0,
                           const SteadyStateOptions& opts) {
    if (rho0) require_matching(sup, *rho0);
    if (sup.dim() > limits::dense_eig_cap) {
        if (!rho0) return finish_steady(sup, trace_row_solve(sup), opts);
        const ReachableSector sector = reachable_sector(sup, *rho0);
        const Vector y0 = vectorize_state(rho0->matrix());
        Vector start(static_cast<Index>(sector.indices.size()));
        for (std::size_t k = 0; k < sector.indices.size(); ++k) start(static_cast<Index>(k)) = y0(sector.indices[k]);
        const Vector limit = shifted_limit(sector.generator, start, opts);
        Vector x = Vector::Zero(sup.dim());
        for (std::size_t k = 0; k < sector.indices.size(); ++k) x(sector.indices[k]) = limit(static_cast<Index>(k));
        return finish_steady(sup, x, opts);
    }

    const Matrix l = sup.to_dense();
    const std::vector<Vector> right = null_space(l, opts.kernel_tol);
    if (right.empty()) throw NumericalError("steady_state: generator has no kernel");
    const Index d = sup.hilbert_dim();
    if (right.size() == 1) {
        const cplx tr = trace_functional(d).dot(right[0]);
        if (std::abs(tr) < 1e-12) throw NumericalError("steady_state: kernel element is traceless");
        return finish_steady(sup, right[0] / tr, opts);
    }
    if (!rho0) {
        std::ostringstream os;
        os << "steady_state: kernel has dimension " << right.size() << "; supply an initial state";
        throw AmbiguityError(os.str());
    }
    const std::vector<Vector> left = null_space(Matrix(l.adjoint()), opts.kernel_tol);
    if (left.size() != right.size())
        throw NumericalError("steady_state: left and right kernels differ in dimension");
    const Index k = static_cast<Index>(right.size());
    Matrix r(l.rows(), k), q(l.rows(), k);
    for (Index j = 0; j < k; ++j) {
        r.col(j) = right[static_cast<std::size_t>(j)];
        q.col(j) = left[static_cast<std::size_t>(j)];
    }
    const Vector coeff = (q.adjoint() * r).fullPivLu().solve(q.adjoint() * vectorize_state(rho0->matrix()));
    return finish_steady(sup, r * coeff, opts);
}

RelaxationEstimate fit_relaxation(const Trajectory& traj, const DensityMatrix& rho_ss, const FitOptions& opts) {
    if (traj.states.size() != traj.times.size())
        throw PreconditionError("fit_relaxation: trajectory does not store its states");
    std::vector<double> dist;
    dist.reserve(traj.states.size());
    for (const DensityMatrix& rho : traj.states) dist.push_back(trace_distance(rho.matrix(), rho_ss.matrix()));
    return fit_relaxation(traj.times, dist, opts);
}

RelaxationEstimate fit_relaxation(std::span<const double> times, std::span<const double> distances,
                                  const FitOptions& opts) {
    if (times.size() != distances.size() || times.size() < 3)
        throw ArgumentError("fit_relaxation: need matching series with at least three samples");
    const double d0 = distances.front();
    if (!(distances.back() < 0.1 * d0)) {
        std::ostringstream os;
        os << "fit_relaxation: distance decayed only from " << d0 << " to " << distances.back()
           << "; extend the trajectory";
        throw FitWindowError(os.str());
    }
    std::size_t first = 0;
    while (first < distances.size() && !(distances[first] < 0.5 * d0)) ++first;

    std::vector<double> t, y;
    for (std::size_t k = first; k < distances.size(); ++k)
        if (distances[k] > opts.floor * d0) {
            t.push_back(times[k]);
            y.push_back(std::log(distances[k]));
        }
    if (t.size() < 3) throw FitWindowError("fit_relaxation: fewer than three samples in the tail window");

    const double n = static_cast<double>(t.size());
    const double tm = std::accumulate(t.begin(), t.end(), 0.0) / n;
    const double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        sxy += (t[k] - tm) * (y[k] - ym);
        sxx += (t[k] - tm) * (t[k] - tm);
    }
    const double slope = sxy / sxx;
    if (!(slope < 0.0)) throw FitWindowError("fit_relaxation: distance is not decaying in the tail window");
    double ss = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double e = y[k] - (ym + slope * (t[k] - tm));
        ss += e * e;
    }
    RelaxationEstimate est;
    est.tau_fit = -1.0 / slope;
    est.t_start = t.front();
    est.t_end = t.back();
    est.residual = std::sqrt(ss / n);
    est.method = RelaxationMethod::trajectory_fit;
    if (est.residual > opts.max_residual) {
        std::ostringstream os;
        os << "fit_relaxation: log-linear residual " << est.residual << " exceeds " << opts.max_residual;
        throw FitWindowError(os.str());
    }
    return est;
}

double Plateau::decades() const { return std::log10(t_end / t_start); }

std::vector<Plateau> detect_plateau(std::span<const double> times, std::span<const double> values,
                                    const PlateauOptions& opts) {
    if (times.size() != values.size()) throw ArgumentError("detect_plateau: series lengths differ");
    std::vector<double> t, v;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] > 0.0) {
            if (!t.empty() && !(times[k] > t.back()))
                throw ArgumentError("detect_plateau: times must be strictly increasing");
            t.push_back(times[k]);
            v.push_back(values[k]);
        }
    std::vector<Plateau> out;
    if (t.size() < 2) return out;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double tol = opts.slope_tol.value_or(0.01 * (*hi - *lo));

    const auto close_run = [&](std::size_t a, std::size_t b) {
        Plateau p{t[a], t[b], 0.0};
        if (p.decades() < opts.min_decades) return;
        p.level = std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(a), v.begin() + static_cast<std::ptrdiff_t>(b) + 1, 0.0) /
                  static_cast<double>(b - a + 1);
        out.push_back(p);
    };
    std::size_t start = 0;
    bool open = false;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double slope = std::abs(v[k + 1] - v[k]) / std::log10(t[k + 1] / t[k]);
        if (slope <= tol) {
            if (!open) {
                start = k;
                open = true;
            }
        } else if (open) {
            close_run(start, k);
            open = false;
        }
    }
    if (open) close_run(start, t.size() - 1);
    return out;
}

std::vector<Plateau> detect_transient_plateaus(std::span<const double> times, std::span<const double> values,
                                               double t_stop, const PlateauOptions& opts) {
    if (times.size() != values.size()) throw ArgumentError("detect_transient_plateaus: series lengths differ");
    if (values.empty()) return {};
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    std::size_t a = 0;
    while (a < values.size() && values[a] < 0.05 * *hi) ++a;
    std::size_t b = a;
    while (b + 1 < times.size() && times[b + 1] <= t_stop) ++b;
    if (a >= b || b >= times.size()) return {};
    PlateauOptions po = opts;
    if (!po.slope_tol) po.slope_tol = 0.01 * (*hi - *lo);
    return detect_plateau(times.subspan(a, b - a + 1), values.subspan(a, b - a + 1), po);
}

TruncationResult check_truncation(const ModelBuilder& build, const ModelParams& p, const ObservableExtractor& extract,
                                  const TruncationOptions& opts) {
    if (opts.start < 1 || opts.cap < opts.start) throw ArgumentError("check_truncation: invalid cutoff range");
    TruncationResult result;
    for (int cutoff = opts.start; cutoff <= opts.cap; cutoff *= 2) {
        const double value = extract(build(make_space(cutoff), p));
        if (!result.history.empty()) {
            const auto [prev_cutoff, prev] = result.history.back();
            const double scale = std::max(std::abs(value), std::abs(prev));
            if (std::abs(value - prev) <= opts.rel_tol * scale) {
                result.history.emplace_back(cutoff, value);
                result.cutoff = prev_cutoff;
                result.value = prev;
                return result;
            }
        }
        result.history.emplace_back(cutoff, value);
    }
    std::ostringstream os;
    os << "check_truncation: observable not converged to " << opts.rel_tol << " below cutoff " << opts.cap;
    throw NonConvergenceError(os.str());
}

std::vector<double> log_time_grid(double t_min, double t_max, int points, bool include_zero) {
    if (!(t_min > 0.0) || !(t_max > t_min) || points < 2)
        throw ArgumentError("log_time_grid: need 0 < t_min < t_max and at least two points");
    std::vector<double> grid;
    if (include_zero) grid.push_back(0.0);
    const double a = std::log10(t_min), b = std::log10(t_max);
    for (int k = 0; k < points; ++k) grid.push_back(std::pow(10.0, a + (b - a) * k / (points - 1)));
    grid.back() = t_max;
    return grid;
}

std::vector<double> mutual_information_series(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const DensityMatrix& rho : traj.states) out.push_back(atomic_mutual_information(rho));
    return out;
}

} // namespace tcrelax
