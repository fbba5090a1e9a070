#include "tcrelax/ode.hpp"

#include "tcrelax/errors.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <list>
#include <memory>
#include <sstream>

namespace tcrelax {

namespace {

double scaled_max_error(const Vector& err, const Vector& y_old, const Vector& y_new, double rtol,
                        double atol) {
    double worst = 0.0;
    for (Index i = 0; i < err.size(); ++i) {
        const double scale = atol + rtol * std::max(std::abs(y_old(i)), std::abs(y_new(i)));
        worst = std::max(worst, std::abs(err(i)) / scale);
    }
    return worst;
}

void check_inputs(Index dim, const Vector& y0, std::span<const double> t_grid) {
    validate_time_grid(t_grid);
    if (y0.size() != dim) throw ShapeError("integrate_ode: initial vector does not match generator");
    if (!y0.allFinite()) throw ArgumentError("integrate_ode: initial vector has non-finite entries");
}

[[noreturn]] void throw_underflow(double t, double h) {
    std::ostringstream os;
    os << "integrate_ode: step size underflow (h=" << h << " at t=" << t
       << "); the generator is too stiff for this integrator, use the implicit method or the "
          "spectral-decomposition path";
    throw StiffnessError(os.str());
}

// Dormand–Prince 5(4) tableau.
namespace dp {
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
} // namespace dp

void run_explicit(const LinearApplier& apply, const Vector& y0, std::span<const double> t_grid,
                  const SampleSink& sink, const OdeOptions& opts, OdeStats* stats) {
    const Index n = y0.size();
    Vector y = y0;
    Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n), err(n);
    apply(y, k1);

    // Starting step (Hairer–Nørsett–Wanner heuristic, first half).
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = k1.cwiseAbs().maxCoeff();
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    if (t_grid.size() > 1) h = std::min(h, t_grid.back());

    OdeStats local;
    local.method = OdeMethod::explicit_rk;
    double t = 0.0;
    sink(0, 0.0, y);
    std::size_t steps = 0;

    for (std::size_t g = 1; g < t_grid.size(); ++g) {
        const double target = t_grid[g];
        while (t < target) {
            if (++steps > opts.max_steps) {
                std::ostringstream os;
                os << "integrate_ode: step budget " << opts.max_steps << " exhausted at t=" << t
                   << " (target " << target
                   << "); the generator is stiff, use the implicit method or the "
                      "spectral-decomposition path";
                throw StiffnessError(os.str());
            }
            const bool clipped = t + h >= target;
            const double step = clipped ? target - t : h;
            if (step < opts.min_step_rel * std::max(std::abs(t), 1.0)) throw_underflow(t, step);

            tmp = y + step * dp::a21 * k1;
            apply(tmp, k2);
            tmp = y + step * (dp::a31 * k1 + dp::a32 * k2);
            apply(tmp, k3);
            tmp = y + step * (dp::a41 * k1 + dp::a42 * k2 + dp::a43 * k3);
            apply(tmp, k4);
            tmp = y + step * (dp::a51 * k1 + dp::a52 * k2 + dp::a53 * k3 + dp::a54 * k4);
            apply(tmp, k5);
            tmp = y + step * (dp::a61 * k1 + dp::a62 * k2 + dp::a63 * k3 + dp::a64 * k4 +
                              dp::a65 * k5);
            apply(tmp, k6);
            y_new = y + step * (dp::b1 * k1 + dp::b3 * k3 + dp::b4 * k4 + dp::b5 * k5 + dp::b6 * k6);
            apply(y_new, k7);
            err = step * (dp::e1 * k1 + dp::e3 * k3 + dp::e4 * k4 + dp::e5 * k5 + dp::e6 * k6 +
                          dp::e7 * k7);
            const double e = scaled_max_error(err, y, y_new, opts.rtol, opts.atol);
            if (!std::isfinite(e)) throw NumericalError("integrate_ode: non-finite error estimate");

            const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
            if (e <= 1.0) {
                ++local.accepted;
                t = clipped ? target : t + step;
                y.swap(y_new);
                k1.swap(k7);
                // A clipped step says nothing about the natural step size.
                if (!clipped || factor < 1.0) h = std::max(h, step) * factor;
            } else {
                ++local.rejected;
                h = step * std::max(factor, 0.2);
            }
        }
        sink(g, target, y);
    }
    if (stats) *stats = local;
}

// TR-BDF2 as a stiffly accurate ESDIRK with gamma = 2 - sqrt(2).
namespace trbdf2 {
const double gamma = 2.0 - std::sqrt(2.0);
const double d = gamma / 2.0;
const double w = std::sqrt(2.0) / 4.0;
// b - bhat, bhat being the embedded third-order weights.
const double e1 = w - (1.0 - w) / 3.0;
const double e2 = w - (3.0 * w + 1.0) / 3.0;
const double e3 = d - d / 3.0;
} // namespace trbdf2

class FactorizationCache {
public:
    using Solver = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

    FactorizationCache(const SparseMatrix& generator, std::size_t capacity, OdeStats& stats)
        : generator_(generator), identity_(sparse_identity(generator.rows())),
          capacity_(std::max<std::size_t>(capacity, 1)), stats_(stats) {}

    /// LU of I - (2^{q/4} * d) L.
    Solver& get(int q) {
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->first == q) {
                entries_.splice(entries_.begin(), entries_, it);
                return *entries_.front().second;
            }
        }
        auto solver = std::make_unique<Solver>();
        const SparseMatrix m = identity_ - (step_of(q) * trbdf2::d) * generator_;
        solver->analyzePattern(m);
        solver->factorize(m);
        if (solver->info() != Eigen::Success)
            throw NumericalError("integrate_ode: LU factorization of I - h d L failed");
        ++stats_.factorizations;
        entries_.emplace_front(q, std::move(solver));
        if (entries_.size() > capacity_) entries_.pop_back();
        return *entries_.front().second;
    }

    static double step_of(int q) { return std::exp2(q / 4.0); }
    static int quantize(double h) { return static_cast<int>(std::floor(4.0 * std::log2(h))); }

private:
    const SparseMatrix& generator_;
    SparseMatrix identity_;
    std::size_t capacity_;
    OdeStats& stats_;
    std::list<std::pair<int, std::unique_ptr<Solver>>> entries_;
};

void run_implicit(const SparseMatrix& generator, const Vector& y0, std::span<const double> t_grid,
                  const SampleSink& sink, const OdeOptions& opts, OdeStats* stats) {
    using namespace trbdf2;
    const Index n = y0.size();
    OdeStats local;
    local.method = OdeMethod::implicit_trbdf2;
    FactorizationCache cache(generator, opts.factorization_cache, local);

    Vector y = y0, f1 = generator * y0;
    Vector rhs(n), y2(n), f2(n), y3(n), f3(n), est(n);

    double h0 = t_grid.size() > 1 ? t_grid[1] : 1.0;
    const double norm = one_norm(generator);
    if (norm > 0.0) h0 = std::min(h0, 0.1 / norm);
    int q = FactorizationCache::quantize(std::max(h0, 1e-12));

    double t = 0.0;
    sink(0, 0.0, y);
    std::size_t g = 1;
    std::size_t steps = 0;
    while (g < t_grid.size()) {
        const double h = FactorizationCache::step_of(q);
        if (h < opts.min_step_rel * std::max(std::abs(t), 1.0)) throw_underflow(t, h);
        if (++steps > opts.max_steps)
            throw StiffnessError("integrate_ode: implicit step budget exhausted");
        auto& lu = cache.get(q);

        rhs = y + (h * d) * f1;
        y2 = lu.solve(rhs);
        f2 = generator * y2;
        rhs = y + (h * w) * (f1 + f2);
        y3 = lu.solve(rhs);
        f3 = generator * y3;
        rhs = h * (e1 * f1 + e2 * f2 + e3 * f3);
        est = lu.solve(rhs);
        const double e = scaled_max_error(est, y, y3, opts.rtol, opts.atol);
        if (!std::isfinite(e)) throw NumericalError("integrate_ode: non-finite error estimate");

        const double factor = e == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(e, -1.0 / 3.0), 0.2, 4.0);
        if (e > 1.0) {
            ++local.rejected;
            q = std::min(q - 1, FactorizationCache::quantize(h * factor));
            continue;
        }
        ++local.accepted;
        const double t_next = t + h;
        // Cubic Hermite dense output on [t, t_next].
        while (g < t_grid.size() && t_grid[g] <= t_next) {
            const double s = (t_grid[g] - t) / h;
            const double s2 = s * s, s3 = s2 * s;
            const Vector sample = (2 * s3 - 3 * s2 + 1) * y + (s3 - 2 * s2 + s) * h * f1 +
                                  (-2 * s3 + 3 * s2) * y3 + (s3 - s2) * h * f3;
            sink(g, t_grid[g], sample);
            ++g;
        }
        t = t_next;
        y.swap(y3);
        f1.swap(f3);
        const int proposal = FactorizationCache::quantize(h * factor);
        // Hysteresis: keep the cached factorization unless the change is worthwhile.
        if (proposal < q || proposal >= q + 2) q = proposal;
    }
    if (stats) *stats = local;
}

} // namespace

void validate_time_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) throw ArgumentError("time grid is empty");
    if (t_grid.front() != 0.0) throw ArgumentError("time grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1]) || !std::isfinite(t_grid[i]))
            throw ArgumentError("time grid must be finite and strictly increasing");
    }
}

double one_norm(const SparseMatrix& a) {
    double best = 0.0;
    for (Index j = 0; j < a.outerSize(); ++j) {
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(a, j); it; ++it) col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

void integrate_ode_streaming(const LinearApplier& apply, const Vector& y0,
                             std::span<const double> t_grid, const SampleSink& sink,
                             const OdeOptions& opts, OdeStats* stats) {
    check_inputs(y0.size(), y0, t_grid);
    if (opts.method == OdeMethod::implicit_trbdf2)
        throw ArgumentError("integrate_ode: implicit method needs a materialized sparse generator");
    run_explicit(apply, y0, t_grid, sink, opts, stats);
}

void integrate_ode_streaming(const SparseMatrix& generator, const Vector& y0,
                             std::span<const double> t_grid, const SampleSink& sink,
                             const OdeOptions& opts, OdeStats* stats) {
    if (generator.rows() != generator.cols()) throw ShapeError("integrate_ode: generator not square");
    check_inputs(generator.rows(), y0, t_grid);
    OdeMethod method = opts.method;
    if (method == OdeMethod::automatic) {
        const double stiffness = one_norm(generator) * t_grid.back();
        method = stiffness > opts.stiffness_switch ? OdeMethod::implicit_trbdf2 : OdeMethod::explicit_rk;
    }
    if (method == OdeMethod::implicit_trbdf2) {
        run_implicit(generator, y0, t_grid, sink, opts, stats);
        return;
    }
    const LinearApplier apply = [&generator](const Vector& x, Vector& y) { y.noalias() = generator * x; };
    run_explicit(apply, y0, t_grid, sink, opts, stats);
}

std::vector<Vector> integrate_ode(const LinearApplier& apply, const Vector& y0,
                                  std::span<const double> t_grid, const OdeOptions& opts,
                                  OdeStats* stats) {
    std::vector<Vector> out(t_grid.size());
    integrate_ode_streaming(
        apply, y0, t_grid, [&out](std::size_t i, double, const Vector& y) { out[i] = y; }, opts, stats);
    return out;
}

std::vector<Vector> integrate_ode(const SparseMatrix& generator, const Vector& y0,
                                  std::span<const double> t_grid, const OdeOptions& opts,
                                  OdeStats* stats) {
    std::vector<Vector> out(t_grid.size());
    integrate_ode_streaming(
        generator, y0, t_grid, [&out](std::size_t i, double, const Vector& y) { out[i] = y; }, opts,
        stats);
    return out;
}

} // namespace tcrelax
