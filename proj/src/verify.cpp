#include "tcrelax/verify.hpp"

#include "tcrelax/errors.hpp"
#include "tcrelax/observables.hpp"
#include "tcrelax/spectra.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace tcrelax::verify {

namespace {

std::string fmt(double x, int digits = 4) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

std::string fmt(cplx z) {
    std::ostringstream os;
    os << std::setprecision(6) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

DensityMatrix atomic_pure(std::initializer_list<cplx> amplitudes) {
    Vector psi(static_cast<Index>(amplitudes.size()));
    Index k = 0;
    for (const cplx a : amplitudes) psi(k++) = a;
    return DensityMatrix::pure(psi.normalized(), atomic_space());
}

// Shared state of one suite run.
class Context {
public:
    explicit Context(const Options& opts) : opts_(opts) {}

    // Every generator used by the suite goes through here.
    Superoperator generator(const std::string& where, MasterEquation me, bool materialize = false) {
        if (opts_.fault == Fault::half_convention) {
            for (Dissipator& d : me.dissipators) d.rate *= 0.5;
            for (CrossTerm& c : me.cross_terms) c.weight *= 0.5;
        }
        Superoperator sup = vectorize(me, materialize);
        monitor.observe(where, sup);
        return sup;
    }

    Trajectory record(const std::string& where, Trajectory traj) {
        monitor.observe(where, traj);
        return traj;
    }

    std::uint64_t seed() const { return opts_.seed; }

    InvariantMonitor monitor;

private:
    const Options& opts_;
};

using Details = std::vector<std::string>;

// ---------------------------------------------------------------------------

bool check_coherent_table(Context& ctx, Details& out) {
    std::mt19937_64 rng(ctx.seed());
    std::uniform_real_distribution<double> log_eps(std::log10(2.0), 3.0);
    std::uniform_real_distribution<double> g0_dist(0.05, 1.0);
    bool ok = true;
    for (int k = 0; k < 5; ++k) {
        ModelParams p;
        p.eps = std::pow(10.0, log_eps(rng));
        p.g0 = g0_dist(rng);
        const SpectrumReport rep = analyze(ctx.generator("effective coherent", build_effective_coherent(p), true));
        const SpectrumMatch m = compare_spectra(rep, analytic_coherent(p), 1e-10);
        ok = ok && m.ok;
        out.push_back("eps=" + fmt(p.eps, 6) + " g0=" + fmt(p.g0, 6) + ": max rel err " + fmt(m.max_relative_error, 3) +
                      (m.multiplicities_agree ? ", multiplicities exact" : ", multiplicities DIFFER") +
                      (m.unmatched.empty() ? "" : ", unmatched clusters present"));
    }
    return ok;
}

bool check_incoherent_table(Context& ctx, Details& out) {
    std::mt19937_64 rng(ctx.seed() + 1);
    std::uniform_real_distribution<double> g0_dist(0.01, 1.0);
    bool ok = true;
    for (const double n : {0.0, 0.5, 1.0, 2.0, 10.0}) {
        ModelParams p;
        p.n_th = n;
        p.g0 = g0_dist(rng);
        const SpectrumReport rep = analyze(ctx.generator("effective incoherent", build_effective_incoherent(p), true));
        const SpectrumMatch m = compare_spectra(rep, analytic_incoherent(p), 1e-10);
        ok = ok && m.ok;
        out.push_back("n_th=" + fmt(n) + " g0=" + fmt(p.g0, 6) + ": max rel err " + fmt(m.max_relative_error, 3) +
                      (m.multiplicities_agree ? ", multiplicities exact" : ", multiplicities DIFFER") +
                      (m.unmatched.empty() ? "" : ", unmatched clusters present"));
    }
    return ok;
}

bool check_gap_formulas(Context& ctx, Details& out) {
    bool ok = true;
    std::mt19937_64 rng(ctx.seed() + 2);
    std::uniform_real_distribution<double> log_eps(std::log10(2.0), 3.0);
    std::uniform_real_distribution<double> g0_dist(0.05, 1.0);
    double worst_c = 0.0;
    for (int k = 0; k < 5; ++k) {
        ModelParams p;
        p.eps = std::pow(10.0, log_eps(rng));
        p.g0 = g0_dist(rng);
        const SpectrumReport rep = analyze(ctx.generator("effective coherent", build_effective_coherent(p), true));
        const double formula = p.kappa / std::pow(2.0 * p.eps / p.kappa, 2);
        worst_c = std::max(worst_c, rel_err(rep.gap, formula));
    }
    ok = ok && worst_c <= 1e-10;
    out.push_back("coherent gap vs kappa (2 eps/kappa)^-2 at 5 random points: max rel err " + fmt(worst_c, 3));

    double worst_i = 0.0;
    for (const double n : {0.5, 1.0, 2.0, 10.0})
        for (const double g0 : {0.01, 0.1, 0.5}) {
            ModelParams p;
            p.n_th = n;
            p.g0 = g0;
            const SpectrumReport rep = analyze(ctx.generator("effective incoherent", build_effective_incoherent(p), true));
            const double formula = 2.0 * n * std::pow(g0 / p.kappa, 2) * p.kappa;
            worst_i = std::max(worst_i, rel_err(rep.gap, formula));
        }
    ok = ok && worst_i <= 1e-10;
    out.push_back("incoherent gap vs 2 n_th (g0/kappa)^2 kappa, n_th in {0.5,1,2,10} x g0 in {0.01,0.1,0.5}: max rel err " +
                  fmt(worst_i, 3));
    return ok;
}

bool check_exact_gap(Context& ctx, Details& out) {
    bool ok = true;
    SpectrumOptions so;
    so.condition = false;
    for (const double g0 : {0.125, 0.25, 0.5}) {
        std::vector<double> errors;
        for (const double eps : {10.0, 30.0, 100.0}) {
            ModelParams p;
            p.g0 = g0;
            p.eps = eps;
            const SpectrumReport coarse =
                analyze(ctx.generator("displaced exact c6", build_coherent_displaced(make_space(6), p), true), so);
            const SpectrumReport rep =
                analyze(ctx.generator("displaced exact c8", build_coherent_displaced(make_space(8), p), true), so);
            const AnalyticSpectrum table = analytic_coherent(p);
            const double err = rel_err(rep.gap, table.gap());
            const double trunc = rel_err(coarse.gap, rep.gap);
            errors.push_back(err);
            std::string line = "g0=" + fmt(g0) + " eps=" + fmt(eps) + ": gap " + fmt(rep.gap, 8) + " vs " +
                               fmt(table.gap(), 8) + " (rel " + fmt(err, 3) + "), cutoff 6 vs 8 rel " + fmt(trunc, 3);
            ok = ok && trunc <= 1e-3;
            if (eps == 100.0) {
                ok = ok && err <= 0.1;
                const SplittingDiagnostic sd = splitting_diagnostic(rep);
                const double lambda3 = -(4.0 * gamma_g0(p) + 2.0 * gamma_eps(p));
                const double err3 = sd.available ? rel_err(sd.separated_rate, -lambda3) : 1.0;
                ok = ok && err3 <= 0.1;
                line += "; separated rate " + fmt(sd.separated_rate, 8) + " vs -lambda3 " + fmt(-lambda3, 8) + " (rel " +
                        fmt(err3, 3) + ")";
            }
            out.push_back(line);
        }
        const bool improves = errors.back() <= errors.front();
        ok = ok && improves;
        out.push_back("g0=" + fmt(g0) + ": agreement " + (improves ? "improves" : "does NOT improve") + " from eps=10 to eps=100");
    }
    return ok;
}

bool check_isospectral(Context& ctx, Details& out) {
    ModelParams p;
    p.g0 = 0.25;
    p.eps = 2.0;
    const SpectrumReport disp =
        analyze(ctx.generator("displaced exact c8", build_coherent_displaced(make_space(8), p), true));
    std::vector<cplx> reference(disp.eigenvalues.begin(), disp.eigenvalues.begin() + 10);
    const double floor = disp.gap;

    bool ok = true;
    for (const int cutoff : {20, 24}) {
        TargetedOptions to;
        to.krylov.nev = 16;
        const SpectrumReport lab =
            analyze_targeted(ctx.generator("lab exact c" + std::to_string(cutoff), build_coherent(make_space(cutoff), p)), to);
        std::vector<bool> used(lab.eigenvalues.size(), false);
        double worst = 0.0;
        bool complete = true;
        for (const cplx ref : reference) {
            std::size_t best = lab.eigenvalues.size();
            double dist = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < lab.eigenvalues.size(); ++k)
                if (!used[k] && std::abs(lab.eigenvalues[k] - ref) < dist) {
                    dist = std::abs(lab.eigenvalues[k] - ref);
                    best = k;
                }
            if (best == lab.eigenvalues.size()) {
                complete = false;
                break;
            }
            used[best] = true;
            worst = std::max(worst, dist / std::max(std::abs(ref), floor));
        }
        ok = ok && complete && worst <= 1e-3;
        out.push_back("lab cutoff " + std::to_string(cutoff) + " vs displaced cutoff 8, 10 slowest: max rel diff " +
                      fmt(worst, 3) + (complete ? "" : " (too few lab eigenvalues)"));
    }
    out.push_back("slowest displaced eigenvalues: " + fmt(reference[2]) + ", " + fmt(reference[3]) + ", ...");
    return ok;
}

bool check_relaxation_fit(Context& ctx, Details& out) {
    bool ok = true;
    const auto run = [&](const std::string& label, const Superoperator& sup, const DensityMatrix& rho0,
                         const std::vector<double>& grid, double target) {
        const DensityMatrix ss = steady_state(sup, rho0);
        const Trajectory traj = ctx.record(label, evolve_ode(sup, rho0, grid));
        const RelaxationEstimate est = fit_relaxation(traj, ss);
        const double err = rel_err(est.tau_fit, target);
        ok = ok && err <= 0.05;
        out.push_back(label + ": tau_fit " + fmt(est.tau_fit, 6) + " vs " + fmt(target) + " (rel " + fmt(err, 3) +
                      "), window [" + fmt(est.t_start) + ", " + fmt(est.t_end) + "], residual " + fmt(est.residual, 3));
    };

    ModelParams pc;
    pc.g0 = 0.25;
    pc.eps = 10.0;
    // |++> in the dressed basis; |gg> is orthogonal to the slowest mode.
    run("coherent eps=10 from |++>", ctx.generator("effective coherent", build_effective_coherent(pc), true),
        atomic_pure({0.5, 0.5, 0.5, 0.5}), log_time_grid(0.1, 6000.0, 300), 400.0);

    ModelParams pi;
    pi.g0 = 0.1;
    pi.n_th = 1.0;
    // |gg> never populates the slowest mode either.
    run("incoherent n_th=1 from (|gg>+|eg>)/sqrt2", ctx.generator("effective incoherent", build_effective_incoherent(pi), true),
        atomic_pure({1.0, 0.0, 1.0, 0.0}), log_time_grid(0.1, 1000.0, 300), 50.0);
    return ok;
}

bool check_metastability(Context& ctx, Details& out) {
    bool ok = true;
    {
        ModelParams p;
        p.g0 = 0.25;
        p.eps = 1000.0;
        const Superoperator sup = ctx.generator("effective coherent", build_effective_coherent(p), true);
        const SpectrumReport rep = analyze(sup);
        const SplittingDiagnostic sd = splitting_diagnostic(rep);
        const DensityMatrix rho0 = ground_state(atomic_space());
        const std::vector<double> grid = log_time_grid(0.01, 1e8, 400);
        const std::vector<double> mi =
            mutual_information_series(ctx.record("coherent eps=1000", evolve_ode(sup, rho0, grid)));
        const std::vector<Plateau> found = detect_transient_plateaus(grid, mi, 5.0 / rep.gap);
        const double oracle = slow_projection_mutual_information(sup, rho0, sd.separated_rate);
        const Plateau* best = nullptr;
        for (const Plateau& pl : found)
            if (pl.t_start >= 1.0 / sd.separated_rate && pl.t_end <= 1.0 / rep.gap && pl.decades() >= 2.0 &&
                (!best || pl.decades() > best->decades()))
                best = &pl;
        const bool split = sd.available && sd.ratio > 1e4;
        ok = ok && split && best;
        out.push_back("coherent eps=1000 g0=1/4: splitting ratio " + fmt(sd.ratio, 4) + ", window (1/rate, 1/gap) = (" +
                      fmt(1.0 / sd.separated_rate) + ", " + fmt(1.0 / rep.gap) + ")");
        if (best) {
            const double level_err = std::abs(best->level - oracle) / oracle;
            ok = ok && level_err <= 0.02;
            out.push_back("plateau [" + fmt(best->t_start) + ", " + fmt(best->t_end) + "] spans " + fmt(best->decades(), 3) +
                          " decades at " + fmt(best->level, 6) + " bits; slow-mode projection " + fmt(oracle, 6) +
                          " bits (rel " + fmt(level_err, 3) + ")");
        } else {
            out.push_back("no plateau of >= 2 decades inside the window");
        }
    }
    {
        ModelParams p;
        p.g0 = 0.01;
        p.n_th = 10.0;
        const Superoperator sup = ctx.generator("effective incoherent", build_effective_incoherent(p), true);
        const SpectrumReport rep = analyze(sup);
        const std::vector<double> grid = log_time_grid(0.01, 1e5, 400);
        const std::vector<double> mi = mutual_information_series(
            ctx.record("incoherent n_th=10", evolve_ode(sup, ground_state(atomic_space()), grid)));
        const std::vector<Plateau> found = detect_transient_plateaus(grid, mi, 5.0 / rep.gap);
        ok = ok && found.empty();
        out.push_back("incoherent n_th=10 g0=0.01: " + std::to_string(found.size()) + " plateau(s) before 5/gap = " +
                      fmt(5.0 / rep.gap) + (found.empty() ? "" : ", first at " + fmt(found.front().t_start)));
    }
    return ok;
}

double max_gap_after(const std::vector<double>& t, const std::vector<double>& a, const std::vector<double>& b,
                     double t_min, double& where) {
    double worst = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] > t_min && std::abs(a[k] - b[k]) > worst) {
            worst = std::abs(a[k] - b[k]);
            where = t[k];
        }
    return worst;
}

Trajectory spectral_run(const Superoperator& sup, const DensityMatrix& rho0, const std::vector<double>& grid) {
    return evolve_spectral(eig_general(sup.to_dense()), rho0, grid);
}

bool check_effective_vs_exact(Context& ctx, Details& out) {
    bool ok = true;
    {
        ModelParams p;
        p.g0 = 0.25;
        p.eps = 10.0;
        const std::vector<double> grid = log_time_grid(0.1, 4000.0, 120);
        const Superoperator eff = ctx.generator("effective coherent", build_effective_coherent(p), true);
        const std::vector<double> mi_eff =
            mutual_information_series(ctx.record("effective coherent eps=10", evolve_ode(eff, ground_state(eff.space()), grid)));
        std::vector<double> mi_exact;
        for (const int cutoff : {4, 6}) {
            const Superoperator ex = ctx.generator("displaced exact c" + std::to_string(cutoff),
                                                   build_coherent_displaced(make_space(cutoff), p), true);
            const std::vector<double> mi = mutual_information_series(ctx.record(
                "displaced exact eps=10 c" + std::to_string(cutoff), spectral_run(ex, ground_state(ex.space()), grid)));
            if (!mi_exact.empty()) {
                double at = 0.0;
                const double trunc = max_gap_after(grid, mi, mi_exact, 0.0, at);
                ok = ok && trunc <= 1e-3;
                out.push_back("coherent: cutoff 4 vs 6 max |dMI| " + fmt(trunc, 3) + " bits");
            }
            mi_exact = mi;
        }
        double at = 0.0;
        const double diff = max_gap_after(grid, mi_exact, mi_eff, 10.0, at);
        ok = ok && diff <= 2e-2;
        out.push_back("coherent eps=10 g0=1/4 (displaced, cutoff 6): max |dMI| for t > 10 = " + fmt(diff, 4) + " bits at t=" +
                      fmt(at));
    }
    for (const auto& [n, cutoff] : {std::pair{1.0, 24}, std::pair{3.0, 48}}) {
        ModelParams p;
        p.g0 = 0.01;
        p.n_th = n;
        const Superoperator eff = ctx.generator("effective incoherent", build_effective_incoherent(p), true);
        const Superoperator ex = ctx.generator("lab incoherent c" + std::to_string(cutoff), build_incoherent(make_space(cutoff), p));
        const double t_end = 5.0 / (2.0 * n * gamma_incoherent(p));
        const std::vector<double> grid = log_time_grid(0.1, t_end, 120);
        const std::string tag = "n_th=" + fmt(n);
        const std::vector<double> a =
            mutual_information_series(ctx.record("lab incoherent " + tag, evolve_ode(ex, ground_state(ex.space()), grid)));
        const std::vector<double> b =
            mutual_information_series(ctx.record("effective incoherent " + tag, evolve_ode(eff, ground_state(eff.space()), grid)));
        double at = 0.0;
        const double diff = max_gap_after(grid, a, b, 10.0, at);
        ok = ok && diff <= 2e-2;
        out.push_back("incoherent " + tag + " g0=0.01 (lab, cutoff " + std::to_string(cutoff) + "): max |dMI| for t > 10 = " +
                      fmt(diff, 4) + " bits at t=" + fmt(at) + "; final MI " + fmt(a.back(), 4) + " vs " + fmt(b.back(), 4));
    }
    return ok;
}

bool check_real_detector(Context& ctx, Details& out) {
    bool ok = true;
    const std::vector<double> grid = log_time_grid(0.1, 1e6, 200);
    const auto judge = [&](const std::string& label, const std::vector<double>& mi, double steady_mi, int kernel_dim) {
        const auto peak = std::max_element(mi.begin(), mi.end());
        const double t_peak = grid[static_cast<std::size_t>(peak - mi.begin())];
        const bool rise = *peak > 1e-2 && t_peak > grid[1] && t_peak < grid.back();
        const bool fall = steady_mi < 1e-3 && mi.back() < 1e-3;
        ok = ok && rise && fall && kernel_dim == 1;
        out.push_back(label + ": peak " + fmt(*peak, 4) + " bits at t=" + fmt(t_peak) + ", final " + fmt(mi.back(), 3) +
                      ", steady " + fmt(steady_mi, 3) + " bits, kernel dim " + std::to_string(kernel_dim));
    };
    {
        ModelParams p;
        p.g0 = 0.1;
        p.eps = std::sqrt(10.0);
        p.gamma = 1e-3;
        const Superoperator sup = ctx.generator("full displaced c6", build_full_displaced(make_space(6), p), true);
        const EigenDecomposition dec = eig_general(sup.to_dense());
        const std::vector<cplx> values(dec.eigenvalues.data(), dec.eigenvalues.data() + dec.eigenvalues.size());
        double radius = 0.0;
        for (const cplx v : values) radius = std::max(radius, std::abs(v));
        const SpectrumReport rep = summarize_spectrum(values, radius);
        const std::vector<double> mi = mutual_information_series(
            ctx.record("full displaced gamma=1e-3", evolve_spectral(dec, ground_state(sup.space()), grid)));
        judge("coherent eps=sqrt10 gamma=1e-3 (displaced, cutoff 6)", mi, atomic_mutual_information(steady_state(sup)),
              rep.kernel_dim);
    }
    {
        ModelParams p;
        p.g0 = 0.1;
        p.n_th = 10.0;
        p.gamma = 1e-3;
        const int cutoff = 80;
        const Superoperator sup = ctx.generator("full lab c80", build_full(make_space(cutoff), p));
        TargetedOptions to;
        to.krylov.nev = 4;
        const SpectrumReport rep = analyze_targeted(sup, to);
        const std::vector<double> mi = mutual_information_series(
            ctx.record("full lab n_th=10 gamma=1e-3", evolve_ode(sup, ground_state(sup.space()), grid)));
        judge("incoherent n_th=10 gamma=1e-3 (lab, cutoff 80)", mi, atomic_mutual_information(steady_state(sup)),
              rep.kernel_dim);
    }
    return ok;
}

bool check_invariants(Context& ctx, Details& out) {
    const std::vector<std::string> lines = ctx.monitor.summary();
    out.insert(out.end(), lines.begin(), lines.end());
    return ctx.monitor.ok() && ctx.monitor.generators() > 0;
}

using CheckFn = bool (*)(Context&, Details&);

struct Criterion {
    const char* name;
    CheckFn fn;
};

constexpr Criterion criteria[criterion_count] = {
    {"coherent effective spectrum vs closed-form table", check_coherent_table},
    {"incoherent effective spectrum vs closed-form table", check_incoherent_table},
    {"gap formulas", check_gap_formulas},
    {"exact displaced gap vs closed form", check_exact_gap},
    {"lab vs displaced isospectrality", check_isospectral},
    {"relaxation-time fits", check_relaxation_fit},
    {"metastable plateau", check_metastability},
    {"effective vs exact mutual information", check_effective_vs_exact},
    {"real-detector time window", check_real_detector},
    {"trajectory and generator invariants", check_invariants},
};

} // namespace

void InvariantMonitor::observe(const std::string& where, const Trajectory& traj) {
    trajectories_.emplace_back(where, traj.worst);
}

void InvariantMonitor::observe(const std::string& where, const Superoperator& sup) {
    generators_.emplace_back(where, sup.trace_functional_defect());
}

bool InvariantMonitor::ok() const {
    for (const auto& [where, d] : trajectories_)
        if (!(d.hermiticity <= state_tol && d.trace <= state_tol && d.negativity <= state_tol)) return false;
    for (const auto& [where, d] : generators_)
        if (!(d <= generator_tol)) return false;
    return true;
}

std::vector<std::string> InvariantMonitor::summary() const {
    StateDefects worst;
    std::string herm_at, trace_at, neg_at, gen_at;
    for (const auto& [where, d] : trajectories_) {
        if (d.hermiticity >= worst.hermiticity) worst.hermiticity = d.hermiticity, herm_at = where;
        if (d.trace >= worst.trace) worst.trace = d.trace, trace_at = where;
        if (d.negativity >= worst.negativity) worst.negativity = d.negativity, neg_at = where;
    }
    double gen = 0.0;
    for (const auto& [where, d] : generators_)
        if (d >= gen) gen = d, gen_at = where;
    return {
        std::to_string(trajectories_.size()) + " trajectories, slack " + fmt(state_tol, 2) + ": hermiticity " +
            fmt(worst.hermiticity, 3) + " (" + herm_at + "), trace " + fmt(worst.trace, 3) + " (" + trace_at +
            "), negativity " + fmt(worst.negativity, 3) + " (" + neg_at + ")",
        std::to_string(generators_.size()) + " generators: max |Tr L(.)| / ||L||_1 = " + fmt(gen, 3) + " (" + gen_at +
            "), slack " + fmt(generator_tol, 2),
    };
}

bool Report::all_passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string criterion_name(int id) {
    if (id < 1 || id > criterion_count) throw ArgumentError("criterion_name: id out of range");
    return criteria[id - 1].name;
}

Report run_suite(const Options& opts) {
    for (const int id : opts.only)
        if (id < 1 || id > criterion_count) throw ArgumentError("run_suite: unknown criterion " + std::to_string(id));
    Context ctx(opts);
    Report report;
    for (int id = 1; id <= criterion_count; ++id) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
        CheckResult r;
        r.id = id;
        r.name = criteria[id - 1].name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.passed = criteria[id - 1].fn(ctx, r.details);
        } catch (const std::exception& e) {
            r.passed = false;
            r.details.push_back(std::string("error: ") + e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (opts.progress) opts.progress(r);
        report.checks.push_back(std::move(r));
    }
    return report;
}

std::string format_report(const Report& report, bool with_details) {
    std::ostringstream os;
    for (const CheckResult& c : report.checks) {
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << " (" << std::fixed << std::setprecision(1)
           << c.seconds << " s)\n";
        os.unsetf(std::ios::floatfield);
        if (with_details)
            for (const std::string& d : c.details) os << "       " << d << "\n";
    }
    return os.str();
}

double slow_projection_mutual_information(const Superoperator& sup, const DensityMatrix& rho0, double separated_rate) {
    const double rate_cut = 0.5 * separated_rate;
    const EigenDecomposition dec = eig_general(sup.to_dense());
    const Vector c = dec.right_vectors.partialPivLu().solve(vectorize_state(rho0.matrix()));
    Vector x = Vector::Zero(c.size());
    for (Index k = 0; k < c.size(); ++k)
        if (-dec.eigenvalues(k).real() < rate_cut) x += c(k) * dec.right_vectors.col(k);
    return atomic_mutual_information(DensityMatrix::unchecked(devectorize_state(x, rho0.dim()), rho0.space()));
}

} // namespace tcrelax::verify
