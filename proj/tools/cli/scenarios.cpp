#include "scenarios.hpp"

#include "tcrelax/dynamics.hpp"
#include "tcrelax/errors.hpp"
#include "tcrelax/observables.hpp"
#include "tcrelax/spectra.hpp"
#include "tcrelax/verify.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace tcrelax::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

const std::vector<Column>& param_columns() {
    static const std::vector<Column> cols = {
        {"kappa", "rate", "cavity decay rate (always 1)"},
        {"g0", "kappa", "atom-field coupling"},
        {"eps", "kappa", "coherent drive amplitude"},
        {"n_th", "photons", "thermal occupation of the bath"},
        {"gamma", "kappa", "atomic spontaneous emission rate"},
        {"cutoff", "levels", "Fock cutoff of the exact model (nan when no exact model was run)"},
    };
    return cols;
}

std::vector<Column> with_params(std::initializer_list<Column> extra) {
    std::vector<Column> cols = param_columns();
    cols.insert(cols.end(), extra.begin(), extra.end());
    return cols;
}

std::vector<double> row_of(const ModelParams& p, double cutoff, std::initializer_list<double> values) {
    std::vector<double> row = {p.kappa, p.g0, p.eps, p.n_th, p.gamma, cutoff};
    row.insert(row.end(), values.begin(), values.end());
    return row;
}

std::string label(const ModelParams& p, std::initializer_list<const char*> keys) {
    std::ostringstream os;
    os.precision(4);
    bool first = true;
    for (const std::string k : keys) {
        os << (first ? "" : " ") << k << "=";
        first = false;
        if (k == "g0") os << p.g0;
        else if (k == "eps") os << p.eps;
        else if (k == "n_th") os << p.n_th;
        else if (k == "gamma") os << p.gamma;
    }
    return os.str();
}

nlohmann::json params_json(const ModelParams& p) {
    return {{"kappa", p.kappa}, {"g0", p.g0}, {"eps", p.eps}, {"n_th", p.n_th}, {"gamma", p.gamma}};
}

// The coherent gap falls as kappa^3 / (4 eps^2) while the spectral radius grows with eps;
// the default zero threshold would swallow the gap at large drive.
SpectrumOptions sweep_options(bool condition) {
    SpectrumOptions so;
    so.condition = condition;
    so.zero_tol = 1e-13;
    return so;
}

// Long exact runs can end with states whose roundoff exceeds the entropy slack;
// those samples are reported as nan and counted instead of aborting the run.
double guarded_mi(const DensityMatrix& rho, int& rejected) {
    try {
        return atomic_mutual_information(rho);
    } catch (const StateValidityError&) {
        ++rejected;
        return nan;
    }
}

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

class Runner {
public:
    Runner(const ScenarioConfig& cfg, const Progress& progress) : cfg_(cfg), progress_(progress) {}

    MasterEquation prepared(MasterEquation me) const {
        if (cfg_.fault == Fault::half_convention) {
            for (Dissipator& d : me.dissipators) d.rate *= 0.5;
            for (CrossTerm& c : me.cross_terms) c.weight *= 0.5;
        }
        return me;
    }

    Superoperator generator(MasterEquation me, bool materialize = false) const {
        return vectorize(prepared(std::move(me)), materialize);
    }

    void note(const std::string& s) const {
        if (progress_) progress_(s);
    }

    /// Sweep points ordered by (g0, eps, n_th, gamma).
    std::vector<ModelParams> points() const {
        std::vector<ModelParams> out;
        const auto or_zero = [](const std::vector<double>& v) { return v.empty() ? std::vector<double>{0.0} : v; };
        for (const double g0 : or_zero(cfg_.g0))
            for (const double eps : or_zero(cfg_.eps))
                for (const double n : or_zero(cfg_.n_th))
                    for (const double gamma : or_zero(cfg_.gamma)) {
                        ModelParams p;
                        p.g0 = g0;
                        p.eps = eps;
                        p.n_th = n;
                        p.gamma = gamma;
                        p.validate();
                        out.push_back(p);
                    }
        return out;
    }

    struct DisplacedSpectrum {
        int cutoff = 0;
        SpectrumReport report;
    };

    DisplacedSpectrum displaced_spectrum(const ModelParams& p) const {
        const SpectrumOptions so = sweep_options(false);
        std::map<int, SpectrumReport> seen;
        const ModelBuilder build = [this](const SystemSpace& s, const ModelParams& q) {
            return prepared(build_coherent_displaced(s, q));
        };
        const ObservableExtractor gap = [&](const MasterEquation& me) {
            SpectrumReport rep = analyze(vectorize(me, true), so);
            const double g = rep.gap;
            seen[me.space.fock_cutoff] = std::move(rep);
            return g;
        };
        if (cfg_.cutoff) {
            gap(build(make_space(*cfg_.cutoff), p));
            return {*cfg_.cutoff, seen.at(*cfg_.cutoff)};
        }
        TruncationOptions to;
        to.cap = 8;
        const TruncationResult tr = check_truncation(build, p, gap, to);
        const int used = tr.history.back().first;
        return {used, seen.at(used)};
    }

    struct ExactRun {
        Trajectory traj;
        int rejected = 0;

        nlohmann::json accuracy() const {
            return {{"worst_trace_error", traj.worst.trace},
                    {"worst_hermiticity", traj.worst.hermiticity},
                    {"worst_negativity", traj.worst.negativity},
                    {"samples_rejected", rejected}};
        }
    };

    ExactRun evolve_mi(const Superoperator& sup, const DensityMatrix& rho0, const std::vector<double>& grid,
                       std::vector<double>& mi, std::vector<double>* photons = nullptr, double alpha = 0.0) const {
        ExactRun run;
        mi.assign(grid.size(), nan);
        if (photons) photons->assign(grid.size(), nan);
        Matrix a;
        if (photons && !sup.space().atomic_only()) a = annihilation(sup.space()).matrix;
        const auto observe = [&](std::size_t k, double, const DensityMatrix& rho) {
            mi[k] = guarded_mi(rho, run.rejected);
            if (photons && a.size() > 0) {
                const cplx mean = (rho.matrix() * a).trace();
                const double n = (rho.matrix() * a.adjoint() * a).trace().real();
                (*photons)[k] = n + 2.0 * alpha * mean.real() + alpha * alpha;
            }
        };
        EvolveOptions eo;
        eo.keep_states = false;
        run.traj = evolve_ode(sup, rho0, grid, eo, observe);
        return run;
    }

    ExactRun spectral_mi(const Superoperator& sup, const DensityMatrix& rho0, const std::vector<double>& grid,
                         std::vector<double>& mi, std::vector<double>* photons = nullptr, double alpha = 0.0) const {
        ExactRun run;
        run.traj = evolve_spectral(eig_general(sup.to_dense()), rho0, grid);
        mi.clear();
        for (const DensityMatrix& rho : run.traj.states) mi.push_back(guarded_mi(rho, run.rejected));
        if (photons) {
            const Matrix a = annihilation(sup.space()).matrix;
            photons->clear();
            for (const DensityMatrix& rho : run.traj.states) {
                const cplx mean = (rho.matrix() * a).trace();
                const double n = (rho.matrix() * a.adjoint() * a).trace().real();
                photons->push_back(n + 2.0 * alpha * mean.real() + alpha * alpha);
            }
        }
        return run;
    }

    const ScenarioConfig& cfg() const { return cfg_; }

private:
    const ScenarioConfig& cfg_;
    const Progress& progress_;
};

// |gg> has no weight on the slowest eigenoperator of the effective coherent model,
// so the relaxation time is fitted from |++> (all amplitudes 1/2) instead.
nlohmann::json tau_fit_dressed(const Superoperator& eff, double gap) {
    Vector psi = Vector::Constant(4, cplx(0.5, 0.0));
    const DensityMatrix rho0 = DensityMatrix::pure(psi, atomic_space());
    const std::vector<double> grid = log_time_grid(0.1, 15.0 / gap, 300);
    try {
        const RelaxationEstimate est = fit_relaxation(evolve_ode(eff, rho0, grid), steady_state(eff, rho0));
        return {{"tau", est.tau_fit},   {"t_start", est.t_start},    {"t_end", est.t_end},
                {"residual", est.residual}, {"initial_state", "++"}};
    } catch (const FitWindowError& e) {
        return {{"error", e.what()}, {"initial_state", "++"}};
    }
}

nlohmann::json plateaus_json(const std::vector<Plateau>& ps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Plateau& p : ps)
        arr.push_back({{"t_start", p.t_start}, {"t_end", p.t_end}, {"decades", p.decades()}, {"level", p.level}});
    return arr;
}

// ---------------------------------------------------------------------------

ScenarioResult gap_coherent(const Runner& run, bool second) {
    ScenarioResult out;
    out.table.scenario = run.cfg().scenario;
    out.table.columns = scenario_columns(run.cfg().scenario);
    out.summary["points"] = nlohmann::json::array();
    Plot plot;
    plot.title = second ? "Separated relaxation rate vs drive" : "Spectral gap vs drive";
    plot.x_label = "eps / kappa";
    plot.y_label = second ? "rate / kappa" : "gap / kappa";
    plot.log_y = true;
    std::map<double, std::pair<Series, Series>> curves;

    double worst = 0.0;
    for (const ModelParams& p : run.points()) {
        run.note("eigenvalues for " + label(p, {"g0", "eps"}));
        const auto [cutoff, rep] = run.displaced_spectrum(p);
        const SpectrumReport eff = analyze(run.generator(build_effective_coherent(p), true), sweep_options(true));
        const double gap_analytic = p.kappa / std::pow(2.0 * p.eps / p.kappa, 2);
        auto& [exact_series, analytic_series] = curves[p.g0];
        exact_series.label = "exact " + label(p, {"g0"});
        analytic_series.label = "analytic " + label(p, {"g0"});
        exact_series.x.push_back(p.eps);
        analytic_series.x.push_back(p.eps);
        nlohmann::json point = {{"params", params_json(p)}, {"cutoff", cutoff}};
        if (!second) {
            const double err = std::abs(rep.gap - gap_analytic) / gap_analytic;
            const double err_eff = std::abs(eff.gap - gap_analytic) / gap_analytic;
            worst = std::max(worst, err);
            out.table.add(row_of(p, cutoff, {rep.gap, eff.gap, gap_analytic, err, err_eff}));
            exact_series.y.push_back(rep.gap);
            analytic_series.y.push_back(gap_analytic);
            point["gap_exact"] = rep.gap;
            point["gap_effective"] = eff.gap;
            point["gap_analytic"] = gap_analytic;
            point["rel_error_exact"] = err;
            point["rel_error_effective"] = err_eff;
        } else {
            const SplittingDiagnostic sd = splitting_diagnostic(rep);
            const double lambda3 = 4.0 * gamma_g0(p) + 2.0 * gamma_eps(p);
            const double sep = sd.available ? sd.separated_rate : nan;
            const double err = std::abs(sep - lambda3) / lambda3;
            const double ratio_analytic = lambda3 / (4.0 * gamma_eps(p));
            const double literal = rep.rates.size() > 1 ? rep.second_rate : nan;
            worst = std::max(worst, std::isfinite(err) ? err : 0.0);
            out.table.add(row_of(p, cutoff, {rep.gap, literal, sep, lambda3, err, sd.available ? sd.ratio : nan, ratio_analytic}));
            exact_series.y.push_back(sep);
            analytic_series.y.push_back(lambda3);
            point["gap_exact"] = rep.gap;
            point["second_rate_exact"] = number_or_null(literal);
            point["separated_rate_exact"] = number_or_null(sep);
            point["lambda3_rate_analytic"] = lambda3;
            point["rel_error_separated"] = number_or_null(err);
            point["splitting_ratio_exact"] = number_or_null(sd.available ? sd.ratio : nan);
            point["splitting_ratio_analytic"] = ratio_analytic;
            point["metastable"] = sd.metastable;
        }
        out.summary["points"].push_back(point);
    }
    out.summary[second ? "max_rel_error_separated" : "max_rel_error_exact"] = worst;
    for (auto& [g0, pair] : curves) {
        plot.series.push_back(pair.first);
        plot.series.push_back(pair.second);
    }
    out.plots.push_back(plot);
    return out;
}

ScenarioResult mi_coherent(const Runner& run) {
    ScenarioResult out;
    out.table.scenario = run.cfg().scenario;
    out.table.columns = scenario_columns(run.cfg().scenario);
    out.summary["points"] = nlohmann::json::array();
    const std::vector<double> grid = run.cfg().time_grid.samples();
    Plot plot{"Atomic mutual information, coherent drive", "kappa t", "I(A:B) / bits", true, false, {}};
    const int cutoff = run.cfg().cutoff.value_or(6);

    for (const ModelParams& p : run.points()) {
        run.note("trajectories for " + label(p, {"g0", "eps"}));
        const Superoperator eff = run.generator(build_effective_coherent(p), true);
        const DensityMatrix rho0 = ground_state(atomic_space());
        const Trajectory traj = evolve_ode(eff, rho0, grid);
        const std::vector<double> mi_eff = mutual_information_series(traj);
        const DensityMatrix ss = steady_state(eff, rho0);
        std::vector<double> dist;
        for (const DensityMatrix& rho : traj.states) dist.push_back(trace_distance(rho.matrix(), ss.matrix()));

        nlohmann::json point = {{"params", params_json(p)}, {"cutoff", cutoff}};
        std::vector<double> mi_exact(grid.size(), nan);
        try {
            const Superoperator ex = run.generator(build_coherent_displaced(make_space(cutoff), p), true);
            const auto exact = run.spectral_mi(ex, ground_state(ex.space()), grid, mi_exact);
            point["mi_exact_final"] = number_or_null(mi_exact.back());
            point["exact_accuracy"] = exact.accuracy();
        } catch (const NearDefectiveError& e) {
            point["exact_skipped"] = e.what();
        }

        const SpectrumReport rep = analyze(eff, sweep_options(true));
        const SplittingDiagnostic sd = splitting_diagnostic(rep);
        const std::vector<Plateau> plateaus = detect_transient_plateaus(grid, mi_eff, 5.0 / rep.gap);
        point["gap_effective"] = rep.gap;
        point["tau_analytic"] = 1.0 / (p.kappa / std::pow(2.0 * p.eps / p.kappa, 2));
        point["separated_rate"] = number_or_null(sd.available ? sd.separated_rate : nan);
        point["splitting_ratio"] = number_or_null(sd.available ? sd.ratio : nan);
        point["metastable"] = sd.metastable;
        point["plateaus"] = plateaus_json(plateaus);
        if (sd.available)
            point["plateau_level_projection"] = verify::slow_projection_mutual_information(eff, rho0, sd.separated_rate);
        point["mi_steady_effective"] = atomic_mutual_information(ss);
        point["tau_fit"] = tau_fit_dressed(eff, rep.gap);
        out.summary["points"].push_back(point);

        for (std::size_t k = 0; k < grid.size(); ++k)
            out.table.add(row_of(p, cutoff, {grid[k], mi_eff[k], mi_exact[k], dist[k]}));
        plot.series.push_back({"effective " + label(p, {"g0", "eps"}), grid, mi_eff});
        plot.series.push_back({"exact " + label(p, {"g0", "eps"}), grid, mi_exact});
    }
    out.plots.push_back(plot);
    return out;
}

ScenarioResult gap_incoherent(const Runner& run) {
    ScenarioResult out;
    out.table.scenario = run.cfg().scenario;
    out.table.columns = scenario_columns(run.cfg().scenario);
    out.summary["points"] = nlohmann::json::array();
    Plot plot{"Spectral gap vs thermal occupation", "n_th", "gap / kappa", true, true, {}};
    std::map<double, std::pair<Series, Series>> curves;

    for (const ModelParams& p : run.points()) {
        run.note("eigenvalues for " + label(p, {"g0", "n_th"}));
        const SpectrumReport eff = analyze(run.generator(build_effective_incoherent(p), true));
        const double analytic = analytic_incoherent(p).gap();
        double exact = nan;
        double cutoff = nan;
        nlohmann::json point = {{"params", params_json(p)}};
        if (p.n_th <= run.cfg().exact_max_n_th) {
            const int c = run.cfg().cutoff.value_or(thermal_cutoff(p.n_th));
            TargetedOptions to;
            to.krylov.nev = 10;
            exact = analyze_targeted(run.generator(build_incoherent(make_space(c), p)), to).gap;
            cutoff = c;
            point["cutoff"] = c;
        } else {
            point["exact_skipped"] = "n_th above exact_max_n_th";
        }
        const double err = std::abs(exact - analytic) / analytic;
        const double err_eff = std::abs(eff.gap - analytic) / analytic;
        out.table.add(row_of(p, cutoff, {exact, eff.gap, analytic, err, err_eff}));
        point["gap_exact"] = number_or_null(exact);
        point["gap_effective"] = eff.gap;
        point["gap_analytic"] = analytic;
        point["rel_error_exact"] = number_or_null(err);
        point["rel_error_effective"] = err_eff;
        out.summary["points"].push_back(point);
        auto& [ex, an] = curves[p.g0];
        ex.label = "exact " + label(p, {"g0"});
        an.label = "analytic " + label(p, {"g0"});
        ex.x.push_back(p.n_th);
        ex.y.push_back(exact);
        an.x.push_back(p.n_th);
        an.y.push_back(analytic);
    }
    for (auto& [g0, pair] : curves) {
        plot.series.push_back(pair.first);
        plot.series.push_back(pair.second);
    }
    out.plots.push_back(plot);
    return out;
}

ScenarioResult mi_incoherent(const Runner& run) {
    ScenarioResult out;
    out.table.scenario = run.cfg().scenario;
    out.table.columns = scenario_columns(run.cfg().scenario);
    out.summary["points"] = nlohmann::json::array();
    const std::vector<double> grid = run.cfg().time_grid.samples();
    Plot plot{"Atomic mutual information, thermal field", "kappa t", "I(A:B) / bits", true, false, {}};

    for (const ModelParams& p : run.points()) {
        run.note("trajectories for " + label(p, {"g0", "n_th"}));
        const Superoperator eff = run.generator(build_effective_incoherent(p), true);
        const DensityMatrix rho0 = ground_state(atomic_space());
        const std::vector<double> mi_eff = mutual_information_series(evolve_ode(eff, rho0, grid));
        const SpectrumReport rep = analyze(eff, sweep_options(true));
        nlohmann::json point = {{"params", params_json(p)}};
        std::vector<double> mi_exact(grid.size(), nan);
        double cutoff = nan;
        if (p.n_th <= run.cfg().exact_max_n_th) {
            const int c = run.cfg().cutoff.value_or(thermal_cutoff(p.n_th));
            const Superoperator ex = run.generator(build_incoherent(make_space(c), p));
            point["exact_accuracy"] = run.evolve_mi(ex, ground_state(ex.space()), grid, mi_exact).accuracy();
            cutoff = c;
            point["cutoff"] = c;
            double worst = 0.0;
            for (std::size_t k = 0; k < grid.size(); ++k)
                if (grid[k] > 10.0) worst = std::max(worst, std::abs(mi_exact[k] - mi_eff[k]));
            point["max_abs_diff_after_t10"] = worst;
        } else {
            point["exact_skipped"] = "n_th above exact_max_n_th";
        }
        point["gap_effective"] = rep.gap;
        point["gap_analytic"] = analytic_incoherent(p).gap();
        point["mi_steady_effective"] = atomic_mutual_information(steady_state(eff, rho0));
        point["plateaus"] = plateaus_json(detect_transient_plateaus(grid, mi_eff, 5.0 / rep.gap));
        out.summary["points"].push_back(point);
        for (std::size_t k = 0; k < grid.size(); ++k) out.table.add(row_of(p, cutoff, {grid[k], mi_eff[k], mi_exact[k]}));
        plot.series.push_back({"effective " + label(p, {"n_th"}), grid, mi_eff});
        if (std::isfinite(cutoff)) plot.series.push_back({"exact " + label(p, {"n_th"}), grid, mi_exact});
    }
    out.plots.push_back(plot);
    return out;
}

ScenarioResult real_detector(const Runner& run) {
    ScenarioResult out;
    out.table.scenario = run.cfg().scenario;
    out.table.columns = scenario_columns(run.cfg().scenario);
    out.summary["points"] = nlohmann::json::array();
    const std::vector<double> grid = run.cfg().time_grid.samples();
    Plot plot{"Mutual information with atomic decay", "kappa t", "I(A:B) / bits", true, false, {}};

    for (const ModelParams& p : run.points()) {
        run.note("trajectory for " + label(p, {"g0", "eps", "n_th", "gamma"}));
        nlohmann::json point = {{"params", params_json(p)}};
        std::vector<double> mi, photons;
        int cutoff = 0;
        double steady_mi = nan;
        if (p.n_th == 0.0 && p.eps > 0.0) {
            cutoff = run.cfg().cutoff.value_or(6);
            const Superoperator sup = run.generator(build_full_displaced(make_space(cutoff), p), true);
            const DensityMatrix rho0 = ground_state(sup.space());
            const double alpha = p.eps / p.kappa;
            point["accuracy"] = run.spectral_mi(sup, rho0, grid, mi, &photons, alpha).accuracy();
            const SpectrumReport rep = analyze(sup, sweep_options(false));
            point["frame"] = "displaced";
            point["kernel_dim"] = rep.kernel_dim;
            point["gap"] = rep.gap;
            steady_mi = atomic_mutual_information(rep.kernel_dim == 1 ? steady_state(sup) : steady_state(sup, rho0));
        } else {
            cutoff = run.cfg().cutoff.value_or(
                std::max(thermal_cutoff(p.n_th), static_cast<int>(std::ceil(std::pow(p.eps / p.kappa + 4.0, 2)))));
            const Superoperator sup = run.generator(build_full(make_space(cutoff), p));
            const DensityMatrix rho0 = ground_state(sup.space());
            point["accuracy"] = run.evolve_mi(sup, rho0, grid, mi, &photons, 0.0).accuracy();
            point["frame"] = "lab";
            steady_mi = atomic_mutual_information(p.gamma > 0.0 ? steady_state(sup) : steady_state(sup, rho0));
        }
        std::size_t ipeak = 0;
        for (std::size_t k = 0; k < mi.size(); ++k)
            if (mi[k] > mi[ipeak] || std::isnan(mi[ipeak])) ipeak = k;
        double above_from = nan, above_to = nan;
        for (std::size_t k = 0; k < mi.size(); ++k)
            if (mi[k] > 1e-2) {
                if (!std::isfinite(above_from)) above_from = grid[k];
                above_to = grid[k];
            }
        point["cutoff"] = cutoff;
        point["mi_peak"] = number_or_null(mi[ipeak]);
        point["t_peak"] = grid[ipeak];
        point["mi_final"] = number_or_null(mi.back());
        point["mi_steady"] = steady_mi;
        point["window_above_1e-2"] = {{"t_first", number_or_null(above_from)}, {"t_last", number_or_null(above_to)}};
        out.summary["points"].push_back(point);
        for (std::size_t k = 0; k < grid.size(); ++k) out.table.add(row_of(p, cutoff, {grid[k], mi[k], photons[k]}));
        plot.series.push_back({label(p, {"gamma", "n_th"}), grid, mi});
    }
    out.plots.push_back(plot);
    return out;
}

ScenarioResult verify_scenario(const ScenarioConfig& cfg, const Progress& progress) {
    verify::Options vo;
    vo.seed = cfg.seed;
    vo.fault = cfg.fault == Fault::half_convention ? verify::Fault::half_convention : verify::Fault::none;
    if (progress)
        vo.progress = [&](const verify::CheckResult& r) {
            progress(std::string(r.passed ? "PASS " : "FAIL ") + std::to_string(r.id) + " " + r.name);
        };
    const verify::Report rep = verify::run_suite(vo);
    ScenarioResult out;
    out.console = verify::format_report(rep);
    out.summary["checks"] = nlohmann::json::array();
    for (const verify::CheckResult& c : rep.checks)
        out.summary["checks"].push_back(
            {{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"seconds", c.seconds}, {"details", c.details}});
    out.summary["all_passed"] = rep.all_passed();
    out.exit_code = rep.all_passed() ? 0 : 1;
    return out;
}

} // namespace

int thermal_cutoff(double n_th) {
    if (!(n_th > 0.0)) return 8;
    const double n = std::ceil(std::log(1e-4) / std::log(n_th / (n_th + 1.0)));
    return std::max(8, static_cast<int>(n));
}

std::string scenario_description(const std::string& name) {
    if (name == "gap-coherent")
        return "Spectral gap of the displaced-frame exact model and of the effective atomic model against the closed form "
               "kappa (2 eps/kappa)^-2, swept over g0 and eps. One row per (g0, eps).";
    if (name == "second-rate-coherent")
        return "Relaxation rates above the gap for the displaced-frame exact model: the literal second distinct rate and "
               "the separated rate (first rate after the widest jump of the rate ladder), compared with "
               "4 Gamma_g0 + 2 Gamma_eps. One row per (g0, eps).";
    if (name == "mi-coherent")
        return "Mutual information between the atoms from |gg> under the effective coherent model and the displaced-frame "
               "exact model, plus the trace distance of the effective state to its steady state. One row per "
               "(g0, eps, t). The JSON summary adds the plateau windows, the slow-mode projection level and a "
               "relaxation time fitted from |++>, which unlike |gg> overlaps the slowest mode.";
    if (name == "gap-incoherent")
        return "Spectral gap of the lab-frame exact model (shift-invert, skipped above exact_max_n_th) and of the effective "
               "atomic model against the closed-form table, swept over g0 and n_th. One row per (g0, n_th).";
    if (name == "mi-incoherent")
        return "Mutual information from |gg> under the effective incoherent model and the lab-frame exact model (skipped "
               "above exact_max_n_th). One row per (g0, n_th, t).";
    if (name == "real-detector")
        return "Mutual information of the full model with atomic decay gamma. Drive without thermal photons runs in the "
               "displaced frame; otherwise the lab frame is used. One row per (g0, eps, n_th, gamma, t).";
    if (name == "verify") return "Runs the acceptance suite, prints a pass/fail table and writes verify.json.";
    throw UsageError("unknown scenario '" + name + "'");
}

std::vector<Column> scenario_columns(const std::string& name) {
    if (name == "gap-coherent")
        return with_params({{"gap_exact", "kappa", "smallest nonzero relaxation rate of the displaced-frame exact model"},
                            {"gap_effective", "kappa", "gap of the effective atomic model"},
                            {"gap_analytic", "kappa", "kappa (2 eps / kappa)^-2"},
                            {"rel_error_exact", "1", "abs(gap_exact - gap_analytic) / gap_analytic"},
                            {"rel_error_effective", "1", "abs(gap_effective - gap_analytic) / gap_analytic"}});
    if (name == "second-rate-coherent")
        return with_params({{"gap_exact", "kappa", "smallest nonzero relaxation rate, exact model"},
                            {"second_rate_exact", "kappa", "next distinct relaxation rate after the gap"},
                            {"separated_rate_exact", "kappa", "first rate after the widest multiplicative jump of the rates"},
                            {"lambda3_rate_analytic", "kappa", "4 Gamma_g0 + 2 Gamma_eps"},
                            {"rel_error_separated", "1", "abs(separated_rate_exact - lambda3_rate_analytic) / lambda3_rate_analytic"},
                            {"splitting_ratio_exact", "1", "separated_rate_exact / gap_exact"},
                            {"splitting_ratio_analytic", "1", "(4 Gamma_g0 + 2 Gamma_eps) / (4 Gamma_eps)"}});
    if (name == "mi-coherent")
        return with_params({{"t", "1/kappa", "time"},
                            {"mi_effective", "bits", "atomic mutual information, effective model"},
                            {"mi_exact", "bits",
                             "atomic mutual information, displaced-frame exact model; nan where the state exceeds the "
                             "entropy slack (counted in the summary)"},
                            {"distance_effective", "1", "trace norm of rho(t) - rho_ss, effective model"}});
    if (name == "gap-incoherent")
        return with_params({{"gap_exact", "kappa", "smallest nonzero relaxation rate, lab-frame exact model"},
                            {"gap_effective", "kappa", "gap of the effective atomic model"},
                            {"gap_analytic", "kappa", "smallest nonzero rate of the closed-form table (2 n_th (g0/kappa)^2 kappa for n_th > 0)"},
                            {"rel_error_exact", "1", "abs(gap_exact - gap_analytic) / gap_analytic"},
                            {"rel_error_effective", "1", "abs(gap_effective - gap_analytic) / gap_analytic"}});
    if (name == "mi-incoherent")
        return with_params({{"t", "1/kappa", "time"},
                            {"mi_effective", "bits", "atomic mutual information, effective model"},
                            {"mi_exact", "bits", "atomic mutual information, lab-frame exact model"}});
    if (name == "real-detector")
        return with_params({{"t", "1/kappa", "time"},
                            {"mi", "bits", "atomic mutual information"},
                            {"photon_number", "photons", "lab-frame mean photon number <a^+ a>"}});
    if (name == "verify") return {};
    throw UsageError("unknown scenario '" + name + "'");
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const Progress& progress) {
    validate(cfg);
    if (cfg.scenario == "verify") return verify_scenario(cfg, progress);
    const Runner run(cfg, progress);
    ScenarioResult out;
    if (cfg.scenario == "gap-coherent") out = gap_coherent(run, false);
    else if (cfg.scenario == "second-rate-coherent") out = gap_coherent(run, true);
    else if (cfg.scenario == "mi-coherent") out = mi_coherent(run);
    else if (cfg.scenario == "gap-incoherent") out = gap_incoherent(run);
    else if (cfg.scenario == "mi-incoherent") out = mi_incoherent(run);
    else if (cfg.scenario == "real-detector") out = real_detector(run);
    else throw UsageError("unknown scenario '" + cfg.scenario + "'");
    return out;
}

} // namespace tcrelax::cli
