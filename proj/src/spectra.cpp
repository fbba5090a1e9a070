#include "tcrelax/spectra.hpp"

#include "tcrelax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tcrelax {

namespace {

bool by_decay(cplx a, cplx b) {
    const double ra = std::abs(a.real()), rb = std::abs(b.real());
    if (ra != rb) return ra < rb;
    return a.imag() < b.imag();
}

} // namespace

SpectrumReport summarize_spectrum(std::vector<cplx> eigenvalues, double scale, const SpectrumOptions& opts) {
    SpectrumReport r;
    std::sort(eigenvalues.begin(), eigenvalues.end(), by_decay);
    r.eigenvalues = std::move(eigenvalues);
    r.scale = scale;
    const double zthr = opts.zero_tol * scale;

    std::vector<bool> zero(r.eigenvalues.size());
    Cluster kernel;
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
        const cplx l = r.eigenvalues[k];
        zero[k] = std::abs(l.real()) <= zthr && std::abs(l.imag()) <= zthr;
        if (zero[k]) {
            kernel.members.push_back(static_cast<Index>(k));
            kernel.value += l;
        }
    }
    r.kernel_dim = static_cast<int>(kernel.members.size());
    if (r.kernel_dim > 0) {
        kernel.count = r.kernel_dim;
        kernel.value /= static_cast<double>(kernel.count);
        r.clusters.push_back(kernel);
    }

    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
        if (zero[k]) continue;
        const cplx l = r.eigenvalues[k];
        Cluster* home = nullptr;
        for (Cluster& c : r.clusters) {
            if (r.kernel_dim > 0 && &c == &r.clusters.front()) continue;
            const double tol = opts.cluster_tol * std::max(std::abs(c.value), zthr);
            if (std::abs(l - c.value) <= tol) {
                home = &c;
                break;
            }
        }
        if (!home) {
            r.clusters.push_back({l, 1, {static_cast<Index>(k)}});
            continue;
        }
        home->value = (home->value * static_cast<double>(home->count) + l) / static_cast<double>(home->count + 1);
        ++home->count;
        home->members.push_back(static_cast<Index>(k));
    }

    std::vector<double> rates;
    for (const cplx l : r.eigenvalues)
        if (-l.real() > zthr) rates.push_back(-l.real());
    std::sort(rates.begin(), rates.end());
    for (const double x : rates)
        if (r.rates.empty() || x - r.rates.back() > opts.cluster_tol * std::max(r.rates.back(), zthr))
            r.rates.push_back(x);
    if (!r.rates.empty()) r.gap = r.rates[0];
    if (r.rates.size() > 1) r.second_rate = r.rates[1];
    return r;
}

SpectrumReport analyze(const Superoperator& sup, const SpectrumOptions& opts) {
    const Matrix l = sup.to_dense();
    EigOptions eo;
    eo.vectors = opts.condition;
    eo.condition = opts.condition;
    EigenDecomposition dec = eig_general(l, eo);
    double radius = 0.0;
    for (const cplx v : dec.eigenvalues) radius = std::max(radius, std::abs(v));
    if (opts.condition && l.rows() <= opts.polish_cap) polish_eigenvalues(l, dec, 1e-8 * radius);
    std::vector<cplx> values(dec.eigenvalues.data(), dec.eigenvalues.data() + dec.eigenvalues.size());
    SpectrumReport r = summarize_spectrum(std::move(values), opts.scale.value_or(radius), opts);
    r.condition_estimate = opts.condition ? dec.condition_estimate : std::numeric_limits<double>::quiet_NaN();
    r.near_defective = opts.condition && !(dec.condition_estimate <= opts.defect_threshold);
    return r;
}

SpectrumReport analyze_targeted(const Superoperator& sup, const TargetedOptions& targets, const SpectrumOptions& opts) {
    return analyze_targeted(sup.sparse(), targets, opts);
}

SpectrumReport analyze_targeted(const SparseMatrix& generator, const TargetedOptions& targets, const SpectrumOptions& opts) {
    if (targets.shifts.empty()) throw ArgumentError("analyze_targeted: no shifts given");
    const double scale = opts.scale.value_or(one_norm(generator));
    std::vector<cplx> found;
    for (const cplx s : targets.shifts) {
        const KrylovResult kr = eig_shift_invert(generator, s, targets.krylov);
        // A value already reported by an earlier shift is consumed once per
        // copy, so repeated eigenvalues keep their multiplicity.
        std::vector<bool> consumed(found.size(), false);
        const std::size_t before = found.size();
        for (const cplx l : kr.eigenvalues) {
            const double tol = targets.dedup_tol * std::max(std::abs(l), opts.zero_tol * scale);
            bool seen = false;
            for (std::size_t k = 0; k < before && !seen; ++k)
                if (!consumed[k] && std::abs(l - found[k]) <= tol) consumed[k] = seen = true;
            if (!seen) found.push_back(l);
        }
    }
    SpectrumReport r = summarize_spectrum(std::move(found), scale, opts);
    r.partial = true;
    r.condition_estimate = std::numeric_limits<double>::quiet_NaN();
    return r;
}

int AnalyticSpectrum::total_multiplicity() const {
    int n = 0;
    for (const AnalyticEntry& e : entries) n += e.multiplicity;
    return n;
}

double AnalyticSpectrum::gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (const AnalyticEntry& e : entries)
        if (e.value < 0.0) g = std::min(g, -e.value);
    return g;
}

AnalyticSpectrum analytic_coherent(const ModelParams& p) {
    if (!(p.eps > 0.0)) throw ArgumentError("analytic_coherent: eps must be > 0");
    const double ge = gamma_eps(p);
    const double gg = gamma_g0(p);
    AnalyticSpectrum s;
    s.which = AnalyticCase::coherent;
    s.params = p;
    s.entries = {
        {"lambda0", 0.0, 2},
        {"lambda1", -4.0 * ge, 3},
        {"lambda2", -12.0 * ge, 1},
        {"lambda3", -4.0 * gg - 2.0 * ge, 6},
        {"lambda4", -4.0 * gg - 10.0 * ge, 2},
        {"lambda5", -4.0 * (4.0 * gg + ge), 2},
    };
    return s;
}

AnalyticSpectrum analytic_incoherent(const ModelParams& p) {
    if (!(p.n_th >= 0.0)) throw ArgumentError("analytic_incoherent: n_th must be >= 0");
    const double g = gamma_incoherent(p);
    const double n = p.n_th;
    const double root_a = std::sqrt(1.0 + 16.0 * n * (n + 1.0));
    const double root_b = std::sqrt(n * (n + 1.0));
    AnalyticSpectrum s;
    s.which = AnalyticCase::incoherent;
    s.params = p;
    s.entries = {
        {"lambda0", 0.0, 2},
        {"lambda1", -2.0 * n * g, 2},
        {"lambda2", (-3.0 * (2.0 * n + 1.0) + root_a) * g, 2},
        {"lambda3", -2.0 * (n + 1.0) * g, 2},
        {"lambda4", -2.0 * (2.0 * n + 1.0) * g, 4},
        {"lambda5", (-4.0 * (2.0 * n + 1.0) + 4.0 * root_b) * g, 1},
        {"lambda6", (-3.0 * (2.0 * n + 1.0) - root_a) * g, 2},
        {"lambda7", (-4.0 * (2.0 * n + 1.0) - 4.0 * root_b) * g, 1},
    };
    return s;
}

SpectrumMatch compare_spectra(const SpectrumReport& numeric, const AnalyticSpectrum& analytic, double rel_tol) {
    const double scale = numeric.scale > 0.0 ? numeric.scale : 1.0;
    const auto close = [&](double a, double b) {
        const double m = std::max(std::abs(a), std::abs(b));
        return m == 0.0 || std::abs(a - b) <= rel_tol * m;
    };

    std::vector<AnalyticEntry> merged;
    for (const AnalyticEntry& e : analytic.entries) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const AnalyticEntry& m) { return close(m.value, e.value); });
        if (it == merged.end()) {
            merged.push_back(e);
        } else {
            it->name += "+" + e.name;
            it->multiplicity += e.multiplicity;
        }
    }

    SpectrumMatch out;
    std::vector<bool> used(numeric.clusters.size(), false);
    bool all_matched = true;
    for (const AnalyticEntry& e : merged) {
        EntryMatch m;
        m.name = e.name;
        m.analytic = e.value;
        m.analytic_multiplicity = e.multiplicity;
        std::size_t best = numeric.clusters.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < numeric.clusters.size(); ++c) {
            if (used[c]) continue;
            const double d = std::abs(numeric.clusters[c].value - e.value);
            if (d < best_dist) {
                best_dist = d;
                best = c;
            }
        }
        if (best < numeric.clusters.size()) {
            used[best] = true;
            m.numeric = numeric.clusters[best].value;
            m.numeric_multiplicity = numeric.clusters[best].count;
            m.relative_error = e.value == 0.0 ? best_dist / scale : best_dist / std::abs(e.value);
            m.matched = m.relative_error <= rel_tol;
        } else {
            m.relative_error = std::numeric_limits<double>::infinity();
        }
        all_matched = all_matched && m.matched;
        out.multiplicities_agree = out.multiplicities_agree && m.numeric_multiplicity == m.analytic_multiplicity;
        out.max_relative_error = std::max(out.max_relative_error, m.relative_error);
        out.entries.push_back(std::move(m));
    }
    for (std::size_t c = 0; c < numeric.clusters.size(); ++c)
        if (!used[c]) out.unmatched.push_back(numeric.clusters[c]);
    out.ok = all_matched && out.multiplicities_agree && out.unmatched.empty();
    return out;
}

SplittingDiagnostic splitting_diagnostic(const SpectrumReport& report, double threshold) {
    SplittingDiagnostic d;
    const std::vector<double>& r = report.rates;
    if (r.size() < 2 || !(r[0] > 0.0)) return d;
    std::size_t jump = 1;
    double widest = 0.0;
    for (std::size_t k = 1; k < r.size(); ++k) {
        const double step = r[k] / r[k - 1];
        if (step > widest) {
            widest = step;
            jump = k;
        }
    }
    d.available = true;
    d.separated_rate = r[jump];
    d.ratio = r[jump] / r[0];
    d.metastable = d.ratio > threshold;
    return d;
}

} // namespace tcrelax
