// spectra.hpp: Liouvillian spectra: gaps, relaxation rates, multiplicity
// clusters, closed-form tables for the two effective atomic models, and a
// time-scale splitting diagnostic.

#pragma once

#include "tcrelax/krylov.hpp"
#include "tcrelax/models.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tcrelax {

struct SpectrumOptions {
    /// Zero if |Re| and |Im| are both <= zero_tol * scale.
    double zero_tol = 1e-9;
    /// Eigenvalues within cluster_tol * max(|lambda|, zero threshold) share a cluster.
    double cluster_tol = 1e-7;
    /// Eigenvector condition number above which the report is flagged.
    double defect_threshold = 1e8;
    /// Overrides the scale (spectral radius by default).
    std::optional<double> scale;
    /// Dense path: also compute eigenvectors for the condition estimate.
    bool condition = true;
    /// Dense path: generators up to this dimension get extended-precision
    /// eigenvalue polishing (needs `condition`).
    Index polish_cap = 64;
};

struct Cluster {
    cplx value;  // mean of the members
    int count = 0;
    std::vector<Index> members;
};

struct SpectrumReport {
    /// Sorted by |Re| ascending, then by Im.
    std::vector<cplx> eigenvalues;
    std::vector<Cluster> clusters;
    /// Distinct nonzero relaxation rates -Re(lambda), ascending.
    std::vector<double> rates;
    double gap = 0.0;
    /// rates[1] when available, else 0.
    double second_rate = 0.0;
    int kernel_dim = 0;
    bool near_defective = false;
    double condition_estimate = 0.0;
    double scale = 0.0;
    /// True when only part of the spectrum was computed (Krylov path).
    bool partial = false;
};

/// Classifies an eigenvalue list. Used by both analysis paths.
SpectrumReport summarize_spectrum(std::vector<cplx> eigenvalues, double scale, const SpectrumOptions& opts = {});

/// Dense path: full spectrum of the materialized generator.
SpectrumReport analyze(const Superoperator& sup, const SpectrumOptions& opts = {});

struct TargetedOptions {
    /// Shift-invert targets; each returns `krylov.nev` eigenvalues nearest to it.
    std::vector<cplx> shifts{cplx(1e-3, 0.0)};
    KrylovOptions krylov{};
    /// Eigenvalues from different shifts closer than this (relative) are merged.
    double dedup_tol = 1e-7;
};

/// Matrix-free path: union of shift-invert eigenvalues. Scale defaults to ||L||_1.
SpectrumReport analyze_targeted(const Superoperator& sup, const TargetedOptions& targets,
                                const SpectrumOptions& opts = {});
SpectrumReport analyze_targeted(const SparseMatrix& generator, const TargetedOptions& targets,
                                const SpectrumOptions& opts = {});

enum class AnalyticCase { coherent, incoherent };

struct AnalyticEntry {
    std::string name;
    double value = 0.0;
    int multiplicity = 0;
};

struct AnalyticSpectrum {
    AnalyticCase which = AnalyticCase::coherent;
    std::vector<AnalyticEntry> entries;
    ModelParams params;

    int total_multiplicity() const;
    /// Smallest nonzero -value.
    double gap() const;
};

/// Six entries, multiplicities (2, 3, 1, 6, 2, 2). Requires eps > 0.
AnalyticSpectrum analytic_coherent(const ModelParams& p);
/// Eight entries, multiplicities (2, 2, 2, 2, 4, 1, 2, 1). Requires n_th >= 0.
AnalyticSpectrum analytic_incoherent(const ModelParams& p);

struct EntryMatch {
    std::string name;
    double analytic = 0.0;
    cplx numeric{0.0, 0.0};
    double relative_error = 0.0;
    int analytic_multiplicity = 0;
    int numeric_multiplicity = 0;
    bool matched = false;
};

struct SpectrumMatch {
    std::vector<EntryMatch> entries;
    /// Numeric clusters left without an analytic partner.
    std::vector<Cluster> unmatched;
    double max_relative_error = 0.0;
    bool multiplicities_agree = true;
    bool ok = false;
};

/// Analytic entries with equal values are merged first (their multiplicities
/// add); each merged entry is then paired with the nearest unused cluster.
/// Zero entries are compared on the absolute scale of the report.
SpectrumMatch compare_spectra(const SpectrumReport& numeric, const AnalyticSpectrum& analytic, double rel_tol);

struct SplittingDiagnostic {
    bool available = false;
    /// First rate above the widest (multiplicative) jump in the rate ladder.
    double separated_rate = 0.0;
    /// separated_rate / gap
    double ratio = 0.0;
    bool metastable = false;
};

/// Unavailable when fewer than two distinct rates are known.
SplittingDiagnostic splitting_diagnostic(const SpectrumReport& report, double threshold = 10.0);

} // namespace tcrelax
