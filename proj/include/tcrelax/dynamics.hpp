// dynamics.hpp: Time evolution, steady states, relaxation fits, plateau
// detection and Fock-truncation convergence.
//
// Trajectory states are never renormalized: drifts in trace, Hermiticity or
// positivity beyond `invariant_tol` raise IntegrationAccuracyError.

#pragma once

#include "tcrelax/models.hpp"
#include "tcrelax/state.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tcrelax {

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;  // empty when states are streamed only
    std::string tag;
    /// Componentwise worst defects over all samples.
    StateDefects worst;
};

using StateObserver = std::function<void(std::size_t index, double t, const DensityMatrix& rho)>;

struct EvolveOptions {
    OdeOptions ode{};
    double invariant_tol = 1e-6;
    /// Integrate only on the index set reachable from the support of vec(rho0).
    bool restrict_to_reachable = true;
    bool keep_states = true;
};

/// Indices of vec(rho) that can become nonzero when starting from `seed`.
std::vector<Index> reachable_indices(const SparseMatrix& generator, const Vector& seed);

/// The generator restricted to the closed index set reachable from vec(rho0).
struct ReachableSector {
    std::vector<Index> indices;
    SparseMatrix generator;
    bool proper() const { return static_cast<Index>(indices.size()) < full_dim; }
    Index full_dim = 0;
};

ReachableSector reachable_sector(const Superoperator& sup, const DensityMatrix& rho0);

Trajectory evolve_ode(const Superoperator& sup, const DensityMatrix& rho0, std::span<const double> t_grid,
                      const EvolveOptions& opts = {}, const StateObserver& observer = {},
                      OdeStats* stats = nullptr);

/// rho(t) = sum_k c_k exp(lambda_k t) v_k with V c = vec(rho0).
/// Throws NearDefectiveError when the eigenvector condition exceeds `defect_threshold`.
Trajectory evolve_spectral(const EigenDecomposition& decomp, const DensityMatrix& rho0,
                           std::span<const double> t_grid, double defect_threshold = 1e8);

struct SteadyStateOptions {
    /// Singular values <= kernel_tol * sigma_max span the kernel (dense path).
    double kernel_tol = 1e-9;
    /// Postcondition ||L vec(rho)|| <= residual_tol ||L||_1 ||vec(rho)||.
    double residual_tol = 1e-10;
};

/// Unique kernel: the trace-one kernel element. Degenerate kernel: the
/// t -> infinity limit of `rho0` (AmbiguityError without it).
/// Above the dense cap with `rho0` given, the limit is computed inside the
/// sector reachable from rho0 by shifted inverse sweeps.
DensityMatrix steady_state(const Superoperator& sup, const std::optional<DensityMatrix>& rho0 = std::nullopt,
                           const SteadyStateOptions& opts = {});

enum class RelaxationMethod { spectral, trajectory_fit };

struct RelaxationEstimate {
    double tau_fit = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    /// RMS residual of log(distance) about the fitted line.
    double residual = 0.0;
    RelaxationMethod method = RelaxationMethod::trajectory_fit;
};

struct FitOptions {
    double max_residual = 0.1;
    /// Samples with distance below floor * initial distance are ignored.
    double floor = 1e-9;
};

/// Least squares on log ||rho(t) - rho_ss|| over [t_half, t_end].
RelaxationEstimate fit_relaxation(const Trajectory& traj, const DensityMatrix& rho_ss, const FitOptions& opts = {});

/// Same fit on a precomputed distance series.
RelaxationEstimate fit_relaxation(std::span<const double> times, std::span<const double> distances,
                                  const FitOptions& opts = {});

struct Plateau {
    double t_start = 0.0;
    double t_end = 0.0;
    double level = 0.0;
    double decades() const;
};

struct PlateauOptions {
    /// Per-decade slope bound; defaults to 1% of the series range.
    std::optional<double> slope_tol;
    double min_decades = 1.0;
};

/// Maximal windows with |dv / dlog10 t| <= slope_tol spanning >= min_decades.
/// Samples at t <= 0 are ignored.
std::vector<Plateau> detect_plateau(std::span<const double> times, std::span<const double> values,
                                    const PlateauOptions& opts = {});

/// Plateaus of a transient: the search starts at the first sample reaching
/// 5% of the series maximum and stops at `t_stop`, so the flat start and the
/// settled tail are not reported. slope_tol defaults to 1% of the full range.
std::vector<Plateau> detect_transient_plateaus(std::span<const double> times, std::span<const double> values,
                                               double t_stop, const PlateauOptions& opts = {});

using ModelBuilder = std::function<MasterEquation(const SystemSpace&, const ModelParams&)>;
using ObservableExtractor = std::function<double(const MasterEquation&)>;

struct TruncationOptions {
    double rel_tol = 1e-3;
    int start = 4;
    int cap = 512;
};

struct TruncationResult {
    /// Smaller cutoff of the first pair that agrees within rel_tol.
    int cutoff = 0;
    double value = 0.0;
    std::vector<std::pair<int, double>> history;
};

/// Doubles the cutoff until the observable settles; NonConvergenceError past the cap.
TruncationResult check_truncation(const ModelBuilder& build, const ModelParams& p, const ObservableExtractor& extract,
                                  const TruncationOptions& opts = {});

/// {0} followed by `points` log-uniform samples in [t_min, t_max].
std::vector<double> log_time_grid(double t_min, double t_max, int points, bool include_zero = true);

/// Atomic mutual information of every stored state.
std::vector<double> mutual_information_series(const Trajectory& traj);

} // namespace tcrelax
