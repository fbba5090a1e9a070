// ode.hpp: Adaptive integration of the autonomous linear system y' = L y
//
// Two integrators:
//   * Dormand–Prince 5(4) with step clipping to the sample grid. Needs only
//     a matrix-free applier.
//   * TR-BDF2 (L-stable, one LU per step size) with a filtered embedded
//     error estimate and cubic Hermite dense output. Needs the sparse matrix.
// `OdeMethod::automatic` picks TR-BDF2 when a sparse matrix is available and
// ||L||_1 * t_end is large.

#pragma once

#include "tcrelax/linalg.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tcrelax {

/// y = L x. Must not alias.
using LinearApplier = std::function<void(const Vector& x, Vector& y)>;

enum class OdeMethod { automatic, explicit_rk, implicit_trbdf2 };

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    OdeMethod method = OdeMethod::automatic;
    /// Explicit integrator step budget; exhausting it is reported as stiffness.
    std::size_t max_steps = 2'000'000;
    /// Smallest admissible step relative to max(|t|, 1).
    double min_step_rel = 1e-13;
    /// automatic mode switches to TR-BDF2 when ||L||_1 * t_end exceeds this.
    double stiffness_switch = 2e4;
    /// TR-BDF2 keeps at most this many LU factorizations alive.
    std::size_t factorization_cache = 6;
};

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t factorizations = 0;
    OdeMethod method = OdeMethod::explicit_rk;
};

/// Called once per grid point with the sample index and state.
using SampleSink = std::function<void(std::size_t index, double t, const Vector& y)>;

/// Validates a sampling grid: non-empty, starts at 0, strictly increasing.
void validate_time_grid(std::span<const double> t_grid);

/// Matrix-free Dormand–Prince integration; returns the state at each grid point.
std::vector<Vector> integrate_ode(const LinearApplier& apply, const Vector& y0,
                                  std::span<const double> t_grid, const OdeOptions& opts = {},
                                  OdeStats* stats = nullptr);

/// Integration with a materialized sparse generator; honours `opts.method`.
std::vector<Vector> integrate_ode(const SparseMatrix& generator, const Vector& y0,
                                  std::span<const double> t_grid, const OdeOptions& opts = {},
                                  OdeStats* stats = nullptr);

/// Streaming variants: states are delivered to `sink` instead of stored.
void integrate_ode_streaming(const LinearApplier& apply, const Vector& y0,
                             std::span<const double> t_grid, const SampleSink& sink,
                             const OdeOptions& opts = {}, OdeStats* stats = nullptr);
void integrate_ode_streaming(const SparseMatrix& generator, const Vector& y0,
                             std::span<const double> t_grid, const SampleSink& sink,
                             const OdeOptions& opts = {}, OdeStats* stats = nullptr);

/// ||A||_1 (max column sum of moduli).
double one_norm(const SparseMatrix& a);

} // namespace tcrelax
