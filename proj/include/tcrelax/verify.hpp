// verify.hpp: The acceptance matrix shared by `tcrelax --scenario verify`
// and the acceptance test binary.

#pragma once

#include "tcrelax/dynamics.hpp"
#include "tcrelax/models.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tcrelax::verify {

enum class Fault {
    none,
    /// Builds every model with halved dissipator weights (the other common
    /// Lindblad normalization). Negative control: the suite must fail.
    half_convention,
};

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::vector<std::string> details;
    double seconds = 0.0;
};

/// Collects invariant defects from every trajectory and generator a suite run touches.
class InvariantMonitor {
public:
    double state_tol = 1e-6;
    double generator_tol = 1e-10;

    void observe(const std::string& where, const Trajectory& traj);
    void observe(const std::string& where, const Superoperator& sup);

    bool ok() const;
    std::size_t trajectories() const { return trajectories_.size(); }
    std::size_t generators() const { return generators_.size(); }
    std::vector<std::string> summary() const;

private:
    std::vector<std::pair<std::string, StateDefects>> trajectories_;
    std::vector<std::pair<std::string, double>> generators_;
};

struct Options {
    std::uint64_t seed = 20240611;
    Fault fault = Fault::none;
    /// Criterion ids to run (1..10); empty runs all.
    std::vector<int> only;
    /// Called after each criterion finishes.
    std::function<void(const CheckResult&)> progress;
};

struct Report {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

inline constexpr int criterion_count = 10;

/// Title of criterion `id`.
std::string criterion_name(int id);

Report run_suite(const Options& opts = {});

/// One line per criterion: "[PASS] 3 gap formulas (0.1 s)", followed by indented details.
std::string format_report(const Report& report, bool with_details = true);

/// MI of rho0 projected onto the modes strictly slower than the cluster at
/// `separated_rate`. The cut sits at half that rate, so roundoff inside the
/// cluster cannot split it.
double slow_projection_mutual_information(const Superoperator& sup, const DensityMatrix& rho0, double separated_rate);

} // namespace tcrelax::verify
