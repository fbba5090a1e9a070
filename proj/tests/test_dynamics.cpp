#include <doctest.h>

#include "tcrelax/dynamics.hpp"
#include "tcrelax/errors.hpp"
#include "tcrelax/observables.hpp"
#include "tcrelax/spectra.hpp"
#include "tcrelax/verify.hpp"

#include <cmath>

using namespace tcrelax;

TEST_CASE("one photon leaks out as exp(-2 kappa t)") {
    ModelParams p;
    const SystemSpace s = make_space(3);
    const Superoperator sup = vectorize(build_coherent(s, p));
    const DensityMatrix rho0 = DensityMatrix::pure(basis_state(s, 0, 0, 1), s);
    const std::vector<double> grid = {0.0, 0.1, 0.5, 1.0, 2.0, 5.0};
    const Trajectory traj = evolve_ode(sup, rho0, grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
        CHECK(photon_number(traj.states[k]) == doctest::Approx(std::exp(-2.0 * grid[k])).epsilon(1e-7));
}

TEST_CASE("driven cavity settles in the coherent state alpha = eps / kappa") {
    ModelParams p;
    p.eps = 0.5;
    const SystemSpace s = make_space(8);
    const Superoperator sup = vectorize(build_coherent(s, p), true);
    const DensityMatrix ss = steady_state(sup, ground_state(s));
    CHECK(photon_number(ss) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("spectral evolution agrees with the integrator") {
    ModelParams p;
    p.g0 = 0.25;
    p.eps = 3.0;
    const Superoperator sup = vectorize(build_effective_coherent(p), true);
    Vector psi = Vector::Constant(4, cplx(0.5, 0.0));
    const DensityMatrix rho0 = DensityMatrix::pure(psi, atomic_space());
    const std::vector<double> grid = log_time_grid(0.1, 1e3, 40);
    const Trajectory a = evolve_ode(sup, rho0, grid);
    const Trajectory b = evolve_spectral(eig_general(sup.to_dense()), rho0, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        worst = std::max(worst, (a.states[k].matrix() - b.states[k].matrix()).norm());
    CHECK(worst < 1e-7);
    CHECK(a.worst.trace < 1e-8);
}

TEST_CASE("exponential fit recovers the decay time") {
    std::vector<double> t, d;
    for (int k = 0; k <= 200; ++k) {
        t.push_back(0.1 * k);
        d.push_back(0.7 * std::exp(-t.back() / 2.5) + 0.2 * std::exp(-t.back() / 0.2));
    }
    const RelaxationEstimate est = fit_relaxation(t, d);
    CHECK(est.tau_fit == doctest::Approx(2.5).epsilon(1e-3));
    std::vector<double> flat(t.size(), 1.0);
    CHECK_THROWS_AS(fit_relaxation(t, flat), FitWindowError);
}

TEST_CASE("plateau detection on a two-step curve") {
    // Steps at t = 1 and t = 1e5 with a flat shelf at 0.5 between them.
    const std::vector<double> grid = log_time_grid(1e-3, 1e8, 221);
    std::vector<double> v;
    for (const double t : grid) v.push_back(0.5 * (1.0 - std::exp(-t)) + 0.25 * (1.0 - std::exp(-t / 1e5)));
    const std::vector<Plateau> found = detect_transient_plateaus(grid, v, 1e5);
    REQUIRE(found.size() == 1);
    CHECK(found[0].level == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(found[0].t_start > 1.0);
    CHECK(found[0].t_end < 1e5);
    CHECK(found[0].decades() > 2.0);
}

TEST_CASE("metastable level of the driven pair from |gg> is half a bit") {
    ModelParams p;
    p.g0 = 0.25;
    p.eps = 1000.0;
    const Superoperator sup = vectorize(build_effective_coherent(p), true);
    const SplittingDiagnostic sd = splitting_diagnostic(analyze(sup));
    REQUIRE(sd.metastable);
    const double level = verify::slow_projection_mutual_information(sup, ground_state(atomic_space()), sd.separated_rate);
    CHECK(level == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("truncation check doubles until the observable settles") {
    int calls = 0;
    const ModelBuilder build = [&](const SystemSpace& s, const ModelParams& q) {
        ++calls;
        return build_coherent(s, q);
    };
    const ObservableExtractor value = [](const MasterEquation& me) { return 1.0 + std::pow(0.5, me.space.fock_cutoff); };
    TruncationOptions to;
    to.rel_tol = 1e-3;
    const TruncationResult r = check_truncation(build, ModelParams{}, value, to);
    // 2^-8 still moves the value by 4e-3; 2^-16 vs 2^-32 settles.
    CHECK(r.cutoff == 16);
    CHECK(r.history.back().first == 32);
    CHECK(calls == 4);
    to.cap = 8;
    CHECK_THROWS_AS(check_truncation(build, ModelParams{}, value, to), NonConvergenceError);
}

TEST_CASE("time grids") {
    const std::vector<double> g = log_time_grid(0.1, 100.0, 4);
    REQUIRE(g.size() == 5);
    CHECK(g[0] == 0.0);
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK(g.back() == 100.0);
    const std::vector<double> bad = {0.0, 1.0, 1.0};
    CHECK_THROWS(validate_time_grid(bad));
}
