#include <doctest.h>

#include "tcrelax/errors.hpp"
#include "tcrelax/models.hpp"
#include "tcrelax/spectra.hpp"
#include "tcrelax/state.hpp"

#include <algorithm>
#include <random>

using namespace tcrelax;

namespace {

DensityMatrix random_state(const SystemSpace& s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    Matrix g(s.dim(), s.dim());
    for (Index i = 0; i < g.rows(); ++i)
        for (Index j = 0; j < g.cols(); ++j) g(i, j) = cplx(d(rng), d(rng));
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityMatrix(rho, s);
}

std::vector<double> sorted_real_parts(const SpectrumReport& r) {
    std::vector<double> v;
    for (const cplx l : r.eigenvalues) v.push_back(l.real());
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("decoupled cavity relaxes with rates 0, kappa, kappa, 2 kappa") {
    ModelParams p;
    p.g0 = 0.0;
    const Superoperator sup = vectorize(build_coherent(make_space(2), p), true);
    const SpectrumReport r = analyze(sup);
    // Field block {0, -k, -k, -2k} tensored with 16 frozen atomic coherences.
    const std::vector<double> re = sorted_real_parts(r);
    REQUIRE(re.size() == 64);
    for (std::size_t k = 0; k < 16; ++k) CHECK(re[k] == doctest::Approx(-2.0).epsilon(1e-12));
    for (std::size_t k = 16; k < 48; ++k) CHECK(re[k] == doctest::Approx(-1.0).epsilon(1e-12));
    for (std::size_t k = 48; k < 64; ++k) CHECK(std::abs(re[k]) < 1e-12);
}

TEST_CASE("vectorized generator agrees with the operator-level right-hand side") {
    ModelParams p;
    p.g0 = 0.3;
    p.eps = 0.7;
    p.n_th = 0.4;
    p.gamma = 0.05;
    const SystemSpace s = make_space(4);
    const MasterEquation me = build_full(s, p);
    const Superoperator sup = vectorize(me);
    const DensityMatrix rho = random_state(s, 11);
    const Vector lhs = sup.sparse() * vectorize_state(rho.matrix());
    const Matrix direct = me.apply(rho.matrix());
    CHECK((devectorize_state(lhs, s.dim()) - direct).norm() < 1e-12 * (1.0 + direct.norm()));
    CHECK(sup.trace_functional_defect() < 1e-13);
    // Trace preservation and hermiticity of the direct evaluation.
    CHECK(std::abs(direct.trace()) < 1e-12);
    CHECK((direct - direct.adjoint()).norm() < 1e-12);
}

TEST_CASE("cross-term models keep the trace") {
    ModelParams p;
    p.g0 = 0.25;
    p.eps = 5.0;
    const MasterEquation me = build_rwa_displaced(make_space(4), p);
    CHECK_FALSE(me.lindblad_form());
    CHECK(vectorize(me).trace_functional_defect() < 1e-13);
}

TEST_CASE("effective rates") {
    ModelParams p;
    p.g0 = 0.5;
    p.eps = 10.0;
    p.n_th = 2.0;
    CHECK(gamma_eps(p) == doctest::Approx(1.0 * (1.0 / 40.0) * (1.0 / 40.0)));
    CHECK(gamma_g0(p) == doctest::Approx(0.0625));
    CHECK(gamma_incoherent(p) == doctest::Approx(0.25));
}

TEST_CASE("builders reject regimes they do not cover") {
    ModelParams p;
    p.g0 = 0.1;
    p.eps = 1.0;
    p.n_th = 1.0;
    CHECK_THROWS_AS(build_coherent(make_space(3), p), UnsupportedRegimeError);
    CHECK_THROWS_AS(build_incoherent(make_space(3), p), UnsupportedRegimeError);
    CHECK_THROWS_AS(build_full_displaced(make_space(3), p), UnsupportedRegimeError);
    ModelParams bad;
    bad.eps = -1.0;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("displaced-frame full model is isospectral with the lab frame") {
    ModelParams p;
    p.g0 = 0.25;
    p.eps = 0.3;
    p.gamma = 0.02;
    SpectrumOptions so;
    so.condition = false;
    const SpectrumReport lab = analyze(vectorize(build_full(make_space(8), p), true), so);
    const SpectrumReport disp = analyze(vectorize(build_full_displaced(make_space(6), p), true), so);
    REQUIRE(lab.rates.size() > 5);
    REQUIRE(disp.rates.size() > 5);
    CHECK(lab.kernel_dim == 1);
    CHECK(disp.kernel_dim == 1);
    for (std::size_t k = 0; k < 5; ++k) CHECK(disp.rates[k] == doctest::Approx(lab.rates[k]).epsilon(1e-6));
}
