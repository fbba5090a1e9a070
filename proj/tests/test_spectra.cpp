#include <doctest.h>

#include "tcrelax/krylov.hpp"
#include "tcrelax/spectra.hpp"

#include <algorithm>

using namespace tcrelax;

TEST_CASE("spectrum summary classifies zeros, clusters and rates") {
    const std::vector<cplx> ev = {{0.0, 0.0}, {1e-14, 0.0}, {-1.0, 0.0}, {-1.0 - 1e-12, 0.0}, {-3.0, 2.0}, {-3.0, -2.0}};
    const SpectrumReport r = summarize_spectrum(ev, 3.0);
    CHECK(r.kernel_dim == 2);
    REQUIRE(r.rates.size() == 2);
    CHECK(r.gap == doctest::Approx(1.0));
    CHECK(r.second_rate == doctest::Approx(3.0));
    CHECK(std::abs(r.eigenvalues.front()) < 1e-13);
}

TEST_CASE("splitting diagnostic picks the widest jump") {
    const std::vector<cplx> ev = {{0.0, 0.0}, {-1e-6, 0.0}, {-3e-6, 0.0}, {-0.1, 0.0}, {-0.3, 0.0}};
    const SplittingDiagnostic sd = splitting_diagnostic(summarize_spectrum(ev, 1.0));
    REQUIRE(sd.available);
    CHECK(sd.separated_rate == doctest::Approx(0.1));
    CHECK(sd.ratio == doctest::Approx(1e5));
    CHECK(sd.metastable);
}

TEST_CASE("effective models reproduce the closed-form tables") {
    ModelParams c;
    c.g0 = 0.25;
    c.eps = 7.0;
    const SpectrumMatch mc = compare_spectra(analyze(vectorize(build_effective_coherent(c), true)), analytic_coherent(c), 1e-10);
    CHECK(mc.ok);
    CHECK(mc.multiplicities_agree);

    ModelParams i;
    i.g0 = 0.1;
    i.n_th = 2.0;
    const SpectrumMatch mi = compare_spectra(analyze(vectorize(build_effective_incoherent(i), true)), analytic_incoherent(i), 1e-10);
    CHECK(mi.ok);
    CHECK(analytic_incoherent(i).gap() == doctest::Approx(2.0 * 2.0 * 0.01));
    CHECK(analytic_coherent(c).total_multiplicity() == 16);
}

TEST_CASE("shift-invert Krylov agrees with the dense spectrum") {
    ModelParams p;
    p.g0 = 0.3;
    p.n_th = 0.5;
    const Superoperator sup = vectorize(build_incoherent(make_space(6), p), true);
    SpectrumOptions so;
    so.condition = false;
    const SpectrumReport dense = analyze(sup, so);
    TargetedOptions to;
    to.krylov.nev = 8;
    const SpectrumReport krylov = analyze_targeted(sup, to, so);
    REQUIRE(krylov.eigenvalues.size() >= 8);
    // The 8 eigenvalues nearest the shift, found by brute force on the dense list.
    std::vector<cplx> ref = dense.eigenvalues;
    const cplx shift = to.shifts.front();
    std::sort(ref.begin(), ref.end(), [&](cplx a, cplx b) { return std::abs(a - shift) < std::abs(b - shift); });
    for (std::size_t k = 0; k < 8; ++k) {
        double best = 1e300;
        for (const cplx v : krylov.eigenvalues) best = std::min(best, std::abs(v - ref[k]));
        CHECK(best < 1e-9);
    }
    CHECK(krylov.partial);
}
