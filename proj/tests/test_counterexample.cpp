// Unit tests for the sign-certificate machinery: roots, origin data, the
// certificate integral and its N-asymptotics.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbplab/counterexample.hpp"

using namespace cbplab;

namespace {
const double kPi = M_PI;

QuadratureConfig cfg_tight() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    return cfg;
}
}  // namespace

TEST_CASE("alpha_root: closed form, defining property, asymptotics") {
    CHECK(alpha_root(100.0) == doctest::Approx(0.3084238).epsilon(1e-6));
    for (double N : {0.75, 3.0, 42.0, 1e4, 1e8}) {
        const double a = alpha_root(N);
        CHECK(std::abs(1.0 - a * a - N * std::pow(a, 4)) <= 1e-12);
        // agrees with the generic bracketing root finder
        const double r = find_root(
            [N](double t) { return 1.0 - t * t - N * std::pow(t, 4); }, 0.0, 1.0, 1e-14);
        CHECK(a == doctest::Approx(r).epsilon(1e-11));
    }
    CHECK(alpha_root(1e12) * std::pow(1e12, 0.25) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("beta_root: defining equation, ordering, asymptotics") {
    const double b = beta_root(100.0, 2.5);
    CHECK(b > 0.30);
    CHECK(b < 0.3084238);
    CHECK(b == doctest::Approx(0.30711567349417535).epsilon(1e-9));
    for (double N : {1.0, 100.0, 1e4, 1e8}) {
        const double bb = beta_root(N, 2.5);
        CHECK(std::abs(1.0 - bb * bb - N * std::pow(bb, 4) - std::pow(bb, 3.5)) <= 1e-12);
        CHECK(bb < alpha_root(N));
    }
}

TEST_CASE("origin_closed_forms: alpha = 0 boundary and the factor diagnostic") {
    OriginData d0 = origin_closed_forms(3, 0.0);
    CHECK(d0.A0 == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-14));
    CHECK(d0.a1 == doctest::Approx(-kPi * kPi / 2.0).epsilon(1e-14));
    CHECK(d0.a1_display == doctest::Approx(d0.a1).epsilon(1e-14));
    CHECK(d0.display_over_a1 == doctest::Approx(1.0).epsilon(1e-14));

    // away from alpha=0 the published display is a different multiple of a1
    OriginData dm = origin_closed_forms(3, -0.5);
    CHECK(dm.a1 == doctest::Approx(-2.41256996).epsilon(1e-8));
    CHECK(dm.a1_display == doctest::Approx(-0.43864908).epsilon(1e-7));
    CHECK(dm.display_over_a1 == doctest::Approx(0.181818).epsilon(1e-5));

    OriginData d4 = origin_closed_forms(4, 1.5);
    CHECK(d4.a1 == doctest::Approx(-16.19216671).epsilon(1e-8));
    CHECK(d4.a1_display == doctest::Approx(-25.49404971).epsilon(1e-8));

    CHECK_THROWS_AS(origin_closed_forms(3, 2.5), domain_error);
}

TEST_CASE("origin_closed_forms: a1 matches taylor_even_coeffs on profiles") {
    auto cfg = cfg_tight();
    struct Case {
        int n;
        double alpha, N;
    };
    for (const Case& c : {Case{3, -0.5, 100.0}, Case{3, 0.0, 100.0}, Case{4, 1.5, 50.0}}) {
        OriginData d = origin_closed_forms(c.n, c.alpha);
        Body body = counterexample_profile_body(c.n, c.alpha, c.N);
        RadialSectionProfile prof = RadialSectionProfile::pole(body, c.alpha, cfg);
        TaylorCoeffs numeric = prof.taylor(1, true);
        CHECK(prof.taylor(1).a[0] == doctest::Approx(d.A0).epsilon(1e-12));
        CHECK(numeric.a[1] == doctest::Approx(d.a1).epsilon(1e-4));
        CHECK(prof.taylor(1).a[1] == doctest::Approx(d.a1).epsilon(1e-12));
    }
}

TEST_CASE("counterexample profile is nonincreasing on [0, a_N]") {
    auto cfg = cfg_tight();
    for (double N : {1.0, 100.0, 1e4}) {
        Body body = Body::counterexample(3, -0.5, N);
        RadialSectionProfile prof = RadialSectionProfile::pole(body, -0.5, cfg);
        double prev = prof.value(0.0);
        for (int i = 1; i <= 100; ++i) {
            const double t = prof.t_max() * i / 100.0;
            const double v = prof.value(t);
            CHECK(v <= prev * (1.0 + 1e-10) + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("lemma4_certificate: reference runs") {
    auto cfg = cfg_tight();
    CertificateResult r1 = lemma4_certificate({3, -0.5, 1e4}, cfg);
    CHECK(r1.verdict == CertificateVerdict::negative);
    CHECK(r1.q == doctest::Approx(2.5));
    // independent oracle run put the value near -1465.6
    CHECK(r1.integral_value < -1300.0);
    CHECK(r1.integral_value > -1600.0);
    CHECK(r1.err < 1e-4 * std::abs(r1.integral_value));

    CertificateResult r2 = lemma4_certificate({4, 1.5, 1.0}, cfg);
    CHECK(r2.verdict == CertificateVerdict::nonnegative);
    CHECK(r2.integral_value == doctest::Approx(37.59).epsilon(0.02));

    CertificateResult r3 = lemma4_certificate({4, 1.5, 100.0}, cfg);
    CHECK(r3.verdict == CertificateVerdict::negative);
    CHECK(r3.integral_value == doctest::Approx(-66.65).epsilon(0.02));

    CHECK_THROWS_AS(lemma4_certificate({3, 1.5, 10.0}, cfg), validation_error);
}

TEST_CASE("lemma4_certificate: stability under refinement and a1 source swap") {
    QuadratureConfig loose;
    loose.rel_tol = 1e-8;
    loose.abs_tol = 1e-10;
    auto tight = cfg_tight();
    for (double N : {10.0, 1e4}) {
        CertificateResult a = lemma4_certificate({3, -0.5, N}, loose);
        CertificateResult b = lemma4_certificate({3, -0.5, N}, tight);
        CHECK(std::abs(a.integral_value - b.integral_value) <= 2.0 * (a.err + b.err) + 1e-9);
        CertificateResult c =
            lemma4_certificate({3, -0.5, N}, tight, CoeffSource::numeric_only);
        CHECK(std::abs(c.integral_value - b.integral_value) <= 2.0 * (c.err + b.err) + 1e-7);
    }
}

TEST_CASE("lemma4_certificate: positive prefactor chain (same sign as the FT value)") {
    auto cfg = cfg_tight();
    for (double N : {1.0, 100.0, 1e6}) {
        CertificateResult r = lemma4_certificate({3, -0.5, N}, cfg);
        CHECK(r.ft_pole_value * r.integral_value >= 0.0);
        CertificateResult r4 = lemma4_certificate({4, 1.5, N}, cfg);
        CHECK(r4.ft_pole_value * r4.integral_value >= 0.0);
    }
}

TEST_CASE("certificate_split: closed-form tail matches quadrature to 1e-10") {
    auto cfg = cfg_tight();
    CounterexampleParams params{3, -0.5, 100.0};
    CertificateSplit split = certificate_split(params, cfg);
    const double q = params.q();
    const double aN = alpha_root(params.N);
    OriginData d = origin_closed_forms(3, -0.5);
    // quadrature over [a_N, T] plus the analytic remainder beyond T
    const double T = aN * 1e4;
    auto f = [&](double t) { return std::pow(t, -q - 1.0) * (-d.A0 - d.a1 * t * t); };
    IntegralResult part = integrate_adaptive(f, aN, T, cfg);
    const double beyond = -d.A0 * std::pow(T, -q) / q - d.a1 * std::pow(T, 2.0 - q) / (q - 2.0);
    CHECK(split.tail == doctest::Approx(part.value + beyond).epsilon(1e-10));

    // the split reassembles the certificate integral
    CertificateResult r = lemma4_certificate(params, cfg);
    CHECK(split.head + split.mid + split.tail ==
          doctest::Approx(r.integral_value).epsilon(1e-8));
}

TEST_CASE("lemma4_sweep: onset bookkeeping") {
    auto cfg = cfg_tight();
    std::vector<double> grid = geometric_grid(1.0, 1e4, 1);
    SweepSummary sweep = lemma4_sweep(4, 1.5, grid, cfg, 2);
    REQUIRE(sweep.results.size() == grid.size());
    CHECK(sweep.has_onset);
    CHECK(sweep.results.front().verdict == CertificateVerdict::nonnegative);
    CHECK(sweep.results.back().verdict == CertificateVerdict::negative);
    CHECK(sweep.onset_N > sweep.results.front().N);

    // (3, -0.5) is negative from the very start of the grid
    SweepSummary sweep3 = lemma4_sweep(3, -0.5, grid, cfg, 2);
    CHECK(sweep3.all_negative);
    CHECK(sweep3.has_onset);
    CHECK(sweep3.onset_N == grid.front());
}

TEST_CASE("scaling_study: exponents against the asymptotic references") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    std::vector<double> grid = geometric_grid(1e4, 1e8, 2);
    ScalingStudy study = scaling_study(3, -0.5, grid, cfg, 2);
    const double q = 2.5;
    for (const ScalingFit& fit : study.fits) {
        if (fit.name == "a_N" || fit.name == "b_N") {
            CHECK(fit.exponent > -0.27);
            CHECK(fit.exponent < -0.23);
        }
        if (fit.name == "abs_integral_top_decade")
            CHECK(std::abs(fit.exponent - q / 4.0) <= 0.05);
        if (fit.name == "split_tail")
            CHECK(std::abs(fit.exponent - q / 4.0) <= 0.05);
    }
    // for n=3 the admissible alpha is negative: E and F are negative as
    // literally written, and that is what gets reported
    CHECK_FALSE(study.E_positive);
    CHECK_FALSE(study.F_positive);
    CHECK(study.D_positive);
}

TEST_CASE("geometric_grid: shape") {
    std::vector<double> g = geometric_grid(1.0, 1e4, 1);
    CHECK(g.size() == 5);
    CHECK(g.front() == doctest::Approx(1.0));
    CHECK(g.back() == doctest::Approx(1e4).epsilon(1e-9));
    CHECK_THROWS_AS(geometric_grid(-1.0, 10.0, 1), validation_error);
}
