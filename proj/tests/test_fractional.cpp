// Unit tests for the regularized action, Fourier values, scans and the
// spherical Parseval identity.
//
// Ball oracle (n=3, p=0): frac_action(q) = pi^3 / Gamma(3 - q/2), from the
// Beta-function continuation of int_0^1 t^{-q-1}(1-t^2)^2 dt.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbplab/fractional.hpp"

using namespace cbplab;

namespace {
const double kPi = M_PI;

QuadratureConfig cfg_tight() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    return cfg;
}

QuadratureConfig cfg_mc(long samples = 20000) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-11;
    cfg.mc_samples = samples;
    return cfg;
}

RadialSectionProfile ball_profile(double p, const QuadratureConfig& cfg) {
    return RadialSectionProfile::pole(Body::ball(3), p, cfg);
}

double ball_oracle(double q) { return kPi * kPi * kPi / gamma_fn(3.0 - 0.5 * q); }
}  // namespace

TEST_CASE("FracQuery: windows and validation") {
    CHECK(FracQuery::make(3, 0.0, -1.5).window == QWindow::negative);
    CHECK(FracQuery::make(3, 0.0, 0.0).window == QWindow::even_integer);
    CHECK(FracQuery::make(3, 0.0, 0.0).d == 0);
    CHECK(FracQuery::make(3, 0.0, 2.0).d == 1);
    CHECK(FracQuery::make(3, 0.0, 0.7).window == QWindow::window);
    CHECK(FracQuery::make(3, 0.0, 2.5).d == 1);
    CHECK(FracQuery::make(4, 0.0, 4.5).d == 2);
    CHECK_THROWS_AS(FracQuery::make(3, 0.0, 4.0), domain_error);   // q >= 2n-2
    CHECK_THROWS_AS(FracQuery::make(3, 0.0, -2.0), domain_error);  // q <= -2
    CHECK_THROWS_AS(FracQuery::make(3, 4.0, 0.5), domain_error);   // p >= 2n-2
    CHECK_THROWS_AS(FracQuery::make(3, 1.6, 2.5), domain_error);   // gamma <= 0
    CHECK_THROWS_AS(FracQuery::make(5, 0.0, 6.5), domain_error);   // d > 2 rejected
}

TEST_CASE("frac_action: ball oracle across all windows, rel err <= 1e-6") {
    auto cfg = cfg_tight();
    RadialSectionProfile prof = ball_profile(0.0, cfg);
    for (double q : {-1.5, -0.5, 0.0, 0.7, 1.3, 2.0, 2.5}) {
        FracActionResult r = frac_action(prof, q, cfg);
        CHECK(std::abs(r.value - ball_oracle(q)) <= 1e-6 * std::abs(ball_oracle(q)));
    }
    // reference values
    CHECK(frac_action(prof, 0.0, cfg).value == doctest::Approx(15.5031383401).epsilon(1e-9));
    CHECK(frac_action(prof, 1.0, cfg).value == doctest::Approx(23.3246).epsilon(1e-5));
    CHECK(frac_action(prof, 2.0, cfg).value == doctest::Approx(kPi * kPi * kPi).epsilon(1e-10));
    CHECK(frac_action(prof, 2.5, cfg).value == doctest::Approx(33.7368522538).epsilon(1e-8));
}

TEST_CASE("frac_action: continuity across the window boundaries q=0 and q=2") {
    auto cfg = cfg_tight();
    RadialSectionProfile prof = ball_profile(0.0, cfg);
    const double at0 = frac_action(prof, 0.0, cfg).value;
    const double at2 = frac_action(prof, 2.0, cfg).value;
    for (double eps : {1e-3, -1e-3}) {
        CHECK(std::abs(frac_action(prof, 0.0 + eps, cfg).value - at0) <= 1e-3 * std::abs(at0));
        CHECK(std::abs(frac_action(prof, 2.0 + eps, cfg).value - at2) <= 1e-3 * std::abs(at2));
    }

    // same continuity on a gentle counterexample profile (weighted, p=alpha);
    // large N makes dF/dq itself large (a_2 ~ N), so N = 1 here
    Body cex = Body::counterexample(3, -0.5, 1.0);
    RadialSectionProfile cprof = RadialSectionProfile::pole(cex, -0.5, cfg);
    const double c2 = frac_action(cprof, 2.0, cfg).value;
    CHECK(std::abs(frac_action(cprof, 2.0 + 1e-3, cfg).value - c2) <= 1e-2 * std::abs(c2));
    CHECK(std::abs(frac_action(cprof, 2.0 - 1e-3, cfg).value - c2) <= 1e-2 * std::abs(c2));
    // symmetric-difference limit: the two one-sided values straddle the
    // point value, so their midpoint pins it much more tightly
    const double mid2 = 0.5 * (frac_action(cprof, 2.0 + 1e-3, cfg).value +
                               frac_action(cprof, 2.0 - 1e-3, cfg).value);
    CHECK(mid2 == doctest::Approx(c2).epsilon(1e-5));
}

TEST_CASE("frac_action: weighted ball profiles against the Fourier route") {
    // For the ball, 2^{q+1} Gamma((q+2)/2) (2n-q-p-2) frac_action must equal
    // the classical radial transform for every valid (p, q), including
    // negative p and fractional weights.
    auto cfg = cfg_tight();
    for (double p : {-0.5, 0.5, 1.4}) {
        RadialSectionProfile prof = ball_profile(p, cfg);
        for (double q : {-1.5, -0.5, 0.5, 1.5, 2.4}) {
            if (2.0 * 3 - q - p - 2.0 <= 0.0) continue;
            FtValue ft = ft_weighted_norm(prof, q, cfg);
            const double oracle = ball_ft_closed_form(3, 1.0, p, q);
            CHECK(std::abs(ft.value - oracle) <= 1e-6 * std::abs(oracle));
        }
    }
}

TEST_CASE("ft_weighted_norm: reference ball values") {
    auto cfg = cfg_tight();
    std::vector<double> xi = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    Body ball = Body::ball(3);
    // (|x|^{-3})^ = 8 pi^3 in R^6
    FtValue v1 = ft_weighted_norm(ball, xi, 0.0, 1.0, cfg);
    CHECK(v1.value == doctest::Approx(8.0 * std::pow(kPi, 3)).epsilon(1e-8));
    CHECK(v1.route == "a_route");
    // (|x|^{-4})^ = 4 pi^3
    FtValue v0 = ft_weighted_norm(ball, xi, 0.0, 0.0, cfg);
    CHECK(v0.value == doctest::Approx(4.0 * std::pow(kPi, 3)).epsilon(1e-10));
    CHECK(ball_ft_closed_form(3, 1.0, 0.0, 1.0) ==
          doctest::Approx(8.0 * std::pow(kPi, 3)).epsilon(1e-12));
    CHECK(ball_ft_closed_form(3, 1.0, 0.0, 0.0) ==
          doctest::Approx(4.0 * std::pow(kPi, 3)).epsilon(1e-12));
}

TEST_CASE("ft_weighted_norm: orbit constancy under R_theta") {
    auto cfg = cfg_mc(15000);
    Body cex = Body::counterexample(3, -0.5, 10.0);
    std::vector<double> xi = {std::cos(0.6), 0.0, 0.0, 0.0, std::sin(0.6), 0.0};
    FtValue a = ft_weighted_norm(cex, xi, 0.5, -0.5, cfg);
    std::vector<double> xr = r_theta_rotate(xi, 1.1);
    FtValue b = ft_weighted_norm(cex, xr, 0.5, -0.5, cfg);
    CHECK(std::abs(a.value - b.value) <= 3.0 * (a.error + b.error) + 1e-6 * std::abs(a.value));
}

TEST_CASE("section_volume_ft: ball and dilation") {
    auto cfg = cfg_tight();
    std::vector<double> xi = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(section_volume_ft(Body::ball(3), xi, cfg) ==
          doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
    CHECK(section_volume_ft(Body::dilate(0.9, Body::ball(3)), xi, cfg) ==
          doctest::Approx(std::pow(0.9, 4) * kPi * kPi / 2.0).epsilon(1e-10));
}

TEST_CASE("frac_laplace_section: ball closed forms and dilation homogeneity") {
    auto cfg = cfg_tight();
    std::vector<double> xi = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    Body ball = Body::ball(3);
    CHECK(frac_laplace_section(ball, xi, 0.0, cfg) ==
          doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
    // (1/(8 pi)) (|x|^{-2})^ = 16 pi^3 / (8 pi) = 2 pi^2
    CHECK(frac_laplace_section(ball, xi, 2.0, cfg) ==
          doctest::Approx(2.0 * kPi * kPi).epsilon(1e-10));

    Body dil = Body::dilate(0.8, Body::ball(3));
    for (double alpha : {0.0, 1.3, 2.0}) {
        const double lhs = frac_laplace_section(dil, xi, alpha, cfg);
        const double rhs = std::pow(0.8, 4) * frac_laplace_section(ball, xi, alpha, cfg);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
    CHECK_THROWS_AS(frac_laplace_section(ball, xi, 4.0, cfg), domain_error);
}

TEST_CASE("posdef_scan: ball minimum positive and independent of psi") {
    auto cfg = cfg_tight();
    PosdefScanResult scan = posdef_scan(Body::ball(3), 0.5, 1.0, uniform_psi_grid(5), cfg);
    CHECK(scan.min_value > 0.0);
    for (double v : scan.value) CHECK(v == doctest::Approx(scan.value[0]).epsilon(1e-12));
}

TEST_CASE("posdef_scan: Lemma-2 style positivity for the counterexample body") {
    auto cfg = cfg_mc(15000);
    Body cex = Body::counterexample(3, -0.5, 1e4);
    PosdefScanResult scan = posdef_scan(cex, 0.5, 1.0, uniform_psi_grid(3), cfg, 2);
    CHECK(scan.min_value >= -1e-8 * scan.scale);
}

TEST_CASE("posdef_scan: the certificate pair (p=alpha, q=2n-alpha-4) goes negative") {
    auto cfg = cfg_tight();
    Body cex = Body::counterexample(3, -0.5, 1e4);
    // pole only (psi = pi/2): closed-form backend
    std::vector<double> pole_grid = {M_PI / 2.0};
    PosdefScanResult scan = posdef_scan(cex, -0.5, 2.5, pole_grid, cfg);
    CHECK(scan.min_value < 0.0);
}

TEST_CASE("brunn_report: ball and counterexample") {
    auto cfg = cfg_tight();
    std::vector<double> xi = {0.0, 0.0, 0.0, 0.0, 1.0, 0.0};
    BrunnReport rb = brunn_report(Body::ball(3), xi, 0.0, 1.0, 100, cfg);
    CHECK(rb.max_at_origin);
    CHECK(rb.max_excess <= 0.0 + 1e-12);
    CHECK(rb.a1 == doctest::Approx(-kPi * kPi).epsilon(1e-10));
    CHECK(rb.a1_nonpositive);
    CHECK(rb.frac_value == doctest::Approx(ball_oracle(1.0)).epsilon(1e-8));
    CHECK(rb.frac_nonnegative);

    BrunnReport rc = brunn_report(Body::counterexample(3, -0.5, 100.0), xi, -0.5, 1.0, 100, cfg);
    CHECK(rc.max_at_origin);
    CHECK(rc.a1_nonpositive);
    CHECK(rc.frac_nonnegative);
}

TEST_CASE("parseval_residual: K = L = ball at p = 2 equals 64 pi^9") {
    auto cfg = cfg_tight();
    ParsevalResult r = parseval_residual(Body::ball(3), Body::ball(3), 2.0, cfg);
    const double expect = 64.0 * std::pow(kPi, 9);
    CHECK(r.lhs == doctest::Approx(expect).epsilon(1e-8));
    CHECK(r.rhs == doctest::Approx(expect).epsilon(1e-8));
    CHECK(r.residual <= 1e-6);
}

TEST_CASE("parseval_residual: dilation scaling consistency") {
    auto cfg = cfg_tight();
    ParsevalResult r = parseval_residual(Body::dilate(0.7, Body::ball(3)), Body::ball(3), 2.0, cfg);
    CHECK(r.residual <= 1e-6);
    CHECK_THROWS_AS(parseval_residual(Body::ball(3), Body::ball(3), -1.0, cfg), domain_error);
}

TEST_CASE("frac_action: numeric-only source agrees within error bars") {
    auto cfg = cfg_tight();
    Body cex = Body::counterexample(3, -0.5, 100.0);
    RadialSectionProfile prof = RadialSectionProfile::pole(cex, -0.5, cfg);
    FracActionResult pref = frac_action(prof, 2.5, cfg, CoeffSource::preferred);
    FracActionResult num = frac_action(prof, 2.5, cfg, CoeffSource::numeric_only);
    CHECK(std::abs(pref.value - num.value) <= 2.0 * (pref.err + num.err));
}
