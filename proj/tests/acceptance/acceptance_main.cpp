// Acceptance suite: runs every top-level requirement at its stated
// tolerance and prints one PASS/FAIL line per criterion. The cbplab binary
// path may be passed as argv[1]; criterion 11 (byte determinism) needs it.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cbplab/theorems.hpp"

using namespace cbplab;

namespace {

const double kPi = M_PI;
std::string g_cli;

QuadratureConfig cfg_quad() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    return cfg;
}

QuadratureConfig cfg_mc() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-11;
    cfg.mc_samples = 20000;
    return cfg;
}

struct Criterion {
    int id;
    std::string title;
    std::function<bool(std::string&)> run;
};

bool rel_ok(double value, double expect, double tol) {
    return std::abs(value - expect) <= tol * std::abs(expect);
}

std::string cli_capture(const std::string& args, int* exit_code) {
    const std::string path = "/tmp/cbplab_acceptance_out.txt";
    const int raw = std::system((g_cli + " " + args + " > " + path + " 2>/dev/null").c_str());
    if (exit_code) *exit_code = WEXITSTATUS(raw);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

bool criterion1(std::string& detail) {
    auto cfg = cfg_quad();
    Body ball = Body::ball(3);
    const double vol = volume(ball, cfg).value;
    const double vol_expect = kPi * kPi * kPi / 6.0;
    std::vector<double> xi = {0.0, 0.0, 0.0, 0.0, 1.0, 0.0};
    const double direct = section_volume(ball, xi, cfg).value;
    const double fourier = section_volume_ft(ball, xi, cfg);
    const double s_expect = kPi * kPi / 2.0;
    std::ostringstream os;
    os << "vol=" << vol << " direct=" << direct << " ft=" << fourier;
    detail = os.str();
    return rel_ok(vol, vol_expect, 1e-6) && rel_ok(direct, s_expect, 1e-4) &&
           rel_ok(fourier, s_expect, 1e-4);
}

bool criterion2(std::string& detail) {
    auto cfg = cfg_quad();
    RadialSectionProfile prof = RadialSectionProfile::pole(Body::ball(3), 0.0, cfg);
    double worst = 0.0;
    for (double q : {-1.5, -0.5, 0.0, 0.7, 1.3, 2.0, 2.5}) {
        const double expect = kPi * kPi * kPi / gamma_fn(3.0 - 0.5 * q);
        const double got = frac_action(prof, q, cfg).value;
        worst = std::max(worst, std::abs(got - expect) / std::abs(expect));
    }
    double worst_cont = 0.0;
    for (double q0 : {0.0, 2.0}) {
        const double at = frac_action(prof, q0, cfg).value;
        for (double eps : {1e-3, -1e-3}) {
            const double nearby = frac_action(prof, q0 + eps, cfg).value;
            worst_cont = std::max(worst_cont, std::abs(nearby - at) / std::abs(at));
        }
    }
    std::ostringstream os;
    os << "worst oracle rel err " << worst << ", worst boundary jump " << worst_cont;
    detail = os.str();
    return worst <= 1e-6 && worst_cont <= 1e-3;
}

bool criterion3(std::string& detail) {
    auto cfg = cfg_quad();
    double worst = 0.0;
    int cells = 0;
    for (double p : {-0.5, 0.0, 0.5, 1.0, 1.4}) {
        RadialSectionProfile prof = RadialSectionProfile::pole(Body::ball(3), p, cfg);
        for (double q : {-1.5, -0.5, 0.5, 1.5, 2.4}) {
            const double oracle = ball_ft_closed_form(3, 1.0, p, q);
            const double got = ft_weighted_norm(prof, q, cfg).value;
            worst = std::max(worst, std::abs(got - oracle) / std::abs(oracle));
            ++cells;
        }
    }
    std::ostringstream os;
    os << cells << " grid cells, worst rel err " << worst;
    detail = os.str();
    return cells == 25 && worst <= 1e-6;
}

bool criterion4(std::string& detail) {
    auto quad = cfg_quad();
    auto mc = cfg_mc();
    std::vector<Body> bodies;
    bodies.push_back(Body::ball(3));
    bodies.push_back(Body::complex_lp(3, 4.0));
    bodies.push_back(Body::counterexample(3, -0.5, 1e4));
    const std::vector<double> qs = {-1.5, -0.5, 0.0, 1.0, 2.0};
    const std::vector<double> ps = {0.0, 0.5, 1.0};
    const std::vector<double> psis = {0.0, kPi / 4.0, kPi / 2.0};

    double worst_ratio = 0.0;  // min_value / scale, most negative
    int scans = 0;
    for (const Body& body : bodies) {
        const bool radial = body.base_body().family() == BodyFamily::euclidean_ball;
        const auto& cfg = radial || body.biaxial() ? quad : mc;
        for (double p : ps) {
            // profiles are shared across q; build one per direction
            std::vector<RadialSectionProfile> profs;
            std::vector<double> used_psi = radial ? std::vector<double>{0.0} : psis;
            for (double psi : used_psi) {
                std::vector<double> xi = canonical_direction(3, psi);
                profs.push_back(
                    RadialSectionProfile::make(body, hyperplane_frame(xi), p, cfg, 4));
            }
            for (double q : qs) {
                if (!(q > -2.0 && q <= 2.0)) continue;
                if (!(p >= 0.0 && p < 2.0 * 3 - q - 3.0)) continue;  // Lemma-2 window
                double min_v = 1e300, scale = 0.0;
                for (const auto& prof : profs) {
                    const double v = ft_weighted_norm(prof, q, cfg).value;
                    min_v = std::min(min_v, v);
                    scale = std::max(scale, std::abs(v));
                }
                ++scans;
                worst_ratio = std::min(worst_ratio, min_v / scale);
                if (min_v < -1e-8 * scale) {
                    std::ostringstream os;
                    os << "violation: body " << body.spec_hash() << " p=" << p << " q=" << q
                       << " min/scale=" << min_v / scale;
                    detail = os.str();
                    return false;
                }
            }
        }
    }
    std::ostringstream os;
    os << scans << " scans, worst min/scale ratio " << worst_ratio;
    detail = os.str();
    return scans > 0;
}

bool criterion5(std::string& detail) {
    auto quad = cfg_quad();
    auto mc = cfg_mc();
    struct Case {
        Body body;
        double p;
        bool monte_carlo;
    };
    std::vector<Case> cases;
    cases.push_back({Body::ball(3), 0.0, false});
    cases.push_back({Body::ball(3), 0.5, false});
    cases.push_back({Body::ball(3), 1.0, false});
    cases.push_back({Body::counterexample(3, -0.5, 1e4), -0.5, false});
    cases.push_back({Body::counterexample(4, 1.5, 100.0), 1.5, false});
    cases.push_back({Body::complex_lp(3, 4.0), 0.0, true});

    for (const Case& c : cases) {
        const auto& cfg = c.monte_carlo ? mc : quad;
        const int n = c.body.n();
        std::vector<double> xi = canonical_direction(n, c.body.biaxial() ? kPi / 2.0 : 0.0);
        HyperplaneFrame frame = hyperplane_frame(xi);
        RadialSectionProfile prof = RadialSectionProfile::make(c.body, frame, c.p, cfg, 4);
        const double a0 = prof.value(0.0);
        for (int i = 0; i <= 100; ++i) {
            const double t = prof.t_max() * i / 100.0;
            const double slack = 3.0 * (prof.sigma(t) + prof.sigma(0.0));
            if (prof.value(t) > a0 * (1.0 + 1e-8) + slack) {
                std::ostringstream os;
                os << "origin maximality violated for " << c.body.spec_hash() << " at t=" << t;
                detail = os.str();
                return false;
            }
        }
        TaylorCoeffs coeffs = prof.taylor(1);
        if (coeffs.a[1] > coeffs.err[1]) {
            detail = "a1 > 0 for " + c.body.spec_hash();
            return false;
        }
        for (double q : {0.5, 1.0, 1.5}) {
            FracActionResult fr = frac_action(prof, q, cfg);
            if (fr.value < -(fr.err + 1e-8 * std::abs(fr.value))) {
                std::ostringstream os;
                os << "frac_action(" << q << ") = " << fr.value << " < 0 for "
                   << c.body.spec_hash();
                detail = os.str();
                return false;
            }
        }
    }
    detail = "6 bodies x 100 grid points, a1 signs and q in (0,2) actions all consistent";
    return true;
}

bool criterion6(std::string& detail) {
    auto cfg = cfg_quad();
    ParsevalResult ball = parseval_residual(Body::ball(3), Body::ball(3), 2.0, cfg, 4);
    const double expect = 64.0 * std::pow(kPi, 9);
    const bool ball_ok = rel_ok(ball.lhs, expect, 1e-6) && rel_ok(ball.rhs, expect, 1e-6) &&
                         ball.residual <= 1e-6;

    auto mc = cfg_mc();
    ParsevalResult mixed =
        parseval_residual(Body::counterexample(3, -0.5, 1e4), Body::ball(3), 2.0, mc, 4, 9);
    const bool mixed_ok = mixed.residual <= std::max(1e-4, 3.0 * mixed.sigma);
    std::ostringstream os;
    os << "ball lhs=" << ball.lhs << " residual=" << ball.residual
       << "; mixed residual=" << mixed.residual << " (3sigma=" << 3.0 * mixed.sigma << ")";
    detail = os.str();
    return ball_ok && mixed_ok;
}

bool criterion7(std::string& detail) {
    auto cfg = cfg_quad();
    std::ostringstream os;
    bool ok = true;
    for (const auto& [n, alpha] : std::vector<std::pair<int, double>>{{3, -0.5}, {4, 1.5}}) {
        SweepSummary sweep = lemma4_sweep(n, alpha, geometric_grid(1.0, 1e8, 1), cfg, 4);
        if (!sweep.has_onset) {
            os << " no onset for n=" << n;
            ok = false;
            continue;
        }
        // every certificate from the onset on must be strictly negative
        bool past = false;
        for (const CertificateResult& r : sweep.results) {
            if (r.N >= sweep.onset_N) past = true;
            if (past && r.verdict != CertificateVerdict::negative) ok = false;
        }
        // refinement stability at the top of the grid
        CertificateResult coarse = sweep.results.back();
        CertificateResult fine =
            lemma4_certificate({n, alpha, coarse.N}, cfg.tightened(0.1));
        if (std::abs(fine.integral_value - coarse.integral_value) >
            2.0 * (coarse.err + fine.err)) {
            os << " refinement shift too large for n=" << n;
            ok = false;
        }
        os << " n=" << n << ": onset N*=" << sweep.onset_N
           << " top value=" << coarse.integral_value << "+/-" << coarse.err << ";";
    }
    detail = os.str();
    return ok;
}

bool criterion8(std::string& detail) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-11;
    std::ostringstream os;
    bool ok = true;
    for (const auto& [n, alpha] : std::vector<std::pair<int, double>>{{3, -0.5}, {4, 1.5}}) {
        const double q = 2.0 * n - alpha - 4.0;
        ScalingStudy study = scaling_study(n, alpha, geometric_grid(1e4, 1e8, 2), cfg, 4);
        for (const ScalingFit& fit : study.fits) {
            if (fit.name == "a_N" || fit.name == "b_N") {
                if (!(fit.exponent > -0.27 && fit.exponent < -0.23)) ok = false;
                os << " " << fit.name << "(n=" << n << ")=" << fit.exponent;
            }
            if (fit.name == "abs_integral_top_decade") {
                if (std::abs(fit.exponent - q / 4.0) > 0.05) ok = false;
                os << " topdecade(n=" << n << ")=" << fit.exponent << " vs " << q / 4.0;
            }
        }
    }
    detail = os.str();
    return ok;
}

bool criterion9(std::string& detail) {
    auto cfg = cfg_quad();
    std::ostringstream os;
    bool ok = true;
    struct Case {
        int n;
        double alpha, N;
    };
    for (const Case& c : {Case{3, -0.5, 1e4}, Case{3, 0.0, 1e4}, Case{4, 1.5, 100.0}}) {
        OriginData d = origin_closed_forms(c.n, c.alpha);
        Body body = counterexample_profile_body(c.n, c.alpha, c.N);
        RadialSectionProfile prof = RadialSectionProfile::pole(body, c.alpha, cfg);
        const double a0 = prof.taylor(0).a[0];
        TaylorCoeffs numeric = prof.taylor(1, true);
        if (std::abs(a0 - d.A0) > 1e-12 * std::abs(d.A0)) ok = false;
        if (std::abs(numeric.a[1] - d.a1) > 1e-4 * std::abs(d.a1)) ok = false;
        os << " (n=" << c.n << ",alpha=" << c.alpha << "): display/a1=" << d.display_over_a1
           << ";";
    }
    detail = os.str();
    return ok;
}

bool criterion10(std::string& detail) {
    auto cfg = cfg_quad();
    Body L = Body::ball(3);
    Body K = Body::dilate(0.9, L);
    bool ok = true;
    std::ostringstream os;
    for (double alpha : {0.0, 2.0}) {
        ComparisonReport rep = theorem_pos_check(K, L, alpha, 5, cfg, 4);
        if (!rep.hypothesis_holds || !rep.parseval_step || !rep.volume_step) ok = false;
        if (!rel_ok(rep.vol_K / rep.vol_L, std::pow(0.9, 6), 1e-6)) ok = false;
        if (!rep.hoelder_holds) ok = false;
        os << " alpha=" << alpha << " margin=" << rep.hypothesis_margin
           << " volratio=" << rep.vol_K / rep.vol_L << ";";
    }
    // Hoelder on every tested pair, including the certificate body
    const int n = 3;
    std::vector<std::pair<Body, Body>> pairs;
    pairs.emplace_back(K, L);
    pairs.emplace_back(Body::counterexample(3, -0.5, 1e4), L);
    pairs.emplace_back(Body::counterexample(3, -0.5, 100.0), Body::dilate(0.8, L));
    for (const auto& [A, B] : pairs) {
        const double IA = mixed_spherical_integral(A, A, 2.0 * n, 0.0, cfg).value;
        const double IB = mixed_spherical_integral(B, B, 2.0 * n, 0.0, cfg).value;
        const double IAB = mixed_spherical_integral(A, B, 2.0, 2.0 * n - 2.0, cfg).value;
        if (IAB > std::pow(IA, 1.0 / n) * std::pow(IB, (n - 1.0) / n) * (1.0 + 1e-8))
            ok = false;
    }
    detail = os.str() + " Hoelder holds on 3 pairs";
    return ok;
}

bool criterion11(std::string& detail) {
    if (g_cli.empty()) {
        detail = "cbplab binary path not provided";
        return false;
    }
    const std::string cex = "'{\"family\":\"counterexample\",\"n\":3,\"alpha\":-0.5,\"N\":100.0}'";
    const std::string mc_args = "afunction --body " + cex +
                                " --p 0.5 --psi 0.7 --mc --t 0.05,0.2 --mc-samples 4000";
    int rc = 0;
    const std::string a1 = cli_capture(mc_args + " --threads 1", &rc);
    if (rc != 0) {
        detail = "cli run failed";
        return false;
    }
    const std::string a2 = cli_capture(mc_args + " --threads 1", &rc);
    const std::string a4 = cli_capture(mc_args + " --threads 4", &rc);
    const std::string l1 =
        cli_capture("lemma4 --n 3 --alpha -0.5 --N-grid 10:1000:1 --format csv --threads 1", &rc);
    const std::string l4 =
        cli_capture("lemma4 --n 3 --alpha -0.5 --N-grid 10:1000:1 --format csv --threads 4", &rc);
    const bool ok = !a1.empty() && a1 == a2 && a1 == a4 && !l1.empty() && l1 == l4;
    detail = ok ? "byte-identical across reruns and thread counts (MC and sweep paths)"
                : "outputs differ";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];

    std::vector<Criterion> criteria = {
        {1, "ball closed forms: volume and both section routes", criterion1},
        {2, "fractional-action oracle and window continuity", criterion2},
        {3, "two-route Fourier agreement on a 5x5 (p,q) grid", criterion3},
        {4, "positive-definiteness scans stay nonnegative", criterion4},
        {5, "origin maximality, a1 signs, q in (0,2) actions", criterion5},
        {6, "spherical Parseval: ball pair exactly, mixed pair within tolerance", criterion6},
        {7, "sign certificates turn and stay negative; refinement-stable", criterion7},
        {8, "N-scaling exponents of roots and certificate", criterion8},
        {9, "origin closed forms vs numerics, with the factor diagnostic", criterion9},
        {10, "affirmative chain on dilation pairs; Hoelder on all pairs", criterion10},
        {11, "byte determinism across reruns and thread counts", criterion11},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", c.id,
                    c.title.c_str(), detail.empty() ? "" : " | ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
