// cbplab: command line surface over the section-function laboratory.
//
// Exit codes: 0 success, 2 domain/validation errors, 3 precision or
// statistically indeterminate outcomes, 64 usage errors.
//
// Environment defaults: CBPLAB_REL_TOL overrides the default relative
// tolerance, CBPLAB_SEED the default RNG seed; explicit flags win.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cbplab/counterexample.hpp"
#include "cbplab/report.hpp"
#include "cbplab/theorems.hpp"

namespace {

using namespace cbplab;

struct Common {
    std::string body_arg;
    std::string body2_arg;
    QuadratureConfig cfg;
    int threads = 1;
    std::string format = "json";
    std::string output;
};

void add_numeric_options(CLI::App* sub, Common& c) {
    sub->add_option("--rel-tol", c.cfg.rel_tol, "relative quadrature tolerance");
    sub->add_option("--abs-tol", c.cfg.abs_tol, "absolute quadrature tolerance");
    sub->add_option("--max-subdiv", c.cfg.max_subdivisions, "max adaptive subdivisions");
    sub->add_option("--mc-samples", c.cfg.mc_samples, "Monte Carlo samples per point");
    sub->add_option("--seed", c.cfg.rng_seed, "RNG seed");
    sub->add_option("--threads", c.threads, "worker pool size");
    sub->add_option("--format", c.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", c.output, "output path (default stdout)");
}

Body load_body(const std::string& arg) {
    if (arg.empty()) throw validation_error("no body spec given (--body)");
    if (arg.front() == '{') return make_body_from_string(arg);
    std::ifstream in(arg);
    if (!in) throw validation_error("cannot open body spec file: " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return make_body_from_string(ss.str());
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

// direction resolution: explicit --xi wins, then --psi along the canonical
// geodesic, else the pole for biaxial bodies and the first bulk axis
// otherwise
std::vector<double> resolve_direction(const Body& body, const std::string& xi_arg,
                                      double psi, bool psi_given) {
    if (!xi_arg.empty()) {
        std::vector<double> xi = parse_csv_doubles(xi_arg);
        double len = 0.0;
        for (double v : xi) len += v * v;
        len = std::sqrt(len);
        if (len <= 0.0) throw validation_error("--xi: zero direction");
        for (double& v : xi) v /= len;
        return xi;
    }
    if (psi_given) return canonical_direction(body.n(), psi);
    return canonical_direction(body.n(), body.biaxial() ? M_PI / 2.0 : 0.0);
}

// The worker count is deliberately not echoed: results are independent of
// scheduling, so (tolerances, samples, seed) reproduce every record exactly
// at any thread count.
void add_run_fields(ReportRecord& rec, const Common& c) {
    rec.add("rel_tol", c.cfg.rel_tol)
        .add("abs_tol", c.cfg.abs_tol)
        .add("mc_samples", static_cast<long long>(c.cfg.mc_samples))
        .add("seed", c.cfg.rng_seed);
}

void emit(const Common& c, const std::vector<ReportRecord>& records) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!c.output.empty()) {
        file.open(c.output);
        if (!file) throw validation_error("cannot open output path: " + c.output);
        os = &file;
    }
    if (c.format == "csv")
        write_csv(*os, records);
    else
        write_json_lines(*os, records);
}

std::string join_warnings(const std::vector<std::string>& warnings) {
    std::string out;
    for (const auto& w : warnings) {
        if (!out.empty()) out += "; ";
        out += w;
    }
    return out;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"numerical laboratory for complex Busemann-Petty section comparisons"};
    app.require_subcommand(1);

    // environment defaults; explicit flags override
    Common base;
    if (const char* env = std::getenv("CBPLAB_REL_TOL")) base.cfg.rel_tol = std::atof(env);
    if (const char* env = std::getenv("CBPLAB_SEED"))
        base.cfg.rng_seed = std::strtoull(env, nullptr, 10);

    int exit_code = 0;

    // --- volume ---------------------------------------------------------
    Common c_vol = base;
    auto* vol = app.add_subcommand("volume", "2n-dimensional volume by the polar formula");
    vol->add_option("--body", c_vol.body_arg, "body spec path or inline JSON")->required();
    add_numeric_options(vol, c_vol);
    vol->callback([&]() {
        Body body = load_body(c_vol.body_arg);
        VolumeResult r = volume(body, c_vol.cfg);
        ReportRecord rec;
        rec.add("op", "volume").add("body", body.spec_hash());
        add_run_fields(rec, c_vol);
        rec.add("value", r.value).add("sigma", r.sigma).add("route", r.route);
        rec.add("warnings", join_warnings(r.warnings));
        emit(c_vol, {rec});
        if (!r.warnings.empty()) exit_code = 3;
    });

    // --- section ----------------------------------------------------------
    Common c_sec = base;
    std::string sec_xi, sec_route = "direct";
    double sec_psi = 0.0;
    auto* sec = app.add_subcommand("section", "central section function S_C(xi)");
    sec->add_option("--body", c_sec.body_arg)->required();
    sec->add_option("--xi", sec_xi, "direction, comma separated");
    auto* sec_psi_opt = sec->add_option("--psi", sec_psi, "angle on the canonical geodesic");
    sec->add_option("--route", sec_route, "direct, ft or both")
        ->check(CLI::IsMember({"direct", "ft", "both"}));
    add_numeric_options(sec, c_sec);
    sec->callback([&]() {
        Body body = load_body(c_sec.body_arg);
        std::vector<double> xi =
            resolve_direction(body, sec_xi, sec_psi, sec_psi_opt->count() > 0);
        std::vector<ReportRecord> records;
        auto make_rec = [&](const std::string& route, double value, double sigma) {
            ReportRecord rec;
            rec.add("op", "section").add("body", body.spec_hash());
            add_run_fields(rec, c_sec);
            rec.add("route", route).add("value", value).add("sigma", sigma);
            records.push_back(rec);
        };
        if (sec_route == "direct" || sec_route == "both") {
            SectionResult r = section_volume(body, xi, c_sec.cfg, c_sec.threads);
            make_rec(r.route, r.value, r.sigma);
        }
        if (sec_route == "ft" || sec_route == "both") {
            make_rec("fourier", section_volume_ft(body, xi, c_sec.cfg, c_sec.threads), 0.0);
        }
        emit(c_sec, records);
    });

    // --- afunction ----------------------------------------------------------
    Common c_af = base;
    std::string af_xi, af_t = "0", af_profile_out;
    double af_psi = 0.0, af_p = 0.0;
    bool af_mc = false;
    auto* af = app.add_subcommand("afunction", "weighted parallel section function A(t)");
    af->add_option("--body", c_af.body_arg)->required();
    af->add_option("--p", af_p, "weight exponent (p < 2n-2)");
    af->add_option("--t", af_t, "comma separated t values");
    af->add_option("--xi", af_xi);
    auto* af_psi_opt = af->add_option("--psi", af_psi);
    af->add_flag("--mc", af_mc, "force the Monte Carlo backend");
    af->add_option("--profile-out", af_profile_out, "two-column profile dump path");
    add_numeric_options(af, c_af);
    af->callback([&]() {
        Body body = load_body(c_af.body_arg);
        std::vector<double> xi =
            resolve_direction(body, af_xi, af_psi, af_psi_opt->count() > 0);
        HyperplaneFrame frame = hyperplane_frame(xi);
        RadialSectionProfile prof =
            af_mc ? RadialSectionProfile::monte_carlo(body, frame, af_p, c_af.cfg,
                                                      c_af.threads)
                  : RadialSectionProfile::make(body, frame, af_p, c_af.cfg, c_af.threads);
        std::vector<ReportRecord> records;
        const std::string backend = prof.backend_name();
        for (double t : parse_csv_doubles(af_t)) {
            ReportRecord rec;
            rec.add("op", "afunction").add("body", body.spec_hash());
            add_run_fields(rec, c_af);
            rec.add("p", af_p).add("t", t).add("value", prof.value(t));
            rec.add("sigma", prof.sigma(t)).add("backend", backend);
            records.push_back(rec);
        }
        emit(c_af, records);
        if (!af_profile_out.empty()) {
            std::ofstream pf(af_profile_out);
            if (!pf) throw validation_error("cannot open --profile-out path");
            dump_profile(pf, prof, body.spec_hash(), c_af.cfg.rng_seed);
        }
    });

    // --- frac-action ---------------------------------------------------------
    Common c_fa = base;
    std::string fa_xi;
    double fa_psi = 0.0, fa_p = 0.0, fa_q = 0.0;
    auto* fa = app.add_subcommand("frac-action",
                                  "regularized action of |u|^{-q-2}/Gamma(-q/2) on A");
    fa->add_option("--body", c_fa.body_arg)->required();
    fa->add_option("--p", fa_p)->required();
    fa->add_option("--q", fa_q)->required();
    fa->add_option("--xi", fa_xi);
    auto* fa_psi_opt = fa->add_option("--psi", fa_psi);
    add_numeric_options(fa, c_fa);
    fa->callback([&]() {
        Body body = load_body(c_fa.body_arg);
        std::vector<double> xi =
            resolve_direction(body, fa_xi, fa_psi, fa_psi_opt->count() > 0);
        HyperplaneFrame frame = hyperplane_frame(xi);
        RadialSectionProfile prof =
            RadialSectionProfile::make(body, frame, fa_p, c_fa.cfg, c_fa.threads);
        FracActionResult r = frac_action(prof, fa_q, c_fa.cfg);
        ReportRecord rec;
        rec.add("op", "frac-action").add("body", body.spec_hash());
        add_run_fields(rec, c_fa);
        rec.add("p", fa_p).add("q", fa_q).add("window", r.window_tag);
        rec.add("value", r.value).add("err", r.err);
        emit(c_fa, {rec});
    });

    // --- ft-norm ----------------------------------------------------------
    Common c_ft = base;
    std::string ft_xi;
    double ft_psi = 0.0, ft_p = 0.0, ft_q = 0.0;
    auto* ft = app.add_subcommand(
        "ft-norm", "Fourier value of ||x||^{-2n+q+p+2} |x|^{-p} at a direction");
    ft->add_option("--body", c_ft.body_arg)->required();
    ft->add_option("--p", ft_p)->required();
    ft->add_option("--q", ft_q)->required();
    ft->add_option("--xi", ft_xi);
    auto* ft_psi_opt = ft->add_option("--psi", ft_psi);
    add_numeric_options(ft, c_ft);
    ft->callback([&]() {
        Body body = load_body(c_ft.body_arg);
        std::vector<double> xi =
            resolve_direction(body, ft_xi, ft_psi, ft_psi_opt->count() > 0);
        FtValue v = ft_weighted_norm(body, xi, ft_p, ft_q, c_ft.cfg, c_ft.threads);
        ReportRecord rec;
        rec.add("op", "ft-norm").add("body", body.spec_hash());
        add_run_fields(rec, c_ft);
        rec.add("p", ft_p).add("q", ft_q);
        rec.add("value", v.value).add("err", v.error).add("route", v.route);
        emit(c_ft, {rec});
    });

    // --- frac-laplace ----------------------------------------------------
    Common c_fl = base;
    std::string fl_xi;
    double fl_psi = 0.0, fl_alpha = 0.0;
    auto* fl = app.add_subcommand("frac-laplace",
                                  "fractional Laplacian of the section function");
    fl->add_option("--body", c_fl.body_arg)->required();
    fl->add_option("--alpha", fl_alpha)->required();
    fl->add_option("--xi", fl_xi);
    auto* fl_psi_opt = fl->add_option("--psi", fl_psi);
    add_numeric_options(fl, c_fl);
    fl->callback([&]() {
        Body body = load_body(c_fl.body_arg);
        std::vector<double> xi =
            resolve_direction(body, fl_xi, fl_psi, fl_psi_opt->count() > 0);
        const double v = frac_laplace_section(body, xi, fl_alpha, c_fl.cfg, c_fl.threads);
        ReportRecord rec;
        rec.add("op", "frac-laplace").add("body", body.spec_hash());
        add_run_fields(rec, c_fl);
        rec.add("alpha", fl_alpha).add("value", v);
        emit(c_fl, {rec});
    });

    // --- posdef-scan ---------------------------------------------------------
    Common c_ps = base;
    double ps_p = 0.0, ps_q = 0.0;
    int ps_points = 9;
    auto* ps = app.add_subcommand("posdef-scan",
                                  "positive-definiteness certificate over psi directions");
    ps->add_option("--body", c_ps.body_arg)->required();
    ps->add_option("--p", ps_p)->required();
    ps->add_option("--q", ps_q)->required();
    ps->add_option("--psi-count", ps_points);
    add_numeric_options(ps, c_ps);
    ps->callback([&]() {
        Body body = load_body(c_ps.body_arg);
        PosdefScanResult scan =
            posdef_scan(body, ps_p, ps_q, uniform_psi_grid(ps_points), c_ps.cfg, c_ps.threads);
        std::vector<ReportRecord> records;
        for (std::size_t i = 0; i < scan.psi.size(); ++i) {
            ReportRecord rec;
            rec.add("op", "posdef-scan").add("body", body.spec_hash());
            add_run_fields(rec, c_ps);
            rec.add("p", ps_p).add("q", ps_q);
            rec.add("psi", scan.psi[i]).add("value", scan.value[i]);
            rec.add("route", scan.route[i]).add("err", scan.err[i]);
            records.push_back(rec);
        }
        if (c_ps.format == "json") {
            ReportRecord summary;
            summary.add("op", "posdef-scan-summary").add("body", body.spec_hash());
            add_run_fields(summary, c_ps);
            summary.add("p", ps_p).add("q", ps_q);
            summary.add("min_value", scan.min_value).add("argmin_psi", scan.argmin_psi);
            summary.add("scale", scan.scale);
            records.push_back(summary);
        }
        emit(c_ps, records);
    });

    // --- brunn -------------------------------------------------------------
    Common c_br = base;
    std::string br_xi;
    double br_psi = 0.0, br_p = 0.0, br_q = 1.0;
    int br_points = 100;
    auto* br = app.add_subcommand("brunn", "origin-maximality and sign report for A");
    br->add_option("--body", c_br.body_arg)->required();
    br->add_option("--p", br_p);
    br->add_option("--q", br_q, "action exponent, meaningful in (0,2)");
    br->add_option("--samples", br_points, "profile grid points");
    br->add_option("--xi", br_xi);
    auto* br_psi_opt = br->add_option("--psi", br_psi);
    add_numeric_options(br, c_br);
    br->callback([&]() {
        Body body = load_body(c_br.body_arg);
        std::vector<double> xi =
            resolve_direction(body, br_xi, br_psi, br_psi_opt->count() > 0);
        BrunnReport rep =
            brunn_report(body, xi, br_p, br_q, br_points, c_br.cfg, c_br.threads);
        ReportRecord rec;
        rec.add("op", "brunn").add("body", body.spec_hash());
        add_run_fields(rec, c_br);
        rec.add("p", br_p).add("q", br_q);
        rec.add("max_excess", rep.max_excess).add("excess_slack", rep.excess_slack);
        rec.add("a1", rep.a1).add("a1_err", rep.a1_err);
        rec.add("frac_value", rep.frac_value).add("frac_err", rep.frac_err);
        rec.add("max_at_origin", rep.max_at_origin);
        rec.add("a1_nonpositive", rep.a1_nonpositive);
        rec.add("frac_nonnegative", rep.frac_nonnegative);
        emit(c_br, {rec});
    });

    // --- parseval -----------------------------------------------------------
    Common c_pv = base;
    double pv_p = 2.0;
    int pv_points = 17;
    auto* pv = app.add_subcommand("parseval", "spherical Parseval residual for a body pair");
    pv->add_option("--body", c_pv.body_arg)->required();
    pv->add_option("--body2", c_pv.body2_arg)->required();
    pv->add_option("--p", pv_p)->required();
    pv->add_option("--psi-points", pv_points);
    add_numeric_options(pv, c_pv);
    pv->callback([&]() {
        Body K = load_body(c_pv.body_arg);
        Body L = load_body(c_pv.body2_arg);
        ParsevalResult r = parseval_residual(K, L, pv_p, c_pv.cfg, c_pv.threads, pv_points);
        ReportRecord rec;
        rec.add("op", "parseval").add("body", K.spec_hash()).add("body2", L.spec_hash());
        add_run_fields(rec, c_pv);
        rec.add("p", pv_p).add("lhs", r.lhs).add("rhs", r.rhs);
        rec.add("residual", r.residual).add("sigma", r.sigma);
        emit(c_pv, {rec});
    });

    // --- lemma4 ---------------------------------------------------------------
    Common c_l4 = base;
    int l4_n = 3;
    double l4_alpha = -0.5, l4_N = 1e4;
    std::string l4_grid, l4_source = "closed_form";
    auto* l4 = app.add_subcommand("lemma4", "sign certificate for the explicit body");
    l4->add_option("--n", l4_n)->required();
    l4->add_option("--alpha", l4_alpha)->required();
    l4->add_option("--N", l4_N);
    l4->add_option("--N-grid", l4_grid, "geometric sweep as lo:hi:points_per_decade");
    l4->add_option("--a1-source", l4_source)->check(CLI::IsMember({"closed_form", "numeric"}));
    add_numeric_options(l4, c_l4);
    l4->callback([&]() {
        const CoeffSource source = l4_source == "numeric" ? CoeffSource::numeric_only
                                                          : CoeffSource::preferred;
        std::vector<double> grid;
        if (!l4_grid.empty()) {
            double lo = 0.0, hi = 0.0;
            int ppd = 0;
            if (std::sscanf(l4_grid.c_str(), "%lf:%lf:%d", &lo, &hi, &ppd) != 3)
                throw validation_error("--N-grid expects lo:hi:points_per_decade");
            grid = geometric_grid(lo, hi, ppd);
        } else {
            grid = {l4_N};
        }
        std::vector<CertificateResult> results(grid.size());
        parallel_for(grid.size(), c_l4.threads, [&](std::size_t i) {
            results[i] = lemma4_certificate({l4_n, l4_alpha, grid[i]}, c_l4.cfg, source);
        });
        std::vector<ReportRecord> records;
        bool indeterminate = false;
        for (const CertificateResult& r : results) {
            ReportRecord rec;
            rec.add("op", "lemma4");
            add_run_fields(rec, c_l4);
            rec.add("n", r.n).add("alpha", r.alpha).add("N", r.N).add("q", r.q);
            rec.add("a_N", r.a_N).add("b_N", r.b_N).add("A0", r.A0).add("a1", r.a1);
            rec.add("integral_value", r.integral_value).add("err", r.err);
            rec.add("ft_pole_value", r.ft_pole_value);
            rec.add("negative", to_string(r.verdict));
            records.push_back(rec);
            if (r.verdict == CertificateVerdict::indeterminate) indeterminate = true;
        }
        emit(c_l4, records);
        if (indeterminate) exit_code = 3;
    });

    // --- scaling ----------------------------------------------------------------
    Common c_sc = base;
    int sc_n = 3, sc_ppd = 2;
    double sc_alpha = -0.5, sc_lo = 1e4, sc_hi = 1e8;
    auto* sc = app.add_subcommand("scaling", "N-asymptotics of the certificate pieces");
    sc->add_option("--n", sc_n)->required();
    sc->add_option("--alpha", sc_alpha)->required();
    sc->add_option("--N-min", sc_lo);
    sc->add_option("--N-max", sc_hi);
    sc->add_option("--points-per-decade", sc_ppd);
    add_numeric_options(sc, c_sc);
    sc->callback([&]() {
        ScalingStudy study =
            scaling_study(sc_n, sc_alpha, geometric_grid(sc_lo, sc_hi, sc_ppd), c_sc.cfg,
                          c_sc.threads);
        std::vector<ReportRecord> records;
        for (const ScalingFit& fit : study.fits) {
            ReportRecord rec;
            rec.add("op", "scaling");
            add_run_fields(rec, c_sc);
            rec.add("n", sc_n).add("alpha", sc_alpha);
            rec.add("quantity", fit.name).add("exponent", fit.exponent);
            rec.add("reference", fit.reference).add("residual", fit.residual);
            rec.add("points", static_cast<long long>(fit.N.size()));
            records.push_back(rec);
        }
        if (c_sc.format == "json") {
            ReportRecord diag;
            diag.add("op", "scaling-diagnostics");
            add_run_fields(diag, c_sc);
            diag.add("n", sc_n).add("alpha", sc_alpha);
            diag.add("C", study.C).add("C_positive", study.C_positive);
            diag.add("D_at_Nmax", study.D_at_Nmax).add("D_positive", study.D_positive);
            diag.add("E", study.E).add("E_positive", study.E_positive);
            diag.add("F", study.F).add("F_positive", study.F_positive);
            records.push_back(diag);
        }
        emit(c_sc, records);
    });

    // --- mixed-integral --------------------------------------------------------
    Common c_mi = base;
    double mi_a = 2.0, mi_b = 4.0;
    auto* mi = app.add_subcommand("mixed-integral",
                                  "int ||x||_K^{-a} ||x||_L^{-b} over the sphere");
    mi->add_option("--body", c_mi.body_arg)->required();
    mi->add_option("--body2", c_mi.body2_arg)->required();
    mi->add_option("--a", mi_a)->required();
    mi->add_option("--b", mi_b)->required();
    add_numeric_options(mi, c_mi);
    mi->callback([&]() {
        Body K = load_body(c_mi.body_arg);
        Body L = load_body(c_mi.body2_arg);
        MixedIntegralResult r = mixed_spherical_integral(K, L, mi_a, mi_b, c_mi.cfg,
                                                         c_mi.threads);
        ReportRecord rec;
        rec.add("op", "mixed-integral").add("body", K.spec_hash()).add("body2", L.spec_hash());
        add_run_fields(rec, c_mi);
        rec.add("a", mi_a).add("b", mi_b);
        rec.add("value", r.value).add("sigma", r.sigma).add("route", r.route);
        emit(c_mi, {rec});
    });

    // --- theorem-pos ----------------------------------------------------------
    Common c_tp = base;
    double tp_alpha = 0.0;
    int tp_points = 9;
    bool tp_any = false;
    std::string tp_grid_out;
    auto* tp = app.add_subcommand("theorem-pos", "affirmative comparison chain for a pair");
    tp->add_option("--body", c_tp.body_arg)->required();
    tp->add_option("--body2", c_tp.body2_arg)->required();
    tp->add_option("--alpha", tp_alpha)->required();
    tp->add_option("--psi-count", tp_points);
    tp->add_flag("--allow-any-alpha", tp_any, "run outside [2n-6, 2n-2), informational");
    tp->add_option("--grid-out", tp_grid_out, "CSV of (psi, frac_K, frac_L, margin)");
    add_numeric_options(tp, c_tp);
    tp->callback([&]() {
        Body K = load_body(c_tp.body_arg);
        Body L = load_body(c_tp.body2_arg);
        ComparisonReport rep =
            theorem_pos_check(K, L, tp_alpha, tp_points, c_tp.cfg, c_tp.threads, tp_any);
        ReportRecord rec;
        rec.add("op", "theorem-pos").add("body", rep.hash_K).add("body2", rep.hash_L);
        add_run_fields(rec, c_tp);
        rec.add("alpha", rep.alpha).add("psi_points", tp_points);
        rec.add("hypothesis_margin", rep.hypothesis_margin).add("margin_err", rep.margin_err);
        rec.add("I_K", rep.I_K).add("I_KL", rep.I_KL).add("I_L", rep.I_L);
        rec.add("vol_K", rep.vol_K).add("vol_L", rep.vol_L);
        rec.add("hypothesis_holds", rep.hypothesis_holds);
        rec.add("parseval_step", rep.parseval_step);
        rec.add("volume_step", rep.volume_step);
        rec.add("hoelder_holds", rep.hoelder_holds);
        rec.add("window_override", rep.window_override);
        emit(c_tp, {rec});
        if (!tp_grid_out.empty()) {
            std::vector<ReportRecord> grid;
            for (std::size_t i = 0; i < rep.psi.size(); ++i) {
                ReportRecord row;
                row.add("psi", rep.psi[i]).add("frac_K", rep.frac_K[i]);
                row.add("frac_L", rep.frac_L[i]);
                row.add("margin", rep.frac_L[i] - rep.frac_K[i]);
                grid.push_back(row);
            }
            std::ofstream gos(tp_grid_out);
            if (!gos) throw validation_error("cannot open --grid-out path");
            write_csv(gos, grid);
        }
    });

    // --- theorem-neg ------------------------------------------------------------
    Common c_tn = base;
    int tn_n = 3;
    double tn_alpha = -0.5, tn_N = 1e4;
    auto* tn = app.add_subcommand("theorem-neg",
                                  "negative-part report backed by the sign certificate");
    tn->add_option("--n", tn_n)->required();
    tn->add_option("--alpha", tn_alpha)->required();
    tn->add_option("--N", tn_N)->required();
    add_numeric_options(tn, c_tn);
    tn->callback([&]() {
        NegativePartReport rep = theorem_neg_report({tn_n, tn_alpha, tn_N}, c_tn.cfg);
        ReportRecord rec;
        rec.add("op", "theorem-neg");
        add_run_fields(rec, c_tn);
        rec.add("n", tn_n).add("alpha", tn_alpha).add("N", tn_N);
        rec.add("q", rep.certificate.q);
        rec.add("integral_value", rep.certificate.integral_value);
        rec.add("err", rep.certificate.err);
        rec.add("ft_pole_value", rep.certificate.ft_pole_value);
        rec.add("certificate", to_string(rep.certificate.verdict));
        rec.add("verdict", rep.verdict);
        rec.add("witness_psi", rep.witness_psi);
        rec.add("construction_performed", rep.construction_performed);
        rec.add("implication", rep.implication);
        emit(c_tn, {rec});
        if (rep.verdict == "no_conclusion") exit_code = 3;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const cbplab::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cbplab::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cbplab::bracket_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cbplab::precision_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cbplab::accuracy_error& e) {
        std::cerr << "error: " << e.what() << " (partial value " << e.partial_value << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
