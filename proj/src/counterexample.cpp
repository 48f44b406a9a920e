#include "cbplab/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cbplab {

double alpha_root(double N) {
    if (!(N > 0.0)) throw validation_error("alpha_root: N must be > 0");
    return std::sqrt((std::sqrt(1.0 + 4.0 * N) - 1.0) / (2.0 * N));
}

double beta_root(double N, double q) {
    if (!(N > 0.0)) throw validation_error("beta_root: N must be > 0");
    const double aN = alpha_root(N);
    auto g = [&](double t) {
        return 1.0 - t * t - N * std::pow(t, 4) - std::pow(t, q + 1.0);
    };
    // g(0) = 1 > 0 and g(a_N) = -a_N^{q+1} < 0
    return find_root(g, 0.0, aN, 1e-15 * std::max(1.0, aN));
}

OriginData origin_closed_forms(int n, double alpha) {
    if (n < 2) throw domain_error("origin_closed_forms: n must be >= 2");
    const double c1 = 2.0 * n - alpha - 2.0;
    const double c2 = 2.0 * n - alpha - 4.0;
    if (!(c1 > 0.0) || !(c2 > 0.0))
        throw domain_error("origin_closed_forms: needs alpha < 2n-4");
    const double S = sphere_surface(2 * n - 2);
    OriginData out;
    out.A0 = S / c1;
    out.a1 = -S * (1.0 / c1 + alpha / (2.0 * c2));
    out.a1_display = -S * (1.0 / c1 + alpha / c2);
    out.display_over_a1 = out.a1_display / out.a1;
    return out;
}

Body counterexample_profile_body(int n, double alpha, double N) {
    if (n < 2) throw validation_error("counterexample_profile_body: n must be >= 2");
    if (!(alpha < 2.0 * n - 4.0))
        throw validation_error("counterexample_profile_body: needs alpha < 2n-4");
    if (!(N > 0.0)) throw validation_error("counterexample_profile_body: N must be > 0");
    return Body::biaxial_profile(n, {1.0, -1.0, -N}, 1.0 / (2.0 * n - alpha - 2.0),
                                 alpha_root(N));
}

std::string to_string(CertificateVerdict v) {
    switch (v) {
        case CertificateVerdict::negative: return "negative";
        case CertificateVerdict::nonnegative: return "nonnegative";
        case CertificateVerdict::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

CertificateResult lemma4_certificate(const CounterexampleParams& params,
                                     const QuadratureConfig& cfg, CoeffSource a1_source) {
    params.validate();
    cfg.validate();
    const int n = params.n;
    const double alpha = params.alpha;
    const double q = params.q();

    Body body = Body::counterexample(n, alpha, params.N);
    RadialSectionProfile prof = RadialSectionProfile::pole(body, alpha, cfg);

    CertificateResult out;
    out.n = n;
    out.alpha = alpha;
    out.N = params.N;
    out.q = q;
    out.a_N = alpha_root(params.N);
    out.b_N = beta_root(params.N, q);
    OriginData origin = origin_closed_forms(n, alpha);
    out.A0 = origin.A0;
    TaylorCoeffs coeffs = prof.taylor(1, a1_source == CoeffSource::numeric_only);
    out.a1 = coeffs.a[1];
    out.a1_source = a1_source == CoeffSource::numeric_only ? "numeric" : "closed_form";

    // frac_action carries the 2 pi / Gamma(-q/2) prefactor; the certificate
    // integral is the raw bracket, so divide it back out (positive for
    // q in (2,3): Gamma(-q/2) > 0 there)
    FracActionResult fr = frac_action(prof, q, cfg, a1_source);
    const double PF = 2.0 * M_PI / gamma_fn(-0.5 * q);
    out.integral_value = fr.value / PF;
    out.err = fr.err / std::abs(PF);

    const double pre = std::pow(2.0, q + 1.0) * gamma_fn(0.5 * (q + 2.0)) * fr.query.gamma();
    out.ft_pole_value = pre * fr.value;
    out.ft_err = pre * fr.err;

    if (out.integral_value + out.err < 0.0)
        out.verdict = CertificateVerdict::negative;
    else if (out.integral_value - out.err > 0.0)
        out.verdict = CertificateVerdict::nonnegative;
    else
        out.verdict = CertificateVerdict::indeterminate;
    return out;
}

SweepSummary lemma4_sweep(int n, double alpha, const std::vector<double>& N_grid,
                          const QuadratureConfig& cfg, int threads) {
    if (N_grid.empty()) throw validation_error("lemma4_sweep: empty N grid");
    SweepSummary out;
    out.results.resize(N_grid.size());
    parallel_for(N_grid.size(), threads, [&](std::size_t i) {
        out.results[i] = lemma4_certificate({n, alpha, N_grid[i]}, cfg);
    });

    out.onset_N = std::numeric_limits<double>::quiet_NaN();
    out.last_nonnegative_N = std::numeric_limits<double>::quiet_NaN();
    int last_nonneg = -1;
    for (std::size_t i = 0; i < out.results.size(); ++i)
        if (out.results[i].verdict != CertificateVerdict::negative)
            last_nonneg = static_cast<int>(i);
    if (last_nonneg >= 0) out.last_nonnegative_N = N_grid[last_nonneg];
    const std::size_t first_all_neg = static_cast<std::size_t>(last_nonneg + 1);
    if (first_all_neg < out.results.size()) {
        out.onset_N = N_grid[first_all_neg];
        out.has_onset = true;
    }
    out.all_negative = last_nonneg < 0;
    return out;
}

CertificateSplit certificate_split(const CounterexampleParams& params,
                                   const QuadratureConfig& cfg) {
    params.validate();
    const double q = params.q();
    Body body = Body::counterexample(params.n, params.alpha, params.N);
    RadialSectionProfile prof = RadialSectionProfile::pole(body, params.alpha, cfg);
    const double aN = prof.t_max();
    const double bN = beta_root(params.N, q);
    TaylorCoeffs coeffs = prof.taylor(1);

    auto integrand = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double y = prof.remainder(t, 1);
        if (y == 0.0) return 0.0;
        if (t < 1e-30)
            return std::copysign(
                std::exp((-q - 1.0) * std::log(t) + std::log(std::abs(y))), y);
        return std::pow(t, -q - 1.0) * y;
    };
    const double lead = std::min(4.0, 2.0 * params.n - 2.0 - params.alpha);
    SingularityHint hint;
    if (lead - q - 1.0 < 3.0) hint.left = lead - q - 1.0;

    CertificateSplit split;
    split.head = integrate_adaptive(integrand, 0.0, bN, cfg, hint).value;
    split.mid = integrate_adaptive(integrand, bN, aN, cfg).value;
    split.tail = -coeffs.a[0] * std::pow(aN, -q) / q -
                 coeffs.a[1] * std::pow(aN, 2.0 - q) / (q - 2.0);
    return split;
}

std::vector<double> geometric_grid(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0) || !(hi > lo)) throw validation_error("geometric_grid: need 0 < lo < hi");
    if (points_per_decade < 1) throw validation_error("geometric_grid: need >= 1 point/decade");
    std::vector<double> grid;
    const double step = std::pow(10.0, 1.0 / points_per_decade);
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= step) grid.push_back(v);
    if (grid.back() < hi * (1.0 - 1e-12)) grid.push_back(hi);
    return grid;
}

namespace {

ScalingFit fit_loglog(std::string name, const std::vector<double>& N,
                      const std::vector<double>& v, double reference) {
    ScalingFit fit;
    fit.name = std::move(name);
    fit.N = N;
    fit.value = v;
    fit.reference = reference;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < N.size(); ++i) {
        if (v[i] == 0.0) continue;
        x.push_back(std::log(N[i]));
        y.push_back(std::log(std::abs(v[i])));
    }
    const std::size_t m = x.size();
    if (m < 2) {
        fit.exponent = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = m * sxx - sx * sx;
    fit.exponent = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / m;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = y[i] - (intercept + fit.exponent * x[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    return fit;
}

}  // namespace

ScalingStudy scaling_study(int n, double alpha, const std::vector<double>& N_grid,
                           const QuadratureConfig& cfg, int threads) {
    if (N_grid.size() < 4)
        throw validation_error("scaling_study: need a geometric grid with >= 4 points");
    for (std::size_t i = 1; i < N_grid.size(); ++i)
        if (!(N_grid[i] > N_grid[i - 1]))
            throw validation_error("scaling_study: N grid must be increasing");

    const std::size_t m = N_grid.size();
    std::vector<double> aN(m), bN(m), integral(m), head(m), mid(m), tail(m);
    const double q = 2.0 * n - alpha - 4.0;
    parallel_for(m, threads, [&](std::size_t i) {
        CounterexampleParams params{n, alpha, N_grid[i]};
        aN[i] = alpha_root(N_grid[i]);
        bN[i] = beta_root(N_grid[i], q);
        CertificateSplit split = certificate_split(params, cfg);
        head[i] = split.head;
        mid[i] = split.mid;
        tail[i] = split.tail;
        integral[i] = split.head + split.mid + split.tail;
    });

    ScalingStudy study;
    study.fits.push_back(fit_loglog("a_N", N_grid, aN, -0.25));
    study.fits.push_back(fit_loglog("b_N", N_grid, bN, -0.25));
    study.fits.push_back(fit_loglog("abs_integral", N_grid, integral, q / 4.0));
    {
        // top decade of the grid, where the dominant N^{q/4} term has taken over
        std::vector<double> Nt, vt;
        for (std::size_t i = 0; i < m; ++i)
            if (N_grid[i] >= N_grid.back() / 10.0 * (1.0 - 1e-12)) {
                Nt.push_back(N_grid[i]);
                vt.push_back(integral[i]);
            }
        study.fits.push_back(fit_loglog("abs_integral_top_decade", Nt, vt, q / 4.0));
    }
    study.fits.push_back(fit_loglog("split_head", N_grid, head, (q - 2.0) / 4.0));
    study.fits.push_back(fit_loglog("split_mid", N_grid, mid, -0.25));
    study.fits.push_back(fit_loglog("split_tail", N_grid, tail, q / 4.0));

    // proof constants, evaluated verbatim with alpha in place of the
    // published display's stray 'p'; signs are reported, not assumed
    const double c1 = 2.0 * n - alpha - 2.0;
    const double c2 = 2.0 * n - alpha - 4.0;
    const double c3 = 2.0 * n - alpha - 6.0;
    study.C = 1.0 / c1 - alpha / (2.0 * c2) + alpha * (alpha + 2.0) / (4.0 * c3);
    study.E = alpha / (2.0 * c1);
    study.F = alpha * (alpha + 2.0) / c1;
    study.D_at_Nmax = N_grid.back() / c1 - alpha * (alpha + 2.0) / (4.0 * c3);
    study.C_positive = study.C > 0.0;
    study.D_positive = study.D_at_Nmax > 0.0;
    study.E_positive = study.E > 0.0;
    study.F_positive = study.F > 0.0;
    return study;
}

}  // namespace cbplab
