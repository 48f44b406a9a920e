#include "cbplab/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cbplab {

namespace {

const double kTwoPi = 2.0 * M_PI;

bool is_even_integer_q(double q, int* d_out) {
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-12) return false;
    const long ri = std::lround(r);
    if (ri < 0 || ri % 2 != 0) return false;
    *d_out = static_cast<int>(ri / 2);
    return true;
}

// conservative L1 bound for the statistical error of
// int_a^b t^{-q-1} sigma(t) dt over an MC profile
double mc_noise_integral(const RadialSectionProfile& prof, double q, double a, double b) {
    if (prof.noise_level() == 0.0 || b <= a) return 0.0;
    const int cells = 64;
    double acc = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double t0 = a + (b - a) * i / cells;
        const double t1 = a + (b - a) * (i + 1) / cells;
        const double s = prof.sigma(0.5 * (t0 + t1));
        double w;
        if (std::abs(q) < 1e-12) {
            w = std::log(t1 / std::max(t0, 1e-300));
        } else {
            w = (std::pow(t1, -q) - std::pow(t0, -q)) / (-q);
        }
        acc += s * std::abs(w);
    }
    return acc;
}

double factorial(int d) {
    double f = 1.0;
    for (int k = 2; k <= d; ++k) f *= k;
    return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// FracQuery
// ---------------------------------------------------------------------------

FracQuery FracQuery::make(int n, double p, double q) {
    FracQuery fq;
    fq.n = n;
    fq.p = p;
    fq.q = q;
    if (!(q > -2.0 && q < 2.0 * n - 2.0)) {
        std::ostringstream os;
        os << "FracQuery: q=" << q << " outside (-2, 2n-2) = (-2, " << 2 * n - 2 << ")";
        throw domain_error(os.str());
    }
    if (!(p < 2.0 * n - 2.0))
        throw domain_error("FracQuery: need p < 2n-2 (slice weight integrable)");
    if (!(fq.gamma() > 0.0)) {
        std::ostringstream os;
        os << "FracQuery: paired norm exponent 2n-q-p-2 = " << fq.gamma() << " must be > 0";
        throw domain_error(os.str());
    }
    int d = 0;
    if (q < 0.0) {
        fq.window = QWindow::negative;
        fq.d = -1;
    } else if (is_even_integer_q(q, &d)) {
        fq.window = QWindow::even_integer;
        fq.d = d;
    } else {
        fq.window = QWindow::window;
        fq.d = static_cast<int>(std::floor(q / 2.0));
    }
    if (fq.d > 2)
        throw domain_error("FracQuery: windows beyond d=2 (q >= 6) are not implemented");
    return fq;
}

// ---------------------------------------------------------------------------
// frac_action
// ---------------------------------------------------------------------------

namespace {

// window(d) via the cancellation-free profile remainder (d <= 1):
//   value = PF [ int_0^{t_max} t^{-q-1} (A - sum_{j<=d} a_j t^{2j}) dt
//                - sum_{j<=d} a_j t_max^{2j-q}/(q-2j) ]
// The next coefficient a_{d+1} is also subtracted numerically and added back
// in closed form over [0, t_max]. Analytically this cancels exactly, but it
// removes the nearly divergent t^{2(d+1)-q-1} mass when q sits close to the
// upper window boundary, keeping the quadrature well conditioned.
FracActionResult window_exact_remainder(const RadialSectionProfile& prof, const FracQuery& fq,
                                        const QuadratureConfig& cfg) {
    const int d = fq.d;
    const double q = fq.q;
    const double t_max = prof.t_max();
    const double PF = kTwoPi / gamma_fn(-0.5 * q);

    const double extra = prof.taylor(d + 1).a[d + 1];
    const double extra_pow = 2.0 * (d + 1);
    // when the next-level remainder is itself cancellation-free, use it
    // directly instead of subtracting extra * t^{2(d+1)} numerically
    const bool deep = d + 1 <= 1 && prof.has_exact_remainder(d + 1);
    auto integrand = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double y = deep ? prof.remainder(t, d + 1)
                              : prof.remainder(t, d) - extra * std::pow(t, extra_pow);
        if (y == 0.0) return 0.0;
        if (t < 1e-30)  // keep the intermediate power from overflowing
            return std::copysign(
                std::exp((-q - 1.0) * std::log(t) + std::log(std::abs(y))), y);
        return std::pow(t, -q - 1.0) * y;
    };
    // leading behaviour after subtraction: the next analytic term t^{2(d+2)}
    // or the non-analytic weight term t^{2n-2-p}
    const double lead = std::min(extra_pow + 2.0, 2.0 * prof.n() - 2.0 - prof.p());
    SingularityHint hint;
    const double he = lead - q - 1.0;
    if (he < 3.0 && he != 0.0) hint.left = he;
    IntegralResult mid = integrate_adaptive(integrand, 0.0, t_max, cfg, hint);

    TaylorCoeffs coeffs = prof.taylor(d);
    double tail = extra * std::pow(t_max, extra_pow - q) / (extra_pow - q);
    for (int j = 0; j <= d; ++j)
        tail -= coeffs.a[j] * std::pow(t_max, 2.0 * j - q) / (q - 2.0 * j);

    FracActionResult out;
    out.query = fq;
    out.value = PF * (mid.value + tail);
    out.err = std::abs(PF) * mid.err;
    return out;
}

// window(d) via a t_cut split with direct subtraction and a Taylor series
// piece on [0, t_cut]; used for MC profiles, numeric-only coefficient
// sources and the d = 2 window.
FracActionResult window_tcut(const RadialSectionProfile& prof, const FracQuery& fq,
                             const QuadratureConfig& cfg, CoeffSource source) {
    const int d = fq.d;
    const double q = fq.q;
    const double t_max = prof.t_max();
    const double PF = kTwoPi / gamma_fn(-0.5 * q);
    const bool numeric = source == CoeffSource::numeric_only;

    const int j_hi = std::min(3, d + 2);
    TaylorCoeffs coeffs = prof.taylor(j_hi, numeric);

    const double t_cut = t_max / 16.0;
    // series piece int_0^{t_cut} t^{-q-1} sum_{j=d+1..j_hi} a_j t^{2j} dt
    double series = 0.0, series_err = 0.0, last_term = 0.0;
    for (int j = d + 1; j <= j_hi; ++j) {
        last_term = coeffs.a[j] * std::pow(t_cut, 2.0 * j - q) / (2.0 * j - q);
        series += last_term;
        series_err += coeffs.err[j] * std::pow(t_cut, 2.0 * j - q) / (2.0 * j - q);
    }
    // truncation estimate: the next term at the same coefficient scale,
    // suppressed by the t_cut^2/t_max^2 decay of the series
    series_err += std::abs(last_term) * std::pow(t_cut / t_max, 2.0) * 4.0;
    {
        // self-measured model mismatch at t_cut (covers non-analytic weight
        // terms the Taylor model cannot represent)
        double model = 0.0, pw = 1.0;
        const double u_cut = t_cut * t_cut;
        for (int j = 0; j <= j_hi; ++j) {
            model += coeffs.a[j] * pw;
            pw *= u_cut;
        }
        const double m_err = std::abs(prof.value(t_cut) - model);
        series_err += m_err * std::pow(t_cut, -q) / std::max(0.5, 4.0 - q);
    }

    auto subtracted = [&](double t) {
        double acc = prof.value(t);
        double pw = 1.0;
        const double u = t * t;
        for (int j = 0; j <= d; ++j) {
            acc -= coeffs.a[j] * pw;
            pw *= u;
        }
        return std::pow(t, -q - 1.0) * acc;
    };
    IntegralResult mid = integrate_adaptive(subtracted, t_cut, t_max, cfg);

    double tail = 0.0, coeff_err = 0.0;
    for (int j = 0; j <= d; ++j) {
        tail -= coeffs.a[j] * std::pow(t_max, 2.0 * j - q) / (q - 2.0 * j);
        // regulated sensitivity of the t_cut scheme to a_j uncertainty
        coeff_err += coeffs.err[j] * std::pow(t_cut, 2.0 * j - q) / std::abs(q - 2.0 * j);
    }

    FracActionResult out;
    out.query = fq;
    out.value = PF * (series + mid.value + tail);
    out.err = std::abs(PF) * (series_err + mid.err + coeff_err +
                              mc_noise_integral(prof, q, t_cut, t_max));
    return out;
}

}  // namespace

FracActionResult frac_action(const RadialSectionProfile& profile, double q,
                             const QuadratureConfig& cfg, CoeffSource source) {
    cfg.validate();
    FracQuery fq = FracQuery::make(profile.n(), profile.p(), q);
    FracActionResult out;

    switch (fq.window) {
        case QWindow::negative: {
            // subtract a_0 and integrate its contribution in closed form;
            // keeps the quadrature mild even as q -> 0^-
            const double PF = kTwoPi / gamma_fn(-0.5 * q);
            const double t_max = profile.t_max();
            const double a0 = profile.taylor(0).a[0];
            auto integrand = [&](double t) {
                return std::pow(t, -q - 1.0) * profile.remainder(t, 0);
            };
            const double lead = std::min(2.0, 2.0 * profile.n() - 2.0 - profile.p());
            SingularityHint hint;
            if (lead - q - 1.0 < 3.0) hint.left = lead - q - 1.0;
            IntegralResult r = integrate_adaptive(integrand, 0.0, t_max, cfg, hint);
            out.query = fq;
            out.value = PF * (r.value + a0 * std::pow(t_max, -q) / (-q));
            out.err = std::abs(PF) *
                      (r.err + mc_noise_integral(profile, q, 0.0, t_max));
            out.window_tag = "neg";
            return out;
        }
        case QWindow::even_integer: {
            // (-1)^d pi/(4^d d!) Delta^d A(0) with Delta^d A(0) = 4^d (d!)^2 a_d
            TaylorCoeffs coeffs =
                profile.taylor(fq.d, source == CoeffSource::numeric_only);
            const double a_d = coeffs.a[fq.d];
            const double e_d = coeffs.err[fq.d];
            if (e_d > 0.5 * std::abs(a_d) + cfg.abs_tol) {
                std::ostringstream os;
                os << "frac_action: Taylor coefficient a_" << fq.d
                   << " uncertainty " << e_d << " too large for q=" << q;
                throw precision_error(os.str());
            }
            const double sign = fq.d % 2 == 0 ? 1.0 : -1.0;
            out.query = fq;
            out.value = sign * M_PI * factorial(fq.d) * a_d;
            out.err = M_PI * factorial(fq.d) * e_d;
            out.window_tag = "even(" + std::to_string(fq.d) + ")";
            return out;
        }
        case QWindow::window: {
            const bool exact_ok = source == CoeffSource::preferred &&
                                  profile.has_exact_remainder(fq.d);
            out = exact_ok ? window_exact_remainder(profile, fq, cfg)
                           : window_tcut(profile, fq, cfg, source);
            out.window_tag = "window(" + std::to_string(fq.d) + ")";
            if (out.err > 0.5 * std::abs(out.value) + 100.0 * cfg.abs_tol &&
                profile.noise_level() == 0.0) {
                std::ostringstream os;
                os << "frac_action: window(" << fq.d << ") error " << out.err
                   << " dominates value " << out.value;
                throw precision_error(os.str());
            }
            return out;
        }
    }
    throw domain_error("frac_action: unreachable");
}

// ---------------------------------------------------------------------------
// Fourier values
// ---------------------------------------------------------------------------

FtValue ft_weighted_norm(const RadialSectionProfile& profile, double q,
                         const QuadratureConfig& cfg, CoeffSource source) {
    FracActionResult fr = frac_action(profile, q, cfg, source);
    const double pre = std::pow(2.0, q + 1.0) * gamma_fn(0.5 * (q + 2.0)) * fr.query.gamma();
    FtValue out;
    out.value = pre * fr.value;
    out.error = pre * fr.err;
    out.route = "a_route";
    return out;
}

FtValue ft_weighted_norm(const Body& body, std::span<const double> xi, double p, double q,
                         const QuadratureConfig& cfg, int threads) {
    FracQuery::make(body.n(), p, q);  // validate before the profile build
    HyperplaneFrame frame = hyperplane_frame(xi);
    RadialSectionProfile prof = RadialSectionProfile::make(body, frame, p, cfg, threads);
    return ft_weighted_norm(prof, q, cfg);
}

double ball_ft_closed_form(int n, double radius, double p, double q) {
    FracQuery fq = FracQuery::make(n, p, q);
    // ||x||^{-2n+q+p+2} |x|^{-p} = R^{2n-q-p-2} |x|^{-(2n-q-2)} for the
    // radius-R ball; classical radial transform in R^{2n}
    const double gamma_exp = 2.0 * n - q - 2.0;
    const double value = std::pow(2.0, 2.0 * n - gamma_exp) * std::pow(M_PI, n) *
                         gamma_fn(0.5 * (2.0 * n - gamma_exp)) / gamma_fn(0.5 * gamma_exp);
    return std::pow(radius, fq.gamma()) * value;
}

double section_volume_ft(const Body& body, std::span<const double> xi,
                         const QuadratureConfig& cfg, int threads) {
    FtValue ft = ft_weighted_norm(body, xi, 0.0, 0.0, cfg, threads);
    return ft.value / (4.0 * M_PI * (body.n() - 1.0));
}

double frac_laplace_section(const Body& body, std::span<const double> xi, double alpha,
                            const QuadratureConfig& cfg, int threads) {
    const int n = body.n();
    if (!(alpha > -2.0 && alpha < 2.0 * n - 2.0))
        throw domain_error("frac_laplace_section: alpha outside (-2, 2n-2)");
    FtValue ft = ft_weighted_norm(body, xi, -alpha, alpha, cfg, threads);
    return ft.value / (4.0 * M_PI * (n - 1.0));
}

// ---------------------------------------------------------------------------
// Scans and reports
// ---------------------------------------------------------------------------

std::vector<double> uniform_psi_grid(int points) {
    if (points < 1) throw validation_error("psi grid: need >= 1 point");
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = 0.0;
        return grid;
    }
    for (int i = 0; i < points; ++i) grid[i] = (M_PI / 2.0) * i / (points - 1);
    return grid;
}

PosdefScanResult posdef_scan(const Body& body, double p, double q,
                             const std::vector<double>& psi_grid, const QuadratureConfig& cfg,
                             int threads) {
    FracQuery::make(body.n(), p, q);
    if (psi_grid.empty()) throw validation_error("posdef_scan: empty psi grid");
    PosdefScanResult out;
    out.psi = psi_grid;
    out.value.resize(psi_grid.size());
    out.err.resize(psi_grid.size());
    out.route.resize(psi_grid.size());

    const bool radial = body.base_body().family() == BodyFamily::euclidean_ball;
    if (radial) {
        // a radial body sees every direction the same way
        std::vector<double> xi = canonical_direction(body.n(), 0.0);
        HyperplaneFrame frame = hyperplane_frame(xi);
        RadialSectionProfile prof = RadialSectionProfile::make(body, frame, p, cfg, 1);
        FtValue ft = ft_weighted_norm(prof, q, cfg);
        for (std::size_t i = 0; i < psi_grid.size(); ++i) {
            out.value[i] = ft.value;
            out.err[i] = ft.error;
            out.route[i] = "closed_form_pole";
        }
    } else {
        parallel_for(psi_grid.size(), threads, [&](std::size_t i) {
            std::vector<double> xi = canonical_direction(body.n(), psi_grid[i]);
            HyperplaneFrame frame = hyperplane_frame(xi);
            RadialSectionProfile prof = RadialSectionProfile::make(body, frame, p, cfg, 1);
            FtValue ft = ft_weighted_norm(prof, q, cfg);
            out.value[i] = ft.value;
            out.err[i] = ft.error;
            out.route[i] = prof.backend_name();
        });
    }

    std::size_t arg = 0;
    for (std::size_t i = 1; i < out.value.size(); ++i)
        if (out.value[i] < out.value[arg]) arg = i;
    out.min_value = out.value[arg];
    out.argmin_psi = out.psi[arg];
    out.scale = 0.0;
    for (double v : out.value) out.scale = std::max(out.scale, std::abs(v));
    return out;
}

BrunnReport brunn_report(const Body& body, std::span<const double> xi, double p, double q,
                         int grid_points, const QuadratureConfig& cfg, int threads) {
    if (grid_points < 2) throw validation_error("brunn_report: need >= 2 grid points");
    HyperplaneFrame frame = hyperplane_frame(xi);
    RadialSectionProfile prof = RadialSectionProfile::make(body, frame, p, cfg, threads);

    BrunnReport rep;
    rep.q = q;
    const double a0 = prof.value(0.0);
    const double s0 = prof.sigma(0.0);
    double worst = -1e300;
    double slack = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double t = prof.t_max() * i / (grid_points - 1);
        const double excess = prof.value(t) - a0;
        if (excess > worst) {
            worst = excess;
            slack = 3.0 * (prof.sigma(t) + s0);
        }
    }
    rep.max_excess = worst;
    rep.excess_slack = slack;
    rep.max_at_origin = worst <= slack + 1e-8 * std::abs(a0);

    TaylorCoeffs coeffs = prof.taylor(1);
    rep.a1 = coeffs.a[1];
    rep.a1_err = coeffs.err[1];
    rep.a1_nonpositive = rep.a1 <= rep.a1_err;

    FracActionResult fr = frac_action(prof, q, cfg);
    rep.frac_value = fr.value;
    rep.frac_err = fr.err;
    rep.frac_nonnegative = fr.value >= -(fr.err + 1e-10 * std::abs(fr.value));
    return rep;
}

ParsevalResult parseval_residual(const Body& K, const Body& L, double p,
                                 const QuadratureConfig& cfg, int threads, int psi_points) {
    const int n = K.n();
    if (L.n() != n) throw validation_error("parseval_residual: dimension mismatch");
    if (!(p > 0.0 && p < 2.0 * n))
        throw domain_error("parseval_residual: need 0 < p < 2n");
    if (psi_points < 5) throw validation_error("parseval_residual: need >= 5 psi points");
    const double qK = 2.0 * n - p - 2.0;
    const double qL = p - 2.0;
    FracQuery::make(n, 0.0, qK);
    FracQuery::make(n, 0.0, qL);

    std::vector<double> psi = uniform_psi_grid(psi_points);
    std::vector<double> ftK(psi.size()), ftL(psi.size()), errK(psi.size()), errL(psi.size());

    auto eval_ft = [&](const Body& body, double q, double angle, double* val, double* err) {
        std::vector<double> xi = canonical_direction(n, angle);
        HyperplaneFrame frame = hyperplane_frame(xi);
        RadialSectionProfile prof = RadialSectionProfile::make(body, frame, 0.0, cfg, 1);
        FtValue v = ft_weighted_norm(prof, q, cfg);
        *val = v.value;
        *err = v.error;
    };

    const bool radK = K.base_body().family() == BodyFamily::euclidean_ball;
    const bool radL = L.base_body().family() == BodyFamily::euclidean_ball;
    parallel_for(psi.size(), threads, [&](std::size_t i) {
        if (!radK || i == 0) eval_ft(K, qK, radK ? 0.0 : psi[i], &ftK[i], &errK[i]);
        if (!radL || i == 0) eval_ft(L, qL, radL ? 0.0 : psi[i], &ftL[i], &errL[i]);
    });
    for (std::size_t i = 1; i < psi.size(); ++i) {
        if (radK) {
            ftK[i] = ftK[0];
            errK[i] = errK[0];
        }
        if (radL) {
            ftL[i] = ftL[0];
            errL[i] = errL[0];
        }
    }

    CubicSpline sK(psi, ftK), sL(psi, ftL);
    ParsevalResult out;
    out.psi_points = psi_points;
    out.lhs = sphere_average_biaxial([&](double a) { return sK(a) * sL(a); }, n, cfg);
    out.rhs = std::pow(kTwoPi, 2.0 * n) *
              sphere_average_biaxial(
                  [&](double a) {
                      return std::pow(K.radial_psi(a), p) *
                             std::pow(L.radial_psi(a), 2.0 * n - p);
                  },
                  n, cfg);
    const double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
    out.residual = std::abs(out.lhs - out.rhs) / scale;
    // propagated statistical/coefficient error of the lhs
    double lhs_err = 0.0;
    for (std::size_t i = 0; i + 1 < psi.size(); ++i) {
        const double mid = 0.5 * (psi[i] + psi[i + 1]);
        const double w = std::pow(std::cos(mid), 2.0 * n - 3.0) * std::sin(mid) *
                         (psi[i + 1] - psi[i]);
        lhs_err += (std::abs(sK(mid)) * 0.5 * (errL[i] + errL[i + 1]) +
                    std::abs(sL(mid)) * 0.5 * (errK[i] + errK[i + 1])) *
                   w;
    }
    lhs_err *= sphere_surface(2 * n - 2) * kTwoPi;
    out.sigma = lhs_err / scale;
    return out;
}

}  // namespace cbplab
