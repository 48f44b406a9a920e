#include "cbplab/sections.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <cstring>
#include <sstream>

namespace cbplab {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

bool HyperplaneFrame::is_pole_frame() const {
    double bulk = 0.0;
    for (int i = 0; i + 2 < 2 * n; ++i) bulk += xi[i] * xi[i];
    return std::sqrt(bulk) <= 1e-12;
}

HyperplaneFrame hyperplane_frame(std::span<const double> xi) {
    const std::size_t d = xi.size();
    if (d < 4 || d % 2 != 0)
        throw validation_error("hyperplane_frame: dimension must be even and >= 4");
    const double len = norm2(xi);
    if (std::abs(len - 1.0) > 1e-12) {
        if (len < 1e-12) throw validation_error("hyperplane_frame: xi is numerically zero");
        throw validation_error("hyperplane_frame: |xi| must be 1 within 1e-12");
    }

    HyperplaneFrame frame;
    frame.n = static_cast<int>(d / 2);
    frame.xi.assign(xi.begin(), xi.end());
    frame.xi_perp = r_theta_rotate(xi, M_PI / 2.0);

    // Gram-Schmidt completion from the standard basis
    std::vector<std::vector<double>> ortho = {frame.xi, frame.xi_perp};
    for (std::size_t k = 0; k < d && ortho.size() < d; ++k) {
        std::vector<double> v(d, 0.0);
        v[k] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : ortho) {
                const double c = dot(v, u);
                for (std::size_t i = 0; i < d; ++i) v[i] -= c * u[i];
            }
        const double r = norm2(v);
        if (r > 1e-8) {
            for (double& x : v) x /= r;
            ortho.push_back(std::move(v));
        }
    }
    if (ortho.size() != d)
        throw validation_error("hyperplane_frame: basis completion failed");
    frame.basis.assign(ortho.begin() + 2, ortho.end());
    return frame;
}

// ---------------------------------------------------------------------------
// Slice integrals
// ---------------------------------------------------------------------------

McEstimate mc_slice_integral(const Body& body, const HyperplaneFrame& frame, double p,
                             double u1, double u2, const QuadratureConfig& cfg,
                             std::uint64_t point_index) {
    cfg.validate();
    const int n = body.n();
    if (frame.n != n) throw validation_error("mc_slice_integral: frame/body mismatch");
    const int m = 2 * n - 2;  // slice dimension
    if (!(p < m)) throw domain_error("mc_slice_integral: need p < 2n-2 (slice weight integrable)");
    if (point_index == kPointIndexFromU) {
        // standalone evaluation: derive the stream index from the point bits
        std::uint64_t b1, b2;
        std::memcpy(&b1, &u1, sizeof b1);
        std::memcpy(&b2, &u2, sizeof b2);
        point_index = derive_seed(b1, b2);
    }

    const double u_sq = u1 * u1 + u2 * u2;
    const double shell = body.r_max() * body.r_max() - u_sq;
    McEstimate est;
    if (shell <= 0.0) return est;  // outside the bounding shell: empty slice
    const double R = std::sqrt(shell);

    const double p_pos = std::max(p, 0.0);
    const double power = m - p_pos;  // r-density ~ r^{m-1-p'}; CDF ~ r^{m-p'}
    const double weight_scale = sphere_surface(m) * std::pow(R, power) / power;

    std::mt19937_64 rng(derive_seed(cfg.rng_seed, point_index));
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::vector<double> x(2 * n);
    std::vector<double> omega(m);
    double sum = 0.0, sum2 = 0.0;
    const long samples = cfg.mc_samples;
    for (long i = 0; i < samples; ++i) {
        double osq = 0.0;
        for (double& w : omega) {
            w = gauss(rng);
            osq += w * w;
        }
        const double oinv = 1.0 / std::sqrt(osq);
        const double r = R * std::pow(uni(rng), 1.0 / power);
        for (int k = 0; k < 2 * n; ++k)
            x[k] = u1 * frame.xi[k] + u2 * frame.xi_perp[k];
        for (int j = 0; j < m; ++j) {
            const double c = r * omega[j] * oinv;
            const auto& b = frame.basis[j];
            for (int k = 0; k < 2 * n; ++k) x[k] += c * b[k];
        }
        double val = 0.0;
        if (body.contains(x)) {
            // |x|^2 = u^2 + r^2 by orthonormality of the frame
            val = std::pow(u_sq + r * r, -0.5 * p) * std::pow(r, p_pos) * weight_scale;
        }
        sum += val;
        sum2 += val * val;
    }
    const double mean = sum / samples;
    const double var = std::max(0.0, sum2 / samples - mean * mean);
    est.value = mean;
    est.sigma = std::sqrt(var / samples);
    return est;
}

McEstimate a_function_mc(const Body& body, const HyperplaneFrame& frame, double p, double t,
                         const QuadratureConfig& cfg) {
    if (t < 0.0) throw validation_error("a_function_mc: t must be >= 0");
    return mc_slice_integral(body, frame, p, t, 0.0, cfg);
}

double a_function_pole(const Body& body, double p, double t, const QuadratureConfig& cfg) {
    const int n = body.n();
    if (!(p < 2 * n - 2))
        throw domain_error("a_function_pole: need p < 2n-2 (slice weight integrable)");
    if (t < 0.0) throw validation_error("a_function_pole: t must be >= 0");
    if (!body.biaxial()) throw domain_error("a_function_pole: body is not biaxial");
    const double ft = body.profile_radius(t);
    if (ft <= 0.0) return 0.0;
    const double S = sphere_surface(2 * n - 2);
    if (t == 0.0)  // exact: int_0^{f0} r^{2n-3-p} dr
        return S * std::pow(ft, 2.0 * n - 2.0 - p) / (2.0 * n - 2.0 - p);
    auto integrand = [&](double r) {
        return std::pow(r * r + t * t, -0.5 * p) * std::pow(r, 2.0 * n - 3.0);
    };
    IntegralResult res = integrate_adaptive(integrand, 0.0, ft, cfg);
    return S * res.value;
}

// ---------------------------------------------------------------------------
// Deterministic general-frame slice for biaxial bodies
// ---------------------------------------------------------------------------

namespace {

// int_0^C (K + rho^2)^{-p/2} rho^{2m+1} drho in closed form: substitute
// v = rho^2 and expand v^m = ((K+v) - K)^m binomially.
double radial_core(double K, double C, int m, double p) {
    if (C <= 0.0) return 0.0;
    const double C2 = C * C;
    if (K <= 0.0) {
        const double e = 2.0 * m + 2.0 - p;  // > 0 by p < 2n-2
        return std::pow(C, e) / e;
    }
    double binom = 1.0;
    double acc = 0.0;
    for (int k = 0; k <= m; ++k) {
        if (k > 0) binom *= static_cast<double>(m - k + 1) / k;
        const double sign_pow = (m - k) % 2 == 0 ? std::pow(K, m - k) : -std::pow(K, m - k);
        const double e = k + 1.0 - 0.5 * p;
        double piece;
        if (std::abs(e) < 1e-9) {
            piece = std::log1p(C2 / K);
        } else {
            // (K + C^2)^e - K^e without cancellation
            piece = std::pow(K, e) * std::expm1(e * std::log1p(C2 / K)) / e;
        }
        acc += binom * sign_pow * piece;
    }
    return 0.5 * acc;
}

}  // namespace

double biaxial_support(const Body& body, double psi) {
    if (!body.biaxial()) throw domain_error("biaxial_support: body is not biaxial");
    const double c = std::cos(psi), s = std::sin(psi);
    const double a = body.profile_support();
    // max over the boundary of f(tau) cos(psi) + tau sin(psi)
    double best = 0.0;
    const int grid = 512;
    int best_i = 0;
    for (int i = 0; i <= grid; ++i) {
        const double tau = a * i / grid;
        const double v = body.profile_radius(tau) * std::abs(c) + tau * std::abs(s);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    // golden refinement around the best grid cell
    double lo = a * std::max(0, best_i - 1) / grid;
    double hi = a * std::min(grid, best_i + 1) / grid;
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        const double v1 = body.profile_radius(m1) * std::abs(c) + m1 * std::abs(s);
        const double v2 = body.profile_radius(m2) * std::abs(c) + m2 * std::abs(s);
        if (v1 < v2)
            lo = m1;
        else
            hi = m2;
        best = std::max(best, std::max(v1, v2));
    }
    return best;
}

double biaxial_frame_slice(const Body& body, double psi, double p, double u,
                           const QuadratureConfig& cfg) {
    const int n = body.n();
    if (!body.biaxial()) throw domain_error("biaxial_frame_slice: body is not biaxial");
    if (!(p < 2.0 * n - 2.0)) throw domain_error("biaxial_frame_slice: need p < 2n-2");
    u = std::abs(u);
    const double cs = std::cos(psi), sn = std::sin(psi);
    const double a = body.profile_support();
    const double rmax = body.r_max();
    const double shell = rmax * rmax - u * u;
    if (shell <= 0.0) return 0.0;
    const double R = std::sqrt(shell);
    const int m = n - 3;
    const double S = sphere_surface(2 * n - 4);

    // adapted in-plane coordinates: pole block w = (u sn + s1 cs, s2 cs),
    // first bulk pair b = (u cs - s1 sn, -s2 sn), bulk rest radius rho with
    // |x|^2 = u^2 + s1^2 + s2^2 + rho^2
    QuadratureConfig inner_cfg = cfg;
    inner_cfg.rel_tol = std::max(cfg.rel_tol * 0.3, 1e-12);
    inner_cfg.abs_tol = 1e-280;  // relative convergence; zeros handled by GK
    inner_cfg.max_subdivisions = std::max(cfg.max_subdivisions, 2000);

    auto s2_integrand = [&](double s1, double s2) {
        const double w1 = u * sn + s1 * cs;
        const double w2 = s2 * cs;
        const double wr = std::sqrt(w1 * w1 + w2 * w2);
        if (wr > a) return 0.0;
        const double f = body.profile_radius(wr);
        const double b1 = u * cs - s1 * sn;
        const double b2 = -s2 * sn;
        const double C2 = f * f - b1 * b1 - b2 * b2;
        if (C2 <= 0.0) return 0.0;
        const double K = u * u + s1 * s1 + s2 * s2;
        return radial_core(K, std::sqrt(C2), m, p);
    };

    auto s1_integrand = [&](double s1) {
        const double lim = R * R - s1 * s1;
        if (lim <= 0.0) return 0.0;
        const double s2_hi = std::sqrt(lim);
        IntegralResult inner = integrate_adaptive(
            [&](double s2) { return s2_integrand(s1, s2); }, 0.0, s2_hi, inner_cfg);
        return 2.0 * inner.value;  // even in s2
    };

    QuadratureConfig outer_cfg = inner_cfg;
    outer_cfg.rel_tol = std::max(cfg.rel_tol, 1e-11);
    IntegralResult outer = integrate_adaptive(s1_integrand, -R, R, outer_cfg);
    return S * outer.value;
}

// ---------------------------------------------------------------------------
// RadialSectionProfile
// ---------------------------------------------------------------------------

RadialSectionProfile RadialSectionProfile::pole(const Body& body, double p,
                                                const QuadratureConfig& cfg) {
    const int n = body.n();
    if (!(p < 2 * n - 2)) throw domain_error("profile: need p < 2n-2");
    if (!body.biaxial()) throw domain_error("profile: closed form needs a biaxial body");
    RadialSectionProfile prof;
    prof.backend_ = Backend::closed_form_biaxial;
    prof.n_ = n;
    prof.p_ = p;
    prof.cfg_ = cfg;
    prof.body_ = std::make_shared<const Body>(body);
    prof.t_max_ = body.profile_support();
    prof.poly_ = body.profile_poly();
    prof.exponent_ = body.profile_exponent();
    const double F0 = body.profile_radius(0.0);
    const double S = sphere_surface(2 * n - 2);
    prof.a0_exact_ = S * std::pow(F0, 2.0 * n - 2.0 - p) / (2.0 * n - 2.0 - p);
    if (p < 2.0 * n - 4.0) {
        // d A / d(t^2) at 0 from differentiating the slice integral in u = t^2
        const double fp0 = body.profile_fprime0();
        prof.exact_a1_ =
            S * (fp0 * std::pow(F0, 2.0 * n - 3.0 - p) -
                 0.5 * p * std::pow(F0, 2.0 * n - 4.0 - p) / (2.0 * n - 4.0 - p));
    }
    prof.compute_taylor_cache();
    return prof;
}

RadialSectionProfile RadialSectionProfile::monte_carlo(const Body& body,
                                                       const HyperplaneFrame& frame, double p,
                                                       const QuadratureConfig& cfg, int threads,
                                                       int grid_points) {
    const int n = body.n();
    if (!(p < 2 * n - 2)) throw domain_error("profile: need p < 2n-2");
    if (grid_points < 5) throw validation_error("profile: need >= 5 grid points");
    RadialSectionProfile prof;
    prof.backend_ = Backend::monte_carlo;
    prof.pole_form_ = false;
    prof.n_ = n;
    prof.p_ = p;
    prof.cfg_ = cfg;
    prof.t_max_ = body.r_max();
    prof.grid_t_.resize(grid_points);
    prof.grid_a_.resize(grid_points);
    prof.grid_sigma_.resize(grid_points);
    for (int i = 0; i < grid_points; ++i)
        prof.grid_t_[i] = prof.t_max_ * i / (grid_points - 1);
    parallel_for(grid_points, threads, [&](std::size_t i) {
        McEstimate e = mc_slice_integral(body, frame, p, prof.grid_t_[i], 0.0, cfg, i);
        prof.grid_a_[i] = e.value;
        prof.grid_sigma_[i] = e.sigma;
    });
    // the outermost slice is empty by the shell bound
    prof.grid_a_.back() = 0.0;
    prof.grid_sigma_.back() = 0.0;
    prof.spline_ = CubicSpline(prof.grid_t_, prof.grid_a_);
    prof.noise_ = *std::max_element(prof.grid_sigma_.begin(), prof.grid_sigma_.end());
    prof.a0_exact_ = prof.grid_a_.front();
    prof.compute_taylor_cache();
    return prof;
}

RadialSectionProfile RadialSectionProfile::quadrature_frame(const Body& body, double psi,
                                                            double p,
                                                            const QuadratureConfig& cfg,
                                                            int threads, int grid_points) {
    const int n = body.n();
    if (!(p < 2 * n - 2)) throw domain_error("profile: need p < 2n-2");
    if (!body.biaxial()) throw domain_error("profile: quadrature frame needs a biaxial body");
    if (grid_points < 9) throw validation_error("profile: need >= 9 grid points");
    RadialSectionProfile prof;
    prof.backend_ = Backend::closed_form_biaxial;
    prof.pole_form_ = false;
    prof.n_ = n;
    prof.p_ = p;
    prof.cfg_ = cfg;
    prof.t_max_ = biaxial_support(body, psi);
    prof.grid_t_.resize(grid_points);
    prof.grid_a_.resize(grid_points);
    prof.grid_sigma_.assign(grid_points, 0.0);
    for (int i = 0; i < grid_points; ++i)
        prof.grid_t_[i] = prof.t_max_ * i / (grid_points - 1);
    parallel_for(grid_points, threads, [&](std::size_t i) {
        prof.grid_a_[i] = biaxial_frame_slice(body, psi, p, prof.grid_t_[i], cfg);
    });
    prof.grid_a_.back() = 0.0;
    prof.spline_ = CubicSpline(prof.grid_t_, prof.grid_a_);
    prof.a0_exact_ = prof.grid_a_.front();
    prof.compute_taylor_cache();
    return prof;
}

namespace {

// pole angle of a frame direction: asin of the norm of the last coordinate
// pair (frames with equal pole angle see equal biaxial profiles)
double frame_pole_angle(const HyperplaneFrame& frame) {
    const std::size_t d = frame.xi.size();
    const double pole = std::sqrt(frame.xi[d - 2] * frame.xi[d - 2] +
                                  frame.xi[d - 1] * frame.xi[d - 1]);
    return std::asin(std::min(1.0, pole));
}

}  // namespace

RadialSectionProfile RadialSectionProfile::make(const Body& body, const HyperplaneFrame& frame,
                                                double p, const QuadratureConfig& cfg,
                                                int threads) {
    if (body.base_body().family() == BodyFamily::euclidean_ball)
        return pole(body, p, cfg);  // radially symmetric: every frame is a pole frame
    if (body.biaxial()) {
        if (frame.is_pole_frame()) return pole(body, p, cfg);
        return quadrature_frame(body, frame_pole_angle(frame), p, cfg, threads);
    }
    return monte_carlo(body, frame, p, cfg, threads);
}

double RadialSectionProfile::value(double t) const {
    t = std::abs(t);
    if (t > t_max_) return 0.0;
    // grid-backed profiles (Monte Carlo and general-frame quadrature)
    if (!grid_t_.empty()) return std::max(0.0, spline_(t));
    if (t == 0.0) return a0_exact_;
    const double ft = body_->profile_radius(t);
    if (ft <= 0.0) return 0.0;
    const double S = sphere_surface(2 * n_ - 2);
    const double p = p_;
    const int n = n_;
    auto integrand = [&](double r) {
        return std::pow(r * r + t * t, -0.5 * p) * std::pow(r, 2.0 * n - 3.0);
    };
    IntegralResult res = integrate_adaptive(integrand, 0.0, ft, cfg_);
    return S * res.value;
}

double RadialSectionProfile::sigma(double t) const {
    if (backend_ != Backend::monte_carlo) return 0.0;
    t = std::abs(t);
    if (t >= t_max_) return 0.0;
    // piecewise-linear interpolation of grid sigmas
    const auto it = std::upper_bound(grid_t_.begin(), grid_t_.end(), t);
    std::size_t hi = std::min<std::size_t>(it - grid_t_.begin(), grid_t_.size() - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double w = (t - grid_t_[lo]) / (grid_t_[hi] - grid_t_[lo]);
    return (1.0 - w) * grid_sigma_[lo] + w * grid_sigma_[hi];
}

namespace {

// weighted least squares of noisy grid values against sum_j a_j u^j,
// u = t^2, j <= 3; returns coefficient estimates and their statistical
// errors from the normal-equation covariance
TaylorCoeffs fit_even_poly(const std::vector<double>& t, const std::vector<double>& a,
                           const std::vector<double>& sig, double t_hi) {
    const int order = 3;
    double xtx[4][4] = {};
    double xty[4] = {};
    int used = 0;
    double sig_floor = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        sig_floor = std::max(sig_floor, 1e-4 * std::abs(a[i]));
    sig_floor = std::max(sig_floor, 1e-12);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] > t_hi) continue;
        const double w = 1.0 / std::pow(std::max(sig[i], sig_floor), 2);
        double pw[4];
        pw[0] = 1.0;
        const double u = t[i] * t[i];
        for (int j = 1; j <= order; ++j) pw[j] = pw[j - 1] * u;
        for (int r = 0; r <= order; ++r) {
            for (int c = 0; c <= order; ++c) xtx[r][c] += w * pw[r] * pw[c];
            xty[r] += w * pw[r] * a[i];
        }
        ++used;
    }
    TaylorCoeffs out;
    out.a.assign(order + 1, 0.0);
    out.err.assign(order + 1, 1e300);
    if (used < order + 2) return out;
    // solve the augmented system [xtx | xty, I] for coefficients and inverse
    double m[4][9];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) m[r][c] = xtx[r][c];
        m[r][4] = xty[r];
        for (int c = 0; c < 4; ++c) m[r][5 + c] = r == c ? 1.0 : 0.0;
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) return out;
        if (piv != col)
            for (int c = 0; c < 9; ++c) std::swap(m[piv][c], m[col][c]);
        const double inv = 1.0 / m[col][col];
        for (int c = 0; c < 9; ++c) m[col][c] *= inv;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = m[r][col];
            for (int c = 0; c < 9; ++c) m[r][c] -= f * m[col][c];
        }
    }
    for (int j = 0; j <= order; ++j) {
        out.a[j] = m[j][4];
        out.err[j] = std::sqrt(std::max(0.0, m[j][5 + j]));
    }
    return out;
}

}  // namespace

void RadialSectionProfile::compute_taylor_cache() {
    if (backend_ == Backend::monte_carlo) {
        // fit the noisy grid instead of differencing it: noise averages over
        // the grid and there is no 1/h amplification; the window-stability
        // difference doubles as a model-bias estimate
        TaylorCoeffs wide = fit_even_poly(grid_t_, grid_a_, grid_sigma_, 0.6 * t_max_);
        TaylorCoeffs narrow = fit_even_poly(grid_t_, grid_a_, grid_sigma_, 0.45 * t_max_);
        for (int j = 0; j <= 3; ++j)
            wide.err[j] += std::abs(wide.a[j] - narrow.a[j]);
        taylor_numeric_ = wide;
        taylor_numeric_.a[0] = a0_exact_;  // the seeded grid value at t = 0
        taylor_mixed_ = taylor_numeric_;
        return;
    }
    const double h0 = t_max_ / 8.0;
    auto eval = [this](double t) { return value(t); };
    // noise inflates the error estimates here; consumers that actually need a
    // coefficient decide whether the uncertainty is acceptable
    taylor_numeric_ = detail::taylor_even_coeffs_impl(eval, 3, h0, noise_, false);
    taylor_mixed_ = taylor_numeric_;
    taylor_mixed_.a[0] = a0_exact_;
    taylor_mixed_.err[0] = 0.0;
    if (exact_a1_) {
        taylor_mixed_.a[1] = *exact_a1_;
        taylor_mixed_.err[1] = 0.0;
        // the numeric estimate keeps its value, but its uncertainty can use
        // the known closed form (Richardson under-reports fractional-power
        // error terms of weighted profiles)
        taylor_numeric_.err[1] =
            std::max(taylor_numeric_.err[1], std::abs(taylor_numeric_.a[1] - *exact_a1_));
    }
}

TaylorCoeffs RadialSectionProfile::taylor(int order, bool numeric_only) const {
    if (order < 0 || order > 3) throw domain_error("profile taylor: order must be in [0, 3]");
    const TaylorCoeffs& src = numeric_only ? taylor_numeric_ : taylor_mixed_;
    TaylorCoeffs out;
    out.a.assign(src.a.begin(), src.a.begin() + order + 1);
    out.err.assign(src.err.begin(), src.err.begin() + order + 1);
    return out;
}

std::string RadialSectionProfile::backend_name() const {
    if (backend_ == Backend::monte_carlo) return "monte_carlo";
    return pole_form_ ? "closed_form_pole" : "biaxial_quadrature";
}

bool RadialSectionProfile::has_exact_remainder(int d) const {
    if (!pole_form_) return false;
    if (d == 0) return true;
    return d == 1 && exact_a1_.has_value();
}

namespace {

// (1+x)^a - 1              (k_min = 1)
// (1+x)^a - 1 - a x        (k_min = 2)
// thin wrappers for readability inside the remainder integrands
double weight_rem1(double x, double a) { return binom_series_rem(x, a, 1); }
double weight_rem2(double x, double a) { return binom_series_rem(x, a, 2); }

}  // namespace

double RadialSectionProfile::remainder(double t, int d) const {
    if (d < 0 || d > 1) throw domain_error("profile remainder: d must be 0 or 1");
    t = std::abs(t);
    if (!pole_form_ || t >= t_max_) {
        double v = value(t) - a0_exact_;
        if (d == 1) v -= taylor(1).a[1] * t * t;
        return v;
    }
    if (d == 1 && !exact_a1_)
        throw precision_error("profile remainder: exact a_1 requires p < 2n-4");

    // cancellation-free split: with u = t^2, f = P(u)^e, c1 = 2n-2-p,
    // c2 = 2n-4-p, h(u) = f^{c1}/c1, K(u) = f^{c2},
    //   A/S   = I1 + h(u) - (p/2) u K(u)/c2          (d = 1 subtraction)
    //   A/S   = I0 + h(u)                            (d = 0 subtraction)
    // where I0/I1 carry the weight-series remainders of (r^2+u)^{-p/2}.
    const double u = t * t;
    const double S = sphere_surface(2 * n_ - 2);
    const double p = p_;
    const double e = exponent_;
    const double c1 = 2.0 * n_ - 2.0 - p;
    const double c2 = 2.0 * n_ - 4.0 - p;
    const double P0 = poly_[0];

    // w(u) = (P(u) - P0)/P0 and its tail beyond the linear term, both exact
    double w = 0.0, w_tail = 0.0, pw = 1.0;
    for (std::size_t k = 1; k < poly_.size(); ++k) {
        pw *= u;
        const double term = poly_[k] / P0 * pw;
        w += term;
        if (k >= 2) w_tail += term;
    }
    if (w <= -1.0) {
        // outside the support in exact arithmetic; fall back to direct form
        double v = value(t) - a0_exact_;
        if (d == 1) v -= *exact_a1_ * t * t;
        return v;
    }
    const double log1pw = std::log1p(w);
    const double ft = std::pow(P0, e) * std::exp(e * log1pw);

    double weighted = 0.0;  // I0 or I1
    if (p != 0.0 && ft > 0.0 && u > 0.0) {
        // Split at r* = min(f, 8 sqrt(u)) and factor the exact power scales
        // out of each piece, so both quadratures converge in relative terms
        // and the t -> 0 values keep full relative precision.
        const double a_exp = -0.5 * p;
        const int k_min = d + 1;
        const double su = std::sqrt(u);
        const double rho_star = std::min(ft / su, 8.0);
        QuadratureConfig rel_cfg = cfg_;
        rel_cfg.abs_tol = 1e-280;  // force relative convergence

        // inner: r = sqrt(u) rho, rho in (0, rho_star]; g_{k_min}(1/rho^2)
        // stays O(1) there
        {
            auto inner = [&](double rho) {
                const double x = 1.0 / (rho * rho);
                const double g = (k_min == 1) ? weight_rem1(x, a_exp) : weight_rem2(x, a_exp);
                return g * std::pow(rho, 2.0 * n_ - 3.0 - p);
            };
            const double hint_e =
                (k_min == 1) ? 2.0 * n_ - 3.0 - p : 2.0 * n_ - 5.0 - p;
            SingularityHint hint;
            if (hint_e < 3.0) hint.left = hint_e;
            IntegralResult ri = integrate_adaptive(inner, 0.0, rho_star, rel_cfg, hint);
            weighted += std::pow(u, 0.5 * (2.0 * n_ - 2.0 - p)) * ri.value;
        }
        // outer: x = u/r^2 <= 1/64, series scaled by x^{k_min}; only present
        // when the inner cap did not already reach the support edge
        const double r_star = su * rho_star;
        if (rho_star == 8.0 && ft > r_star) {
            auto outer = [&](double r) {
                const double x = u / (r * r);
                return binom_series_rem_scaled(x, a_exp, k_min) *
                       std::pow(r, 2.0 * n_ - 3.0 - p - 2.0 * k_min);
            };
            IntegralResult ro = integrate_adaptive(outer, r_star, ft, rel_cfg);
            weighted += std::pow(u, static_cast<double>(k_min)) * ro.value;
        }
    }

    const double E1 = e * c1;
    const double h0 = std::pow(P0, E1) / c1;
    double result;
    if (d == 0) {
        // h(u) - h(0) = h0 expm1(E1 log1p(w)); the d=0 split has no c2 piece
        result = weighted + h0 * std::expm1(E1 * log1pw);
    } else {
        // h(u) - h(0) - h'(0) u  =
        //   h0 [ (e^{phi} - 1 - phi) + E1 (log1p(w) - w) + E1 (w - w1 u) ]
        const double phi = E1 * log1pw;
        const double h_rem2 = h0 * (expm1mx(phi) + E1 * (log1pmx(w) + w_tail));
        // -(p/2)(u/c2) [K(u) - K(0)], K = P^{e c2}
        const double E2 = e * c2;
        const double K0 = std::pow(P0, E2);
        const double k_diff = K0 * std::expm1(E2 * log1pw);
        result = weighted + h_rem2 - 0.5 * p * (u / c2) * k_diff;
    }
    return result * S;
}

// ---------------------------------------------------------------------------
// Section function and biaxial sphere average
// ---------------------------------------------------------------------------

SectionResult section_volume(const Body& body, std::span<const double> xi,
                             const QuadratureConfig& cfg, int threads) {
    HyperplaneFrame frame = hyperplane_frame(xi);
    RadialSectionProfile prof = RadialSectionProfile::make(body, frame, 0.0, cfg, threads);
    SectionResult out;
    out.value = prof.value(0.0);
    out.sigma = prof.sigma(0.0);
    out.route = "direct_" + prof.backend_name();
    return out;
}

double sphere_average_biaxial(const std::function<double(double)>& F, int n,
                              const QuadratureConfig& cfg) {
    const double S = sphere_surface(2 * n - 2) * 2.0 * M_PI;
    auto integrand = [&](double psi) {
        return F(psi) * std::pow(std::cos(psi), 2.0 * n - 3.0) * std::sin(psi);
    };
    IntegralResult r = integrate_adaptive(integrand, 0.0, M_PI / 2.0, cfg);
    return S * r.value;
}

void dump_profile(std::ostream& os, const RadialSectionProfile& profile,
                  const std::string& body_hash, std::uint64_t seed, int points) {
    char buf[64];
    os << "# body_hash=" << body_hash << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", profile.p());
    os << "# p=" << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", profile.t_max());
    os << "# t_max=" << buf << "\n";
    os << "# seed=" << seed << "\n";
    for (int i = 0; i < points; ++i) {
        const double t = profile.t_max() * i / (points - 1);
        char line[160];
        std::snprintf(line, sizeof(line), "%.17g %.17g\n", t, profile.value(t));
        os << line;
    }
}

}  // namespace cbplab
