#pragma once

// Shared numerical toolkit: special functions, adaptive Gauss-Kronrod
// quadrature with power substitutions for endpoint singularities,
// safeguarded bracketing root finding, Richardson-extrapolated even
// Taylor coefficients, deterministic seed derivation and a small
// thread pool helper.
//
// Everything here is pure and reentrant.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cbplab/errors.hpp"

namespace cbplab {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;
    long mc_samples = 20000;
    std::uint64_t rng_seed = 20240717ULL;

    void validate() const {
        if (!(rel_tol > 0.0)) throw validation_error("QuadratureConfig: rel_tol must be > 0");
        if (!(abs_tol > 0.0)) throw validation_error("QuadratureConfig: abs_tol must be > 0");
        if (max_subdivisions < 1) throw validation_error("QuadratureConfig: max_subdivisions must be >= 1");
        if (mc_samples < 100) throw validation_error("QuadratureConfig: mc_samples must be >= 100");
    }

    QuadratureConfig tightened(double factor) const {
        QuadratureConfig c = *this;
        c.rel_tol *= factor;
        c.abs_tol *= factor;
        return c;
    }
};

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

// Gamma function with an explicit pole guard: x must stay at least 1e-9 away
// from the poles at 0, -1, -2, ...
double gamma_fn(double x);

// Total surface measure of the unit sphere S^{m-1}: 2 pi^{m/2} / Gamma(m/2).
double sphere_surface(int m);

// Volume of the unit ball in R^m: sphere_surface(m) / m.
double unit_ball_volume(int m);

// ---------------------------------------------------------------------------
// Adaptive quadrature
// ---------------------------------------------------------------------------

struct IntegralResult {
    double value = 0.0;
    double err = 0.0;
};

// Known power behaviour of the integrand at the endpoints: integrand ~
// (t-a)^{left} near a and ~ (b-t)^{right} near b. An exponent of 0 means
// "smooth, do nothing". Exponents must be > -1 (integrable).
struct SingularityHint {
    double left = 0.0;
    double right = 0.0;
};

namespace detail {

// 15-point Gauss-Kronrod rule with embedded 7-point Gauss error estimate.
// Nodes/weights are the standard QUADPACK constants.
template <class Func>
double gauss_kronrod_15(const Func& f, double a, double b, double& err) {
    static const double xk[8] = {
        0.000000000000000000000000000000000e+00,
        2.077849550078984676006894037732449e-01,
        4.058451513773971669066064120769615e-01,
        5.860872354676911302941448382587296e-01,
        7.415311855993944398638647732807884e-01,
        8.648644233597690727897127886409262e-01,
        9.491079123427585245261896840478513e-01,
        9.914553711208126392068546975263285e-01};
    static const double wk[8] = {
        2.094821410847278280129991748917143e-01,
        2.044329400752988924141619992346491e-01,
        1.903505780647854099132564024210137e-01,
        1.690047266392679028265834265985503e-01,
        1.406532597155259187451895905102379e-01,
        1.047900103222501838398763225415180e-01,
        6.309209262997855329070066318920429e-02,
        2.293532201052922496373200805896959e-02};
    static const double wg[4] = {
        4.179591836734693877551020408163265e-01,
        3.818300505051189449503697754889751e-01,
        2.797053914892766679014677714237796e-01,
        1.294849661688696932706114326790820e-01};

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fv[15];
    fv[0] = f(c);
    double k15 = wk[0] * fv[0];
    double g7 = wg[0] * fv[0];
    for (int i = 1; i < 8; ++i) {
        const double dx = h * xk[i];
        const double lo = f(c - dx);
        const double hi = f(c + dx);
        fv[2 * i - 1] = lo;
        fv[2 * i] = hi;
        k15 += wk[i] * (lo + hi);
        if (i % 2 == 0) g7 += wg[i / 2] * (lo + hi);
    }
    const double mean = 0.5 * k15;
    double resasc = wk[0] * std::abs(fv[0] - mean);
    for (int i = 1; i < 8; ++i)
        resasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    resasc *= std::abs(h);
    k15 *= h;
    g7 *= h;
    // QUADPACK error sharpening against the scale of variation
    err = std::abs(k15 - g7);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return k15;
}

IntegralResult integrate_core(const std::function<double(double)>& f, double a, double b,
                              const QuadratureConfig& cfg);

}  // namespace detail

// Adaptive integration of f over (a, b). Endpoint power behaviour given in
// `hint` is removed by the substitution t = a + tau^m (m = 3/(1+e)) before
// the adaptive pass, so the machinery only ever sees mild integrands.
IntegralResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureConfig& cfg, SingularityHint hint = {});

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

// Safeguarded bisection/secant hybrid on a sign-changing bracket. Converges
// unconditionally; throws bracket_error when g(lo) and g(hi) have equal sign.
double find_root(const std::function<double(double)>& g, double lo, double hi, double tol);

// ---------------------------------------------------------------------------
// Even Taylor coefficients
// ---------------------------------------------------------------------------

struct TaylorCoeffs {
    std::vector<double> a;    // a[j]: coefficient of t^{2j}
    std::vector<double> err;  // error estimates, err[0] == 0 (a0 is exact)
};

// Coefficients a_j of A(t) = sum_j a_j t^{2j} + o(t^{2*order}) for an even
// function A. Differences are taken in s = t^2 (so even symmetry is exact)
// with Newton divided differences on nodes {0, h, .., order*h}, h = h0^2,
// and a depth-3 Richardson step-halving extrapolation. a_0 = A(0) exactly.
//
// `noise` is an optional absolute noise level of A evaluations (e.g. a Monte
// Carlo sigma); when the propagated noise swamps a coefficient, a
// precision_error is thrown advising a larger sample count.
TaylorCoeffs taylor_even_coeffs(const std::function<double(double)>& A, int order, double h0,
                                double noise = 0.0);

namespace detail {
// as above, but folds hopeless noise into err instead of throwing
TaylorCoeffs taylor_even_coeffs_impl(const std::function<double(double)>& A, int order,
                                     double h0, double noise, bool throw_on_noise);
}  // namespace detail

// ---------------------------------------------------------------------------
// Cancellation-free elementary differences
// ---------------------------------------------------------------------------

// exp(x) - 1 - x to full relative precision
inline double expm1mx(double x) {
    if (std::abs(x) > 0.35) return std::expm1(x) - x;
    // x^2/2 * (1 + x/3 (1 + x/4 (...)))
    double acc = 0.0;
    for (int k = 20; k >= 3; --k) acc = x / k * (1.0 + acc);
    return 0.5 * x * x * (1.0 + acc);
}

// log(1+x) - x to full relative precision
inline double log1pmx(double x) {
    if (std::abs(x) > 0.35) return std::log1p(x) - x;
    // sum_{k>=2} (-1)^{k+1} x^k / k
    double acc = 0.0;
    double term = -x * x;  // (-1)^{k+1} x^k at k = 2
    for (int k = 2; k <= 60; ++k) {
        acc += term / k;
        term *= -x;
        if (std::abs(term) < 1e-22 * (std::abs(acc) + 1e-300)) break;
    }
    return acc;
}

// (1+x)^a - 1 (k_min = 1) or (1+x)^a - 1 - a x (k_min = 2), x > -1
double binom_series_rem(double x, double a, int k_min);

// binom_series_rem(x, a, k_min) / x^{k_min}, |x| <= 0.5: the scaled series
// sum_{k >= k_min} C(a, k) x^{k - k_min}, evaluated at full relative precision
double binom_series_rem_scaled(double x, double a, int k_min);

// ---------------------------------------------------------------------------
// Cubic spline (natural), used for cached radial profiles and psi-grids.
// ---------------------------------------------------------------------------

class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double t) const;
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_;  // nodes, values, second derivatives
};

// ---------------------------------------------------------------------------
// Determinism helpers
// ---------------------------------------------------------------------------

// SplitMix64-style mixing; derive_seed(base, i) gives independent streams per
// work item so results do not depend on worker scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Runs fn(0..count-1) on at most `threads` workers. Serial when threads <= 1.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace cbplab
