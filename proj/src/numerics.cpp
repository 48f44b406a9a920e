#include "cbplab/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <queue>
#include <sstream>
#include <thread>

namespace cbplab {

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

double gamma_fn(double x) {
    if (x <= 0.0) {
        const double nearest = std::round(x);
        if (nearest <= 0.0 && std::abs(x - nearest) < 1e-9) {
            std::ostringstream os;
            os << "gamma_fn: x=" << x << " is within 1e-9 of the pole at " << nearest;
            throw domain_error(os.str());
        }
    }
    return std::tgamma(x);
}

double sphere_surface(int m) {
    if (m < 1) throw domain_error("sphere_surface: m must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * m) / gamma_fn(0.5 * m);
}

double unit_ball_volume(int m) { return sphere_surface(m) / m; }

// ---------------------------------------------------------------------------
// Adaptive quadrature
// ---------------------------------------------------------------------------

namespace detail {

namespace {

struct Segment {
    double a, b, value, err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

}  // namespace

IntegralResult integrate_core(const std::function<double(double)>& f, double a, double b,
                              const QuadratureConfig& cfg) {
    if (a == b) return {0.0, 0.0};

    std::priority_queue<Segment> queue;
    Segment s0;
    s0.a = a;
    s0.b = b;
    s0.value = gauss_kronrod_15(f, a, b, s0.err);
    queue.push(s0);

    double total = s0.value;
    double total_err = s0.err;
    int used = 1;

    while (!queue.empty() &&
           total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        if (used >= cfg.max_subdivisions) {
            std::ostringstream os;
            os << "integrate_adaptive: no convergence after " << cfg.max_subdivisions
               << " subdivisions (err=" << total_err << ")";
            throw accuracy_error(os.str(), total, total_err);
        }
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at roundoff resolution; retire it, keeping its
            // contribution inside total/total_err
            continue;
        }
        Segment left, right;
        left.a = worst.a;
        left.b = mid;
        right.a = mid;
        right.b = worst.b;
        left.value = gauss_kronrod_15(f, left.a, left.b, left.err);
        right.value = gauss_kronrod_15(f, right.a, right.b, right.err);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        queue.push(left);
        queue.push(right);
        ++used;
    }
    return {total, total_err};
}

}  // namespace detail

namespace {

// t = a + tau^m maps tau in [0, (b-a)^{1/m}] onto [a, b] and turns an
// integrand ~ (t-a)^e into ~ tau^{m(1+e)-1}; m = 3/(1+e) makes that tau^2.
// m is capped so extreme exponents cannot underflow the transform.
IntegralResult integrate_from_left(const std::function<double(double)>& f, double a, double b,
                                   double e, const QuadratureConfig& cfg) {
    if (e <= -1.0) throw domain_error("integrate_adaptive: endpoint exponent must be > -1");
    const double m = std::min(3.0 / (1.0 + e), 50.0);
    const double tau_hi = std::pow(b - a, 1.0 / m);
    auto g = [&](double tau) {
        const double t = a + std::pow(tau, m);
        if (t <= a || t >= b) return 0.0;  // guard endpoint roundoff
        return f(t) * m * std::pow(tau, m - 1.0);
    };
    return detail::integrate_core(g, 0.0, tau_hi, cfg);
}

IntegralResult integrate_from_right(const std::function<double(double)>& f, double a, double b,
                                    double e, const QuadratureConfig& cfg) {
    if (e <= -1.0) throw domain_error("integrate_adaptive: endpoint exponent must be > -1");
    const double m = std::min(3.0 / (1.0 + e), 50.0);
    const double tau_hi = std::pow(b - a, 1.0 / m);
    auto g = [&](double tau) {
        const double t = b - std::pow(tau, m);
        if (t <= a || t >= b) return 0.0;
        return f(t) * m * std::pow(tau, m - 1.0);
    };
    return detail::integrate_core(g, 0.0, tau_hi, cfg);
}

}  // namespace

IntegralResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureConfig& cfg, SingularityHint hint) {
    cfg.validate();
    if (b < a) {
        IntegralResult r = integrate_adaptive(f, b, a, cfg, {hint.right, hint.left});
        return {-r.value, r.err};
    }
    const bool left = hint.left != 0.0;
    const bool right = hint.right != 0.0;
    if (!left && !right) return detail::integrate_core(f, a, b, cfg);
    if (left && !right) return integrate_from_left(f, a, b, hint.left, cfg);
    if (!left && right) return integrate_from_right(f, a, b, hint.right, cfg);
    const double mid = 0.5 * (a + b);
    IntegralResult l = integrate_from_left(f, a, mid, hint.left, cfg);
    IntegralResult r = integrate_from_right(f, mid, b, hint.right, cfg);
    return {l.value + r.value, l.err + r.err};
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

double find_root(const std::function<double(double)>& g, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw validation_error("find_root: tol must be > 0");
    if (hi < lo) std::swap(lo, hi);
    double flo = g(lo);
    double fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream os;
        os << "find_root: no sign change on [" << lo << ", " << hi << "]";
        throw bracket_error(os.str());
    }
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        // secant candidate, safeguarded against leaving the bracket
        double x = lo - flo * (hi - lo) / (fhi - flo);
        const double margin = 0.01 * (hi - lo);
        if (!(x > lo + margin) || !(x < hi - margin)) x = 0.5 * (lo + hi);
        const double fx = g(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Even Taylor coefficients
// ---------------------------------------------------------------------------

namespace {

// Newton divided differences f[s_0 .. s_j] on uniform nodes s_k = k*h.
std::vector<double> divided_diffs(const std::function<double(double)>& B, int order, double h) {
    std::vector<double> tab(order + 1);
    for (int k = 0; k <= order; ++k) tab[k] = B(k * h);
    std::vector<double> out(order + 1);
    out[0] = tab[0];
    for (int level = 1; level <= order; ++level) {
        for (int k = 0; k <= order - level; ++k)
            tab[k] = (tab[k + 1] - tab[k]) / (level * h);
        out[level] = tab[0];
    }
    return out;
}

}  // namespace

namespace detail {

TaylorCoeffs taylor_even_coeffs_impl(const std::function<double(double)>& A, int order,
                                     double h0, double noise, bool throw_on_noise) {
    if (order < 0 || order > 3) throw domain_error("taylor_even_coeffs: order must be in [0, 3]");
    if (!(h0 > 0.0)) throw validation_error("taylor_even_coeffs: h0 must be > 0");

    TaylorCoeffs out;
    out.a.assign(order + 1, 0.0);
    out.err.assign(order + 1, 0.0);
    out.a[0] = A(0.0);
    if (order == 0) return out;

    auto B = [&](double s) { return s == 0.0 ? out.a[0] : A(std::sqrt(s)); };

    // three step-halved levels; divided differences have an error series in
    // integer powers of h, so the classic ratio-2 Richardson triangle applies
    const int depth = 3;
    std::vector<std::vector<double>> level(depth);
    double h = h0 * h0;
    for (int L = 0; L < depth; ++L, h *= 0.5) level[L] = divided_diffs(B, order, h);

    for (int j = 1; j <= order; ++j) {
        double t[depth][depth];
        for (int L = 0; L < depth; ++L) t[L][0] = level[L][j];
        for (int k = 1; k < depth; ++k) {
            const double f = std::pow(2.0, k);
            for (int L = k; L < depth; ++L)
                t[L][k] = (f * t[L][k - 1] - t[L - 1][k - 1]) / (f - 1.0);
        }
        out.a[j] = t[depth - 1][depth - 1];
        // conservative: last extrapolation step plus the previous diagonal
        // gap, so slower-than-h^k (fractional-power) convergence is covered
        out.err[j] = std::abs(t[depth - 1][depth - 1] - t[depth - 1][depth - 2]) +
                     std::abs(t[depth - 1][depth - 1] - t[depth - 2][depth - 2]);
        if (noise > 0.0) {
            // divided-difference noise amplification at the finest step
            const double h_fine = h0 * h0 * std::pow(0.5, depth - 1);
            double fact = 1.0;
            for (int k = 1; k <= j; ++k) fact *= k;
            const double amp = noise * std::pow(2.0, j) / (fact * std::pow(h_fine, j));
            out.err[j] += amp;
            if (throw_on_noise && amp > 0.5 * std::abs(out.a[j]) + 1e-300) {
                std::ostringstream os;
                os << "taylor_even_coeffs: noise " << noise << " swamps coefficient a_" << j
                   << "; increase mc_samples";
                throw precision_error(os.str());
            }
        }
    }
    return out;
}

}  // namespace detail

TaylorCoeffs taylor_even_coeffs(const std::function<double(double)>& A, int order, double h0,
                                double noise) {
    return detail::taylor_even_coeffs_impl(A, order, h0, noise, true);
}

// ---------------------------------------------------------------------------
// Cancellation-free elementary differences
// ---------------------------------------------------------------------------

double binom_series_rem(double x, double a, int k_min) {
    if (!(x > -1.0)) throw domain_error("binom_series_rem: x must be > -1");
    if (std::abs(x) > 0.5) {
        double v = std::pow(1.0 + x, a) - 1.0;
        if (k_min >= 2) v -= a * x;
        return v;
    }
    // sum_{k >= k_min} C(a, k) x^k
    double acc = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 80; ++k) {
        term *= (a - (k - 1)) / k * x;
        if (k >= k_min) {
            acc += term;
            if (std::abs(term) < 1e-22 * (std::abs(acc) + 1e-300)) break;
        }
        if (term == 0.0) break;
    }
    return acc;
}

double binom_series_rem_scaled(double x, double a, int k_min) {
    if (std::abs(x) > 0.5)
        throw domain_error("binom_series_rem_scaled: needs |x| <= 0.5");
    // coefficient C(a, k_min), then the series in x
    double coef = 1.0;
    for (int k = 1; k <= k_min; ++k) coef *= (a - (k - 1)) / k;
    double acc = 0.0, term = coef;
    for (int k = k_min; k <= 90; ++k) {
        acc += term;
        term *= (a - k) / (k + 1) * x;
        if (std::abs(term) < 1e-22 * (std::abs(acc) + 1e-300)) break;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Cubic spline
// ---------------------------------------------------------------------------

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw validation_error("CubicSpline: need >= 2 matching nodes");
    m_.assign(n, 0.0);
    if (n < 4) return;  // linear / too few nodes for not-a-knot: fall back to m = 0

    // not-a-knot spline: solve for the interior second derivatives m_1..m_{n-2}
    // with the end conditions m_0, m_{n-1} expressed by third-derivative
    // continuity at x_1 and x_{n-2}
    const std::size_t k = n - 2;  // unknowns
    std::vector<double> lower(k, 0.0), diag(k, 0.0), upper(k, 0.0), rhs(k, 0.0);
    auto h = [&](std::size_t i) { return x_[i + 1] - x_[i]; };
    auto d = [&](std::size_t i) { return (y_[i + 1] - y_[i]) / h(i); };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t r = i - 1;
        lower[r] = h(i - 1);
        diag[r] = 2.0 * (h(i - 1) + h(i));
        upper[r] = h(i);
        rhs[r] = 6.0 * (d(i) - d(i - 1));
    }
    {   // m_0 = m_1 - (h0/h1)(m_2 - m_1)
        const double w = h(0) / h(1);
        diag[0] += h(0) * (1.0 + w);
        upper[0] -= h(0) * w;
    }
    {   // m_{n-1} = m_{n-2} + (h_{n-2}/h_{n-3})(m_{n-2} - m_{n-3})
        const double w = h(n - 2) / h(n - 3);
        diag[k - 1] += h(n - 2) * (1.0 + w);
        lower[k - 1] -= h(n - 2) * w;
    }
    // Thomas solve
    for (std::size_t r = 1; r < k; ++r) {
        const double w = lower[r] / diag[r - 1];
        diag[r] -= w * upper[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    m_[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t r = k - 1; r >= 1; --r) {
        m_[r] = (rhs[r - 1] - upper[r - 1] * m_[r + 1]) / diag[r - 1];
        if (r == 1) break;
    }
    m_[0] = m_[1] - (h(0) / h(1)) * (m_[2] - m_[1]);
    m_[n - 1] = m_[n - 2] + (h(n - 2) / h(n - 3)) * (m_[n - 2] - m_[n - 3]);
}

double CubicSpline::operator()(double t) const {
    if (x_.empty()) throw validation_error("CubicSpline: empty");
    if (t <= x_.front()) t = x_.front();
    if (t >= x_.back()) t = x_.back();
    std::size_t hi = std::upper_bound(x_.begin(), x_.end(), t) - x_.begin();
    if (hi == 0) hi = 1;
    if (hi >= x_.size()) hi = x_.size() - 1;
    const std::size_t lo = hi - 1;
    const double h = x_[hi] - x_[lo];
    const double u = (t - x_[lo]) / h;
    const double v = 1.0 - u;
    return v * y_[lo] + u * y_[hi] +
           h * h / 6.0 * ((v * v * v - v) * m_[lo] + (u * u * u - u) * m_[hi]);
}

// ---------------------------------------------------------------------------
// Determinism helpers
// ---------------------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cbplab
