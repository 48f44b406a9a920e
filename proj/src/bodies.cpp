#include "cbplab/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace cbplab {

namespace {

double sq(double x) { return x * x; }

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// split |x| into bulk (first 2n-2 coords) and pole (last pair) radii
void biaxial_radii(std::span<const double> x, double& ry, double& rybar) {
    const std::size_t d = x.size();
    double sy = 0.0;
    for (std::size_t i = 0; i + 2 < d; ++i) sy += x[i] * x[i];
    ry = std::sqrt(sy);
    rybar = std::sqrt(sq(x[d - 2]) + sq(x[d - 1]));
}

// FNV-1a 64 over the canonical spec dump
std::string fnv_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace

// ---------------------------------------------------------------------------
// CounterexampleParams
// ---------------------------------------------------------------------------

void CounterexampleParams::validate() const {
    if (n < 3) throw validation_error("counterexample: n must be >= 3");
    if (!(alpha > 2.0 * n - 7.0 && alpha < 2.0 * n - 6.0)) {
        std::ostringstream os;
        os << "counterexample: alpha=" << alpha << " outside (2n-7, 2n-6) = (" << 2 * n - 7
           << ", " << 2 * n - 6 << ")";
        throw validation_error(os.str());
    }
    if (!(N > 0.0)) throw validation_error("counterexample: N must be > 0");
    const double qq = q();
    if (!(qq > 2.0 && qq < 3.0))
        throw validation_error("counterexample: derived q = 2n-alpha-4 not in (2,3)");
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

void Body::finish(nlohmann::json spec) {
    spec_ = std::move(spec);
    hash_ = fnv_hash(spec_.dump());
}

Body Body::ball(int n, double radius) {
    if (n < 1) throw validation_error("euclidean_ball: n must be >= 1");
    if (!(radius > 0.0)) throw validation_error("euclidean_ball: radius must be > 0");
    Body b;
    b.family_ = BodyFamily::euclidean_ball;
    b.n_ = n;
    b.radius_ = radius;
    b.biaxial_ = true;
    b.convex_asserted_ = true;
    b.r_min_ = b.r_max_ = radius;
    // profile view of the ball: f(t) = sqrt(R^2 - t^2) on [0, R]
    b.poly_ = {radius * radius, -1.0};
    b.exponent_ = 0.5;
    b.support_ = radius;
    b.finish({{"family", "euclidean_ball"}, {"n", n}, {"radius", radius}});
    return b;
}

Body Body::complex_lp(int n, double r) {
    if (n < 1) throw validation_error("complex_lp: n must be >= 1");
    if (!(r >= 1.0)) throw validation_error("complex_lp: exponent r must be >= 1");
    Body b;
    b.family_ = BodyFamily::complex_lp;
    b.n_ = n;
    b.lp_r_ = r;
    b.biaxial_ = false;
    b.convex_asserted_ = true;
    // l_r vs l_2 comparison on the modulus vector of length n
    const double c = std::pow(static_cast<double>(n), 0.5 - 1.0 / r);
    b.r_min_ = std::min(1.0, c);
    b.r_max_ = std::max(1.0, c);
    b.finish({{"family", "complex_lp"}, {"n", n}, {"r", r}});
    return b;
}

Body Body::biaxial_profile(int n, std::vector<double> poly, double exponent, double support) {
    if (n < 2) throw validation_error("biaxial_profile: n must be >= 2");
    if (poly.empty() || !(poly[0] > 0.0))
        throw validation_error("biaxial_profile: poly(0) must be > 0");
    if (!(exponent > 0.0)) throw validation_error("biaxial_profile: exponent must be > 0");
    if (!(support > 0.0)) throw validation_error("biaxial_profile: support must be > 0");
    Body b;
    b.family_ = BodyFamily::biaxial_profile;
    b.n_ = n;
    b.poly_ = std::move(poly);
    b.exponent_ = exponent;
    b.support_ = support;
    b.biaxial_ = true;
    b.convex_asserted_ = false;  // probed, not assumed
    for (int i = 0; i < 512; ++i) {
        const double t = support * i / 512.0;
        double s = t * t, acc = 0.0, pw = 1.0;
        for (double c : b.poly_) {
            acc += c * pw;
            pw *= s;
        }
        if (!(acc > 0.0))
            throw validation_error("biaxial_profile: poly(t^2) must stay > 0 on [0, support)");
    }
    {
        // shell bounds: outer from max over the boundary of f(t)^2 + t^2,
        // inner from the radial function along the canonical geodesic
        double m2 = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 4096; ++i) {
            const double t = support * i / 4096.0;
            const double f = b.profile_radius(t);
            m2 = std::max(m2, f * f + t * t);
        }
        for (int i = 0; i <= 4096; ++i) {
            const double psi = (M_PI / 2) * i / 4096.0;
            lo = std::min(lo, b.radial_psi(psi));
        }
        b.r_max_ = std::sqrt(m2) * (1.0 + 1e-9);
        b.r_min_ = lo * (1.0 - 1e-9);
    }
    nlohmann::json spec = {{"family", "biaxial_profile"},
                           {"n", n},
                           {"coeffs", b.poly_},
                           {"exponent", b.exponent_},
                           {"support", support}};
    b.finish(std::move(spec));
    return b;
}

Body Body::counterexample(int n, double alpha, double N) {
    CounterexampleParams params{n, alpha, N};
    params.validate();
    // f(t) = (1 - t^2 - N t^4)^{1/(2n-alpha-2)} on [0, a_N]
    const double aN = std::sqrt((std::sqrt(1.0 + 4.0 * N) - 1.0) / (2.0 * N));
    Body b = biaxial_profile(n, {1.0, -1.0, -N}, 1.0 / (2.0 * n - alpha - 2.0), aN);
    b.family_ = BodyFamily::counterexample;
    b.cex_ = std::make_shared<CounterexampleParams>(params);
    b.finish({{"family", "counterexample"}, {"n", n}, {"alpha", alpha}, {"N", N}});
    return b;
}

Body Body::dilate(double lambda, Body inner) {
    if (!(lambda > 0.0)) throw validation_error("dilate: lambda must be > 0");
    Body b;
    b.family_ = BodyFamily::dilate;
    b.n_ = inner.n_;
    b.lambda_ = lambda;
    b.biaxial_ = inner.biaxial_;
    b.convex_asserted_ = inner.convex_asserted_;
    b.r_min_ = lambda * inner.r_min_;
    b.r_max_ = lambda * inner.r_max_;
    nlohmann::json spec = {{"family", "dilate"}, {"lambda", lambda}, {"inner", inner.spec()}};
    b.inner_ = std::make_shared<const Body>(std::move(inner));
    b.finish(std::move(spec));
    return b;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double Body::profile_support() const {
    if (family_ == BodyFamily::dilate) return lambda_ * inner_->profile_support();
    if (!biaxial_) throw domain_error("profile_support: body is not biaxial");
    return support_;
}

double Body::profile_radius(double t) const {
    if (family_ == BodyFamily::dilate) return lambda_ * inner_->profile_radius(t / lambda_);
    if (!biaxial_) throw domain_error("profile_radius: body is not biaxial");
    if (t > support_) return 0.0;
    const double s = t * t;
    double acc = 0.0, pw = 1.0;
    for (double c : poly_) {
        acc += c * pw;
        pw *= s;
    }
    if (acc <= 0.0) return 0.0;
    return std::pow(acc, exponent_);
}

double Body::profile_fprime0() const {
    if (family_ == BodyFamily::dilate) {
        // f_l(t) = l f(t/l): d/d(t^2) at 0 scales by 1/l
        return inner_->profile_fprime0() / lambda_;
    }
    if (!biaxial_) throw domain_error("profile_fprime0: body is not biaxial");
    if (poly_.size() < 2) return 0.0;
    return exponent_ * std::pow(poly_[0], exponent_ - 1.0) * poly_[1];
}

std::vector<double> Body::profile_poly() const {
    if (family_ == BodyFamily::dilate) {
        std::vector<double> poly = inner_->profile_poly();
        const double e = inner_->profile_exponent();
        // f_l(t) = l f(t/l) = [l^{1/e} poly(u/l^2)]^e
        const double base = std::pow(lambda_, 1.0 / e);
        double inv = 1.0;
        for (std::size_t k = 0; k < poly.size(); ++k) {
            poly[k] *= base * inv;
            inv /= lambda_ * lambda_;
        }
        return poly;
    }
    if (!biaxial_) throw domain_error("profile_poly: body is not biaxial");
    return poly_;
}

double Body::profile_exponent() const {
    if (family_ == BodyFamily::dilate) return inner_->profile_exponent();
    if (!biaxial_) throw domain_error("profile_exponent: body is not biaxial");
    return exponent_;
}

double Body::dilation_scale() const {
    return family_ == BodyFamily::dilate ? lambda_ * inner_->dilation_scale() : 1.0;
}

const Body& Body::base_body() const {
    return family_ == BodyFamily::dilate ? inner_->base_body() : *this;
}

double Body::norm(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim())
        throw validation_error("norm: point dimension does not match the body");
    switch (family_) {
        case BodyFamily::euclidean_ball:
            return norm2(x) / radius_;
        case BodyFamily::complex_lp: {
            double acc = 0.0;
            for (int k = 0; k < n_; ++k)
                acc += std::pow(std::sqrt(sq(x[2 * k]) + sq(x[2 * k + 1])), lp_r_);
            return std::pow(acc, 1.0 / lp_r_);
        }
        case BodyFamily::dilate:
            return inner_->norm(x) / lambda_;
        case BodyFamily::biaxial_profile:
        case BodyFamily::counterexample: {
            double ry, rybar;
            biaxial_radii(x, ry, rybar);
            if (ry == 0.0 && rybar == 0.0) return 0.0;
            if (ry == 0.0) return rybar / support_;
            if (rybar == 0.0) return ry / profile_radius(0.0);
            // smallest s with rybar/s <= support and ry/s <= f(rybar/s);
            // the pole constraint alone gives the corner value rybar/support
            const double s_corner = rybar / support_;
            if (ry / s_corner <= profile_radius(support_)) return s_corner;
            auto g = [&](double s) { return profile_radius(rybar / s) - ry / s; };
            double hi = std::max(s_corner, ry / profile_radius(0.0));
            int guard = 0;
            while (g(hi) < 0.0 && guard++ < 200) hi *= 1.5;
            const double r = norm2(x);
            const double tol = 1e-14 * std::max(1.0, r / r_min_);
            return find_root(g, s_corner, hi, tol);
        }
    }
    throw domain_error("norm: unknown family");
}

bool Body::contains(std::span<const double> x) const {
    switch (family_) {
        case BodyFamily::euclidean_ball:
            return norm2(x) <= radius_;
        case BodyFamily::complex_lp:
            return norm(x) <= 1.0;
        case BodyFamily::dilate: {
            std::vector<double> scaled(x.begin(), x.end());
            for (double& v : scaled) v /= lambda_;
            return inner_->contains(scaled);
        }
        case BodyFamily::biaxial_profile:
        case BodyFamily::counterexample: {
            double ry, rybar;
            biaxial_radii(x, ry, rybar);
            return rybar <= support_ && ry <= profile_radius(rybar);
        }
    }
    return false;
}

double Body::radial_psi(double psi) const {
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    switch (family_) {
        case BodyFamily::euclidean_ball:
            return radius_;
        case BodyFamily::dilate:
            return lambda_ * inner_->radial_psi(psi);
        case BodyFamily::complex_lp: {
            std::vector<double> dir = canonical_direction(n_, psi);
            return 1.0 / norm(dir);
        }
        case BodyFamily::biaxial_profile:
        case BodyFamily::counterexample: {
            if (std::abs(c) < 1e-15) return support_;
            if (std::abs(s) < 1e-15) return profile_radius(0.0);
            // rho solves rho*cos(psi) = f(rho*sin(psi)), capped by the pole support
            const double cap = support_ / s;
            auto g = [&](double rho) { return profile_radius(rho * s) - rho * c; };
            if (g(cap) >= 0.0) return cap;
            return find_root(g, 0.0, cap, 1e-15 * std::max(1.0, cap));
        }
    }
    throw domain_error("radial_psi: unknown family");
}

// ---------------------------------------------------------------------------
// Spec parsing
// ---------------------------------------------------------------------------

namespace {

void reject_unknown(const nlohmann::json& spec, std::initializer_list<const char*> allowed) {
    for (auto it = spec.begin(); it != spec.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) throw validation_error("body spec: unknown field '" + it.key() + "'");
    }
}

double require_number(const nlohmann::json& spec, const char* key) {
    if (!spec.contains(key))
        throw validation_error(std::string("body spec: missing field '") + key + "'");
    if (!spec[key].is_number())
        throw validation_error(std::string("body spec: field '") + key + "' must be a number");
    return spec[key].get<double>();
}

int require_int(const nlohmann::json& spec, const char* key) {
    if (!spec.contains(key))
        throw validation_error(std::string("body spec: missing field '") + key + "'");
    if (!spec[key].is_number_integer())
        throw validation_error(std::string("body spec: field '") + key + "' must be an integer");
    return spec[key].get<int>();
}

}  // namespace

Body make_body(const nlohmann::json& spec) {
    if (!spec.is_object()) throw validation_error("body spec: expected a JSON object");
    if (!spec.contains("family")) throw validation_error("body spec: missing field 'family'");
    if (!spec["family"].is_string())
        throw validation_error("body spec: field 'family' must be a string");
    const std::string family = spec["family"].get<std::string>();
    if (family == "euclidean_ball") {
        reject_unknown(spec, {"family", "n", "radius"});
        const double radius = spec.contains("radius") ? require_number(spec, "radius") : 1.0;
        return Body::ball(require_int(spec, "n"), radius);
    }
    if (family == "complex_lp") {
        reject_unknown(spec, {"family", "n", "r"});
        return Body::complex_lp(require_int(spec, "n"), require_number(spec, "r"));
    }
    if (family == "biaxial_profile") {
        reject_unknown(spec, {"family", "n", "coeffs", "exponent", "support"});
        if (!spec.contains("coeffs") || !spec["coeffs"].is_array())
            throw validation_error("body spec: field 'coeffs' must be an array");
        std::vector<double> coeffs = spec["coeffs"].get<std::vector<double>>();
        return Body::biaxial_profile(require_int(spec, "n"), std::move(coeffs),
                                     require_number(spec, "exponent"),
                                     require_number(spec, "support"));
    }
    if (family == "counterexample") {
        reject_unknown(spec, {"family", "n", "alpha", "N"});
        return Body::counterexample(require_int(spec, "n"), require_number(spec, "alpha"),
                                    require_number(spec, "N"));
    }
    if (family == "dilate") {
        reject_unknown(spec, {"family", "lambda", "inner"});
        if (!spec.contains("inner"))
            throw validation_error("body spec: missing field 'inner'");
        return Body::dilate(require_number(spec, "lambda"), make_body(spec["inner"]));
    }
    throw validation_error("body spec: unknown family '" + family + "'");
}

Body make_body_from_string(const std::string& text) {
    nlohmann::json spec;
    try {
        spec = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("body spec: invalid JSON: ") + e.what());
    }
    return make_body(spec);
}

// ---------------------------------------------------------------------------
// Rotations and probes
// ---------------------------------------------------------------------------

std::vector<double> r_theta_rotate(std::span<const double> x, double theta) {
    if (x.size() % 2 != 0) throw validation_error("r_theta_rotate: dimension must be even");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k + 1 < x.size(); k += 2) {
        out[k] = c * x[k] - s * x[k + 1];
        out[k + 1] = s * x[k] + c * x[k + 1];
    }
    return out;
}

InvarianceReport check_invariance(const Body& body, int sample_count, double tol,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    InvarianceReport rep;
    rep.samples = sample_count;
    rep.tol = tol;
    for (int i = 0; i < sample_count; ++i) {
        std::vector<double> x(body.dim());
        for (double& v : x) v = gauss(rng);
        const double nx = body.norm(x);
        if (nx <= 0.0) continue;
        const std::vector<double> xr = r_theta_rotate(x, angle(rng));
        const double nr = body.norm(xr);
        rep.max_rel_deviation = std::max(rep.max_rel_deviation, std::abs(nr - nx) / nx);
    }
    rep.pass = rep.max_rel_deviation <= tol;
    return rep;
}

ConvexityProbe convexity_probe(const Body& body, int pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    ConvexityProbe probe;
    probe.pairs = pairs;
    for (int i = 0; i < pairs; ++i) {
        std::vector<double> x(body.dim()), y(body.dim()), xy(body.dim());
        for (int k = 0; k < body.dim(); ++k) {
            x[k] = gauss(rng);
            y[k] = gauss(rng);
            xy[k] = x[k] + y[k];
        }
        const double excess = body.norm(xy) - body.norm(x) - body.norm(y);
        probe.worst_excess = std::max(probe.worst_excess, excess);
        if (excess > 1e-9 * (body.norm(x) + body.norm(y))) ++probe.violations;
    }
    return probe;
}

// ---------------------------------------------------------------------------
// Volume
// ---------------------------------------------------------------------------

std::vector<double> canonical_direction(int n, double psi) {
    std::vector<double> dir(2 * n, 0.0);
    dir[0] = std::cos(psi);
    dir[2 * n - 2] = std::sin(psi);
    return dir;
}

VolumeResult volume(const Body& body, const QuadratureConfig& cfg) {
    cfg.validate();
    const int n = body.n();
    VolumeResult out;
    if (body.biaxial()) {
        // (1/2n) |S^{2n-3}| |S^1| int_0^{pi/2} rho(psi)^{2n} cos^{2n-3} sin dpsi
        auto f = [&](double psi) {
            const double rho = body.radial_psi(psi);
            return std::pow(rho, 2.0 * n) * std::pow(std::cos(psi), 2.0 * n - 3.0) *
                   std::sin(psi);
        };
        IntegralResult r = integrate_adaptive(f, 0.0, M_PI / 2.0, cfg);
        out.value = sphere_surface(2 * n - 2) * 2.0 * M_PI * r.value / (2.0 * n);
        out.sigma = 0.0;
        out.route = "biaxial_1d";
        return out;
    }
    const long samples = cfg.mc_samples;
    double sum = 0.0, sum2 = 0.0;
    std::mt19937_64 rng(derive_seed(cfg.rng_seed, 0x766f6cULL));
    std::normal_distribution<double> gauss;
    std::vector<double> dir(body.dim());
    for (long i = 0; i < samples; ++i) {
        double norm_sq = 0.0;
        for (double& v : dir) {
            v = gauss(rng);
            norm_sq += v * v;
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : dir) v *= inv;
        const double val = std::pow(body.norm(dir), -2.0 * n);
        sum += val;
        sum2 += val * val;
    }
    const double mean = sum / samples;
    const double var = std::max(0.0, sum2 / samples - mean * mean);
    const double scale = sphere_surface(2 * n) / (2.0 * n);
    out.value = scale * mean;
    out.sigma = scale * std::sqrt(var / samples);
    out.route = "sphere_mc";
    if (out.sigma > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value)))
        out.warnings.push_back("mc sigma above requested tolerance");
    return out;
}

}  // namespace cbplab
