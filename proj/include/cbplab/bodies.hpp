#pragma once

// Body families on R^{2n} = C^n, given by their Minkowski functionals.
//
// All families are origin symmetric and invariant under the simultaneous
// rotation R_theta of every complex coordinate pair. Coordinates follow the
// complex identification (x_{11}, x_{12}, ..., x_{n1}, x_{n2}); biaxial
// bodies distinguish the LAST pair (index 2n-2, 2n-1), writing a point as
// x = (y, ybar) with y the bulk block of dimension 2n-2, and are cut out by
// |y|_2 <= f(|ybar|_2) with f(t) = poly(t^2)^e supported on [0, a].

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbplab/numerics.hpp"

namespace cbplab {

enum class BodyFamily { euclidean_ball, complex_lp, biaxial_profile, counterexample, dilate };

struct CounterexampleParams {
    int n = 3;
    double alpha = 0.0;
    double N = 1.0;

    double q() const { return 2.0 * n - alpha - 4.0; }
    // requires n >= 3, alpha in (2n-7, 2n-6), N > 0; then q in (2, 3)
    void validate() const;
};

class Body {
public:
    static Body ball(int n, double radius = 1.0);
    static Body complex_lp(int n, double r);
    static Body biaxial_profile(int n, std::vector<double> poly, double exponent, double support);
    static Body counterexample(int n, double alpha, double N);
    static Body dilate(double lambda, Body inner);

    int n() const { return n_; }
    int dim() const { return 2 * n_; }
    BodyFamily family() const { return family_; }

    // Minkowski functional min {a >= 0 : x in aK}; homogeneous of degree 1.
    double norm(std::span<const double> x) const;
    // exact membership test ||x|| <= 1 (no root solve for profile families)
    bool contains(std::span<const double> x) const;
    // radial function along the canonical biaxial geodesic,
    // direction (cos psi) e_1 + (sin psi) e_{2n-1}
    double radial_psi(double psi) const;

    bool r_theta_invariant() const { return true; }
    bool biaxial() const { return biaxial_; }
    bool convex_asserted() const { return convex_asserted_; }

    // bounding shell: r_min * ||x|| <= |x|_2 <= r_max * ||x||
    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }

    // biaxial profile data (throws domain_error for non-biaxial families)
    double profile_support() const;    // a: support of f in the pole plane
    double profile_radius(double t) const;  // f(t), 0 beyond the support
    // d f / d(t^2) at t = 0 (used for exact slice Taylor data)
    double profile_fprime0() const;
    // dilation-adjusted data of f = poly(t^2)^exponent for biaxial families:
    // a dilation by lambda turns poly_k into lambda^{1/e - 2k} poly_k
    std::vector<double> profile_poly() const;
    double profile_exponent() const;

    // dilation bookkeeping: total scale factor and the undilated base body
    double dilation_scale() const;
    const Body& base_body() const;

    const CounterexampleParams* counterexample_params() const {
        return cex_ ? cex_.get() : nullptr;
    }
    double lp_exponent() const { return lp_r_; }
    double ball_radius() const { return radius_; }

    nlohmann::json spec() const { return spec_; }
    const std::string& spec_hash() const { return hash_; }

private:
    Body() = default;
    void finish(nlohmann::json spec);

    BodyFamily family_ = BodyFamily::euclidean_ball;
    int n_ = 3;
    bool biaxial_ = false;
    bool convex_asserted_ = false;
    double r_min_ = 1.0, r_max_ = 1.0;

    double radius_ = 1.0;                  // euclidean_ball
    double lp_r_ = 2.0;                    // complex_lp
    std::vector<double> poly_;             // biaxial: poly in s = t^2
    double exponent_ = 1.0;                // biaxial: f = poly(s)^exponent
    double support_ = 1.0;                 // biaxial: support of f
    std::shared_ptr<CounterexampleParams> cex_;
    double lambda_ = 1.0;                  // dilate
    std::shared_ptr<const Body> inner_;    // dilate

    nlohmann::json spec_;
    std::string hash_;
};

// Parses a body spec document. Unknown fields are rejected.
Body make_body(const nlohmann::json& spec);
Body make_body_from_string(const std::string& text);

// Applies the same counterclockwise 2x2 rotation to every coordinate pair.
std::vector<double> r_theta_rotate(std::span<const double> x, double theta);

struct InvarianceReport {
    double max_rel_deviation = 0.0;
    int samples = 0;
    bool pass = false;
    double tol = 0.0;
};

// Max over random (x, theta) samples of | ||R_theta x|| - ||x|| | / ||x||.
InvarianceReport check_invariance(const Body& body, int sample_count, double tol,
                                  std::uint64_t seed);

struct ConvexityProbe {
    int pairs = 0;
    int violations = 0;
    double worst_excess = 0.0;  // max of ||x+y|| - ||x|| - ||y|| over samples
};

// Empirical triangle-inequality probe on random pairs.
ConvexityProbe convexity_probe(const Body& body, int pairs, std::uint64_t seed);

struct VolumeResult {
    double value = 0.0;
    double sigma = 0.0;  // statistical error when route == "sphere_mc"
    std::string route;   // "biaxial_1d" or "sphere_mc"
    std::vector<std::string> warnings;
};

// Vol_{2n}(K) = (1/2n) int_{S^{2n-1}} ||theta||^{-2n} dtheta. Biaxial bodies
// reduce to a 1-D angle integral; everything else is Monte Carlo on the
// sphere with a reported standard error.
VolumeResult volume(const Body& body, const QuadratureConfig& cfg);

// Direction (cos psi) e_1 + (sin psi) e_{2n-1} in R^{2n}.
std::vector<double> canonical_direction(int n, double psi);

}  // namespace cbplab
