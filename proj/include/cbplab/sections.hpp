#pragma once

// Complex hyperplane frames and the weighted parallel section function
//
//   A_{D,H,p}(u) = int_{D cap H_u} |x|_2^{-p} dx,   u in R^2,
//
// realized as radial profiles t -> A(t) with a closed-form backend for
// biaxial bodies sliced at the pole frame (and for balls at any frame) and a
// Monte Carlo backend for everything else. Profiles carry their support
// bound, Taylor data at 0 and, for the MC backend, a seeded value grid with
// spline interpolation.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cbplab/bodies.hpp"
#include "cbplab/numerics.hpp"

namespace cbplab {

struct HyperplaneFrame {
    std::vector<double> xi;        // e_1
    std::vector<double> xi_perp;   // e_2 = R_{pi/2} xi
    std::vector<std::vector<double>> basis;  // orthonormal basis of H_xi, 2n-2 vectors
    int n = 0;

    // true when xi lies in the distinguished pole plane of a biaxial body
    bool is_pole_frame() const;
};

// Builds the canonical frame: e_2 = R_{pi/2} xi exactly, basis by
// Gram-Schmidt completion. |xi|_2 must be 1 within 1e-12.
HyperplaneFrame hyperplane_frame(std::span<const double> xi);

struct McEstimate {
    double value = 0.0;
    double sigma = 0.0;
};

// Grid evaluations pass their t-index here so streams are decoupled from
// worker scheduling; standalone calls leave the sentinel and get a stream
// derived from the point coordinates.
inline constexpr std::uint64_t kPointIndexFromU = ~0ULL;

// Weighted slice integral at u = u1 e_1 + u2 e_2 by importance-sampled Monte
// Carlo: radius density ~ r^{2n-3-max(p,0)} inside the bounding shell,
// uniform direction on S^{2n-3}, rejection against ||x||_D <= 1.
McEstimate mc_slice_integral(const Body& body, const HyperplaneFrame& frame, double p,
                             double u1, double u2, const QuadratureConfig& cfg,
                             std::uint64_t point_index = kPointIndexFromU);

// A(t) at u = t e_1. Convenience wrapper over mc_slice_integral.
McEstimate a_function_mc(const Body& body, const HyperplaneFrame& frame, double p, double t,
                         const QuadratureConfig& cfg);

// Closed-form (1-D quadrature) evaluation for biaxial bodies at the pole
// frame: A(t) = |S^{2n-3}| int_0^{f(t)} (r^2+t^2)^{-p/2} r^{2n-3} dr.
double a_function_pole(const Body& body, double p, double t, const QuadratureConfig& cfg);

// Deterministic slice integral for a biaxial body at an arbitrary frame
// angle psi. The residual U(n-1) x U(1) symmetry reduces the slice to a 2-D
// quadrature over the in-plane offsets (s1, s2) with the bulk-radial part in
// closed form. Frames with equal pole angle give equal profiles.
double biaxial_frame_slice(const Body& body, double psi, double p, double u,
                           const QuadratureConfig& cfg);

// Support radius of a biaxial body along the canonical direction at angle
// psi: max over the boundary of x . xi(psi).
double biaxial_support(const Body& body, double psi);

class RadialSectionProfile {
public:
    enum class Backend { closed_form_biaxial, monte_carlo };

    static RadialSectionProfile pole(const Body& body, double p, const QuadratureConfig& cfg);
    static RadialSectionProfile monte_carlo(const Body& body, const HyperplaneFrame& frame,
                                            double p, const QuadratureConfig& cfg,
                                            int threads = 1, int grid_points = 33);
    // deterministic general-frame backend for biaxial bodies: a cached grid
    // of biaxial_frame_slice values with spline interpolation
    static RadialSectionProfile quadrature_frame(const Body& body, double psi, double p,
                                                 const QuadratureConfig& cfg, int threads = 1,
                                                 int grid_points = 65);
    // automatic backend: the exact pole machinery for balls (any frame) and
    // biaxial bodies at pole frames, the deterministic 2-D reduction for
    // biaxial bodies at other frames, Monte Carlo for everything else
    static RadialSectionProfile make(const Body& body, const HyperplaneFrame& frame, double p,
                                     const QuadratureConfig& cfg, int threads = 1);

    double value(double t) const;
    double sigma(double t) const;

    double p() const { return p_; }
    double t_max() const { return t_max_; }
    int n() const { return n_; }
    Backend backend() const { return backend_; }
    std::string backend_name() const;
    double noise_level() const { return noise_; }
    bool has_exact_a1() const { return exact_a1_.has_value(); }

    // Taylor coefficients a_0..a_order of A(t) = sum a_j t^{2j}; exact closed
    // forms for a_0 (always) and a_1 (closed-form backend, p < 2n-4) unless
    // numeric_only is set. Computed at construction; cheap to call.
    TaylorCoeffs taylor(int order, bool numeric_only = false) const;

    // A(t) - sum_{j<=d} a_j t^{2j} for d in {0, 1} with the exact a_j. On the
    // closed-form backend this is evaluated cancellation-free (full relative
    // precision down to t -> 0) by splitting the slice integral into a
    // weight-series part and exact power differences of f; the Monte Carlo
    // backend subtracts directly.
    double remainder(double t, int d) const;
    bool has_exact_remainder(int d) const;

private:
    RadialSectionProfile() = default;
    void compute_taylor_cache();

    Backend backend_ = Backend::closed_form_biaxial;
    bool pole_form_ = true;  // exact pole machinery (a0/a1/remainders) applies
    int n_ = 0;
    double p_ = 0.0;
    double t_max_ = 0.0;
    double noise_ = 0.0;
    double a0_exact_ = 0.0;
    std::optional<double> exact_a1_;

    // closed form
    std::shared_ptr<const Body> body_;
    QuadratureConfig cfg_;
    std::vector<double> poly_;  // dilation-adjusted f = poly(t^2)^{e}
    double exponent_ = 1.0;

    // monte carlo
    std::vector<double> grid_t_, grid_a_, grid_sigma_;
    CubicSpline spline_;

    TaylorCoeffs taylor_numeric_, taylor_mixed_;
};

struct SectionResult {
    double value = 0.0;
    double sigma = 0.0;
    std::string route;  // "direct_closed_form" or "direct_mc"
};

// S_CD(xi) = Vol_{2n-2}(D cap H_xi) = A_{D,H_xi,0}(0). The Fourier-analytic
// route lives in the fractional module (section_volume_ft).
SectionResult section_volume(const Body& body, std::span<const double> xi,
                             const QuadratureConfig& cfg, int threads = 1);

// Integral over S^{2n-1} of a biaxially symmetric function F(psi) with
// dmu = |S^{2n-3}| |S^1| cos^{2n-3}(psi) sin(psi) dpsi, psi in [0, pi/2];
// psi is the angle from the bulk block towards the distinguished plane.
double sphere_average_biaxial(const std::function<double(double)>& F, int n,
                              const QuadratureConfig& cfg);

// Two-column profile dump (t, A(t)) with header lines carrying the body spec
// hash, p, t_max and the seed.
void dump_profile(std::ostream& os, const RadialSectionProfile& profile,
                  const std::string& body_hash, std::uint64_t seed, int points = 129);

}  // namespace cbplab
