#pragma once

// Regularized actions < |u|_2^{-q-2} / Gamma(-q/2), A_{D,H,p} > across the
// q-windows, Fourier transforms of weighted norm powers restricted to the
// sphere, the fractional Laplacian of the section function, positive
// definiteness scans, Brunn reports and spherical Parseval residuals.
//
// Window semantics for the radial profile A supported on [0, t_max]:
//   q < 0:          (2 pi / Gamma(-q/2)) int_0^{t_max} t^{-q-1} A(t) dt
//   q = 2d:         (-1)^d pi / (4^d d!) Laplacian^d A(0) = (-1)^d pi d! a_d
//   q in (2d,2d+2): (2 pi / Gamma(-q/2)) [ int t^{-q-1}(A - sum_{j<=d} a_j t^{2j}) dt
//                    - sum_{j<=d} a_j t_max^{2j-q}/(q-2j) ]
// The three agree by analytic continuation; the window formula is evaluated
// through the profile's cancellation-free remainders where available.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbplab/sections.hpp"

namespace cbplab {

enum class QWindow { negative, even_integer, window };

struct FracQuery {
    int n = 0;
    double q = 0.0;
    double p = 0.0;
    QWindow window = QWindow::negative;
    int d = -1;  // window index; q = 2d or q in (2d, 2d+2)

    // exponent of the paired norm power ||x||^{-gamma}; must stay positive
    double gamma() const { return 2.0 * n - q - p - 2.0; }

    // validates q in (-2, 2n-2), p < 2n-2, gamma > 0 and derives the window
    static FracQuery make(int n, double p, double q);
};

// Which a_j enter the window subtraction: the profile's preferred data
// (exact closed forms where available) or the Richardson numerics only.
enum class CoeffSource { preferred, numeric_only };

struct FracActionResult {
    double value = 0.0;
    double err = 0.0;
    FracQuery query;
    std::string window_tag;  // "neg" / "even(d)" / "window(d)"
};

FracActionResult frac_action(const RadialSectionProfile& profile, double q,
                             const QuadratureConfig& cfg,
                             CoeffSource source = CoeffSource::preferred);

struct FtValue {
    double value = 0.0;
    std::string route;  // "a_route" (Fourier value recovered through A) or "closed_form"
    double error = 0.0;
};

// (||x||_D^{-2n+q+p+2} |x|^{-p})^ at xi:
//   2^{q+1} Gamma((q+2)/2) (2n-q-p-2) * frac_action(profile(body, xi, p), q)
FtValue ft_weighted_norm(const RadialSectionProfile& profile, double q,
                         const QuadratureConfig& cfg,
                         CoeffSource source = CoeffSource::preferred);
FtValue ft_weighted_norm(const Body& body, std::span<const double> xi, double p, double q,
                         const QuadratureConfig& cfg, int threads = 1);

// classical radial formula (|x|^{-gamma})^ in R^{2n}, the ball oracle route
double ball_ft_closed_form(int n, double radius, double p, double q);

// S_CD(xi) through Vol_{2n-2}(D cap H_xi) = (||x||^{-2n+2})^(xi) / (4 pi (n-1))
double section_volume_ft(const Body& body, std::span<const double> xi,
                         const QuadratureConfig& cfg, int threads = 1);

// (-Delta)^{alpha/2} S_CD(xi) = (|x|^alpha ||x||^{-2n+2})^(xi) / (4 pi (n-1)),
// routed through ft_weighted_norm with p = -alpha, q = alpha
double frac_laplace_section(const Body& body, std::span<const double> xi, double alpha,
                            const QuadratureConfig& cfg, int threads = 1);

struct PosdefScanResult {
    std::vector<double> psi;
    std::vector<double> value;
    std::vector<double> err;
    std::vector<std::string> route;
    double min_value = 0.0;
    double argmin_psi = 0.0;
    double scale = 0.0;  // max |value| over the grid
};

// Evaluates ft_weighted_norm along the canonical geodesic directions
// xi(psi) = cos(psi) e_1 + sin(psi) e_{2n-1}; the grid minimum is the
// positive-definiteness certificate.
PosdefScanResult posdef_scan(const Body& body, double p, double q,
                             const std::vector<double>& psi_grid, const QuadratureConfig& cfg,
                             int threads = 1);

std::vector<double> uniform_psi_grid(int points);

struct BrunnReport {
    double max_excess = 0.0;   // max over grid of A(t) - A(0)
    double excess_slack = 0.0; // statistical allowance (3 sigma, MC backend)
    double a1 = 0.0;
    double a1_err = 0.0;
    double frac_value = 0.0;
    double frac_err = 0.0;
    double q = 0.0;
    bool max_at_origin = false;
    bool a1_nonpositive = false;
    bool frac_nonnegative = false;
};

// Prop-3 style report: origin maximality of A, sign of the Laplacian proxy
// a_1 and nonnegativity of the regularized action for q in (0, 2).
BrunnReport brunn_report(const Body& body, std::span<const double> xi, double p, double q,
                         int grid_points, const QuadratureConfig& cfg, int threads = 1);

struct ParsevalResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // |lhs-rhs| / max(|lhs|, |rhs|)
    double sigma = 0.0;     // propagated error of the residual
    int psi_points = 0;
};

// Spherical Parseval: int (||x||_K^{-p})^ (||x||_L^{-2n+p})^ over S^{2n-1}
// against (2pi)^{2n} int ||x||_K^{-p} ||x||_L^{-2n+p}; the Fourier factors
// run through ft_weighted_norm with (p=0, q=2n-p-2) and (p=0, q=p-2).
ParsevalResult parseval_residual(const Body& K, const Body& L, double p,
                                 const QuadratureConfig& cfg, int threads = 1,
                                 int psi_points = 17);

}  // namespace cbplab
