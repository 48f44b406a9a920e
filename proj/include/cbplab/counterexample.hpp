#pragma once

// The explicit non-positive-definiteness machinery: the body with profile
// f(t) = (1 - t^2 - N t^4)^{1/(2n-alpha-2)}, its roots a_N and b_N, the
// closed forms at the origin, the sign-certificate integral
//
//   int_0^inf t^{-q-1} (A(t) - A(0) - a_1 t^2) dt,   q = 2n - alpha - 4,
//
// and the N-asymptotics of its pieces.

#include <cstdint>
#include <string>
#include <vector>

#include "cbplab/fractional.hpp"

namespace cbplab {

// first positive root of 1 - t^2 - N t^4 = 0:  a_N = sqrt((sqrt(1+4N)-1)/(2N))
double alpha_root(double N);

// positive root of 1 - t^2 - N t^4 = t^{q+1}, bracketed in (0, a_N)
double beta_root(double N, double q);

struct OriginData {
    double A0 = 0.0;        // |S^{2n-3}| / (2n-alpha-2)
    double a1 = 0.0;        // -|S^{2n-3}| [ 1/(2n-a-2) + a/(2(2n-a-4)) ]
    double a1_display = 0.0;  // the published closed form
                              // -|S^{2n-3}| [ 1/(2n-a-2) + a/(2n-a-4) ]
    double display_over_a1 = 0.0;  // factor-ambiguity diagnostic
};

// Exact origin data of the profile A(t) with weight p = alpha. a1 comes from
// differentiating the slice integral in u = t^2; the published display is
// reported alongside with the multiple it represents (1 at alpha = 0).
OriginData origin_closed_forms(int n, double alpha);

// Profile body for boundary diagnostics: same geometry as the counterexample
// family but only requiring alpha < 2n-4 (e.g. the exactly solvable alpha=0).
Body counterexample_profile_body(int n, double alpha, double N);

enum class CertificateVerdict { negative, nonnegative, indeterminate };

std::string to_string(CertificateVerdict v);

struct CertificateResult {
    int n = 0;
    double alpha = 0.0;
    double N = 0.0;
    double q = 0.0;
    double a_N = 0.0;
    double b_N = 0.0;
    double A0 = 0.0;
    double a1 = 0.0;
    std::string a1_source;  // "closed_form" or "numeric"
    double integral_value = 0.0;
    double err = 0.0;
    double ft_pole_value = 0.0;  // induced Fourier value at the pole direction
    double ft_err = 0.0;
    CertificateVerdict verdict = CertificateVerdict::indeterminate;
};

// Runs the certificate at (n, alpha, N). The verdict is negative/nonnegative
// only when the error bar strictly excludes 0; an indeterminate verdict is a
// valid outcome, not an error.
CertificateResult lemma4_certificate(const CounterexampleParams& params,
                                     const QuadratureConfig& cfg,
                                     CoeffSource a1_source = CoeffSource::preferred);

struct SweepSummary {
    std::vector<CertificateResult> results;
    // smallest tested N from which every tested certificate is negative;
    // NaN when the sweep never turns (and stays) negative
    double onset_N = 0.0;
    // largest tested N with a non-negative or indeterminate verdict;
    // NaN when the whole sweep is negative
    double last_nonnegative_N = 0.0;
    bool has_onset = false;
    bool all_negative = false;
};

SweepSummary lemma4_sweep(int n, double alpha, const std::vector<double>& N_grid,
                          const QuadratureConfig& cfg, int threads = 1);

struct ScalingFit {
    std::string name;
    std::vector<double> N;
    std::vector<double> value;
    double exponent = 0.0;   // least-squares slope of log|value| vs log N
    double reference = 0.0;  // exponent asserted by the asymptotic estimates
    double residual = 0.0;   // rms residual of the fit
};

struct ScalingStudy {
    std::vector<ScalingFit> fits;  // a_N, b_N, |integral|, |integral| top decade,
                                   // and the three split pieces
    // proof-constant diagnostics evaluated verbatim, with their signs
    double C = 0.0, D_at_Nmax = 0.0, E = 0.0, F = 0.0;
    bool C_positive = false, D_positive = false, E_positive = false, F_positive = false;
};

// Geometric N grids: >= 4 points required.
ScalingStudy scaling_study(int n, double alpha, const std::vector<double>& N_grid,
                           const QuadratureConfig& cfg, int threads = 1);

// Split pieces of the certificate integral: [0, b_N], [b_N, a_N] by
// quadrature on the subtracted profile, [a_N, inf) in closed form.
struct CertificateSplit {
    double head = 0.0;  // [0, b_N]
    double mid = 0.0;   // [b_N, a_N]
    double tail = 0.0;  // [a_N, inf), exactly -A0 a_N^{-q}/q - a1 a_N^{2-q}/(q-2)
};

CertificateSplit certificate_split(const CounterexampleParams& params,
                                   const QuadratureConfig& cfg);

std::vector<double> geometric_grid(double lo, double hi, int points_per_decade);

}  // namespace cbplab
