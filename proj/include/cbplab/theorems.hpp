#pragma once

// End-to-end pipelines: the affirmative comparison chain
//   hypothesis on (-Delta)^{alpha/2} S_C  ->  Parseval pairing
//   ->  Hoelder  ->  volume comparison,
// each link re-verified separately, and the negative-part report backed by
// the sign certificate at the pole direction.

#include <string>
#include <vector>

#include "cbplab/counterexample.hpp"
#include "cbplab/fractional.hpp"

namespace cbplab {

struct MixedIntegralResult {
    double value = 0.0;
    double sigma = 0.0;
    std::string route;  // "biaxial_1d" or "sphere_mc"
};

// int_{S^{2n-1}} ||x||_K^{-a} ||x||_L^{-b} dx. Biaxial-or-radial pairs use
// the 1-D psi reduction; anything else falls back to sphere Monte Carlo.
MixedIntegralResult mixed_spherical_integral(const Body& K, const Body& L, double a, double b,
                                             const QuadratureConfig& cfg, int threads = 1);

struct ComparisonReport {
    std::string hash_K, hash_L;
    int n = 0;
    double alpha = 0.0;
    std::vector<double> psi;
    std::vector<double> frac_K, frac_L;  // (-Delta)^{alpha/2} S_C values on the grid
    double hypothesis_margin = 0.0;      // min over grid of frac_L - frac_K
    double margin_err = 0.0;             // combined numeric error at the argmin
    double I_K = 0.0;   // int ||x||_K^{-2n}
    double I_KL = 0.0;  // int ||x||_K^{-2} ||x||_L^{-2n+2}
    double I_L = 0.0;   // int ||x||_L^{-2n}
    double vol_K = 0.0, vol_L = 0.0;
    bool hypothesis_holds = false;  // (i)
    bool parseval_step = false;     // (ii) I_K <= I_KL
    bool volume_step = false;       // (iii) Vol(K) <= Vol(L)
    bool hoelder_holds = false;     // I_KL <= I_K^{1/n} I_L^{(n-1)/n}
    bool window_override = false;
};

// Runs the affirmative chain for alpha in [2n-6, 2n-2). With
// allow_any_alpha the window check is skipped and the verdicts are
// informational.
ComparisonReport theorem_pos_check(const Body& K, const Body& L, double alpha, int psi_points,
                                   const QuadratureConfig& cfg, int threads = 1,
                                   bool allow_any_alpha = false);

struct NegativePartReport {
    CertificateResult certificate;
    std::string verdict;       // "counterexample_certified" or "no_conclusion"
    std::string implication;   // narrative record of what the sign implies
    double witness_psi = 0.0;  // pole direction where the Fourier value is negative
    bool construction_performed = false;  // the perturbed partner body is out of scope
};

// Report-only negative pipeline: a negative certificate certifies that the
// comparison can fail for this alpha; the perturbed partner body itself is
// deliberately not constructed.
NegativePartReport theorem_neg_report(const CounterexampleParams& params,
                                      const QuadratureConfig& cfg);

// Scales `body` so its volume matches target_volume; the factor is recorded.
Body normalize_to_volume(const Body& body, double target_volume, const QuadratureConfig& cfg,
                         double* factor = nullptr);

}  // namespace cbplab
