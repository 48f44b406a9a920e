#include "cbplab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cbplab {

MixedIntegralResult mixed_spherical_integral(const Body& K, const Body& L, double a, double b,
                                             const QuadratureConfig& cfg, int threads) {
    (void)threads;
    cfg.validate();
    const int n = K.n();
    if (L.n() != n) throw validation_error("mixed_spherical_integral: dimension mismatch");
    MixedIntegralResult out;
    if (K.biaxial() && L.biaxial()) {
        out.value = sphere_average_biaxial(
            [&](double psi) {
                return std::pow(K.radial_psi(psi), a) * std::pow(L.radial_psi(psi), b);
            },
            n, cfg);
        out.route = "biaxial_1d";
        return out;
    }
    // sphere Monte Carlo fallback
    std::mt19937_64 rng(derive_seed(cfg.rng_seed, 0x6d6978ULL));
    std::normal_distribution<double> gauss;
    double sum = 0.0, sum2 = 0.0;
    std::vector<double> dir(2 * n);
    for (long i = 0; i < cfg.mc_samples; ++i) {
        double nsq = 0.0;
        for (double& v : dir) {
            v = gauss(rng);
            nsq += v * v;
        }
        const double inv = 1.0 / std::sqrt(nsq);
        for (double& v : dir) v *= inv;
        const double val = std::pow(K.norm(dir), -a) * std::pow(L.norm(dir), -b);
        sum += val;
        sum2 += val * val;
    }
    const double mean = sum / cfg.mc_samples;
    const double var = std::max(0.0, sum2 / cfg.mc_samples - mean * mean);
    const double scale = sphere_surface(2 * n);
    out.value = scale * mean;
    out.sigma = scale * std::sqrt(var / cfg.mc_samples);
    out.route = "sphere_mc";
    return out;
}

ComparisonReport theorem_pos_check(const Body& K, const Body& L, double alpha, int psi_points,
                                   const QuadratureConfig& cfg, int threads,
                                   bool allow_any_alpha) {
    cfg.validate();
    const int n = K.n();
    if (L.n() != n) throw validation_error("theorem_pos_check: dimension mismatch");
    if (psi_points < 2) throw validation_error("theorem_pos_check: need >= 2 psi points");
    const bool in_window = alpha >= 2.0 * n - 6.0 && alpha < 2.0 * n - 2.0;
    if (!in_window && !allow_any_alpha) {
        std::ostringstream os;
        os << "theorem_pos_check: alpha=" << alpha << " outside [2n-6, 2n-2) = ["
           << 2 * n - 6 << ", " << 2 * n - 2 << "); pass allow_any_alpha to explore";
        throw domain_error(os.str());
    }

    ComparisonReport rep;
    rep.hash_K = K.spec_hash();
    rep.hash_L = L.spec_hash();
    rep.n = n;
    rep.alpha = alpha;
    rep.window_override = !in_window;
    rep.psi = uniform_psi_grid(psi_points);
    rep.frac_K.resize(rep.psi.size());
    rep.frac_L.resize(rep.psi.size());
    std::vector<double> errs(rep.psi.size());

    const bool radK = K.base_body().family() == BodyFamily::euclidean_ball;
    const bool radL = L.base_body().family() == BodyFamily::euclidean_ball;
    parallel_for(rep.psi.size(), threads, [&](std::size_t i) {
        if ((radK && radL) && i > 0) return;
        std::vector<double> xiK = canonical_direction(n, radK ? 0.0 : rep.psi[i]);
        std::vector<double> xiL = canonical_direction(n, radL ? 0.0 : rep.psi[i]);
        HyperplaneFrame fK = hyperplane_frame(xiK);
        HyperplaneFrame fL = hyperplane_frame(xiL);
        RadialSectionProfile pK = RadialSectionProfile::make(K, fK, -alpha, cfg, 1);
        RadialSectionProfile pL = RadialSectionProfile::make(L, fL, -alpha, cfg, 1);
        FtValue vK = ft_weighted_norm(pK, alpha, cfg);
        FtValue vL = ft_weighted_norm(pL, alpha, cfg);
        const double c = 1.0 / (4.0 * M_PI * (n - 1.0));
        rep.frac_K[i] = c * vK.value;
        rep.frac_L[i] = c * vL.value;
        errs[i] = c * (vK.error + vL.error);
    });
    if (radK && radL)
        for (std::size_t i = 1; i < rep.psi.size(); ++i) {
            rep.frac_K[i] = rep.frac_K[0];
            rep.frac_L[i] = rep.frac_L[0];
            errs[i] = errs[0];
        }

    std::size_t arg = 0;
    for (std::size_t i = 0; i < rep.psi.size(); ++i)
        if (rep.frac_L[i] - rep.frac_K[i] < rep.frac_L[arg] - rep.frac_K[arg]) arg = i;
    rep.hypothesis_margin = rep.frac_L[arg] - rep.frac_K[arg];
    rep.margin_err = errs[arg];

    rep.I_K = mixed_spherical_integral(K, K, 2.0 * n, 0.0, cfg, threads).value;
    rep.I_KL = mixed_spherical_integral(K, L, 2.0, 2.0 * n - 2.0, cfg, threads).value;
    rep.I_L = mixed_spherical_integral(L, L, 2.0 * n, 0.0, cfg, threads).value;
    rep.vol_K = volume(K, cfg).value;
    rep.vol_L = volume(L, cfg).value;

    const double slack = 1e-8;
    rep.hypothesis_holds = rep.hypothesis_margin >= -(3.0 * rep.margin_err +
                                                      slack * std::abs(rep.frac_L[arg]));
    rep.parseval_step = rep.I_K <= rep.I_KL * (1.0 + slack);
    rep.volume_step = rep.vol_K <= rep.vol_L * (1.0 + slack);
    rep.hoelder_holds =
        rep.I_KL <= std::pow(rep.I_K, 1.0 / n) * std::pow(rep.I_L, (n - 1.0) / n) *
                        (1.0 + slack);
    return rep;
}

NegativePartReport theorem_neg_report(const CounterexampleParams& params,
                                      const QuadratureConfig& cfg) {
    if (!(params.alpha > 2.0 * params.n - 7.0 && params.alpha < 2.0 * params.n - 6.0)) {
        std::ostringstream os;
        os << "theorem_neg_report: alpha=" << params.alpha << " outside (2n-7, 2n-6)";
        throw domain_error(os.str());
    }
    NegativePartReport rep;
    rep.certificate = lemma4_certificate(params, cfg);
    rep.witness_psi = M_PI / 2.0;
    rep.construction_performed = false;
    if (rep.certificate.verdict == CertificateVerdict::negative) {
        rep.verdict = "counterexample_certified";
        std::ostringstream os;
        os << "The Fourier value of |x|^{-alpha} ||x||_D^{-2} at the pole direction is "
           << rep.certificate.ft_pole_value << " < 0, so the distribution is not positive "
           << "definite. By the perturbation theorem there exist origin symmetric convex "
           << "bodies K, L with (-Delta)^{alpha/2} S_CK <= (-Delta)^{alpha/2} S_CL on the "
           << "whole sphere and Vol(K) > Vol(L). By continuity the negativity holds on an "
           << "open set of directions around the pole. The perturbed partner body K is "
           << "certified to exist but is not constructed numerically.";
        rep.implication = os.str();
    } else {
        rep.verdict = "no_conclusion";
        std::ostringstream os;
        os << "The certificate integral is " << rep.certificate.integral_value << " +/- "
           << rep.certificate.err << " (" << to_string(rep.certificate.verdict)
           << "); no sign conclusion at N=" << params.N << ".";
        rep.implication = os.str();
    }
    return rep;
}

Body normalize_to_volume(const Body& body, double target_volume, const QuadratureConfig& cfg,
                         double* factor) {
    if (!(target_volume > 0.0))
        throw validation_error("normalize_to_volume: target volume must be > 0");
    const double vol = volume(body, cfg).value;
    const double lambda = std::pow(target_volume / vol, 1.0 / (2.0 * body.n()));
    if (factor) *factor = lambda;
    return Body::dilate(lambda, body);
}

}  // namespace cbplab
