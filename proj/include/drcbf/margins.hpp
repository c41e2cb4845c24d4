#pragma once

#include <cstdint>

#include "drcbf/barrier.hpp"
#include "drcbf/dynamics.hpp"

namespace drcbf {

/// Sampled Lipschitz constants and suprema over the working domain. All
/// nonnegative; the Lipschitz entries carry the configured safety factor,
/// the suprema are direct maxima over the samples.
struct LipschitzEstimates {
  double l_lf_psi = 0.0;    // Lipschitz constant of L_f psi_{m-1}
  double l_lg_psi = 0.0;    // of L_g psi_{m-1}
  double l_alpha_psi = 0.0; // of alpha_m compose psi_{m-1}
  double l_lp_psi = 0.0;    // of L_p psi_{m-1}
  double delta_sup = 0.0;   // sup ||f(x) + g(x) u|| over domain x inputs
  double p_norm_sup = 0.0;  // sup ||p(x)|| (spectral norm) over domain
  double lp_h_sup = 0.0;    // sup ||L_p h(x)|| over domain
  double l_dyn = 0.0;       // Lipschitz bound of the full vector field in x
};

enum class MarginMethod { LipschitzCt, LipschitzSd, Reach };

/// Everything the margin formulas need: constants, sampling period,
/// uncertainty bounds and the admissible input box (its corner norm stands in
/// for ||u|| when margins are folded into an affine constraint).
struct MarginSpec {
  LipschitzEstimates estimates;
  double T = 0.1;
  UncertaintyModel uncertainty;
  MarginMethod method = MarginMethod::Reach;
  BoxSet input_box;

  double u_max() const { return input_box.max_corner_norm(); }
};

/// Worst-case deviation of the true state from the sampled estimate over one
/// period: eps + T * (Delta + sup||p|| * gamma). The disturbance contribution
/// uses the domain supremum of the disturbance field norm, which is what the
/// one-period integral bound supports.
double state_deviation_bound(const MarginSpec& spec);

/// Continuous-time robust margin eps*(l_Lf + l_alpha) + eps*l_Lg*||u||.
double lipschitz_margin_ct(const MarginSpec& spec, double u_norm);

/// Sampled-data robust margin (l_Lf + l_Lg*||u|| + l_alpha) * v(z).
double lipschitz_margin_sd(const MarginSpec& spec, double u_norm);

/// ||L_p psi_{m-1}(x)|| * gamma at a state estimate.
double disturbance_margin(const BarrierChain& chain, const Vec& x,
                          double gamma);
/// Worst case of the same quantity over a state box.
double disturbance_margin(const BarrierChain& chain, const BoxSet& box,
                          double gamma);

/// Sample difference quotients of the chain's Lie derivative fields over the
/// domain and take safety_factor times the maximum (suprema by direct max).
/// Deterministic for a fixed seed.
LipschitzEstimates estimate_constants(const ControlAffineSystem& sys,
                                      const BarrierChain& chain,
                                      const BoxSet& domain,
                                      const BoxSet& input_box, int samples,
                                      double safety_factor,
                                      std::uint64_t seed = 0x5eedULL);

/// safety_factor * max over sampled point pairs of
/// ||fn(x1) - fn(x2)|| / ||x1 - x2||. Exposed for tests and for estimating
/// constants of user-supplied maps.
double max_difference_quotient(const std::function<Vec(const Vec&)>& fn,
                               const BoxSet& domain, int samples,
                               double safety_factor, SeededRng& rng);

}  // namespace drcbf
