#include "drcbf/margins.hpp"

#include <cmath>

namespace drcbf {

namespace {

// Pair sampler mixing domain-scale separations with short ones; short pairs
// are what pin down local gradients.
std::pair<Vec, Vec> sample_pair(const BoxSet& domain, SeededRng& rng,
                                bool near) {
  const Vec x1 = rng.sample_box(domain);
  if (!near) {
    Vec x2 = rng.sample_box(domain);
    return {x1, x2};
  }
  const double diam = domain.width().norm();
  const double r = std::exp(rng.uniform(std::log(1e-4), std::log(diam + 1e-9)));
  Vec dir(domain.dim());
  for (int i = 0; i < domain.dim(); ++i) dir[i] = rng.uniform(-1.0, 1.0);
  const double n = dir.norm();
  if (n < 1e-12) return {x1, x1};
  Vec x2 = domain.clip(x1 + (r / n) * dir);
  return {x1, x2};
}

}  // namespace

double max_difference_quotient(const std::function<Vec(const Vec&)>& fn,
                               const BoxSet& domain, int samples,
                               double safety_factor, SeededRng& rng) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto [x1, x2] = sample_pair(domain, rng, i % 2 == 0);
    const double dist = (x1 - x2).norm();
    if (dist < 1e-12) continue;
    const double q = (fn(x1) - fn(x2)).norm() / dist;
    worst = std::max(worst, q);
  }
  return safety_factor * worst;
}

double state_deviation_bound(const MarginSpec& spec) {
  const auto& e = spec.estimates;
  return spec.uncertainty.epsilon +
         spec.T * (e.delta_sup + e.p_norm_sup * spec.uncertainty.gamma);
}

double lipschitz_margin_ct(const MarginSpec& spec, double u_norm) {
  if (u_norm < 0.0) throw std::invalid_argument("lipschitz_margin_ct: u_norm < 0");
  const auto& e = spec.estimates;
  const double eps = spec.uncertainty.epsilon;
  return eps * (e.l_lf_psi + e.l_alpha_psi) + eps * e.l_lg_psi * u_norm;
}

double lipschitz_margin_sd(const MarginSpec& spec, double u_norm) {
  if (u_norm < 0.0) throw std::invalid_argument("lipschitz_margin_sd: u_norm < 0");
  const auto& e = spec.estimates;
  return (e.l_lf_psi + e.l_lg_psi * u_norm + e.l_alpha_psi) *
         state_deviation_bound(spec);
}

double disturbance_margin(const BarrierChain& chain, const Vec& x,
                          double gamma) {
  return chain.lie(x).lp_psi.norm() * gamma;
}

double disturbance_margin(const BarrierChain& chain, const BoxSet& box,
                          double gamma) {
  return norm_upper(chain.lie_box(to_ibox(box)).lp_psi) * gamma;
}

LipschitzEstimates estimate_constants(const ControlAffineSystem& sys,
                                      const BarrierChain& chain,
                                      const BoxSet& domain,
                                      const BoxSet& input_box, int samples,
                                      double safety_factor,
                                      std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("estimate_constants: samples >= 2");
  if (safety_factor < 1.0)
    throw std::invalid_argument("estimate_constants: safety_factor >= 1");
  if (domain.dim() == 0 || domain.degenerate())
    throw std::invalid_argument("estimate_constants: degenerate domain");

  SeededRng rng(seed);
  LipschitzEstimates out;

  const auto scalar1 = [](double v) {
    Vec r(1);
    r[0] = v;
    return r;
  };

  out.l_lf_psi = max_difference_quotient(
      [&](const Vec& x) { return scalar1(chain.lie(x).lf_psi); }, domain,
      samples, safety_factor, rng);
  out.l_lg_psi = max_difference_quotient(
      [&](const Vec& x) { return chain.lie(x).lg_psi.transpose().eval(); },
      domain, samples, safety_factor, rng);
  out.l_alpha_psi = max_difference_quotient(
      [&](const Vec& x) {
        const Vec d0 = Vec::Zero(sys.dist_dim);
        return scalar1(chain.alphas.back()(chain.psi_prev(x, d0)));
      },
      domain, samples, safety_factor, rng);
  out.l_lp_psi = max_difference_quotient(
      [&](const Vec& x) { return chain.lie(x).lp_psi.transpose().eval(); },
      domain, samples, safety_factor, rng);

  // Full-field Lipschitz bound in x; input and disturbance are redrawn per
  // pair so the maximum covers the whole (u, d) range.
  const BoxSet dist_probe(Vec::Constant(sys.dist_dim, -1.0),
                          Vec::Constant(sys.dist_dim, 1.0));
  out.l_dyn = safety_factor * [&] {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const auto [x1, x2] = sample_pair(domain, rng, i % 2 == 0);
      const double dist = (x1 - x2).norm();
      if (dist < 1e-12) continue;
      const Vec u = rng.sample_box(input_box);
      const Vec d = rng.sample_box(dist_probe);
      const double q =
          (eval_dynamics(sys, x1, u, d) - eval_dynamics(sys, x2, u, d)).norm() /
          dist;
      worst = std::max(worst, q);
    }
    return worst;
  }();

  const auto input_corners = input_box.corners();
  for (int i = 0; i < samples; ++i) {
    const Vec x = rng.sample_box(domain);
    const Vec u = i % 16 == 0
                      ? input_corners[static_cast<std::size_t>(
                            rng.uniform_int(0, static_cast<int>(input_corners.size()) - 1))]
                      : rng.sample_box(input_box);
    out.delta_sup = std::max(out.delta_sup, (sys.f(x) + sys.g(x) * u).norm());

    const Mat p = sys.p(x);
    const double pn = Eigen::JacobiSVD<Mat>(p).singularValues()(0);
    out.p_norm_sup = std::max(out.p_norm_sup, pn);
    out.lp_h_sup = std::max(out.lp_h_sup, chain.lie(x).lp_h.norm());
  }

  return out;
}

}  // namespace drcbf
