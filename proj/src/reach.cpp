#include "drcbf/reach.hpp"

namespace drcbf {

namespace {

IBox field_box(const ControlAffineSystem& sys, const IBox& x, const IBox& u,
               const IBox& d) {
  IBox out = sys.f_box(x);
  const IBox gu = mul(sys.g_box(x), u);
  const IBox pd = mul(sys.p_box(x), d);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += gu[i] + pd[i];
  return out;
}

}  // namespace

IBox propagate_box(const ControlAffineSystem& sys, const IBox& x,
                   const IBox& u, const IBox& d, double dt, double l_dyn) {
  const IBox k1 = field_box(sys, x, u, d);
  const IBox k2 = field_box(sys, x + scale(0.5 * dt, k1), u, d);
  const IBox k3 = field_box(sys, x + scale(0.5 * dt, k2), u, d);
  const IBox k4 = field_box(sys, x + scale(dt, k3), u, d);

  IBox next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Interval incr =
        (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    Interval v = x[i] + incr;
    // Remainder: stage disagreement beyond the base derivative range scaled
    // by dt and the dynamics Lipschitz bound. Zero whenever the derivative
    // range is constant across the step, so constant-field cases stay exact.
    const Interval stages = hull(hull(k1[i], k2[i]), hull(k3[i], k4[i]));
    const double spread = stages.width() - k1[i].width();
    const double eta = dt * l_dyn * spread;
    next[i] = Interval(v.lo - eta, v.hi + eta);
  }
  return next;
}

ReachBox reach_step(const ControlAffineSystem& sys, const Vec& x_hat,
                    const BoxSet& meas_box, const IBox& u_k,
                    const BoxSet& dist_box, double t, int substeps,
                    double l_dyn) {
  if (t < 0.0) throw std::invalid_argument("reach_step: t must be >= 0");
  if (substeps < 1) throw std::invalid_argument("reach_step: substeps >= 1");
  IBox x = offset_box(x_hat, meas_box);
  if (t == 0.0) return to_boxset(x);
  const IBox d = to_ibox(dist_box);
  const double dt = t / substeps;
  for (int i = 0; i < substeps; ++i) x = propagate_box(sys, x, u_k, d, dt, l_dyn);
  return to_boxset(x);
}

ReachBox reach_step(const ControlAffineSystem& sys, const Vec& x_hat,
                    const BoxSet& meas_box, const Vec& u_k,
                    const BoxSet& dist_box, double t, int substeps,
                    double l_dyn) {
  return reach_step(sys, x_hat, meas_box, to_ibox(u_k), dist_box, t, substeps,
                    l_dyn);
}

ReachBox reach_tube(const ControlAffineSystem& sys, const Vec& x_hat,
                    const BoxSet& meas_box, const IBox& u_k,
                    const BoxSet& dist_box, double T, int n_sub, double l_dyn) {
  if (n_sub < 1) throw std::invalid_argument("reach_tube: n_sub >= 1");
  IBox x = offset_box(x_hat, meas_box);
  IBox tube = x;
  if (T > 0.0) {
    const IBox d = to_ibox(dist_box);
    const double dt = T / n_sub;
    for (int i = 0; i < n_sub; ++i) {
      x = propagate_box(sys, x, u_k, d, dt, l_dyn);
      tube = hull(tube, x);
    }
  }
  return to_boxset(tube);
}

ReachBox reach_tube(const ControlAffineSystem& sys, const Vec& x_hat,
                    const BoxSet& meas_box, const Vec& u_k,
                    const BoxSet& dist_box, double T, int n_sub, double l_dyn) {
  return reach_tube(sys, x_hat, meas_box, to_ibox(u_k), dist_box, T, n_sub,
                    l_dyn);
}

ReachBox hull(const std::vector<ReachBox>& boxes) {
  if (boxes.empty()) throw std::invalid_argument("hull: empty list");
  Vec lo = boxes.front().lo;
  Vec hi = boxes.front().hi;
  for (const auto& b : boxes) {
    if (b.dim() != static_cast<int>(lo.size()))
      throw std::invalid_argument("hull: dimension mismatch");
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  return ReachBox(lo, hi);
}

}  // namespace drcbf
