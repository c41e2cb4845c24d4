#pragma once

#include <functional>

#include "drcbf/interval.hpp"
#include "drcbf/rng.hpp"
#include "drcbf/types.hpp"

namespace drcbf {

/// Control-affine disturbed system  xdot = f(x) + g(x) u + p(x) d.
///
/// The *_box members are natural interval extensions of the same fields and
/// feed the reachability code; they must enclose the point evaluations over
/// any state box.
struct ControlAffineSystem {
  int state_dim = 0;
  int input_dim = 0;
  int dist_dim = 0;

  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> g;
  std::function<Mat(const Vec&)> p;

  std::function<IBox(const IBox&)> f_box;
  std::function<IMat(const IBox&)> g_box;
  std::function<IMat(const IBox&)> p_box;
};

/// Unicycle with state (x, y, heading, speed) and inputs (turn rate cmd,
/// accel cmd); disturbance enters the position rates.
ControlAffineSystem unicycle();

/// 2-D single integrator xdot = u + d. Barrier constraints on it have input
/// relative degree 1; used to exercise the m = 1 code paths.
ControlAffineSystem single_integrator_2d();

/// Bounded disturbance + bounded measurement error model. The scalar bounds
/// are l2 bounds over the respective boxes (tightest valid constants are the
/// corner norms).
struct UncertaintyModel {
  BoxSet dist_box;
  double gamma = 0.0;
  BoxSet meas_box;
  double epsilon = 0.0;

  static UncertaintyModel from_boxes(const BoxSet& dist, const BoxSet& meas) {
    UncertaintyModel m;
    m.dist_box = dist;
    m.meas_box = meas;
    m.gamma = dist.max_corner_norm();
    m.epsilon = meas.max_corner_norm();
    m.validate();
    return m;
  }

  void validate() const {
    if (!dist_box.contains_zero() || !meas_box.contains_zero())
      throw std::invalid_argument("UncertaintyModel: boxes must contain 0");
    if (gamma < dist_box.max_corner_norm() - 1e-12 ||
        epsilon < meas_box.max_corner_norm() - 1e-12)
      throw std::invalid_argument(
          "UncertaintyModel: scalar bound below box corner norm");
  }

  Vec sample_disturbance(SeededRng& rng) const { return rng.sample_box(dist_box); }
  Vec sample_measurement_error(SeededRng& rng) const { return rng.sample_box(meas_box); }
};

/// f(x) + g(x) u + p(x) d, with dimension checks.
Vec eval_dynamics(const ControlAffineSystem& sys, const Vec& x, const Vec& u,
                  const Vec& d);

/// Classical RK4 over [0, T) with u held constant (ZOH) and the disturbance
/// held constant within each of the `substeps` equal sub-intervals.
/// `d_signal` holds one disturbance vector per substep (or a single vector,
/// broadcast to all substeps).
Vec rk4_zoh_step(const ControlAffineSystem& sys, const Vec& x, const Vec& u_k,
                 const std::vector<Vec>& d_signal, double T, int substeps);

Vec rk4_zoh_step(const ControlAffineSystem& sys, const Vec& x, const Vec& u_k,
                 const Vec& d, double T, int substeps = 1);

/// State estimate from additive error: x + e.
Vec apply_measurement(const Vec& x, const Vec& e);

}  // namespace drcbf
