#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "drcbf/interval.hpp"
#include "drcbf/types.hpp"

namespace drcbf {

/// Class-K function used in the barrier chain. Linear form is p*s; power form
/// is p*sign(s)*|s|^q (odd extension so it stays strictly increasing when a
/// chain value goes negative).
struct ClassK {
  enum class Form { Linear, Power };
  Form form = Form::Linear;
  double p = 1.0;
  double q = 1.0;

  static ClassK linear(double gain = 1.0) { return {Form::Linear, gain, 1.0}; }
  static ClassK power(double gain, double exponent) {
    return {Form::Power, gain, exponent};
  }

  void validate() const {
    if (p <= 0.0) throw std::invalid_argument("ClassK: gain must be > 0");
    if (q < 1.0) throw std::invalid_argument("ClassK: exponent must be >= 1");
  }

  double operator()(double s) const {
    if (form == Form::Linear) return p * s;
    return p * std::copysign(std::pow(std::abs(s), q), s);
  }

  double derivative(double s) const {
    if (form == Form::Linear) return p;
    if (q == 1.0) return p;
    return p * q * std::pow(std::abs(s), q - 1.0);
  }

  /// Exact range since the function is increasing.
  Interval operator()(const Interval& s) const {
    return {(*this)(s.lo), (*this)(s.hi)};
  }
};

/// Circular keep-out region: stay at least safe_distance from (x, y).
struct ObstacleSpec {
  double x = 0.0;
  double y = 0.0;
  double safe_distance = 1.0;

  void validate() const {
    if (safe_distance <= 0.0)
      throw std::invalid_argument("ObstacleSpec: safe_distance must be > 0");
  }
};

/// Lie derivatives of psi_{m-1} at a state, evaluated at d = 0, plus the
/// extra terms that appear when the disturbance relative degree is one below
/// the input relative degree.
struct LieBundle {
  double lf_psi = 0.0;  // L_f psi_{m-1}
  RowVec lg_psi;        // L_g psi_{m-1}
  RowVec lp_psi;        // L_p psi_{m-1}
  RowVec lp_h;          // L_p psi_0
  RowVec lf_lp_h;       // r such that L_f[L_p h d] = r*d
  Mat lp_lp_h;          // M such that L_p[L_p h d] d = d' M d
  Mat lg_lp_h;          // B such that L_g[L_p h d] u = d' B u (identically 0
                        // under the mismatched-disturbance premise)
};

/// Interval counterparts over a state box.
struct BoxLieBundle {
  Interval lf_psi;
  IBox lg_psi;
  IBox lp_psi;
  IBox lp_h;
};

/// The psi-chain of a high-order barrier together with hand-coded closed-form
/// Lie derivative evaluators and their interval extensions.
///
/// psi_0 := h and psi_i := psi-dot_{i-1} + alpha_i(psi_{i-1}); the top chain
/// value also carries the alpha_{m-1}(psi_{m-2}) term of the f_v / f_d
/// grouping, so for the unicycle instance with unit linear gains
/// psi_2(x, u, d) == f_v(x, u) + f_d(x, d) holds identically.
struct BarrierChain {
  int m = 1;    // input relative degree
  int drd = 1;  // disturbance relative degree
  std::vector<ClassK> alphas;

  std::function<double(const Vec&)> h;
  std::function<double(const Vec&, const Vec&)> psi_prev;  // psi_{m-1}(x, d)
  std::function<double(const Vec&, const Vec&, const Vec&)> psi_m;  // (x, u, d)
  std::function<LieBundle(const Vec&)> lie;

  // Section-IV decomposition; only set on the m = 2 unicycle chain.
  std::function<double(const Vec&, const Vec&)> fv;  // (x, u)
  std::function<double(const Vec&, const Vec&)> fd;  // (x, d)

  std::function<Interval(const IBox&)> h_box;
  std::function<Interval(const IBox&)> psi_prev_box;  // at d = 0
  std::function<BoxLieBundle(const IBox&)> lie_box;

  /// Upper bound of the reach margin over (state box, input box, dist box),
  /// relative to the estimate x_hat. Matched or mismatched form depending on
  /// the chain's relative degrees.
  std::function<double(const IBox&, const Vec&, const IBox&, const IBox&)>
      margin_sup_box;

  bool mismatched() const { return m - drd == 1; }
};

/// Pointwise reach margin psi_m(y, u, d) - psi_m(x_hat, u, 0): the worst-case
/// change in the chain's top value when the true state is y instead of the
/// estimate. Used by the grid-search cross-validation of margin_sup_box.
double margin_point(const BarrierChain& chain, const Vec& y, const Vec& x_hat,
                    const Vec& u, const Vec& d);

double eval_h(const ObstacleSpec& spec, const Vec& x);

/// Chain values psi_0 .. psi_m with the input term dropped (u = 0). The full
/// top value including L_g psi_{m-1} u is psi_m / eval_psi_m.
std::vector<double> eval_psi(const BarrierChain& chain, const Vec& x,
                             const Vec& d);
double eval_psi_m(const BarrierChain& chain, const Vec& x, const Vec& u,
                  const Vec& d);

double eval_fv(const BarrierChain& chain, const Vec& x, const Vec& u);
double eval_fd(const BarrierChain& chain, const Vec& x, const Vec& d);

LieBundle lie_derivatives(const BarrierChain& chain, const Vec& x);

/// m = 2, drd = 1 chain for the unicycle obstacle-avoidance barrier
/// h = (x - xo)^2 + (y - yo)^2 - D^2.
BarrierChain unicycle_obstacle_chain(const ObstacleSpec& obs,
                                     ClassK alpha1 = ClassK::linear(),
                                     ClassK alpha2 = ClassK::linear());

/// m = 1, drd = 1 chain on the 2-D single integrator with the same barrier;
/// exercises the relative-degree-1 (matched disturbance) code paths.
BarrierChain integrator_obstacle_chain(const ObstacleSpec& obs,
                                       ClassK alpha1 = ClassK::linear());

}  // namespace drcbf
