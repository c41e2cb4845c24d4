#include "drcbf/barrier.hpp"

namespace drcbf {

namespace {

double square(double a) { return a * a; }
using std::cos;
using std::sin;

// Closed-form pieces of the unicycle chain, shared between the scalar and the
// interval evaluation paths so a point box reproduces the scalar arithmetic
// bit for bit.
template <class T>
struct UnicycleTerms {
  T h, lfh, lf2h, lglfh1, lglfh2, lph1, lph2, lplfh1, lplfh2;
};

template <class T>
UnicycleTerms<T> unicycle_terms(const ObstacleSpec& obs, const T& x, const T& y,
                                const T& th, const T& v) {
  const T dx = x - T(obs.x);
  const T dy = y - T(obs.y);
  const T c = cos(th);
  const T s = sin(th);
  const T proj = c * dx + s * dy;  // offset projected on the heading
  const T perp = c * dy - s * dx;

  UnicycleTerms<T> t;
  t.h = square(dx) + square(dy) - T(obs.safe_distance * obs.safe_distance);
  t.lfh = 2.0 * (v * proj);
  t.lf2h = 2.0 * square(v);
  t.lglfh1 = 2.0 * (v * perp);
  t.lglfh2 = 2.0 * proj;
  t.lph1 = 2.0 * dx;
  t.lph2 = 2.0 * dy;
  t.lplfh1 = 2.0 * (v * c);
  t.lplfh2 = 2.0 * (v * s);
  return t;
}

template <class T>
UnicycleTerms<T> unicycle_terms(const ObstacleSpec& obs,
                                const std::vector<T>& x) {
  return unicycle_terms<T>(obs, x[0], x[1], x[2], x[3]);
}

UnicycleTerms<double> unicycle_terms(const ObstacleSpec& obs, const Vec& x) {
  return unicycle_terms<double>(obs, x[0], x[1], x[2], x[3]);
}

// Enclosure of alpha'(s) over an interval. The derivative of the power form
// dips to its minimum at s = 0, so endpoint evaluation alone is not enough.
Interval classk_derivative_range(const ClassK& a, const Interval& s) {
  if (a.form == ClassK::Form::Linear) return Interval(a.p);
  Interval r = hull(Interval(a.derivative(s.lo)), Interval(a.derivative(s.hi)));
  if (s.contains(0.0)) r = hull(r, Interval(a.derivative(0.0)));
  return r;
}

template <class T>
struct IntegratorTerms {
  T h, lgh1, lgh2;
};

template <class T>
IntegratorTerms<T> integrator_terms(const ObstacleSpec& obs, const T& x,
                                    const T& y) {
  const T dx = x - T(obs.x);
  const T dy = y - T(obs.y);
  IntegratorTerms<T> t;
  t.h = square(dx) + square(dy) - T(obs.safe_distance * obs.safe_distance);
  t.lgh1 = 2.0 * dx;
  t.lgh2 = 2.0 * dy;
  return t;
}

}  // namespace

double eval_h(const ObstacleSpec& spec, const Vec& x) {
  const double dx = x[0] - spec.x;
  const double dy = x[1] - spec.y;
  return square(dx) + square(dy) - spec.safe_distance * spec.safe_distance;
}

std::vector<double> eval_psi(const BarrierChain& chain, const Vec& x,
                             const Vec& d) {
  std::vector<double> out;
  out.push_back(chain.h(x));
  if (chain.m >= 2) out.push_back(chain.psi_prev(x, d));
  out.push_back(chain.psi_m(x, Vec::Zero(chain.lie(x).lg_psi.size()), d));
  return out;
}

double eval_psi_m(const BarrierChain& chain, const Vec& x, const Vec& u,
                  const Vec& d) {
  return chain.psi_m(x, u, d);
}

double eval_fv(const BarrierChain& chain, const Vec& x, const Vec& u) {
  if (!chain.fv)
    throw std::invalid_argument("eval_fv: chain has no f_v decomposition");
  return chain.fv(x, u);
}

double eval_fd(const BarrierChain& chain, const Vec& x, const Vec& d) {
  if (!chain.fd)
    throw std::invalid_argument("eval_fd: chain has no f_d decomposition");
  return chain.fd(x, d);
}

LieBundle lie_derivatives(const BarrierChain& chain, const Vec& x) {
  return chain.lie(x);
}

BarrierChain unicycle_obstacle_chain(const ObstacleSpec& obs, ClassK alpha1,
                                     ClassK alpha2) {
  obs.validate();
  alpha1.validate();
  alpha2.validate();

  BarrierChain chain;
  chain.m = 2;
  chain.drd = 1;
  chain.alphas = {alpha1, alpha2};

  chain.h = [obs](const Vec& x) { return eval_h(obs, x); };

  chain.psi_prev = [obs, alpha1](const Vec& x, const Vec& d) {
    const auto t = unicycle_terms(obs, x);
    return t.lfh + (t.lph1 * d[0] + t.lph2 * d[1]) + alpha1(t.h);
  };

  chain.psi_m = [obs, alpha1, alpha2](const Vec& x, const Vec& u,
                                      const Vec& d) {
    const auto t = unicycle_terms(obs, x);
    const double lph_d = t.lph1 * d[0] + t.lph2 * d[1];
    const double psi1 = t.lfh + lph_d + alpha1(t.h);
    return t.lf2h + (t.lglfh1 * u[0] + t.lglfh2 * u[1]) +
           2.0 * (t.lplfh1 * d[0] + t.lplfh2 * d[1]) +
           2.0 * (square(d[0]) + square(d[1])) +
           alpha1.derivative(t.h) * (t.lfh + lph_d) + alpha2(psi1) +
           alpha1(t.h);
  };

  chain.lie = [obs, alpha1](const Vec& x) {
    const auto t = unicycle_terms(obs, x);
    const double a1p = alpha1.derivative(t.h);
    LieBundle b;
    b.lf_psi = t.lf2h + a1p * t.lfh;
    b.lg_psi = RowVec(2);
    b.lg_psi << t.lglfh1, t.lglfh2;
    b.lp_psi = RowVec(2);
    b.lp_psi << t.lplfh1 + a1p * t.lph1, t.lplfh2 + a1p * t.lph2;
    b.lp_h = RowVec(2);
    b.lp_h << t.lph1, t.lph2;
    b.lf_lp_h = RowVec(2);
    b.lf_lp_h << t.lplfh1, t.lplfh2;
    b.lp_lp_h = 2.0 * Mat::Identity(2, 2);
    b.lg_lp_h = Mat::Zero(2, 2);
    return b;
  };

  chain.fv = [obs](const Vec& x, const Vec& u) {
    const auto t = unicycle_terms(obs, x);
    return t.lf2h + 2.0 * t.lfh + 2.0 * t.h +
           (t.lglfh1 * u[0] + t.lglfh2 * u[1]);
  };
  chain.fd = [obs](const Vec& x, const Vec& d) {
    const auto t = unicycle_terms(obs, x);
    return 2.0 * (t.lplfh1 * d[0] + t.lplfh2 * d[1]) +
           2.0 * (square(d[0]) + square(d[1])) +
           2.0 * (t.lph1 * d[0] + t.lph2 * d[1]);
  };

  chain.h_box = [obs](const IBox& x) { return unicycle_terms(obs, x).h; };

  chain.psi_prev_box = [obs, alpha1](const IBox& x) {
    const auto t = unicycle_terms(obs, x);
    return t.lfh + alpha1(t.h);
  };

  chain.lie_box = [obs, alpha1](const IBox& x) {
    const auto t = unicycle_terms(obs, x);
    const Interval a1p = classk_derivative_range(alpha1, t.h);
    BoxLieBundle b;
    b.lf_psi = t.lf2h + a1p * t.lfh;
    b.lg_psi = {t.lglfh1, t.lglfh2};
    b.lp_psi = {t.lplfh1 + a1p * t.lph1, t.lplfh2 + a1p * t.lph2};
    b.lp_h = {t.lph1, t.lph2};
    return b;
  };

  // Term-wise interval bound of psi_2(y, u, d) - psi_2(x_hat, u, 0) over
  // y in box, u in input, d in dist. With unit linear gains this is exactly
  // the f_v difference plus f_d grouping.
  chain.margin_sup_box = [obs, alpha1, alpha2](const IBox& box,
                                               const Vec& x_hat,
                                               const IBox& input,
                                               const IBox& dist) {
    const auto ty = unicycle_terms(obs, box);
    const auto tx = unicycle_terms(obs, x_hat);
    const Interval lph_d = ty.lph1 * dist[0] + ty.lph2 * dist[1];
    const Interval psi1_y = ty.lfh + lph_d + alpha1(ty.h);
    const double psi1_x = tx.lfh + alpha1(tx.h);
    const Interval a1p_y = classk_derivative_range(alpha1, ty.h);
    const double a1p_x = alpha1.derivative(tx.h);

    const Interval margin =
        (ty.lf2h - Interval(tx.lf2h)) +
        (ty.lglfh1 - Interval(tx.lglfh1)) * input[0] +
        (ty.lglfh2 - Interval(tx.lglfh2)) * input[1] +
        2.0 * (ty.lplfh1 * dist[0] + ty.lplfh2 * dist[1]) +
        2.0 * (square(dist[0]) + square(dist[1])) +
        (a1p_y * (ty.lfh + lph_d) - Interval(a1p_x * tx.lfh)) +
        (alpha2(psi1_y) - Interval(alpha2(psi1_x))) +
        (alpha1(ty.h) - Interval(alpha1(tx.h)));
    return margin.hi;
  };

  return chain;
}

double margin_point(const BarrierChain& chain, const Vec& y, const Vec& x_hat,
                    const Vec& u, const Vec& d) {
  return chain.psi_m(y, u, d) - chain.psi_m(x_hat, u, Vec::Zero(d.size()));
}

BarrierChain integrator_obstacle_chain(const ObstacleSpec& obs, ClassK alpha1) {
  obs.validate();
  alpha1.validate();

  BarrierChain chain;
  chain.m = 1;
  chain.drd = 1;
  chain.alphas = {alpha1};

  chain.h = [obs](const Vec& x) {
    return integrator_terms<double>(obs, x[0], x[1]).h;
  };

  chain.psi_prev = [obs](const Vec& x, const Vec&) {
    return integrator_terms<double>(obs, x[0], x[1]).h;
  };

  chain.psi_m = [obs, alpha1](const Vec& x, const Vec& u, const Vec& d) {
    const auto t = integrator_terms<double>(obs, x[0], x[1]);
    return (t.lgh1 * u[0] + t.lgh2 * u[1]) + (t.lgh1 * d[0] + t.lgh2 * d[1]) +
           alpha1(t.h);
  };

  chain.lie = [obs](const Vec& x) {
    const auto t = integrator_terms<double>(obs, x[0], x[1]);
    LieBundle b;
    b.lf_psi = 0.0;
    b.lg_psi = RowVec(2);
    b.lg_psi << t.lgh1, t.lgh2;
    b.lp_psi = b.lg_psi;
    b.lp_h = b.lg_psi;
    b.lf_lp_h = RowVec(0);
    b.lp_lp_h = Mat(0, 0);
    b.lg_lp_h = Mat(0, 0);
    return b;
  };

  chain.h_box = [obs](const IBox& x) {
    return integrator_terms<Interval>(obs, x[0], x[1]).h;
  };
  chain.psi_prev_box = chain.h_box;

  chain.lie_box = [obs](const IBox& x) {
    const auto t = integrator_terms<Interval>(obs, x[0], x[1]);
    BoxLieBundle b;
    b.lf_psi = Interval(0.0);
    b.lg_psi = {t.lgh1, t.lgh2};
    b.lp_psi = b.lg_psi;
    b.lp_h = b.lg_psi;
    return b;
  };

  // Matched margin: every term of psi_m shifts from x_hat to y, plus the full
  // disturbance term at y.
  chain.margin_sup_box = [obs, alpha1](const IBox& box, const Vec& x_hat,
                                       const IBox& input, const IBox& dist) {
    const auto ty = integrator_terms<Interval>(obs, box[0], box[1]);
    const auto tx = integrator_terms<double>(obs, x_hat[0], x_hat[1]);
    const Interval margin = (ty.lgh1 - Interval(tx.lgh1)) * input[0] +
                            (ty.lgh2 - Interval(tx.lgh2)) * input[1] +
                            ty.lgh1 * dist[0] + ty.lgh2 * dist[1] +
                            (alpha1(ty.h) - Interval(alpha1(tx.h)));
    return margin.hi;
  };

  return chain;
}

}  // namespace drcbf
