#include "drcbf/dynamics.hpp"

#include <cmath>

namespace drcbf {

ControlAffineSystem unicycle() {
  ControlAffineSystem sys;
  sys.state_dim = 4;
  sys.input_dim = 2;
  sys.dist_dim = 2;

  sys.f = [](const Vec& x) {
    Vec out(4);
    out << x[3] * std::cos(x[2]), x[3] * std::sin(x[2]), 0.0, 0.0;
    return out;
  };
  sys.g = [](const Vec&) {
    Mat m = Mat::Zero(4, 2);
    m(2, 0) = 1.0;
    m(3, 1) = 1.0;
    return m;
  };
  sys.p = [](const Vec&) {
    Mat m = Mat::Zero(4, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    return m;
  };

  sys.f_box = [](const IBox& x) {
    IBox out(4, Interval(0.0));
    out[0] = x[3] * cos(x[2]);
    out[1] = x[3] * sin(x[2]);
    return out;
  };
  sys.g_box = [gm = Mat::Zero(4, 2).eval()](const IBox&) mutable {
    gm(2, 0) = 1.0;
    gm(3, 1) = 1.0;
    return IMat::from(gm);
  };
  sys.p_box = [pm = Mat::Zero(4, 2).eval()](const IBox&) mutable {
    pm(0, 0) = 1.0;
    pm(1, 1) = 1.0;
    return IMat::from(pm);
  };
  return sys;
}

ControlAffineSystem single_integrator_2d() {
  ControlAffineSystem sys;
  sys.state_dim = 2;
  sys.input_dim = 2;
  sys.dist_dim = 2;
  sys.f = [](const Vec&) { return Vec::Zero(2).eval(); };
  sys.g = [](const Vec&) { return Mat::Identity(2, 2).eval(); };
  sys.p = [](const Vec&) { return Mat::Identity(2, 2).eval(); };
  sys.f_box = [](const IBox&) { return IBox(2, Interval(0.0)); };
  sys.g_box = [](const IBox&) { return IMat::from(Mat::Identity(2, 2)); };
  sys.p_box = [](const IBox&) { return IMat::from(Mat::Identity(2, 2)); };
  return sys;
}

Vec eval_dynamics(const ControlAffineSystem& sys, const Vec& x, const Vec& u,
                  const Vec& d) {
  if (x.size() != sys.state_dim || u.size() != sys.input_dim ||
      d.size() != sys.dist_dim)
    throw std::invalid_argument("eval_dynamics: dimension mismatch");
  return sys.f(x) + sys.g(x) * u + sys.p(x) * d;
}

Vec rk4_zoh_step(const ControlAffineSystem& sys, const Vec& x, const Vec& u_k,
                 const std::vector<Vec>& d_signal, double T, int substeps) {
  if (T <= 0.0) throw std::invalid_argument("rk4_zoh_step: T must be > 0");
  if (substeps < 1) throw std::invalid_argument("rk4_zoh_step: substeps >= 1");
  if (d_signal.size() != 1 && d_signal.size() != static_cast<std::size_t>(substeps))
    throw std::invalid_argument("rk4_zoh_step: d_signal size mismatch");

  const double h = T / substeps;
  Vec state = x;
  for (int s = 0; s < substeps; ++s) {
    const Vec& d = d_signal.size() == 1 ? d_signal[0]
                                        : d_signal[static_cast<std::size_t>(s)];
    const Vec k1 = eval_dynamics(sys, state, u_k, d);
    const Vec k2 = eval_dynamics(sys, state + 0.5 * h * k1, u_k, d);
    const Vec k3 = eval_dynamics(sys, state + 0.5 * h * k2, u_k, d);
    const Vec k4 = eval_dynamics(sys, state + h * k3, u_k, d);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return state;
}

Vec rk4_zoh_step(const ControlAffineSystem& sys, const Vec& x, const Vec& u_k,
                 const Vec& d, double T, int substeps) {
  return rk4_zoh_step(sys, x, u_k, std::vector<Vec>{d}, T, substeps);
}

Vec apply_measurement(const Vec& x, const Vec& e) {
  if (x.size() != e.size())
    throw std::invalid_argument("apply_measurement: dimension mismatch");
  return x + e;
}

}  // namespace drcbf
