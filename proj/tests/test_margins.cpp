#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "drcbf/margins.hpp"
#include "oracles.hpp"

using namespace drcbf;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v4(double a, double b, double c, double d) {
  return (Vec(4) << a, b, c, d).finished();
}

const ObstacleSpec kObs{32.5, 25.0, 5.0};

BoxSet paper_domain() {
  return BoxSet(v4(0, 10, -3.14159265358979, -3), v4(50, 40, 3.14159265358979, 3));
}
BoxSet paper_inputs() { return BoxSet(v2(-1, -2), v2(1, 2)); }

UncertaintyModel paper_uncertainty() {
  return UncertaintyModel::from_boxes(
      BoxSet(Vec::Constant(2, -0.3), Vec::Constant(2, 0.3)),
      BoxSet(v4(-0.5, -0.5, 0, 0), v4(0.5, 0.5, 0, 0)));
}

UncertaintyModel zero_uncertainty() {
  return UncertaintyModel::from_boxes(BoxSet(Vec::Zero(2), Vec::Zero(2)),
                                      BoxSet(Vec::Zero(4), Vec::Zero(4)));
}

MarginSpec spec_with(LipschitzEstimates est, double T, UncertaintyModel unc) {
  MarginSpec s;
  s.estimates = est;
  s.T = T;
  s.uncertainty = std::move(unc);
  s.input_box = paper_inputs();
  return s;
}

}  // namespace

TEST_CASE("state deviation bound") {
  LipschitzEstimates est;
  est.delta_sup = 5.0;
  est.p_norm_sup = 1.0;

  CHECK(state_deviation_bound(spec_with(est, 0.0, zero_uncertainty())) == 0.0);

  const auto spec = spec_with(est, 0.1, paper_uncertainty());
  CHECK(state_deviation_bound(spec) == doctest::Approx(1.24953319).epsilon(1e-8));
}

TEST_CASE("continuous-time lipschitz margin") {
  LipschitzEstimates est;
  est.l_lf_psi = 2.0;
  est.l_alpha_psi = 1.0;
  est.l_lg_psi = 0.5;

  CHECK(lipschitz_margin_ct(spec_with(est, 0.1, zero_uncertainty()), 7.0) == 0.0);

  const auto spec = spec_with(est, 0.1, paper_uncertainty());
  CHECK(lipschitz_margin_ct(spec, 2.0) == doctest::Approx(2.82842712).epsilon(1e-8));

  double prev = -1.0;
  for (double un = 0.0; un <= 5.0; un += 0.25) {
    const double m = lipschitz_margin_ct(spec, un);
    CHECK(m >= prev);
    prev = m;
  }
  CHECK_THROWS_AS(lipschitz_margin_ct(spec, -1.0), std::invalid_argument);
}

TEST_CASE("sampled-data lipschitz margin") {
  LipschitzEstimates est;
  est.l_lf_psi = 2.0;
  est.l_lg_psi = 0.5;
  est.l_alpha_psi = 1.0;
  est.delta_sup = 5.0;
  est.p_norm_sup = 1.0;

  CHECK(lipschitz_margin_sd(spec_with(est, 0.0, zero_uncertainty()), 3.0) == 0.0);

  const auto spec = spec_with(est, 0.1, paper_uncertainty());
  // 4 * v(z); the quoted 5-digit value 4.99812 comes from rounding v(z) first
  CHECK(lipschitz_margin_sd(spec, 2.0) == doctest::Approx(4.99813275).epsilon(1e-8));
  CHECK(lipschitz_margin_sd(spec, 2.0) == doctest::Approx(4.99812).epsilon(1e-5));

  CHECK(lipschitz_margin_sd(spec_with(est, 0.2, paper_uncertainty()), 2.0) >
        lipschitz_margin_sd(spec, 2.0));
}

TEST_CASE("margins monotone in every uncertainty knob") {
  LipschitzEstimates est;
  est.l_lf_psi = 2.0;
  est.l_lg_psi = 0.5;
  est.l_alpha_psi = 1.0;
  est.delta_sup = 5.0;
  est.p_norm_sup = 1.0;

  double prev_ct = -1.0, prev_sd = -1.0;
  for (double scale = 0.0; scale <= 1.0; scale += 0.1) {
    const auto unc = UncertaintyModel::from_boxes(
        BoxSet(Vec::Constant(2, -0.3 * scale), Vec::Constant(2, 0.3 * scale)),
        BoxSet(v4(-0.5 * scale, -0.5 * scale, 0, 0),
               v4(0.5 * scale, 0.5 * scale, 0, 0)));
    const auto spec = spec_with(est, 0.1, unc);
    const double ct = lipschitz_margin_ct(spec, 2.0);
    const double sd = lipschitz_margin_sd(spec, 2.0);
    CHECK(ct >= prev_ct);
    CHECK(sd >= prev_sd);
    prev_ct = ct;
    prev_sd = sd;
  }

  double prev_t = -1.0;
  for (double T = 0.0; T <= 0.5; T += 0.05) {
    const double sd = lipschitz_margin_sd(spec_with(est, T, paper_uncertainty()), 2.0);
    CHECK(sd >= prev_t);
    prev_t = sd;
  }
}

TEST_CASE("zero-uncertainty collapse is exact") {
  LipschitzEstimates est;
  est.l_lf_psi = 321.0;
  est.l_lg_psi = 55.0;
  est.l_alpha_psi = 160.0;
  est.delta_sup = 3.7;
  est.p_norm_sup = 1.0;
  const auto spec = spec_with(est, 0.0, zero_uncertainty());
  CHECK(lipschitz_margin_ct(spec, 2.236) == 0.0);
  CHECK(lipschitz_margin_sd(spec, 2.236) == 0.0);
  CHECK(state_deviation_bound(spec) == 0.0);

  const auto chain = unicycle_obstacle_chain(kObs);
  CHECK(disturbance_margin(chain, v4(5, 25, 0, 1), 0.0) == 0.0);
}

TEST_CASE("disturbance margin against the Cauchy-Schwarz step") {
  const auto chain = unicycle_obstacle_chain(kObs);
  const double gamma = 0.3 * std::sqrt(2.0);
  SeededRng rng(71);
  for (int i = 0; i < 100; ++i) {
    const Vec x = v4(rng.uniform(0, 50), rng.uniform(10, 40),
                     rng.uniform(-3, 3), rng.uniform(-3, 3));
    const double margin = disturbance_margin(chain, x, gamma);
    // hand gradient: L_p psi1 = (2 v cos + 2 dx, 2 v sin + 2 dy)
    const double g1 = 2.0 * x[3] * std::cos(x[2]) + 2.0 * (x[0] - kObs.x);
    const double g2 = 2.0 * x[3] * std::sin(x[2]) + 2.0 * (x[1] - kObs.y);
    CHECK(margin == doctest::Approx(std::hypot(g1, g2) * gamma));

    const LieBundle b = chain.lie(x);
    for (int s = 0; s < 100; ++s) {
      const Vec d = oracles::sample_ball(rng, 2, gamma);
      CHECK(b.lp_psi.dot(d) >= -margin - 1e-12);
    }
  }
}

TEST_CASE("disturbance margin over a box dominates the pointwise value") {
  const auto chain = unicycle_obstacle_chain(kObs);
  const Vec x = v4(27.5, 25, 0.3, 1.0);
  const BoxSet box(x.array() - 0.5, x.array() + 0.5);
  const double boxed = disturbance_margin(chain, box, 0.42);
  CHECK(boxed >= disturbance_margin(chain, x, 0.42));
  SeededRng rng(73);
  for (int s = 0; s < 200; ++s)
    CHECK(boxed >= disturbance_margin(chain, rng.sample_box(box), 0.42) - 1e-9);
}

TEST_CASE("difference-quotient estimator on known maps") {
  SeededRng rng(79);
  const BoxSet dom01(Vec::Zero(1), Vec::Ones(1));

  const auto constant = [](const Vec&) { return Vec::Ones(2).eval(); };
  CHECK(max_difference_quotient(constant, dom01, 500, 1.2, rng) == 0.0);

  const auto linear3 = [](const Vec& x) { return (3.0 * x).eval(); };
  const double est = max_difference_quotient(linear3, dom01, 2000, 1.2, rng);
  CHECK(est == doctest::Approx(3.0 * 1.2).epsilon(1e-3));
}

TEST_CASE("estimate_constants on the paper scenario") {
  const auto sys = unicycle();
  const auto chain = unicycle_obstacle_chain(kObs);

  CHECK_THROWS_AS(estimate_constants(sys, chain, paper_domain(), paper_inputs(),
                                     1, 1.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_constants(sys, chain, paper_domain(), paper_inputs(),
                                     100, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      estimate_constants(sys, chain,
                         BoxSet(Vec::Zero(4), Vec::Zero(4)), paper_inputs(),
                         100, 1.2),
      std::invalid_argument);

  const auto est =
      estimate_constants(sys, chain, paper_domain(), paper_inputs(), 4000, 1.2, 1);
  CHECK(est.l_lf_psi > 0.0);
  CHECK(est.l_lg_psi > 0.0);
  CHECK(est.l_alpha_psi > 0.0);
  CHECK(est.l_lp_psi > 0.0);
  CHECK(est.l_dyn > 0.0);
  // analytic values: Delta = sqrt(3^2 + 1 + 2^2), ||p|| = 1
  CHECK(est.delta_sup == doctest::Approx(std::sqrt(14.0)).epsilon(0.02));
  CHECK(est.p_norm_sup == doctest::Approx(1.0));
  CHECK(est.lp_h_sup > 0.0);

  // stable across seeds within 5%
  const auto est2 =
      estimate_constants(sys, chain, paper_domain(), paper_inputs(), 4000, 1.2, 2);
  const auto est3 =
      estimate_constants(sys, chain, paper_domain(), paper_inputs(), 4000, 1.2, 3);
  for (const auto* e : {&est2, &est3}) {
    CHECK(e->delta_sup == doctest::Approx(est.delta_sup).epsilon(0.05));
    // max difference quotients converge slower than direct suprema
    CHECK(e->l_lf_psi == doctest::Approx(est.l_lf_psi).epsilon(0.15));
  }

  // determinism under a fixed seed
  const auto est_again =
      estimate_constants(sys, chain, paper_domain(), paper_inputs(), 4000, 1.2, 1);
  CHECK(est_again.l_lf_psi == est.l_lf_psi);
  CHECK(est_again.delta_sup == est.delta_sup);
}

TEST_CASE("estimated constants validate on epsilon-scale pairs") {
  const auto sys = unicycle();
  const auto chain = unicycle_obstacle_chain(kObs);
  const auto est = estimate_constants(sys, chain, paper_domain(), paper_inputs(),
                                      20000, 1.2, 11);
  const double eps = 0.5 * std::sqrt(2.0);
  const BoxSet domain = paper_domain();

  SeededRng rng(83);
  const Vec d0 = Vec::Zero(2);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec x = rng.sample_box(domain);
    const Vec e = oracles::sample_ball(rng, 4, eps);
    const Vec x_hat = domain.clip(x + e);
    const LieBundle bx = chain.lie(x);
    const LieBundle bh = chain.lie(x_hat);
    CHECK(std::abs(bx.lf_psi - bh.lf_psi) <= est.l_lf_psi * eps + 1e-9);
    CHECK((bx.lg_psi - bh.lg_psi).norm() <= est.l_lg_psi * eps + 1e-9);
    CHECK((bx.lp_psi - bh.lp_psi).norm() <= est.l_lp_psi * eps + 1e-9);
    const double a_x = chain.alphas.back()(chain.psi_prev(x, d0));
    const double a_h = chain.alphas.back()(chain.psi_prev(x_hat, d0));
    CHECK(std::abs(a_x - a_h) <= est.l_alpha_psi * eps + 1e-9);
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("one-period deviations stay below v(z)") {
  const auto sys = unicycle();
  const auto chain = unicycle_obstacle_chain(kObs);
  const auto est = estimate_constants(sys, chain, paper_domain(), paper_inputs(),
                                      20000, 1.2, 13);
  const auto unc = paper_uncertainty();
  const auto spec = spec_with(est, 0.1, unc);
  const double vz = state_deviation_bound(spec);

  // sample true states away from the domain boundary so one period of motion
  // stays inside the domain where delta_sup is valid
  const BoxSet inner(paper_domain().lo + Vec::Constant(4, 1.0),
                     paper_domain().hi - Vec::Constant(4, 1.0));
  const BoxSet inputs = paper_inputs();

  SeededRng rng(89);
  int violations = 0;
  for (int i = 0; i < 2000; ++i) {
    const Vec x0 = rng.sample_box(inner);
    const Vec e = unc.sample_measurement_error(rng);
    const Vec x_hat = apply_measurement(x0, e);
    const Vec u = rng.sample_box(inputs);
    Vec x = x0;
    for (int s = 0; s < 10; ++s) {
      const Vec d = unc.sample_disturbance(rng);
      x = rk4_zoh_step(sys, x, u, d, 0.01, 1);
      if ((x - x_hat).norm() > vz) ++violations;
    }
  }
  CHECK(violations == 0);
}
