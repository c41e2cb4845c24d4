#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "drcbf/filter.hpp"
#include "oracles.hpp"

using namespace drcbf;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v4(double a, double b, double c, double d) {
  return (Vec(4) << a, b, c, d).finished();
}

const ObstacleSpec kObs{32.5, 25.0, 5.0};

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

LipschitzEstimates some_estimates() {
  LipschitzEstimates est;
  est.l_lf_psi = 180.0;
  est.l_lg_psi = 95.0;
  est.l_alpha_psi = 160.0;
  est.l_lp_psi = 2.5;
  est.delta_sup = 3.742;
  est.p_norm_sup = 1.0;
  est.l_dyn = 3.3;
  return est;
}

MarginSpec make_spec(UncertaintyModel unc, double T) {
  MarginSpec spec;
  spec.estimates = some_estimates();
  spec.T = T;
  spec.uncertainty = std::move(unc);
  spec.input_box = paper_inputs();
  return spec;
}

double objective(const Vec& u, const Vec& u_perf) {
  return 0.5 * (u - u_perf).squaredNorm();
}

}  // namespace

TEST_CASE("collapse: zero uncertainty and T -> 0 reproduce vanilla exactly") {
  const auto chain = unicycle_obstacle_chain(kObs);
  const auto spec = make_spec(zero_uncertainty(), 0.0);
  SeededRng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Vec x = v4(rng.uniform(0, 50), rng.uniform(10, 40),
                     rng.uniform(-3, 3), rng.uniform(-3, 3));
    const auto vanilla = build_constraint(ConstraintKind::Vanilla, chain, spec, x);
    const auto ct = build_constraint(ConstraintKind::CtRobust, chain, spec, x);
    const auto sd = build_constraint(ConstraintKind::SdRobust, chain, spec, x);
    CHECK(ct.b == vanilla.b);
    CHECK(sd.b == vanilla.b);
    CHECK(ct.a == vanilla.a);
    CHECK(sd.a == vanilla.a);

    // point tube + zero disturbance: margin sup is exactly zero
    const ReachBox tube(x, x);
    const auto reach =
        build_constraint(ConstraintKind::ReachRobust, chain, spec, x, &tube);
    CHECK(reach.b == vanilla.b);
    CHECK(reach.a == vanilla.a);
  }
}

TEST_CASE("reach constraint requires a tube") {
  const auto chain = unicycle_obstacle_chain(kObs);
  const auto spec = make_spec(paper_uncertainty(), 0.1);
  CHECK_THROWS_AS(build_constraint(ConstraintKind::ReachRobust, chain, spec,
                                   v4(5, 25, 0, 0)),
                  std::invalid_argument);
}

TEST_CASE("constraint offsets order by conservatism") {
  const auto sys = unicycle();
  const auto chain = unicycle_obstacle_chain(kObs);
  const auto spec = make_spec(paper_uncertainty(), 0.1);
  SeededRng rng(7);
  for (int i = 0; i < 40; ++i) {
    const Vec x = v4(rng.uniform(5, 45), rng.uniform(12, 38),
                     rng.uniform(-3, 3), rng.uniform(-2, 2));
    const auto vanilla = build_constraint(ConstraintKind::Vanilla, chain, spec, x);
    const auto ct = build_constraint(ConstraintKind::CtRobust, chain, spec, x);
    const auto sd = build_constraint(ConstraintKind::SdRobust, chain, spec, x);
    const ReachBox tube =
        reach_tube(sys, x, spec.uncertainty.meas_box, to_ibox(spec.input_box),
                   spec.uncertainty.dist_box, spec.T, 10, spec.estimates.l_dyn);
    const auto reach =
        build_constraint(ConstraintKind::ReachRobust, chain, spec, x, &tube);

    CHECK(sd.b <= ct.b);
    CHECK(ct.b <= vanilla.b);
    CHECK(reach.b <= vanilla.b);
  }
}

TEST_CASE("reach margin at the paper start state, grid cross-validation") {
  const auto sys = unicycle();
  const auto chain = unicycle_obstacle_chain(kObs);
  const auto spec = make_spec(paper_uncertainty(), 0.1);
  const Vec x_hat = v4(5, 25, -0.0997, 0.0);

  const ReachBox tube =
      reach_tube(sys, x_hat, spec.uncertainty.meas_box, to_ibox(spec.input_box),
                 spec.uncertainty.dist_box, spec.T, 10, spec.estimates.l_dyn);
  const auto vanilla = build_constraint(ConstraintKind::Vanilla, chain, spec, x_hat);
  const auto reach =
      build_constraint(ConstraintKind::ReachRobust, chain, spec, x_hat, &tube);

  // strictly more conservative than vanilla at the start state
  CHECK(reach.b < vanilla.b);
  CHECK(reach.a == vanilla.a);

  // interval bound dominates a dense grid search over tube x inputs x dist
  const double sup = vanilla.b - reach.b;
  double grid_best = -std::numeric_limits<double>::infinity();
  const BoxSet inputs = paper_inputs();
  const BoxSet dist = spec.uncertainty.dist_box;
  const int n = 6;
  Vec y(4), u(2), d(2);
  for (int i0 = 0; i0 <= n; ++i0)
    for (int i1 = 0; i1 <= n; ++i1)
      for (int i2 = 0; i2 <= n; ++i2)
        for (int i3 = 0; i3 <= n; ++i3) {
          for (int j = 0; j < 4; ++j) {
            const int idx = j == 0 ? i0 : j == 1 ? i1 : j == 2 ? i2 : i3;
            y[j] = tube.lo[j] + (tube.hi[j] - tube.lo[j]) * idx / n;
          }
          for (int ju = 0; ju <= 2; ++ju)
            for (int jd = 0; jd <= 2; ++jd) {
              u << inputs.lo[0] + (inputs.hi[0] - inputs.lo[0]) * ju / 2.0,
                  inputs.lo[1] + (inputs.hi[1] - inputs.lo[1]) * jd / 2.0;
              for (int k0 = 0; k0 <= 2; ++k0)
                for (int k1 = 0; k1 <= 2; ++k1) {
                  d << dist.lo[0] + (dist.hi[0] - dist.lo[0]) * k0 / 2.0,
                      dist.lo[1] + (dist.hi[1] - dist.lo[1]) * k1 / 2.0;
                  grid_best = std::max(
                      grid_best, margin_point(chain, y, x_hat, u, d));
                }
            }
        }
  CHECK(sup >= grid_best - 1e-9);
  // and not vacuously loose
  CHECK(sup <= 3.0 * std::abs(grid_best) + 1.0);
}

TEST_CASE("solver fixed points") {
  const BoxSet box(v2(-1, -2), v2(1, 2));

  SUBCASE("inactive") {
    const AffineConstraint c{v2(1, 0), 5.0};
    const auto res = solve_safety_filter(v2(0, 0), c, box);
    CHECK(res.mode == FilterMode::Inactive);
    CHECK(res.u_safe == v2(0, 0));
    CHECK(res.slack == 5.0);
    CHECK(res.feasible);
  }

  SUBCASE("active") {
    const AffineConstraint c{v2(1, 0), -0.5};
    const auto res = solve_safety_filter(v2(0, 0), c, box);
    CHECK(res.mode == FilterMode::Active);
    CHECK(res.u_safe[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.u_safe[1] == doctest::Approx(0.0));
    CHECK(res.slack == doctest::Approx(0.0));
  }

  SUBCASE("infeasible clamps to the max-slack vertex") {
    const AffineConstraint c{v2(1, 0), -2.0};
    const auto res = solve_safety_filter(v2(0, 0), c, box);
    CHECK(res.mode == FilterMode::ClampedInfeasible);
    CHECK_FALSE(res.feasible);
    CHECK(res.u_safe[0] == 1.0);
    CHECK(res.u_safe[1] == -2.0);  // lexicographic tie-break
    CHECK(res.slack == doctest::Approx(-1.0));
  }

  SUBCASE("degenerate box is a contract violation") {
    CHECK_THROWS_AS(
        solve_safety_filter(v2(0, 0), AffineConstraint{v2(1, 0), 0.0},
                            BoxSet(v2(0, 0), v2(0, 0))),
        std::invalid_argument);
  }
}

TEST_CASE("solver is minimally invasive") {
  SeededRng rng(11);
  const BoxSet box(v2(-1, -2), v2(1, 2));
  for (int i = 0; i < 500; ++i) {
    const Vec u_perf = v2(rng.uniform(-2, 2), rng.uniform(-3, 3));
    const AffineConstraint c{v2(rng.uniform(-60, 60), rng.uniform(-60, 60)),
                             rng.uniform(-40, 40)};
    const Vec proj = box.clip(u_perf);
    const auto res = solve_safety_filter(u_perf, c, box);
    CHECK(box.contains(res.u_safe));
    if (c.value(proj) >= 0.0) {
      CHECK(res.mode == FilterMode::Inactive);
      CHECK(res.u_safe == proj);
    }
    if (res.feasible) CHECK(res.slack >= -1e-7);
  }
}

// The full 10^3-instance sweep at the pinned resolution runs in the
// acceptance suite; this keeps the unit suite quick.
TEST_CASE("solver matches the grid oracle on random instances") {
  SeededRng rng(13);
  const double resolution = 1e-3;
  int feasible_count = 0;
  for (int i = 0; i < 250; ++i) {
    const BoxSet box(v2(rng.uniform(-1.2, -0.3), rng.uniform(-1.2, -0.3)),
                     v2(rng.uniform(0.3, 1.2), rng.uniform(0.3, 1.2)));
    const Vec u_perf = v2(rng.uniform(-3, 3), rng.uniform(-4, 4));
    AffineConstraint c{v2(rng.uniform(-5, 5), rng.uniform(-5, 5)),
                       rng.uniform(-6, 6)};

    const auto res = solve_safety_filter(u_perf, c, box);
    const Vec grid = grid_oracle(u_perf, c, box, resolution);

    if (res.feasible) {
      ++feasible_count;
      CHECK(c.value(grid) >= 0.0);
      // exact solver is never worse than the grid (one-sided by construction)
      CHECK(objective(res.u_safe, u_perf) <=
            objective(grid, u_perf) + 1e-5);
      // and the grid pins the solver down to its resolution
      CHECK(objective(grid, u_perf) - objective(res.u_safe, u_perf) <=
            2.0 * resolution * (res.u_safe - u_perf).norm() +
                resolution * resolution);
    } else {
      // oracle falls back to max slack as well
      CHECK(c.value(grid) <= res.slack + 1e-9);
      CHECK(res.slack <= c.value(grid) + resolution * c.a.norm() + 1e-9);
    }
  }
  CHECK(feasible_count > 100);  // the instance mix exercises both branches
}

TEST_CASE("grid oracle fixed points") {
  const BoxSet box(v2(-1, -2), v2(1, 2));
  const Vec u_perf = v2(0.3, 0.4);

  // inactive: nearest grid point to u_perf
  const Vec g = grid_oracle(u_perf, AffineConstraint{v2(1, 0), 5.0}, box, 1e-3);
  CHECK((g - u_perf).norm() <= 1e-3);

  // infeasible: max-slack grid point
  const Vec gi = grid_oracle(u_perf, AffineConstraint{v2(1, 0), -2.0}, box, 1e-3);
  CHECK(gi[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS(grid_oracle(u_perf, AffineConstraint{v2(1, 0), 0.0}, box, 0.0),
                  std::invalid_argument);
}

TEST_CASE("m = 1 chain recovers the relative-degree-1 constraint") {
  const ObstacleSpec obs{0.0, 0.0, 1.0};
  const auto chain = integrator_obstacle_chain(obs, ClassK::linear(1.0));
  MarginSpec spec;
  spec.estimates = LipschitzEstimates{};
  spec.T = 0.0;
  spec.uncertainty = UncertaintyModel::from_boxes(
      BoxSet(Vec::Zero(2), Vec::Zero(2)), BoxSet(Vec::Zero(2), Vec::Zero(2)));
  spec.input_box = BoxSet(v2(-1, -1), v2(1, 1));

  const Vec x = v2(2.0, 0.0);
  const auto c = build_constraint(ConstraintKind::Vanilla, chain, spec, x);
  // a = L_g h = (2x, 2y) = (4, 0); b = L_f h + alpha(h) = 0 + 3
  CHECK(c.a == v2(4, 0));
  CHECK(c.b == doctest::Approx(3.0));
}
