#include "drcbf/harness.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <thread>

namespace drcbf {

FilterKind filter_kind_from_string(const std::string& s) {
  if (s == "none") return FilterKind::None;
  if (s == "vanilla") return FilterKind::Vanilla;
  if (s == "ct") return FilterKind::Ct;
  if (s == "sd") return FilterKind::Sd;
  if (s == "reach") return FilterKind::Reach;
  throw std::invalid_argument("unknown filter kind: " + s);
}

std::string to_string(FilterKind k) {
  switch (k) {
    case FilterKind::None: return "none";
    case FilterKind::Vanilla: return "vanilla";
    case FilterKind::Ct: return "ct";
    case FilterKind::Sd: return "sd";
    case FilterKind::Reach: return "reach";
  }
  return "?";
}

int Scenario::steps() const {
  return static_cast<int>(std::lround(horizon / T));
}

void Scenario::validate() const {
  if (system_id != "unicycle")
    throw std::invalid_argument("Scenario: unknown system '" + system_id + "'");
  obstacle.validate();
  if (start.size() != 4) throw std::invalid_argument("Scenario: start must have 4 components");
  if (T <= 0.0) throw std::invalid_argument("Scenario: T must be > 0");
  if (horizon <= 0.0) throw std::invalid_argument("Scenario: horizon must be > 0");
  if (std::abs(steps() * T - horizon) > 1e-9)
    throw std::invalid_argument("Scenario: horizon must be a multiple of T");
  if (eval_h(obstacle, start) <= 0.0)
    throw std::invalid_argument("Scenario: start must be outside the unsafe disk");
  if (input_box.dim() != 2 || input_box.degenerate())
    throw std::invalid_argument("Scenario: input box must be a non-degenerate 2-box");
  if (uncertainty.dist_box.dim() != 2 || uncertainty.meas_box.dim() != 4)
    throw std::invalid_argument("Scenario: uncertainty box dimensions");
  uncertainty.validate();
  if (domain.dim() != 4 || domain.degenerate())
    throw std::invalid_argument("Scenario: domain must be a non-degenerate 4-box");
  if (substeps_per_period < 1)
    throw std::invalid_argument("Scenario: substeps_per_period >= 1");
  if (disturbance_draws_per_period < 1 ||
      disturbance_draws_per_period > substeps_per_period)
    throw std::invalid_argument(
        "Scenario: disturbance draws must be in [1, substeps_per_period]");
  if (reach_substeps < 1)
    throw std::invalid_argument("Scenario: reach_substeps >= 1");
  if (constant_samples < 2)
    throw std::invalid_argument("Scenario: constant_samples >= 2");
  alpha1.validate();
  alpha2.validate();
}

Scenario Scenario::paper_default() {
  Scenario sc;
  sc.obstacle = {32.5, 25.0, 5.0};
  sc.start = Vec(4);
  sc.start << 5.0, 25.0, std::atan2(21.0 - 25.0, 45.0 - 5.0), 0.0;
  sc.goal << 45.0, 21.0;
  sc.input_box = BoxSet((Vec(2) << -1.0, -2.0).finished(),
                        (Vec(2) << 1.0, 2.0).finished());
  sc.uncertainty = UncertaintyModel::from_boxes(
      BoxSet(Vec::Constant(2, -0.3), Vec::Constant(2, 0.3)),
      BoxSet((Vec(4) << -0.5, -0.5, 0.0, 0.0).finished(),
             (Vec(4) << 0.5, 0.5, 0.0, 0.0).finished()));
  sc.domain = BoxSet(
      (Vec(4) << 0.0, 10.0, -std::numbers::pi, -3.0).finished(),
      (Vec(4) << 50.0, 40.0, std::numbers::pi, 3.0).finished());
  return sc;
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

Vec perf_controller(const Vec& estimate, const Eigen::Vector2d& goal,
                    const ControllerGains& gains, const BoxSet& input_box) {
  const double dx = goal[0] - estimate[0];
  const double dy = goal[1] - estimate[1];
  const double dist = std::hypot(dx, dy);
  const double heading_error =
      dist < 1e-9 ? 0.0 : wrap_angle(std::atan2(dy, dx) - estimate[2]);
  const double v_ref = std::min(gains.v_max, gains.k_d * dist);
  Vec u(2);
  u << gains.k_theta * heading_error, gains.k_v * (v_ref - estimate[3]);
  return input_box.clip(u);
}

ScenarioRuntime::ScenarioRuntime(const Scenario& sc) {
  sc.validate();
  sys = unicycle();
  chain = unicycle_obstacle_chain(sc.obstacle, sc.alpha1, sc.alpha2);
  margin_spec.estimates =
      sc.estimates ? *sc.estimates
                   : estimate_constants(sys, chain, sc.domain, sc.input_box,
                                        sc.constant_samples, sc.safety_factor,
                                        sc.constants_seed);
  margin_spec.T = sc.T;
  margin_spec.uncertainty = sc.uncertainty;
  margin_spec.input_box = sc.input_box;
  margin_spec.method = sc.filter == FilterKind::Ct   ? MarginMethod::LipschitzCt
                       : sc.filter == FilterKind::Sd ? MarginMethod::LipschitzSd
                                                     : MarginMethod::Reach;
}

namespace {

ConstraintKind to_constraint_kind(FilterKind k) {
  switch (k) {
    case FilterKind::Vanilla: return ConstraintKind::Vanilla;
    case FilterKind::Ct: return ConstraintKind::CtRobust;
    case FilterKind::Sd: return ConstraintKind::SdRobust;
    case FilterKind::Reach: return ConstraintKind::ReachRobust;
    default: throw std::logic_error("no constraint for this filter kind");
  }
}

}  // namespace

Trajectory run_episode(const Scenario& scenario) {
  const ScenarioRuntime rt(scenario);
  return run_episode(scenario, rt, SeededRng::derive(scenario.seed, 0));
}

Trajectory run_episode(const Scenario& scenario, const ScenarioRuntime& rt,
                       std::uint64_t episode_seed) {
  scenario.validate();
  SeededRng rng(episode_seed);

  const int n_steps = scenario.steps();
  const int substeps = scenario.substeps_per_period;
  const int draws = scenario.disturbance_draws_per_period;
  const Vec d0 = Vec::Zero(rt.sys.dist_dim);
  const IBox input_ibox = to_ibox(scenario.input_box);

  Trajectory traj;
  traj.seed = episode_seed;
  traj.records.reserve(static_cast<std::size_t>(n_steps) + 1);

  Vec x = scenario.start;
  traj.min_h = rt.chain.h(x);
  traj.min_h_time = 0.0;

  for (int k = 0; k < n_steps; ++k) {
    const double t = k * scenario.T;

    const Vec e = scenario.uncertainty.sample_measurement_error(rng);
    const Vec x_hat = apply_measurement(x, e);
    const Vec u_perf =
        perf_controller(x_hat, scenario.goal, scenario.gains, scenario.input_box);

    StepRecord rec;
    rec.t = t;
    rec.x = x;
    rec.x_hat = x_hat;
    rec.u_perf = u_perf;
    rec.h = rt.chain.h(x);
    rec.psi1 = rt.chain.psi_prev(x, d0);

    if (scenario.filter == FilterKind::None) {
      rec.u_safe = scenario.input_box.clip(u_perf);
      rec.slack = 0.0;
      rec.mode = FilterMode::Inactive;
      rec.feasible = true;
    } else {
      std::optional<ReachBox> tube;
      if (scenario.filter == FilterKind::Reach) {
        // The held input is not known before solving, so the set covers the
        // whole admissible input box.
        tube = scenario.reach_endpoint_only
                   ? reach_step(rt.sys, x_hat, scenario.uncertainty.meas_box,
                                input_ibox, scenario.uncertainty.dist_box,
                                scenario.T, scenario.reach_substeps,
                                rt.margin_spec.estimates.l_dyn)
                   : reach_tube(rt.sys, x_hat, scenario.uncertainty.meas_box,
                                input_ibox, scenario.uncertainty.dist_box,
                                scenario.T, scenario.reach_substeps,
                                rt.margin_spec.estimates.l_dyn);
      }
      const AffineConstraint c =
          build_constraint(to_constraint_kind(scenario.filter), rt.chain,
                           rt.margin_spec, x_hat, tube ? &*tube : nullptr);
      const FilterResult res =
          solve_safety_filter(u_perf, c, scenario.input_box);
      rec.u_safe = res.u_safe;
      rec.slack = res.slack;
      rec.mode = res.mode;
      rec.feasible = res.feasible;
      rec.constraint = c;
      rec.box = tube;
      if (!res.feasible) ++traj.infeasible_steps;
    }

    // Advance the true state on the dense sub-grid, tracking h and tube
    // containment at every sub-point.
    std::vector<Vec> d_seq(static_cast<std::size_t>(draws));
    for (auto& d : d_seq) d = scenario.uncertainty.sample_disturbance(rng);
    const double dt = scenario.T / substeps;
    for (int s = 0; s < substeps; ++s) {
      const Vec& d = d_seq[static_cast<std::size_t>(s * draws / substeps)];
      x = rk4_zoh_step(rt.sys, x, rec.u_safe, d, dt, 1);
      const double h_sub = rt.chain.h(x);
      if (h_sub < traj.min_h) {
        traj.min_h = h_sub;
        traj.min_h_time = t + (s + 1) * dt;
      }
      if (rec.box && !rec.box->contains(x, 1e-9)) ++traj.reach_violations;
    }

    traj.records.push_back(std::move(rec));
  }

  StepRecord last;
  last.t = n_steps * scenario.T;
  last.x = x;
  last.x_hat = x;
  last.u_perf = Vec::Zero(2);
  last.u_safe = Vec::Zero(2);
  last.h = rt.chain.h(x);
  last.psi1 = rt.chain.psi_prev(x, d0);
  last.terminal = true;
  traj.records.push_back(std::move(last));

  return traj;
}

SummaryStats monte_carlo(const Scenario& scenario, int n_runs) {
  if (n_runs < 1) throw std::invalid_argument("monte_carlo: n_runs >= 1");
  const ScenarioRuntime rt(scenario);

  std::vector<Trajectory> episodes(static_cast<std::size_t>(n_runs));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, 8));

  std::vector<std::future<void>> futures;
  futures.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < n_runs; i += workers)
        episodes[static_cast<std::size_t>(i)] = run_episode(
            scenario, rt, SeededRng::derive(scenario.seed, static_cast<std::uint64_t>(i)));
    }));
  }
  for (auto& f : futures) f.get();

  SummaryStats stats;
  stats.min_h_min = std::numeric_limits<double>::infinity();
  stats.min_h_max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& ep : episodes) {
    stats.episode_seeds.push_back(ep.seed);
    stats.episode_min_h.push_back(ep.min_h);
    stats.min_h_min = std::min(stats.min_h_min, ep.min_h);
    stats.min_h_max = std::max(stats.min_h_max, ep.min_h);
    sum += ep.min_h;
    if (ep.min_h < 0.0) ++stats.collisions;
    stats.infeasible_steps += ep.infeasible_steps;
    stats.reach_violations += ep.reach_violations;
  }
  stats.min_h_mean = sum / n_runs;
  return stats;
}

std::vector<std::pair<double, double>> margin_sweep(
    const Scenario& scenario, const std::vector<double>& t_list) {
  const ScenarioRuntime rt(scenario);
  return margin_sweep(scenario, rt, t_list);
}

std::vector<std::pair<double, double>> margin_sweep(
    const Scenario& scenario, const ScenarioRuntime& rt,
    const std::vector<double>& t_list) {
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (t_list[i] <= 0.0)
      throw std::invalid_argument("margin_sweep: times must be positive");
    if (i > 0 && t_list[i] <= t_list[i - 1])
      throw std::invalid_argument("margin_sweep: times must be ascending");
  }

  const IBox input_ibox = to_ibox(scenario.input_box);
  const IBox dist_ibox = to_ibox(scenario.uncertainty.dist_box);
  const double base_dt = scenario.T / scenario.reach_substeps;

  // One incremental propagation; prefix hulls make the margin magnitude
  // nondecreasing in t by construction.
  IBox x = offset_box(scenario.start, scenario.uncertainty.meas_box);
  IBox tube = x;
  double t_cur = 0.0;

  std::vector<std::pair<double, double>> rows;
  rows.reserve(t_list.size());
  for (double t : t_list) {
    const double seg = t - t_cur;
    const int n = std::max(1, static_cast<int>(std::ceil(seg / base_dt - 1e-9)));
    const double dt = seg / n;
    for (int i = 0; i < n; ++i) {
      x = propagate_box(rt.sys, x, input_ibox, dist_ibox, dt,
                        rt.margin_spec.estimates.l_dyn);
      tube = hull(tube, x);
    }
    t_cur = t;
    const double sup = rt.chain.margin_sup_box(tube, scenario.start,
                                               input_ibox, dist_ibox);
    rows.emplace_back(t, -sup);
  }
  return rows;
}

}  // namespace drcbf
