#pragma once

#include <optional>
#include <string>

#include "drcbf/filter.hpp"

namespace drcbf {

enum class FilterKind { None, Vanilla, Ct, Sd, Reach };

FilterKind filter_kind_from_string(const std::string& s);
std::string to_string(FilterKind k);

struct ControllerGains {
  double k_theta = 2.0;
  double k_v = 1.0;
  double v_max = 2.0;
  double k_d = 0.5;
};

/// Complete description of one closed-loop experiment.
struct Scenario {
  std::string system_id = "unicycle";
  ObstacleSpec obstacle;
  Vec start;
  Eigen::Vector2d goal;
  BoxSet input_box;
  UncertaintyModel uncertainty;
  double T = 0.1;
  double horizon = 25.0;
  ControllerGains gains;
  FilterKind filter = FilterKind::Reach;
  std::uint64_t seed = 1;

  ClassK alpha1 = ClassK::linear();
  ClassK alpha2 = ClassK::linear();

  BoxSet domain;  // sampling domain for constants estimation
  int constant_samples = 20000;
  double safety_factor = 1.2;
  std::uint64_t constants_seed = 2024;
  std::optional<LipschitzEstimates> estimates;  // skip estimation if set

  int substeps_per_period = 10;  // dense check grid and integration substeps
  int disturbance_draws_per_period = 1;
  int reach_substeps = 10;
  // Margin from the reach set at (k+1)T only, instead of the tube through
  // the whole period. Cheaper and less conservative, but intra-step states
  // are no longer covered by the logged boxes.
  bool reach_endpoint_only = false;

  int steps() const;
  void validate() const;

  /// The unicycle obstacle-avoidance experiment with its published constants:
  /// start (5, 25), goal (45, 21), obstacle (32.5, 25), D = 5, T = 0.1 s,
  /// disturbance [-0.3, 0.3]^2, position measurement error [-0.5, 0.5]^2,
  /// inputs [-1, 1] x [-2, 2].
  static Scenario paper_default();
};

/// One control period of a trajectory. Rows 0..N-1 carry the decision made at
/// t_k; the terminal row carries only the final state.
struct StepRecord {
  double t = 0.0;
  Vec x;      // true state
  Vec x_hat;  // estimate
  Vec u_perf;
  Vec u_safe;
  double h = 0.0;
  double psi1 = 0.0;
  double slack = 0.0;
  FilterMode mode = FilterMode::Inactive;
  bool terminal = false;
  std::optional<ReachBox> box;  // logged tube (reach filter only)
  AffineConstraint constraint;
  bool feasible = true;
};

struct Trajectory {
  std::vector<StepRecord> records;
  std::uint64_t seed = 0;
  double min_h = 0.0;           // over the dense intra-step grid
  double min_h_time = 0.0;
  int infeasible_steps = 0;
  int reach_violations = 0;     // dense-grid points outside the logged tube
};

struct SummaryStats {
  std::vector<std::uint64_t> episode_seeds;
  std::vector<double> episode_min_h;
  double min_h_min = 0.0;
  double min_h_max = 0.0;
  double min_h_mean = 0.0;
  int collisions = 0;         // episodes with min h < 0
  int infeasible_steps = 0;   // summed over episodes
  int reach_violations = 0;
};

/// Proportional goal-seeking law: turn toward the goal bearing, track a
/// distance-scaled speed reference, clip to the input box.
Vec perf_controller(const Vec& estimate, const Eigen::Vector2d& goal,
                    const ControllerGains& gains, const BoxSet& input_box);

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

/// Pre-assembled pieces shared by every episode of a scenario (system, chain,
/// margin spec with estimated constants).
struct ScenarioRuntime {
  ControlAffineSystem sys;
  BarrierChain chain;
  MarginSpec margin_spec;

  explicit ScenarioRuntime(const Scenario& sc);
};

Trajectory run_episode(const Scenario& scenario);
Trajectory run_episode(const Scenario& scenario, const ScenarioRuntime& rt,
                       std::uint64_t episode_seed);

SummaryStats monte_carlo(const Scenario& scenario, int n_runs);

/// Reach margin supremum at the scenario start state for each sampling time
/// in ascending t_list; returns (t, signed margin) rows. The sign convention
/// matches the constraint: the margin is subtracted, so entries are <= 0 and
/// their magnitude grows with t.
std::vector<std::pair<double, double>> margin_sweep(
    const Scenario& scenario, const std::vector<double>& t_list);
std::vector<std::pair<double, double>> margin_sweep(
    const Scenario& scenario, const ScenarioRuntime& rt,
    const std::vector<double>& t_list);

}  // namespace drcbf
