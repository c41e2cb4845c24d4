#include "drcbf/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "drcbf/config.hpp"

namespace drcbf {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string to_string(FilterMode m) {
  switch (m) {
    case FilterMode::Inactive: return "inactive";
    case FilterMode::Active: return "active";
    case FilterMode::ClampedInfeasible: return "clamped_infeasible";
  }
  return "?";
}

const char* kTrajectoryCsvHeader =
    "t,x,y,theta,v,xhat,yhat,u1,u2,h,psi1,slack,mode,"
    "box_xlo,box_xhi,box_ylo,box_yhi,box_thetalo,box_thetahi,box_vlo,box_vhi,"
    "uperf1,uperf2,a1,a2,b,feasible";

namespace {

void write_box_cols(std::ostream& out, const StepRecord& rec) {
  if (rec.box) {
    for (int i = 0; i < 4; ++i)
      out << ',' << fmt9(rec.box->lo[i]) << ',' << fmt9(rec.box->hi[i]);
  } else {
    for (int i = 0; i < 8; ++i) out << ",0";
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryCsvHeader << '\n';
  for (const auto& rec : traj.records) {
    out << fmt9(rec.t);
    for (int i = 0; i < 4; ++i) out << ',' << fmt9(rec.x[i]);
    out << ',' << fmt9(rec.x_hat[0]) << ',' << fmt9(rec.x_hat[1]);
    out << ',' << fmt9(rec.u_safe[0]) << ',' << fmt9(rec.u_safe[1]);
    out << ',' << fmt9(rec.h) << ',' << fmt9(rec.psi1) << ',' << fmt9(rec.slack);
    out << ',' << (rec.terminal ? "end" : to_string(rec.mode));
    write_box_cols(out, rec);
    out << ',' << fmt9(rec.u_perf[0]) << ',' << fmt9(rec.u_perf[1]);
    if (rec.constraint.a.size() == 2)
      out << ',' << fmt9(rec.constraint.a[0]) << ',' << fmt9(rec.constraint.a[1])
          << ',' << fmt9(rec.constraint.b);
    else
      out << ",0,0,0";
    out << ',' << (rec.feasible ? 1 : 0) << '\n';
  }
}

void write_reach_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,box_xlo,box_xhi,box_ylo,box_yhi,box_thetalo,box_thetahi,"
         "box_vlo,box_vhi\n";
  for (const auto& rec : traj.records) {
    if (!rec.box) continue;
    out << fmt9(rec.t);
    for (int i = 0; i < 4; ++i)
      out << ',' << fmt9(rec.box->lo[i]) << ',' << fmt9(rec.box->hi[i]);
    out << '\n';
  }
}

void write_min_h_csv(std::ostream& out, const SummaryStats& stats) {
  out << "episode,seed,min_h,collided\n";
  for (std::size_t i = 0; i < stats.episode_min_h.size(); ++i)
    out << i << ',' << stats.episode_seeds[i] << ','
        << fmt9(stats.episode_min_h[i]) << ','
        << (stats.episode_min_h[i] < 0.0 ? 1 : 0) << '\n';
}

void write_margins_csv(std::ostream& out,
                       const std::vector<std::pair<double, double>>& rows) {
  out << "t,margin\n";
  for (const auto& [t, margin] : rows)
    out << fmt9(t) << ',' << fmt9(margin) << '\n';
}

void write_summary_json(std::ostream& out, const Scenario& sc,
                        const Trajectory& traj) {
  nlohmann::ordered_json j;
  j["filter"] = to_string(sc.filter);
  j["seed"] = traj.seed;
  j["T"] = sc.T;
  j["horizon"] = sc.horizon;
  j["steps"] = sc.steps();
  j["min_h"] = traj.min_h;
  j["min_h_time"] = traj.min_h_time;
  j["collided"] = traj.min_h < 0.0;
  j["infeasible_steps"] = traj.infeasible_steps;
  j["reach_violations"] = traj.reach_violations;
  const Vec& xf = traj.records.back().x;
  j["final_state"] = {xf[0], xf[1], xf[2], xf[3]};
  j["final_goal_distance"] =
      std::hypot(sc.goal[0] - xf[0], sc.goal[1] - xf[1]);
  out << j.dump(2) << '\n';
}

void write_stats_json(std::ostream& out, const Scenario& sc, int runs,
                      const SummaryStats& stats) {
  nlohmann::ordered_json j;
  j["filter"] = to_string(sc.filter);
  j["runs"] = runs;
  j["master_seed"] = sc.seed;
  j["min_h"] = {{"min", stats.min_h_min},
                {"max", stats.min_h_max},
                {"mean", stats.min_h_mean}};
  j["collisions"] = stats.collisions;
  j["infeasible_steps"] = stats.infeasible_steps;
  j["reach_violations"] = stats.reach_violations;
  out << j.dump(2) << '\n';
}

void save_constants(std::ostream& out, const LipschitzEstimates& est,
                    int samples, double safety_factor, std::uint64_t seed) {
  out << "# sampled Lipschitz constants and domain suprema\n";
  out << "samples = " << samples << '\n';
  out << "safety_factor = " << fmt9(safety_factor) << '\n';
  out << "seed = " << seed << '\n';
  out << "l_lf_psi = " << fmt9(est.l_lf_psi) << '\n';
  out << "l_lg_psi = " << fmt9(est.l_lg_psi) << '\n';
  out << "l_alpha_psi = " << fmt9(est.l_alpha_psi) << '\n';
  out << "l_lp_psi = " << fmt9(est.l_lp_psi) << '\n';
  out << "delta_sup = " << fmt9(est.delta_sup) << '\n';
  out << "p_norm_sup = " << fmt9(est.p_norm_sup) << '\n';
  out << "lp_h_sup = " << fmt9(est.lp_h_sup) << '\n';
  out << "l_dyn = " << fmt9(est.l_dyn) << '\n';
}

LipschitzEstimates load_constants(std::istream& in) {
  const Config cfg = Config::parse(in);
  LipschitzEstimates est;
  const auto need = [&](const char* key) {
    if (!cfg.has(key))
      throw ConfigError(std::string("constants sidecar: missing '") + key + "'");
    return cfg.get_double(key, 0.0);
  };
  est.l_lf_psi = need("l_lf_psi");
  est.l_lg_psi = need("l_lg_psi");
  est.l_alpha_psi = need("l_alpha_psi");
  est.l_lp_psi = need("l_lp_psi");
  est.delta_sup = need("delta_sup");
  est.p_norm_sup = need("p_norm_sup");
  est.lp_h_sup = need("lp_h_sup");
  est.l_dyn = need("l_dyn");
  return est;
}

LipschitzEstimates load_constants_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open constants sidecar: " + path);
  return load_constants(in);
}

}  // namespace drcbf
