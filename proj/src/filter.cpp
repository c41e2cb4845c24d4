#include "drcbf/filter.hpp"

#include <cmath>
#include <optional>

namespace drcbf {

AffineConstraint build_constraint(ConstraintKind kind,
                                  const BarrierChain& chain,
                                  const MarginSpec& spec, const Vec& x_hat,
                                  const ReachBox* tube) {
  const LieBundle bundle = chain.lie(x_hat);
  const Vec d0 = Vec::Zero(spec.uncertainty.dist_box.dim());
  const double psi_prev_val = chain.psi_prev(x_hat, d0);

  AffineConstraint c;
  c.a = bundle.lg_psi.transpose();
  c.b = bundle.lf_psi + chain.alphas.back()(psi_prev_val);

  switch (kind) {
    case ConstraintKind::Vanilla:
      break;
    case ConstraintKind::CtRobust:
      c.b -= lipschitz_margin_ct(spec, spec.u_max()) +
             disturbance_margin(chain, x_hat, spec.uncertainty.gamma);
      break;
    case ConstraintKind::SdRobust:
      c.b -= lipschitz_margin_sd(spec, spec.u_max()) +
             disturbance_margin(chain, x_hat, spec.uncertainty.gamma);
      break;
    case ConstraintKind::ReachRobust: {
      if (tube == nullptr)
        throw std::invalid_argument(
            "build_constraint: reach_robust requires a tube");
      const double margin = chain.margin_sup_box(
          to_ibox(*tube), x_hat, to_ibox(spec.input_box),
          to_ibox(spec.uncertainty.dist_box));
      c.b -= margin;
      break;
    }
  }
  return c;
}

namespace {

struct Candidate {
  Vec u;
  double objective;
  int clamped;  // active box faces
};

// Lexicographic comparison for deterministic tie-breaking.
bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

bool better(const Candidate& a, const Candidate& b) {
  if (a.objective != b.objective) return a.objective < b.objective;
  if (a.clamped != b.clamped) return a.clamped < b.clamped;
  return lex_less(a.u, b.u);
}

}  // namespace

FilterResult solve_safety_filter(const Vec& u_perf, const AffineConstraint& c,
                                 const BoxSet& box) {
  if (box.degenerate())
    throw std::invalid_argument("solve_safety_filter: degenerate input box");
  const int q = box.dim();

  // Constraint inactive: the box projection of u_perf is the unconstrained
  // optimum; if feasible it is the answer.
  const Vec proj = box.clip(u_perf);
  if (c.value(proj) >= 0.0)
    return {proj, c.value(proj), true, FilterMode::Inactive};

  // Enumerate active-constraint candidates over every assignment of box
  // faces: each coordinate free, at its lower or at its upper bound. Free
  // coordinates minimize distance to u_perf on the constraint hyperplane.
  constexpr double kFeasTol = 1e-9;
  std::optional<Candidate> best;
  const int total = static_cast<int>(std::pow(3, q));
  for (int code = 0; code < total; ++code) {
    Vec u(q);
    double clamped_av = 0.0;
    double free_norm2 = 0.0, free_aw = 0.0;
    std::vector<int> free_idx;
    int rem = code;
    int clamped = 0;
    for (int i = 0; i < q; ++i, rem /= 3) {
      const int state = rem % 3;
      if (state == 0) {
        free_idx.push_back(i);
      } else {
        u[i] = state == 1 ? box.lo[i] : box.hi[i];
        clamped_av += c.a[i] * u[i];
        ++clamped;
      }
    }
    for (int i : free_idx) {
      free_norm2 += c.a[i] * c.a[i];
      free_aw += c.a[i] * u_perf[i];
    }

    if (free_idx.empty()) {
      // Vertex: feasible iff it satisfies the constraint outright.
      if (c.value(u) < 0.0) continue;
    } else {
      if (free_norm2 <= 0.0) continue;  // constraint cannot bind on free coords
      const double lambda = (-c.b - clamped_av - free_aw) / free_norm2;
      bool ok = true;
      for (int i : free_idx) {
        u[i] = u_perf[i] + lambda * c.a[i];
        if (u[i] < box.lo[i] - kFeasTol || u[i] > box.hi[i] + kFeasTol)
          ok = false;
      }
      if (!ok) continue;
      for (int i : free_idx) u[i] = std::clamp(u[i], box.lo[i], box.hi[i]);
    }

    Candidate cand{u, 0.5 * (u - u_perf).squaredNorm(), clamped};
    if (!best || better(cand, *best)) best = cand;
  }

  if (best) {
    const double slack = c.value(best->u);
    return {best->u, slack, true, FilterMode::Active};
  }

  // No feasible point in the box: best-effort clamp to the vertex with the
  // largest slack (lexicographically smallest on ties).
  Vec u_best;
  double slack_best = -std::numeric_limits<double>::infinity();
  for (const Vec& v : box.corners()) {
    const double s = c.value(v);
    if (s > slack_best || (s == slack_best && lex_less(v, u_best))) {
      slack_best = s;
      u_best = v;
    }
  }
  return {u_best, slack_best, false, FilterMode::ClampedInfeasible};
}

Vec grid_oracle(const Vec& u_perf, const AffineConstraint& c,
                const BoxSet& box, double resolution) {
  if (resolution <= 0.0)
    throw std::invalid_argument("grid_oracle: resolution must be > 0");
  const int q = box.dim();
  std::vector<int> steps(static_cast<std::size_t>(q));
  std::vector<std::vector<double>> axis(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    const auto k = static_cast<std::size_t>(i);
    steps[k] = static_cast<int>(std::ceil((box.hi[i] - box.lo[i]) / resolution)) + 1;
    axis[k].resize(static_cast<std::size_t>(steps[k]));
    for (int j = 0; j < steps[k]; ++j)
      axis[k][static_cast<std::size_t>(j)] =
          steps[k] == 1 ? box.lo[i]
                        : box.lo[i] + (box.hi[i] - box.lo[i]) * j / (steps[k] - 1);
  }

  Vec best_feasible, best_any;
  double best_obj = std::numeric_limits<double>::infinity();
  double best_slack = -std::numeric_limits<double>::infinity();

  if (q == 2) {
    // Hot path: the scan is quadratic in 1/resolution.
    for (double u1 : axis[1]) {
      const double base = c.a[1] * u1 + c.b;
      const double d1 = u1 - u_perf[1];
      const double obj1 = 0.5 * d1 * d1;
      for (double u0 : axis[0]) {
        const double slack = c.a[0] * u0 + base;
        const double d0 = u0 - u_perf[0];
        const double obj = 0.5 * d0 * d0 + obj1;
        if (slack >= 0.0 && obj < best_obj) {
          best_obj = obj;
          best_feasible = (Vec(2) << u0, u1).finished();
        }
        if (slack > best_slack) {
          best_slack = slack;
          best_any = (Vec(2) << u0, u1).finished();
        }
      }
    }
    return best_feasible.size() > 0 ? best_feasible : best_any;
  }

  std::vector<int> idx(static_cast<std::size_t>(q), 0);
  while (true) {
    Vec u(q);
    for (int i = 0; i < q; ++i)
      u[i] = axis[static_cast<std::size_t>(i)]
                 [static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    const double slack = c.value(u);
    if (slack >= 0.0) {
      const double obj = 0.5 * (u - u_perf).squaredNorm();
      if (obj < best_obj) {
        best_obj = obj;
        best_feasible = u;
      }
    }
    if (slack > best_slack) {
      best_slack = slack;
      best_any = u;
    }

    int i = 0;
    for (; i < q; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (++idx[k] < steps[k]) break;
      idx[k] = 0;
    }
    if (i == q) break;
  }
  return best_feasible.size() > 0 ? best_feasible : best_any;
}

}  // namespace drcbf
