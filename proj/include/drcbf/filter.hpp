#pragma once

#include "drcbf/barrier.hpp"
#include "drcbf/margins.hpp"
#include "drcbf/reach.hpp"

namespace drcbf {

/// Robust safety constraint a*u + b >= 0, affine in the input.
struct AffineConstraint {
  Vec a;
  double b = 0.0;

  double value(const Vec& u) const { return a.dot(u) + b; }
};

enum class ConstraintKind { Vanilla, CtRobust, SdRobust, ReachRobust };

enum class FilterMode { Inactive, Active, ClampedInfeasible };

struct FilterResult {
  Vec u_safe;
  double slack = 0.0;   // a*u_safe + b
  bool feasible = true;
  FilterMode mode = FilterMode::Inactive;
};

/// Build the safety constraint at the state estimate.
///
///  - Vanilla:     a = L_g psi_{m-1}, b = L_f psi_{m-1} + alpha_m(psi_{m-1}).
///  - CtRobust:    vanilla b minus eps*(l_Lf + l_alpha) + eps*l_Lg*u_max
///                 + ||L_p psi_{m-1}|| * gamma.
///  - SdRobust:    vanilla b minus (l_Lf + l_Lg*u_max + l_alpha)*v(z)
///                 + ||L_p psi_{m-1}|| * gamma.
///  - ReachRobust: vanilla b minus the margin supremum over
///                 tube x input box x disturbance box (tube required).
AffineConstraint build_constraint(ConstraintKind kind,
                                  const BarrierChain& chain,
                                  const MarginSpec& spec, const Vec& x_hat,
                                  const ReachBox* tube = nullptr);

/// Exact minimizer of 0.5*||u - u_perf||^2 subject to the constraint and box
/// bounds, by KKT active-set enumeration. Infeasible instances return the box
/// vertex maximizing the slack, flagged in-band: a runtime filter must always
/// output some input.
FilterResult solve_safety_filter(const Vec& u_perf, const AffineConstraint& c,
                                 const BoxSet& box);

/// Brute-force minimizer over a regular grid; test oracle for the solver.
Vec grid_oracle(const Vec& u_perf, const AffineConstraint& c,
                const BoxSet& box, double resolution);

}  // namespace drcbf
