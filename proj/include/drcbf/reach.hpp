#pragma once

#include "drcbf/dynamics.hpp"
#include "drcbf/interval.hpp"

namespace drcbf {

/// Interval over-approximation of a reachable set; one interval per state
/// component.
using ReachBox = BoxSet;

/// One interval-RK4 substep of the disturbed dynamics from state box `x`
/// under held input `u` (a box to cover every admissible held input, or a
/// point) and disturbance box `d`, followed by a remainder inflation
/// dt * l_dyn * (stage disagreement) that covers intra-substep flow.
IBox propagate_box(const ControlAffineSystem& sys, const IBox& x,
                   const IBox& u, const IBox& d, double dt, double l_dyn);

/// Box containing x(t) for every initial condition in x_hat (+) meas_box and
/// every disturbance signal in dist_box under the held input. Validated by
/// Monte Carlo containment rather than formal proof.
ReachBox reach_step(const ControlAffineSystem& sys, const Vec& x_hat,
                    const BoxSet& meas_box, const IBox& u_k,
                    const BoxSet& dist_box, double t, int substeps,
                    double l_dyn);
ReachBox reach_step(const ControlAffineSystem& sys, const Vec& x_hat,
                    const BoxSet& meas_box, const Vec& u_k,
                    const BoxSet& dist_box, double t, int substeps,
                    double l_dyn);

/// Interval hull of reach_step over the time grid {i*T/n_sub}: covers every
/// state reachable *through* [0, T], not just at T.
ReachBox reach_tube(const ControlAffineSystem& sys, const Vec& x_hat,
                    const BoxSet& meas_box, const IBox& u_k,
                    const BoxSet& dist_box, double T, int n_sub, double l_dyn);
ReachBox reach_tube(const ControlAffineSystem& sys, const Vec& x_hat,
                    const BoxSet& meas_box, const Vec& u_k,
                    const BoxSet& dist_box, double T, int n_sub, double l_dyn);

/// Component-wise covering box of a non-empty list.
ReachBox hull(const std::vector<ReachBox>& boxes);

}  // namespace drcbf
