#pragma once

// Self-consistent steady state. The mechanical displacements depend on the
// third cavity's intensity I3 = |a3s|^2, which feeds back into the effective
// detunings, making I3 the root of a cubic:
//
//   I3 * (kappa_3^2 + (delta_a3 - beta*I3)^2) = |D_d|^2,
//   beta = 2 * [o_m31^2 w_m1/(g_1^2+w_m1^2) + o_m32^2 w_m2/(g_2^2+w_m2^2)].
//
// Everything else follows in closed form from the selected root.

#include <array>
#include <vector>

#include "oms/model.hpp"

namespace oms {

struct steady_state_solution {
  cx a1s{}, a2s{}, a3s{};
  cx b1s{}, b2s{};
  double delta_1 = 0, delta_2 = 0, delta_3 = 0;  // effective detunings
  int branch_index = 0;  // index into the ascending root list
  double residual = 0;   // max defect of the five fixed-point equations
};

enum class branch_policy { all_roots, smallest_intensity, fixed_point_attractor };

// D_d = omega_d1 e^{i phi_d1} + omega_d2 e^{i phi_d2}
cx drive_superposition(const drive_params& d);

// the back-action coefficient beta above
double intensity_feedback_beta(const system_params& p);

// All real non-negative roots I3, ascending. Analytic cubic plus one Newton
// polish per root; each root's cubic defect is <= 1e-9 |D_d|^2 (throws
// std::runtime_error if polishing cannot reach that).
std::vector<double> solve_intensity_cubic(const system_params& p);

// Steady state on every branch, ascending by I3.
std::vector<steady_state_solution> steady_state_branches(const system_params& p);

// Damped fixed-point iterate for I3, started from the zero-back-action
// seed |D_d|^2/(kappa_3^2 + delta_a3^2). The step shrinks whenever the
// residual grows, so steep single-branch maps still contract. Converges to
// the attracting branch independently of the cubic solver; throws
// std::runtime_error if it does not settle within 2e5 iterations.
double fixed_point_intensity(const system_params& p);

// Steady state under a branch policy. all_roots is rejected here (use
// steady_state_branches); fixed_point_attractor runs a damped iteration on
// I3 from the zero-coupling seed and reports the branch it lands on, or
// throws if the iteration does not settle within the cap.
steady_state_solution steady_state(
    const system_params& p,
    branch_policy policy = branch_policy::smallest_intensity);

// max |lhs - rhs| over the five steady-state equations with s substituted
double steady_state_residual(const system_params& p,
                             const steady_state_solution& s);

// Inverts the detuning shift: given effective targets (d1, d2, d3), returns
// the bare detunings (delta_a1, delta_a2, delta_a3) that reproduce them.
// With d3 fixed, I3 = |D_d|^2/(kappa_3^2 + d3^2) is explicit and the shifts
// follow directly.
std::array<double, 3> bare_from_effective(const system_params& p, double d1,
                                          double d2, double d3);

// convenience: copy of p with delta_a set from effective targets
system_params with_effective_detunings(const system_params& p, double d1,
                                       double d2, double d3);

}  // namespace oms
