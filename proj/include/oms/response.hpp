#pragma once

// Linearized sideband response to the two-port probe. Two independent
// computation paths are kept side by side on purpose:
//   - closed_form_delta_a: the eliminated expressions in terms of
//     U_i, V_j, zeta, zeta', D;
//   - solve_fluctuation_system: direct Gaussian elimination on the five
//     coupled fluctuation equations.
// They must agree to 1e-10 relative for every valid input; that identity is
// the module's master self-check.

#include <utility>
#include <vector>

#include "oms/model.hpp"
#include "oms/steady_state.hpp"

namespace oms {

struct response_coefficients {
  cx u1{}, u2{}, u3{};  // optical denominators
  cx v1{}, v2{};        // mechanical denominators
  cx zeta{}, zeta_prime{};
  cx d_probe{};  // D = omega_p1 e^{i phi_p1} + omega_p2 e^{i phi_p2}
};

struct fluctuation_amplitudes {
  cx da1p{}, da2p{}, da3p{};  // optical sideband coefficients
  cx db1p{}, db2p{};          // mechanical sideband coefficients
  double x = 0;               // evaluation argument
};

struct transmission_point {
  double x = 0;        // probe detuning offset from omega_m1
  double delta_p = 0;  // probe-drive detuning x + omega_m1
  cx eps_out_1{}, eps_out_2{};
  double t_21 = 0;  // |eps_out_1 / omega_p2|^2, port 2 -> port 1
  double t_12 = 0;  // |eps_out_2 / omega_p1|^2, port 1 -> port 2
};

cx probe_superposition(const probe_params& p);

// Denominator symbols under the active convention.
//   literal: U_i = i x - i delta_a_i - kappa_i, V_j = i x - i omega_mj - gamma_j
//   rotated: U_i = -i x - i (Delta_i - omega_m1) - kappa_i,
//            V_j = -i x - i (omega_mj - omega_m1) - gamma_j
// The rotated frame measures the probe offset from the first mechanical
// sideband of the effective-detuning resonances, with the sign chosen so
// the amplified channel of a detuning-split system appears at negative x.
// zeta  = U3 V1 - o_m1 o_m31 a1s a3s*
// zeta' = U3 V2 - o_m2 o_m32 a2s a3s*
response_coefficients compute_coefficients(const system_params& p,
                                           const steady_state_solution& s,
                                           double x);

// Eliminated expressions for the two port amplitudes. Throws
// std::runtime_error when the shared denominator is within 1e-12 of zero on
// its natural scale (possible only at zero damping).
std::pair<cx, cx> closed_form_delta_a(const system_params& p,
                                      const steady_state_solution& s,
                                      double x);

// Direct 5x5 complex solve with partial pivoting; independent of the closed
// form. Throws std::runtime_error on a singular system.
fluctuation_amplitudes solve_fluctuation_system(const system_params& p,
                                                const steady_state_solution& s,
                                                double x);

// max row defect |M y - rhs| of the fluctuation system at y = fl, relative
// to the probe scale |D|
double fluctuation_defect(const system_params& p,
                          const steady_state_solution& s,
                          const fluctuation_amplitudes& fl);

// eps_out_1 = 2 kappa_1 da1p - omega_p1, eps_out_2 = 2 kappa_2 da2p - omega_p2
std::pair<cx, cx> output_fields(const system_params& p, cx da1p, cx da2p);

// full pipeline at one x for a known steady state
transmission_point transmission_from_steady(const system_params& p,
                                            const steady_state_solution& s,
                                            double x);

// full pipeline including the steady-state solve; rejects zero probe
// strengths (they divide the transmission definitions)
transmission_point transmission_at(
    const system_params& p, double x,
    branch_policy policy = branch_policy::smallest_intensity);

// one point per grid value; the steady state is solved once and reused
// (it does not depend on x)
std::vector<transmission_point> spectrum(
    const system_params& p, const std::vector<double>& grid,
    branch_policy policy = branch_policy::smallest_intensity);

}  // namespace oms
