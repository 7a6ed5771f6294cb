#pragma once

// Independent validation path: fixed-step RK4 integration of the five
// nonlinear mean-value ODEs with the explicit time-dependent probe drive,
// followed by lock-in demodulation of the long-time trajectory against the
// probe sideband. Deliberately shares no algebra with response.hpp beyond
// the parameter struct.

#include <array>
#include <optional>
#include <vector>

#include "oms/model.hpp"
#include "oms/steady_state.hpp"

namespace oms {

struct time_grid {
  double t_end = 0;
  double dt = 0;
  double transient_fraction = 0.8;  // leading fraction ignored by analysis
};

struct trajectory {
  std::vector<double> times;
  std::vector<cx> a1, a2, a3, b1, b2;
  size_t size() const { return times.size(); }
};

// Integration options. probe_ramp_time > 0 turns the probe on smoothly
// (smoothstep over [0, ramp], exactly 1 afterwards) so the demodulation
// window sees a fully settled response; 0 means the probe is on from t = 0
// exactly as written in the equations of motion. store_from drops samples
// before that time (the integration itself always starts at 0); stride
// keeps every stride-th step of what remains.
struct integration_options {
  double probe_ramp_time = 0;
  double store_from = 0;
  int stride = 1;
};

// Drive-frame integration of the mean-value equations. Each optical mode is
// fed by the full two-port drive sum and the full two-port probe sum at
// detuning delta_p; mechanical modes are pushed by the third cavity's
// intensity. init order: a1, a2, a3, b1, b2. Throws std::invalid_argument
// on a grid violating dt <= 0.05/max(omega_m, |delta_a|, kappa) or the
// t_end/dt <= 1e8 cost guard, std::runtime_error if any amplitude exceeds
// 1e6 times the drive scale (divergence).
trajectory integrate_mean_field(const system_params& p, const time_grid& g,
                                const std::array<cx, 5>& init,
                                const integration_options& opt = {});

// Same dynamics integrated in the co-rotating frame (each a_i carried at
// its bare detuning, each b_j at its resonance), mapped back to drive-frame
// variables before returning. Agrees with integrate_mean_field to the
// integrator tolerance; the fast phases are handled by exact rotors instead
// of being resolved by the step size.
trajectory integrate_rotated_frame(const system_params& p, const time_grid& g,
                                   const std::array<cx, 5>& init,
                                   const integration_options& opt = {});

// Projects the post-transient residual of each stored mode onto e^{-i nu t}
// (discrete inner product), returning the sideband coefficient estimates in
// order (a1, a2, a3, b1, b2). The baseline subtracted per mode is `steady`
// when given, otherwise the window mean (exact for nu != 0 over an integer
// number of periods; nu == 0 requires `steady`). Throws std::invalid_argument
// when the post-transient window is shorter than 50 beat periods of nu.
std::array<cx, 5> demodulate_sideband(
    const trajectory& tr, double nu, const time_grid& g,
    const std::optional<std::array<cx, 5>>& steady = std::nullopt);

struct mode_comparison {
  cx analytic{};
  cx demodulated{};
  double rel_err = 0;
};

struct comparison_report {
  std::array<mode_comparison, 5> modes;  // a1, a2, a3, b1, b2
  double max_rel_err = 0;                // over the modes listed as checked
  double tolerance = 0;
  bool pass = false;
  double probe_scale = 1;  // factor applied to probe strengths
};

struct cross_check_options {
  double tolerance = 0.005;
  double probe_fraction = 1e-3;  // target probe/drive ratio
  double dt = 0.02;              // in omega_m1 units
  double demod_periods = 400;    // window length in probe beat periods
  bool rotated_frame = true;     // integrate in the co-rotating frame
  bool optical_only = true;      // grade only a1, a2 deviations
};

// End-to-end oracle at probe offset x (the probe detuning is x + omega_m1):
// scales the probes down to the linear regime, integrates from the steady
// state with a smooth probe turn-on, demodulates at the probe detuning, and
// compares against the direct fluctuation solve evaluated like-for-like in
// the literal convention. Parameters are normalized internally, so the
// report is unit-free.
comparison_report cross_check_response(const system_params& p, double x,
                                       const cross_check_options& opt = {});

}  // namespace oms
