#pragma once

// Config front end. A job description is a small TOML-style file with two
// sections:
//
//   [system]   # parameters, optionally anchored to a named preset
//   preset = "fig2a"
//   frequencies = "linear"        # how Hz-suffixed values are read:
//                                 # linear: 73 MHz -> 2*pi*73e6 rad/s
//                                 # angular: 73 MHz -> 73e6 rad/s
//   kappa_1 = 73 MHz              # needs the flag above
//   omega_d1 = 2 x omega_m1       # multiples of the resolved omega_m1
//   phi_p1 = -2pi/3               # phases in radians, pi-expressions allowed
//   convention = "rotated"        # default
//   branch = "smallest_intensity" # default
//   delta_1 = 1 x omega_m1        # effective detuning targets (all three or
//                                 # none); they win over bare delta_a values
//
//   [job]
//   kind = "spectrum"             # steady_state | spectrum | sweep1d |
//                                 # sweep2d | verify
//   x_min = -0.2                  # probe offsets, multiples of omega_m1
//   x_max = 0.2
//   x_count = 2001
//   axis_param = "O_m3"           # sweeps; axis2_* for the second axis
//   axis_start = 0
//   axis_stop = 48.5 MHz
//   axis_count = 201
//   points = 5                    # verify
//   seed = 12345
//   tolerance = 0.005
//   out = "spectrum.csv"
//   format = "csv"
//   threads = 8
//
// Unknown keys, duplicate keys, missing unit suffixes, and malformed lines
// are hard errors carrying the offending line number. The parsed result is
// fully resolved to rad/s.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oms/model.hpp"
#include "oms/steady_state.hpp"
#include "oms/sweep.hpp"

namespace oms {

struct config_error : std::runtime_error {
  int line;  // 0 when no specific line applies
  config_error(int l, const std::string& msg)
      : std::runtime_error(l > 0 ? "line " + std::to_string(l) + ": " + msg
                                 : msg),
        line(l) {}
};

struct job_spec {
  enum class kind_t { steady_state, spectrum, sweep1d, sweep2d, verify };
  enum class format_t { csv, json };

  kind_t kind = kind_t::spectrum;
  bool kind_explicit = false;  // true when the config named the kind itself
  system_params params;        // rad/s
  std::optional<std::array<double, 3>> effective_targets;  // rad/s

  double x_min = -0.2;  // probe offsets as multiples of omega_m1
  double x_max = 0.2;
  int x_count = 2001;

  std::optional<sweep_axis> axis1;  // rates in rad/s, phases in radians
  std::optional<sweep_axis> axis2;

  branch_policy policy = branch_policy::smallest_intensity;

  int verify_points = 5;
  std::uint64_t seed = 12345;
  double verify_tolerance = 0.005;

  std::string output_path;            // empty: default name per kind
  std::optional<format_t> format;     // default: csv for grids, json otherwise
  int threads = 0;                    // 0: pick hardware concurrency
  std::string preset_name;            // empty when not preset-anchored
};

// Parses a config file. preset_hint, when nonempty, anchors the system
// exactly as a `preset = "..."` key would; supplying both with different
// names is an error.
job_spec parse_config(const std::string& text,
                      const std::string& preset_hint = "");

// Job built from a preset alone (no config file).
job_spec default_job(const std::string& preset_name, job_spec::kind_t kind);

// Emits a config that re-parses to an equivalent job (rad/s values with the
// angular flag, so numbers survive the round trip verbatim).
std::string serialize_config(const job_spec& js);

std::vector<double> job_x_grid(const job_spec& js);

const char* kind_name(job_spec::kind_t k);

}  // namespace oms
