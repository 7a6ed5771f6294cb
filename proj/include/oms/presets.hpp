#pragma once

// Named scenario presets. Each preset carries a full parameter set in
// omega_m1 units (unit_scale maps back to rad/s), an optional triple of
// effective-detuning targets that take precedence over the stored bare
// detunings, a default probe-offset grid, and, for the waterfall and
// phase-map scenarios, the secondary sweep axis.

#include <optional>
#include <string>
#include <vector>

#include "oms/model.hpp"
#include "oms/sweep.hpp"

namespace oms {

struct scenario_preset {
  std::string name;
  std::string summary;
  system_params params;  // omega_m1 units, bare detunings as stored
  std::optional<std::array<double, 3>> effective_targets;
  std::vector<double> x_grid;       // default probe offsets
  std::optional<sweep_axis> axis;   // secondary axis, when the scenario has one
};

// all presets in a fixed order; names: fig2a, fig2c, fig2d, fig3a, fig3b,
// fig3cd, fig4a, fig4b, fig5a, fig5b, fig5c, fig6
const std::vector<scenario_preset>& presets();

// nullptr when the name is unknown
const scenario_preset* find_preset(const std::string& name);

// preset parameters with the effective-detuning targets applied (bare
// detunings recomputed); identity when the preset has no targets
system_params reconciled_params(const scenario_preset& s);

// uniform grid helper: count points from lo to hi inclusive
std::vector<double> uniform_grid(double lo, double hi, int count);

}  // namespace oms
