#include "oms/presets.hpp"

#include <cmath>

#include "oms/steady_state.hpp"

namespace oms {

namespace {

// frequency ratios against omega_m1 = 2*pi*12.6 GHz
constexpr double GHZ = 1.0 / 12.6;
constexpr double MHZ = 1.0 / 12600.0;
constexpr double KHZ = MHZ / 1000.0;
// detunings are quoted as raw angular rates (1e9 rad/s), not linear GHz
constexpr double GRADS = 1.0 / (2.0 * M_PI * 12.6);
constexpr double UNIT_SCALE = 2.0 * M_PI * 12.6e9;  // rad/s per unit

system_params base_params() {
  system_params p;
  for (auto& o : p.optical) o.kappa = 73.0 * MHZ;
  p.optical[0].delta_a = 79.96 * GRADS;
  p.optical[1].delta_a = 78.38 * GRADS;
  p.optical[2].delta_a = 84.71 * GRADS;
  p.mech[0].omega_m = 1.0;
  p.mech[1].omega_m = 1.0;
  p.mech[0].gamma = p.mech[1].gamma = 88.0 * KHZ;
  p.coupling.o_m1 = p.coupling.o_m2 = 1.5 * MHZ;
  p.coupling.o_m31 = p.coupling.o_m32 = 1.5 * MHZ;
  p.drive.omega_d1 = p.drive.omega_d2 = 2.0;
  p.probe.omega_p1 = p.probe.omega_p2 = 0.2;
  p.probe.delta_p = 1.0;
  p.conv = convention::rotated;
  p.units = unit_mode::omega_m1_units;
  p.unit_scale = UNIT_SCALE;
  return p;
}

std::vector<scenario_preset> build() {
  const std::vector<double> xg = uniform_grid(-0.2, 0.2, 2001);
  std::vector<scenario_preset> out;

  auto add = [&](std::string name, std::string summary, system_params p,
                 std::optional<std::array<double, 3>> targets,
                 std::optional<sweep_axis> axis = std::nullopt) {
    scenario_preset s;
    s.name = std::move(name);
    s.summary = std::move(summary);
    s.params = std::move(p);
    s.effective_targets = targets;
    s.x_grid = xg;
    s.axis = std::move(axis);
    out.push_back(std::move(s));
  };

  const std::array<double, 3> unit{1.0, 1.0, 1.0};

  add("fig2a", "fig2a: equal effective detunings, baseline two-port spectrum",
      base_params(), unit);
  add("fig2c", "fig2c: detuning split 1.1/0.9, one-sided blocking",
      base_params(), std::array<double, 3>{1.1, 0.9, 1.0});
  add("fig2d", "fig2d: detuning split 0.9/1.1, mirror of fig2c",
      base_params(), std::array<double, 3>{0.9, 1.1, 1.0});

  {
    system_params p = base_params();
    p.optical[0].delta_a = 79.168 * GRADS;
    p.optical[1].delta_a = 79.160 * GRADS;
    p.optical[2].delta_a = 79.96 * GRADS;
    p.coupling.o_m1 = 1.0 * MHZ;
    p.coupling.o_m2 = 60.0 * MHZ;
    p.coupling.o_m31 = p.coupling.o_m32 = 48.5 * MHZ;
    add("fig3a", "fig3a: weak port-1 coupling, strong port-2 coupling",
        p, std::nullopt);
    p.coupling.o_m1 = 60.0 * MHZ;
    p.coupling.o_m2 = 1.0 * MHZ;
    add("fig3b", "fig3b: strong port-1 coupling, weak port-2 coupling",
        p, std::nullopt);
    p.coupling.o_m1 = 1.0 * MHZ;
    p.coupling.o_m2 = 60.0 * MHZ;
    sweep_axis ax;
    ax.parameter_path = "O_m3";
    ax.start = 0.0;
    ax.stop = 48.5 * MHZ;
    ax.count = 201;
    add("fig3cd", "fig3cd: waterfall over O_m3", p, std::nullopt, ax);
  }

  {
    system_params p = base_params();
    p.optical[0].kappa = 83.0 * MHZ;
    p.optical[1].kappa = 3.0 * MHZ;
    add("fig4a", "fig4a: lossy port 1, sharp port 2", p, unit);
    p.optical[0].kappa = 3.0 * MHZ;
    p.optical[1].kappa = 83.0 * MHZ;
    add("fig4b", "fig4b: sharp port 1, lossy port 2", p, unit);
  }

  {
    system_params p = base_params();
    add("fig5a", "fig5a: zero probe phases", p, unit);
    p.probe.phi_p1 = p.probe.phi_p2 = 2.0 * M_PI / 3.0;
    add("fig5b", "fig5b: equal probe phases 2pi/3", p, unit);
    p.probe.phi_p1 = -2.0 * M_PI / 3.0;
    p.probe.phi_p2 = 2.0 * M_PI / 3.0;
    add("fig5c", "fig5c: opposite probe phases +-2pi/3", p, unit);
  }

  {
    system_params p = base_params();
    sweep_axis ax;
    ax.parameter_path = "phi_rel";
    ax.start = -M_PI;
    ax.stop = M_PI;
    ax.count = 201;
    add("fig6", "fig6: transmission map over relative probe-drive phase",
        p, unit, ax);
  }

  return out;
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> g;
  if (count < 1) return g;
  if (count == 1) {
    g.push_back(lo);
    return g;
  }
  g.reserve(count);
  for (int i = 0; i < count; ++i)
    g.push_back(lo + (hi - lo) * static_cast<double>(i) /
                         static_cast<double>(count - 1));
  return g;
}

const std::vector<scenario_preset>& presets() {
  static const std::vector<scenario_preset> table = build();
  return table;
}

const scenario_preset* find_preset(const std::string& name) {
  for (const auto& s : presets())
    if (s.name == name) return &s;
  return nullptr;
}

system_params reconciled_params(const scenario_preset& s) {
  if (!s.effective_targets) return s.params;
  const auto& t = *s.effective_targets;
  return with_effective_detunings(s.params, t[0], t[1], t[2]);
}

}  // namespace oms
