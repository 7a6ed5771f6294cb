#pragma once

// Parameter-sweep engine. A sweep walks one or two named parameter axes,
// re-solves the steady state at every axis cell (the axis may move it),
// evaluates the probe transmissions over an x grid, and assembles a dense,
// order-deterministic result that is identical for any worker count.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "oms/response.hpp"
#include "oms/steady_state.hpp"

namespace oms {

struct sweep_axis {
  // field name: kappa_1..3, delta_a1..3, omega_m2, gamma_1..2, o_m1, o_m2,
  // o_m31, o_m32, omega_d1..2, phi_d1..2, omega_p1..2, phi_p1..2, delta_p;
  // derived: "O_m3" sets o_m31 = o_m32, "phi_rel" adds half the value to each
  // probe phase, "x" makes the axis the probe offset itself
  std::string parameter_path;
  double start = 0;
  double stop = 0;
  int count = 0;

  enum class scaling { linear };
  scaling scale = scaling::linear;

  double value(int i) const;
};

struct sweep_options {
  branch_policy policy = branch_policy::smallest_intensity;
  // worker threads; <= 0 picks the hardware concurrency
  int threads = 1;
  // effective detuning targets (delta_1, delta_2, delta_3), re-applied after
  // every axis assignment so the targets hold at each grid point
  std::optional<std::array<double, 3>> effective_targets;
};

struct sweep_grid {
  sweep_axis axis1;
  std::optional<sweep_axis> axis2;
  std::vector<double> x_grid;

  // dense, axis1-major, then axis2, then x; errors align with data (empty
  // string = clean point, otherwise the solver message, with the point's
  // transmissions left NaN)
  std::vector<transmission_point> data;
  std::vector<std::string> errors;
  std::vector<int> branch;  // steady-state branch index per point
  bool branch_switched = false;

  int count2() const { return axis2 ? axis2->count : 1; }
  std::size_t x_count() const { return x_grid.empty() ? 1 : x_grid.size(); }
  std::size_t index(int i1, int i2, std::size_t ix) const {
    return (static_cast<std::size_t>(i1) * count2() + i2) * x_count() + ix;
  }
};

sweep_grid sweep_1d(const system_params& p, const sweep_axis& axis,
                    const std::vector<double>& x_grid,
                    const sweep_options& opt = {});

// two parameter axes; pass parameter_path "x" on one of them to use the axis
// itself as the probe offset, in which case x_grid must be empty
sweep_grid sweep_2d(const system_params& p, const sweep_axis& axis1,
                    const sweep_axis& axis2,
                    const std::vector<double>& x_grid,
                    const sweep_options& opt = {});

// parameter-path classification, shared with the config front end
bool known_parameter_path(const std::string& path);
// true for the radian-valued paths (phi_*, phi_rel); "x" and rates are false
bool phase_parameter_path(const std::string& path);

enum class channel { t_12, t_21 };

struct peak {
  double position = 0;  // parabolically refined x
  double height = 0;    // refined height
  double fwhm = 0;      // half-height width, linear interpolation
};

// interior local maxima above min_height, ascending by position
std::vector<peak> find_peaks(const std::vector<transmission_point>& spectrum,
                             channel which, double min_height);

}  // namespace oms
