#include "oms/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace oms {

namespace {

constexpr double NAN_T = std::numeric_limits<double>::quiet_NaN();

// assigns one named field; returns false only for the "x" pseudo-path, which
// the caller resolves against the probe offset instead
bool apply_path(system_params& q, const std::string& path, double v) {
  if (path == "kappa_1") q.optical[0].kappa = v;
  else if (path == "kappa_2") q.optical[1].kappa = v;
  else if (path == "kappa_3") q.optical[2].kappa = v;
  else if (path == "delta_a1") q.optical[0].delta_a = v;
  else if (path == "delta_a2") q.optical[1].delta_a = v;
  else if (path == "delta_a3") q.optical[2].delta_a = v;
  // omega_m1 is the frequency unit of the whole grid, never a sweep axis
  else if (path == "omega_m2") q.mech[1].omega_m = v;
  else if (path == "gamma_1") q.mech[0].gamma = v;
  else if (path == "gamma_2") q.mech[1].gamma = v;
  else if (path == "o_m1") q.coupling.o_m1 = v;
  else if (path == "o_m2") q.coupling.o_m2 = v;
  else if (path == "o_m31") q.coupling.o_m31 = v;
  else if (path == "o_m32") q.coupling.o_m32 = v;
  else if (path == "O_m3") q.coupling.o_m31 = q.coupling.o_m32 = v;
  else if (path == "omega_d1") q.drive.omega_d1 = v;
  else if (path == "omega_d2") q.drive.omega_d2 = v;
  else if (path == "phi_d1") q.drive.phi_d1 = v;
  else if (path == "phi_d2") q.drive.phi_d2 = v;
  else if (path == "omega_p1") q.probe.omega_p1 = v;
  else if (path == "omega_p2") q.probe.omega_p2 = v;
  else if (path == "phi_p1") q.probe.phi_p1 = v;
  else if (path == "phi_p2") q.probe.phi_p2 = v;
  else if (path == "delta_p") q.probe.delta_p = v;
  else if (path == "phi_rel") {
    // split the relative phase evenly over the two probe phases
    q.probe.phi_p1 += 0.5 * v;
    q.probe.phi_p2 += 0.5 * v;
  } else if (path == "x") {
    return false;
  } else {
    throw std::invalid_argument("unknown parameter path: " + path);
  }
  return true;
}

void check_axis(const sweep_axis& a) {
  if (a.count < 2) throw std::invalid_argument("axis count must be >= 2");
  if (!(a.start < a.stop))
    throw std::invalid_argument("axis needs start < stop");
  if (a.parameter_path != "x") {
    system_params scratch;
    apply_path(scratch, a.parameter_path, a.start);  // throws if unresolvable
  }
}

bool touches_detuning(const sweep_axis& a) {
  return a.parameter_path == "delta_a1" || a.parameter_path == "delta_a2" ||
         a.parameter_path == "delta_a3";
}

transmission_point nan_point(const system_params& q, double x) {
  transmission_point tp;
  tp.x = x;
  tp.delta_p = x + q.mech[0].omega_m;
  tp.eps_out_1 = tp.eps_out_2 = cx(NAN_T, NAN_T);
  tp.t_21 = tp.t_12 = NAN_T;
  return tp;
}

sweep_grid run_sweep(const system_params& p, const sweep_axis& axis1,
                     const std::optional<sweep_axis>& axis2,
                     const std::vector<double>& x_grid,
                     const sweep_options& opt) {
  check_axis(axis1);
  if (axis2) check_axis(*axis2);
  const bool x1 = axis1.parameter_path == "x";
  const bool x2 = axis2 && axis2->parameter_path == "x";
  if (x1 && x2)
    throw std::invalid_argument("both axes claim the probe offset");
  if ((x1 || x2) && !x_grid.empty())
    throw std::invalid_argument("an x axis conflicts with an explicit x grid");
  if (!x1 && !x2 && x_grid.empty())
    throw std::invalid_argument("x grid must not be empty");
  if (opt.effective_targets &&
      (touches_detuning(axis1) || (axis2 && touches_detuning(*axis2))))
    throw std::invalid_argument(
        "a bare-detuning axis conflicts with effective detuning targets");

  sweep_grid g;
  g.axis1 = axis1;
  g.axis2 = axis2;
  g.x_grid = x_grid;
  const int n2 = g.count2();
  const std::size_t nx = g.x_count();
  const std::size_t total = static_cast<std::size_t>(axis1.count) * n2 * nx;
  g.data.resize(total);
  g.errors.resize(total);
  g.branch.assign(total, -1);

  auto do_cell = [&](std::size_t cell) {
    const int i1 = static_cast<int>(cell / n2);
    const int i2 = static_cast<int>(cell % n2);
    system_params q = p;
    double x_axis = 0;
    bool has_x = false;
    const double v1 = axis1.value(i1);
    if (!apply_path(q, axis1.parameter_path, v1)) {
      x_axis = v1;
      has_x = true;
    }
    if (axis2) {
      const double v2 = axis2->value(i2);
      if (!apply_path(q, axis2->parameter_path, v2)) {
        x_axis = v2;
        has_x = true;
      }
    }
    if (opt.effective_targets) {
      const auto& t = *opt.effective_targets;
      q = with_effective_detunings(q, t[0], t[1], t[2]);
    }

    steady_state_solution sol;
    bool have_sol = false;
    std::string cell_err;
    try {
      sol = steady_state(q, opt.policy);
      have_sol = true;
    } catch (const std::exception& e) {
      cell_err = e.what();
    }

    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t idx = g.index(i1, i2, ix);
      const double x = has_x ? x_axis : x_grid[ix];
      if (!have_sol) {
        g.data[idx] = nan_point(q, x);
        g.errors[idx] = cell_err;
        continue;
      }
      try {
        g.data[idx] = transmission_from_steady(q, sol, x);
        g.branch[idx] = sol.branch_index;
      } catch (const std::exception& e) {
        g.data[idx] = nan_point(q, x);
        g.errors[idx] = e.what();
        g.branch[idx] = sol.branch_index;
      }
    }
  };

  const std::size_t ncells = static_cast<std::size_t>(axis1.count) * n2;
  int workers = opt.threads > 0
                    ? opt.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers == 1 || ncells < 2) {
    for (std::size_t c = 0; c < ncells; ++c) do_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= ncells) return;
        do_cell(c);
      }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), ncells));
    pool.reserve(spawn);
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  int first_branch = -1;
  for (std::size_t i = 0; i < total; ++i) {
    if (g.branch[i] < 0) continue;
    if (first_branch < 0) first_branch = g.branch[i];
    if (g.branch[i] != first_branch) {
      g.branch_switched = true;
      break;
    }
  }
  return g;
}

}  // namespace

bool known_parameter_path(const std::string& path) {
  if (path == "x") return true;
  try {
    system_params scratch;
    apply_path(scratch, path, 0.0);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

bool phase_parameter_path(const std::string& path) {
  return path == "phi_d1" || path == "phi_d2" || path == "phi_p1" ||
         path == "phi_p2" || path == "phi_rel";
}

double sweep_axis::value(int i) const {
  if (count < 2) return start;
  return start + (stop - start) * static_cast<double>(i) /
                     static_cast<double>(count - 1);
}

sweep_grid sweep_1d(const system_params& p, const sweep_axis& axis,
                    const std::vector<double>& x_grid,
                    const sweep_options& opt) {
  return run_sweep(p, axis, std::nullopt, x_grid, opt);
}

sweep_grid sweep_2d(const system_params& p, const sweep_axis& axis1,
                    const sweep_axis& axis2,
                    const std::vector<double>& x_grid,
                    const sweep_options& opt) {
  return run_sweep(p, axis1, axis2, x_grid, opt);
}

std::vector<peak> find_peaks(const std::vector<transmission_point>& spectrum,
                             channel which, double min_height) {
  std::vector<peak> out;
  const std::size_t n = spectrum.size();
  if (n < 3) return out;
  auto yv = [&](std::size_t i) {
    return which == channel::t_12 ? spectrum[i].t_12 : spectrum[i].t_21;
  };
  auto xv = [&](std::size_t i) { return spectrum[i].x; };

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double y0 = yv(i - 1), y1 = yv(i), y2 = yv(i + 1);
    if (!(y1 > min_height)) continue;
    if (!(y1 > y0 && y1 >= y2)) continue;  // plateaus keep their left edge

    const double x0 = xv(i - 1), x1 = xv(i), x2 = xv(i + 1);
    // Newton-form quadratic through the three samples
    const double d1 = (y1 - y0) / (x1 - x0);
    const double d2 = (y2 - y1) / (x2 - x1);
    const double a2 = (d2 - d1) / (x2 - x0);
    double px = x1, ph = y1;
    if (a2 < 0) {
      px = 0.5 * (x0 + x1) - d1 / (2.0 * a2);
      px = std::min(std::max(px, x0), x2);
      ph = y0 + d1 * (px - x0) + a2 * (px - x0) * (px - x1);
    }

    const double half = 0.5 * ph;
    double left = xv(0);
    for (std::size_t j = i; j-- > 0;) {
      if (yv(j) <= half) {
        const double t = (half - yv(j)) / (yv(j + 1) - yv(j));
        left = xv(j) + t * (xv(j + 1) - xv(j));
        break;
      }
    }
    double right = xv(n - 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (yv(j) <= half) {
        const double t = (half - yv(j - 1)) / (yv(j) - yv(j - 1));
        right = xv(j - 1) + t * (xv(j) - xv(j - 1));
        break;
      }
    }

    peak pk;
    pk.position = px;
    pk.height = ph;
    pk.fwhm = std::max(right - left, 0.0);
    out.push_back(pk);
  }
  return out;
}

}  // namespace oms
