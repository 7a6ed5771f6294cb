#include "oms/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>

#include <json.hpp>

#include "oms/presets.hpp"
#include "oms/response.hpp"
#include "oms/time_domain.hpp"

namespace oms {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string basename_of(const std::string& path) {
  const size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

bool is_absolute(const std::string& path) {
  return !path.empty() && path.front() == '/';
}

ordered_json complex_json(const cx& v) {
  return ordered_json::array({v.real(), v.imag()});
}

ordered_json params_json(const system_params& p) {
  ordered_json j;
  j["omega_m1"] = p.mech[0].omega_m;
  j["omega_m2"] = p.mech[1].omega_m;
  j["gamma_1"] = p.mech[0].gamma;
  j["gamma_2"] = p.mech[1].gamma;
  j["kappa_1"] = p.optical[0].kappa;
  j["kappa_2"] = p.optical[1].kappa;
  j["kappa_3"] = p.optical[2].kappa;
  j["delta_a1"] = p.optical[0].delta_a;
  j["delta_a2"] = p.optical[1].delta_a;
  j["delta_a3"] = p.optical[2].delta_a;
  j["o_m1"] = p.coupling.o_m1;
  j["o_m2"] = p.coupling.o_m2;
  j["o_m31"] = p.coupling.o_m31;
  j["o_m32"] = p.coupling.o_m32;
  j["omega_d1"] = p.drive.omega_d1;
  j["omega_d2"] = p.drive.omega_d2;
  j["phi_d1"] = p.drive.phi_d1;
  j["phi_d2"] = p.drive.phi_d2;
  j["omega_p1"] = p.probe.omega_p1;
  j["omega_p2"] = p.probe.omega_p2;
  j["phi_p1"] = p.probe.phi_p1;
  j["phi_p2"] = p.probe.phi_p2;
  j["delta_p"] = p.probe.delta_p;
  return j;
}

const char* policy_name(branch_policy b) {
  switch (b) {
    case branch_policy::all_roots: return "all_roots";
    case branch_policy::smallest_intensity: return "smallest_intensity";
    case branch_policy::fixed_point_attractor: return "fixed_point_attractor";
  }
  return "?";
}

ordered_json axis_json(const sweep_axis& ax) {
  ordered_json j;
  j["param"] = ax.parameter_path;
  j["start"] = ax.start;
  j["stop"] = ax.stop;
  j["count"] = ax.count;
  return j;
}

std::string default_name(const job_spec& js, bool csv) {
  switch (js.kind) {
    case job_spec::kind_t::steady_state: return "steady_state.json";
    case job_spec::kind_t::spectrum: return csv ? "spectrum.csv"
                                                : "spectrum.json";
    case job_spec::kind_t::sweep1d:
    case job_spec::kind_t::sweep2d: return csv ? "sweep.csv" : "sweep.json";
    case job_spec::kind_t::verify: return "verify.json";
  }
  return "out.dat";
}

std::string axis_column(const sweep_axis& ax) {
  if (phase_parameter_path(ax.parameter_path))
    return ax.parameter_path + "_rad";
  return ax.parameter_path + "_over_omega_m1";
}

constexpr const char* SPECTRUM_HEADER =
    "x_over_omega_m1,delta_p_over_omega_m1,T_12,T_21";

std::string spectrum_csv(const std::vector<transmission_point>& pts) {
  std::string s = SPECTRUM_HEADER;
  s += '\n';
  for (const auto& tp : pts) {
    s += csv_number(tp.x);
    s += ',';
    s += csv_number(tp.delta_p);
    s += ',';
    s += csv_number(tp.t_12);
    s += ',';
    s += csv_number(tp.t_21);
    s += '\n';
  }
  return s;
}

std::string spectrum_json(const std::vector<transmission_point>& pts) {
  ordered_json j;
  j["columns"] = {"x_over_omega_m1", "delta_p_over_omega_m1", "T_12", "T_21"};
  auto& rows = j["rows"] = ordered_json::array();
  for (const auto& tp : pts)
    rows.push_back(ordered_json::array({tp.x, tp.delta_p, tp.t_12, tp.t_21}));
  return j.dump(2) + "\n";
}

std::vector<std::string> sweep_columns(const sweep_grid& g) {
  std::vector<std::string> cols;
  if (g.axis1.parameter_path != "x") cols.push_back(axis_column(g.axis1));
  if (g.axis2 && g.axis2->parameter_path != "x")
    cols.push_back(axis_column(*g.axis2));
  cols.insert(cols.end(), {"x_over_omega_m1", "delta_p_over_omega_m1", "T_12",
                           "T_21"});
  return cols;
}

template <typename Row>
void sweep_rows(const sweep_grid& g, Row&& row) {
  const int n2 = g.count2();
  const std::size_t nx = g.x_count();
  for (int i1 = 0; i1 < g.axis1.count; ++i1)
    for (int i2 = 0; i2 < n2; ++i2)
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const auto& tp = g.data[g.index(i1, i2, ix)];
        std::vector<double> vals;
        if (g.axis1.parameter_path != "x") vals.push_back(g.axis1.value(i1));
        if (g.axis2 && g.axis2->parameter_path != "x")
          vals.push_back(g.axis2->value(i2));
        vals.insert(vals.end(), {tp.x, tp.delta_p, tp.t_12, tp.t_21});
        row(vals);
      }
}

std::string sweep_csv(const sweep_grid& g) {
  std::string s;
  const auto cols = sweep_columns(g);
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) s += ',';
    s += cols[i];
  }
  s += '\n';
  sweep_rows(g, [&](const std::vector<double>& vals) {
    for (size_t i = 0; i < vals.size(); ++i) {
      if (i) s += ',';
      s += csv_number(vals[i]);
    }
    s += '\n';
  });
  return s;
}

std::string sweep_json(const sweep_grid& g) {
  ordered_json j;
  j["columns"] = sweep_columns(g);
  auto& rows = j["rows"] = ordered_json::array();
  sweep_rows(g, [&](const std::vector<double>& vals) {
    rows.push_back(ordered_json(vals));
  });
  return j.dump(2) + "\n";
}

ordered_json solution_json(const steady_state_solution& s) {
  ordered_json j;
  j["branch_index"] = s.branch_index;
  j["i3"] = std::norm(s.a3s);
  j["a1s"] = complex_json(s.a1s);
  j["a2s"] = complex_json(s.a2s);
  j["a3s"] = complex_json(s.a3s);
  j["b1s"] = complex_json(s.b1s);
  j["b2s"] = complex_json(s.b2s);
  j["delta_1"] = s.delta_1;
  j["delta_2"] = s.delta_2;
  j["delta_3"] = s.delta_3;
  j["residual"] = s.residual;
  return j;
}

}  // namespace

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> list_presets() {
  std::vector<std::string> out;
  for (const auto& s : presets()) out.push_back(s.summary);
  return out;
}

run_result run_job(const job_spec& js, const std::string& out_dir) {
  run_result rr;

  // everything below runs in omega_m1 units
  const double wn = js.params.units == unit_mode::rad_per_sec
                        ? js.params.mech[0].omega_m
                        : 1.0;
  if (!(wn > 0)) {
    rr.exit_code = 1;
    rr.error = "omega_m1 must be > 0";
    return rr;
  }
  system_params p = normalize_units(js.params, unit_mode::omega_m1_units);
  std::optional<std::array<double, 3>> targets;
  if (js.effective_targets)
    targets = std::array<double, 3>{(*js.effective_targets)[0] / wn,
                                    (*js.effective_targets)[1] / wn,
                                    (*js.effective_targets)[2] / wn};
  if (targets)
    p = with_effective_detunings(p, (*targets)[0], (*targets)[1],
                                 (*targets)[2]);

  const auto report = validate_params(p);
  if (!report.ok()) {
    rr.exit_code = 1;
    rr.error = "invalid parameters";
    for (const auto& e : report.errors) rr.error += "; " + e;
    return rr;
  }

  // axes in omega_m1 units
  auto scaled_axis = [&](const sweep_axis& ax) {
    sweep_axis out = ax;
    if (!phase_parameter_path(ax.parameter_path) &&
        ax.parameter_path != "x") {
      out.start /= wn;
      out.stop /= wn;
    }
    return out;
  };

  const bool csv_default = js.kind == job_spec::kind_t::spectrum ||
                           js.kind == job_spec::kind_t::sweep1d ||
                           js.kind == job_spec::kind_t::sweep2d;
  const bool csv = js.format ? *js.format == job_spec::format_t::csv
                             : csv_default;
  if (csv && (js.kind == job_spec::kind_t::steady_state ||
              js.kind == job_spec::kind_t::verify)) {
    rr.exit_code = 1;
    rr.error = std::string(kind_name(js.kind)) + " reports are JSON only";
    return rr;
  }

  std::string data;
  ordered_json meta;
  meta["tool"] = "oms";
  meta["version"] = oms_version;
  meta["kind"] = kind_name(js.kind);
  meta["preset"] =
      js.preset_name.empty() ? ordered_json() : ordered_json(js.preset_name);
  meta["convention"] =
      p.conv == convention::literal ? "literal" : "rotated";
  meta["branch_policy"] = policy_name(js.policy);
  meta["params_omega_m1_units"] = params_json(p);
  meta["unit_scale_rad_per_s"] = p.unit_scale;
  if (targets) {
    meta["effective_targets_omega_m1_units"] = *targets;
    meta["bare_detunings_recomputed"] = {p.optical[0].delta_a,
                                         p.optical[1].delta_a,
                                         p.optical[2].delta_a};
  } else {
    meta["effective_targets_omega_m1_units"] = nullptr;
  }

  try {
    switch (js.kind) {
      case job_spec::kind_t::steady_state: {
        ordered_json j;
        j["kind"] = "steady_state";
        j["preset"] = meta["preset"];
        j["branch_policy"] = policy_name(js.policy);
        j["roots_i3"] = solve_intensity_cubic(p);
        if (js.policy == branch_policy::all_roots) {
          auto& arr = j["branches"] = ordered_json::array();
          for (const auto& s : steady_state_branches(p))
            arr.push_back(solution_json(s));
        } else {
          j["solution"] = solution_json(steady_state(p, js.policy));
        }
        j["params_omega_m1_units"] = params_json(p);
        j["unit_scale_rad_per_s"] = p.unit_scale;
        data = j.dump(2) + "\n";
        break;
      }
      case job_spec::kind_t::spectrum: {
        const auto pts = spectrum(p, job_x_grid(js), js.policy);
        data = csv ? spectrum_csv(pts) : spectrum_json(pts);
        meta["x_grid"] = {{"min", js.x_min},
                          {"max", js.x_max},
                          {"count", js.x_count}};
        break;
      }
      case job_spec::kind_t::sweep1d:
      case job_spec::kind_t::sweep2d: {
        sweep_options opt;
        opt.policy = js.policy;
        opt.threads = js.threads;
        opt.effective_targets = targets;
        const sweep_axis a1 = scaled_axis(*js.axis1);
        sweep_grid g;
        const bool axis_is_x = a1.parameter_path == "x" ||
                               (js.axis2 && js.axis2->parameter_path == "x");
        const std::vector<double> xg =
            axis_is_x ? std::vector<double>{} : job_x_grid(js);
        if (js.kind == job_spec::kind_t::sweep1d) {
          g = sweep_1d(p, a1, xg, opt);
        } else {
          g = sweep_2d(p, a1, scaled_axis(*js.axis2), xg, opt);
        }
        data = csv ? sweep_csv(g) : sweep_json(g);
        std::size_t failures = 0;
        std::string first_error;
        for (const auto& e : g.errors)
          if (!e.empty()) {
            ++failures;
            if (first_error.empty()) first_error = e;
          }
        meta["x_grid"] = {{"min", js.x_min},
                          {"max", js.x_max},
                          {"count", js.x_count}};
        meta["axis1"] = axis_json(g.axis1);
        meta["axis2"] = g.axis2 ? axis_json(*g.axis2) : ordered_json();
        meta["branch_switched"] = g.branch_switched;
        meta["solver_failures"] = failures;
        if (failures) meta["first_error"] = first_error;
        break;
      }
      case job_spec::kind_t::verify: {
        std::mt19937_64 rng(js.seed);
        std::uniform_real_distribution<double> dist(js.x_min, js.x_max);
        cross_check_options opt;
        opt.tolerance = js.verify_tolerance;
        ordered_json j;
        j["kind"] = "verify";
        j["preset"] = meta["preset"];
        j["points"] = js.verify_points;
        j["seed"] = js.seed;
        j["tolerance"] = js.verify_tolerance;
        j["probe_fraction"] = opt.probe_fraction;
        auto& results = j["results"] = ordered_json::array();
        double worst = 0;
        bool all_pass = true;
        static const char* mode_names[5] = {"a1", "a2", "a3", "b1", "b2"};
        for (int i = 0; i < js.verify_points; ++i) {
          const double x = dist(rng);
          ordered_json r;
          r["x"] = x;
          try {
            const comparison_report rep = cross_check_response(p, x, opt);
            r["max_rel_err"] = rep.max_rel_err;
            r["probe_scale"] = rep.probe_scale;
            r["pass"] = rep.pass;
            auto& modes = r["modes"] = ordered_json::array();
            for (int m = 0; m < 5; ++m) {
              ordered_json mj;
              mj["name"] = mode_names[m];
              mj["graded"] = m < 2;
              mj["analytic"] = complex_json(rep.modes[m].analytic);
              mj["demodulated"] = complex_json(rep.modes[m].demodulated);
              mj["rel_err"] = rep.modes[m].rel_err;
              modes.push_back(std::move(mj));
            }
            worst = std::max(worst, rep.max_rel_err);
            all_pass = all_pass && rep.pass;
          } catch (const std::exception& e) {
            r["error"] = e.what();
            r["pass"] = false;
            all_pass = false;
          }
          results.push_back(std::move(r));
        }
        j["max_rel_err"] = worst;
        j["pass"] = all_pass;
        data = j.dump(2) + "\n";
        meta["verify"] = {{"points", js.verify_points},
                          {"seed", js.seed},
                          {"tolerance", js.verify_tolerance}};
        if (!all_pass) {
          rr.exit_code = 3;
          rr.error = "verification exceeded tolerance";
        }
        break;
      }
    }
  } catch (const std::invalid_argument& e) {
    rr.exit_code = 1;
    rr.error = e.what();
    return rr;
  } catch (const std::exception& e) {
    rr.exit_code = 3;
    rr.error = e.what();
    return rr;
  }

  for (const auto& w : report.warnings) meta["warnings"].push_back(w);
  if (!meta.contains("warnings")) meta["warnings"] = ordered_json::array();
  meta["format"] = csv ? "csv" : "json";
  meta["content_hash_fnv1a64"] = fnv1a64_hex(data);

  std::string name = js.output_path.empty() ? default_name(js, csv)
                                            : js.output_path;
  rr.data_path = is_absolute(name) ? name : out_dir + "/" + name;
  rr.meta_path = rr.data_path + ".meta.json";
  meta["data_file"] = basename_of(rr.data_path);

  {
    std::ofstream f(rr.data_path, std::ios::binary | std::ios::trunc);
    if (!f) {
      rr.exit_code = 2;
      rr.error = "cannot open " + rr.data_path + " for writing";
      rr.data_path.clear();
      rr.meta_path.clear();
      return rr;
    }
    f << data;
    f.close();
    if (!f) {
      rr.exit_code = 2;
      rr.error = "short write to " + rr.data_path;
      return rr;
    }
  }
  {
    std::ofstream f(rr.meta_path, std::ios::binary | std::ios::trunc);
    if (!f) {
      rr.exit_code = 2;
      rr.error = "cannot open " + rr.meta_path + " for writing";
      return rr;
    }
    f << meta.dump(2) << "\n";
    f.close();
    if (!f) {
      rr.exit_code = 2;
      rr.error = "short write to " + rr.meta_path;
      return rr;
    }
  }
  return rr;
}

}  // namespace oms
