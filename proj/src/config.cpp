#include "oms/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "oms/presets.hpp"

namespace oms {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// cuts an unquoted # comment
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    else if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

struct entry {
  std::string value;
  int line = 0;
  bool used = false;
};
using section_map = std::map<std::string, entry>;

entry* take(section_map& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

double parse_number(const std::string& v, int line, const char* what) {
  const std::string s = trim(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw config_error(line, std::string(what) + " must be a number, got '" +
                                 s + "'");
  return d;
}

long long parse_int(const std::string& v, int line, const char* what) {
  const std::string s = trim(v);
  char* end = nullptr;
  const long long n = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    throw config_error(line, std::string(what) + " must be an integer, got '" +
                                 s + "'");
  return n;
}

std::string parse_string(const std::string& v, int line, const char* what) {
  const std::string s = trim(v);
  if (s.size() < 2 || s.front() != '"' || s.back() != '"')
    throw config_error(line, std::string(what) + " must be a quoted string");
  return s.substr(1, s.size() - 2);
}

// radians: a plain number or a pi-expression like 2pi/3, -pi, 0.5pi
double parse_phase(const std::string& v, int line, const char* what) {
  std::string s;
  for (char ch : v)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty())
    throw config_error(line, std::string(what) + " is empty");
  {
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size()) return d;
  }
  double sign = 1.0;
  size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    if (s[i] == '-') sign = -1.0;
    ++i;
  }
  const size_t pi_pos = s.find("pi", i);
  if (pi_pos == std::string::npos)
    throw config_error(line, std::string(what) +
                                 " must be a number or a pi-expression "
                                 "like 2pi/3, got '" + trim(v) + "'");
  double coef = 1.0;
  if (pi_pos > i) {
    const std::string c = s.substr(i, pi_pos - i);
    char* end = nullptr;
    coef = std::strtod(c.c_str(), &end);
    if (end != c.c_str() + c.size())
      throw config_error(line, std::string(what) + ": bad pi coefficient '" +
                                   c + "'");
  }
  double denom = 1.0;
  const size_t after = pi_pos + 2;
  if (after < s.size()) {
    if (s[after] != '/')
      throw config_error(line, std::string(what) +
                                   ": expected '/' after pi in '" + trim(v) +
                                   "'");
    const std::string d = s.substr(after + 1);
    char* end = nullptr;
    denom = std::strtod(d.c_str(), &end);
    if (d.empty() || end != d.c_str() + d.size() || denom == 0.0)
      throw config_error(line, std::string(what) + ": bad pi divisor '" + d +
                                   "'");
  }
  return sign * coef * M_PI / denom;
}

struct rate_value {
  bool is_multiple = false;  // true: value is a multiple of omega_m1
  double value = 0;          // rad/s, or the multiple
};

// dimensional rate: "<num> GHz|MHz|kHz|Hz" (needs the frequencies flag),
// "<num> x omega_m1", or the bare zero
rate_value parse_rate(const std::string& v, int line, const char* what,
                      const std::optional<bool>& linear) {
  std::istringstream ss(trim(v));
  std::vector<std::string> tok;
  std::string t;
  while (ss >> t) tok.push_back(t);
  const std::string err =
      std::string(what) +
      " needs a unit suffix (GHz/MHz/kHz/Hz), an 'x omega_m1' multiple, or 0";

  if (tok.size() == 1) {
    char* end = nullptr;
    const double d = std::strtod(tok[0].c_str(), &end);
    if (end == tok[0].c_str() + tok[0].size() && d == 0.0)
      return {false, 0.0};
    throw config_error(line, err);
  }
  if (tok.size() == 2) {
    char* end = nullptr;
    const double d = std::strtod(tok[0].c_str(), &end);
    if (end != tok[0].c_str() + tok[0].size()) throw config_error(line, err);
    double mult;
    if (tok[1] == "GHz") mult = 1e9;
    else if (tok[1] == "MHz") mult = 1e6;
    else if (tok[1] == "kHz") mult = 1e3;
    else if (tok[1] == "Hz") mult = 1.0;
    else throw config_error(line, err);
    if (!linear)
      throw config_error(
          line, std::string(what) +
                    ": Hz-suffixed values need frequencies = \"linear\" or "
                    "\"angular\" first");
    return {false, *linear ? 2.0 * M_PI * d * mult : d * mult};
  }
  if (tok.size() == 3 && tok[1] == "x" && tok[2] == "omega_m1") {
    char* end = nullptr;
    const double d = std::strtod(tok[0].c_str(), &end);
    if (end != tok[0].c_str() + tok[0].size()) throw config_error(line, err);
    return {true, d};
  }
  throw config_error(line, err);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      return false;
  return true;
}

void parse_sections(const std::string& text, section_map& sys,
                    section_map& job) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string section;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(lineno, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name != "system" && name != "job")
        throw config_error(lineno, "unknown section [" + name +
                                       "] (expected [system] or [job])");
      section = name;
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key))
      throw config_error(lineno, "bad key name '" + key + "'");
    if (value.empty())
      throw config_error(lineno, "empty value for '" + key + "'");
    if (section.empty())
      throw config_error(lineno, "key '" + key + "' outside a section");
    section_map& m = section == "system" ? sys : job;
    if (m.count(key))
      throw config_error(lineno, "duplicate key '" + key + "'");
    m[key] = entry{value, lineno, false};
  }
}

void anchor_preset(job_spec& js, const scenario_preset& sp) {
  js.preset_name = sp.name;
  const double scale = sp.params.unit_scale;
  js.params = normalize_units(sp.params, unit_mode::rad_per_sec);
  if (sp.effective_targets) {
    js.effective_targets = std::array<double, 3>{
        (*sp.effective_targets)[0] * scale, (*sp.effective_targets)[1] * scale,
        (*sp.effective_targets)[2] * scale};
  }
  if (!sp.x_grid.empty()) {
    js.x_min = sp.x_grid.front();
    js.x_max = sp.x_grid.back();
    js.x_count = static_cast<int>(sp.x_grid.size());
  }
  if (sp.axis) {
    sweep_axis ax = *sp.axis;
    if (!phase_parameter_path(ax.parameter_path) &&
        ax.parameter_path != "x") {
      ax.start *= scale;
      ax.stop *= scale;
    }
    js.axis1 = ax;
  }
}

struct axis_keys {
  const char* param;
  const char* start;
  const char* stop;
  const char* count;
};

std::optional<sweep_axis> parse_axis(section_map& job, const axis_keys& k,
                                     const std::optional<bool>& linear,
                                     double omega_m1) {
  entry* ep = take(job, k.param);
  entry* es = take(job, k.start);
  entry* et = take(job, k.stop);
  entry* ec = take(job, k.count);
  if (!ep && !es && !et && !ec) return std::nullopt;
  if (!ep)
    throw config_error((es ? es : et ? et : ec)->line,
                       std::string(k.param) + " is required for an axis");
  sweep_axis ax;
  ax.parameter_path = parse_string(ep->value, ep->line, k.param);
  if (!known_parameter_path(ax.parameter_path))
    throw config_error(ep->line,
                       "unknown parameter path '" + ax.parameter_path + "'");
  if (!es || !et || !ec)
    throw config_error(ep->line, "axis needs start, stop, and count");
  const bool phase_like = phase_parameter_path(ax.parameter_path) ||
                          ax.parameter_path == "x";
  auto bound = [&](entry* e, const char* what) {
    if (phase_like) return parse_phase(e->value, e->line, what);
    const rate_value rv = parse_rate(e->value, e->line, what, linear);
    if (rv.is_multiple) {
      if (!(omega_m1 > 0))
        throw config_error(e->line,
                           "omega_m1 must be set before 'x omega_m1'");
      return rv.value * omega_m1;
    }
    return rv.value;
  };
  ax.start = bound(es, k.start);
  ax.stop = bound(et, k.stop);
  const long long n = parse_int(ec->value, ec->line, k.count);
  if (n < 2 || n > 1000000)
    throw config_error(ec->line, "axis count must be in [2, 1e6]");
  ax.count = static_cast<int>(n);
  if (!(ax.start < ax.stop))
    throw config_error(es->line, "axis needs start < stop");
  return ax;
}

void check_unused(const section_map& m, const char* section) {
  for (const auto& [key, e] : m)
    if (!e.used)
      throw config_error(e.line, "unknown key '" + key + "' in [" + section +
                                     "]");
}

job_spec::kind_t parse_kind(const std::string& s, int line) {
  if (s == "steady_state") return job_spec::kind_t::steady_state;
  if (s == "spectrum") return job_spec::kind_t::spectrum;
  if (s == "sweep1d") return job_spec::kind_t::sweep1d;
  if (s == "sweep2d") return job_spec::kind_t::sweep2d;
  if (s == "verify") return job_spec::kind_t::verify;
  throw config_error(line, "unknown kind '" + s +
                               "' (steady_state | spectrum | sweep1d | "
                               "sweep2d | verify)");
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* kind_name(job_spec::kind_t k) {
  switch (k) {
    case job_spec::kind_t::steady_state: return "steady_state";
    case job_spec::kind_t::spectrum: return "spectrum";
    case job_spec::kind_t::sweep1d: return "sweep1d";
    case job_spec::kind_t::sweep2d: return "sweep2d";
    case job_spec::kind_t::verify: return "verify";
  }
  return "?";
}

std::vector<double> job_x_grid(const job_spec& js) {
  return uniform_grid(js.x_min, js.x_max, js.x_count);
}

job_spec parse_config(const std::string& text, const std::string& preset_hint) {
  section_map sys, job;
  parse_sections(text, sys, job);

  job_spec js;

  // preset anchoring
  std::string preset = preset_hint;
  int preset_line = 0;
  if (entry* e = take(sys, "preset")) {
    const std::string name = parse_string(e->value, e->line, "preset");
    preset_line = e->line;
    if (!preset_hint.empty() && name != preset_hint)
      throw config_error(e->line, "config names preset '" + name +
                                      "' but '" + preset_hint +
                                      "' was requested");
    preset = name;
  }
  if (!preset.empty()) {
    const scenario_preset* sp = find_preset(preset);
    if (!sp)
      throw config_error(preset_line, "unknown preset '" + preset + "'");
    anchor_preset(js, *sp);
  }

  std::optional<bool> linear;
  if (entry* e = take(sys, "frequencies")) {
    const std::string f = parse_string(e->value, e->line, "frequencies");
    if (f == "linear") linear = true;
    else if (f == "angular") linear = false;
    else
      throw config_error(e->line,
                         "frequencies must be \"linear\" or \"angular\"");
  }

  // dimensional rates, two passes so omega_m1 can be referenced
  struct slot { const char* key; double* target; };
  system_params& p = js.params;
  const slot rate_slots[] = {
      {"omega_m1", &p.mech[0].omega_m},
      {"omega_m2", &p.mech[1].omega_m},
      {"kappa_1", &p.optical[0].kappa},
      {"kappa_2", &p.optical[1].kappa},
      {"kappa_3", &p.optical[2].kappa},
      {"delta_a1", &p.optical[0].delta_a},
      {"delta_a2", &p.optical[1].delta_a},
      {"delta_a3", &p.optical[2].delta_a},
      {"gamma_1", &p.mech[0].gamma},
      {"gamma_2", &p.mech[1].gamma},
      {"o_m1", &p.coupling.o_m1},
      {"o_m2", &p.coupling.o_m2},
      {"o_m31", &p.coupling.o_m31},
      {"o_m32", &p.coupling.o_m32},
      {"omega_d1", &p.drive.omega_d1},
      {"omega_d2", &p.drive.omega_d2},
      {"omega_p1", &p.probe.omega_p1},
      {"omega_p2", &p.probe.omega_p2},
      {"delta_p", &p.probe.delta_p},
  };
  struct pending { double* target; double multiple; int line; };
  std::vector<pending> multiples;
  for (const slot& s : rate_slots) {
    entry* e = take(sys, s.key);
    if (!e) continue;
    const rate_value rv = parse_rate(e->value, e->line, s.key, linear);
    if (rv.is_multiple) {
      if (s.target == &p.mech[0].omega_m)
        throw config_error(e->line, "omega_m1 cannot reference itself");
      multiples.push_back({s.target, rv.value, e->line});
    } else {
      *s.target = rv.value;
    }
  }
  for (const pending& m : multiples) {
    if (!(p.mech[0].omega_m > 0))
      throw config_error(m.line,
                         "omega_m1 must be set before 'x omega_m1' multiples");
    *m.target = m.multiple * p.mech[0].omega_m;
  }

  const struct { const char* key; double* target; } phase_slots[] = {
      {"phi_d1", &p.drive.phi_d1},
      {"phi_d2", &p.drive.phi_d2},
      {"phi_p1", &p.probe.phi_p1},
      {"phi_p2", &p.probe.phi_p2},
  };
  for (auto& s : phase_slots)
    if (entry* e = take(sys, s.key))
      *s.target = parse_phase(e->value, e->line, s.key);

  // effective detuning targets: all three or none
  {
    entry* e1 = take(sys, "delta_1");
    entry* e2 = take(sys, "delta_2");
    entry* e3 = take(sys, "delta_3");
    const int have = (e1 != nullptr) + (e2 != nullptr) + (e3 != nullptr);
    if (have != 0 && have != 3)
      throw config_error((e1 ? e1 : e2 ? e2 : e3)->line,
                         "effective targets need all of delta_1, delta_2, "
                         "delta_3");
    if (have == 3) {
      auto tv = [&](entry* e, const char* what) {
        const rate_value rv = parse_rate(e->value, e->line, what, linear);
        if (!rv.is_multiple) return rv.value;
        if (!(p.mech[0].omega_m > 0))
          throw config_error(e->line,
                             "omega_m1 must be set before 'x omega_m1'");
        return rv.value * p.mech[0].omega_m;
      };
      js.effective_targets = std::array<double, 3>{
          tv(e1, "delta_1"), tv(e2, "delta_2"), tv(e3, "delta_3")};
    }
  }

  if (entry* e = take(sys, "convention")) {
    const std::string c = parse_string(e->value, e->line, "convention");
    if (c == "literal") p.conv = convention::literal;
    else if (c == "rotated") p.conv = convention::rotated;
    else
      throw config_error(e->line,
                         "convention must be \"literal\" or \"rotated\"");
  }
  int branch_line = 0;
  if (entry* e = take(sys, "branch")) {
    const std::string b = parse_string(e->value, e->line, "branch");
    branch_line = e->line;
    if (b == "smallest_intensity")
      js.policy = branch_policy::smallest_intensity;
    else if (b == "fixed_point_attractor")
      js.policy = branch_policy::fixed_point_attractor;
    else if (b == "all_roots")
      js.policy = branch_policy::all_roots;
    else
      throw config_error(e->line,
                         "branch must be \"smallest_intensity\", "
                         "\"fixed_point_attractor\", or \"all_roots\"");
  }
  check_unused(sys, "system");

  // [job]
  if (entry* e = take(job, "kind")) {
    js.kind = parse_kind(parse_string(e->value, e->line, "kind"), e->line);
    js.kind_explicit = true;
  }
  int x_line = 0;
  if (entry* e = take(job, "x_min")) {
    js.x_min = parse_number(e->value, e->line, "x_min");
    x_line = e->line;
  }
  if (entry* e = take(job, "x_max")) {
    js.x_max = parse_number(e->value, e->line, "x_max");
    x_line = e->line;
  }
  if (entry* e = take(job, "x_count")) {
    const long long n = parse_int(e->value, e->line, "x_count");
    if (n < 1 || n > 10000000)
      throw config_error(e->line, "x_count must be in [1, 1e7]");
    js.x_count = static_cast<int>(n);
    x_line = e->line;
  }
  if (js.x_count >= 2 && !(js.x_min < js.x_max))
    throw config_error(x_line, "x grid needs x_min < x_max");

  if (auto ax = parse_axis(job, {"axis_param", "axis_start", "axis_stop",
                                 "axis_count"},
                           linear, p.mech[0].omega_m))
    js.axis1 = ax;
  if (auto ax = parse_axis(job, {"axis2_param", "axis2_start", "axis2_stop",
                                 "axis2_count"},
                           linear, p.mech[0].omega_m))
    js.axis2 = ax;

  if (entry* e = take(job, "points")) {
    const long long n = parse_int(e->value, e->line, "points");
    if (n < 1 || n > 10000)
      throw config_error(e->line, "points must be in [1, 1e4]");
    js.verify_points = static_cast<int>(n);
  }
  if (entry* e = take(job, "seed"))
    js.seed = static_cast<std::uint64_t>(parse_int(e->value, e->line, "seed"));
  if (entry* e = take(job, "tolerance")) {
    js.verify_tolerance = parse_number(e->value, e->line, "tolerance");
    if (!(js.verify_tolerance > 0))
      throw config_error(e->line, "tolerance must be > 0");
  }
  if (entry* e = take(job, "out"))
    js.output_path = parse_string(e->value, e->line, "out");
  if (entry* e = take(job, "format")) {
    const std::string f = parse_string(e->value, e->line, "format");
    if (f == "csv") js.format = job_spec::format_t::csv;
    else if (f == "json") js.format = job_spec::format_t::json;
    else throw config_error(e->line, "format must be \"csv\" or \"json\"");
  }
  if (entry* e = take(job, "threads")) {
    const long long n = parse_int(e->value, e->line, "threads");
    if (n < 0 || n > 1024)
      throw config_error(e->line, "threads must be in [0, 1024]");
    js.threads = static_cast<int>(n);
  }
  check_unused(job, "job");

  if (js.policy == branch_policy::all_roots &&
      js.kind != job_spec::kind_t::steady_state)
    throw config_error(branch_line,
                       "branch \"all_roots\" only fits steady_state jobs");
  if (js.kind == job_spec::kind_t::sweep1d && !js.axis1)
    throw config_error(0, "sweep1d needs an axis (axis_param/start/stop/"
                          "count) or a preset that provides one");
  if (js.kind == job_spec::kind_t::sweep2d && (!js.axis1 || !js.axis2))
    throw config_error(0, "sweep2d needs two axes");
  return js;
}

job_spec default_job(const std::string& preset_name, job_spec::kind_t kind) {
  const scenario_preset* sp = find_preset(preset_name);
  if (!sp) throw config_error(0, "unknown preset '" + preset_name + "'");
  job_spec js;
  anchor_preset(js, *sp);
  js.kind = kind;
  js.kind_explicit = true;
  if (kind == job_spec::kind_t::sweep1d && !js.axis1)
    throw config_error(0, "preset '" + preset_name + "' has no sweep axis");
  return js;
}

std::string serialize_config(const job_spec& js) {
  const system_params& p = js.params;
  std::string s;
  s += "[system]\n";
  s += "frequencies = \"angular\"\n";
  auto rate = [&](const char* key, double v) {
    s += std::string(key) + " = " + fmt17(v) + " Hz\n";
  };
  auto num = [&](const char* key, double v) {
    s += std::string(key) + " = " + fmt17(v) + "\n";
  };
  rate("omega_m1", p.mech[0].omega_m);
  rate("omega_m2", p.mech[1].omega_m);
  rate("gamma_1", p.mech[0].gamma);
  rate("gamma_2", p.mech[1].gamma);
  rate("kappa_1", p.optical[0].kappa);
  rate("kappa_2", p.optical[1].kappa);
  rate("kappa_3", p.optical[2].kappa);
  rate("delta_a1", p.optical[0].delta_a);
  rate("delta_a2", p.optical[1].delta_a);
  rate("delta_a3", p.optical[2].delta_a);
  rate("o_m1", p.coupling.o_m1);
  rate("o_m2", p.coupling.o_m2);
  rate("o_m31", p.coupling.o_m31);
  rate("o_m32", p.coupling.o_m32);
  rate("omega_d1", p.drive.omega_d1);
  rate("omega_d2", p.drive.omega_d2);
  num("phi_d1", p.drive.phi_d1);
  num("phi_d2", p.drive.phi_d2);
  rate("omega_p1", p.probe.omega_p1);
  rate("omega_p2", p.probe.omega_p2);
  num("phi_p1", p.probe.phi_p1);
  num("phi_p2", p.probe.phi_p2);
  rate("delta_p", p.probe.delta_p);
  s += std::string("convention = \"") +
       (p.conv == convention::literal ? "literal" : "rotated") + "\"\n";
  const char* bp = js.policy == branch_policy::smallest_intensity
                       ? "smallest_intensity"
                       : js.policy == branch_policy::fixed_point_attractor
                             ? "fixed_point_attractor"
                             : "all_roots";
  s += std::string("branch = \"") + bp + "\"\n";
  if (js.effective_targets) {
    rate("delta_1", (*js.effective_targets)[0]);
    rate("delta_2", (*js.effective_targets)[1]);
    rate("delta_3", (*js.effective_targets)[2]);
  }

  s += "\n[job]\n";
  s += std::string("kind = \"") + kind_name(js.kind) + "\"\n";
  num("x_min", js.x_min);
  num("x_max", js.x_max);
  s += "x_count = " + std::to_string(js.x_count) + "\n";
  auto axis = [&](const sweep_axis& ax, const char* prefix) {
    const bool phase_like = phase_parameter_path(ax.parameter_path) ||
                            ax.parameter_path == "x";
    s += std::string(prefix) + "_param = \"" + ax.parameter_path + "\"\n";
    if (phase_like) {
      num((std::string(prefix) + "_start").c_str(), ax.start);
      num((std::string(prefix) + "_stop").c_str(), ax.stop);
    } else {
      rate((std::string(prefix) + "_start").c_str(), ax.start);
      rate((std::string(prefix) + "_stop").c_str(), ax.stop);
    }
    s += std::string(prefix) + "_count = " + std::to_string(ax.count) + "\n";
  };
  if (js.axis1) axis(*js.axis1, "axis");
  if (js.axis2) axis(*js.axis2, "axis2");
  if (js.kind == job_spec::kind_t::verify) {
    s += "points = " + std::to_string(js.verify_points) + "\n";
    s += "seed = " + std::to_string(js.seed) + "\n";
    num("tolerance", js.verify_tolerance);
  }
  if (!js.output_path.empty()) s += "out = \"" + js.output_path + "\"\n";
  if (js.format)
    s += std::string("format = \"") +
         (*js.format == job_spec::format_t::csv ? "csv" : "json") + "\"\n";
  if (js.threads > 0) s += "threads = " + std::to_string(js.threads) + "\n";
  return s;
}

}  // namespace oms
