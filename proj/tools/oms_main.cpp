#include <clocale>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oms/config.hpp"
#include "oms/io.hpp"

namespace {

int fail(int code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = message;
  j["exit_code"] = code;
  std::fprintf(stderr, "%s\n", j.dump().c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"two-port optomechanical transmission simulator"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir = ".", format;
  int threads = -1;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "job config file");
    cmd->add_option("--preset", preset, "scenario preset name");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--threads", threads, "worker thread cap");
    cmd->add_option("--format", format, "csv or json");
  };

  auto* c_steady = app.add_subcommand(
      "steady-state", "solve the steady state and write a JSON report");
  auto* c_spectrum = app.add_subcommand(
      "spectrum", "transmission spectrum over the probe offset");
  auto* c_sweep = app.add_subcommand("sweep", "parameter sweep");
  auto* c_verify = app.add_subcommand(
      "verify", "cross-check the analytic response against time-domain "
                "integration");
  auto* c_presets = app.add_subcommand("presets", "list scenario presets");
  for (auto* c : {c_steady, c_spectrum, c_sweep, c_verify}) add_common(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (c_presets->parsed()) {
    for (const auto& line : oms::list_presets())
      std::printf("%s\n", line.c_str());
    return 0;
  }

  using kind_t = oms::job_spec::kind_t;
  const bool is_sweep = c_sweep->parsed();
  kind_t kind = kind_t::spectrum;
  if (c_steady->parsed()) kind = kind_t::steady_state;
  else if (is_sweep) kind = kind_t::sweep1d;
  else if (c_verify->parsed()) kind = kind_t::verify;

  oms::job_spec js;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path, std::ios::binary);
      if (!f) return fail(2, "cannot read config file " + config_path);
      std::ostringstream ss;
      ss << f.rdbuf();
      js = oms::parse_config(ss.str(), preset);
      if (js.kind_explicit) {
        const bool match =
            js.kind == kind ||
            (is_sweep && (js.kind == kind_t::sweep1d ||
                          js.kind == kind_t::sweep2d));
        if (!match)
          return fail(1, std::string("config kind '") +
                             oms::kind_name(js.kind) +
                             "' does not match the subcommand");
      } else {
        js.kind = is_sweep && js.axis2 ? kind_t::sweep2d : kind;
        if (is_sweep && !js.axis1)
          return fail(1, "sweep needs an axis from the config or preset");
      }
    } else if (!preset.empty()) {
      js = oms::default_job(preset, kind);
    } else {
      return fail(1, "either --config or --preset is required");
    }
  } catch (const oms::config_error& e) {
    return fail(1, e.what());
  }

  if (threads >= 0) js.threads = threads;
  if (!format.empty()) {
    if (format == "csv") js.format = oms::job_spec::format_t::csv;
    else if (format == "json") js.format = oms::job_spec::format_t::json;
    else return fail(1, "format must be csv or json");
  }

  const oms::run_result rr = oms::run_job(js, out_dir);
  if (rr.exit_code != 0) return fail(rr.exit_code, rr.error);
  std::printf("%s\n%s\n", rr.data_path.c_str(), rr.meta_path.c_str());
  return 0;
}
