#pragma once

// Job execution and serialization. A job writes one data file (CSV or JSON)
// plus a .meta.json sidecar carrying everything needed to reproduce the data
// bytes: resolved parameters, convention, branch policy, grids, tool version,
// and a content hash. Data bytes are a pure function of the job description.

#include <string>
#include <vector>

#include "oms/config.hpp"

namespace oms {

inline constexpr const char* oms_version = "0.1.0";

struct run_result {
  // 0 success, 1 validation failure, 2 I/O failure, 3 solver failure
  int exit_code = 0;
  std::string data_path;
  std::string meta_path;
  std::string error;  // empty on success
};

// Runs the job and writes its artifacts under out_dir (an absolute job
// output path is honored as-is). Data files are written in one shot: an
// unwritable path leaves no partial file behind.
run_result run_job(const job_spec& js, const std::string& out_dir = ".");

// stable "name: summary" listing of the built-in presets
std::vector<std::string> list_presets();

// 64-bit FNV-1a over bytes, lowercase hex
std::string fnv1a64_hex(const std::string& bytes);

// fixed 17-significant-digit formatting used for every CSV number
std::string csv_number(double v);

}  // namespace oms
