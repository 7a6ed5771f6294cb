#pragma once

// Core parameter space for a two-port cavity system with three optical modes
// (a1, a2, a3) and two mechanical modes (b1, b2) arranged in a chain
// a1 -- b1 -- a3 -- b2 -- a2. All rates are angular (rad/s) unless the
// params object says otherwise via unit_mode.

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace oms {

using cx = std::complex<double>;

// formula evaluation frame for the sideband response, see response.hpp
enum class convention { literal, rotated };

// rad_per_sec: fields hold rad/s. omega_m1_units: fields are multiples of
// the first mechanical frequency; unit_scale remembers that frequency in
// rad/s so conversion round-trips exactly.
enum class unit_mode { rad_per_sec, omega_m1_units };

struct optical_mode_params {
  double kappa = 0;    // photon loss rate
  double delta_a = 0;  // bare cavity-drive detuning
};

struct mech_mode_params {
  double omega_m = 0;  // mechanical resonance frequency
  double gamma = 0;    // mechanical damping rate
};

struct coupling_params {
  double o_m1 = 0;   // a1 <-> b1
  double o_m2 = 0;   // a2 <-> b2
  double o_m31 = 0;  // a3 <-> b1
  double o_m32 = 0;  // a3 <-> b2
};

struct drive_params {
  double omega_d1 = 0, omega_d2 = 0;  // drive strengths, ports 1 and 2
  double phi_d1 = 0, phi_d2 = 0;      // drive phases, radians
};

struct probe_params {
  double omega_p1 = 0, omega_p2 = 0;  // probe strengths, ports 1 and 2
  double phi_p1 = 0, phi_p2 = 0;      // probe phases, radians
  double delta_p = 0;                 // probe-drive detuning
};

struct geometry_params {
  double omega_a = 0;  // optical mode frequency, rad/s
  double length = 0;   // cavity length, m
  double m_eff = 0;    // effective mirror mass, kg
  double omega_m = 0;  // mechanical frequency, rad/s
  double hbar = 1.054571817e-34;  // J s
};

struct system_params {
  std::array<optical_mode_params, 3> optical{};
  std::array<mech_mode_params, 2> mech{};
  coupling_params coupling{};
  drive_params drive{};
  probe_params probe{};
  convention conv = convention::rotated;
  unit_mode units = unit_mode::rad_per_sec;
  // rad/s value of one internal frequency unit; 1 in rad_per_sec mode
  double unit_scale = 1.0;
};

struct validation_report {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

// Hard errors: non-finite fields, kappa_i <= 0, omega_mj <= 0, gamma_j <= 0,
// negative couplings or drive/probe strengths, omega_m1 != 1 in
// omega_m1_units mode. Warnings: resolved-sideband (omega_m >> kappa) or
// weak-probe (omega_p << omega_d) advisories broken.
validation_report validate_params(const system_params& p);

// (omega_a / length) * sqrt(hbar / (m_eff * omega_m)), rad/s.
// Throws std::invalid_argument on non-positive length, mass or omega_m.
double coupling_from_geometry(const geometry_params& g);

// Rescales every rate field so omega_m1 == 1 (omega_m1_units) or back to
// rad/s. Phases are untouched. Round trip is exact up to one multiply and
// one divide per field.
system_params normalize_units(const system_params& p, unit_mode target);

}  // namespace oms
