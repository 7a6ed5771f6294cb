#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oms/model.hpp"
#include "oms/presets.hpp"

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

// the standard operating point used across scenario presets, in omega_m1
// units: kappa/omega_m1 = 73/12600, gamma/omega_m1 = 88e-6/12.6e-3, ...
oms::system_params standard_params() {
  const oms::scenario_preset* s = oms::find_preset("fig2a");
  REQUIRE(s != nullptr);
  return s->params;
}

double rel_diff(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0 : std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("standard operating point validates with no errors or warnings") {
  auto report = oms::validate_params(standard_params());
  CHECK(report.errors.empty());
  CHECK(report.warnings.empty());
  CHECK(report.ok());
}

TEST_CASE("zero cavity loss is rejected by name") {
  auto p = standard_params();
  p.optical[0].kappa = 0;
  auto report = oms::validate_params(p);
  REQUIRE(report.errors.size() == 1);
  CHECK(report.errors[0].find("kappa_1") != std::string::npos);
  CHECK_FALSE(report.ok());
}

TEST_CASE("cavity loss comparable to the mechanical frequency trips the "
          "resolved-sideband advisory") {
  // kappa/2pi = 20 GHz against omega_m1/2pi = 12.6 GHz
  auto p = standard_params();
  p.optical[0].kappa = 20.0 / 12.6;
  auto report = oms::validate_params(p);
  CHECK(report.errors.empty());
  REQUIRE(report.warnings.size() == 2);  // both mechanical modes flag it
  CHECK(report.warnings[0].find("resolved-sideband") != std::string::npos);
}

TEST_CASE("probe stronger than half the drive trips the weak-probe advisory") {
  auto p = standard_params();
  p.probe.omega_p1 = 1.5;  // drives are 2
  auto report = oms::validate_params(p);
  CHECK(report.errors.empty());
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("weak-probe") != std::string::npos);
}

TEST_CASE("non-finite rate fields are hard errors") {
  auto p = standard_params();
  p.mech[1].gamma = std::nan("");
  CHECK_FALSE(oms::validate_params(p).ok());
}

TEST_CASE("negative coupling or drive strengths are hard errors") {
  auto p = standard_params();
  p.coupling.o_m31 = -1e-4;
  CHECK_FALSE(oms::validate_params(p).ok());
  p = standard_params();
  p.drive.omega_d2 = -1;
  CHECK_FALSE(oms::validate_params(p).ok());
}

TEST_CASE("omega_m1-unit mode requires omega_m1 == 1") {
  auto p = standard_params();
  p.mech[0].omega_m = 1.0 + 1e-6;
  auto report = oms::validate_params(p);
  REQUIRE_FALSE(report.ok());
  CHECK(report.errors[0].find("omega_m1") != std::string::npos);
}

TEST_CASE("validation is pure: repeated calls give identical reports") {
  auto p = standard_params();
  p.optical[2].kappa = 0.9;  // one advisory, deterministic content
  auto r1 = oms::validate_params(p);
  auto r2 = oms::validate_params(p);
  CHECK(r1.errors == r2.errors);
  CHECK(r1.warnings == r2.warnings);
}

TEST_CASE("geometric coupling rate matches the frozen reference value") {
  // omega_a/2pi = 193.4 THz, L = 5.19 mm, m_eff = 20 ug, omega_m/2pi =
  // 12.6 GHz; reference evaluated independently at high precision
  oms::geometry_params g;
  g.omega_a = TWO_PI * 193.4e12;
  g.length = 5.19e-3;
  g.m_eff = 2e-8;
  g.omega_m = TWO_PI * 12.6e9;
  double v = oms::coupling_from_geometry(g);
  CHECK(rel_diff(v, 0.060425027410916363967) <= 1e-12);
}

TEST_CASE("geometric coupling scales exactly with its arguments") {
  oms::geometry_params g;
  g.omega_a = TWO_PI * 193.4e12;
  g.length = 5.19e-3;
  g.m_eff = 2e-8;
  g.omega_m = TWO_PI * 12.6e9;
  double v = oms::coupling_from_geometry(g);

  auto g2 = g;
  g2.length = 2 * g.length;  // linear in 1/L: doubling L halves the rate
  CHECK(oms::coupling_from_geometry(g2) == 0.5 * v);

  g2 = g;
  g2.m_eff = 4 * g.m_eff;  // inverse square root in the mass
  CHECK(oms::coupling_from_geometry(g2) == 0.5 * v);

  g2 = g;
  g2.omega_a = 2 * g.omega_a;  // homogeneous degree one in omega_a
  CHECK(oms::coupling_from_geometry(g2) == 2.0 * v);

  g2 = g;
  g2.omega_m = 4 * g.omega_m;  // homogeneous degree -1/2 in omega_m
  CHECK(oms::coupling_from_geometry(g2) == 0.5 * v);
}

TEST_CASE("geometric coupling rejects non-positive length, mass, frequency") {
  oms::geometry_params g;
  g.omega_a = TWO_PI * 193.4e12;
  g.length = 5.19e-3;
  g.m_eff = 2e-8;
  g.omega_m = TWO_PI * 12.6e9;

  auto bad = g;
  bad.length = 0;
  CHECK_THROWS_AS(oms::coupling_from_geometry(bad), std::invalid_argument);
  bad = g;
  bad.m_eff = -1e-9;
  CHECK_THROWS_AS(oms::coupling_from_geometry(bad), std::invalid_argument);
  bad = g;
  bad.omega_m = 0;
  CHECK_THROWS_AS(oms::coupling_from_geometry(bad), std::invalid_argument);
}

TEST_CASE("normalizing the standard point to rad/s recovers the physical "
          "rates") {
  auto p = oms::normalize_units(standard_params(), oms::unit_mode::rad_per_sec);
  CHECK(p.units == oms::unit_mode::rad_per_sec);
  CHECK(p.unit_scale == 1.0);
  CHECK(rel_diff(p.mech[0].omega_m, TWO_PI * 12.6e9) <= 1e-12);
  CHECK(rel_diff(p.optical[0].kappa, TWO_PI * 73e6) <= 1e-12);
  CHECK(rel_diff(p.mech[0].gamma, TWO_PI * 88e3) <= 1e-12);
  CHECK(rel_diff(p.coupling.o_m1, TWO_PI * 1.5e6) <= 1e-12);
  // strengths stated as multiples of omega_m1 scale the same way
  CHECK(rel_diff(p.drive.omega_d1, 2.0 * TWO_PI * 12.6e9) <= 1e-12);
}

TEST_CASE("normalizing physical rates to omega_m1 units lands on the "
          "documented ratios") {
  auto rad = oms::normalize_units(standard_params(), oms::unit_mode::rad_per_sec);
  auto p = oms::normalize_units(rad, oms::unit_mode::omega_m1_units);
  CHECK(p.mech[0].omega_m == 1.0);
  CHECK(rel_diff(p.optical[1].kappa, 73.0 / 12600.0) <= 1e-12);
  CHECK(rel_diff(p.unit_scale, TWO_PI * 12.6e9) <= 1e-12);
}

TEST_CASE("unit normalization is idempotent") {
  auto p = standard_params();
  auto q = oms::normalize_units(p, oms::unit_mode::omega_m1_units);
  CHECK(q.optical[0].kappa == p.optical[0].kappa);
  CHECK(q.optical[2].delta_a == p.optical[2].delta_a);
  CHECK(q.mech[1].omega_m == p.mech[1].omega_m);
  CHECK(q.drive.omega_d1 == p.drive.omega_d1);
  CHECK(q.unit_scale == p.unit_scale);
}

TEST_CASE("unit round trip preserves every field to 1e-12") {
  auto p = standard_params();
  p.optical[0].delta_a = 79.96 / 12.6;  // give the bare detunings real values
  p.optical[1].delta_a = 78.38 / 12.6;
  p.optical[2].delta_a = 84.71 / 12.6;
  auto back = oms::normalize_units(
      oms::normalize_units(p, oms::unit_mode::rad_per_sec),
      oms::unit_mode::omega_m1_units);
  for (int i = 0; i < 3; ++i) {
    CHECK(rel_diff(back.optical[i].kappa, p.optical[i].kappa) <= 1e-12);
    CHECK(rel_diff(back.optical[i].delta_a, p.optical[i].delta_a) <= 1e-12);
  }
  for (int j = 0; j < 2; ++j) {
    CHECK(rel_diff(back.mech[j].omega_m, p.mech[j].omega_m) <= 1e-12);
    CHECK(rel_diff(back.mech[j].gamma, p.mech[j].gamma) <= 1e-12);
  }
  CHECK(rel_diff(back.coupling.o_m31, p.coupling.o_m31) <= 1e-12);
  CHECK(rel_diff(back.drive.omega_d2, p.drive.omega_d2) <= 1e-12);
  CHECK(rel_diff(back.probe.omega_p1, p.probe.omega_p1) <= 1e-12);
  CHECK(rel_diff(back.probe.delta_p, p.probe.delta_p) <= 1e-12);
  CHECK(rel_diff(back.unit_scale, p.unit_scale) <= 1e-12);
  // phases are not rates and must come back bit-identical
  CHECK(back.probe.phi_p1 == p.probe.phi_p1);
  CHECK(back.drive.phi_d2 == p.drive.phi_d2);
}

TEST_CASE("round trip starting from rad/s is also stable") {
  auto rad = oms::normalize_units(standard_params(), oms::unit_mode::rad_per_sec);
  auto back = oms::normalize_units(
      oms::normalize_units(rad, oms::unit_mode::omega_m1_units),
      oms::unit_mode::rad_per_sec);
  CHECK(rel_diff(back.mech[0].omega_m, rad.mech[0].omega_m) <= 1e-12);
  CHECK(rel_diff(back.optical[2].kappa, rad.optical[2].kappa) <= 1e-12);
  CHECK(rel_diff(back.drive.omega_d1, rad.drive.omega_d1) <= 1e-12);
}
