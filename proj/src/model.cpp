#include "oms/model.hpp"

#include <cmath>
#include <stdexcept>

namespace oms {

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_finite(validation_report& r, double v, const char* name) {
  if (!finite(v)) r.errors.push_back(std::string(name) + " is not finite");
}

}  // namespace

validation_report validate_params(const system_params& p) {
  validation_report r;

  const char* knames[3] = {"kappa_1", "kappa_2", "kappa_3"};
  const char* dnames[3] = {"delta_a1", "delta_a2", "delta_a3"};
  for (int i = 0; i < 3; ++i) {
    check_finite(r, p.optical[i].kappa, knames[i]);
    check_finite(r, p.optical[i].delta_a, dnames[i]);
    if (finite(p.optical[i].kappa) && p.optical[i].kappa <= 0)
      r.errors.push_back(std::string(knames[i]) + " must be > 0");
  }
  const char* wnames[2] = {"omega_m1", "omega_m2"};
  const char* gnames[2] = {"gamma_1", "gamma_2"};
  for (int j = 0; j < 2; ++j) {
    check_finite(r, p.mech[j].omega_m, wnames[j]);
    check_finite(r, p.mech[j].gamma, gnames[j]);
    if (finite(p.mech[j].omega_m) && p.mech[j].omega_m <= 0)
      r.errors.push_back(std::string(wnames[j]) + " must be > 0");
    if (finite(p.mech[j].gamma) && p.mech[j].gamma <= 0)
      r.errors.push_back(std::string(gnames[j]) + " must be > 0");
  }

  struct { double v; const char* n; } nonneg[] = {
      {p.coupling.o_m1, "o_m1"},   {p.coupling.o_m2, "o_m2"},
      {p.coupling.o_m31, "o_m31"}, {p.coupling.o_m32, "o_m32"},
      {p.drive.omega_d1, "omega_d1"}, {p.drive.omega_d2, "omega_d2"},
      {p.probe.omega_p1, "omega_p1"}, {p.probe.omega_p2, "omega_p2"},
  };
  for (auto& f : nonneg) {
    check_finite(r, f.v, f.n);
    if (finite(f.v) && f.v < 0)
      r.errors.push_back(std::string(f.n) + " must be >= 0");
  }
  for (double v : {p.drive.phi_d1, p.drive.phi_d2, p.probe.phi_p1,
                   p.probe.phi_p2, p.probe.delta_p})
    if (!finite(v)) r.errors.push_back("a phase or detuning is not finite");
  check_finite(r, p.unit_scale, "unit_scale");
  if (finite(p.unit_scale) && p.unit_scale <= 0)
    r.errors.push_back("unit_scale must be > 0");

  if (p.units == unit_mode::omega_m1_units && finite(p.mech[0].omega_m) &&
      std::abs(p.mech[0].omega_m - 1.0) > 1e-12)
    r.errors.push_back("omega_m1 must equal 1 in omega_m1 units");

  if (!r.errors.empty()) return r;

  // advisories: resolved sideband omega_m >> kappa, weak probe
  double kmax = 0;
  for (auto& o : p.optical) kmax = std::max(kmax, o.kappa);
  for (int j = 0; j < 2; ++j)
    if (p.mech[j].omega_m < 10.0 * kmax)
      r.warnings.push_back(std::string(wnames[j]) +
                           " is not >> max kappa: resolved-sideband regime "
                           "assumption is broken");
  double dmax = std::max(p.drive.omega_d1, p.drive.omega_d2);
  if (p.probe.omega_p1 > 0.5 * dmax || p.probe.omega_p2 > 0.5 * dmax)
    r.warnings.push_back(
        "probe strength is not << drive strength: weak-probe linearization "
        "assumption is strained");
  return r;
}

double coupling_from_geometry(const geometry_params& g) {
  if (!(g.length > 0)) throw std::invalid_argument("length must be > 0");
  if (!(g.m_eff > 0)) throw std::invalid_argument("m_eff must be > 0");
  if (!(g.omega_m > 0)) throw std::invalid_argument("omega_m must be > 0");
  return (g.omega_a / g.length) * std::sqrt(g.hbar / (g.m_eff * g.omega_m));
}

system_params normalize_units(const system_params& p, unit_mode target) {
  if (p.units == target) return p;
  system_params q = p;
  q.units = target;
  // scale factor applied to every rate field
  double s;
  if (target == unit_mode::omega_m1_units) {
    s = 1.0 / p.mech[0].omega_m;
    q.unit_scale = p.unit_scale * p.mech[0].omega_m;
  } else {
    s = p.unit_scale;
    q.unit_scale = 1.0;
  }
  for (auto& o : q.optical) { o.kappa *= s; o.delta_a *= s; }
  for (auto& m : q.mech) { m.omega_m *= s; m.gamma *= s; }
  q.coupling.o_m1 *= s;
  q.coupling.o_m2 *= s;
  q.coupling.o_m31 *= s;
  q.coupling.o_m32 *= s;
  q.drive.omega_d1 *= s;
  q.drive.omega_d2 *= s;
  q.probe.omega_p1 *= s;
  q.probe.omega_p2 *= s;
  q.probe.delta_p *= s;
  if (target == unit_mode::omega_m1_units) q.mech[0].omega_m = 1.0;
  return q;
}

}  // namespace oms
