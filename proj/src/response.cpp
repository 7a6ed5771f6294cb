#include "oms/response.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace oms {

namespace {

constexpr cx I_UNIT{0.0, 1.0};

}  // namespace

cx probe_superposition(const probe_params& p) {
  return p.omega_p1 * std::exp(I_UNIT * p.phi_p1) +
         p.omega_p2 * std::exp(I_UNIT * p.phi_p2);
}

response_coefficients compute_coefficients(const system_params& p,
                                           const steady_state_solution& s,
                                           double x) {
  response_coefficients c;
  if (p.conv == convention::literal) {
    c.u1 = I_UNIT * (x - p.optical[0].delta_a) - p.optical[0].kappa;
    c.u2 = I_UNIT * (x - p.optical[1].delta_a) - p.optical[1].kappa;
    c.u3 = I_UNIT * (x - p.optical[2].delta_a) - p.optical[2].kappa;
    c.v1 = I_UNIT * (x - p.mech[0].omega_m) - p.mech[0].gamma;
    c.v2 = I_UNIT * (x - p.mech[1].omega_m) - p.mech[1].gamma;
  } else {
    const double w1 = p.mech[0].omega_m;
    c.u1 = -I_UNIT * (x + s.delta_1 - w1) - p.optical[0].kappa;
    c.u2 = -I_UNIT * (x + s.delta_2 - w1) - p.optical[1].kappa;
    c.u3 = -I_UNIT * (x + s.delta_3 - w1) - p.optical[2].kappa;
    c.v1 = -I_UNIT * x - p.mech[0].gamma;
    c.v2 = -I_UNIT * (x + p.mech[1].omega_m - w1) - p.mech[1].gamma;
  }
  c.zeta = c.u3 * c.v1 -
           p.coupling.o_m1 * p.coupling.o_m31 * s.a1s * std::conj(s.a3s);
  c.zeta_prime = c.u3 * c.v2 -
                 p.coupling.o_m2 * p.coupling.o_m32 * s.a2s * std::conj(s.a3s);
  c.d_probe = probe_superposition(p.probe);
  return c;
}

std::pair<cx, cx> closed_form_delta_a(const system_params& p,
                                      const steady_state_solution& s,
                                      double x) {
  const response_coefficients c = compute_coefficients(p, s, x);
  const double i3 = std::norm(s.a3s);
  const double o31 = p.coupling.o_m31, o32 = p.coupling.o_m32;
  const cx cross = i3 * (o31 * o31 * c.v2 + o32 * o32 * c.v1);
  const cx den = c.u3 * c.v1 * c.v2 + cross;
  const double den_scale =
      std::abs(c.u3) * std::abs(c.v1) * std::abs(c.v2) + std::abs(cross);
  if (std::abs(den) <= 1e-12 * den_scale)
    throw std::runtime_error(
        "response denominator is singular (zero-damping pole)");
  const cx da1p = -c.d_probe * (c.v2 * c.zeta + cross) / (c.u1 * den);
  const cx da2p = -c.d_probe * (c.v1 * c.zeta_prime + cross) / (c.u2 * den);
  return {da1p, da2p};
}

namespace {

// rows: three optical fluctuation equations driven by the probe sum D, then
// the two mechanical ones; unknown order (da1, da2, da3, db1, db2)
void assemble(const system_params& p, const steady_state_solution& s, double x,
              cx m[5][5], cx rhs[5]) {
  const response_coefficients c = compute_coefficients(p, s, x);
  for (int i = 0; i < 5; ++i) {
    rhs[i] = 0;
    for (int j = 0; j < 5; ++j) m[i][j] = 0;
  }
  m[0][0] = -c.u1;
  m[0][3] = -I_UNIT * p.coupling.o_m1 * s.a1s;
  m[1][1] = -c.u2;
  m[1][4] = -I_UNIT * p.coupling.o_m2 * s.a2s;
  m[2][2] = -c.u3;
  m[2][3] = -I_UNIT * p.coupling.o_m31 * s.a3s;
  m[2][4] = -I_UNIT * p.coupling.o_m32 * s.a3s;
  m[3][3] = -c.v1;
  m[3][2] = -I_UNIT * p.coupling.o_m31 * std::conj(s.a3s);
  m[4][4] = -c.v2;
  m[4][2] = -I_UNIT * p.coupling.o_m32 * std::conj(s.a3s);
  rhs[0] = rhs[1] = rhs[2] = c.d_probe;
}

}  // namespace

fluctuation_amplitudes solve_fluctuation_system(const system_params& p,
                                                const steady_state_solution& s,
                                                double x) {
  cx m[5][5], rhs[5];
  assemble(p, s, x, m, rhs);

  // Gaussian elimination, partial pivoting
  int perm[5] = {0, 1, 2, 3, 4};
  for (int k = 0; k < 5; ++k) {
    int piv = k;
    for (int r = k + 1; r < 5; ++r)
      if (std::abs(m[perm[r]][k]) > std::abs(m[perm[piv]][k])) piv = r;
    std::swap(perm[k], perm[piv]);
    const cx pivot = m[perm[k]][k];
    if (std::abs(pivot) == 0.0)
      throw std::runtime_error("fluctuation system is singular");
    for (int r = k + 1; r < 5; ++r) {
      const cx f = m[perm[r]][k] / pivot;
      if (f == cx{}) continue;
      m[perm[r]][k] = 0;
      for (int col = k + 1; col < 5; ++col) m[perm[r]][col] -= f * m[perm[k]][col];
      rhs[perm[r]] -= f * rhs[perm[k]];
    }
  }
  cx y[5];
  for (int k = 4; k >= 0; --k) {
    cx acc = rhs[perm[k]];
    for (int col = k + 1; col < 5; ++col) acc -= m[perm[k]][col] * y[col];
    y[k] = acc / m[perm[k]][k];
  }

  fluctuation_amplitudes fl;
  fl.da1p = y[0];
  fl.da2p = y[1];
  fl.da3p = y[2];
  fl.db1p = y[3];
  fl.db2p = y[4];
  fl.x = x;
  return fl;
}

double fluctuation_defect(const system_params& p,
                          const steady_state_solution& s,
                          const fluctuation_amplitudes& fl) {
  cx m[5][5], rhs[5];
  assemble(p, s, fl.x, m, rhs);
  const cx y[5] = {fl.da1p, fl.da2p, fl.da3p, fl.db1p, fl.db2p};
  double worst = 0;
  double scale = std::abs(rhs[0]);
  for (int i = 0; i < 5; ++i) {
    cx acc = -rhs[i];
    for (int j = 0; j < 5; ++j) acc += m[i][j] * y[j];
    worst = std::max(worst, std::abs(acc));
    double row = 0;
    for (int j = 0; j < 5; ++j) row += std::abs(m[i][j] * y[j]);
    scale = std::max(scale, row);
  }
  return scale > 0 ? worst / scale : worst;
}

std::pair<cx, cx> output_fields(const system_params& p, cx da1p, cx da2p) {
  return {2.0 * p.optical[0].kappa * da1p - p.probe.omega_p1,
          2.0 * p.optical[1].kappa * da2p - p.probe.omega_p2};
}

transmission_point transmission_from_steady(const system_params& p,
                                            const steady_state_solution& s,
                                            double x) {
  if (!(p.probe.omega_p1 > 0) || !(p.probe.omega_p2 > 0))
    throw std::invalid_argument(
        "transmission needs both probe strengths > 0");
  const auto [da1p, da2p] = closed_form_delta_a(p, s, x);
  transmission_point t;
  t.x = x;
  t.delta_p = x + p.mech[0].omega_m;
  std::tie(t.eps_out_1, t.eps_out_2) = output_fields(p, da1p, da2p);
  t.t_21 = std::norm(t.eps_out_1 / p.probe.omega_p2);
  t.t_12 = std::norm(t.eps_out_2 / p.probe.omega_p1);
  return t;
}

transmission_point transmission_at(const system_params& p, double x,
                                   branch_policy policy) {
  return transmission_from_steady(p, steady_state(p, policy), x);
}

std::vector<transmission_point> spectrum(const system_params& p,
                                         const std::vector<double>& grid,
                                         branch_policy policy) {
  if (grid.empty()) throw std::invalid_argument("empty x grid");
  for (size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("x grid must be strictly increasing");
  const steady_state_solution s = steady_state(p, policy);
  std::vector<transmission_point> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back(transmission_from_steady(p, s, x));
  return out;
}

}  // namespace oms
