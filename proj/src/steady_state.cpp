#include "oms/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oms {

namespace {

constexpr cx I_UNIT{0.0, 1.0};

// cubic defect f(I) = beta^2 I^3 - 2 beta d3 I^2 + (k3^2 + d3^2) I - |Dd|^2
struct cubic {
  double b2, b1, b0, rhs;  // monomial coefficients beta^2, -2 beta d3, ...
  double f(double I) const { return ((b2 * I + b1) * I + b0) * I - rhs; }
  double df(double I) const { return (3 * b2 * I + 2 * b1) * I + b0; }
};

cubic make_cubic(const system_params& p) {
  const double beta = intensity_feedback_beta(p);
  const double k3 = p.optical[2].kappa;
  const double d3 = p.optical[2].delta_a;
  const double dd2 = std::norm(drive_superposition(p.drive));
  return {beta * beta, -2.0 * beta * d3, k3 * k3 + d3 * d3, dd2};
}

// real roots of x^3 + px^2 + qx + r, unpolished
std::vector<double> cubic_real_roots(double p, double q, double r) {
  // depressed form t^3 + at + b with x = t - p/3
  const double a = q - p * p / 3.0;
  const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
  const double shift = -p / 3.0;
  const double disc = -4.0 * a * a * a - 27.0 * b * b;
  std::vector<double> out;
  if (disc > 0) {
    // three distinct real roots
    const double m = 2.0 * std::sqrt(-a / 3.0);
    const double arg = std::clamp(3.0 * b / (a * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      out.push_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0) + shift);
  } else {
    double t;
    if (a == 0.0) {
      t = std::cbrt(-b);
    } else {
      // one real root; take the larger cube root to dodge cancellation,
      // recover the partner via u*v = -a/3
      const double s = std::sqrt(b * b / 4.0 + a * a * a / 27.0);
      const double c1 = -b / 2.0 + s, c2 = -b / 2.0 - s;
      const double u = std::cbrt(std::abs(c1) >= std::abs(c2) ? c1 : c2);
      t = u == 0.0 ? 0.0 : u - a / (3.0 * u);
    }
    out.push_back(t + shift);
  }
  return out;
}

}  // namespace

cx drive_superposition(const drive_params& d) {
  return d.omega_d1 * std::exp(I_UNIT * d.phi_d1) +
         d.omega_d2 * std::exp(I_UNIT * d.phi_d2);
}

double intensity_feedback_beta(const system_params& p) {
  double beta = 0;
  const double o3[2] = {p.coupling.o_m31, p.coupling.o_m32};
  for (int j = 0; j < 2; ++j) {
    const double w = p.mech[j].omega_m, g = p.mech[j].gamma;
    beta += 2.0 * o3[j] * o3[j] * w / (g * g + w * w);
  }
  return beta;
}

std::vector<double> solve_intensity_cubic(const system_params& p) {
  const cubic c = make_cubic(p);
  if (c.rhs == 0.0) return {0.0};
  if (c.b2 == 0.0) {  // no feedback: linear
    const double r = c.rhs / c.b0;
    if (!std::isfinite(r))
      throw std::runtime_error(
          "intensity equation is degenerate (zero loss and zero detuning "
          "on the driven third mode)");
    return {r};
  }

  std::vector<double> roots =
      cubic_real_roots(c.b1 / c.b2, c.b0 / c.b2, -c.rhs / c.b2);

  // self-consistency defect g(I) = rhs/(k3^2 + (d3 - beta I)^2) - I, the
  // same expression the steady-state amplitudes evaluate; the expanded
  // monomials cancel badly at large intensity, so the final polish runs on
  // this form to keep the equation residual at machine level
  const double beta = intensity_feedback_beta(p);
  const double k3 = p.optical[2].kappa, d3 = p.optical[2].delta_a;
  const auto g = [&](double i) {
    const double sh = d3 - beta * i;
    return c.rhs / (k3 * k3 + sh * sh) - i;
  };
  const auto dg = [&](double i) {
    const double sh = d3 - beta * i;
    const double den = k3 * k3 + sh * sh;
    return 2.0 * beta * sh * c.rhs / (den * den) - 1.0;
  };

  const double tol = 1e-9 * c.rhs;
  std::vector<double> out;
  for (double r : roots) {
    for (int it = 0; it < 60 && std::abs(c.f(r)) > 1e-14 * c.rhs; ++it) {
      const double d = c.df(r);
      if (d == 0.0) break;
      const double step = c.f(r) / d;
      r -= step;
      if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(r))) break;
    }
    // damped Newton on g, accepting only non-increasing |g|
    for (int it = 0; it < 50; ++it) {
      const double gv = g(r);
      const double d = dg(r);
      if (gv == 0.0 || d == 0.0) break;
      double step = gv / d;
      double rn = r - step;
      for (int bt = 0; bt < 30 && std::abs(g(rn)) > std::abs(gv); ++bt) {
        step *= 0.5;
        rn = r - step;
      }
      if (rn == r || std::abs(g(rn)) > std::abs(gv)) break;
      r = rn;
      if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(r))) break;
    }
    if (r < 0 && r > -tol) r = 0;
    if (r < 0) continue;
    if (std::abs(c.f(r)) > tol)
      throw std::runtime_error("intensity cubic root polishing stalled");
    out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  // collapse multiplicities
  std::vector<double> uniq;
  for (double r : out)
    if (uniq.empty() || r - uniq.back() > 1e-9 * std::max(1.0, r))
      uniq.push_back(r);
  if (uniq.empty())
    throw std::runtime_error("intensity cubic produced no physical root");
  return uniq;
}

namespace {

steady_state_solution from_root(const system_params& p, double i3, int index) {
  steady_state_solution s;
  s.branch_index = index;
  const cx dd = drive_superposition(p.drive);
  const double beta = intensity_feedback_beta(p);
  s.delta_3 = p.optical[2].delta_a - beta * i3;
  const double o3[2] = {p.coupling.o_m31, p.coupling.o_m32};
  cx* bs[2] = {&s.b1s, &s.b2s};
  for (int j = 0; j < 2; ++j)
    *bs[j] = I_UNIT * o3[j] * i3 / cx(p.mech[j].gamma, p.mech[j].omega_m);
  s.delta_1 = p.optical[0].delta_a - p.coupling.o_m1 * 2.0 * s.b1s.real();
  s.delta_2 = p.optical[1].delta_a - p.coupling.o_m2 * 2.0 * s.b2s.real();
  s.a1s = dd / cx(p.optical[0].kappa, s.delta_1);
  s.a2s = dd / cx(p.optical[1].kappa, s.delta_2);
  s.a3s = dd / cx(p.optical[2].kappa, s.delta_3);
  s.residual = steady_state_residual(p, s);
  return s;
}

}  // namespace

std::vector<steady_state_solution> steady_state_branches(
    const system_params& p) {
  std::vector<steady_state_solution> out;
  const auto roots = solve_intensity_cubic(p);
  out.reserve(roots.size());
  for (size_t i = 0; i < roots.size(); ++i)
    out.push_back(from_root(p, roots[i], static_cast<int>(i)));
  return out;
}

double fixed_point_intensity(const system_params& p) {
  const cubic c = make_cubic(p);
  const double beta = intensity_feedback_beta(p);
  const double k3 = p.optical[2].kappa, d3 = p.optical[2].delta_a;
  if (c.rhs == 0.0) return 0.0;
  const auto map = [&](double i) {
    const double d = d3 - beta * i;
    return c.rhs / (k3 * k3 + d * d);
  };
  double i3 = c.rhs / (k3 * k3 + d3 * d3);
  // a reversal of the update with a non-shrinking residual marks a bounce
  // around a steep crossing; halving the step there restores contraction,
  // since a crossing with map slope s < 1 attracts once lambda < 2/(1 - s).
  // monotone residual growth is ordinary transit toward the resonance and
  // keeps the full step.
  double lambda = 0.5;
  double prev = std::numeric_limits<double>::infinity();
  double dir = 0.0;
  for (int it = 0; it < 200000; ++it) {
    const double m = map(i3);
    const double upd = m - i3;
    const double res = std::abs(upd);
    if (res <= 1e-14 * std::max(1.0, std::abs(i3))) return i3;
    if (upd * dir < 0.0 && res >= prev) lambda *= 0.5;
    prev = res;
    dir = upd;
    i3 += lambda * upd;
  }
  throw std::runtime_error("fixed-point iteration did not settle");
}

steady_state_solution steady_state(const system_params& p,
                                   branch_policy policy) {
  if (policy == branch_policy::all_roots)
    throw std::invalid_argument(
        "all_roots returns several solutions: call steady_state_branches");
  const auto roots = solve_intensity_cubic(p);
  size_t pick = 0;
  if (policy == branch_policy::fixed_point_attractor && roots.size() > 1) {
    const double i3 = fixed_point_intensity(p);
    double best = std::abs(i3 - roots[0]);
    for (size_t i = 1; i < roots.size(); ++i)
      if (std::abs(i3 - roots[i]) < best) {
        best = std::abs(i3 - roots[i]);
        pick = i;
      }
  }
  return from_root(p, roots[pick], static_cast<int>(pick));
}

double steady_state_residual(const system_params& p,
                             const steady_state_solution& s) {
  const cx dd = drive_superposition(p.drive);
  const double q1 = 2.0 * s.b1s.real(), q2 = 2.0 * s.b2s.real();
  const cx r1 = -cx(p.optical[0].kappa, p.optical[0].delta_a) * s.a1s +
                I_UNIT * p.coupling.o_m1 * q1 * s.a1s + dd;
  const cx r2 = -cx(p.optical[1].kappa, p.optical[1].delta_a) * s.a2s +
                I_UNIT * p.coupling.o_m2 * q2 * s.a2s + dd;
  const cx r3 = -cx(p.optical[2].kappa, p.optical[2].delta_a) * s.a3s +
                I_UNIT * (p.coupling.o_m31 * q1 + p.coupling.o_m32 * q2) *
                    s.a3s + dd;
  const double i3 = std::norm(s.a3s);
  const cx r4 = -cx(p.mech[0].gamma, p.mech[0].omega_m) * s.b1s +
                I_UNIT * p.coupling.o_m31 * i3;
  const cx r5 = -cx(p.mech[1].gamma, p.mech[1].omega_m) * s.b2s +
                I_UNIT * p.coupling.o_m32 * i3;
  double m = 0;
  for (const cx& r : {r1, r2, r3, r4, r5}) m = std::max(m, std::abs(r));
  return m;
}

std::array<double, 3> bare_from_effective(const system_params& p, double d1,
                                          double d2, double d3) {
  const double k3 = p.optical[2].kappa;
  const double i3 = std::norm(drive_superposition(p.drive)) / (k3 * k3 + d3 * d3);
  const double beta = intensity_feedback_beta(p);
  const double o3[2] = {p.coupling.o_m31, p.coupling.o_m32};
  double q[2];  // b_js + b_js^* given I3
  for (int j = 0; j < 2; ++j) {
    const double w = p.mech[j].omega_m, g = p.mech[j].gamma;
    q[j] = 2.0 * o3[j] * i3 * w / (g * g + w * w);
  }
  return {d1 + p.coupling.o_m1 * q[0], d2 + p.coupling.o_m2 * q[1],
          d3 + beta * i3};
}

system_params with_effective_detunings(const system_params& p, double d1,
                                       double d2, double d3) {
  system_params q = p;
  const auto bare = bare_from_effective(p, d1, d2, d3);
  for (int i = 0; i < 3; ++i) q.optical[i].delta_a = bare[i];
  return q;
}

}  // namespace oms
