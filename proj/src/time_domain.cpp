#include "oms/time_domain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oms/response.hpp"

namespace oms {

namespace {

constexpr cx I_UNIT{0.0, 1.0};
constexpr int RESYNC = 4096;  // steps between exact rotor refreshes

double smooth_env(double t, double ramp) {
  if (ramp <= 0 || t >= ramp) return 1.0;
  if (t <= 0) return 0.0;
  const double u = t / ramp;
  return u * u * (3.0 - 2.0 * u);
}

struct ode_ctx {
  cx ca[3];  // -(kappa_i + i delta_ai)
  cx cb[2];  // -(gamma_j + i omega_mj)
  double o1, o2, o31, o32;
  cx dd, dp;  // drive and probe phasor sums
};

ode_ctx make_ctx(const system_params& p) {
  ode_ctx c;
  for (int i = 0; i < 3; ++i)
    c.ca[i] = -cx(p.optical[i].kappa, p.optical[i].delta_a);
  for (int j = 0; j < 2; ++j)
    c.cb[j] = -cx(p.mech[j].gamma, p.mech[j].omega_m);
  c.o1 = p.coupling.o_m1;
  c.o2 = p.coupling.o_m2;
  c.o31 = p.coupling.o_m31;
  c.o32 = p.coupling.o_m32;
  c.dd = drive_superposition(p.drive);
  c.dp = probe_superposition(p.probe);
  return c;
}

// drive-frame right-hand side; probe = env * dp * e^{-i delta_p t}
inline void deriv(const ode_ctx& c, const cx y[5], const cx& probe, cx dy[5]) {
  const double q1 = 2.0 * y[3].real();
  const double q2 = 2.0 * y[4].real();
  dy[0] = c.ca[0] * y[0] + I_UNIT * (c.o1 * q1) * y[0] + c.dd + probe;
  dy[1] = c.ca[1] * y[1] + I_UNIT * (c.o2 * q2) * y[1] + c.dd + probe;
  dy[2] = c.ca[2] * y[2] + I_UNIT * (c.o31 * q1 + c.o32 * q2) * y[2] + c.dd +
          probe;
  const double i3 = std::norm(y[2]);
  dy[3] = c.cb[0] * y[3] + I_UNIT * (c.o31 * i3);
  dy[4] = c.cb[1] * y[4] + I_UNIT * (c.o32 * i3);
}

void check_grid(const system_params& p, const time_grid& g, double fast_scale) {
  if (!(g.dt > 0)) throw std::invalid_argument("dt must be > 0");
  if (!(g.t_end >= g.dt)) throw std::invalid_argument("t_end must cover a step");
  if (!(g.transient_fraction > 0) || !(g.transient_fraction < 1))
    throw std::invalid_argument("transient_fraction must be in (0,1)");
  if (g.t_end / g.dt > 1e8)
    throw std::invalid_argument("grid exceeds the 1e8 step cost guard");
  if (fast_scale > 0 && g.dt > 0.05 / fast_scale)
    throw std::invalid_argument(
        "dt does not resolve the fastest scale (need dt <= " +
        std::to_string(0.05 / fast_scale) + ")");
}

double drive_scale(const ode_ctx& c) {
  return std::max({std::abs(c.dd), std::abs(c.dp), 1e-12});
}

}  // namespace

trajectory integrate_mean_field(const system_params& p, const time_grid& g,
                                const std::array<cx, 5>& init,
                                const integration_options& opt) {
  double fast = 0;
  for (auto& o : p.optical)
    fast = std::max({fast, o.kappa, std::abs(o.delta_a)});
  for (auto& m : p.mech) fast = std::max(fast, m.omega_m);
  fast = std::max(fast, std::abs(p.probe.delta_p));
  check_grid(p, g, fast);
  if (opt.stride < 1) throw std::invalid_argument("stride must be >= 1");

  const ode_ctx c = make_ctx(p);
  const double dt = g.dt;
  const size_t nsteps = static_cast<size_t>(std::llround(g.t_end / dt));
  const size_t k0 = opt.store_from <= 0
                        ? 0
                        : static_cast<size_t>(
                              std::ceil(opt.store_from / dt - 1e-9));
  const double blow = 1e6 * drive_scale(c);

  trajectory tr;
  const size_t cap = k0 <= nsteps ? (nsteps - k0) / opt.stride + 1 : 0;
  tr.times.reserve(cap);
  for (auto* v : {&tr.a1, &tr.a2, &tr.a3, &tr.b1, &tr.b2}) v->reserve(cap);

  cx y[5];
  for (int i = 0; i < 5; ++i) y[i] = init[i];
  // probe rotor e^{-i delta_p t}, advanced by half steps, re-anchored
  // periodically so phase error stays at rounding level
  const cx half = std::polar(1.0, -p.probe.delta_p * dt * 0.5);
  cx rot = 1.0;

  auto store = [&](size_t k) {
    if (k < k0 || (k - k0) % static_cast<size_t>(opt.stride) != 0) return;
    tr.times.push_back(static_cast<double>(k) * dt);
    tr.a1.push_back(y[0]);
    tr.a2.push_back(y[1]);
    tr.a3.push_back(y[2]);
    tr.b1.push_back(y[3]);
    tr.b2.push_back(y[4]);
  };

  store(0);
  cx k1[5], k2[5], k3[5], k4[5], tmp[5];
  for (size_t k = 0; k < nsteps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k % RESYNC == 0) {
      rot = std::polar(1.0, -p.probe.delta_p * t);
      double m = 0;
      for (int i = 0; i < 5; ++i) m = std::max(m, std::abs(y[i]));
      if (!(m < blow))
        throw std::runtime_error("integration diverged at t = " +
                                 std::to_string(t));
    }
    const cx rot_h = rot * half, rot_f = rot_h * half;
    const cx p0 = smooth_env(t, opt.probe_ramp_time) * c.dp * rot;
    const cx ph = smooth_env(t + 0.5 * dt, opt.probe_ramp_time) * c.dp * rot_h;
    const cx pf = smooth_env(t + dt, opt.probe_ramp_time) * c.dp * rot_f;

    deriv(c, y, p0, k1);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    deriv(c, tmp, ph, k2);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    deriv(c, tmp, ph, k3);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + dt * k3[i];
    deriv(c, tmp, pf, k4);
    for (int i = 0; i < 5; ++i)
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    rot = rot_f;
    store(k + 1);
  }
  for (int i = 0; i < 5; ++i)
    if (!std::isfinite(y[i].real()) || !std::isfinite(y[i].imag()))
      throw std::runtime_error("integration diverged (non-finite state)");
  return tr;
}

namespace {

// co-rotating frame context: A_i = a_i e^{i delta_ai t}, B_j = b_j e^{i w_mj t}
struct rot_ctx {
  double ka[3], da[3];
  double gb[2], wb[2];
  double o1, o2, o31, o32;
  cx dd, dp;
};

// rotors r.a[i] = e^{+i delta_ai t}, r.b[j] = e^{+i w_mj t}, r.p = e^{-i dp t}
struct rotors {
  cx a[3], b[2], p;
};

inline void deriv_rot(const rot_ctx& c, const rotors& r, const cx y[5],
                      double env, cx dy[5]) {
  // mechanical displacements back in the lab frame
  const cx b1 = y[3] * std::conj(r.b[0]);
  const cx b2 = y[4] * std::conj(r.b[1]);
  const double q1 = 2.0 * b1.real();
  const double q2 = 2.0 * b2.real();
  const cx drive = c.dd + env * c.dp * r.p;
  dy[0] = -c.ka[0] * y[0] + I_UNIT * (c.o1 * q1) * y[0] + r.a[0] * drive;
  dy[1] = -c.ka[1] * y[1] + I_UNIT * (c.o2 * q2) * y[1] + r.a[1] * drive;
  dy[2] = -c.ka[2] * y[2] + I_UNIT * (c.o31 * q1 + c.o32 * q2) * y[2] +
          r.a[2] * drive;
  const double i3 = std::norm(y[2]);
  dy[3] = -c.gb[0] * y[3] + I_UNIT * (c.o31 * i3) * r.b[0];
  dy[4] = -c.gb[1] * y[4] + I_UNIT * (c.o32 * i3) * r.b[1];
}

rotors rotors_at(const rot_ctx& c, double dp_det, double t) {
  rotors r;
  for (int i = 0; i < 3; ++i) r.a[i] = std::polar(1.0, c.da[i] * t);
  for (int j = 0; j < 2; ++j) r.b[j] = std::polar(1.0, c.wb[j] * t);
  r.p = std::polar(1.0, -dp_det * t);
  return r;
}

rotors rotors_mul(const rotors& r, const rotors& h) {
  rotors o;
  for (int i = 0; i < 3; ++i) o.a[i] = r.a[i] * h.a[i];
  for (int j = 0; j < 2; ++j) o.b[j] = r.b[j] * h.b[j];
  o.p = r.p * h.p;
  return o;
}

}  // namespace

trajectory integrate_rotated_frame(const system_params& p, const time_grid& g,
                                   const std::array<cx, 5>& init,
                                   const integration_options& opt) {
  // the fast carriers live in the rotors here, but the mechanical beat and
  // the probe-drive offset still have to be resolved by the step
  double fast = 0;
  for (auto& o : p.optical) {
    fast = std::max(fast, o.kappa);
    fast = std::max(fast, std::abs(o.delta_a - p.probe.delta_p));
  }
  for (auto& m : p.mech) fast = std::max(fast, m.omega_m);
  check_grid(p, g, fast);
  if (opt.stride < 1) throw std::invalid_argument("stride must be >= 1");

  rot_ctx c;
  for (int i = 0; i < 3; ++i) {
    c.ka[i] = p.optical[i].kappa;
    c.da[i] = p.optical[i].delta_a;
  }
  for (int j = 0; j < 2; ++j) {
    c.gb[j] = p.mech[j].gamma;
    c.wb[j] = p.mech[j].omega_m;
  }
  c.o1 = p.coupling.o_m1;
  c.o2 = p.coupling.o_m2;
  c.o31 = p.coupling.o_m31;
  c.o32 = p.coupling.o_m32;
  c.dd = drive_superposition(p.drive);
  c.dp = probe_superposition(p.probe);

  const double dt = g.dt;
  const double dp_det = p.probe.delta_p;
  const size_t nsteps = static_cast<size_t>(std::llround(g.t_end / dt));
  const size_t k0 = opt.store_from <= 0
                        ? 0
                        : static_cast<size_t>(
                              std::ceil(opt.store_from / dt - 1e-9));
  const double blow =
      1e6 * std::max({std::abs(c.dd), std::abs(c.dp), 1e-12});

  trajectory tr;
  const size_t cap = k0 <= nsteps ? (nsteps - k0) / opt.stride + 1 : 0;
  tr.times.reserve(cap);
  for (auto* v : {&tr.a1, &tr.a2, &tr.a3, &tr.b1, &tr.b2}) v->reserve(cap);

  cx y[5];
  for (int i = 0; i < 5; ++i) y[i] = init[i];
  const rotors half = rotors_at(c, dp_det, dt * 0.5);

  auto store = [&](size_t k) {
    if (k < k0 || (k - k0) % static_cast<size_t>(opt.stride) != 0) return;
    const double t = static_cast<double>(k) * dt;
    tr.times.push_back(t);
    // exact map back to drive-frame variables
    tr.a1.push_back(y[0] * std::polar(1.0, -c.da[0] * t));
    tr.a2.push_back(y[1] * std::polar(1.0, -c.da[1] * t));
    tr.a3.push_back(y[2] * std::polar(1.0, -c.da[2] * t));
    tr.b1.push_back(y[3] * std::polar(1.0, -c.wb[0] * t));
    tr.b2.push_back(y[4] * std::polar(1.0, -c.wb[1] * t));
  };

  store(0);
  rotors r = rotors_at(c, dp_det, 0.0);
  cx k1[5], k2[5], k3[5], k4[5], tmp[5];
  for (size_t k = 0; k < nsteps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k % RESYNC == 0) {
      r = rotors_at(c, dp_det, t);
      double m = 0;
      for (int i = 0; i < 5; ++i) m = std::max(m, std::abs(y[i]));
      if (!(m < blow))
        throw std::runtime_error("integration diverged at t = " +
                                 std::to_string(t));
    }
    const rotors rh = rotors_mul(r, half);
    const rotors rf = rotors_mul(rh, half);
    const double e0 = smooth_env(t, opt.probe_ramp_time);
    const double eh = smooth_env(t + 0.5 * dt, opt.probe_ramp_time);
    const double ef = smooth_env(t + dt, opt.probe_ramp_time);

    deriv_rot(c, r, y, e0, k1);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    deriv_rot(c, rh, tmp, eh, k2);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    deriv_rot(c, rh, tmp, eh, k3);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + dt * k3[i];
    deriv_rot(c, rf, tmp, ef, k4);
    for (int i = 0; i < 5; ++i)
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    r = rf;
    store(k + 1);
  }
  for (int i = 0; i < 5; ++i)
    if (!std::isfinite(y[i].real()) || !std::isfinite(y[i].imag()))
      throw std::runtime_error("integration diverged (non-finite state)");
  return tr;
}

std::array<cx, 5> demodulate_sideband(
    const trajectory& tr, double nu, const time_grid& g,
    const std::optional<std::array<cx, 5>>& steady) {
  if (tr.size() < 4) throw std::invalid_argument("trajectory too short");
  const double t_cut = g.t_end * g.transient_fraction;
  const double ds = tr.times.size() > 1 ? tr.times[1] - tr.times[0] : 0;
  size_t first = 0;
  while (first < tr.size() && tr.times[first] < t_cut - 0.5 * ds) ++first;
  // half-open window: the final sample is the next period's start
  const size_t count = tr.size() - first;
  if (count < 3)
    throw std::invalid_argument("post-transient window has too few samples");
  const size_t used = count - 1;
  const double span = static_cast<double>(used) * ds;

  if (nu == 0.0) {
    if (!steady)
      throw std::invalid_argument(
          "nu = 0 demodulation needs the steady baseline");
    std::array<cx, 5> out{};
    const std::vector<cx>* modes[5] = {&tr.a1, &tr.a2, &tr.a3, &tr.b1, &tr.b2};
    for (int m = 0; m < 5; ++m) {
      cx acc = 0;
      for (size_t k = first; k < first + used; ++k) acc += (*modes[m])[k];
      out[m] = acc / static_cast<double>(used) - (*steady)[m];
    }
    return out;
  }

  const double beat = 2.0 * M_PI / std::abs(nu);
  // relative slack so grid roundoff cannot reject an exact 50-period window
  if (span < 50.0 * beat * (1.0 - 1e-9))
    throw std::invalid_argument(
        "demodulation window shorter than 50 beat periods; need t_end >= " +
        std::to_string(t_cut + 50.0 * beat));

  std::array<cx, 5> base{};
  if (steady) {
    base = *steady;
  } else {
    const std::vector<cx>* modes[5] = {&tr.a1, &tr.a2, &tr.a3, &tr.b1, &tr.b2};
    for (int m = 0; m < 5; ++m) {
      cx acc = 0;
      for (size_t k = first; k < first + used; ++k) acc += (*modes[m])[k];
      base[m] = acc / static_cast<double>(used);
    }
  }

  std::array<cx, 5> out{};
  for (size_t k = first; k < first + used; ++k) {
    const cx w = std::polar(1.0, nu * tr.times[k]);
    out[0] += (tr.a1[k] - base[0]) * w;
    out[1] += (tr.a2[k] - base[1]) * w;
    out[2] += (tr.a3[k] - base[2]) * w;
    out[3] += (tr.b1[k] - base[3]) * w;
    out[4] += (tr.b2[k] - base[4]) * w;
  }
  for (auto& v : out) v /= static_cast<double>(used);
  return out;
}

comparison_report cross_check_response(const system_params& p, double x,
                                       const cross_check_options& opt) {
  system_params q = normalize_units(p, unit_mode::omega_m1_units);
  q.conv = convention::literal;
  const auto rep = validate_params(q);
  if (!rep.ok())
    throw std::invalid_argument("invalid parameters: " + rep.errors.front());

  const double pmax = std::max(q.probe.omega_p1, q.probe.omega_p2);
  if (!(pmax > 0))
    throw std::invalid_argument("cross-check needs a nonzero probe");
  const double dmax = std::max(q.drive.omega_d1, q.drive.omega_d2);
  double scale = 1.0;
  if (dmax > 0) scale = opt.probe_fraction * dmax / pmax;
  q.probe.omega_p1 *= scale;
  q.probe.omega_p2 *= scale;

  const double nu = x + q.mech[0].omega_m;  // probe-drive detuning
  q.probe.delta_p = nu;
  if (std::abs(nu) < 1e-6)
    throw std::invalid_argument("cross-check needs |x + omega_m1| above 1e-6");

  const steady_state_solution ss = steady_state(q);
  const fluctuation_amplitudes an = solve_fluctuation_system(q, ss, nu);

  // grid: transient long enough for the gamma-limited mechanical settling,
  // window an exact integer number of probe beat periods; the step shrinks
  // when the chosen frame leaves a faster scale to resolve
  const double gmin = std::min(q.mech[0].gamma, q.mech[1].gamma);
  const double period = 2.0 * M_PI / std::abs(nu);
  double fast = 0;
  for (auto& o : q.optical) {
    fast = std::max(fast, o.kappa);
    fast = std::max(fast, opt.rotated_frame ? std::abs(o.delta_a - nu)
                                            : std::abs(o.delta_a));
  }
  for (auto& m : q.mech) fast = std::max(fast, m.omega_m);
  if (!opt.rotated_frame) fast = std::max(fast, std::abs(nu));
  const double dt_cap = std::min(opt.dt, 0.04 / fast);
  const double dt = period / std::ceil(period / dt_cap);
  const double ramp = 2.0 / gmin;
  const double t_tr = std::ceil((4.0 / gmin) / dt) * dt;
  const double window =
      std::ceil(std::max(opt.demod_periods, 51.0)) * period;
  time_grid g;
  g.dt = dt;
  g.t_end = t_tr + window;
  g.transient_fraction = t_tr / g.t_end;

  const std::array<cx, 5> init = {ss.a1s, ss.a2s, ss.a3s, ss.b1s, ss.b2s};
  integration_options io;
  io.probe_ramp_time = ramp;
  io.store_from = t_tr;
  const trajectory tr = opt.rotated_frame
                            ? integrate_rotated_frame(q, g, init, io)
                            : integrate_mean_field(q, g, init, io);
  const std::array<cx, 5> dm = demodulate_sideband(tr, nu, g, init);

  comparison_report out;
  out.tolerance = opt.tolerance;
  out.probe_scale = scale;
  const cx analytic[5] = {an.da1p, an.da2p, an.da3p, an.db1p, an.db2p};
  double amax = 0;
  for (int m = 0; m < 5; ++m) amax = std::max(amax, std::abs(analytic[m]));
  for (int m = 0; m < 5; ++m) {
    out.modes[m].analytic = analytic[m];
    out.modes[m].demodulated = dm[m];
    const double den = std::max(std::abs(analytic[m]), 1e-9 * amax);
    out.modes[m].rel_err =
        den > 0 ? std::abs(dm[m] - analytic[m]) / den : std::abs(dm[m]);
  }
  const int graded = opt.optical_only ? 2 : 5;
  for (int m = 0; m < graded; ++m)
    out.max_rel_err = std::max(out.max_rel_err, out.modes[m].rel_err);
  out.pass = out.max_rel_err <= out.tolerance;
  return out;
}

}  // namespace oms
