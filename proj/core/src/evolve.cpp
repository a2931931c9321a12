#include "kgstab/evolve.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kgstab/errors.hpp"
#include "kgstab/numerics.hpp"

namespace kgstab {

namespace {

using cplx = std::complex<double>;

// 3a|phi|phi - 4b|phi|^2 phi; the |phi|phi term is continuous at 0.
cplx nonlinearity(const ModelParams& p, cplx phi) {
  const double r = std::abs(phi);
  return (3.0 * p.a() * r - 4.0 * p.b() * r * r) * phi;
}

// Directional derivative of the nonlinearity at phi along psi.
cplx nonlinearity_derivative(const ModelParams& p, cplx phi, cplx psi) {
  const double r = std::abs(phi);
  if (r == 0.0) return {0.0, 0.0};
  const double proj = std::real(std::conj(phi) * psi);
  return 3.0 * p.a() * (r * psi + phi * (proj / r)) -
         4.0 * p.b() * (r * r * psi + 2.0 * proj * phi);
}

// D_xx f - m^2 f at interior nodes, zero at the Dirichlet ends.
Field linear_part(const Field& f, double dx, const ModelParams& p) {
  const std::size_t n = f.size();
  const double inv_dx2 = 1.0 / (dx * dx);
  const double m2 = p.m() * p.m();
  Field out(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv_dx2 - m2 * f[i];
  }
  return out;
}

// next = 2 phi - prev + dt^2 acc(phi); returns sup |next|.
double leapfrog(const Field& phi, const Field& prev, Field& next, double dx,
                double dt, const ModelParams& p) {
  const std::size_t n = phi.size();
  const double inv_dx2 = 1.0 / (dx * dx);
  const double m2 = p.m() * p.m();
  const double dt2 = dt * dt;
  next.resize(n);
  next.front() = 0.0;
  next.back() = 0.0;
  double sup = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const cplx acc = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * inv_dx2 -
                     m2 * phi[i] + nonlinearity(p, phi[i]);
    next[i] = 2.0 * phi[i] - prev[i] + dt2 * acc;
    sup = std::max(sup, std::abs(next[i]));
  }
  return sup;
}

double sup_abs(const Field& f) {
  double s = 0.0;
  for (const auto& v : f) s = std::max(s, std::abs(v));
  return s;
}

// Profile samples R(|x_i|) on the state grid.
std::vector<double> profile_on_grid(const SolitonProfile& profile,
                                    double step_x, double half_length,
                                    std::size_t count) {
  const double hp = profile.step();
  const bool same_step = std::abs(step_x - hp) <= 1e-12 * hp;
  if (!same_step && step_x > hp) {
    std::ostringstream os;
    os << "state grid step " << step_x << " is coarser than the profile step " << hp;
    throw GridError(os.str());
  }
  std::vector<double> r(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = -half_length + step_x * static_cast<double>(i);
    if (same_step) {
      const auto j = static_cast<std::size_t>(std::llround(std::abs(x) / hp));
      r[i] = j < profile.size() ? profile[j] : 0.0;
    } else {
      r[i] = profile.interpolate(x);
    }
  }
  return r;
}

}  // namespace

Perturbation Perturbation::parse(std::string_view text) {
  if (text == "none") return {};
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("perturbation must be none, scale:<eps> or bump:<eps>");
  }
  const auto head = text.substr(0, colon);
  const std::string tail(text.substr(colon + 1));
  Perturbation out;
  if (head == "scale") {
    out.kind = Kind::scale;
  } else if (head == "bump") {
    out.kind = Kind::bump;
  } else {
    throw std::invalid_argument("unknown perturbation kind '" + std::string(head) + "'");
  }
  std::size_t used = 0;
  try {
    out.epsilon = std::stod(tail, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tail.size() || !std::isfinite(out.epsilon)) {
    throw std::invalid_argument("bad perturbation amplitude '" + tail + "'");
  }
  return out;
}

std::string Perturbation::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::none: return "none";
    case Kind::scale: os << "scale:" << epsilon; break;
    case Kind::bump: os << "bump:" << epsilon; break;
  }
  return os.str();
}

double Perturbation::apply(double r, double x) const noexcept {
  switch (kind) {
    case Kind::scale: return (1.0 + epsilon) * r;
    case Kind::bump: return r + epsilon * std::exp(-x * x);
    case Kind::none: break;
  }
  return r;
}

FieldState init_state(const SolitonProfile& profile,
                      const Perturbation& perturbation, double step_t) {
  const double dx = profile.step();
  if (!(step_t > 0.0) || step_t > 0.9 * dx) {
    std::ostringstream os;
    os << "time step " << step_t << " violates dt <= 0.9 dx (dx=" << dx << ")";
    throw GridError(os.str());
  }
  const auto& p = profile.params();
  const double w = profile.omega();
  const auto r = profile.full_line_values();
  const std::size_t n = r.size();

  FieldState s;
  s.step_x = dx;
  s.step_t = step_t;
  s.half_length = profile.half_length();
  s.blowup_limit = 1e3 * profile[0];
  s.phi.resize(n);
  Field psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = perturbation.apply(r[i], s.x(i));
    s.phi[i] = v;
    psi[i] = cplx(0.0, -w * v);
  }
  s.phi.front() = s.phi.back() = 0.0;
  psi.front() = psi.back() = 0.0;

  // phi_tt from the equation, phi_ttt from differentiating it once in time.
  const auto lin_phi = linear_part(s.phi, dx, p);
  const auto lin_psi = linear_part(psi, dx, p);
  const double dt = step_t;
  s.phi_prev.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx acc = lin_phi[i] + nonlinearity(p, s.phi[i]);
    const cplx jerk = lin_psi[i] + nonlinearity_derivative(p, s.phi[i], psi[i]);
    s.phi_prev[i] = s.phi[i] - dt * psi[i] + 0.5 * dt * dt * acc -
                    (dt * dt * dt / 6.0) * jerk;
  }
  s.phi_prev.front() = s.phi_prev.back() = 0.0;
  s.velocity = std::move(psi);
  return s;
}

void advance(FieldState& state, const ModelParams& p) {
  Field next;
  const double sup = leapfrog(state.phi, state.phi_prev, next, state.step_x,
                              state.step_t, p);
  state.phi_prev = std::move(state.phi);
  state.phi = std::move(next);
  state.time += state.step_t;
  state.velocity.reset();
  if (!(sup <= state.blowup_limit)) {
    std::ostringstream os;
    os << "sup|phi| = " << sup << " exceeded the blow-up guard "
       << state.blowup_limit << " at t = " << state.time;
    throw BlowUpError(os.str(), state.time);
  }
}

FieldState step(const FieldState& state, const ModelParams& p) {
  FieldState next = state;
  advance(next, p);
  return next;
}

Field velocity(const FieldState& state, const ModelParams& p) {
  if (state.velocity) return *state.velocity;
  Field next;
  leapfrog(state.phi, state.phi_prev, next, state.step_x, state.step_t, p);
  Field psi(state.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    psi[i] = (next[i] - state.phi_prev[i]) / (2.0 * state.step_t);
  }
  return psi;
}

double field_energy(const Field& phi, const Field& psi, double dx,
                    const ModelParams& p) {
  const auto dphi = numerics::derivative(phi, dx);
  const double m2 = p.m() * p.m();
  std::vector<double> density(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double r = std::abs(phi[i]);
    density[i] = 0.5 * std::norm(psi[i]) + 0.5 * std::norm(dphi[i]) +
                 0.5 * m2 * r * r + g_derivatives(p, r).g;
  }
  return numerics::simpson(density, dx);
}

double field_charge(const Field& phi, const Field& psi, double dx) {
  std::vector<double> density(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    density[i] = std::imag(psi[i] * std::conj(phi[i]));
  }
  return -numerics::simpson(density, dx);
}

double orbit_norm(const SolitonProfile& profile) {
  const auto& p = profile.params();
  const double w = profile.omega();
  const auto r = profile.full_line_values();
  const auto dr = numerics::derivative(r, profile.step());
  std::vector<double> density(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    density[i] = (p.m() * p.m() + w * w) * r[i] * r[i] + dr[i] * dr[i];
  }
  return std::sqrt(numerics::simpson(density, profile.step()));
}

double orbital_distance(const Field& phi, const Field& psi, double step_x,
                        double half_length, const SolitonProfile& profile) {
  if (phi.size() != psi.size()) throw GridError("phi and psi sizes differ");
  const auto& p = profile.params();
  const double w = profile.omega();
  const double m2 = p.m() * p.m();
  const auto r = profile_on_grid(profile, step_x, half_length, phi.size());
  const auto dr = numerics::derivative(r, step_x);
  const auto dphi = numerics::derivative(phi, step_x);

  // Pairing z = m^2 <phi, R> + <phi', R'> + <psi, -i omega R>; the closest
  // orbit point is e^{i arg z} (R, -i omega R).
  Field pairing(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    pairing[i] = m2 * phi[i] * r[i] + dphi[i] * dr[i] +
                 psi[i] * std::conj(cplx(0.0, -w * r[i]));
  }
  const cplx z = numerics::simpson(pairing, step_x);
  const cplx phase = std::abs(z) > 0.0 ? z / std::abs(z) : cplx(1.0, 0.0);

  std::vector<double> density(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const cplx d_phi = phi[i] - phase * r[i];
    const cplx d_dphi = dphi[i] - phase * dr[i];
    const cplx d_psi = psi[i] - phase * cplx(0.0, -w * r[i]);
    density[i] = m2 * std::norm(d_phi) + std::norm(d_dphi) + std::norm(d_psi);
  }
  return std::sqrt(std::max(0.0, numerics::simpson(density, step_x)));
}

double orbital_distance(const FieldState& state, const SolitonProfile& profile,
                        const ModelParams& p) {
  return orbital_distance(state.phi, velocity(state, p), state.step_x,
                          state.half_length, profile);
}

Diagnostics run(const ModelParams& p, double omega,
                const Perturbation& perturbation, double t_final,
                std::size_t sample_every, const RunOptions& options) {
  require_in_window(p, omega);
  if (!(t_final > 0.0)) throw DomainError("t_final must be positive");
  if (sample_every == 0) throw std::invalid_argument("sample_every must be positive");

  const double length =
      options.half_length.value_or(default_half_length(p, omega) + 20.0);
  const auto profile = build_profile(p, omega, {options.step_x, length, 1e-12});
  auto state = init_state(profile, perturbation, options.step_t);

  Diagnostics d;
  d.orbit_norm = orbit_norm(profile);
  d.half_length = state.half_length;
  d.step_x = state.step_x;
  d.step_t = state.step_t;

  const auto steps = static_cast<std::size_t>(std::llround(t_final / options.step_t));
  // Tail sensors sit at |x| = L - 5.
  const auto sensor = static_cast<std::size_t>(std::llround(5.0 / state.step_x));
  const std::size_t n = state.size();
  const std::size_t left_sensor = std::min(sensor, n - 1);
  const std::size_t right_sensor = n - 1 - left_sensor;

  Field next;
  Field psi(n);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double sup = leapfrog(state.phi, state.phi_prev, next, state.step_x,
                                state.step_t, p);
    const double t = static_cast<double>(k) * state.step_t;
    if (k % sample_every == 0 || k == steps) {
      for (std::size_t i = 0; i < n; ++i) {
        psi[i] = (next[i] - state.phi_prev[i]) / (2.0 * state.step_t);
      }
      d.times.push_back(t);
      d.energy.push_back(field_energy(state.phi, psi, state.step_x, p));
      d.charge.push_back(field_charge(state.phi, psi, state.step_x));
      d.orbital_distance.push_back(
          orbital_distance(state.phi, psi, state.step_x, state.half_length, profile));
      d.sup_amplitude.push_back(sup_abs(state.phi));
    }
    if (!d.tail_contact_time &&
        std::max(std::abs(state.phi[left_sensor]), std::abs(state.phi[right_sensor])) >
            options.tail_threshold) {
      d.tail_contact_time = t;
    }
    if (k == steps) break;
    if (!(sup <= state.blowup_limit)) {
      d.truncated = true;
      d.blowup_time = t + state.step_t;
      break;
    }
    state.phi_prev.swap(state.phi);
    state.phi.swap(next);
    state.time = t + state.step_t;
  }
  return d;
}

RunSummary summarize(const Diagnostics& d) {
  RunSummary s;
  s.orbit_norm = d.orbit_norm;
  if (d.times.empty()) return s;
  const double e0 = d.energy.front();
  const double q0 = d.charge.front();
  s.initial_distance = d.orbital_distance.front();
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    s.max_rel_energy_drift =
        std::max(s.max_rel_energy_drift, std::abs(d.energy[i] - e0) / std::abs(e0));
    s.max_rel_charge_drift =
        std::max(s.max_rel_charge_drift, std::abs(d.charge[i] - q0) / std::abs(q0));
    s.max_distance = std::max(s.max_distance, d.orbital_distance[i]);
    if (!s.crossing_10x && d.orbital_distance[i] > 10.0 * s.initial_distance) {
      s.crossing_10x = d.times[i];
    }
    if (!s.crossing_100x && d.orbital_distance[i] > 100.0 * s.initial_distance) {
      s.crossing_100x = d.times[i];
    }
  }
  return s;
}

}  // namespace kgstab
