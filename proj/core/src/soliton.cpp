#include "kgstab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kgstab/errors.hpp"
#include "kgstab/numerics.hpp"

namespace kgstab {

namespace {

struct ProfileShape {
  double height;    // c / a
  double s;         // sqrt(1 - alpha^2)
  double k;         // sqrt(c), the decay rate
};

ProfileShape shape(const ModelParams& p, double omega) {
  require_in_window(p, omega);
  const double c = (p.m() - omega) * (p.m() + omega);
  const double alpha_sq = 2.0 * p.b() * c / (p.a() * p.a());
  return {c / p.a(), std::sqrt(std::max(0.0, 1.0 - alpha_sq)), std::sqrt(c)};
}

// Written in u = exp(-k|x|) so that neither cosh nor sinh overflows.
double eval_profile(const ProfileShape& sh, double x) {
  const double u = std::exp(-sh.k * std::abs(x));
  return sh.height * u / (u + 0.5 * sh.s * (1.0 + u * u));
}

double eval_derivative(const ProfileShape& sh, double x) {
  const double u = std::exp(-sh.k * std::abs(x));
  const double den = u + 0.5 * sh.s * (1.0 + u * u);
  const double mag = sh.height * sh.s * sh.k * 0.5 * u * (1.0 - u * u) / (den * den);
  return x > 0.0 ? -mag : (x < 0.0 ? mag : 0.0);
}

void check_grid(const GridSpec& grid) {
  if (!(grid.step > 0.0) || !std::isfinite(grid.step)) {
    throw GridError("grid step must be positive");
  }
  if (grid.half_length && !(*grid.half_length > 0.0)) {
    throw GridError("grid half-length must be positive");
  }
  if (!(grid.tail_tolerance > 0.0)) {
    throw GridError("tail tolerance must be positive");
  }
}

}  // namespace

double closed_form_profile(const ModelParams& p, double omega, double x) {
  return eval_profile(shape(p, omega), x);
}

double closed_form_derivative(const ModelParams& p, double omega, double x) {
  return eval_derivative(shape(p, omega), x);
}

double default_half_length(const ModelParams& p, double omega,
                           double tail_tolerance) {
  const auto sh = shape(p, omega);
  double length = 40.0 / sh.k;
  // R(L)/R(0) = (1 + s) / (1 + s cosh(kL)).
  if (sh.s > 0.0) {
    const double need = ((1.0 + sh.s) / tail_tolerance - 1.0) / sh.s;
    if (need > 1.0) length = std::max(length, 1.01 * std::acosh(need) / sh.k);
  }
  return length;
}

SolitonProfile::SolitonProfile(ModelParams params, double omega, double step,
                               std::vector<double> values, double max_residual,
                               double residual_bound)
    : params_(params),
      omega_(omega),
      step_(step),
      values_(std::move(values)),
      max_residual_(max_residual),
      residual_bound_(residual_bound) {}

std::vector<double> SolitonProfile::full_line_values() const {
  const std::size_t n = values_.size();
  std::vector<double> out(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[n - 1 + i] = values_[i];
    out[n - 1 - i] = values_[i];
  }
  return out;
}

double SolitonProfile::interpolate(double x) const {
  const double ax = std::abs(x);
  const double pos = ax / step_;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values_.size()) return i + 1 == values_.size() ? values_.back() : 0.0;
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

SolitonProfile build_profile(const ModelParams& p, double omega,
                             const GridSpec& grid) {
  check_grid(grid);
  const auto sh = shape(p, omega);
  const double wanted = grid.half_length.value_or(
      default_half_length(p, omega, grid.tail_tolerance));
  auto panels = static_cast<std::size_t>(std::ceil(wanted / grid.step - 1e-9));
  panels += panels % 2;  // Simpson needs an even panel count
  panels = std::max<std::size_t>(panels, 4);

  std::vector<double> values(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    values[i] = eval_profile(sh, grid.step * static_cast<double>(i));
  }
  if (!(values.back() < grid.tail_tolerance * values.front())) {
    std::ostringstream os;
    os << "half-length " << grid.step * static_cast<double>(panels)
       << " too short: R(L)/R(0) = " << values.back() / values.front()
       << " exceeds tail tolerance " << grid.tail_tolerance;
    throw GridError(os.str());
  }

  const double c = sh.k * sh.k;
  const double h2 = grid.step * grid.step;
  double residual = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double left = i == 0 ? values[1] : values[i - 1];
    const double d2 = (values[i + 1] - 2.0 * values[i] + left) / h2;
    const double rhs = c * values[i] + g_derivatives(p, values[i]).dg;
    residual = std::max(residual, std::abs(d2 - rhs));
  }
  const double bound = std::max(1e-8, 10.0 * h2 * values.front());
  if (!(residual < bound)) {
    std::ostringstream os;
    os << "profile ODE residual " << residual << " exceeds bound " << bound;
    throw GridError(os.str());
  }
  return SolitonProfile(p, omega, grid.step, std::move(values), residual, bound);
}

std::vector<double> profile_derivative(const SolitonProfile& profile) {
  // Differentiate the even extension so the stencil is centered at x = 0.
  const auto full = profile.full_line_values();
  const auto d = numerics::derivative(full, profile.step());
  const std::size_t n = profile.size();
  return {d.begin() + static_cast<std::ptrdiff_t>(n - 1), d.end()};
}

double first_integral_defect(const SolitonProfile& profile) {
  const auto& p = profile.params();
  const double w = profile.omega();
  const double c = (p.m() - w) * (p.m() + w);
  const auto dr = profile_derivative(profile);
  double worst = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile[i];
    const double defect = dr[i] * dr[i] - c * r * r - 2.0 * g_derivatives(p, r).g;
    worst = std::max(worst, std::abs(defect));
  }
  return worst;
}

double l2_norm_squared(const SolitonProfile& profile) {
  std::vector<double> sq(profile.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = profile[i] * profile[i];
  return 2.0 * numerics::simpson(sq, profile.step());
}

double charge(const SolitonProfile& profile) {
  return profile.omega() * l2_norm_squared(profile);
}

double energy(const SolitonProfile& profile) {
  const auto& p = profile.params();
  const double w = profile.omega();
  const auto dr = profile_derivative(profile);
  const std::size_t n = profile.size();
  std::vector<double> r2(n), dr2(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    r2[i] = profile[i] * profile[i];
    dr2[i] = dr[i] * dr[i];
    g[i] = g_derivatives(p, profile[i]).g;
  }
  const double h = profile.step();
  const double norm2 = 2.0 * numerics::simpson(r2, h);
  const double grad2 = 2.0 * numerics::simpson(dr2, h);
  const double pot = 2.0 * numerics::simpson(g, h);
  return 0.5 * (w * w + p.m() * p.m()) * norm2 + 0.5 * grad2 + pot;
}

double action(const SolitonProfile& profile) {
  return energy(profile) - profile.omega() * charge(profile);
}

double default_omega_step(const ModelParams& p) {
  return 1e-3 * frequency_window(p).width();
}

namespace {

void require_stencil(const ModelParams& p, double omega, double h_omega) {
  if (!(h_omega > 0.0)) throw DomainError("frequency step must be positive");
  const auto w = frequency_window(p);
  if (!w.contains(omega - h_omega) || !w.contains(omega + h_omega)) {
    std::ostringstream os;
    os.precision(17);
    os << "stencil [" << omega - h_omega << ", " << omega + h_omega
       << "] leaves the window (" << w.omega_star << ", " << w.m << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

double d_second_numeric(const ModelParams& p, double omega, double h_omega,
                        const GridSpec& grid) {
  require_stencil(p, omega, h_omega);
  const double lo = action(build_profile(p, omega - h_omega, grid));
  const double mid = action(build_profile(p, omega, grid));
  const double hi = action(build_profile(p, omega + h_omega, grid));
  return (hi - 2.0 * mid + lo) / (h_omega * h_omega);
}

double d_prime_numeric(const ModelParams& p, double omega, double h_omega,
                       const GridSpec& grid) {
  require_stencil(p, omega, h_omega);
  const double lo = action(build_profile(p, omega - h_omega, grid));
  const double hi = action(build_profile(p, omega + h_omega, grid));
  return (hi - lo) / (2.0 * h_omega);
}

}  // namespace kgstab
