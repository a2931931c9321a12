#include "kgstab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kgstab/errors.hpp"

namespace kgstab {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// m^2 - omega^2 without cancellation near omega = m.
double gap(const ModelParams& p, double omega) {
  return (p.m() - omega) * (p.m() + omega);
}

}  // namespace

ModelParams::ModelParams(double a, double b, double m) : a_(a), b_(b), m_(m) {
  if (!positive_finite(a) || !positive_finite(b) || !positive_finite(m)) {
    std::ostringstream os;
    os << "model parameters must be positive and finite (a=" << a
       << ", b=" << b << ", m=" << m << ")";
    throw DomainError(os.str());
  }
}

double tau(const ModelParams& p) {
  return 2.0 * p.m() * p.m() * p.b() / (p.a() * p.a());
}

double omega_star(const ModelParams& p) {
  const double sup_v = p.a() * p.a() / (2.0 * p.b());
  const double d = p.m() * p.m() - sup_v;
  return d > 0.0 ? std::sqrt(d) : 0.0;
}

FrequencyWindow frequency_window(const ModelParams& p) {
  return {omega_star(p), p.m()};
}

void require_in_window(const ModelParams& p, double omega) {
  const auto w = frequency_window(p);
  if (!std::isfinite(omega) || !w.contains(omega)) {
    std::ostringstream os;
    os.precision(17);
    os << "omega=" << omega << " outside the open window (" << w.omega_star
       << ", " << w.m << ")";
    throw DomainError(os.str());
  }
}

double alpha_of_omega(const ModelParams& p, double omega) {
  require_in_window(p, omega);
  return std::sqrt(2.0 * p.b() * gap(p, omega)) / p.a();
}

double omega_of_alpha(const ModelParams& p, double alpha) {
  const double t = tau(p);
  const double upper = std::min(1.0, std::sqrt(t));
  if (!(alpha > 0.0) || !(alpha < upper)) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha=" << alpha << " outside (0, " << upper << ")";
    throw DomainError(os.str());
  }
  return p.a() / std::sqrt(2.0 * p.b()) * std::sqrt(t - alpha * alpha);
}

double alpha_prime(const ModelParams& p, double omega) {
  const double alpha = alpha_of_omega(p, omega);
  return -2.0 * p.b() * omega / (p.a() * p.a() * alpha);
}

double r_star(const ModelParams& p, double omega) {
  require_in_window(p, omega);
  const double c = gap(p, omega);
  const double alpha_sq = 2.0 * p.b() * c / (p.a() * p.a());
  // (a/2b)(1 - sqrt(1 - alpha^2)) multiplied through by its conjugate.
  return c / (p.a() * (1.0 + std::sqrt(std::max(0.0, 1.0 - alpha_sq))));
}

double potential_v(const ModelParams& p, double s) {
  return 2.0 * p.a() * s - 2.0 * p.b() * s * s;
}

NonlinearityValues g_derivatives(const ModelParams& p, double s) {
  const double a = p.a();
  const double b = p.b();
  const double s2 = s * s;
  return {-a * s2 * s + b * s2 * s2, -3.0 * a * s2 + 4.0 * b * s2 * s,
          -6.0 * a * s + 12.0 * b * s2};
}

}  // namespace kgstab
