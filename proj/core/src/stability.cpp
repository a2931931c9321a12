#include "kgstab/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "kgstab/errors.hpp"
#include "kgstab/numerics.hpp"

namespace kgstab {

namespace {

void require_unit_open(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << who << ": alpha=" << alpha << " outside (0, 1)";
    throw DomainError(os.str());
  }
}

// (artanh(alpha) - alpha) / alpha^3 = sum_{k>=1} alpha^(2k-2) / (2k+1).
double artanh_cubic_remainder(double alpha) {
  if (alpha < 0.1) {
    const double a2 = alpha * alpha;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 24; ++k) {
      sum += term / (2.0 * k + 1.0);
      term *= a2;
    }
    return sum;
  }
  return (std::atanh(alpha) - alpha) / (alpha * alpha * alpha);
}

// artanh(alpha)/alpha - 1.
double artanh_ratio_excess(double alpha) {
  return alpha * alpha * artanh_cubic_remainder(alpha);
}

// First alpha in (0,1) where a derivative that starts positive turns
// non-positive, refined by bisection.
double unimodal_argmax(const std::function<double(double)>& slope, double tol) {
  std::vector<double> probes;
  for (int i = 1; i < 256; ++i) probes.push_back(i / 256.0);
  for (int j = 9; j <= 45; ++j) probes.push_back(1.0 - std::ldexp(1.0, -j));
  std::sort(probes.begin(), probes.end());
  for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
    if (slope(probes[i]) > 0.0 && slope(probes[i + 1]) <= 0.0) {
      return numerics::bisect(slope, probes[i], probes[i + 1], tol);
    }
  }
  throw ConvergenceError("unimodal_argmax: no sign change of the slope in (0,1)");
}

// Roots of f(alpha) = level for a unimodal f on (0, upper) with f(0+) = f0.
std::vector<double> unimodal_level_roots(const std::function<double(double)>& f,
                                         double f0, double argmax, double upper,
                                         double f_upper, double level,
                                         double tol) {
  std::vector<double> roots;
  auto g = [&](double x) { return (x >= upper ? f_upper : f(x)) - level; };
  const double rising_end = std::min(argmax, upper);
  const double peak = argmax < upper ? f(argmax) : f_upper;
  const double top = rising_end < upper ? peak : f_upper;
  // Falling branch first so roots come out in decreasing alpha.
  if (argmax < upper && peak > level && f_upper < level) {
    roots.push_back(numerics::bisect(g, argmax, upper, tol));
  }
  if (f0 < level && top > level) {
    roots.push_back(numerics::bisect(g, 0.0 + 1e-300, rising_end, tol));
  }
  return roots;
}

}  // namespace

double log_ratio(double alpha) {
  if (std::abs(alpha) < 1e-4) {
    const double a2 = alpha * alpha;
    return 2.0 * alpha * (1.0 + a2 * (1.0 / 3.0 + a2 * (1.0 / 5.0 + a2 / 7.0)));
  }
  return 2.0 * std::atanh(alpha);
}

double k1(double tau, double alpha) {
  require_unit_open(alpha, "k1");
  if (!(alpha * alpha < tau)) {
    std::ostringstream os;
    os.precision(17);
    os << "k1: alpha^2=" << alpha * alpha << " must be below tau=" << tau;
    throw DomainError(os.str());
  }
  // ln((1+a)/(1-a)) - 2a = 2 a^3 (artanh(a) - a)/a^3
  return std::sqrt(tau - alpha * alpha) * 2.0 * alpha * alpha * alpha *
         artanh_cubic_remainder(alpha);
}

double k2(double alpha) {
  require_unit_open(alpha, "k2");
  return 1.0 + artanh_ratio_excess(alpha) * (1.0 - alpha * alpha);
}

double k2_prime(double alpha) {
  require_unit_open(alpha, "k2_prime");
  // -(1 + 1/a^2) artanh(a) + 1/a + 2a = 2a - artanh(a) - a * T(a)
  const double t = artanh_cubic_remainder(alpha);
  const double artanh = alpha + alpha * alpha * alpha * t;
  return 2.0 * alpha - artanh - alpha * t;
}

double convexity_threshold(double alpha) {
  require_unit_open(alpha, "convexity_threshold");
  return alpha * alpha + artanh_ratio_excess(alpha) * (1.0 - alpha * alpha);
}

double convexity_threshold_prime(double alpha) {
  return k2_prime(alpha) + 2.0 * alpha;
}

Extremum tau_star(double tolerance) {
  const double arg = unimodal_argmax(k2_prime, tolerance);
  return {k2(arg), arg};
}

Extremum critical_tau(double tolerance) {
  const double arg = unimodal_argmax(convexity_threshold_prime, tolerance);
  return {convexity_threshold(arg), arg};
}

double sigma_closed(const ModelParams& p, double omega) {
  const double alpha = alpha_of_omega(p, omega);
  const double scale = p.a() * p.a() / (4.0 * p.b() * p.b());
  return scale * k1(tau(p), alpha);
}

double sigma_prime_closed(const ModelParams& p, double omega) {
  const double alpha = alpha_of_omega(p, omega);
  const double t = tau(p);
  const double a2 = alpha * alpha;
  const double scale = p.a() * p.a() / (2.0 * p.b() * p.b());
  return scale * a2 * alpha_prime(p, omega) /
         ((1.0 - a2) * std::sqrt(t - a2)) * (t - convexity_threshold(alpha));
}

int d_second_sign(const ModelParams& p, double omega, double tolerance) {
  const double diff = tau(p) - convexity_threshold(alpha_of_omega(p, omega));
  if (std::abs(diff) < tolerance) return 0;
  return diff > 0.0 ? 1 : -1;
}

std::vector<double> k2_level_roots(double level, double tolerance) {
  const double arg = tau_star(1e-15).argmax;
  return unimodal_level_roots([](double a) { return k2(a); }, 1.0, arg, 1.0,
                              1.0, level, tolerance);
}

std::vector<double> threshold_level_roots(double level, double upper,
                                          double tolerance) {
  if (!(upper > 0.0 && upper <= 1.0)) {
    throw DomainError("threshold_level_roots: upper must lie in (0, 1]");
  }
  const double arg = critical_tau(1e-15).argmax;
  const double f_upper = upper >= 1.0 ? 1.0 : convexity_threshold(upper);
  return unimodal_level_roots([](double a) { return convexity_threshold(a); },
                              0.0, arg, upper, f_upper, level, tolerance);
}

const char* to_string(Verdict v) noexcept {
  return v == Verdict::stable ? "stable" : "unstable";
}

StabilityReport classify(const ModelParams& p, const ClassifyOptions& options) {
  const double t = tau(p);
  const auto peak = critical_tau();
  StabilityReport report{p,   t,  tau_star().value, peak.value,
                         frequency_window(p), {}, {}, {}, {}, false};
  const double upper = std::min(1.0, std::sqrt(t));

  if (std::abs(t - peak.value) < options.degenerate_tolerance &&
      peak.argmax < upper) {
    report.degenerate = true;
    report.roots_alpha = {peak.argmax};
  } else {
    report.roots_alpha = threshold_level_roots(t, upper, options.root_tolerance);
  }
  for (double alpha : report.roots_alpha) {
    report.roots_omega.push_back(omega_of_alpha(p, alpha));
  }

  std::vector<double> cuts{report.omega_window.omega_star};
  cuts.insert(cuts.end(), report.roots_omega.begin(), report.roots_omega.end());
  cuts.push_back(report.omega_window.m);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const int sign =
        report.degenerate ? 1 : d_second_sign(p, mid, options.sign_tolerance);
    report.intervals.push_back(
        {cuts[i], cuts[i + 1], sign >= 0 ? Verdict::stable : Verdict::unstable});
  }

  if (options.verify_with_oracle) {
    report.oracle_probes.resize(report.intervals.size());
    numerics::parallel_for(
        report.intervals.size(), options.threads, [&](std::size_t i) {
          const auto& iv = report.intervals[i];
          const double mid = 0.5 * (iv.lo + iv.hi);
          const double h =
              std::min(default_omega_step(p), 0.25 * (iv.hi - iv.lo));
          const double fd = d_second_numeric(p, mid, h, options.oracle_grid);
          const int closed = iv.verdict == Verdict::stable ? 1 : -1;
          report.oracle_probes[i] = {mid, h, fd, closed};
        });
    for (const auto& probe : report.oracle_probes) {
      if ((probe.d_second > 0.0 ? 1 : -1) != probe.closed_sign) {
        std::ostringstream os;
        os.precision(17);
        os << "closed-form sign " << probe.closed_sign
           << " disagrees with finite-difference d''=" << probe.d_second
           << " at omega=" << probe.omega;
        throw OracleDisagreement(os.str());
      }
    }
  }
  return report;
}

}  // namespace kgstab
