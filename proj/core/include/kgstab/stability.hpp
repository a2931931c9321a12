#pragma once

// Closed-form convexity analysis of d(omega) = E(u_omega) - omega Q(u_omega).
//
// With alpha = alpha(omega) the charge is
//   sigma(omega) = omega ||R_omega||^2 = (a^2 / 4b^2) k1(tau, alpha)
//   k1(tau, alpha) = sqrt(tau - alpha^2) (ln((1+alpha)/(1-alpha)) - 2 alpha)
// and differentiating,
//   sigma'(omega) = (a^2/2b^2) alpha^2 alpha'(omega)
//                   / ((1 - alpha^2) sqrt(tau - alpha^2)) * (tau - kappa(alpha))
//   kappa(alpha)  = (1 - alpha^2)/(2 alpha) ln((1+alpha)/(1-alpha)) + 2 alpha^2 - 1
//                 = k2(alpha) + alpha^2 - 1.
// Since alpha' < 0, d'' = -sigma' has the sign of tau - kappa(alpha):
// positive (orbitally stable) where tau > kappa.
//
// k2 is kept as its own function: sup k2 = 1.1346... is the constant usually
// quoted as tau_*, but the sign of d'' is governed by kappa, whose supremum
// (critical_tau) is about 1.01429.

#include <vector>

#include "kgstab/model.hpp"
#include "kgstab/soliton.hpp"

namespace kgstab {

/// sqrt(tau - alpha^2) (ln((1+alpha)/(1-alpha)) - 2 alpha); 0 < alpha < 1, alpha^2 < tau.
double k1(double tau, double alpha);

/// ((1 - alpha^2) / (2 alpha)) ln((1+alpha)/(1-alpha)) + alpha^2; 0 < alpha < 1.
double k2(double alpha);

/// -(1/2)(1 + 1/alpha^2) ln((1+alpha)/(1-alpha)) + 1/alpha + 2 alpha.
double k2_prime(double alpha);

/// kappa(alpha) = k2(alpha) + alpha^2 - 1: the value of tau at which sigma'
/// vanishes at alpha.
double convexity_threshold(double alpha);
double convexity_threshold_prime(double alpha);

/// ln((1+alpha)/(1-alpha)), switching to a series for alpha < 1e-4.
double log_ratio(double alpha);

struct Extremum {
  double value;
  double argmax;
};

/// sup of k2 over (0,1) and its argmax alpha_d, by bisection on k2_prime.
Extremum tau_star(double tolerance = 1e-15);

/// sup of kappa over (0,1) and its argmax, by bisection on kappa'.
Extremum critical_tau(double tolerance = 1e-15);

/// omega ||R_omega||^2 in closed form.
double sigma_closed(const ModelParams& p, double omega);

/// d sigma / d omega in closed form.
double sigma_prime_closed(const ModelParams& p, double omega);

/// sign(tau - kappa(alpha(omega))): +1 where d'' > 0, -1 where d'' < 0 and 0
/// when |tau - kappa| < tolerance.
int d_second_sign(const ModelParams& p, double omega, double tolerance = 1e-10);

/// Roots of k2(alpha) = level on (0, 1), in decreasing alpha.
std::vector<double> k2_level_roots(double level, double tolerance = 1e-14);

/// Roots of kappa(alpha) = level on (0, upper), in decreasing alpha.
std::vector<double> threshold_level_roots(double level, double upper,
                                          double tolerance = 1e-14);

enum class Verdict { stable, unstable };

const char* to_string(Verdict v) noexcept;

struct StabilityInterval {
  double lo;
  double hi;
  Verdict verdict;
};

/// One finite-difference probe made while validating a report.
struct OracleProbe {
  double omega;
  double h_omega;
  double d_second;
  int closed_sign;
};

struct StabilityReport {
  ModelParams params;
  double tau;
  double tau_star;
  double critical_tau;
  FrequencyWindow omega_window;
  std::vector<double> roots_alpha;  // decreasing
  std::vector<double> roots_omega;  // increasing
  std::vector<StabilityInterval> intervals;
  std::vector<OracleProbe> oracle_probes;
  bool degenerate = false;  // tau within tolerance of critical_tau
};

struct ClassifyOptions {
  double root_tolerance = 1e-12;
  double sign_tolerance = 1e-10;
  double degenerate_tolerance = 1e-10;
  bool verify_with_oracle = true;
  GridSpec oracle_grid{};
  unsigned threads = 1;
};

/// Partitions (omega_star, m) into stable and unstable intervals. Every
/// interval is checked against d_second_numeric at its midpoint when
/// verify_with_oracle is set; a sign mismatch throws OracleDisagreement.
StabilityReport classify(const ModelParams& p, const ClassifyOptions& options = {});

}  // namespace kgstab
