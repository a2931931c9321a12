#pragma once

// Equation parameters for
//   (d_tt - d_xx + m^2) phi - 3a|phi|phi + 4b|phi|^2 phi = 0
// and the closed-form scalar maps between the frequency omega, the
// normalized frequency alpha and the profile height R*(omega).

namespace kgstab {

class ModelParams {
 public:
  /// Throws DomainError unless a, b, m are finite and strictly positive.
  ModelParams(double a, double b, double m);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double m() const noexcept { return m_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double a_;
  double b_;
  double m_;
};

/// Open interval (omega_star, m) of frequencies that carry a standing wave.
struct FrequencyWindow {
  double omega_star;
  double m;

  bool contains(double omega) const noexcept {
    return omega > omega_star && omega < m;
  }
  double width() const noexcept { return m - omega_star; }
};

/// tau = 2 m^2 b / a^2.
double tau(const ModelParams& p);

/// sqrt(m^2 - a^2/(2b)) when tau > 1, otherwise 0.
double omega_star(const ModelParams& p);

FrequencyWindow frequency_window(const ModelParams& p);

/// Throws DomainError when omega is not strictly inside the window.
void require_in_window(const ModelParams& p, double omega);

/// alpha(omega) = sqrt(2b(m^2 - omega^2)) / a, in (0, min(1, sqrt(tau))).
double alpha_of_omega(const ModelParams& p, double omega);

/// Inverse of alpha_of_omega: (a / sqrt(2b)) * sqrt(tau - alpha^2).
double omega_of_alpha(const ModelParams& p, double alpha);

/// d alpha / d omega = -2 b omega / (a^2 alpha); always negative.
double alpha_prime(const ModelParams& p, double omega);

/// Smallest positive root of 2as - 2bs^2 = m^2 - omega^2, i.e. R_omega(0).
double r_star(const ModelParams& p, double omega);

/// V(s) = -2G(s)/s^2 = 2as - 2bs^2.
double potential_v(const ModelParams& p, double s);

struct NonlinearityValues {
  double g;    // G(s)   = -a s^3 + b s^4
  double dg;   // G'(s)  = -3a s^2 + 4b s^3
  double d2g;  // G''(s) = -6a s + 12b s^2
};

NonlinearityValues g_derivatives(const ModelParams& p, double s);

}  // namespace kgstab
