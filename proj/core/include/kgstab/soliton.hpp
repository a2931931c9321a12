#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kgstab/model.hpp"

namespace kgstab {

/// Uniform grid request. When half_length is empty the default extent
/// L = 40 / sqrt(m^2 - omega^2) is used, widened if the tail tolerance needs
/// it; an explicit half_length that is too short is a GridError.
struct GridSpec {
  double step = 0.01;
  std::optional<double> half_length;
  double tail_tolerance = 1e-12;
};

/// R(x) = (c/a) / (1 + sqrt(1 - alpha^2) cosh(sqrt(c) x)), c = m^2 - omega^2.
double closed_form_profile(const ModelParams& p, double omega, double x);

/// dR/dx of the closed form.
double closed_form_derivative(const ModelParams& p, double omega, double x);

/// Smallest half-length at which R(L)/R(0) < tail_tolerance, but never less
/// than 40 / sqrt(m^2 - omega^2).
double default_half_length(const ModelParams& p, double omega,
                           double tail_tolerance = 1e-12);

/// Radial profile sampled at x = 0, h, ..., L; the even extension is implied.
class SolitonProfile {
 public:
  SolitonProfile(ModelParams params, double omega, double step,
                 std::vector<double> values, double max_residual,
                 double residual_bound);

  const ModelParams& params() const noexcept { return params_; }
  double omega() const noexcept { return omega_; }
  double step() const noexcept { return step_; }
  double half_length() const noexcept {
    return step_ * static_cast<double>(values_.size() - 1);
  }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double x(std::size_t i) const noexcept { return step_ * static_cast<double>(i); }

  /// Largest |R'' - G'(R) - cR| over the grid, R'' by centered differences.
  double max_residual() const noexcept { return max_residual_; }
  double residual_bound() const noexcept { return residual_bound_; }

  /// Samples on [-L, L] (2 * size() - 1 points), using R(-x) = R(x).
  std::vector<double> full_line_values() const;

  /// R at an arbitrary |x| by linear interpolation; 0 beyond L.
  double interpolate(double x) const;

 private:
  ModelParams params_;
  double omega_;
  double step_;
  std::vector<double> values_;
  double max_residual_;
  double residual_bound_;
};

/// Samples the closed form and validates it against the profile ODE
/// R'' = cR + G'(R). Throws DomainError / GridError.
SolitonProfile build_profile(const ModelParams& p, double omega,
                             const GridSpec& grid = {});

/// dR/dx on the half-line grid by finite differences (fourth order inside).
std::vector<double> profile_derivative(const SolitonProfile& profile);

/// max_x |R'^2 - (m^2 - omega^2) R^2 - 2 G(R)| with R' from finite differences.
double first_integral_defect(const SolitonProfile& profile);

/// ||R||_2^2 over the whole line.
double l2_norm_squared(const SolitonProfile& profile);

/// Q(u_omega) = omega ||R||^2.
double charge(const SolitonProfile& profile);

/// E(R, -i omega R).
double energy(const SolitonProfile& profile);

/// d(omega) = E - omega Q.
double action(const SolitonProfile& profile);

/// Default frequency step for the d'' stencil: 1e-3 (m - omega_star).
double default_omega_step(const ModelParams& p);

/// Centered second difference of d(omega) built from quadrature of three
/// profiles. Throws DomainError if the stencil leaves the window.
double d_second_numeric(const ModelParams& p, double omega, double h_omega,
                        const GridSpec& grid = {});

/// Centered first difference of d(omega); should reproduce -charge.
double d_prime_numeric(const ModelParams& p, double omega, double h_omega,
                       const GridSpec& grid = {});

}  // namespace kgstab
