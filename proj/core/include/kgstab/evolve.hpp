#pragma once

// Leapfrog integration of
//   phi_tt = phi_xx - m^2 phi + 3a|phi|phi - 4b|phi|^2 phi
// on [-L, L] with Dirichlet ends, started from (perturbed) standing-wave data,
// with energy, charge and orbital-distance diagnostics.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgstab/model.hpp"
#include "kgstab/soliton.hpp"

namespace kgstab {

using Field = std::vector<std::complex<double>>;

struct Perturbation {
  enum class Kind { none, scale, bump };

  Kind kind = Kind::none;
  double epsilon = 0.0;

  /// "none", "scale:<eps>" ((1+eps) R) or "bump:<eps>" (R + eps exp(-x^2)).
  /// Throws std::invalid_argument on anything else.
  static Perturbation parse(std::string_view text);
  std::string to_string() const;
  double apply(double r, double x) const noexcept;
};

struct FieldState {
  double time = 0.0;
  Field phi;
  Field phi_prev;
  double step_x = 0.0;
  double step_t = 0.0;
  double half_length = 0.0;
  double blowup_limit = 0.0;  // step() throws BlowUpError above this sup|phi|
  // d_t phi at `time` when it is known exactly (initial data only).
  std::optional<Field> velocity;

  std::size_t size() const noexcept { return phi.size(); }
  double x(std::size_t i) const noexcept {
    return -half_length + step_x * static_cast<double>(i);
  }
};

/// phi(0) = perturbed R, d_t phi(0) = -i omega (perturbed R), previous level
/// from a Taylor expansion through third order. The state grid is the even
/// extension of the profile grid. Throws GridError when dt > 0.9 dx.
FieldState init_state(const SolitonProfile& profile,
                      const Perturbation& perturbation, double step_t);

/// One leapfrog step. Throws BlowUpError if sup|phi| exceeds blowup_limit.
FieldState step(const FieldState& state, const ModelParams& p);
void advance(FieldState& state, const ModelParams& p);

/// Centered time derivative (phi^{n+1} - phi^{n-1}) / (2 dt), or the exact
/// initial velocity when the state carries one.
Field velocity(const FieldState& state, const ModelParams& p);

double field_energy(const Field& phi, const Field& psi, double dx,
                    const ModelParams& p);
double field_charge(const Field& phi, const Field& psi, double dx);

/// ||(R, -i omega R)|| in the m^2 L2 + H1-seminorm + L2 energy norm.
double orbit_norm(const SolitonProfile& profile);

/// min over theta of ||(phi, psi) - e^{-i theta}(R, -i omega R)||, on the
/// state grid. The profile is resampled linearly when the state grid is
/// finer; a coarser state grid is a GridError.
double orbital_distance(const Field& phi, const Field& psi, double step_x,
                        double half_length, const SolitonProfile& profile);
double orbital_distance(const FieldState& state, const SolitonProfile& profile,
                        const ModelParams& p);

struct RunOptions {
  double step_x = 0.02;
  double step_t = 0.01;
  std::optional<double> half_length;  // default: profile extent + 20
  double tail_threshold = 1e-8;       // sensor at |x| = L - 5
};

struct Diagnostics {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> charge;
  std::vector<double> orbital_distance;
  std::vector<double> sup_amplitude;

  double orbit_norm = 0.0;
  double half_length = 0.0;
  double step_x = 0.0;
  double step_t = 0.0;
  bool truncated = false;
  std::optional<double> blowup_time;
  std::optional<double> tail_contact_time;
};

struct RunSummary {
  double max_rel_energy_drift = 0.0;
  double max_rel_charge_drift = 0.0;
  double initial_distance = 0.0;
  double max_distance = 0.0;
  double orbit_norm = 0.0;
  std::optional<double> crossing_10x;   // first sample with distance > 10x initial
  std::optional<double> crossing_100x;
};

/// Evolves to t_final, sampling every `sample_every` steps (and at the end).
/// A blow-up is recorded as a truncated run rather than thrown.
Diagnostics run(const ModelParams& p, double omega,
                const Perturbation& perturbation, double t_final,
                std::size_t sample_every, const RunOptions& options = {});

RunSummary summarize(const Diagnostics& diagnostics);

}  // namespace kgstab
