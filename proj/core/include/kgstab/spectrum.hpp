#pragma once

// Finite-difference discretization of the linearized operators
//   L+ f = -f'' + G''(R) f + (m^2 - omega^2) f
//   L- f = -f'' + R^{-1} G'(R) f + (m^2 - omega^2) f
// on [-L, L] with Dirichlet ends, and a symmetric tridiagonal eigensolver.

#include <cstddef>
#include <span>
#include <vector>

#include "kgstab/model.hpp"
#include "kgstab/soliton.hpp"

namespace kgstab {

enum class OperatorKind { lplus, lminus };

const char* to_string(OperatorKind kind) noexcept;

struct TridiagonalOperator {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;  // diagonal.size() - 1 entries
  double step = 0.0;
  double half_length = 0.0;
  OperatorKind kind = OperatorKind::lplus;

  std::size_t size() const noexcept { return diagonal.size(); }
  /// Abscissa of unknown i; the unknowns exclude the two Dirichlet ends.
  double x(std::size_t i) const noexcept {
    return -half_length + step * static_cast<double>(i + 1);
  }
};

/// Throws DomainError outside the window, GridError when h > 0.1/sqrt(c).
TridiagonalOperator assemble(const ModelParams& p, double omega,
                             const GridSpec& grid, OperatorKind kind);

/// y = T v.
std::vector<double> apply(const TridiagonalOperator& op, std::span<const double> v);

/// Number of eigenvalues strictly below `shift` (Sturm sequence count).
std::size_t sturm_count(const TridiagonalOperator& op, double shift);

struct Eigenpair {
  double value;
  std::vector<double> vector;  // unit 2-norm, largest-magnitude entry positive
};

/// The k algebraically smallest eigenpairs, nondecreasing. Bisection to
/// `tolerance` absolute, eigenvectors by inverse iteration. Throws
/// ConvergenceError if inverse iteration fails for any requested vector.
std::vector<Eigenpair> lowest_eigenpairs(const TridiagonalOperator& op,
                                         std::size_t k,
                                         double tolerance = 1e-10);

/// |<u, v>| / (|u| |v|).
double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct SpectrumReport {
  double omega = 0.0;
  double half_length = 0.0;
  double step = 0.0;
  double kernel_band = 0.0;     // 10 h^2
  double essential_edge = 0.0;  // m^2 - omega^2
  std::vector<double> lplus_eigenvalues;
  std::vector<double> lminus_eigenvalues;
  std::vector<std::vector<double>> lplus_vectors;
  std::vector<std::vector<double>> lminus_vectors;
  std::vector<double> grid;  // abscissae of the eigenvector entries
  double lplus_kernel_match = 0.0;   // against R'
  double lminus_kernel_match = 0.0;  // against R
  std::size_t negative_count_lplus = 0;
  std::size_t negative_count_lminus = 0;
};

/// Lowest `k` eigenpairs of both operators. Eigenvalues in (-10h^2, 10h^2) are
/// treated as the kernel; negative counts are Sturm counts at -10h^2.
SpectrumReport spectral_report(const ModelParams& p, double omega,
                               const GridSpec& grid, std::size_t k = 4,
                               double tolerance = 1e-10);

}  // namespace kgstab
