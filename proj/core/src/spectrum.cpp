#include "kgstab/spectrum.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kgstab/errors.hpp"

namespace kgstab {

const char* to_string(OperatorKind kind) noexcept {
  return kind == OperatorKind::lplus ? "Lplus" : "Lminus";
}

TridiagonalOperator assemble(const ModelParams& p, double omega,
                             const GridSpec& grid, OperatorKind kind) {
  require_in_window(p, omega);
  const double c = (p.m() - omega) * (p.m() + omega);
  const double h = grid.step;
  if (!(h > 0.0) || h > 0.1 / std::sqrt(c)) {
    std::ostringstream os;
    os << "step " << h << " does not resolve the profile (need h <= "
       << 0.1 / std::sqrt(c) << ")";
    throw GridError(os.str());
  }
  const double wanted = grid.half_length.value_or(default_half_length(p, omega));
  if (!(wanted > 0.0)) throw GridError("half-length must be positive");
  const auto panels = static_cast<std::size_t>(std::ceil(wanted / h - 1e-9));
  if (panels < 2) throw GridError("half-length shorter than one step");

  TridiagonalOperator op;
  op.step = h;
  op.half_length = h * static_cast<double>(panels);
  op.kind = kind;
  const std::size_t n = 2 * panels - 1;
  op.diagonal.resize(n);
  op.off_diagonal.assign(n - 1, -1.0 / (h * h));
  for (std::size_t i = 0; i < n; ++i) {
    const double r = closed_form_profile(p, omega, op.x(i));
    const double potential = kind == OperatorKind::lplus
                                 ? -6.0 * p.a() * r + 12.0 * p.b() * r * r
                                 : -3.0 * p.a() * r + 4.0 * p.b() * r * r;
    op.diagonal[i] = 2.0 / (h * h) + c + potential;
  }
  return op;
}

std::vector<double> apply(const TridiagonalOperator& op, std::span<const double> v) {
  const std::size_t n = op.size();
  if (v.size() != n) throw GridError("apply: vector length mismatch");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = op.diagonal[i] * v[i];
    if (i > 0) s += op.off_diagonal[i - 1] * v[i - 1];
    if (i + 1 < n) s += op.off_diagonal[i] * v[i + 1];
    y[i] = s;
  }
  return y;
}

std::size_t sturm_count(const TridiagonalOperator& op, double shift) {
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : op.off_diagonal[i - 1] * op.off_diagonal[i - 1];
    q = op.diagonal[i] - shift - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<Eigenpair> lowest_eigenpairs(const TridiagonalOperator& op,
                                         std::size_t k, double tolerance) {
  const auto n = static_cast<lapack_int>(op.size());
  if (k < 1 || k > op.size()) {
    throw std::invalid_argument("lowest_eigenpairs: k must lie in [1, size]");
  }
  const auto kk = static_cast<lapack_int>(k);
  lapack_int found = 0;
  lapack_int nsplit = 0;
  std::vector<double> w(op.size());
  std::vector<lapack_int> iblock(op.size()), isplit(op.size());
  lapack_int info = LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, 1, kk, tolerance,
                                   op.diagonal.data(), op.off_diagonal.data(),
                                   &found, &nsplit, w.data(), iblock.data(),
                                   isplit.data());
  if (info != 0 || found != kk) {
    std::ostringstream os;
    os << "bisection failed (info=" << info << ", found " << found << " of " << k << ")";
    throw ConvergenceError(os.str());
  }

  std::vector<double> z(op.size() * k);
  std::vector<lapack_int> ifail(k);
  info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, op.diagonal.data(),
                        op.off_diagonal.data(), kk, w.data(), iblock.data(),
                        isplit.data(), z.data(), n, ifail.data());
  if (info != 0) {
    std::ostringstream os;
    os << "inverse iteration did not converge for " << (info > 0 ? info : 0)
       << " eigenvector(s) (info=" << info << ")";
    throw ConvergenceError(os.str());
  }

  std::vector<Eigenpair> pairs(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto first = z.begin() + static_cast<std::ptrdiff_t>(j * op.size());
    std::vector<double> v(first, first + static_cast<std::ptrdiff_t>(op.size()));
    const auto big = std::max_element(v.begin(), v.end(), [](double x, double y) {
      return std::abs(x) < std::abs(y);
    });
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    const double scale = (*big < 0.0 ? -1.0 : 1.0) / norm;
    for (double& e : v) e *= scale;
    pairs[j] = {w[j], std::move(v)};
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Eigenpair& x, const Eigenpair& y) { return x.value < y.value; });
  return pairs;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine_similarity: size mismatch");
  const double uv = std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
  const double uu = std::inner_product(u.begin(), u.end(), u.begin(), 0.0);
  const double vv = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::abs(uv) / std::sqrt(uu * vv);
}

namespace {

// Index of the eigenvalue closest to zero.
std::size_t nearest_zero(const std::vector<Eigenpair>& pairs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (std::abs(pairs[i].value) < std::abs(pairs[best].value)) best = i;
  }
  return best;
}

}  // namespace

SpectrumReport spectral_report(const ModelParams& p, double omega,
                               const GridSpec& grid, std::size_t k,
                               double tolerance) {
  const auto lplus = assemble(p, omega, grid, OperatorKind::lplus);
  const auto lminus = assemble(p, omega, grid, OperatorKind::lminus);
  const auto plus_pairs = lowest_eigenpairs(lplus, k, tolerance);
  const auto minus_pairs = lowest_eigenpairs(lminus, k, tolerance);

  SpectrumReport report;
  report.omega = omega;
  report.half_length = lplus.half_length;
  report.step = lplus.step;
  report.kernel_band = 10.0 * lplus.step * lplus.step;
  report.essential_edge = (p.m() - omega) * (p.m() + omega);
  report.grid.resize(lplus.size());
  std::vector<double> r(lplus.size()), dr(lplus.size());
  for (std::size_t i = 0; i < lplus.size(); ++i) {
    report.grid[i] = lplus.x(i);
    r[i] = closed_form_profile(p, omega, report.grid[i]);
    dr[i] = closed_form_derivative(p, omega, report.grid[i]);
  }
  for (const auto& e : plus_pairs) {
    report.lplus_eigenvalues.push_back(e.value);
    report.lplus_vectors.push_back(e.vector);
  }
  for (const auto& e : minus_pairs) {
    report.lminus_eigenvalues.push_back(e.value);
    report.lminus_vectors.push_back(e.vector);
  }
  report.lplus_kernel_match =
      cosine_similarity(plus_pairs[nearest_zero(plus_pairs)].vector, dr);
  report.lminus_kernel_match =
      cosine_similarity(minus_pairs[nearest_zero(minus_pairs)].vector, r);
  report.negative_count_lplus = sturm_count(lplus, -report.kernel_band);
  report.negative_count_lminus = sturm_count(lminus, -report.kernel_band);
  return report;
}

}  // namespace kgstab
