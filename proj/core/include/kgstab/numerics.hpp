#pragma once

// Small numerical kernels shared by the profile, spectrum and evolution code.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace kgstab::numerics {

/// Composite Simpson rule on uniformly spaced samples. The sample count must
/// be odd (an even number of panels) and at least three.
template <typename T>
T simpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 3 || n % 2 == 0) {
    throw std::invalid_argument("simpson: need an odd number (>= 3) of samples");
  }
  T odd{};
  T even{};
  for (std::size_t i = 1; i + 1 < n; i += 2) odd += f[i];
  for (std::size_t i = 2; i + 1 < n; i += 2) even += f[i];
  return (h / 3.0) * (f[0] + f[n - 1] + 4.0 * odd + 2.0 * even);
}

template <typename T>
T simpson(const std::vector<T>& f, double h) {
  return simpson(std::span<const T>(f), h);
}

/// First derivative on a uniform grid: fourth-order centered stencil in the
/// interior, second-order centered next to the ends and second-order one-sided
/// at the ends.
template <typename T>
std::vector<T> derivative(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw std::invalid_argument("derivative: need at least 5 samples");
  std::vector<T> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  d[1] = (f[2] - f[0]) / (2.0 * h);
  d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  }
  return d;
}

template <typename T>
std::vector<T> derivative(const std::vector<T>& f, double h) {
  return derivative(std::span<const T>(f), h);
}

/// Bisection on a bracketing interval. Throws std::invalid_argument when
/// f(lo) and f(hi) share a sign. Stops when hi - lo <= tol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol);

/// Runs body(i) for i in [0, count) on up to `threads` worker threads.
/// Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace kgstab::numerics
