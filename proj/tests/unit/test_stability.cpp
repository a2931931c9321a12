#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kgstab/errors.hpp"
#include "kgstab/soliton.hpp"
#include "kgstab/stability.hpp"
#include "oracles.hpp"

using namespace kgstab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ModelParams unit(1, 1, 1);
const ModelParams tau_1_1(1, 1, std::sqrt(0.55));
const ModelParams tau_0_98(1, 1, 0.7);

double threshold_by_log(double alpha) {
  return (1 - alpha * alpha) / (2 * alpha) * std::log((1 + alpha) / (1 - alpha)) +
         2 * alpha * alpha - 1;
}

void check_tiling(const StabilityReport& r) {
  REQUIRE_FALSE(r.intervals.empty());
  CHECK(r.intervals.front().lo == r.omega_window.omega_star);
  CHECK(r.intervals.back().hi == r.omega_window.m);
  for (std::size_t i = 0; i + 1 < r.intervals.size(); ++i) {
    CHECK(r.intervals[i].hi == r.intervals[i + 1].lo);
    CHECK(r.intervals[i].lo < r.intervals[i].hi);
    if (!r.degenerate) CHECK(r.intervals[i].verdict != r.intervals[i + 1].verdict);
  }
  for (std::size_t i = 1; i < r.roots_omega.size(); ++i) {
    CHECK(r.roots_omega[i] > r.roots_omega[i - 1]);
    CHECK(r.roots_alpha[i] < r.roots_alpha[i - 1]);
  }
}

}  // namespace

TEST_CASE("k1", "[stability]") {
  const double alpha = alpha_of_omega(unit, 0.9);
  const double expected = std::sqrt(2 - alpha * alpha) * (2 * std::atanh(alpha) - 2 * alpha);
  CHECK_THAT(k1(2, alpha), WithinRel(expected, 1e-13));
  CHECK_THAT(k1(2, alpha), WithinRel(0.26169515698, 1e-10));
  CHECK(k1(2, 1e-6) < 1e-17);
  CHECK(k1(2, 1e-6) > 0);
  CHECK_THROWS_AS(k1(2, 0.0), DomainError);
  CHECK_THROWS_AS(k1(2, 1.0), DomainError);
  CHECK_THROWS_AS(k1(0.5, 0.8), DomainError);
}

TEST_CASE("sigma closed form", "[stability]") {
  CHECK_THAT(sigma_closed(unit, 0.9), WithinRel(oracle::charge({1, 1, 1}, 0.9), 1e-12));
  CHECK_THAT(sigma_closed(unit, 0.9), WithinRel(0.0654237892, 1e-9));
  CHECK(sigma_closed(unit, 1 - 1e-9) < 1e-12);
  CHECK(sigma_closed(unit, 1 - 1e-9) > 0);
  CHECK_THROWS_AS(sigma_closed(unit, 0.7), DomainError);
}

TEST_CASE("k2", "[stability]") {
  CHECK_THAT(k2(0.5), WithinRel(0.75 * std::log(3.0) + 0.25, 1e-15));
  CHECK_THAT(k2(0.5), WithinRel(oracle::k2_series(0.5), 1e-15));
  CHECK_THAT(k2(0.815), WithinRel(1.13461589, 1e-8));
  CHECK_THAT(k2(1e-7), WithinAbs(1.0, 1e-12));
  CHECK_THAT(k2(1 - 1e-12), WithinAbs(1.0, 1e-9));
  CHECK_THROWS_AS(k2(0.0), DomainError);
  CHECK_THROWS_AS(k2(1.0), DomainError);
}

TEST_CASE("k2 series branch matches the log form", "[stability]") {
  for (double alpha : {0.01, 0.05, 0.0999, 0.1001, 0.2}) {
    CHECK_THAT(k2(alpha), WithinRel(oracle::k2_series(alpha), 1e-14));
  }
}

TEST_CASE("k2 derivative", "[stability]") {
  CHECK(k2_prime(0.3) > 0);
  CHECK(k2_prime(0.95) < 0);
  for (double alpha : {0.05, 0.3, 0.6, 0.8, 0.95, 0.99}) {
    const double h = 1e-6;
    CHECK_THAT(k2_prime(alpha), WithinAbs((k2(alpha + h) - k2(alpha - h)) / (2 * h), 1e-7));
  }
}

TEST_CASE("log ratio", "[stability]") {
  CHECK_THAT(log_ratio(0.5), WithinRel(std::log(3.0), 1e-15));
  CHECK_THAT(log_ratio(1e-6), WithinRel(2 * std::atanh(1e-6), 1e-15));
  CHECK_THAT(log_ratio(5e-5), WithinRel(2 * std::atanh(5e-5), 1e-15));
}

TEST_CASE("tau_star", "[stability]") {
  const auto ts = tau_star();
  CHECK(ts.value > 1.13);
  CHECK(ts.value < 1.14);
  CHECK(ts.value > 1.0);
  const auto [oracle_value, oracle_arg] = oracle::k2_maximum();
  CHECK_THAT(ts.value, WithinRel(oracle_value, 1e-12));
  CHECK_THAT(ts.argmax, WithinAbs(oracle_arg, 1e-6));
  CHECK_THAT(ts.value, WithinRel(1.134618332903044, 1e-13));
  CHECK_THAT(ts.argmax, WithinAbs(0.8136610633884286, 1e-10));
  CHECK_THAT(tau_star(1e-10).value, WithinAbs(ts.value, 1e-10));
  CHECK(std::abs(k2_prime(ts.argmax)) < 1e-12);
}

TEST_CASE("convexity threshold", "[stability]") {
  for (double alpha : {0.2, 0.6, 0.95, 0.999}) {
    CHECK_THAT(convexity_threshold(alpha), WithinRel(threshold_by_log(alpha), 1e-13));
    CHECK_THAT(convexity_threshold(alpha), WithinRel(k2(alpha) + alpha * alpha - 1, 1e-12));
    const double h = 1e-6;
    const double fd =
        (convexity_threshold(alpha + h) - convexity_threshold(alpha - h)) / (2 * h);
    CHECK_THAT(convexity_threshold_prime(alpha), WithinAbs(fd, 1e-6));
  }
  CHECK_THAT(convexity_threshold(1e-8), WithinAbs(0.0, 1e-12));
  CHECK_THAT(convexity_threshold(1 - 1e-12), WithinAbs(1.0, 1e-9));

  const auto ct = critical_tau();
  CHECK_THAT(ct.value, WithinRel(1.014288041547558, 1e-12));
  CHECK_THAT(ct.argmax, WithinAbs(0.9849156060406511, 1e-8));
  CHECK(ct.value < tau_star().value);
}

TEST_CASE("sigma derivative closed form", "[stability]") {
  for (const auto& [p, omega] : {std::pair{unit, 0.9}, std::pair{unit, 0.72},
                                 std::pair{tau_1_1, 0.45}, std::pair{tau_0_98, 0.1},
                                 std::pair{tau_0_98, 0.5}}) {
    const double h = 1e-6;
    const double fd = (sigma_closed(p, omega + h) - sigma_closed(p, omega - h)) / (2 * h);
    CHECK_THAT(sigma_prime_closed(p, omega), WithinRel(fd, 1e-7));
  }
}

TEST_CASE("d'' sign", "[stability]") {
  CHECK(d_second_sign(unit, 0.9) == 1);
  CHECK(d_second_numeric(unit, 0.9, 1e-3) > 0);

  // tau = 1.1 lies above the corrected threshold everywhere; the quadrature
  // oracle confirms convexity at the point the k2 factorization flags.
  CHECK(k2(alpha_of_omega(tau_1_1, 0.45)) > 1.1);
  CHECK(d_second_sign(tau_1_1, 0.45) == 1);
  CHECK(d_second_numeric(tau_1_1, 0.45, default_omega_step(tau_1_1)) > 0);

  CHECK(d_second_sign(tau_0_98, 0.1) == -1);
  CHECK(d_second_numeric(tau_0_98, 0.1, 1e-3) < 0);
  CHECK(d_second_sign(tau_0_98, 0.5) == 1);
  CHECK(d_second_numeric(tau_0_98, 0.5, 1e-3) > 0);
}

TEST_CASE("d'' sign above the critical tau", "[stability]") {
  const double m = GENERATE(0.72, 0.75, 1.0, 2.0);
  const ModelParams p(1, 1, m);
  const auto w = frequency_window(p);
  for (int i = 1; i < 200; ++i) {
    CHECK(d_second_sign(p, w.omega_star + w.width() * i / 200.0) == 1);
  }
}

TEST_CASE("level roots", "[stability]") {
  const auto roots = k2_level_roots(1.1);
  REQUIRE(roots.size() == 2);
  CHECK_THAT(roots[0], WithinAbs(0.93843166832948, 1e-12));
  CHECK_THAT(roots[1], WithinAbs(0.602595237256625, 1e-12));
  CHECK_THAT(omega_of_alpha(tau_1_1, roots[0]), WithinAbs(0.3311691440, 1e-9));
  CHECK_THAT(omega_of_alpha(tau_1_1, roots[1]), WithinAbs(0.6069921664, 1e-9));
  CHECK(k2_level_roots(1.2).empty());
  CHECK(k2_level_roots(0.9).empty());

  const auto single = threshold_level_roots(0.98, std::sqrt(0.98));
  REQUIRE(single.size() == 1);
  CHECK_THAT(single[0], WithinAbs(0.937857591091645, 1e-12));
  CHECK(threshold_level_roots(1.1, 1.0).empty());
  CHECK(threshold_level_roots(1.005, 1.0).size() == 2);
}

TEST_CASE("classify: tau above the critical value", "[stability]") {
  const auto r = classify(ModelParams(1, 1, 2));
  check_tiling(r);
  REQUIRE(r.intervals.size() == 1);
  CHECK(r.intervals[0].verdict == Verdict::stable);
  CHECK_THAT(r.intervals[0].lo, WithinRel(std::sqrt(3.5), 1e-15));
  CHECK(r.intervals[0].hi == 2.0);
  CHECK(r.tau == 8.0);
  CHECK_THAT(r.tau_star, WithinRel(1.134618332903044, 1e-13));
}

TEST_CASE("classify: tau = 1.1", "[stability]") {
  const auto r = classify(tau_1_1);
  check_tiling(r);
  REQUIRE(r.intervals.size() == 1);
  CHECK(r.intervals[0].verdict == Verdict::stable);
  REQUIRE(r.oracle_probes.size() == 1);
  CHECK(r.oracle_probes[0].d_second > 0);
}

TEST_CASE("classify: tau below one", "[stability]") {
  const auto r = classify(tau_0_98);
  check_tiling(r);
  CHECK(r.omega_window.omega_star == 0.0);
  REQUIRE(r.intervals.size() == 2);
  CHECK(r.intervals[0].verdict == Verdict::unstable);
  CHECK(r.intervals[1].verdict == Verdict::stable);
  CHECK_THAT(r.roots_omega[0], WithinAbs(0.2240793819517726, 1e-10));
  CHECK_THAT(r.roots_alpha[0], WithinAbs(0.937857591091645, 1e-12));
}

TEST_CASE("classify: two crossings between one and the critical value", "[stability]") {
  const ModelParams p(1, 1, std::sqrt(1.005 / 2));
  const auto r = classify(p);
  check_tiling(r);
  REQUIRE(r.intervals.size() == 3);
  CHECK(r.intervals[0].verdict == Verdict::stable);
  CHECK(r.intervals[1].verdict == Verdict::unstable);
  CHECK(r.intervals[2].verdict == Verdict::stable);
  for (double alpha : r.roots_alpha) {
    CHECK_THAT(convexity_threshold(alpha), WithinAbs(1.005, 1e-12));
  }
}

TEST_CASE("classify: degenerate touching root", "[stability]") {
  const double t = critical_tau().value;
  const ModelParams p(1, 1, std::sqrt(t / 2));
  const auto r = classify(p, {.verify_with_oracle = false});
  CHECK(r.degenerate);
  REQUIRE(r.roots_alpha.size() == 1);
  CHECK_THAT(r.roots_alpha[0], WithinAbs(critical_tau().argmax, 1e-12));
  for (const auto& iv : r.intervals) CHECK(iv.verdict == Verdict::stable);
}

TEST_CASE("classify: thread count does not change the report", "[stability]") {
  const ModelParams p(1, 1, std::sqrt(1.005 / 2));
  const auto serial = classify(p);
  ClassifyOptions opts;
  opts.threads = 4;
  const auto parallel = classify(p, opts);
  REQUIRE(serial.intervals.size() == parallel.intervals.size());
  for (std::size_t i = 0; i < serial.intervals.size(); ++i) {
    CHECK(serial.intervals[i].lo == parallel.intervals[i].lo);
    CHECK(serial.intervals[i].verdict == parallel.intervals[i].verdict);
    CHECK(serial.oracle_probes[i].d_second == parallel.oracle_probes[i].d_second);
  }
}

TEST_CASE("property: k2 exceeds one and is unimodal", "[stability][property]") {
  int sign_changes = 0;
  double prev = k2_prime(0.01);
  for (int i = 0; i <= 10000; ++i) {
    const double alpha = 0.01 + 0.98 * i / 10000.0;
    REQUIRE(k2(alpha) > 1.0);
    const double d = k2_prime(alpha);
    if ((d > 0) != (prev > 0)) ++sign_changes;
    prev = d;
  }
  CHECK(sign_changes == 1);
}

TEST_CASE("property: convexity threshold is unimodal", "[stability][property]") {
  int sign_changes = 0;
  double prev = convexity_threshold_prime(1e-3);
  for (int i = 0; i <= 10000; ++i) {
    const double alpha = 1e-3 + (0.9999 - 1e-3) * i / 10000.0;
    const double d = convexity_threshold_prime(alpha);
    if ((d > 0) != (prev > 0)) ++sign_changes;
    prev = d;
  }
  CHECK(sign_changes == 1);
}

TEST_CASE("property: roots are stable under tolerance refinement", "[stability][property]") {
  const ModelParams p(1, 1, std::sqrt(1.005 / 2));
  ClassifyOptions coarse{.root_tolerance = 1e-9, .verify_with_oracle = false};
  ClassifyOptions fine{.root_tolerance = 1e-13, .verify_with_oracle = false};
  const auto a = classify(p, coarse);
  const auto b = classify(p, fine);
  REQUIRE(a.roots_alpha.size() == b.roots_alpha.size());
  for (std::size_t i = 0; i < a.roots_alpha.size(); ++i) {
    CHECK(std::abs(a.roots_alpha[i] - b.roots_alpha[i]) < 1e-9);
  }
}

TEST_CASE("property: verdicts are invariant under (a, b) -> (l a, l^2 b)", "[stability][property]") {
  const double lambda = GENERATE(0.5, 3.0);
  const double m = GENERATE(0.7, std::sqrt(1.005 / 2), 1.0);
  const auto base = classify(ModelParams(1, 1, m), {.verify_with_oracle = false});
  const auto scaled =
      classify(ModelParams(lambda, lambda * lambda, m), {.verify_with_oracle = false});
  CHECK(base.tau == scaled.tau);
  REQUIRE(base.intervals.size() == scaled.intervals.size());
  for (std::size_t i = 0; i < base.intervals.size(); ++i) {
    CHECK(base.intervals[i].verdict == scaled.intervals[i].verdict);
    CHECK_THAT(scaled.intervals[i].hi / m, WithinRel(base.intervals[i].hi / m, 1e-12));
  }
  const double omega = 0.8 * m;
  CHECK_THAT(alpha_of_omega(ModelParams(lambda, lambda * lambda, m), omega),
             WithinRel(alpha_of_omega(ModelParams(1, 1, m), omega), 1e-14));
}

TEST_CASE("property: closed sign agrees with the quadrature oracle", "[stability][property]") {
  const double m = GENERATE(0.7, std::sqrt(1.005 / 2), 1.0);
  const ModelParams p(1, 1, m);
  const auto report = classify(p, {.verify_with_oracle = false});
  const auto w = report.omega_window;
  const double frac = GENERATE(take(12, random(0.02, 0.98)));
  const double omega = w.omega_star + frac * w.width();
  bool near_root = false;
  for (double r : report.roots_omega) near_root |= std::abs(omega - r) < 1e-2 * w.width();
  if (near_root) return;
  const double h = std::min(default_omega_step(p), 0.25 * (std::min(omega - w.omega_star, m - omega)));
  const double d2 = d_second_numeric(p, omega, h);
  CHECK((d2 > 0 ? 1 : -1) == d_second_sign(p, omega));
}
