#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "kgstab/errors.hpp"
#include "kgstab/numerics.hpp"
#include "kgstab/soliton.hpp"
#include "kgstab/stability.hpp"
#include "oracles.hpp"

using namespace kgstab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ModelParams unit(1, 1, 1);

}  // namespace

TEST_CASE("closed-form profile values", "[soliton]") {
  CHECK_THAT(closed_form_profile(unit, 0.9, 0.0), WithinRel(0.10629960629940942, 1e-12));
  CHECK_THAT(closed_form_profile(unit, 0.9, 0.0), WithinRel(r_star(unit, 0.9), 1e-14));
  CHECK_THAT(closed_form_profile(unit, 0.9, 1.0), WithinRel(0.10196438297013025, 1e-12));
  CHECK_THAT(closed_form_profile(unit, 0.9, 1.0),
             WithinRel(oracle::profile({1, 1, 1}, 0.9, 1.0), 1e-14));
  CHECK(closed_form_profile(unit, 0.9, -1.0) == closed_form_profile(unit, 0.9, 1.0));
  CHECK_THROWS_AS(closed_form_profile(unit, 1.0, 0.0), DomainError);
}

TEST_CASE("closed-form profile decays at rate sqrt(m^2 - omega^2)", "[soliton]") {
  const double k = std::sqrt(0.19);
  const double r1 = closed_form_profile(unit, 0.9, 200.0);
  const double r2 = closed_form_profile(unit, 0.9, 201.0);
  CHECK(r1 > 0);
  CHECK_THAT(std::log(r1 / r2), WithinRel(k, 1e-12));
  CHECK(closed_form_profile(unit, 0.9, 5000.0) >= 0.0);
}

TEST_CASE("closed-form derivative matches finite differences", "[soliton]") {
  for (double x : {0.0, 0.3, 1.0, 4.0, 12.0}) {
    const double h = 1e-5;
    const double fd =
        (closed_form_profile(unit, 0.8, x + h) - closed_form_profile(unit, 0.8, x - h)) / (2 * h);
    CHECK_THAT(closed_form_derivative(unit, 0.8, x), WithinAbs(fd, 1e-9));
  }
}

TEST_CASE("built profile", "[soliton]") {
  const auto pr = build_profile(unit, 0.9);
  CHECK_THAT(pr.half_length(), WithinRel(40 / std::sqrt(0.19), 0.01));
  CHECK_THAT(pr[0], WithinRel(r_star(unit, 0.9), 1e-10));
  CHECK(pr[pr.size() - 1] < 1e-12 * pr[0]);
  for (std::size_t i = 1; i < pr.size(); ++i) REQUIRE(pr[i] < pr[i - 1]);
  CHECK(pr.max_residual() < pr.residual_bound());
  CHECK(pr.max_residual() < 1e-6 * pr[0]);
  CHECK(first_integral_defect(pr) < 1e-6 * pr[0] * pr[0]);

  const auto full = pr.full_line_values();
  REQUIRE(full.size() == 2 * pr.size() - 1);
  CHECK(full[pr.size() - 1] == pr[0]);
  CHECK(full.front() == full.back());
  CHECK_THAT(pr.interpolate(1.0), WithinRel(closed_form_profile(unit, 0.9, 1.0), 1e-5));
}

TEST_CASE("profile grid errors", "[soliton]") {
  CHECK_THROWS_AS(build_profile(unit, 0.9, {0.01, 5.0, 1e-12}), GridError);
  CHECK_THROWS_AS(build_profile(unit, 0.9, {-0.01}), GridError);
  CHECK_THROWS_AS(build_profile(unit, 0.6), DomainError);
}

TEST_CASE("closed form agrees with RK4 integration from the turning point", "[soliton]") {
  const auto [a, b, m, omega] =
      GENERATE(std::tuple{1.0, 1.0, 1.0, 0.9}, std::tuple{1.0, 1.0, 1.0, 0.75},
               std::tuple{1.0, 1.0, 2.0, 1.95}, std::tuple{2.0, 1.0, 2.0, 1.7});
  const ModelParams p(a, b, m);
  const double dx = 0.01;
  const auto ode = oracle::integrate_profile({a, b, m}, omega,
                                             oracle::r_star({a, b, m}, omega), 10.0, dx);
  double worst = 0;
  for (std::size_t i = 0; i < ode.size(); ++i) {
    worst = std::max(worst, std::abs(ode[i] - closed_form_profile(p, omega, dx * i)));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("charge equals closed-form sigma", "[soliton]") {
  const auto pr = build_profile(unit, 0.9);
  const double q = charge(pr);
  CHECK_THAT(q, WithinRel(sigma_closed(unit, 0.9), 1e-6));
  CHECK_THAT(q, WithinRel(oracle::charge({1, 1, 1}, 0.9), 1e-10));
  CHECK_THAT(q, WithinRel(0.9 * l2_norm_squared(pr), 1e-15));
  CHECK(q > 0);
}

TEST_CASE("charge is insensitive to extending the tail", "[soliton]") {
  const auto base = build_profile(unit, 0.9);
  const auto wide = build_profile(unit, 0.9, {0.01, 2 * base.half_length(), 1e-12});
  CHECK_THAT(charge(wide), WithinRel(charge(base), 1e-12));
}

TEST_CASE("charge vanishes at the upper edge", "[soliton]") {
  const double mid = charge(build_profile(unit, 0.85));
  const double edge = charge(build_profile(unit, 1 - 1e-3, {0.05}));
  CHECK(edge > 0);
  CHECK(edge < mid);
}

TEST_CASE("energy and action", "[soliton]") {
  const auto pr = build_profile(unit, 0.9);
  const double e = energy(pr);
  const double d = action(pr);
  CHECK(e > 0);
  CHECK(d > 0);
  CHECK_THAT(d, WithinRel(e - 0.9 * charge(pr), 1e-14));
}

TEST_CASE("frequency derivative of the action is minus the charge", "[soliton]") {
  const double h = 1e-3;
  const double d_up = action(build_profile(unit, 0.9 + h));
  const double d_down = action(build_profile(unit, 0.9 - h));
  CHECK_THAT((d_up - d_down) / (2 * h), WithinRel(-charge(build_profile(unit, 0.9)), 1e-4));
  CHECK_THAT(d_prime_numeric(unit, 0.9, h), WithinRel(-charge(build_profile(unit, 0.9)), 1e-4));
}

TEST_CASE("second frequency derivative", "[soliton]") {
  CHECK(d_second_numeric(unit, 0.9, 1e-3) > 0);
  CHECK_THAT(d_second_numeric(unit, 0.9, 1e-3), WithinRel(-sigma_prime_closed(unit, 0.9), 1e-3));
  CHECK_THROWS_AS(d_second_numeric(unit, 0.9995, 1e-3), DomainError);
  CHECK_THAT(default_omega_step(unit), WithinRel(1e-3 * (1 - std::sqrt(0.5)), 1e-14));
}

TEST_CASE("property: observables converge at fourth order", "[soliton][property]") {
  const double exact_norm = oracle::charge({1, 1, 1}, 0.9) / 0.9;
  auto norm_err = [&](double h) {
    return std::abs(l2_norm_squared(build_profile(unit, 0.9, {h, 96.0, 1e-12})) - exact_norm);
  };
  // The even integrand makes Simpson converge faster than h^4 here; require at least h^4.
  const double coarse = norm_err(0.8);
  CHECK(coarse > 0);
  CHECK(norm_err(0.4) <= coarse / 16 + 1e-15 * exact_norm);

  auto energy_at = [](double h) { return energy(build_profile(unit, 0.9, {h, 96.0, 1e-12})); };
  const double e1 = energy_at(0.2), e2 = energy_at(0.1), e3 = energy_at(0.05);
  const double eratio = (e1 - e2) / (e2 - e3);
  CHECK(eratio > 12.0);
  CHECK(eratio < 20.0);

  const double e_fine = energy_at(0.005), e_finer = energy_at(0.0025);
  CHECK(std::abs(e_fine - e_finer) < 1e-8 * std::abs(e_finer));
}

TEST_CASE("property: full-line quadrature is twice the half line", "[soliton][property]") {
  const auto pr = build_profile(unit, 0.8);
  const auto full = pr.full_line_values();
  std::vector<double> sq(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) sq[i] = full[i] * full[i];
  CHECK_THAT(kgstab::numerics::simpson(sq, pr.step()), WithinRel(l2_norm_squared(pr), 1e-13));
}

TEST_CASE("property: first integral holds across the window", "[soliton][property]") {
  const auto [a, b, m] = GENERATE(std::tuple{1.0, 1.0, 1.0}, std::tuple{1.0, 1.0, 2.0},
                                  std::tuple{2.0, 1.0, 2.0});
  const ModelParams p(a, b, m);
  const auto w = frequency_window(p);
  const double frac = GENERATE(0.05, 0.3, 0.6, 0.95);
  const auto pr = build_profile(p, w.omega_star + frac * w.width());
  CHECK(first_integral_defect(pr) < 1e-6 * pr[0] * pr[0]);
  CHECK(pr.max_residual() < pr.residual_bound());
}
