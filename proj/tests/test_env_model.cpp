#include <cmath>
#include <numeric>

#include <doctest.h>

#include "qradar/constants.hpp"
#include "qradar/env_model.hpp"
#include "qradar/errors.hpp"
#include "qradar/numerics.hpp"
#include "scenarios.hpp"

using namespace qradar;
using doctest::Approx;

namespace {

constexpr double kHbar = 1.054571817e-34;
constexpr double kKb = 1.380649e-23;
constexpr double kC = 299792458.0;

// hand-evaluated radar equation: lambda = c / f, G_T = A / lambda^2
double kappa_by_hand(double area, double sigma, double f, double range) {
  const double lambda = kC / f;
  const double gain = area / (lambda * lambda);
  return gain / (4.0 * kPi * range * range) * sigma * area / (4.0 * kPi * range * range);
}

}  // namespace

TEST_CASE("constants are CODATA 2018") {
  CHECK(PhysicalConstants::reduced_planck == kHbar);
  CHECK(PhysicalConstants::boltzmann == kKb);
  CHECK(PhysicalConstants::light_speed == kC);
}

TEST_CASE("planck occupation") {
  const double w = kTwoPi * 100e9;
  CHECK(env::planck_occupation(w, 150.0) == Approx(30.75).epsilon(0.05 / 30.75));
  CHECK(env::planck_occupation(w, 0.0) == 0.0);

  // x = ln 2 gives exactly one photon
  const double t = 1.0;
  const double w_ln2 = std::log(2.0) * kKb * t / kHbar;
  CHECK(env::planck_occupation(w_ln2, t) == Approx(1.0).epsilon(1e-14));

  // Rayleigh-Jeans tail: k_B T / hbar w - 1/2
  const double hot = 1e4;
  const double x = kHbar * w / (kKb * hot);
  CHECK(env::planck_occupation(w, hot) == Approx(1.0 / x - 0.5).epsilon(1e-6));

  double last = 0.0;
  for (double temp : {1.0, 3.0, 30.0, 300.0, 3000.0}) {
    const double n = env::planck_occupation(w, temp);
    CHECK(n > last);
    last = n;
  }
  CHECK_THROWS_AS(env::planck_occupation(w, -1.0), DomainError);
}

TEST_CASE("link budget") {
  LinkBudget lb{20.0, 0.1, 500.0, kTwoPi * 100e9};
  const double k500 = env::link_budget_kappa(lb);
  CHECK(k500 == Approx(4.50e-7).epsilon(0.01));
  CHECK(k500 == Approx(kappa_by_hand(20.0, 0.1, 100e9, 500.0)).epsilon(1e-12));

  lb.range = 100.0;
  const double k100 = env::link_budget_kappa(lb);
  CHECK(k100 / k500 == Approx(625.0).epsilon(1e-12));
  CHECK(k100 == Approx(2.81e-4).epsilon(0.01));

  lb.target_cross_section = 0.0;
  CHECK(env::link_budget_kappa(lb) == 0.0);

  lb = LinkBudget{20.0, 100.0, 10.0, kTwoPi * 100e9};
  CHECK_THROWS_AS(env::link_budget_kappa(lb), DomainError);
}

TEST_CASE("per-mode brightness spectrum") {
  auto s = testing::fig3();
  const double peak = std::sqrt(kTwoPi) * s.per_mode_brightness;
  CHECK(env::per_mode_brightness(0.0, s) == Approx(peak).epsilon(1e-15));
  CHECK(env::per_mode_brightness(s.bandwidth * std::sqrt(2.0 * std::log(2.0)), s) ==
        Approx(0.5 * peak).epsilon(1e-12));
  CHECK(env::per_mode_brightness(3.0 * s.bandwidth, s) == env::per_mode_brightness(-3.0 * s.bandwidth, s));

  // T_d / 2 pi * integral S dOmega = N_S Delta omega T_d
  const double span = 10.0 * s.bandwidth;
  const auto r = numerics::integrate_adaptive([&](double w) { return env::per_mode_brightness(w, s); }, -span,
                                              span, {1e-12, 0.0, 1000});
  CHECK(s.pulse_duration / kTwoPi * r.value ==
        Approx(s.per_mode_brightness * s.bandwidth * s.pulse_duration).epsilon(1e-10));

  const double sn = env::per_mode_brightness(0.0, s);
  CHECK(env::phase_sensitive_brightness(0.0, s) == Approx(std::sqrt(sn * (sn + 1.0))).epsilon(1e-15));
}

TEST_CASE("grid bins carry the whole spectrum") {
  auto s = testing::narrowband();
  s.pulse_duration = 1e-4;
  const auto grid = env::build_grid(s.pulse_duration, s.bandwidth, 8.0);
  REQUIRE_FALSE(grid.continuous_limit);
  double sum = 0.0;
  for (double w : grid.offsets) sum += env::per_mode_brightness(w, s);
  CHECK(sum == Approx(s.per_mode_brightness * s.bandwidth * s.pulse_duration).epsilon(1e-10));
}

TEST_CASE("snr") {
  RadarScenario s = testing::fig3();
  s.transmissivity = 1.0 - 1e-16;
  s.per_mode_brightness = 1.0;
  s.noise_occupation = 1.0;
  s.bandwidth = 1.0;
  s.pulse_duration = 1.0;
  CHECK(env::snr(s) == Approx(1.0).epsilon(1e-12));
  CHECK(env::snr_db(s) == Approx(0.0).epsilon(1e-12));

  s = testing::fig4();
  const double base = env::snr(s);
  s.per_mode_brightness *= 2.0;
  CHECK(env::snr(s) == Approx(2.0 * base).epsilon(1e-15));

  const double target = 3.076;
  s.per_mode_brightness = env::brightness_for_snr(s, target);
  CHECK(env::snr(s) == Approx(target).epsilon(1e-14));
  CHECK(env::from_db(env::to_db(7.5)) == Approx(7.5).epsilon(1e-15));
  CHECK(env::to_db(10.0) == Approx(10.0));
}

TEST_CASE("spectral grid") {
  const auto g = env::build_grid(1e-6, kTwoPi * 1e6, 4.0);
  CHECK_FALSE(g.continuous_limit);
  REQUIRE(g.offsets.size() == 9);
  CHECK(g.mode_count == 9);
  CHECK(g.bin_width == Approx(kTwoPi * 1e6));
  CHECK(std::accumulate(g.offsets.begin(), g.offsets.end(), 0.0) == 0.0);
  for (std::size_t j = 0; j < g.offsets.size(); ++j) {
    CHECK(g.offsets[j] == -g.offsets[g.offsets.size() - 1 - j]);
    CHECK(std::abs(g.offsets[j]) <= g.half_span * (1.0 + 1e-12));
  }

  // fig4 regime: T_d Delta omega / 2 pi = 5e8
  const auto big = env::build_grid(0.1, kTwoPi * 5e9);
  CHECK(big.continuous_limit);
  CHECK(big.offsets.empty());
  CHECK(big.mode_count > kDefaultBinCap);

  CHECK_THROWS_AS(env::build_grid(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(env::build_grid(1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("classical pulse spectrum") {
  auto s = testing::fig3();
  const double peak = std::pow(s.bandwidth * s.bandwidth / kTwoPi, -0.25);
  CHECK(env::classical_pulse_spectrum(0.0, s) == Approx(peak).epsilon(1e-15));
  // unit energy over dOmega / 2 pi, second moment Delta omega^2
  const double span = 12.0 * s.bandwidth;
  numerics::AdaptiveOptions o{1e-12, 0.0, 1000};
  const auto norm = numerics::integrate_adaptive(
      [&](double w) { return std::pow(env::classical_pulse_spectrum(w, s), 2); }, -span, span, o);
  const auto second = numerics::integrate_adaptive(
      [&](double w) { return w * w * std::pow(env::classical_pulse_spectrum(w, s), 2); }, -span, span, o);
  CHECK(norm.value / kTwoPi == Approx(1.0).epsilon(1e-10));
  CHECK(second.value / norm.value == Approx(s.bandwidth * s.bandwidth).epsilon(1e-10));
}

TEST_CASE("scenario validation") {
  auto s = testing::fig3();
  CHECK(validate_scenario(s).empty());
  CHECK(s.effective_transmissivity() == Approx(s.transmissivity));
  s.compensation_angle = 0.0;
  CHECK(s.effective_transmissivity() == Approx(s.transmissivity * std::cos(0.1)));
  CHECK(s.effective_transmissivity() > 0.0);
  CHECK(s.effective_transmissivity() <= s.transmissivity);

  auto bad = testing::fig3();
  bad.bandwidth = -1.0;
  CHECK_THROWS_WITH_AS(validate_scenario(bad), doctest::Contains("bandwidth must be positive"), DomainError);
  bad = testing::fig3();
  bad.transmissivity = 1.0;
  CHECK_THROWS_AS(validate_scenario(bad), DomainError);
  bad = testing::fig3();
  bad.compensation_angle = bad.target_angle + kPi / 2.0;
  CHECK_THROWS_AS(validate_scenario(bad), DomainError);
  bad = testing::fig3();
  bad.prior_width = kPi;
  CHECK_THROWS_AS(validate_scenario(bad), DomainError);

  auto soft = testing::fig3();
  soft.pulse_duration = 1e-9;
  CHECK(validate_scenario(soft).size() == 1);
}
