#include <cmath>

#include <doctest.h>

#include "qradar/constants.hpp"
#include "qradar/errors.hpp"
#include "qradar/mode_sorter.hpp"

using namespace qradar;
using doctest::Approx;

namespace {

// (2n-1)!! / (2^n n!) by plain products
double coefficient_by_hand(int n) {
  double num = 1.0, den = 1.0;
  for (int k = 1; k <= n; ++k) {
    num *= 2.0 * k - 1.0;
    den *= 2.0 * k;
  }
  return num / den;
}

}  // namespace

TEST_CASE("double factorial coefficients") {
  CHECK(std::exp(mode_sorter::log_coefficient(0)) == Approx(1.0));
  for (int n = 1; n < 60; ++n)
    CHECK(std::exp(mode_sorter::log_coefficient(n)) == Approx(coefficient_by_hand(n)).epsilon(1e-12));
  CHECK(std::isfinite(mode_sorter::log_coefficient(400)));
}

TEST_CASE("hg occupation examples") {
  CHECK(hg_occupation(0, 0, 0.0, 1.0) == 1.0);
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m)
      if (n + m > 0) CHECK(hg_occupation(n, m, 0.0, 1.0) == 0.0);

  CHECK(hg_occupation(0, 0, kPi / 3, 1.0) == Approx(0.8).epsilon(1e-12));
  CHECK(hg_occupation(0, 1, kPi / 3, 1.0) == Approx(0.144).epsilon(1e-12));
  // chi = 1: the n ratio is exactly zero
  for (double phi : {0.2, 0.9, 1.3}) CHECK(hg_occupation(2, 1, phi, 1.0) == 0.0);

  for (double chi : {0.3, 1.0, 3.0})
    for (double phi : {0.0, 0.4, 1.1, 1.45})
      for (int n = 0; n < 5; ++n)
        for (int m = 0; m < 5; ++m) {
          const double p = hg_occupation(n, m, phi, chi);
          CHECK(p >= 0.0);
          CHECK(p <= 1.0);
          CHECK(p == hg_occupation(n, m, -phi, chi));
        }
  CHECK_THROWS_AS(hg_occupation(0, 0, kPi / 2, 1.0), DomainError);
  CHECK_THROWS_AS(hg_occupation(0, 0, 0.1, 0.0), DomainError);
}

TEST_CASE("occupancy sums approach one from below") {
  for (double chi : {0.3, 1.0, 2.0})
    for (double phi : {0.0, 0.5, 1.0, 1.4}) {
      double last = 0.0;
      for (int n_max : {10, 50, 200, 800}) {
        const double sum = occupancy_sum(phi, chi, n_max);
        CHECK(sum <= 1.0 + 1e-9);
        CHECK(sum >= last);
        last = sum;
      }
      CHECK(last == Approx(1.0).epsilon(1e-9));
    }
  // grazing incidence with chi = 3: ratio 0.96, slow tail
  CHECK(occupancy_sum(1.4, 3.0, 800) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("occupancy derivative") {
  CHECK(occupancy_derivative(0.0, 1.0) == 0.0);
  const double c = std::cos(1.0), s = std::sin(1.0);
  const double hand = -2.0 * s * s * s / ((c * c + 1.0) * (c * c + 1.0));
  CHECK(occupancy_derivative(1.0, 1.0) == Approx(hand).epsilon(1e-14));
  CHECK(occupancy_derivative(1.0, 1.0) == Approx(-0.7138).epsilon(1e-3 / 0.7138));
  const double h = 1e-6;
  for (double chi : {0.3, 1.0, 3.0})
    for (double phi = -1.4; phi <= 1.4; phi += 0.1) {
      const double fd = (hg_occupation(0, 0, phi + h, chi) - hg_occupation(0, 0, phi - h, chi)) / (2 * h);
      CHECK(std::abs(fd - occupancy_derivative(phi, chi)) <= 1e-6);
      CHECK(occupancy_derivative(-phi, chi) == Approx(-occupancy_derivative(phi, chi)));
    }
}

TEST_CASE("occupancy sequence") {
  const auto one = occupancy_sequence(0.0, 1.0, 1);
  REQUIRE(one.sequence.size() == 1);
  CHECK(one.sequence[0] == 1.0);
  CHECK(one.residual == 0.0);

  const auto t = occupancy_sequence(0.7, 0.6, 6);
  REQUIRE(t.sequence.size() == 6);
  const std::pair<int, int> order[] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int j = 0; j < 6; ++j) {
    CHECK(t.indices[j] == order[j]);
    CHECK(t.sequence[j] == hg_occupation(order[j].first, order[j].second, 0.7, 0.6));
  }
  double sum = 0.0;
  for (double p : t.sequence) sum += p;
  CHECK(t.residual == Approx(1.0 - sum));

  // delta / r = 2 in the far field: the fundamental dominates near broadside
  for (double phi : {0.0, 0.05, 0.1}) {
    CHECK(hg_occupation(0, 0, phi, 1.0) > hg_occupation(1, 0, phi, 1.0));
    CHECK(hg_occupation(0, 0, phi, 1.0) > hg_occupation(0, 1, phi, 1.0));
  }
  CHECK_THROWS_AS(occupancy_sequence(0.1, 1.0, 0), DomainError);
}

TEST_CASE("aperture geometry") {
  const double w = kTwoPi * 100e9;
  // tiny aperture keeps D_f negligible
  const auto far = aperture_geometry(1e-4, 0.5e-4, 1.0, w);
  CHECK(far.fresnel_number < 1e-6);
  CHECK(far.chi == Approx(1.0).epsilon(1e-6));
  const auto half = aperture_geometry(1e-4, 1e-4 / (2.0 * std::sqrt(2.0)), 1.0, w);
  CHECK(half.chi == Approx(0.5).epsilon(1e-6));
  CHECK(far.aperture_area == Approx(kPi * 1e-8 / 4));
  CHECK(far.complex_focus.real() == 0.5);

  double last = 0.0;
  for (double range : {1.0, 10.0, 100.0, 1000.0}) {
    const auto g = aperture_geometry(0.05, 0.025, range, w);
    CHECK(g.hg_scale > last);
    CHECK(g.hg_scale >= std::sqrt(2.0) / 0.05);
    last = g.hg_scale;
  }
  CHECK(aperture_from_chi(0.7).chi == 0.7);
  CHECK_THROWS_AS(aperture_geometry(0.0, 1.0, 1.0, w), DomainError);
}
