#include "qradar/mode_sorter.hpp"

#include <cmath>

#include "qradar/constants.hpp"
#include "qradar/errors.hpp"
#include "qradar/log.hpp"

namespace qradar {

namespace {

void check_domain(double angle, double chi) {
  if (!(chi > 0.0)) throw DomainError("mode sorter: chi must be positive");
  if (!(std::abs(angle) < kPi / 2.0)) throw DomainError("mode sorter: |angle| must be below pi/2");
}

}  // namespace

namespace mode_sorter {

// (2n - 1)!! = (2n)! / (2^n n!), so the coefficient is (2n)! / (4^n (n!)^2).
double log_coefficient(int n) {
  const double dn = n;
  return std::lgamma(2.0 * dn + 1.0) - 2.0 * dn * std::log(2.0) - 2.0 * std::lgamma(dn + 1.0);
}

}  // namespace mode_sorter

ApertureGeometry aperture_geometry(double diameter, double minor_half_axis, double range,
                                   double carrier_angular_freq) {
  if (!(diameter > 0.0 && minor_half_axis > 0.0 && range > 0.0 && carrier_angular_freq > 0.0))
    throw DomainError("aperture_geometry: all inputs must be positive");
  ApertureGeometry g;
  g.aperture_diameter = diameter;
  g.beam_minor_half_axis = minor_half_axis;
  g.range = range;
  g.carrier_angular_freq = carrier_angular_freq;
  g.aperture_area = kPi * diameter * diameter / 4.0;
  const double f = kTwoPi * g.aperture_area * PhysicalConstants::light_speed * range / carrier_angular_freq;
  g.fresnel_number = f * f;
  g.hg_scale = std::sqrt(2.0) * std::pow(1.0 + 4.0 * g.fresnel_number, 0.25) / diameter;
  g.chi = 2.0 * g.hg_scale * g.hg_scale * minor_half_axis * minor_half_axis;
  g.complex_focus = std::complex<double>(
      0.5, 0.5 * carrier_angular_freq / (PhysicalConstants::light_speed * g.hg_scale * g.hg_scale * range));
  if (g.fresnel_number > 0.01)
    spdlog::warn("aperture: Fresnel number {} exceeds 0.01, far-field assumption is doubtful", g.fresnel_number);
  return g;
}

ApertureGeometry aperture_from_chi(double chi) {
  if (!(chi > 0.0)) throw DomainError("aperture_from_chi: chi must be positive");
  ApertureGeometry g;
  g.chi = chi;
  g.complex_focus = 0.5;
  return g;
}

double hg_occupation(int n, int m, double angle, double chi) {
  if (n < 0 || m < 0) throw DomainError("hg_occupation: indices must be non-negative");
  check_domain(angle, chi);
  const double c = std::cos(angle);
  const double c2 = c * c;
  const double prefactor = 4.0 * chi * c / ((1.0 + chi) * (c2 + chi));
  const double qn = (1.0 - chi) / (1.0 + chi);
  const double qm = (c2 - chi) / (c2 + chi);
  const double coef = std::exp(mode_sorter::log_coefficient(n) + mode_sorter::log_coefficient(m));
  return coef * prefactor * std::pow(qn, 2 * n) * std::pow(qm, 2 * m);
}

double occupancy_derivative(double angle, double chi) {
  check_domain(angle, chi);
  const double c = std::cos(angle);
  const double denom = c * c + chi;
  return -4.0 * chi / (1.0 + chi) * (chi - c * c) / (denom * denom) * std::sin(angle);
}

OccupancyTable occupancy_sequence(double angle, double chi, std::size_t k) {
  if (k < 1) throw DomainError("occupancy_sequence: k must be >= 1");
  OccupancyTable t;
  t.sequence.reserve(k);
  double sum = 0.0;
  for (int total = 0; t.sequence.size() < k; ++total) {
    for (int n = total; n >= 0 && t.sequence.size() < k; --n) {
      const int m = total - n;
      const double p = hg_occupation(n, m, angle, chi);
      t.sequence.push_back(p);
      t.indices.emplace_back(n, m);
      sum += p;
    }
  }
  t.residual = 1.0 - sum;
  return t;
}

double occupancy_sum(double angle, double chi, int n_max) {
  double sum = 0.0;
  for (int n = 0; n <= n_max; ++n)
    for (int m = 0; m <= n_max; ++m) sum += hg_occupation(n, m, angle, chi);
  return sum;
}

}  // namespace qradar
