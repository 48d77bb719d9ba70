#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qradar {

struct ApertureGeometry {
  double aperture_diameter = 0.0;    // delta, m
  double beam_minor_half_axis = 0.0;  // r, m
  double range = 0.0;                 // L, m
  double carrier_angular_freq = 0.0;  // omega_0, rad/s

  double aperture_area = 0.0;   // pi delta^2 / 4
  double fresnel_number = 0.0;  // D_f = (2 pi A_delta c L / omega_0)^2
  double hg_scale = 0.0;        // beta = sqrt(2) (1 + 4 D_f)^{1/4} / delta
  double chi = 0.0;             // 2 beta^2 r^2
  std::complex<double> complex_focus;  // nu = (1 + i omega_0 / (c beta^2 L)) / 2; 1/2 is used
};

/// Warns (does not throw) when D_f > 0.01.
ApertureGeometry aperture_geometry(double diameter, double minor_half_axis, double range,
                                   double carrier_angular_freq);

/// Aperture with a prescribed chi; the derived lengths are left at zero.
ApertureGeometry aperture_from_chi(double chi);

/// p_{n,m} for the elliptical Gaussian return projected on HG(n, m).
double hg_occupation(int n, int m, double angle, double chi);

/// Analytic d p_{0,0} / d angle.
double occupancy_derivative(double angle, double chi);

struct OccupancyTable {
  std::vector<double> sequence;  // P_1 .. P_k in diagonal order p00, p10, p01, p20, p11, p02, ...
  std::vector<std::pair<int, int>> indices;
  double residual = 0.0;  // 1 - sum(sequence)
};

OccupancyTable occupancy_sequence(double angle, double chi, std::size_t k);

/// Sum of p_{n,m} over 0 <= n, m <= n_max.
double occupancy_sum(double angle, double chi, int n_max);

namespace mode_sorter {
/// log((2n - 1)!! / (2^n n!)) via log-gamma.
double log_coefficient(int n);
}  // namespace mode_sorter

}  // namespace qradar
