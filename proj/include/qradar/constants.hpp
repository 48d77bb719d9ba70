#pragma once

#include <numbers>

namespace qradar {

// CODATA 2018 exact / recommended values. Goldens depend on these bits.
//
//   quantity           symbol   value                    unit
//   reduced Planck     hbar     1.054571817e-34          J s
//   Boltzmann          k_B      1.380649e-23 (exact)     J/K
//   speed of light     c        299792458 (exact)        m/s
struct PhysicalConstants {
  static constexpr double reduced_planck = 1.054571817e-34;
  static constexpr double boltzmann = 1.380649e-23;
  static constexpr double light_speed = 299792458.0;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace qradar
