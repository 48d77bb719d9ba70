#pragma once

#include "qradar/constants.hpp"
#include "qradar/env_model.hpp"

namespace qradar::testing {

// 100 GHz carrier, 5 GHz bandwidth, bearing 0.1 rad with matched pointing.
inline RadarScenario fig3(double separation = 8.0) {
  RadarScenario s;
  s.carrier_angular_freq = kTwoPi * 100e9;
  s.bandwidth = kTwoPi * 5e9;
  s.pulse_duration = 1.0;
  s.receiver_separation = separation;
  s.target_range = 1000.0;
  s.target_angle = 0.1;
  s.compensation_angle = 0.1;
  s.prior_width = kPi / 100.0;
  s.per_mode_brightness = 1e-3;
  s.noise_occupation = 32.0;
  s.transmissivity = 1e-4;
  return s;
}

inline RadarScenario fig4() { return fig3(10.0); }

// Narrow band so the explicit per-bin product stays small.
inline RadarScenario narrowband() {
  RadarScenario s;
  s.carrier_angular_freq = kTwoPi * 1e9;
  s.bandwidth = kTwoPi * 1e6;
  s.pulse_duration = 1e-3;
  s.receiver_separation = 50.0;
  s.target_range = 1000.0;
  s.target_angle = 0.1;
  s.compensation_angle = 0.1;
  s.prior_width = kPi / 100.0;
  s.per_mode_brightness = 1e-2;
  s.noise_occupation = 20.0;
  s.transmissivity = 1e-3;
  return s;
}

}  // namespace qradar::testing
