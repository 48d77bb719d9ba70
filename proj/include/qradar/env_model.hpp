#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qradar {

enum class RadarKind { Classical, Quantum };

const char* to_string(RadarKind kind);

/// Physical parameters of one radar run. Angular frequencies in rad/s,
/// lengths in m, times in s, angles in rad, photon numbers per mode.
struct RadarScenario {
  double carrier_angular_freq = 0.0;  // omega_0
  double bandwidth = 0.0;             // Delta omega
  double pulse_duration = 0.0;        // T_d
  double receiver_separation = 0.0;   // d
  double target_range = 0.0;          // L
  double target_angle = 0.0;          // phi
  double compensation_angle = 0.0;    // phi_c
  double reflection_phase = 0.0;      // xi
  double prior_width = 0.0;           // Delta phi
  double per_mode_brightness = 0.0;   // N_S
  double noise_occupation = 0.0;      // N_B
  double transmissivity = 0.0;        // kappa

  // Provenance only: set when N_B was derived from a bath temperature.
  std::optional<double> bath_temperature;

  double time_of_flight() const;
  /// kappa * cos(angle - phi_c).
  double effective_transmissivity(double angle) const;
  double effective_transmissivity() const { return effective_transmissivity(target_angle); }

  bool operator==(const RadarScenario&) const = default;
};

/// Throws DomainError on hard violations; returns soft warnings (and logs them).
std::vector<std::string> validate_scenario(const RadarScenario& scenario);

struct LinkBudget {
  double antenna_area = 0.0;          // A_R, m^2
  double target_cross_section = 0.0;  // sigma, m^2
  double range = 0.0;                 // L, m
  double carrier_angular_freq = 0.0;  // omega_0, rad/s

  double antenna_gain() const;
};

struct SpectralGrid {
  std::vector<double> offsets;  // empty in continuous-limit mode
  double bin_width = 0.0;
  double truncation_multiple = 0.0;
  std::size_t mode_count = 0;  // explicit count, even when not materialised
  bool continuous_limit = false;
  double half_span = 0.0;  // k_max * Delta omega
};

inline constexpr double kDefaultTruncation = 5.0;
inline constexpr std::size_t kDefaultBinCap = std::size_t{1} << 20;

namespace env {

/// Planck occupation 1 / (exp(hbar omega / k_B T) - 1); zero at T = 0.
double planck_occupation(double angular_freq, double temperature);

/// Round-trip transmissivity G_T/(4 pi L^2) * sigma A_R/(4 pi L^2).
/// Throws DomainError when the result is >= 0.1.
double link_budget_kappa(const LinkBudget& lb);

/// S^(n)(Omega) = sqrt(2 pi) N_S exp(-Omega^2 / 2 Delta omega^2).
double per_mode_brightness(double offset, const RadarScenario& scenario);

/// S^(p) = sqrt(S^(n) (S^(n) + 1)).
double phase_sensitive_brightness(double offset, const RadarScenario& scenario);

/// Delta omega T_d kappa N_S / N_B.
double snr(const RadarScenario& scenario);
double snr_db(const RadarScenario& scenario);
double to_db(double linear);
double from_db(double db);

SpectralGrid build_grid(double pulse_duration, double bandwidth,
                        double truncation_multiple = kDefaultTruncation,
                        std::size_t bin_cap = kDefaultBinCap);

/// Pulse amplitude spectrum (Delta omega^2 / 2 pi)^{-1/4} exp(-Omega^2 / 4 Delta omega^2).
double classical_pulse_spectrum(double offset, const RadarScenario& scenario);

/// N_S that realises the requested linear SNR (SNR is linear in N_S).
double brightness_for_snr(const RadarScenario& scenario, double target_snr);

}  // namespace env
}  // namespace qradar
