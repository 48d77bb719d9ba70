#include "qradar/env_model.hpp"

#include <cmath>
#include <sstream>

#include "qradar/constants.hpp"
#include "qradar/errors.hpp"
#include "qradar/log.hpp"

namespace qradar {

const char* to_string(RadarKind kind) {
  return kind == RadarKind::Classical ? "classical" : "quantum";
}

double RadarScenario::time_of_flight() const {
  return 2.0 * target_range / PhysicalConstants::light_speed;
}

double RadarScenario::effective_transmissivity(double angle) const {
  return transmissivity * std::cos(angle - compensation_angle);
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

std::vector<std::string> validate_scenario(const RadarScenario& s) {
  require(s.carrier_angular_freq > 0.0, "carrier frequency must be positive");
  require(s.bandwidth > 0.0, "bandwidth must be positive");
  require(s.pulse_duration > 0.0, "pulse duration must be positive");
  require(s.receiver_separation > 0.0, "receiver separation must be positive");
  require(s.target_range >= 0.0, "target range must be non-negative");
  require(s.transmissivity > 0.0 && s.transmissivity < 1.0, "transmissivity must lie in (0, 1)");
  require(s.per_mode_brightness > 0.0, "per-mode brightness N_S must be positive");
  require(s.noise_occupation > 0.0, "noise occupation N_B must be positive");
  require(s.prior_width > 0.0 && s.prior_width < kPi, "prior width must lie in (0, pi)");
  require(std::abs(s.target_angle - s.compensation_angle) < kPi / 2.0,
          "|target angle - compensation angle| must be below pi/2");

  std::vector<std::string> warnings;
  if (!(kTwoPi / s.pulse_duration < s.bandwidth / 10.0)) {
    std::ostringstream os;
    os << "2 pi / T_d = " << kTwoPi / s.pulse_duration
       << " rad/s is not small against the bandwidth " << s.bandwidth << " rad/s";
    warnings.push_back(os.str());
  }
  if (!(s.bandwidth < s.carrier_angular_freq / 10.0)) {
    warnings.push_back("bandwidth is not small against the carrier frequency");
  }
  for (const auto& w : warnings) spdlog::warn("scenario: {}", w);
  return warnings;
}

double LinkBudget::antenna_gain() const {
  const double wavelength = kTwoPi * PhysicalConstants::light_speed / carrier_angular_freq;
  return antenna_area / (wavelength * wavelength);
}

namespace env {

double planck_occupation(double angular_freq, double temperature) {
  if (!(angular_freq > 0.0)) throw DomainError("planck_occupation: frequency must be positive");
  if (temperature < 0.0) throw DomainError("planck_occupation: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  const double x = PhysicalConstants::reduced_planck * angular_freq /
                   (PhysicalConstants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double link_budget_kappa(const LinkBudget& lb) {
  if (!(lb.antenna_area > 0.0 && lb.range > 0.0 && lb.carrier_angular_freq > 0.0))
    throw DomainError("link budget: antenna area, range and carrier must be positive");
  if (lb.target_cross_section < 0.0) throw DomainError("link budget: cross section must be >= 0");
  const double spread = 4.0 * kPi * lb.range * lb.range;
  const double kappa = lb.antenna_gain() / spread * (lb.target_cross_section * lb.antenna_area / spread);
  if (kappa >= 0.1) {
    std::ostringstream os;
    os << "link budget gives kappa = " << kappa << " >= 0.1; the small-transmissivity model does not apply";
    throw DomainError(os.str());
  }
  return kappa;
}

double per_mode_brightness(double offset, const RadarScenario& s) {
  const double r = offset / s.bandwidth;
  return std::sqrt(kTwoPi) * s.per_mode_brightness * std::exp(-0.5 * r * r);
}

double phase_sensitive_brightness(double offset, const RadarScenario& s) {
  const double n = per_mode_brightness(offset, s);
  return std::sqrt(n * (n + 1.0));
}

double snr(const RadarScenario& s) {
  return s.bandwidth * s.pulse_duration * s.transmissivity * s.per_mode_brightness /
         s.noise_occupation;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }

double snr_db(const RadarScenario& s) { return to_db(snr(s)); }

SpectralGrid build_grid(double pulse_duration, double bandwidth, double truncation_multiple,
                        std::size_t bin_cap) {
  if (!(pulse_duration > 0.0 && bandwidth > 0.0))
    throw DomainError("build_grid: pulse duration and bandwidth must be positive");
  if (!(truncation_multiple >= 3.0)) throw DomainError("build_grid: truncation multiple must be >= 3");

  SpectralGrid grid;
  grid.bin_width = kTwoPi / pulse_duration;
  grid.truncation_multiple = truncation_multiple;
  grid.half_span = truncation_multiple * bandwidth;

  // ratios like 4.0 can land a hair below the integer
  const double half_bins = std::floor(grid.half_span / grid.bin_width * (1.0 + 1e-12));
  const double count = 2.0 * half_bins + 1.0;
  if (count > static_cast<double>(bin_cap)) {
    grid.continuous_limit = true;
    grid.mode_count = count < 1.8e19 ? static_cast<std::size_t>(count) : SIZE_MAX;
    return grid;
  }
  const auto half = static_cast<long long>(half_bins);
  grid.mode_count = static_cast<std::size_t>(count);
  grid.offsets.reserve(grid.mode_count);
  for (long long j = -half; j <= half; ++j) grid.offsets.push_back(static_cast<double>(j) * grid.bin_width);
  return grid;
}

double classical_pulse_spectrum(double offset, const RadarScenario& s) {
  const double r = offset / s.bandwidth;
  return std::pow(s.bandwidth * s.bandwidth / kTwoPi, -0.25) * std::exp(-0.25 * r * r);
}

double brightness_for_snr(const RadarScenario& s, double target_snr) {
  if (!(target_snr > 0.0)) throw DomainError("brightness_for_snr: SNR must be positive");
  return target_snr * s.noise_occupation / (s.bandwidth * s.pulse_duration * s.transmissivity);
}

}  // namespace env
}  // namespace qradar
