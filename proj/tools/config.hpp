#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qradar/env_model.hpp"
#include "qradar/gaussian.hpp"

namespace qradar::cli {

struct Range {
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 2;
  bool log = false;

  std::vector<double> values() const;
  bool operator==(const Range&) const = default;
};

// Scenario in the units people write down: GHz (cycles, not rad/s), m, s, K, rad.
struct ScenarioSpec {
  double carrier_ghz = 100.0;
  double bandwidth_ghz = 5.0;
  double pulse_duration_s = 1e-3;
  double receiver_separation_m = 8.0;
  double target_range_m = 1000.0;
  double target_angle_rad = 0.1;
  double compensation_angle_rad = 0.1;
  double reflection_phase_rad = 0.0;
  double prior_width_rad = 0.031415926535897934;  // pi / 100
  double per_mode_brightness = 1e-3;
  std::optional<double> noise_occupation;   // N_B directly ...
  std::optional<double> bath_temperature_k;  // ... or from Planck at the carrier
  std::optional<double> transmissivity;     // kappa directly ...
  std::optional<double> antenna_area_m2;    // ... or from the link budget
  std::optional<double> cross_section_m2;

  /// SI scenario; N_B defaults to 32 and kappa to 1e-3 when neither source is given.
  RadarScenario to_scenario() const;
  bool operator==(const ScenarioSpec&) const = default;
};

struct GridSpec {
  double k_max = kDefaultTruncation;
  std::size_t bin_cap = kDefaultBinCap;
  bool operator==(const GridSpec&) const = default;
};

struct SweepSpec {
  std::string axis = "snr_db";
  Range range{-10.0, 30.0, 41, false};
  bool operator==(const SweepSpec&) const = default;
};

struct ComputeSpec {
  std::size_t workers = 0;  // 0: hardware concurrency
  double zzb_rel_tol = 1e-4;
  bool numerical = false;
  SPolicy s_policy = SPolicy::Optimize;
  bool operator==(const ComputeSpec&) const = default;
};

struct OutputSpec {
  std::string csv;
  std::string svg;
  bool operator==(const OutputSpec&) const = default;
};

struct PlanckSpec {
  Range frequency_ghz{1.0, 1000.0, 61, true};
  std::vector<double> temperatures_k{3.0, 50.0, 150.0, 300.0};
  bool operator==(const PlanckSpec&) const = default;
};

struct AdvantageMapSpec {
  Range ranges_m{100.0, 1600.0, 16, false};
  Range pulse_durations_s{1e-3, 5.623413251903491, 16, true};
  bool operator==(const AdvantageMapSpec&) const = default;
};

struct ChernoffSet {
  double transmissivity = 0.5;
  double pulse_duration_s = 8.0;
  double per_mode_brightness = 0.1;
  bool operator==(const ChernoffSet&) const = default;
};

struct ChernoffSSpec {
  std::vector<ChernoffSet> sets{{0.5, 8.0, 0.1}};
  Range s{0.01, 0.99, 99, false};
  double zeta_rad = 1.0471975511965976;  // pi / 3
  double offset_ghz = 0.0;
  RadarKind kind = RadarKind::Quantum;
  bool operator==(const ChernoffSSpec&) const = default;
};

struct OccupancySpec {
  std::vector<double> aperture_ratios{1.5, 2.0, 3.0};
  double aperture_diameter_m = 0.05;
  bool far_field = false;
  Range angle_rad{0.0, 1.4, 57, false};
  bool operator==(const OccupancySpec&) const = default;
};

struct SingleReceiverSpec {
  double aperture_ratio = 2.0;
  double aperture_diameter_m = 0.05;
  bool far_field = true;
  std::optional<double> chi;
  bool operator==(const SingleReceiverSpec&) const = default;
};

struct RunConfig {
  ScenarioSpec scenario;
  GridSpec grid;
  SweepSpec sweep;
  ComputeSpec compute;
  OutputSpec output;
  PlanckSpec planck;
  AdvantageMapSpec advantage_map;
  ChernoffSSpec chernoff_s;
  OccupancySpec occupancy;
  SingleReceiverSpec single_receiver;

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError naming the offending key.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const nlohmann::json& doc);

/// Full config with every default filled in; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

/// Names accepted by sweep.axis besides "snr_db".
const std::vector<std::string>& scenario_axes();

/// Copy of `spec` with the named numeric field set to `value`.
ScenarioSpec with_axis(const ScenarioSpec& spec, const std::string& axis, double value);

}  // namespace qradar::cli
