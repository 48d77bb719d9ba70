#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qradar/constants.hpp"
#include "qradar/errors.hpp"
#include "qradar/numerics.hpp"

namespace qradar::cli {

using nlohmann::json;

std::vector<double> Range::values() const {
  return log ? numerics::logspace(start, stop, points) : numerics::linspace(start, stop, points);
}

RadarScenario ScenarioSpec::to_scenario() const {
  RadarScenario s;
  s.carrier_angular_freq = kTwoPi * 1e9 * carrier_ghz;
  s.bandwidth = kTwoPi * 1e9 * bandwidth_ghz;
  s.pulse_duration = pulse_duration_s;
  s.receiver_separation = receiver_separation_m;
  s.target_range = target_range_m;
  s.target_angle = target_angle_rad;
  s.compensation_angle = compensation_angle_rad;
  s.reflection_phase = reflection_phase_rad;
  s.prior_width = prior_width_rad;
  s.per_mode_brightness = per_mode_brightness;
  if (noise_occupation) {
    s.noise_occupation = *noise_occupation;
  } else if (bath_temperature_k) {
    s.noise_occupation = env::planck_occupation(s.carrier_angular_freq, *bath_temperature_k);
    s.bath_temperature = bath_temperature_k;
  } else {
    s.noise_occupation = 32.0;
  }
  if (transmissivity) {
    s.transmissivity = *transmissivity;
  } else if (antenna_area_m2 && cross_section_m2) {
    s.transmissivity = env::link_budget_kappa({*antenna_area_m2, *cross_section_m2, target_range_m, s.carrier_angular_freq});
  } else {
    s.transmissivity = 1e-3;
  }
  return s;
}

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported as typos.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (doc.contains(name_)) {
      node_ = &doc.at(name_);
      if (!node_->is_object()) bad(name_, "must be an object");
    }
  }
  Section(const json& node, std::string name, bool) : node_(&node), name_(std::move(name)) {
    if (!node_->is_object()) bad(name_, "must be an object");
  }

  std::string key(const std::string& k) const { return name_ + "." + k; }

  const json* find(const std::string& k) {
    seen_.insert(k);
    if (!node_ || !node_->contains(k)) return nullptr;
    return &node_->at(k);
  }

  double number(const std::string& k, double fallback) {
    const json* v = find(k);
    if (!v) return fallback;
    if (!v->is_number()) bad(key(k), "must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) bad(key(k), "must be finite");
    return x;
  }

  std::optional<double> optional_number(const std::string& k) {
    const json* v = find(k);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_number()) bad(key(k), "must be a number");
    return v->get<double>();
  }

  std::size_t count(const std::string& k, std::size_t fallback) {
    const json* v = find(k);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<long long>() < 0) bad(key(k), "must be a non-negative integer");
    return v->get<std::size_t>();
  }

  bool flag(const std::string& k, bool fallback) {
    const json* v = find(k);
    if (!v) return fallback;
    if (!v->is_boolean()) bad(key(k), "must be true or false");
    return v->get<bool>();
  }

  std::string text(const std::string& k, const std::string& fallback) {
    const json* v = find(k);
    if (!v) return fallback;
    if (!v->is_string()) bad(key(k), "must be a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& k, const std::vector<double>& fallback) {
    const json* v = find(k);
    if (!v) return fallback;
    if (!v->is_array() || v->empty()) bad(key(k), "must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) bad(key(k), "must be a non-empty array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Range range(const std::string& k, const Range& fallback) {
    const json* v = find(k);
    if (!v) return fallback;
    Section r(*v, key(k), true);
    Range out;
    out.start = r.number("start", fallback.start);
    out.stop = r.number("stop", fallback.stop);
    out.points = r.count("points", fallback.points);
    const std::string scale = r.text("scale", fallback.log ? "log" : "linear");
    if (scale != "log" && scale != "linear") bad(r.key("scale"), "must be \"linear\" or \"log\"");
    out.log = scale == "log";
    r.finish();
    if (out.points < 2) bad(key(k) + ".points", "must be >= 2");
    if (out.log && !(out.start > 0.0 && out.stop > 0.0)) bad(key(k), "log scale needs positive start and stop");
    return out;
  }

  void finish() const {
    if (!node_) return;
    for (const auto& item : node_->items())
      if (!seen_.count(item.key())) bad(key(item.key()), "unknown key");
  }

 private:
  const json* node_ = nullptr;
  std::string name_;
  std::set<std::string> seen_;
};

void positive(double v, const std::string& key, const std::string& what) {
  if (!(v > 0.0)) bad(key, what + " must be positive");
}

json range_json(const Range& r) {
  return json{{"start", r.start}, {"stop", r.stop}, {"points", r.points}, {"scale", r.log ? "log" : "linear"}};
}

// Scenario fields that a sweep may drive, in echo order. Exactly one of
// `plain` and `optional` is set.
struct AxisField {
  const char* name;
  double* (*plain)(ScenarioSpec&);
  std::optional<double>* (*optional)(ScenarioSpec&);
};

#define QRADAR_PLAIN(f) {#f, [](ScenarioSpec& s) { return &s.f; }, nullptr}
#define QRADAR_OPTIONAL(f) {#f, nullptr, [](ScenarioSpec& s) { return &s.f; }}

const std::vector<AxisField>& axis_fields() {
  static const std::vector<AxisField> fields{
      QRADAR_PLAIN(carrier_ghz),
      QRADAR_PLAIN(bandwidth_ghz),
      QRADAR_PLAIN(pulse_duration_s),
      QRADAR_PLAIN(receiver_separation_m),
      QRADAR_PLAIN(target_range_m),
      QRADAR_PLAIN(target_angle_rad),
      QRADAR_PLAIN(compensation_angle_rad),
      QRADAR_PLAIN(reflection_phase_rad),
      QRADAR_PLAIN(prior_width_rad),
      QRADAR_PLAIN(per_mode_brightness),
      QRADAR_OPTIONAL(noise_occupation),
      QRADAR_OPTIONAL(bath_temperature_k),
      QRADAR_OPTIONAL(transmissivity),
      QRADAR_OPTIONAL(antenna_area_m2),
      QRADAR_OPTIONAL(cross_section_m2),
  };
  return fields;
}

#undef QRADAR_PLAIN
#undef QRADAR_OPTIONAL

void check_scenario(const ScenarioSpec& sc) {
  positive(sc.carrier_ghz, "scenario.carrier_ghz", "carrier frequency");
  positive(sc.bandwidth_ghz, "scenario.bandwidth_ghz", "bandwidth");
  positive(sc.pulse_duration_s, "scenario.pulse_duration_s", "pulse duration");
  positive(sc.receiver_separation_m, "scenario.receiver_separation_m", "receiver separation");
  if (!(sc.target_range_m >= 0.0)) bad("scenario.target_range_m", "target range must be non-negative");
  if (!(sc.prior_width_rad > 0.0 && sc.prior_width_rad < kPi))
    bad("scenario.prior_width_rad", "prior width must lie in (0, pi)");
  positive(sc.per_mode_brightness, "scenario.per_mode_brightness", "per-mode brightness");
  if (sc.noise_occupation && sc.bath_temperature_k)
    bad("scenario.bath_temperature_k", "give either noise_occupation or bath_temperature_k, not both");
  if (sc.noise_occupation) positive(*sc.noise_occupation, "scenario.noise_occupation", "noise occupation");
  if (sc.bath_temperature_k) positive(*sc.bath_temperature_k, "scenario.bath_temperature_k", "bath temperature");
  const bool budget = sc.antenna_area_m2 || sc.cross_section_m2;
  if (sc.transmissivity && budget)
    bad("scenario.transmissivity", "give either transmissivity or antenna_area_m2/cross_section_m2, not both");
  if (budget && !(sc.antenna_area_m2 && sc.cross_section_m2))
    bad(sc.antenna_area_m2 ? "scenario.cross_section_m2" : "scenario.antenna_area_m2",
        "the link budget needs both antenna_area_m2 and cross_section_m2");
  if (sc.transmissivity && !(*sc.transmissivity > 0.0 && *sc.transmissivity < 1.0))
    bad("scenario.transmissivity", "transmissivity must lie in (0, 1)");
  if (sc.antenna_area_m2) positive(*sc.antenna_area_m2, "scenario.antenna_area_m2", "antenna area");
  if (sc.cross_section_m2) positive(*sc.cross_section_m2, "scenario.cross_section_m2", "cross section");
  if (!(std::abs(sc.target_angle_rad - sc.compensation_angle_rad) < kPi / 2.0))
    bad("scenario.target_angle_rad", "|target angle - compensation angle| must be below pi/2");
  try {
    validate_scenario(sc.to_scenario());
  } catch (const DomainError& e) {
    bad("scenario", e.what());
  }
}

}  // namespace

const std::vector<std::string>& scenario_axes() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& f : axis_fields()) n.push_back(f.name);
    return n;
  }();
  return names;
}

ScenarioSpec with_axis(const ScenarioSpec& spec, const std::string& axis, double value) {
  ScenarioSpec out = spec;
  for (const auto& f : axis_fields()) {
    if (axis != f.name) continue;
    if (f.plain)
      *f.plain(out) = value;
    else
      *f.optional(out) = value;
    return out;
  }
  bad("sweep.axis", "\"" + axis + "\" is not a scenario field");
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  static const std::set<std::string> sections{"scenario",   "grid",       "sweep",     "compute",
                                              "output",     "planck",     "advantage_map",
                                              "chernoff_s", "occupancy",  "single_receiver"};
  for (const auto& item : doc.items())
    if (!sections.count(item.key())) bad(item.key(), "unknown key");

  RunConfig c;
  {
    Section s(doc, "scenario");
    ScenarioSpec& sc = c.scenario;
    for (const auto& f : axis_fields()) {
      if (f.plain)
        *f.plain(sc) = s.number(f.name, *f.plain(sc));
      else
        *f.optional(sc) = s.optional_number(f.name);
    }
    s.finish();
    check_scenario(sc);
  }
  {
    Section s(doc, "grid");
    c.grid.k_max = s.number("k_max", c.grid.k_max);
    c.grid.bin_cap = s.count("bin_cap", c.grid.bin_cap);
    s.finish();
    if (!(c.grid.k_max >= 3.0)) bad("grid.k_max", "must be >= 3");
    if (c.grid.bin_cap < 1) bad("grid.bin_cap", "must be >= 1");
  }
  {
    Section s(doc, "sweep");
    c.sweep.axis = s.text("axis", c.sweep.axis);
    c.sweep.range = s.range("range", c.sweep.range);
    s.finish();
    const auto& axes = scenario_axes();
    if (c.sweep.axis != "snr_db" && std::find(axes.begin(), axes.end(), c.sweep.axis) == axes.end())
      bad("sweep.axis", "\"" + c.sweep.axis + "\" is neither snr_db nor a scenario field");
  }
  {
    Section s(doc, "compute");
    c.compute.workers = s.count("workers", c.compute.workers);
    c.compute.zzb_rel_tol = s.number("zzb_rel_tol", c.compute.zzb_rel_tol);
    c.compute.numerical = s.flag("numerical", c.compute.numerical);
    const std::string policy = s.text("s_policy", c.compute.s_policy == SPolicy::Half ? "half" : "optimize");
    if (policy != "half" && policy != "optimize") bad("compute.s_policy", "must be \"optimize\" or \"half\"");
    c.compute.s_policy = policy == "half" ? SPolicy::Half : SPolicy::Optimize;
    s.finish();
    if (!(c.compute.zzb_rel_tol > 0.0 && c.compute.zzb_rel_tol < 0.1)) bad("compute.zzb_rel_tol", "must lie in (0, 0.1)");
  }
  {
    Section s(doc, "output");
    c.output.csv = s.text("csv", c.output.csv);
    c.output.svg = s.text("svg", c.output.svg);
    s.finish();
  }
  {
    Section s(doc, "planck");
    c.planck.frequency_ghz = s.range("frequency_ghz", c.planck.frequency_ghz);
    c.planck.temperatures_k = s.numbers("temperatures_k", c.planck.temperatures_k);
    s.finish();
    if (!(std::min(c.planck.frequency_ghz.start, c.planck.frequency_ghz.stop) > 0.0))
      bad("planck.frequency_ghz", "frequencies must be positive");
    for (double t : c.planck.temperatures_k)
      if (!(t >= 0.0)) bad("planck.temperatures_k", "temperatures must be >= 0");
  }
  {
    Section s(doc, "advantage_map");
    c.advantage_map.ranges_m = s.range("ranges_m", c.advantage_map.ranges_m);
    c.advantage_map.pulse_durations_s = s.range("pulse_durations_s", c.advantage_map.pulse_durations_s);
    s.finish();
    if (!(std::min(c.advantage_map.ranges_m.start, c.advantage_map.ranges_m.stop) > 0.0))
      bad("advantage_map.ranges_m", "ranges must be positive");
    if (!(std::min(c.advantage_map.pulse_durations_s.start, c.advantage_map.pulse_durations_s.stop) > 0.0))
      bad("advantage_map.pulse_durations_s", "pulse durations must be positive");
  }
  {
    Section s(doc, "chernoff_s");
    if (const json* sets = s.find("sets")) {
      if (!sets->is_array() || sets->empty()) bad("chernoff_s.sets", "must be a non-empty array of objects");
      c.chernoff_s.sets.clear();
      for (std::size_t i = 0; i < sets->size(); ++i) {
        Section e((*sets)[i], "chernoff_s.sets[" + std::to_string(i) + "]", true);
        ChernoffSet set;
        set.transmissivity = e.number("transmissivity", set.transmissivity);
        set.pulse_duration_s = e.number("pulse_duration_s", set.pulse_duration_s);
        set.per_mode_brightness = e.number("per_mode_brightness", set.per_mode_brightness);
        e.finish();
        if (!(set.transmissivity > 0.0 && set.transmissivity < 1.0))
          bad(e.key("transmissivity"), "transmissivity must lie in (0, 1)");
        positive(set.pulse_duration_s, e.key("pulse_duration_s"), "pulse duration");
        positive(set.per_mode_brightness, e.key("per_mode_brightness"), "per-mode brightness");
        c.chernoff_s.sets.push_back(set);
      }
    }
    c.chernoff_s.s = s.range("s", c.chernoff_s.s);
    c.chernoff_s.zeta_rad = s.number("zeta_rad", c.chernoff_s.zeta_rad);
    c.chernoff_s.offset_ghz = s.number("offset_ghz", c.chernoff_s.offset_ghz);
    const std::string kind = s.text("kind", to_string(c.chernoff_s.kind));
    if (kind != "classical" && kind != "quantum") bad("chernoff_s.kind", "must be \"classical\" or \"quantum\"");
    c.chernoff_s.kind = kind == "quantum" ? RadarKind::Quantum : RadarKind::Classical;
    s.finish();
    const auto& r = c.chernoff_s.s;
    if (!(std::min(r.start, r.stop) > 0.0 && std::max(r.start, r.stop) < 1.0))
      bad("chernoff_s.s", "s values must lie in (0, 1)");
  }
  {
    Section s(doc, "occupancy");
    c.occupancy.aperture_ratios = s.numbers("aperture_ratios", c.occupancy.aperture_ratios);
    c.occupancy.aperture_diameter_m = s.number("aperture_diameter_m", c.occupancy.aperture_diameter_m);
    c.occupancy.far_field = s.flag("far_field", c.occupancy.far_field);
    c.occupancy.angle_rad = s.range("angle_rad", c.occupancy.angle_rad);
    s.finish();
    for (double r : c.occupancy.aperture_ratios) positive(r, "occupancy.aperture_ratios", "aperture ratio");
    positive(c.occupancy.aperture_diameter_m, "occupancy.aperture_diameter_m", "aperture diameter");
    const auto& a = c.occupancy.angle_rad;
    if (!(std::max(std::abs(a.start), std::abs(a.stop)) < kPi / 2.0))
      bad("occupancy.angle_rad", "angles must stay below pi/2 in magnitude");
  }
  {
    Section s(doc, "single_receiver");
    c.single_receiver.aperture_ratio = s.number("aperture_ratio", c.single_receiver.aperture_ratio);
    c.single_receiver.aperture_diameter_m = s.number("aperture_diameter_m", c.single_receiver.aperture_diameter_m);
    c.single_receiver.far_field = s.flag("far_field", c.single_receiver.far_field);
    c.single_receiver.chi = s.optional_number("chi");
    s.finish();
    positive(c.single_receiver.aperture_ratio, "single_receiver.aperture_ratio", "aperture ratio");
    positive(c.single_receiver.aperture_diameter_m, "single_receiver.aperture_diameter_m", "aperture diameter");
    if (c.single_receiver.chi) positive(*c.single_receiver.chi, "single_receiver.chi", "chi");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + path + " is not valid JSON (" + e.what() + ")");
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json sc = json::object();
  ScenarioSpec spec = c.scenario;
  for (const auto& f : axis_fields()) {
    if (f.plain)
      sc[f.name] = *f.plain(spec);
    else if (const auto* v = f.optional(spec); v->has_value())
      sc[f.name] = **v;
  }
  json sets = json::array();
  for (const auto& s : c.chernoff_s.sets)
    sets.push_back({{"transmissivity", s.transmissivity},
                    {"pulse_duration_s", s.pulse_duration_s},
                    {"per_mode_brightness", s.per_mode_brightness}});
  json single{{"aperture_ratio", c.single_receiver.aperture_ratio},
              {"aperture_diameter_m", c.single_receiver.aperture_diameter_m},
              {"far_field", c.single_receiver.far_field}};
  if (c.single_receiver.chi) single["chi"] = *c.single_receiver.chi;
  return json{
      {"scenario", sc},
      {"grid", {{"k_max", c.grid.k_max}, {"bin_cap", c.grid.bin_cap}}},
      {"sweep", {{"axis", c.sweep.axis}, {"range", range_json(c.sweep.range)}}},
      {"compute",
       {{"workers", c.compute.workers},
        {"zzb_rel_tol", c.compute.zzb_rel_tol},
        {"numerical", c.compute.numerical},
        {"s_policy", c.compute.s_policy == SPolicy::Half ? "half" : "optimize"}}},
      {"output", {{"csv", c.output.csv}, {"svg", c.output.svg}}},
      {"planck",
       {{"frequency_ghz", range_json(c.planck.frequency_ghz)}, {"temperatures_k", c.planck.temperatures_k}}},
      {"advantage_map",
       {{"ranges_m", range_json(c.advantage_map.ranges_m)},
        {"pulse_durations_s", range_json(c.advantage_map.pulse_durations_s)}}},
      {"chernoff_s",
       {{"sets", sets},
        {"s", range_json(c.chernoff_s.s)},
        {"zeta_rad", c.chernoff_s.zeta_rad},
        {"offset_ghz", c.chernoff_s.offset_ghz},
        {"kind", to_string(c.chernoff_s.kind)}}},
      {"occupancy",
       {{"aperture_ratios", c.occupancy.aperture_ratios},
        {"aperture_diameter_m", c.occupancy.aperture_diameter_m},
        {"far_field", c.occupancy.far_field},
        {"angle_rad", range_json(c.occupancy.angle_rad)}}},
      {"single_receiver", single},
  };
}

}  // namespace qradar::cli
