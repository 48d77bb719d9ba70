#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <functional>

#include "parallel.hpp"
#include "qradar/bounds.hpp"
#include "qradar/constants.hpp"
#include "qradar/errors.hpp"
#include "qradar/mode_sorter.hpp"
#include "qradar/radar_states.hpp"

#ifndef QRADAR_VERSION
#define QRADAR_VERSION "unknown"
#endif

namespace qradar::cli {

namespace {

using Row = std::vector<double>;

RadarScenario checked(const ScenarioSpec& spec) {
  RadarScenario s = spec.to_scenario();
  validate_scenario(s);
  return s;
}

bounds::AdvantageOptions advantage_options(const RunConfig& c) {
  bounds::AdvantageOptions o;
  o.numerical = c.compute.numerical;
  o.qcb.truncation = c.grid.k_max;
  o.qcb.bin_cap = c.grid.bin_cap;
  o.qcb.s_policy = c.compute.s_policy;
  o.zzb.quadrature.rel_tol = c.compute.zzb_rel_tol;
  return o;
}

// Scenario at one sweep point. An snr_db axis retunes N_S.
RadarScenario sweep_point(const RunConfig& c, double v) {
  if (c.sweep.axis == "snr_db") {
    RadarScenario s = checked(c.scenario);
    s.per_mode_brightness = env::brightness_for_snr(s, env::from_db(v));
    return s;
  }
  return checked(with_axis(c.scenario, c.sweep.axis, v));
}

void start_table(CsvTable& t, const std::string& name, const RunConfig& c) {
  t.metadata.push_back(std::string("qradar ") + QRADAR_VERSION);
  t.metadata.push_back("subcommand " + name);
  t.metadata.push_back("config " + to_json(c).dump());
}

void label_zzb(CsvTable& t, bool numerical) {
  t.metadata.push_back(std::string("zzb QCB-substituted ZZB, ") + (numerical ? "numerical" : "asymptotic") + " QCB");
}

// ---------------------------------------------------------------- planck

CsvTable planck(const RunConfig& c, std::size_t) {
  CsvTable t;
  start_table(t, "planck", c);
  t.add_column("frequency_ghz", false);
  for (double temp : c.planck.temperatures_k) t.add_column("n_b_" + format_number(temp) + "k", true);
  t.log_x = true;
  t.log_y = true;
  for (double f : c.planck.frequency_ghz.values()) {
    Row r{f};
    for (double temp : c.planck.temperatures_k) r.push_back(env::planck_occupation(kTwoPi * 1e9 * f, temp));
    t.rows.push_back(std::move(r));
  }
  return t;
}

// ---------------------------------------------------------------- bounds-sweep

CsvTable bounds_sweep(const RunConfig& c, std::size_t workers) {
  CsvTable t;
  start_table(t, "bounds-sweep", c);
  label_zzb(t, c.compute.numerical);
  const bool snr_axis = c.sweep.axis == "snr_db";
  if (!snr_axis) t.add_column(c.sweep.axis, false);
  for (const char* n : {"snr_db", "n_s", "ccrb", "qcrb", "czzb", "qzzb", "qzzb_small_prior"}) t.add_column(n, false);
  for (const char* n : {"ccrb_norm", "qcrb_norm", "czzb_norm", "qzzb_norm", "qzzb_small_prior_norm"})
    t.add_column(n, true);
  t.add_column("is_threshold", false);
  t.log_y = true;

  std::vector<double> xs = c.sweep.range.values();
  std::vector<char> marks(xs.size(), 0);
  if (snr_axis) {
    const auto th = bounds::snr_threshold(checked(c.scenario));
    t.metadata.push_back("snr_threshold_db " + format_number(th.snr_db));
    const auto pos = std::upper_bound(xs.begin(), xs.end(), th.snr_db) - xs.begin();
    xs.insert(xs.begin() + pos, th.snr_db);
    marks.insert(marks.begin() + pos, 1);
  }
  const auto options = advantage_options(c);
  t.rows = parallel_map<Row>(xs.size(), workers, [&](std::size_t i) {
    const RadarScenario s = sweep_point(c, xs[i]);
    const double ref = bounds::reference_variance(s.prior_width);
    const double ccrb = bounds::crb(s, RadarKind::Classical);
    const double qcrb = bounds::crb(s, RadarKind::Quantum);
    const double czzb = bounds::dual_zzb(s, RadarKind::Classical, options).variance;
    const double qzzb = bounds::dual_zzb(s, RadarKind::Quantum, options).variance;
    auto small = options;
    small.zzb.mode = bounds::ZzbMode::SmallPrior;
    const double qsmall = bounds::dual_zzb(s, RadarKind::Quantum, small).variance;
    Row r;
    if (!snr_axis) r.push_back(xs[i]);
    for (double v : {env::snr_db(s), s.per_mode_brightness, ccrb, qcrb, czzb, qzzb, qsmall}) r.push_back(v);
    for (double v : {ccrb, qcrb, czzb, qzzb, qsmall}) r.push_back(v / ref);
    r.push_back(marks[i]);
    return r;
  });
  return t;
}

// ---------------------------------------------------------------- advantage-map

CsvTable advantage_map(const RunConfig& c, std::size_t workers) {
  CsvTable t;
  start_table(t, "advantage-map", c);
  label_zzb(t, c.compute.numerical);
  for (const char* n : {"target_range_m", "pulse_duration_s", "transmissivity", "n_s", "snr_th_db", "czzb", "qzzb",
                        "advantage_db"})
    t.add_column(n, false);
  const auto ls = c.advantage_map.ranges_m.values();
  const auto ts = c.advantage_map.pulse_durations_s.values();
  const auto options = advantage_options(c);
  t.rows = parallel_map<Row>(ls.size() * ts.size(), workers, [&](std::size_t i) {
    ScenarioSpec spec = c.scenario;
    spec.target_range_m = ls[i / ts.size()];
    spec.pulse_duration_s = ts[i % ts.size()];
    const RadarScenario s = checked(spec);
    const auto a = bounds::quantum_advantage(s, options);
    return Row{spec.target_range_m, spec.pulse_duration_s, s.transmissivity, a.tuned_brightness,
               a.threshold.snr_db,  a.czzb,                a.qzzb,           a.advantage_db};
  });
  t.heatmap = HeatmapLayout{0, 1, 7, ls.size(), ts.size(), c.advantage_map.pulse_durations_s.log};
  return t;
}

// ---------------------------------------------------------------- chernoff-s

CsvTable chernoff_s(const RunConfig& c, std::size_t workers) {
  CsvTable t;
  start_table(t, "chernoff-s", c);
  const auto& sets = c.chernoff_s.sets;
  t.add_column("s", false);
  for (std::size_t k = 0; k < sets.size(); ++k) t.add_column("p_set" + std::to_string(k + 1), true);
  for (std::size_t k = 0; k < sets.size(); ++k) t.add_column("argmin_s_set" + std::to_string(k + 1), false);
  const auto svals = c.chernoff_s.s.values();
  const double offset = kTwoPi * 1e9 * c.chernoff_s.offset_ghz;
  const double zeta = c.chernoff_s.zeta_rad;

  struct Column {
    std::vector<double> values;
    double argmin = 0.5;
  };
  const auto cols = parallel_map<Column>(sets.size(), workers, [&](std::size_t k) {
    ScenarioSpec spec = c.scenario;
    spec.transmissivity = sets[k].transmissivity;
    spec.antenna_area_m2.reset();
    spec.cross_section_m2.reset();
    spec.pulse_duration_s = sets[k].pulse_duration_s;
    spec.per_mode_brightness = sets[k].per_mode_brightness;
    const RadarScenario s = checked(spec);
    const double phi = s.target_angle;
    const PreparedState first = prepare_dual(c.chernoff_s.kind, s, offset, phi);
    const PreparedState second = prepare_dual(c.chernoff_s.kind, s, offset, phi + zeta);
    Column col;
    for (double sv : svals) col.values.push_back(std::exp(log_qcb_term(first, second, sv)));
    col.argmin = qcb_bin(first, second, SPolicy::Optimize).optimal_s;
    return col;
  });
  for (std::size_t i = 0; i < svals.size(); ++i) {
    Row r{svals[i]};
    for (const auto& col : cols) r.push_back(col.values[i]);
    for (const auto& col : cols) r.push_back(col.argmin);
    t.rows.push_back(std::move(r));
  }
  return t;
}

// ---------------------------------------------------------------- occupancy

double chi_for(double ratio, double diameter, bool far_field, const ScenarioSpec& sc, std::string* note) {
  if (far_field) return 4.0 / (ratio * ratio);
  const auto g = aperture_geometry(diameter, diameter / ratio, sc.target_range_m, kTwoPi * 1e9 * sc.carrier_ghz);
  if (note)
    *note = "aperture ratio " + format_number(ratio) + ": chi " + format_number(g.chi) + ", fresnel_number " +
            format_number(g.fresnel_number);
  return g.chi;
}

CsvTable occupancy(const RunConfig& c, std::size_t) {
  CsvTable t;
  start_table(t, "occupancy", c);
  t.add_column("angle_rad", false);
  std::vector<double> chis;
  for (double ratio : c.occupancy.aperture_ratios) {
    std::string note;
    chis.push_back(chi_for(ratio, c.occupancy.aperture_diameter_m, c.occupancy.far_field, c.scenario, &note));
    if (!note.empty()) t.metadata.push_back(note);
    const std::string tag = "_ratio" + format_number(ratio);
    for (const char* p : {"p00", "p10", "p01"}) t.add_column(p + tag, true);
  }
  for (double a : c.occupancy.angle_rad.values()) {
    Row r{a};
    for (double chi : chis)
      for (auto [n, m] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}}) r.push_back(hg_occupation(n, m, a, chi));
    t.rows.push_back(std::move(r));
  }
  return t;
}

// ---------------------------------------------------------------- single-receiver

CsvTable single_receiver(const RunConfig& c, std::size_t workers) {
  CsvTable t;
  start_table(t, "single-receiver", c);
  // single-receiver error probabilities are always the closed form
  label_zzb(t, false);
  const auto& sr = c.single_receiver;
  std::string note;
  const double chi = sr.chi ? *sr.chi : chi_for(sr.aperture_ratio, sr.aperture_diameter_m, sr.far_field, c.scenario, &note);
  t.metadata.push_back("chi " + format_number(chi));
  if (!note.empty()) t.metadata.push_back(note);
  const bool snr_axis = c.sweep.axis == "snr_db";
  if (!snr_axis) t.add_column(c.sweep.axis, false);
  const std::vector<const char*> names{"ccrb", "qcrb", "czzb", "czzb_small_prior", "qzzb", "qzzb_small_prior"};
  t.add_column("snr_db", false);
  for (const char* n : names) t.add_column(n, false);
  for (const char* n : names) t.add_column(std::string(n) + "_norm", true);
  t.log_y = true;
  const auto xs = c.sweep.range.values();
  const auto aperture = aperture_from_chi(chi);
  t.rows = parallel_map<Row>(xs.size(), workers, [&](std::size_t i) {
    const RadarScenario s = sweep_point(c, xs[i]);
    const double ref = bounds::reference_variance(s.prior_width);
    const auto cl = bounds::single_receiver_bounds(s, aperture, RadarKind::Classical);
    const auto qu = bounds::single_receiver_bounds(s, aperture, RadarKind::Quantum);
    const std::vector<double> v{cl.crb, qu.crb, cl.zzb_full.variance, cl.zzb_small_prior.variance,
                                qu.zzb_full.variance, qu.zzb_small_prior.variance};
    Row r;
    if (!snr_axis) r.push_back(xs[i]);
    r.push_back(env::snr_db(s));
    for (double x : v) r.push_back(x);
    for (double x : v) r.push_back(x / ref);
    return r;
  });
  return t;
}

using Command = std::function<CsvTable(const RunConfig&, std::size_t)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"planck", planck},           {"bounds-sweep", bounds_sweep},       {"advantage-map", advantage_map},
      {"chernoff-s", chernoff_s},   {"occupancy", occupancy},             {"single-receiver", single_receiver},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"planck",     "bounds-sweep", "advantage-map",
                                              "chernoff-s", "occupancy",    "single-receiver"};
  return names;
}

CsvTable run_subcommand(const std::string& name, const RunConfig& config, std::size_t workers) {
  const auto it = commands().find(name);
  if (it == commands().end()) throw ConfigError("subcommand: unknown name " + name);
  return it->second(config, workers);
}

}  // namespace qradar::cli
