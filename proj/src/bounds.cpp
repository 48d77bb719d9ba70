#include "qradar/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "qradar/constants.hpp"
#include "qradar/errors.hpp"
#include "qradar/log.hpp"
#include "qradar/radar_states.hpp"

namespace qradar::bounds {

namespace {

constexpr double kC = PhysicalConstants::light_speed;

// sin(a + e) - sin(a) without cancellation.
double sin_step(double a, double e) { return 2.0 * std::cos(a + 0.5 * e) * std::sin(0.5 * e); }

// cos a + cos b - 2 sqrt(cos a cos b) X, written as a square plus a non-negative
// remainder so it stays accurate when X is close to 1. one_minus_x = 1 - X.
double overlap_form(double ca, double cb, double one_minus_x) {
  const double diff = std::sqrt(ca) - std::sqrt(cb);
  return diff * diff + 2.0 * std::sqrt(ca * cb) * one_minus_x;
}

// 1 - exp(-u) cos(v), accurate for small u and v.
double one_minus_damped_cos(double u, double v) {
  const double h = std::sin(0.5 * v);
  return -std::expm1(-u) + std::exp(-u) * 2.0 * h * h;
}

void require_pointing(double angle, double phi_c, const char* who) {
  if (!(std::abs(angle - phi_c) < kPi / 2.0)) {
    std::ostringstream os;
    os << who << ": |angle - phi_c| must be below pi/2 (angle = " << angle << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------- fidelity / QFI

FidelityApprox theta_fidelity(double angle, double eps, double offset, const RadarScenario& s) {
  const double phi_c = s.compensation_angle;
  require_pointing(angle, phi_c, "theta_fidelity");
  require_pointing(angle + eps, phi_c, "theta_fidelity");
  const double ca = std::cos(angle - phi_c);
  const double cb = std::cos(angle + eps - phi_c);
  const double v = (s.carrier_angular_freq + offset) * s.receiver_separation / (2.0 * kC) * sin_step(angle, eps);
  const double h = std::sin(0.5 * v);
  FidelityApprox f;
  f.theta = overlap_form(ca, cb, 2.0 * h * h);
  const double sn = env::per_mode_brightness(offset, s);
  f.classical = 1.0 - s.transmissivity * sn * f.theta / s.noise_occupation;
  f.quantum = 1.0 - 2.0 * s.transmissivity * sn * f.theta / s.noise_occupation;
  return f;
}

double upsilon(const RadarScenario& s) {
  const double phi = s.target_angle;
  const double rel = phi - s.compensation_angle;
  require_pointing(phi, s.compensation_angle, "upsilon");
  const double w2 = s.carrier_angular_freq * s.carrier_angular_freq + s.bandwidth * s.bandwidth;
  const double cphi = std::cos(phi);
  const double t = std::tan(rel);
  const double d = s.receiver_separation;
  return 0.5 * std::cos(rel) * (d * d * w2 * cphi * cphi / (kC * kC) + t * t);
}

double qfi_per_mode(double angle, double offset, const RadarScenario& s, RadarKind kind) {
  require_pointing(angle, s.compensation_angle, "qfi_per_mode");
  const double omega = s.carrier_angular_freq + offset;
  const double d = s.receiver_separation;
  const double c = std::cos(angle);
  const double t = std::tan(angle - s.compensation_angle);
  const double v = env::per_mode_brightness(offset, s) * s.effective_transmissivity(angle) / s.noise_occupation *
                   (d * d * omega * omega * c * c / (kC * kC) + t * t);
  return kind == RadarKind::Quantum ? 2.0 * v : v;
}

QfiTotal qfi_total(const RadarScenario& s, RadarKind kind, double truncation) {
  QfiTotal q;
  q.upsilon = upsilon(s);
  const double factor = kind == RadarKind::Quantum ? 4.0 : 2.0;
  q.qfi = factor * env::snr(s) * q.upsilon;
  const double span = truncation * s.bandwidth;
  const std::vector<double> bp{-span, -s.bandwidth, 0.0, s.bandwidth, span};
  const auto r = numerics::integrate_adaptive(
      [&](double w) { return qfi_per_mode(s.target_angle, w, s, kind); }, bp, {1e-10, 0.0, 4000});
  q.integrated_qfi = s.pulse_duration / kTwoPi * r.value;
  q.discrepancy = q.qfi > 0.0 ? std::abs(q.integrated_qfi - q.qfi) / q.qfi : 0.0;
  return q;
}

double crb(const RadarScenario& s, RadarKind kind) {
  if (std::abs(s.target_angle - s.compensation_angle) > 1e-12)
    throw DomainError("crb: requires compensation_angle == target_angle");
  const QfiTotal q = qfi_total(s, kind);
  if (!(q.qfi > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / q.qfi;
}

// ---------------------------------------------------------------- Chernoff, asymptotic

double theta_bar(double angle, double zeta, const RadarScenario& s) {
  const double phi_c = s.compensation_angle;
  require_pointing(angle, phi_c, "theta_bar");
  require_pointing(angle + zeta, phi_c, "theta_bar");
  const double ca = std::cos(angle - phi_c);
  const double cb = std::cos(angle + zeta - phi_c);
  const double ds = sin_step(angle, zeta);
  const double d = s.receiver_separation;
  const double u = d * d * s.bandwidth * s.bandwidth * ds * ds / (8.0 * kC * kC);
  const double v = d * s.carrier_angular_freq * ds / (2.0 * kC);
  return overlap_form(ca, cb, one_minus_damped_cos(u, v));
}

double log_qcb_asymptotic(double angle, double zeta, const RadarScenario& s, RadarKind kind) {
  const double snr = env::snr(s);
  const double tb = theta_bar(angle, zeta, s);
  const double exponent = kind == RadarKind::Quantum ? 2.0 * snr * tb : 0.5 * snr * tb;
  return -std::numbers::ln2 - exponent;
}

double qcb_asymptotic(double angle, double zeta, const RadarScenario& s, RadarKind kind) {
  return std::exp(log_qcb_asymptotic(angle, zeta, s, kind));
}

bool asymptotic_regime(const RadarScenario& s, bool warn) {
  const bool ok = s.transmissivity <= 1e-2 && s.per_mode_brightness <= 0.1 && s.noise_occupation >= 10.0;
  if (!ok && warn)
    spdlog::warn("asymptotic QCB used outside kappa <= 1e-2, N_S <= 0.1, N_B >= 10 (kappa = {}, N_S = {}, N_B = {})",
                 s.transmissivity, s.per_mode_brightness, s.noise_occupation);
  return ok;
}

// ---------------------------------------------------------------- Chernoff, numerical

namespace {

constexpr std::size_t kExplicitCacheLimit = 8192;

// Samples per oscillation of the differential phase; sets the first Simpson level.
constexpr double kPointsPerCycle = 8.0;
constexpr double kBinNoise = 16.0 * std::numeric_limits<double>::epsilon();

std::size_t pow2_plus_one_at_least(double n, std::size_t cap) {
  std::size_t m = 17;
  while (m < cap && static_cast<double>(m) < n) m = 2 * (m - 1) + 1;
  return std::min(m, cap);
}

}  // namespace

NumericalQcb::NumericalQcb(const RadarScenario& scenario, RadarKind kind, QcbNumericalOptions options)
    : scenario_(scenario), kind_(kind), options_(options) {
  grid_ = env::build_grid(scenario.pulse_duration, scenario.bandwidth, options.truncation, options.bin_cap);
  if (options.force_continuous && !grid_.continuous_limit) {
    grid_.continuous_limit = true;
    grid_.offsets.clear();
  }
  std::size_t slots = 0;
  if (grid_.continuous_limit)
    slots = options_.nested.max_points;
  else if (grid_.mode_count <= kExplicitCacheLimit)
    slots = grid_.mode_count;
  cache_.resize(slots);
  cached_.assign(slots, 0);
}

PreparedState NumericalQcb::state(double offset, double angle) const {
  return prepare_dual(kind_, scenario_, offset, angle);
}

const PreparedState& NumericalQcb::first_state(std::size_t index, double offset, double angle) {
  if (!(angle == cached_angle_)) {
    std::fill(cached_.begin(), cached_.end(), 0);
    cached_angle_ = angle;
  }
  if (index >= cache_.size()) {
    // no slot: reuse the last one as scratch
    if (cache_.empty()) {
      cache_.resize(1);
      cached_.assign(1, 0);
    }
    cache_.back() = state(offset, angle);
    cached_.back() = 0;
    return cache_.back();
  }
  if (!cached_[index]) {
    cache_[index] = state(offset, angle);
    cached_[index] = 1;
  }
  return cache_[index];
}

QcbTotal NumericalQcb::evaluate(double angle, double zeta) {
  QcbTotal t;
  t.continuous = grid_.continuous_limit;
  t.mode_count = grid_.mode_count;
  require_pointing(angle, scenario_.compensation_angle, "qcb_numerical");
  require_pointing(angle + zeta, scenario_.compensation_angle, "qcb_numerical");
  if (zeta == 0.0) return t;

  double s_min = 1.0;
  double s_max = 0.0;
  auto bin = [&](std::size_t index, double offset) {
    const PreparedState& first = first_state(index, offset, angle);
    const PreparedState second = state(offset, angle + zeta);
    const ChernoffResult r = qcb_bin(first, second, options_.s_policy);
    ++t.bin_evaluations;
    s_min = std::min(s_min, r.optimal_s);
    s_max = std::max(s_max, r.optimal_s);
    return r.log_bound + std::numbers::ln2;  // log(2 P), <= 0
  };

  double sum = 0.0;
  if (!grid_.continuous_limit) {
    // Accumulate from the band edges inwards so tiny tail terms are not lost.
    const std::size_t n = grid_.offsets.size();
    std::vector<double> terms(n);
    for (std::size_t j = 0; j < n; ++j) terms[j] = bin(j, grid_.offsets[j]);
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](std::size_t l, std::size_t r) { return std::abs(terms[l]) < std::abs(terms[r]); });
    for (std::size_t j : order) sum += terms[j];
  } else {
    const double a = -grid_.half_span;
    const double b = grid_.half_span;
    const double scale = scenario_.pulse_duration / kTwoPi;
    numerics::NestedOptions opts = options_.nested;
    const double freq = scenario_.receiver_separation * std::abs(sin_step(angle, zeta)) / (2.0 * kC);
    const double cycles = (b - a) * freq / kTwoPi;
    opts.min_points = std::max(opts.min_points, pow2_plus_one_at_least(kPointsPerCycle * cycles + 1.0, opts.max_points));
    // Each bin's log(2P) is only good to a few ulps, and there are scale * (b - a)
    // modes, so nearly identical hypotheses cannot be pinned down better than that.
    opts.abs_tol = std::max(options_.log_abs_tol / scale, kBinNoise * (b - a));
    const std::size_t last = opts.max_points - 1;
    auto f = [&](double w) {
      const double pos = (w - a) / (b - a) * static_cast<double>(last);
      const auto idx = static_cast<std::size_t>(std::llround(std::clamp(pos, 0.0, static_cast<double>(last))));
      return bin(idx, w);
    };
    const numerics::QuadratureResult r = numerics::integrate_nested(f, a, b, opts);
    if (!r.converged) {
      std::ostringstream os;
      os << "qcb_numerical: continuous-limit integral did not converge at angle " << angle << ", zeta " << zeta
         << " (" << r.describe() << ")";
      throw NumericalError(os.str());
    }
    sum = scale * r.value;
    t.quadrature_error = scale * r.error;
  }
  t.log_bound = std::min(-std::numbers::ln2 + sum, -std::numbers::ln2);
  t.bound = std::exp(t.log_bound);
  t.min_optimal_s = t.bin_evaluations ? s_min : 0.5;
  t.max_optimal_s = t.bin_evaluations ? s_max : 0.5;
  return t;
}

QcbTotal qcb_numerical(double angle, double zeta, const RadarScenario& s, RadarKind kind,
                       const QcbNumericalOptions& options) {
  NumericalQcb q(s, kind, options);
  return q.evaluate(angle, zeta);
}

// ---------------------------------------------------------------- Ziv-Zakai

namespace {

void check_probability(double p, double x, double zeta) {
  if (!(p >= 0.0 && p <= 0.5 + 1e-12)) {
    std::ostringstream os;
    os << "zzb: error probability " << p << " outside [0, 1/2] at x = " << x << ", zeta = " << zeta;
    throw DomainError(os.str());
  }
}

std::vector<double> partition(double lo, double hi, const std::vector<double>& hints) {
  std::vector<double> bp{lo};
  for (double h : hints)
    if (h > lo && h < hi) bp.push_back(h);
  bp.push_back(hi);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

[[noreturn]] void fail(const char* what, const numerics::QuadratureResult& r) {
  std::ostringstream os;
  os << "zzb: " << what << " did not reach tolerance (" << r.describe() << ")";
  throw NumericalError(os.str());
}

}  // namespace

ZzbResult zzb(const ErrorProbability& pr, double center, double width, const ZzbOptions& options) {
  if (!(width > 0.0)) throw DomainError("zzb: prior width must be positive");
  ZzbResult out;
  const double lo = center - 0.5 * width;
  const double hi = center + 0.5 * width;

  auto probability = [&](double x, double zeta) {
    const double p = pr(x, zeta);
    check_probability(p, x, zeta);
    ++out.evaluations;
    return p;
  };

  if (options.mode == ZzbMode::SmallPrior) {
    const auto bp = partition(0.0, width, options.zeta_breakpoints);
    const auto r = numerics::integrate_adaptive(
        [&](double zeta) {
          const double x = options.anchor == PriorAnchor::Midpoint ? center - 0.5 * zeta : center;
          return zeta * (1.0 - zeta / width) * probability(x, zeta);
        },
        bp, options.quadrature);
    if (!r.converged) fail("small-prior integral", r);
    out.variance = r.value;
    out.error_estimate = r.error;
  } else {
    // zeta outside, x inside: Pr varies slowly in x, so the inner rule
    // usually settles on its first panel.
    double inner_error = 0.0;
    auto inner = [&](double zeta) {
      const double top = hi - zeta;
      if (!(top > lo)) return 0.0;
      const auto r = numerics::integrate_adaptive([&](double x) { return probability(x, zeta); }, lo, top,
                                                  options.quadrature);
      if (!r.converged) fail("inner integral", r);
      inner_error = std::max(inner_error, zeta * r.error);
      return zeta * r.value;
    };
    const auto bp = partition(0.0, width, options.zeta_breakpoints);
    const auto r = numerics::integrate_adaptive(inner, bp, options.quadrature);
    if (!r.converged) fail("outer integral", r);
    out.variance = r.value / width;
    out.error_estimate = (r.error + inner_error * width) / width;
  }
  out.normalized = out.variance / reference_variance(width);
  return out;
}

std::vector<double> zeta_breakpoints(const RadarScenario& s, double snr, double width) {
  std::vector<double> bp;
  const double phi = s.target_angle;
  const double cphi = std::max(std::cos(phi), 1e-6);
  if (snr > 0.0) {
    const double knee = 1.0 / std::sqrt(snr * std::max(upsilon(s), 1e-300));
    for (double z = knee / 16.0; z < width && bp.size() < 40; z *= 2.0) bp.push_back(z);
  }
  const double period = 4.0 * kPi * kC / (s.carrier_angular_freq * s.receiver_separation * cphi);
  const double damping = std::sqrt(8.0) * kC / (s.receiver_separation * s.bandwidth * cphi);
  const double reach = std::min(width, 3.0 * damping);
  const std::size_t before = bp.size();
  for (double z = 0.5 * period; z < reach && bp.size() - before < 400; z += 0.5 * period) bp.push_back(z);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

// ---------------------------------------------------------------- threshold / advantage

double g_inverse(double x) {
  const double ymax = 700.0;
  if (!(x > 0.0) || !(x < std::exp(-1.0)))
    throw DomainError("threshold undefined: prior too tight or Upsilon too small");
  if (x < ymax * std::exp(-ymax)) throw DomainError("g_inverse: argument below the bisection range y <= 700");
  const double lx = std::log(x);
  auto h = [lx](double y) { return std::log(y) - y - lx; };
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-10; };
  const auto r = boost::math::tools::bisect(h, 1.0, ymax, tol);
  return 0.5 * (r.first + r.second);
}

ThresholdResult snr_threshold(const RadarScenario& s) {
  ThresholdResult t;
  t.upsilon = upsilon(s);
  t.reference_variance = reference_variance(s.prior_width);
  t.snr = g_inverse(1.0 / (t.upsilon * t.reference_variance)) / 4.0;
  t.snr_db = env::to_db(t.snr);
  return t;
}

Asymptotes zzb_asymptotes(const RadarScenario& s) {
  Asymptotes a;
  const double snr = env::snr(s);
  const double ref = reference_variance(s.prior_width);
  a.high_snr = snr > 0.0 ? 1.0 / (4.0 * upsilon(s) * snr) : std::numeric_limits<double>::infinity();
  a.low_snr_floor = ref * std::exp(-4.0 * snr);
  return a;
}

ZzbResult dual_zzb(const RadarScenario& s, RadarKind kind, const AdvantageOptions& options) {
  ZzbOptions zo = options.zzb;
  if (zo.zeta_breakpoints.empty()) zo.zeta_breakpoints = zeta_breakpoints(s, env::snr(s), s.prior_width);
  if (!options.numerical) {
    static std::atomic<bool> warned{false};
    if (!asymptotic_regime(s, false) && !warned.exchange(true)) asymptotic_regime(s, true);
    return zzb([&](double x, double zeta) { return qcb_asymptotic(x, zeta, s, kind); }, s.target_angle,
               s.prior_width, zo);
  }
  NumericalQcb q(s, kind, options.qcb);
  return zzb([&](double x, double zeta) { return q.evaluate(x, zeta).bound; }, s.target_angle, s.prior_width, zo);
}

AdvantageResult quantum_advantage(const RadarScenario& s, const AdvantageOptions& options) {
  AdvantageResult a;
  a.threshold = snr_threshold(s);
  RadarScenario tuned = s;
  tuned.per_mode_brightness = env::brightness_for_snr(s, a.threshold.snr);
  a.tuned_brightness = tuned.per_mode_brightness;
  const ZzbResult c = dual_zzb(tuned, RadarKind::Classical, options);
  const ZzbResult q = dual_zzb(tuned, RadarKind::Quantum, options);
  a.czzb = c.variance;
  a.qzzb = q.variance;
  a.evaluations = c.evaluations + q.evaluations;
  if (!(a.qzzb > 0.0)) throw NumericalError("quantum_advantage: QZZB underflowed to zero");
  a.advantage_db = env::to_db(a.czzb / a.qzzb);
  return a;
}

// ---------------------------------------------------------------- single receiver

SingleReceiverCrb single_receiver_crb(double angle, double chi, double snr) {
  const double p = hg_occupation(0, 0, angle, chi);
  const double q = 1.0 - p;
  if (!(p > 0.0 && q > 0.0)) {
    std::ostringstream os;
    os << "single_receiver_crb: P1 = " << p << " makes the CRB undefined at this angle (" << angle << ")";
    throw DomainError(os.str());
  }
  const double dp = occupancy_derivative(angle, chi);
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  SingleReceiverCrb r;
  r.bracket = sn * sn + c * c * dp * dp / (p * q);
  r.ccrb = 2.0 * c / (snr * r.bracket);
  r.qcrb = 0.5 * r.ccrb;
  return r;
}

double gamma_single(double x, double zeta, double chi) {
  auto side = [chi](double a, double& cosine, double& amplitude_angle) {
    if (std::abs(a) >= kPi / 2.0) {
      // grazing limit: no light reaches the aperture
      cosine = 0.0;
      amplitude_angle = kPi / 2.0;
      return;
    }
    cosine = std::max(std::cos(a), 0.0);
    const double p = std::clamp(hg_occupation(0, 0, a, chi), 0.0, 1.0);
    amplitude_angle = std::acos(std::sqrt(p));
  };
  double c1, t1, c2, t2;
  side(x, c1, t1);
  side(x + zeta, c2, t2);
  // sqrt(P P') + sqrt((1-P)(1-P')) = cos(t1 - t2)
  const double h = std::sin(0.5 * (t1 - t2));
  return overlap_form(c1, c2, 2.0 * h * h);
}

double single_receiver_qcb(double x, double zeta, double chi, double snr, RadarKind kind) {
  const double g = gamma_single(x, zeta, chi);
  const double exponent = kind == RadarKind::Quantum ? snr * g : 0.25 * snr * g;
  return 0.5 * std::exp(-exponent);
}

SingleReceiverBounds single_receiver_bounds(const RadarScenario& s, const ApertureGeometry& aperture,
                                            RadarKind kind) {
  const double snr = env::snr(s);
  const double chi = aperture.chi;
  SingleReceiverBounds b;
  const SingleReceiverCrb c = single_receiver_crb(s.target_angle, chi, snr);
  b.crb = kind == RadarKind::Quantum ? c.qcrb : c.ccrb;
  const ErrorProbability pr = [&](double x, double zeta) { return single_receiver_qcb(x, zeta, chi, snr, kind); };
  ZzbOptions small;
  small.mode = ZzbMode::SmallPrior;
  small.anchor = PriorAnchor::Midpoint;
  if (snr > 0.0) {
    const double knee = 1.0 / std::sqrt(snr * std::max(c.bracket, 1e-300));
    for (double z = knee / 16.0; z < s.prior_width && small.zeta_breakpoints.size() < 40; z *= 2.0)
      small.zeta_breakpoints.push_back(z);
  }
  b.zzb_small_prior = zzb(pr, s.target_angle, s.prior_width, small);
  ZzbOptions full = small;
  full.mode = ZzbMode::Full;
  full.anchor = PriorAnchor::Center;
  b.zzb_full = zzb(pr, s.target_angle, s.prior_width, full);
  return b;
}

}  // namespace qradar::bounds
