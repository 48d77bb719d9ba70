#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "qradar/env_model.hpp"
#include "qradar/gaussian.hpp"
#include "qradar/mode_sorter.hpp"
#include "qradar/numerics.hpp"

namespace qradar::bounds {

// ---------------------------------------------------------------- fidelity / QFI

struct FidelityApprox {
  double theta = 0.0;
  double classical = 1.0;  // 1 - kappa S Theta / N_B
  double quantum = 1.0;    // 1 - 2 kappa S Theta / N_B
};

/// Per-mode Theta for the pair (angle, angle + eps) at offset Omega.
FidelityApprox theta_fidelity(double angle, double eps, double offset, const RadarScenario& scenario);

/// Upsilon at the scenario's target and compensation angles.
double upsilon(const RadarScenario& scenario);

double qfi_per_mode(double angle, double offset, const RadarScenario& scenario, RadarKind kind);

struct QfiTotal {
  double qfi = 0.0;            // closed form, 2 SNR Upsilon (classical) or 4 SNR Upsilon
  double upsilon = 0.0;
  double integrated_qfi = 0.0;  // T_d / 2 pi * integral of the per-mode QFI over +-k_max Delta omega
  double discrepancy = 0.0;     // |integrated - closed| / closed
};

QfiTotal qfi_total(const RadarScenario& scenario, RadarKind kind,
                   double truncation = kDefaultTruncation);

/// 1 / QFI. Requires phi_c == phi; throws DomainError otherwise.
double crb(const RadarScenario& scenario, RadarKind kind);

// ---------------------------------------------------------------- Chernoff

/// Band-averaged Theta used by the asymptotic bound.
double theta_bar(double angle, double zeta, const RadarScenario& scenario);

/// log of (1/2) exp(-SNR Theta_bar / 2) (classical) or (1/2) exp(-2 SNR Theta_bar).
double log_qcb_asymptotic(double angle, double zeta, const RadarScenario& scenario, RadarKind kind);
double qcb_asymptotic(double angle, double zeta, const RadarScenario& scenario, RadarKind kind);

/// True when kappa <= 1e-2, N_S <= 0.1 and N_B >= 10; logs a warning otherwise.
bool asymptotic_regime(const RadarScenario& scenario, bool warn = true);

struct QcbNumericalOptions {
  double truncation = kDefaultTruncation;
  std::size_t bin_cap = kDefaultBinCap;
  bool force_continuous = false;
  SPolicy s_policy = SPolicy::Optimize;
  numerics::NestedOptions nested{17, 2049, 1e-7, 0.0};
  double log_abs_tol = 1e-6;  // absolute tolerance on the total log-bound
};

struct QcbTotal {
  double log_bound = -std::numbers::ln2;
  double bound = 0.5;
  bool continuous = false;
  std::size_t mode_count = 0;
  std::size_t bin_evaluations = 0;
  double quadrature_error = 0.0;  // on the log-bound, continuous mode only
  double min_optimal_s = 0.5;
  double max_optimal_s = 0.5;
};

/// Product over frequency bins of per-bin Chernoff bounds, kept in log form.
/// Holds a cache of hypothesis-one states keyed on the last angle, so reuse
/// one instance per thread when sweeping zeta at fixed angle.
class NumericalQcb {
 public:
  NumericalQcb(const RadarScenario& scenario, RadarKind kind, QcbNumericalOptions options = {});

  QcbTotal evaluate(double angle, double zeta);
  const SpectralGrid& grid() const { return grid_; }

 private:
  PreparedState state(double offset, double angle) const;
  const PreparedState& first_state(std::size_t index, double offset, double angle);

  RadarScenario scenario_;
  RadarKind kind_;
  QcbNumericalOptions options_;
  SpectralGrid grid_;
  double cached_angle_ = std::numeric_limits<double>::quiet_NaN();
  std::vector<PreparedState> cache_;
  std::vector<char> cached_;
};

QcbTotal qcb_numerical(double angle, double zeta, const RadarScenario& scenario, RadarKind kind,
                       const QcbNumericalOptions& options = {});

// ---------------------------------------------------------------- Ziv-Zakai

enum class ZzbMode { Full, SmallPrior };
enum class PriorAnchor {
  Center,    // Pr(phi; phi + zeta)
  Midpoint,  // Pr(phi - zeta/2; phi + zeta/2), stays inside the prior
};

using ErrorProbability = std::function<double(double x, double zeta)>;

struct ZzbOptions {
  ZzbMode mode = ZzbMode::Full;
  PriorAnchor anchor = PriorAnchor::Center;
  numerics::AdaptiveOptions quadrature{1e-4, 0.0, 2000};
  std::vector<double> zeta_breakpoints;  // optional hints inside (0, prior_width)
};

struct ZzbResult {
  double variance = 0.0;
  double normalized = 0.0;  // variance / (prior_width^2 / 12)
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Uniform prior on [center - w/2, center + w/2]. Throws NumericalError when
/// the tolerance is not met and DomainError when Pr leaves [0, 1/2].
ZzbResult zzb(const ErrorProbability& pr, double center, double prior_width, const ZzbOptions& options = {});

/// Breakpoint hints for zeta: geometric around the exponential knee and
/// half sidelobe periods out to the spectral damping length.
std::vector<double> zeta_breakpoints(const RadarScenario& scenario, double snr, double prior_width);

inline double reference_variance(double prior_width) { return prior_width * prior_width / 12.0; }

// ---------------------------------------------------------------- threshold / advantage

/// Inverse of y exp(-y) on the branch y > 1, by bisection on [1, 700].
double g_inverse(double x);

struct ThresholdResult {
  double snr = 0.0;
  double snr_db = 0.0;
  double upsilon = 0.0;
  double reference_variance = 0.0;
};

ThresholdResult snr_threshold(const RadarScenario& scenario);

struct Asymptotes {
  double high_snr = 0.0;       // 1 / (4 Upsilon SNR)
  double low_snr_floor = 0.0;  // ref * exp(-4 SNR)
};

Asymptotes zzb_asymptotes(const RadarScenario& scenario);

struct AdvantageOptions {
  bool numerical = false;
  QcbNumericalOptions qcb;
  ZzbOptions zzb;
};

struct AdvantageResult {
  double advantage_db = 0.0;
  double czzb = 0.0;
  double qzzb = 0.0;
  double tuned_brightness = 0.0;
  ThresholdResult threshold;
  std::size_t evaluations = 0;
};

/// N_S is retuned so that SNR = SNR_th; both ZZBs use `options.zzb`.
AdvantageResult quantum_advantage(const RadarScenario& scenario, const AdvantageOptions& options = {});

/// ZZB of one radar kind at the scenario as given.
ZzbResult dual_zzb(const RadarScenario& scenario, RadarKind kind, const AdvantageOptions& options);

// ---------------------------------------------------------------- single receiver

struct SingleReceiverCrb {
  double bracket = 0.0;  // sin^2 + cos^2 P1'^2 / (P1 (1 - P1))
  double ccrb = 0.0;
  double qcrb = 0.0;
};

/// phi_c = 0. Throws DomainError when P1 is 0 or 1 at this angle.
SingleReceiverCrb single_receiver_crb(double angle, double chi, double snr);

double gamma_single(double x, double zeta, double chi);

/// (1/2) exp(-SNR Gamma / 4) classical, (1/2) exp(-SNR Gamma) quantum.
double single_receiver_qcb(double x, double zeta, double chi, double snr, RadarKind kind);

struct SingleReceiverBounds {
  double crb = 0.0;
  ZzbResult zzb_small_prior;
  ZzbResult zzb_full;
};

SingleReceiverBounds single_receiver_bounds(const RadarScenario& scenario, const ApertureGeometry& aperture,
                                            RadarKind kind);

}  // namespace qradar::bounds
