#include "qradar/radar_states.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qradar/constants.hpp"
#include "qradar/errors.hpp"

namespace qradar {

namespace {

double effective_kappa(const RadarScenario& s, double angle) {
  const double k = s.effective_transmissivity(angle);
  if (!(k >= 0.0)) throw DomainError("radar state: |angle - phi_c| must be below pi/2");
  return k;
}

void put(Eigen::MatrixXd& m, int row, int col, const Eigen::Matrix2d& block) {
  m.block<2, 2>(2 * row, 2 * col) = block;
}

}  // namespace

PhaseSet phase_set(const RadarScenario& s, double offset, double angle) {
  const double omega = s.carrier_angular_freq + offset;
  const double tau = s.time_of_flight();
  const double half_path = s.receiver_separation * std::sin(angle) / (2.0 * PhysicalConstants::light_speed);
  PhaseSet p;
  p.xi_minus = s.reflection_phase - omega * (tau - half_path);
  p.xi_plus = s.reflection_phase - omega * (tau + half_path);
  p.phi_minus = s.reflection_phase + omega * (tau - half_path);
  p.phi_plus = s.reflection_phase + omega * (tau + half_path);
  p.differential = 2.0 * omega * half_path;
  return p;
}

Eigen::Matrix2d r_block(double theta) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, sn, sn, -c;
  return r;
}

Eigen::Matrix2d w_block(double theta) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  Eigen::Matrix2d w;
  w << c, sn, -sn, c;
  return w;
}

GaussianState dual_classical_state(const RadarScenario& s, double offset, double angle) {
  const double kappa = effective_kappa(s, angle);
  const double amp = 2.0 * std::sqrt(env::per_mode_brightness(offset, s) * kappa);
  const PhaseSet p = phase_set(s, offset, angle);
  GaussianState st = GaussianState::thermal(2, s.noise_occupation);
  st.mean << amp * std::cos(p.xi_minus), amp * std::sin(p.xi_minus), amp * std::cos(p.xi_plus),
      amp * std::sin(p.xi_plus);
  return st;
}

GaussianState dual_quantum_state(const RadarScenario& s, double offset, double angle) {
  const double kappa = effective_kappa(s, angle);
  const double sn = env::per_mode_brightness(offset, s);
  const double sp = env::phase_sensitive_brightness(offset, s);
  const double a = 2.0 * sn + 1.0;
  const double b = 2.0 * s.noise_occupation + 2.0 * kappa * sn + 1.0;
  const double c = 2.0 * std::sqrt(kappa) * sp;
  const double d = a * kappa;
  const PhaseSet p = phase_set(s, offset, angle);

  GaussianState st;
  st.mean = Eigen::VectorXd::Zero(6);
  st.cov = Eigen::MatrixXd::Zero(6, 6);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  put(st.cov, 0, 0, a * id);
  put(st.cov, 1, 1, b * id);
  put(st.cov, 2, 2, b * id);
  put(st.cov, 0, 1, c * r_block(p.phi_minus));
  put(st.cov, 1, 0, c * r_block(p.phi_minus));
  put(st.cov, 0, 2, c * r_block(p.phi_plus));
  put(st.cov, 2, 0, c * r_block(p.phi_plus));
  put(st.cov, 1, 2, d * w_block(p.differential));
  put(st.cov, 2, 1, d * w_block(-p.differential));
  return st;
}

GaussianState dual_state(RadarKind kind, const RadarScenario& s, double offset, double angle) {
  return kind == RadarKind::Classical ? dual_classical_state(s, offset, angle)
                                      : dual_quantum_state(s, offset, angle);
}

namespace {

Eigen::Matrix2d rotation(double theta) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -sn, sn, c;
  return r;
}

}  // namespace

PreparedState prepare_dual(RadarKind kind, const RadarScenario& s, double offset, double angle) {
  PreparedState p;
  if (kind == RadarKind::Classical) {
    p.mean = dual_classical_state(s, offset, angle).mean;
    p.isotropic = true;
    p.eigenvalues = Vec::Constant(2, 2.0 * s.noise_occupation + 1.0);
    p.symplectic = Mat::Identity(4, 4);
    return p;
  }
  const double kappa = effective_kappa(s, angle);
  const double sn = env::per_mode_brightness(offset, s);
  const double a = 2.0 * sn + 1.0;
  const double b = 2.0 * s.noise_occupation + 2.0 * kappa * sn + 1.0;
  const double c = 2.0 * std::sqrt(kappa) * env::phase_sensitive_brightness(offset, s);
  const double d = a * kappa;
  const PhaseSet ph = phase_set(s, offset, angle);

  // Sum mode (b + d) pairs with the idler through sqrt(2) c; difference mode is thermal.
  const double bs = b + d;
  const double cs = std::sqrt(2.0) * c;
  const double sum = a + bs;
  const double root = std::sqrt((sum - 2.0 * cs) * (sum + 2.0 * cs));
  const double nu_idler = 0.5 * (root - (bs - a));
  const double nu_sum = 0.5 * (root + (bs - a));
  const double nu_diff = b - d;
  const double sh2 = 2.0 * cs * cs / ((sum + root) * root);
  const double sh = std::sqrt(sh2);
  const double ch = std::sqrt(1.0 + sh2);

  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d z;
  z << 1.0, 0.0, 0.0, -1.0;
  const double h = 1.0 / std::sqrt(2.0);
  const Eigen::Matrix2d rm = rotation(ph.phi_minus);
  const Eigen::Matrix2d rp = rotation(ph.phi_plus);

  Mat sm = Mat::Zero(6, 6);
  sm.block<2, 2>(0, 0) = ch * id;
  sm.block<2, 2>(0, 2) = sh * z;
  sm.block<2, 2>(2, 0) = h * sh * rm * z;
  sm.block<2, 2>(2, 2) = h * ch * rm;
  sm.block<2, 2>(2, 4) = -h * rm;
  sm.block<2, 2>(4, 0) = h * sh * rp * z;
  sm.block<2, 2>(4, 2) = h * ch * rp;
  sm.block<2, 2>(4, 4) = h * rp;

  // Descending order, carrying the column pairs along.
  std::array<std::pair<double, int>, 3> order{{{nu_idler, 0}, {nu_sum, 1}, {nu_diff, 2}}};
  std::stable_sort(order.begin(), order.end(), [](auto& l, auto& r) { return l.first > r.first; });
  p.mean = Vec::Zero(6);
  p.eigenvalues.resize(3);
  p.symplectic.resize(6, 6);
  for (int j = 0; j < 3; ++j) {
    p.eigenvalues(j) = std::max(order[j].first, 1.0);
    p.symplectic.middleCols<2>(2 * j) = sm.middleCols<2>(2 * order[j].second);
  }
  return p;
}

Cascade beamsplitter_cascade(std::span<const double> occupancies) {
  Cascade out;
  double used = 0.0;
  for (std::size_t j = 0; j < occupancies.size(); ++j) {
    const double pj = occupancies[j];
    if (!(pj >= 0.0)) throw DomainError("beamsplitter_cascade: occupancies must be non-negative");
    const double remaining = 1.0 - used;
    if (!(remaining > 0.0)) {
      std::ostringstream os;
      os << "beamsplitter_cascade: stage " << j + 1 << " receives no light (earlier stages took it all)";
      throw DomainError(os.str());
    }
    const double eta = j == 0 ? pj : pj / remaining;
    if (eta > 1.0 + 1e-12) throw DomainError("beamsplitter_cascade: occupancies sum above 1");
    const double t = std::sqrt(std::min(eta, 1.0));
    const double r = std::sqrt(std::max(0.0, 1.0 - eta));
    Eigen::Matrix2d mix;
    mix << t, r, -r, t;
    Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) b.block<2, 2>(2 * i, 2 * k) = mix(i, k) * Eigen::Matrix2d::Identity();
    out.eta.push_back(eta);
    out.mixers.push_back(b);
    used += pj;
  }
  return out;
}

namespace {

Eigen::Matrix4d fundamental_mixer(const ApertureGeometry& aperture, double angle) {
  const double p1 = hg_occupation(0, 0, angle, aperture.chi);
  return beamsplitter_cascade(std::span<const double>(&p1, 1)).mixers.front();
}

double single_kappa(const RadarScenario& s, double angle) {
  if (!(std::abs(angle) < kPi / 2.0)) throw DomainError("single receiver: |angle| must be below pi/2");
  return s.transmissivity * std::cos(angle);
}

}  // namespace

GaussianState single_receiver_classical_state(const RadarScenario& s, const ApertureGeometry& aperture,
                                              double angle, double offset, double overall_phase) {
  const double amp = 2.0 * std::sqrt(env::per_mode_brightness(offset, s) * single_kappa(s, angle));
  Eigen::Vector4d raw(amp * std::cos(overall_phase), amp * std::sin(overall_phase), 0.0, 0.0);
  GaussianState st = GaussianState::thermal(2, s.noise_occupation);
  st.mean = fundamental_mixer(aperture, angle) * raw;
  return st;
}

GaussianState single_receiver_quantum_state(const RadarScenario& s, const ApertureGeometry& aperture,
                                            double angle, double offset, double overall_phase) {
  const double kappa = single_kappa(s, angle);
  const double sn = env::per_mode_brightness(offset, s);
  const double a = 2.0 * sn + 1.0;
  const double b = 2.0 * s.noise_occupation + 2.0 * kappa * sn + 1.0;
  const double c = 2.0 * std::sqrt(kappa) * env::phase_sensitive_brightness(offset, s);

  Eigen::MatrixXd core = Eigen::MatrixXd::Zero(6, 6);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  put(core, 0, 0, a * id);
  put(core, 1, 1, b * id);
  put(core, 2, 2, b * id);
  put(core, 0, 1, c * r_block(overall_phase));
  put(core, 1, 0, c * r_block(overall_phase));

  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(6, 6);
  t.block<4, 4>(2, 2) = fundamental_mixer(aperture, angle);
  GaussianState st;
  st.mean = Eigen::VectorXd::Zero(6);
  st.cov = t * core * t.transpose();
  st.cov = 0.5 * (st.cov + st.cov.transpose());
  return st;
}

}  // namespace qradar
