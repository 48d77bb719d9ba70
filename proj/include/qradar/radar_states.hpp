#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qradar/env_model.hpp"
#include "qradar/gaussian.hpp"
#include "qradar/mode_sorter.hpp"

namespace qradar {

/// Receiver phases at frequency omega_0 + offset for a target at `angle`.
/// xi_minus/xi_plus drive the classical mean, phi_minus/phi_plus the quantum CM.
struct PhaseSet {
  double xi_minus = 0.0;
  double xi_plus = 0.0;
  double phi_minus = 0.0;
  double phi_plus = 0.0;

  /// phi_plus - phi_minus, computed without the large common term.
  double differential = 0.0;
};

PhaseSet phase_set(const RadarScenario& scenario, double offset, double angle);

/// R_theta = Re[e^{i theta}(Z - iX)] = [[cos, sin], [sin, -cos]].
Eigen::Matrix2d r_block(double theta);
/// W_theta = Re[e^{i theta}(I + Y)] = [[cos, sin], [-sin, cos]].
Eigen::Matrix2d w_block(double theta);

/// Two receiver modes: cov (2 N_B + 1) I4, mean 2 sqrt(S kappa_eff)(cos xi-, sin xi-, cos xi+, sin xi+).
GaussianState dual_classical_state(const RadarScenario& scenario, double offset, double angle);
inline GaussianState dual_classical_state(const RadarScenario& scenario, double offset) {
  return dual_classical_state(scenario, offset, scenario.target_angle);
}

/// Idler, receiver 1, receiver 2; zero mean.
GaussianState dual_quantum_state(const RadarScenario& scenario, double offset, double angle);
inline GaussianState dual_quantum_state(const RadarScenario& scenario, double offset) {
  return dual_quantum_state(scenario, offset, scenario.target_angle);
}

GaussianState dual_state(RadarKind kind, const RadarScenario& scenario, double offset, double angle);

/// Same state, already in Williamson form. The quantum case is decomposed in
/// closed form: local phase rotations, a 50:50 mix of the receivers, then a
/// two-mode squeezed thermal pair plus one thermal mode.
PreparedState prepare_dual(RadarKind kind, const RadarScenario& scenario, double offset, double angle);

struct Cascade {
  std::vector<double> eta;
  std::vector<Eigen::Matrix4d> mixers;  // [[sqrt(eta), sqrt(1-eta)], [-sqrt(1-eta), sqrt(eta)]] (x) I2
};

/// Throws DomainError naming the stage when the light is already exhausted.
Cascade beamsplitter_cascade(std::span<const double> occupancies);

/// Fundamental and residual modes behind a k = 1 sorter. The pointing is
/// fixed at phi_c = 0 whatever the scenario says; `overall_phase` is Xi.
GaussianState single_receiver_classical_state(const RadarScenario& scenario,
                                              const ApertureGeometry& aperture, double angle,
                                              double offset, double overall_phase = 0.0);

/// Idler, fundamental, residual.
GaussianState single_receiver_quantum_state(const RadarScenario& scenario,
                                            const ApertureGeometry& aperture, double angle,
                                            double offset, double overall_phase = 0.0);

}  // namespace qradar
