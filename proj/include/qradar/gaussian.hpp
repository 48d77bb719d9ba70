#pragma once

#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qradar {

// Fixed-capacity storage for the Chernoff path (at most three modes).
inline constexpr int kMaxInlineDim = 6;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxInlineDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxInlineDim, kMaxInlineDim>;

/// Gaussian state in the q = a + a^dagger convention: vacuum has cov = I.
/// Quadrature order is (q1, p1, q2, p2, ...).
struct GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int mode_count() const { return static_cast<int>(cov.rows() / 2); }

  static GaussianState vacuum(int modes);
  static GaussianState thermal(int modes, double occupation);
  static GaussianState coherent(double re_alpha, double im_alpha);
};

struct SymplecticSpectrum {
  Eigen::VectorXd eigenvalues;  // descending, each >= 1 for a physical state
  Eigen::MatrixXd symplectic;   // cov = S diag(lambda (x) I2) S^T
};

struct StateDiagnostics {
  double symmetry_residual = 0.0;
  double min_symplectic_eigenvalue = 0.0;
  bool passed = false;
  std::string message;
};

/// Direct sum of n copies of [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int modes);

/// Never throws; `passed` is false for asymmetric or unphysical matrices.
StateDiagnostics validate_state(const GaussianState& state);

/// Williamson normal form. Throws DomainError for non-symmetric or
/// non-positive input and NumericalError when cond(cov) > 1e12.
SymplecticSpectrum williamson(const Eigen::MatrixXd& cov);

/// Symplectic eigenvalues only (sorted descending); cheaper than williamson().
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);

struct GFactors {
  double plus = 0.0;
  double minus = 0.0;
};

/// G^(+-)_s[y] = sqrt(2) / ((y + 1)^s +- (y - 1)^s).
GFactors g_factors(double s, double y);

/// log G^(-)_s[y], finite for y = 1.
double log_g_minus(double s, double y);

/// G^(-)_s[y] / G^(+)_s[y] = ((y+1)^s + (y-1)^s) / ((y+1)^s - (y-1)^s).
double chernoff_ratio(double s, double y);

/// One side of the Chernoff overlap: spectrum and symplectic matrix, ready
/// for repeated evaluation at different s.
struct PreparedState {
  Vec mean;
  Mat symplectic;
  Vec eigenvalues;
  bool isotropic = false;  // cov = lambda * I; symplectic is the identity
};

PreparedState prepare(const GaussianState& state);

/// log of (1/2) Tr[rho1^s rho2^(1-s)] for Gaussian states, 0 < s < 1.
/// Throws NumericalError if the combined matrix is not positive definite.
double log_qcb_term(const PreparedState& first, const PreparedState& second, double s);

/// (1/2) Tr[rho1^s rho2^(1-s)]: identical states give exactly 1/2.
double qcb_term(const GaussianState& first, const GaussianState& second, double s);

enum class SPolicy {
  Optimize,  // 33-point grid plus golden-section refinement to 1e-4
  Half,      // fixed s = 1/2
};

struct ChernoffResult {
  double bound_value = 0.5;  // (1/2) inf_s Tr[...], never above 1/2
  double log_bound = -std::numbers::ln2;  // log(bound_value), kept for tiny values
  double optimal_s = 0.5;
  std::size_t evaluations = 0;
};

ChernoffResult qcb_bin(const GaussianState& first, const GaussianState& second,
                       SPolicy policy = SPolicy::Optimize);
ChernoffResult qcb_bin(const PreparedState& first, const PreparedState& second,
                       SPolicy policy = SPolicy::Optimize);

/// The 33 interior points k / 34 used for the initial s scan.
const std::vector<double>& s_scan_grid();

}  // namespace qradar
