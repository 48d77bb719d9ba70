#include "qradar/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qradar/errors.hpp"
#include "qradar/numerics.hpp"

namespace qradar {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kConditionLimit = 1e12;
constexpr double kPhysicalTol = 1e-6;
const double kLogHalf = std::log(0.5);

Eigen::MatrixXd omega_form(int modes) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < modes; ++j) {
    w(2 * j, 2 * j + 1) = 1.0;
    w(2 * j + 1, 2 * j) = -1.0;
  }
  return w;
}

double symmetry_residual(const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

template <class M>
struct Decomposition {
  Eigen::Matrix<double, Eigen::Dynamic, 1, 0, M::MaxRowsAtCompileTime, 1> lambda;  // descending
  M symplectic;
};

// cov = S diag(lambda (x) I2) S^T. With V^{-1/2} Omega V^{-1/2} = O (+) mu_j J O^T,
// S = V^{1/2} O D^{-1/2} and lambda_j = 1 / mu_j. The orthogonal O comes from
// the Hermitian eigenvectors of i V^{-1/2} Omega V^{-1/2}: for v = x + i y with
// eigenvalue mu > 0 the columns sqrt(2) y, sqrt(2) x are orthonormal even when
// mu is degenerate.
template <class M>
Decomposition<M> decompose(const M& cov, bool want_symplectic) {
  using V = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, M::MaxRowsAtCompileTime, 1>;
  using C = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, 0,
                          M::MaxRowsAtCompileTime, M::MaxColsAtCompileTime>;
  const int dim = static_cast<int>(cov.rows());
  if (dim == 0 || dim % 2 != 0 || cov.cols() != dim)
    throw DomainError("williamson: covariance must be square with even dimension");
  const int modes = dim / 2;

  Eigen::SelfAdjointEigenSolver<M> sym(cov);
  if (sym.info() != Eigen::Success) throw NumericalError("williamson: symmetric eigensolver failed");
  const V ev = sym.eigenvalues();
  if (!(ev(0) > 0.0)) {
    std::ostringstream os;
    os << "williamson: covariance is not positive definite (min eigenvalue " << ev(0) << ")";
    throw DomainError(os.str());
  }
  const double cond = ev(dim - 1) / ev(0);
  if (cond > kConditionLimit) {
    std::ostringstream os;
    os << "williamson: covariance is ill-conditioned (condition number " << cond << " > 1e12)";
    throw NumericalError(os.str());
  }
  const M& u = sym.eigenvectors();
  const V root = ev.cwiseSqrt();
  const M inv_half = u * root.cwiseInverse().asDiagonal() * u.transpose();

  const M m = inv_half * M(omega_form(modes)) * inv_half;
  const C h = std::complex<double>(0.0, 1.0) * m.template cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<C> herm(h, want_symplectic ? Eigen::ComputeEigenvectors
                                                              : Eigen::EigenvaluesOnly);
  if (herm.info() != Eigen::Success) throw NumericalError("williamson: Hermitian eigensolver failed");

  // Eigenvalues come ascending as (-mu_max .. -mu_min, mu_min .. mu_max); the
  // upper half holds mu > 0 in ascending order, i.e. lambda descending.
  Decomposition<M> out;
  out.lambda.resize(modes);
  for (int j = 0; j < modes; ++j) out.lambda(j) = 1.0 / herm.eigenvalues()(modes + j);
  if (!want_symplectic) return out;

  M o(dim, dim);
  const double r2 = std::sqrt(2.0);
  for (int j = 0; j < modes; ++j) {
    const auto v = herm.eigenvectors().col(modes + j);
    o.col(2 * j) = r2 * v.imag();
    o.col(2 * j + 1) = r2 * v.real();
  }
  const M half = u * root.asDiagonal() * u.transpose();
  V scale(dim);
  for (int j = 0; j < modes; ++j) scale(2 * j) = scale(2 * j + 1) = 1.0 / std::sqrt(out.lambda(j));
  out.symplectic = half * o * scale.asDiagonal();
  return out;
}

// log of 1 - r^s for r in [0, 1), as log(-expm1(s log r)); exact 0 at r = 0.
double log_one_minus_pow(double r, double s) {
  if (r == 0.0) return 0.0;
  return std::log(-std::expm1(s * std::log(r)));
}

bool same_state(const PreparedState& a, const PreparedState& b) {
  return a.mean == b.mean && a.eigenvalues == b.eigenvalues && a.symplectic == b.symplectic;
}

}  // namespace

GaussianState GaussianState::vacuum(int modes) {
  return {Eigen::VectorXd::Zero(2 * modes), Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

GaussianState GaussianState::thermal(int modes, double occupation) {
  return {Eigen::VectorXd::Zero(2 * modes),
          (2.0 * occupation + 1.0) * Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

GaussianState GaussianState::coherent(double re_alpha, double im_alpha) {
  GaussianState s = vacuum(1);
  s.mean << 2.0 * re_alpha, 2.0 * im_alpha;
  return s;
}

Eigen::MatrixXd symplectic_form(int modes) { return omega_form(modes); }

StateDiagnostics validate_state(const GaussianState& state) {
  StateDiagnostics d;
  const auto& cov = state.cov;
  if (cov.rows() == 0 || cov.rows() != cov.cols() || cov.rows() % 2 != 0) {
    d.message = "covariance must be square with even dimension";
    return d;
  }
  if (state.mean.size() != cov.rows()) {
    d.message = "mean length does not match covariance dimension";
    return d;
  }
  d.symmetry_residual = symmetry_residual(cov);
  if (d.symmetry_residual > kSymmetryTol) {
    std::ostringstream os;
    os << "covariance is not symmetric (residual " << d.symmetry_residual << ")";
    d.message = os.str();
    return d;
  }
  // Symmetrise before the eigen solve so round-off does not leak in.
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > 0.0)) {
    d.min_symplectic_eigenvalue = 0.0;
    d.message = "covariance is not positive definite";
    return d;
  }
  try {
    d.min_symplectic_eigenvalue = symplectic_eigenvalues(sym).minCoeff();
  } catch (const std::exception& e) {
    d.message = e.what();
    return d;
  }
  if (d.min_symplectic_eigenvalue < 1.0 - kPhysicalTol) {
    std::ostringstream os;
    os << "uncertainty principle violated: min symplectic eigenvalue " << d.min_symplectic_eigenvalue;
    d.message = os.str();
    return d;
  }
  d.passed = true;
  d.message = "ok";
  return d;
}

SymplecticSpectrum williamson(const Eigen::MatrixXd& cov) {
  if (symmetry_residual(cov) > kSymmetryTol) throw DomainError("williamson: covariance is not symmetric");
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  auto d = decompose(sym, true);
  return {d.lambda, d.symplectic};
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  return decompose(sym, false).lambda;
}

GFactors g_factors(double s, double y) {
  if (!(y >= 1.0)) throw DomainError("g_factors: y must be >= 1");
  const double a = std::pow(y + 1.0, s);
  const double b = std::pow(y - 1.0, s);
  return {std::sqrt(2.0) / (a + b), std::sqrt(2.0) / (a - b)};
}

double log_g_minus(double s, double y) {
  const double r = (y - 1.0) / (y + 1.0);
  return 0.5 * std::log(2.0) - s * std::log1p(y) - log_one_minus_pow(r, s);
}

double chernoff_ratio(double s, double y) {
  const double r = (y - 1.0) / (y + 1.0);
  if (r == 0.0) return 1.0;
  const double t = s * std::log(r);
  return (1.0 + std::exp(t)) / -std::expm1(t);
}

PreparedState prepare(const GaussianState& state) {
  const int dim = static_cast<int>(state.cov.rows());
  if (dim == 0 || dim > kMaxInlineDim || state.mean.size() != dim || state.cov.cols() != dim)
    throw DomainError("qcb: states must have one to three modes with matching mean");
  PreparedState p;
  p.mean = state.mean;
  const double c0 = state.cov(0, 0);
  if (state.cov.isApprox(c0 * Eigen::MatrixXd::Identity(dim, dim), 0.0) && c0 >= 1.0) {
    p.isotropic = true;
    p.eigenvalues = Vec::Constant(dim / 2, c0);
    p.symplectic = Mat::Identity(dim, dim);
    return p;
  }
  if (symmetry_residual(state.cov) > kSymmetryTol)
    throw DomainError("qcb: covariance is not symmetric");
  auto d = decompose(Mat(0.5 * (state.cov + state.cov.transpose())), true);
  if (d.lambda.minCoeff() < 1.0 - kPhysicalTol) {
    std::ostringstream os;
    os << "qcb: unphysical state, min symplectic eigenvalue " << d.lambda.minCoeff();
    throw DomainError(os.str());
  }
  // Round-off can leave lambda a hair below 1 for pure modes.
  p.eigenvalues = d.lambda.cwiseMax(1.0);
  p.symplectic = d.symplectic;
  return p;
}

double log_qcb_term(const PreparedState& first, const PreparedState& second, double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("qcb_term: s must lie in (0, 1)");
  const int dim = static_cast<int>(first.mean.size());
  if (second.mean.size() != dim) throw DomainError("qcb_term: mode counts differ");
  if (same_state(first, second)) return kLogHalf;
  const int modes = dim / 2;

  double log_k = 0.0;
  Vec d1(dim), d2(dim);
  for (int j = 0; j < modes; ++j) {
    const double l1 = first.eigenvalues(j);
    const double l2 = second.eigenvalues(j);
    log_k += log_g_minus(s, l1) + log_g_minus(1.0 - s, l2);
    d1(2 * j) = d1(2 * j + 1) = chernoff_ratio(s, l1);
    d2(2 * j) = d2(2 * j + 1) = chernoff_ratio(1.0 - s, l2);
  }

  Mat lambda(dim, dim);
  if (first.isotropic && second.isotropic) {
    lambda = (d1 + d2).asDiagonal();
  } else {
    lambda = first.symplectic * d1.asDiagonal() * first.symplectic.transpose() +
             second.symplectic * d2.asDiagonal() * second.symplectic.transpose();
  }
  Eigen::LLT<Mat> llt(lambda);
  if (llt.info() != Eigen::Success) throw NumericalError("qcb_term: combined matrix is not positive definite");
  const Vec delta = second.mean - first.mean;
  double log_det = 0.0;
  for (int i = 0; i < dim; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  const double quad = delta.dot(llt.solve(delta));

  return (modes - 1) * std::log(2.0) + log_k - 0.5 * log_det - 0.5 * quad;
}

double qcb_term(const GaussianState& first, const GaussianState& second, double s) {
  if (first.mean == second.mean && first.cov == second.cov) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("qcb_term: s must lie in (0, 1)");
    return 0.5;
  }
  return std::exp(log_qcb_term(prepare(first), prepare(second), s));
}

const std::vector<double>& s_scan_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g(33);
    for (int k = 1; k <= 33; ++k) g[k - 1] = k / 34.0;
    return g;
  }();
  return grid;
}

ChernoffResult qcb_bin(const PreparedState& first, const PreparedState& second, SPolicy policy) {
  ChernoffResult r;
  if (same_state(first, second)) {
    r.evaluations = 0;
    return r;
  }
  if (policy == SPolicy::Half) {
    r.log_bound = log_qcb_term(first, second, 0.5);
    r.optimal_s = 0.5;
    r.evaluations = 1;
  } else {
    auto f = [&](double s) { return log_qcb_term(first, second, s); };
    const auto m = numerics::grid_golden_minimize(f, s_scan_grid(), 1e-4, 0.5);
    r.log_bound = m.value;
    r.optimal_s = m.x;
    r.evaluations = m.evaluations;
  }
  r.log_bound = std::min(r.log_bound, kLogHalf);
  r.bound_value = std::exp(r.log_bound);
  return r;
}

ChernoffResult qcb_bin(const GaussianState& first, const GaussianState& second, SPolicy policy) {
  if (first.mean == second.mean && first.cov == second.cov) return ChernoffResult{};
  return qcb_bin(prepare(first), prepare(second), policy);
}

}  // namespace qradar
