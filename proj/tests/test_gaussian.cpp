#include <cmath>
#include <random>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qradar/errors.hpp"
#include "qradar/gaussian.hpp"
#include "qradar/radar_states.hpp"
#include "scenarios.hpp"

using namespace qradar;
using doctest::Approx;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Random symplectic from phase rotations, single-mode squeezers and beamsplitters.
Eigen::MatrixXd random_symplectic(int modes, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> squeeze(-0.7, 0.7);
  std::uniform_int_distribution<int> pick(0, modes - 1);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  for (int step = 0; step < 3 * modes; ++step) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
    const int i = pick(rng);
    const double th = angle(rng), r = squeeze(rng);
    Eigen::Matrix2d rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    g.block<2, 2>(2 * i, 2 * i) = Eigen::Vector2d(std::exp(r), std::exp(-r)).asDiagonal() * rot;
    s = g * s;
    if (modes > 1) {
      int j = pick(rng);
      if (j == i) j = (i + 1) % modes;
      const double t = angle(rng);
      Eigen::MatrixXd b = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
      const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
      b.block<2, 2>(2 * i, 2 * i) = std::cos(t) * id;
      b.block<2, 2>(2 * j, 2 * j) = std::cos(t) * id;
      b.block<2, 2>(2 * i, 2 * j) = std::sin(t) * id;
      b.block<2, 2>(2 * j, 2 * i) = -std::sin(t) * id;
      s = b * s;
    }
  }
  return s;
}

Eigen::MatrixXd expand(const Eigen::VectorXd& lambda) {
  Eigen::VectorXd d(2 * lambda.size());
  for (int j = 0; j < lambda.size(); ++j) d(2 * j) = d(2 * j + 1) = lambda(j);
  return d.asDiagonal();
}

// Truncated Fock space. Real displacement and squeezing keep every matrix real.
struct Fock {
  int dim;
  Eigen::MatrixXd a;
  explicit Fock(int n) : dim(n), a(Eigen::MatrixXd::Zero(n, n)) {
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
  }
  // D(alpha) S(r) thermal(n) S^dag D^dag; q variance (2n+1) e^{-2r}, q mean 2 alpha
  Eigen::MatrixXd state(double alpha, double r, double nth) const {
    Eigen::MatrixXd th = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) th(k, k) = std::pow(nth, k) / std::pow(nth + 1.0, k + 1);
    const Eigen::MatrixXd ad = a.transpose();
    const Eigen::MatrixXd sq = (0.5 * r * (a * a - ad * ad)).exp();
    const Eigen::MatrixXd disp = (alpha * (ad - a)).exp();
    const Eigen::MatrixXd u = disp * sq;
    return u * th * u.transpose();
  }
};

Eigen::MatrixXd power(const Eigen::MatrixXd& rho, double s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
  // round-off eigenvalues of pure states would blow up under small powers
  const double floor = 1e-14 * es.eigenvalues().maxCoeff();
  const Eigen::VectorXd p = es.eigenvalues().unaryExpr([&](double v) { return v > floor ? std::pow(v, s) : 0.0; });
  return es.eigenvectors() * p.asDiagonal() * es.eigenvectors().transpose();
}

GaussianState gaussian(double alpha, double r, double nth) {
  GaussianState g = GaussianState::vacuum(1);
  g.mean << 2.0 * alpha, 0.0;
  g.cov = (2.0 * nth + 1.0) * Eigen::Vector2d(std::exp(-2.0 * r), std::exp(2.0 * r)).asDiagonal();
  return g;
}

}  // namespace

TEST_CASE("state validation") {
  const auto vac = validate_state(GaussianState::vacuum(1));
  CHECK(vac.passed);
  CHECK(vac.min_symplectic_eigenvalue == Approx(1.0));

  const auto th = validate_state(GaussianState::thermal(1, 32.0));
  CHECK(th.passed);
  CHECK(th.min_symplectic_eigenvalue == Approx(65.0));

  GaussianState half = GaussianState::vacuum(1);
  half.cov *= 0.5;
  const auto bad = validate_state(half);
  CHECK_FALSE(bad.passed);
  CHECK(bad.min_symplectic_eigenvalue == Approx(0.5));

  GaussianState skew = GaussianState::thermal(1, 1.0);
  skew.cov(0, 1) = 0.1;
  CHECK_FALSE(validate_state(skew).passed);

  const GaussianState v2 = GaussianState::vacuum(2);
  CHECK(v2.mean.isZero());
  CHECK(v2.cov.isIdentity());
  CHECK(symplectic_form(2)(0, 1) == 1.0);
  CHECK(symplectic_form(2)(3, 2) == -1.0);
}

TEST_CASE("williamson examples") {
  const auto id = williamson(Eigen::MatrixXd::Identity(4, 4));
  CHECK(id.eigenvalues.isApproxToConstant(1.0, 1e-12));
  CHECK(max_abs(id.symplectic * id.symplectic.transpose() - Eigen::MatrixXd::Identity(4, 4)) < 1e-12);

  const double ns = 0.1;
  const double a = 2 * ns + 1, c = 2 * std::sqrt(ns * (ns + 1));
  Eigen::MatrixXd tmsv(4, 4);
  tmsv << a, 0, c, 0, 0, a, 0, -c, c, 0, a, 0, 0, -c, 0, a;
  CHECK(tmsv.determinant() == Approx(1.0).epsilon(1e-12));
  const auto w = williamson(tmsv);
  CHECK(w.eigenvalues(0) == Approx(1.0).epsilon(1e-10));
  CHECK(w.eigenvalues(1) == Approx(1.0).epsilon(1e-10));

  const double r = 0.8;
  Eigen::MatrixXd sq(2, 2);
  sq << std::exp(2 * r), 0, 0, std::exp(-2 * r);
  CHECK(williamson(sq).eigenvalues(0) == Approx(1.0).epsilon(1e-10));
  CHECK(symplectic_eigenvalues(sq)(0) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("williamson on random covariance matrices") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> lam(1.0, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int modes = 1 + trial % 3;
    const Eigen::MatrixXd s = random_symplectic(modes, rng);
    Eigen::VectorXd l(modes);
    for (int j = 0; j < modes; ++j) l(j) = lam(rng);
    const Eigen::MatrixXd cov = s * expand(l) * s.transpose();

    const auto w = williamson(cov);
    const Eigen::MatrixXd om = symplectic_form(modes);
    CHECK(max_abs(w.symplectic * om * w.symplectic.transpose() - om) <= 1e-10);
    CHECK(max_abs(w.symplectic * expand(w.eigenvalues) * w.symplectic.transpose() - cov) / max_abs(cov) <= 1e-10);
    std::sort(l.data(), l.data() + modes, std::greater<>());
    CHECK(max_abs(w.eigenvalues - l) / l(0) <= 1e-10);
    for (int j = 1; j < modes; ++j) CHECK(w.eigenvalues(j - 1) >= w.eigenvalues(j));
  }
}

TEST_CASE("williamson rejects bad input") {
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(williamson(asym), DomainError);
  CHECK_THROWS_AS(williamson(-Eigen::MatrixXd::Identity(2, 2)), DomainError);
  CHECK_THROWS_AS(williamson(Eigen::MatrixXd::Identity(3, 3)), DomainError);
  Eigen::MatrixXd ill(2, 2);
  ill << 1e7, 0, 0, 1e-7;
  CHECK_THROWS_AS(williamson(ill), NumericalError);
}

TEST_CASE("g factors") {
  const auto one = g_factors(0.5, 1.0);
  CHECK(one.plus == Approx(1.0));
  CHECK(one.minus == Approx(1.0));
  const auto three = g_factors(0.5, 3.0);
  CHECK(three.minus == Approx(std::sqrt(2.0) / (2.0 - std::sqrt(2.0))).epsilon(1e-14));
  CHECK(three.plus == Approx(std::sqrt(2.0) / (2.0 + std::sqrt(2.0))).epsilon(1e-14));
  CHECK(three.minus == Approx(2.4142).epsilon(1e-4));
  CHECK(three.plus == Approx(0.4142).epsilon(1e-4));
  CHECK(chernoff_ratio(0.5, 3.0) == Approx(three.minus / three.plus).epsilon(1e-14));
  CHECK(log_g_minus(0.3, 1.0) == Approx(std::log(std::sqrt(2.0) / std::pow(2.0, 0.3))).epsilon(1e-14));
  CHECK(log_g_minus(0.3, 7.0) == Approx(std::log(g_factors(0.3, 7.0).minus)).epsilon(1e-14));
  CHECK_THROWS_AS(g_factors(0.5, 0.5), DomainError);
}

TEST_CASE("qcb term: identical and coherent states") {
  const auto th = GaussianState::thermal(2, 3.0);
  for (double s : {0.1, 0.5, 0.9}) CHECK(qcb_term(th, th, s) == Approx(0.5).epsilon(1e-12));

  const auto vac = GaussianState::vacuum(1);
  CHECK(qcb_term(vac, GaussianState::coherent(1.0, 0.0), 0.5) == Approx(0.18394).epsilon(1e-4));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 20; ++k) {
    const double re = u(rng), im = u(rng);
    const double expect = 0.5 * std::exp(-(re * re + im * im));
    const auto coh = GaussianState::coherent(re, im);
    for (double s : {0.2, 0.5, 0.8}) CHECK(std::abs(qcb_term(vac, coh, s) - expect) <= 1e-8);
    CHECK(std::abs(qcb_bin(vac, coh).bound_value - expect) <= 1e-8);
  }
  CHECK_THROWS_AS(qcb_term(vac, vac, 0.0), DomainError);
  CHECK_THROWS_AS(qcb_term(vac, th, 0.5), DomainError);
}

TEST_CASE("qcb term against a Fock-space trace") {
  const Fock fock(70);
  struct Pair {
    double a1, r1, n1, a2, r2, n2;
  };
  for (const Pair& p : {Pair{0.0, 0.0, 0.3, 0.6, 0.0, 0.3}, Pair{0.4, 0.2, 0.2, -0.3, -0.1, 0.5},
                        Pair{0.0, 0.3, 0.0, 0.0, 0.0, 0.4}, Pair{0.8, 0.0, 0.0, 0.2, 0.25, 0.1}}) {
    const Eigen::MatrixXd r1 = fock.state(p.a1, p.r1, p.n1);
    const Eigen::MatrixXd r2 = fock.state(p.a2, p.r2, p.n2);
    REQUIRE(r1.trace() == Approx(1.0).epsilon(1e-10));
    const auto g1 = gaussian(p.a1, p.r1, p.n1);
    const auto g2 = gaussian(p.a2, p.r2, p.n2);
    double best = 1.0;
    for (double s : {0.25, 0.5, 0.75}) {
      const double oracle = 0.5 * (power(r1, s) * power(r2, 1.0 - s)).trace();
      CHECK(qcb_term(g1, g2, s) == Approx(oracle).epsilon(1e-7));
      best = std::min(best, oracle);
    }
    CHECK(qcb_bin(g1, g2).bound_value <= best + 1e-12);
  }
}

TEST_CASE("qcb symmetry and optimisation") {
  auto a = GaussianState::thermal(1, 0.5);
  auto b = GaussianState::coherent(0.7, -0.2);
  b.cov *= 3.0;
  for (double s : {0.1, 0.3, 0.45}) CHECK(qcb_term(a, b, s) == Approx(qcb_term(b, a, 1.0 - s)).epsilon(1e-12));

  const auto r = qcb_bin(a, b);
  CHECK(r.bound_value <= 0.5);
  CHECK(r.log_bound == Approx(std::log(r.bound_value)).epsilon(1e-12));
  for (double s : s_scan_grid()) CHECK(r.bound_value <= qcb_term(a, b, s) + 1e-12);
  CHECK(r.optimal_s != Approx(0.5).epsilon(1e-3));
  CHECK(qcb_bin(a, b, SPolicy::Half).optimal_s == 0.5);

  const auto same = qcb_bin(a, a);
  CHECK(same.bound_value == Approx(0.5).epsilon(1e-12));
  CHECK(same.optimal_s == 0.5);

  REQUIRE(s_scan_grid().size() == 33);
  CHECK(s_scan_grid().front() == Approx(1.0 / 34.0));
  CHECK(s_scan_grid().back() == Approx(33.0 / 34.0));

  // bigger displacement, smaller overlap
  double last = 0.5;
  for (double alpha : {0.1, 0.3, 0.6, 1.0}) {
    const double v = qcb_bin(GaussianState::vacuum(1), GaussianState::coherent(alpha, 0.0)).bound_value;
    CHECK(v < last);
    last = v;
  }
}

TEST_CASE("prepared states agree with the generic decomposition") {
  auto s = testing::fig3();
  s.per_mode_brightness = 0.05;
  s.transmissivity = 0.01;
  for (auto kind : {RadarKind::Classical, RadarKind::Quantum}) {
    for (double offset : {0.0, 0.7 * s.bandwidth, -2.1 * s.bandwidth}) {
      for (double zeta : {1e-4, 3e-3, 0.02}) {
        const double phi = s.target_angle;
        const double generic = log_qcb_term(prepare(dual_state(kind, s, offset, phi)),
                                            prepare(dual_state(kind, s, offset, phi + zeta)), 0.4);
        const double closed = log_qcb_term(prepare_dual(kind, s, offset, phi), prepare_dual(kind, s, offset, phi + zeta), 0.4);
        CHECK(closed == Approx(generic).epsilon(1e-9));
      }
    }
  }
  const auto p = prepare_dual(RadarKind::Quantum, s, 0.0, 0.1);
  const Eigen::MatrixXd cov = p.symplectic * expand(p.eigenvalues) * p.symplectic.transpose();
  const auto direct = dual_quantum_state(s, 0.0, 0.1).cov;
  CHECK(max_abs(cov - direct) / max_abs(direct) < 1e-10);
}
