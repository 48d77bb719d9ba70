#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qradar::numerics {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;

  std::string describe() const;
};

struct AdaptiveOptions {
  double rel_tol = 1e-4;
  double abs_tol = 0.0;
  std::size_t max_intervals = 4000;
};

// Globally adaptive Gauss-Kronrod (7/15) integration. The initial partition
// is given by `breakpoints` (sorted, first and last are the limits); the
// interval with the largest error estimate is bisected until
// error <= max(abs_tol, rel_tol * |value|) or the interval cap is hit.
// The result reports converged = false instead of throwing.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::span<const double> breakpoints,
                                    const AdaptiveOptions& options = {});

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const AdaptiveOptions& options = {});

struct NestedOptions {
  std::size_t min_points = 17;
  std::size_t max_points = 513;  // must be 2^k + 1
  double rel_tol = 1e-7;
  double abs_tol = 1e-10;
};

// Composite Simpson on nested uniform grids of 2^k + 1 points, doubling the
// resolution (and reusing every previous sample) until two successive
// estimates agree. Sample abscissae are a + (b - a) * i / (max_points - 1)
// for integer i, so they are bit-identical between calls.
QuadratureResult integrate_nested(const std::function<double(double)>& f, double a, double b,
                                  const NestedOptions& options = {});

struct MinimumResult {
  double x = 0.0;
  double value = 0.0;
  std::size_t evaluations = 0;
};

// Golden-section refinement inside [a, b]; stops once the bracket is below tol.
MinimumResult golden_section(const std::function<double(double)>& f, double a, double b,
                             double tol);

// Grid scan over `grid` followed by golden-section refinement between the
// neighbours of the best grid point. Ties (within `flat_tol` relative) are
// broken toward `preferred`.
MinimumResult grid_golden_minimize(const std::function<double(double)>& f,
                                   std::span<const double> grid, double tol, double preferred,
                                   double flat_tol = 1e-13);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

}  // namespace qradar::numerics
