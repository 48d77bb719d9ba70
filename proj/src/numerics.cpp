#include "qradar/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qradar/errors.hpp"

namespace qradar::numerics {

namespace {

struct Segment {
  double a;
  double b;
  double value;
  double error;
  std::size_t order;  // creation index, keeps the queue deterministic on ties
};

struct SegmentLess {
  bool operator()(const Segment& l, const Segment& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.order > r.order;
  }
};

// G7/K15 on [a, b]; nodes and weights from Boost so there is one table.
Segment gk15(const std::function<double(double)>& f, double a, double b, std::size_t order,
             std::size_t& evaluations) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& kx = Kronrod::abscissa();
  const auto& kw = Kronrod::weights();
  const auto& gw = Gauss::weights();

  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);

  // Kronrod abscissae: index 0 is the centre; even indices are the Gauss nodes.
  const double fc = f(mid);
  double kronrod = kw[0] * fc;
  double gauss = gw[0] * fc;
  evaluations += 1;
  for (std::size_t i = 1; i < kx.size(); ++i) {
    const double dx = half * kx[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    evaluations += 2;
    kronrod += kw[i] * fsum;
    if (i % 2 == 0) gauss += gw[i / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  return Segment{a, b, kronrod, std::abs(kronrod - gauss), order};
}

}  // namespace

std::string QuadratureResult::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << "value=" << value << " error_estimate=" << error << " evaluations=" << evaluations
     << " intervals=" << intervals << (converged ? " (converged)" : " (not converged)");
  return os.str();
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::span<const double> breakpoints,
                                    const AdaptiveOptions& options) {
  if (breakpoints.size() < 2) throw DomainError("integrate_adaptive: need at least two breakpoints");

  QuadratureResult result;
  std::priority_queue<Segment, std::vector<Segment>, SegmentLess> queue;
  std::size_t order = 0;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    Segment s = gk15(f, breakpoints[i], breakpoints[i + 1], order++, result.evaluations);
    total += s.value;
    total_error += s.error;
    queue.push(s);
  }

  auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

  while (!queue.empty() && total_error > tolerance() && queue.size() < options.max_intervals) {
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      queue.push(worst);  // interval cannot be split further in double precision
      break;
    }
    Segment left = gk15(f, worst.a, mid, order++, result.evaluations);
    Segment right = gk15(f, mid, worst.b, order++, result.evaluations);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Re-sum from the segments so the reported value carries no drift from the
  // running updates.
  total = 0.0;
  total_error = 0.0;
  std::vector<Segment> segments;
  segments.reserve(queue.size());
  while (!queue.empty()) {
    segments.push_back(queue.top());
    queue.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  for (const auto& s : segments) {
    total += s.value;
    total_error += s.error;
  }
  result.value = total;
  result.error = total_error;
  result.intervals = segments.size();
  result.converged = total_error <= tolerance();
  return result;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const AdaptiveOptions& options) {
  const double bp[2] = {a, b};
  return integrate_adaptive(f, std::span<const double>(bp, 2), options);
}

QuadratureResult integrate_nested(const std::function<double(double)>& f, double a, double b,
                                  const NestedOptions& options) {
  const std::size_t max_intervals = options.max_points - 1;
  if (max_intervals < 2 || (max_intervals & (max_intervals - 1)) != 0)
    throw DomainError("integrate_nested: max_points must be 2^k + 1");

  std::vector<double> samples(options.max_points, std::numeric_limits<double>::quiet_NaN());
  QuadratureResult result;
  auto sample = [&](std::size_t i) {
    double& v = samples[i];
    if (std::isnan(v)) {
      const double x = a + (b - a) * (static_cast<double>(i) / static_cast<double>(max_intervals));
      v = f(x);
      ++result.evaluations;
    }
    return v;
  };

  std::size_t intervals = 2;
  while (intervals + 1 < options.min_points && intervals < max_intervals) intervals *= 2;

  double previous = std::numeric_limits<double>::quiet_NaN();
  for (;;) {
    const std::size_t stride = max_intervals / intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    double sum = sample(0) + sample(max_intervals);
    for (std::size_t k = 1; k < intervals; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * sample(k * stride);
    const double estimate = sum * h / 3.0;

    if (!std::isnan(previous)) {
      // Richardson: Simpson error drops by 16 per halving.
      result.error = std::abs(estimate - previous) / 15.0;
      result.value = estimate + (estimate - previous) / 15.0;
      result.intervals = intervals;
      if (result.error <= std::max(options.abs_tol, options.rel_tol * std::abs(result.value))) {
        result.converged = true;
        return result;
      }
    } else {
      result.value = estimate;
      result.intervals = intervals;
    }
    if (intervals >= max_intervals) return result;
    previous = estimate;
    intervals *= 2;
  }
}

MinimumResult golden_section(const std::function<double(double)>& f, double a, double b,
                             double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  MinimumResult out;
  double u = b - inv_phi * (b - a);
  double v = a + inv_phi * (b - a);
  double fu = f(u);
  double fv = f(v);
  out.evaluations = 2;
  while (b - a > tol) {
    if (fu <= fv) {
      b = v;
      v = u;
      fv = fu;
      u = b - inv_phi * (b - a);
      fu = f(u);
    } else {
      a = u;
      u = v;
      fu = fv;
      v = a + inv_phi * (b - a);
      fv = f(v);
    }
    ++out.evaluations;
  }
  if (fu <= fv) {
    out.x = u;
    out.value = fu;
  } else {
    out.x = v;
    out.value = fv;
  }
  return out;
}

MinimumResult grid_golden_minimize(const std::function<double(double)>& f,
                                   std::span<const double> grid, double tol, double preferred,
                                   double flat_tol) {
  if (grid.empty()) throw DomainError("grid_golden_minimize: empty grid");
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);

  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  MinimumResult out;
  out.evaluations = grid.size();

  // Flat landscape: nothing to refine.
  if (*hi - *lo <= flat_tol * scale) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (std::abs(grid[i] - preferred) < std::abs(grid[best] - preferred)) best = i;
    out.x = grid[best];
    out.value = values[best];
    if (std::abs(grid[best] - preferred) > 0.0) {
      out.x = preferred;
      out.value = f(preferred);
      ++out.evaluations;
    }
    return out;
  }

  std::size_t best = static_cast<std::size_t>(lo - values.begin());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] - *lo <= flat_tol * scale &&
        std::abs(grid[i] - preferred) < std::abs(grid[best] - preferred))
      best = i;
  }
  const double left = grid[best == 0 ? 0 : best - 1];
  const double right = grid[best + 1 == grid.size() ? best : best + 1];
  MinimumResult refined = golden_section(f, left, right, tol);
  out.evaluations += refined.evaluations;
  if (refined.value < values[best]) {
    out.x = refined.x;
    out.value = refined.value;
  } else {
    out.x = grid[best];
    out.value = values[best];
  }
  return out;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a + (b - a) * (static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("logspace: limits must be positive");
  auto exps = linspace(std::log10(a), std::log10(b), n);
  for (auto& e : exps) e = std::pow(10.0, e);
  if (n > 1) {
    exps.front() = a;
    exps.back() = b;
  }
  return exps;
}

}  // namespace qradar::numerics
