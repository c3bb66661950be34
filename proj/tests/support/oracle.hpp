#pragma once

// Numeric reference solutions built only from the primitive utility
// definitions. Nothing here calls into the library.

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

struct Params {
  double alpha, beta, epsilon, p;
};

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
inline double golden_argmax(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - inv_phi * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + inv_phi * (b - a), fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

/// Golden section followed by one parabolic step through points up to a
/// quarter of the interval apart, kept inside [lo, hi]. The objectives below are quadratic in the search
/// variable, where the parabola vertex is exact; golden section alone stalls
/// around sqrt(machine epsilon) on flat tops.
inline double refined_argmax(const std::function<double(double)>& f, double lo, double hi) {
  const double x = golden_argmax(f, lo, hi);
  const double h = std::min({(hi - lo) / 4.0, x - lo, hi - x});
  if (!(h > 1e-6 * (hi - lo))) return x;
  const double f0 = f(x - h), f1 = f(x), f2 = f(x + h);
  const double denom = f0 - 2.0 * f1 + f2;
  if (!(denom < 0.0)) return x;
  const double v = x + 0.5 * h * (f0 - f2) / denom;
  return std::clamp(v, lo, hi);
}

/// Verifier's expected profit: complex plan (blocksize s) with probability p,
/// simple plan (blocksize eps*s) otherwise; paid r per unit latency, latency
/// equals blocksize, cost alpha*b^2/2.
inline double verifier_profit(double s, double r, const Params& q) {
  auto at = [&](double b) { return r * b - 0.5 * q.alpha * b * b; };
  return q.p * at(s) + (1.0 - q.p) * at(q.epsilon * s);
}

/// Initiator's expected profit: beta per unit latency minus the reward.
inline double initiator_profit(double s, double r, const Params& q) {
  auto at = [&](double b) { return (q.beta - r) * b; };
  return q.p * at(s) + (1.0 - q.p) * at(q.epsilon * s);
}

inline double welfare(double s, const Params& q) { return verifier_profit(s, 0.0, q) + initiator_profit(s, 0.0, q); }

inline double best_response(double r, const Params& q) {
  const double hi = 4.0 * (r + 1.0) / (q.alpha * q.epsilon);
  return refined_argmax([&](double s) { return verifier_profit(s, r, q); }, 0.0, hi);
}

struct Nested {
  double r;
  double s;
};

/// Outer search over r with the verifier's best response inside, the outer
/// objective being expected social welfare.
inline Nested nested_welfare(const Params& q) {
  const double r = refined_argmax([&](double r) { return welfare(best_response(r, q), q); }, 0.0, 3.0 * q.beta);
  return {r, best_response(r, q)};
}

/// Same, but the outer objective is the initiator's own expected profit.
inline Nested nested_initiator(const Params& q) {
  const double r =
      refined_argmax([&](double r) { return initiator_profit(best_response(r, q), r, q); }, 0.0, 3.0 * q.beta);
  return {r, best_response(r, q)};
}

/// Exhaustive grid search; returns the first grid point attaining the best value.
inline double grid_argmax(const std::function<double(double)>& f, double lo, double hi, double step) {
  double best_x = lo, best = f(lo);
  const long n = std::lround((hi - lo) / step);
  for (long i = 1; i <= n; ++i) {
    const double x = lo + step * static_cast<double>(i);
    const double v = f(x);
    if (v > best) best = v, best_x = x;
  }
  return best_x;
}

inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi, double step) {
  return grid_argmax([&](double x) { return -f(x); }, lo, hi, step);
}

inline bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace oracle
