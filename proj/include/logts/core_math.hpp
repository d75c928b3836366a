// Copyright 2026 The logts Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scalar functions of the logistic bandit model.
//
//   logistic(b, x)   = e^{bx} / (1 + e^{bx})
//   psi(b, x)        = logistic(b, 1) - logistic(b, 1 - x)      x in [0, 2]
//                      (reward gap when the played direction has inner
//                      product 1 - x with the true parameter)
//   delta_beta(b)    = argmax_{x in (0,2]} psi(b, x) / x
//   surrogate(b, x)  = psi(b, x) up to delta_beta, then the chord slope
//                      psi(b, delta)/delta continued linearly to x = 2
//   limit_psi/phi    = pointwise b -> infinity shapes after normalisation
//
// Entropies are in nats.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "logts/errors.hpp"

namespace logts {

class Slope {
 public:
  explicit Slope(double beta) : beta_(beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw ConfigError("slope beta must be positive and finite, got " + std::to_string(beta));
    }
  }
  double value() const noexcept { return beta_; }

 private:
  double beta_;
};

// Standard sigmoid 1/(1+e^{-z}), computed from exp(-|z|) so it never
// overflows. The result is clamped into the open interval (0, 1): for
// |z| beyond ~745 the exact value is not representable and would round to
// 0 or 1, which would make likelihoods vanish.
inline double sigmoid(double z) noexcept {
  const double e = std::exp(-std::abs(z));
  const double p = z >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
  constexpr double kLow = std::numeric_limits<double>::denorm_min();
  constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(p, kLow, kHigh);
}

// log(1 + e^z) without overflow.
inline double softplus(double z) noexcept {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double logistic(Slope beta, double x) noexcept { return sigmoid(beta.value() * x); }

// log P(R = reward | <a, theta> = inner).
inline double log_likelihood(Slope beta, double inner, int reward) noexcept {
  const double z = beta.value() * inner;
  return reward == 1 ? -softplus(-z) : -softplus(z);
}

namespace detail {
inline constexpr double kLog2 = 0.69314718055994530942;

inline double log_cosh(double y) noexcept {
  y = std::abs(y);
  return y + std::log1p(std::exp(-2.0 * y)) - kLog2;
}

// y > 0
inline double log_sinh(double y) noexcept { return y + std::log(-std::expm1(-2.0 * y)) - kLog2; }
}  // namespace detail

// psi(b, x) = logistic(b, 1) - logistic(b, 1 - x), evaluated as
// sinh(bx/2) / (2 cosh(b/2) cosh(b(1-x)/2)) so small values keep full
// relative precision instead of coming out of a cancelling difference.
inline double psi(Slope beta, double x) noexcept {
  if (x == 0.0) return 0.0;
  const double b = beta.value();
  const double mag = std::exp(detail::log_sinh(0.5 * b * std::abs(x)) - detail::kLog2 -
                              detail::log_cosh(0.5 * b) - detail::log_cosh(0.5 * b * (1.0 - x)));
  return x > 0.0 ? mag : -mag;
}

// d/dx psi(b, x) = b * s(b(1-x)) * (1 - s(b(1-x))).
inline double psi_derivative(Slope beta, double x) noexcept {
  const double z = beta.value() * (1.0 - x);
  return beta.value() * sigmoid(z) * sigmoid(-z);
}

struct SurrogateBreakpoint {
  double delta = 0.0;
  double ratio_at_delta = 0.0;  // psi(b, delta) / delta
};

// Residual of the stationarity condition psi'(x) * x = psi(x).
inline double stationarity_residual(Slope beta, double x) noexcept {
  return psi_derivative(beta, x) * x - psi(beta, x);
}

// Bound on |stationarity_residual(delta)| / tol for the value returned by
// delta_beta: |d/dx residual| = x |psi''(x)| <= 2 * b^2 / (6 sqrt 3).
inline double stationarity_constant(Slope beta) noexcept {
  return std::max(1.0, beta.value() * beta.value() / 4.0);
}

// Maximiser of psi(b, x)/x on (0, 2].
//
// A 1024-point grid brackets the maximum (the ratio is unimodal, so the
// grid argmax has the maximiser within one cell on either side); golden
// section then shrinks the bracket to `tol`. Because the ratio is flat at
// its peak, the final point is polished by bisection on the stationarity
// residual, which changes sign at the maximiser.
inline SurrogateBreakpoint delta_beta(Slope beta, double tol = 1e-10, int max_iterations = 200) {
  if (!(tol > 0.0)) throw ConfigError("delta_beta tolerance must be positive");
  const auto ratio = [&](double x) { return psi(beta, x) / x; };

  constexpr int kGrid = 1024;
  constexpr double kStep = 2.0 / kGrid;
  int best = 1;
  double best_value = ratio(kStep);
  for (int k = 2; k <= kGrid; ++k) {
    const double v = ratio(k * kStep);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  const double grid_lo = best == 1 ? kStep / 2.0 : (best - 1) * kStep;
  const double grid_hi = best == kGrid ? 2.0 : (best + 1) * kStep;
  double lo = grid_lo;
  double hi = grid_hi;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = ratio(a);
  double fb = ratio(b);
  int iterations = 0;
  while (hi - lo > tol) {
    if (++iterations > max_iterations) {
      throw SolverError("delta_beta: golden-section search did not reach tol=" +
                        std::to_string(tol) + " within " + std::to_string(max_iterations) +
                        " iterations");
    }
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = ratio(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = ratio(a);
    }
  }

  double delta = 0.5 * (lo + hi);
  // Rounding noise in the flat ratio can steer golden section off the true
  // peak; fall back to the grid bracket when its bracket has lost the sign
  // change.
  const auto straddles = [&](double l, double h) {
    return stationarity_residual(beta, l) > 0.0 && stationarity_residual(beta, h) < 0.0;
  };
  if (!straddles(lo, hi)) {
    lo = grid_lo;
    hi = grid_hi;
  }
  if (straddles(lo, hi)) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double r = stationarity_residual(beta, mid);
      if (r > 0.0) {
        lo = mid;
      } else if (r < 0.0) {
        hi = mid;
      } else {
        lo = hi = mid;
        break;
      }
    }
    delta = 0.5 * (lo + hi);
  }

  if (!(delta > 1.0 && delta <= 2.0)) {
    throw SolverError("delta_beta: maximiser " + std::to_string(delta) + " outside (1, 2]");
  }
  return {delta, psi(beta, delta) / delta};
}

// Tightest upper bound on psi whose ratio to x is non-decreasing.
class LogisticSurrogate {
 public:
  explicit LogisticSurrogate(Slope beta, double tol = 1e-10)
      : LogisticSurrogate(beta, delta_beta(beta, tol)) {}
  LogisticSurrogate(Slope beta, SurrogateBreakpoint bp) : beta_(beta), bp_(bp) {}

  double operator()(double x) const noexcept {
    if (x <= bp_.delta) return psi(beta_, x);
    return bp_.ratio_at_delta * bp_.delta + (x - bp_.delta) * bp_.ratio_at_delta;
  }

  Slope beta() const noexcept { return beta_; }
  const SurrogateBreakpoint& breakpoint() const noexcept { return bp_; }

 private:
  Slope beta_;
  SurrogateBreakpoint bp_;
};

inline double surrogate(Slope beta, const SurrogateBreakpoint& bp, double x) noexcept {
  return LogisticSurrogate(beta, bp)(x);
}

inline double limit_psi(double x) noexcept { return x <= 1.0 ? 0.0 : 1.0; }
inline double limit_phi(double x) noexcept { return x <= 1.0 ? 0.0 : 1.0 + 2.0 * (x - 1.0); }

// h2(p) = -p log p - (1-p) log(1-p), with 0 log 0 = 0.
inline double binary_entropy(double p) noexcept {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

inline double binary_entropy_derivative(double p) noexcept {
  return std::log1p(-p) - std::log(p);
}

// KL(Bern(p) || Bern(q)), written as q f(p/q) + (1-q) f((1-p)/(1-q)) with
// f(t) = t log t - t + 1 >= 0 so every term is non-negative.
// Requires q in (0, 1).
inline double bernoulli_kl(double p, double q) noexcept {
  const auto f = [](double t) {
    if (t <= 0.0) return 1.0;
    const double u = t - 1.0;
    // For small t, t - 1 rounds towards -1 and log1p loses t entirely.
    const double log_t = t < 0.5 ? std::log(t) : std::log1p(u);
    return std::max(0.0, t * log_t - u);
  };
  return q * f(p / q) + (1.0 - q) * f((1.0 - p) / (1.0 - q));
}

// Test predicate: |log f(r|a,t1) - log f(r|a,t2)| <= b ||t1 - t2|| + tol.
inline bool loglik_lipschitz_check(Slope beta, std::span<const double> action,
                                   std::span<const double> theta1,
                                   std::span<const double> theta2, int reward,
                                   double tol = 1e-12) {
  if (action.size() != theta1.size() || action.size() != theta2.size()) {
    throw DimensionError("loglik_lipschitz_check: dimension mismatch");
  }
  double s1 = 0.0, s2 = 0.0, dist2 = 0.0;
  for (std::size_t i = 0; i < action.size(); ++i) {
    s1 += action[i] * theta1[i];
    s2 += action[i] * theta2[i];
    dist2 += (theta1[i] - theta2[i]) * (theta1[i] - theta2[i]);
  }
  const double lhs = std::abs(log_likelihood(beta, s1, reward) - log_likelihood(beta, s2, reward));
  return lhs <= beta.value() * std::sqrt(dist2) + tol;
}

}  // namespace logts
