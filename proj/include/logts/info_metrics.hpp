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

// Exact information-ratio quantities on a finite posterior.
//
// Theta (true parameter) and Theta_hat (the Thompson sample) are i.i.d.
// from the posterior weights w; the played action is Theta_hat itself.
// With s_ij = <atom_i, atom_j> (Theta = atom_i, Theta_hat = atom_j):
//
//   expected regret  = sum_ij w_i w_j psi(1 - s_ij)
//   mutual info      = sum_j w_j sum_i w_i KL(Bern(p_ij) || Bern(m_j)),
//                      p_ij = logistic(b, s_ij),  m_j = sum_i w_i p_ij
//   gamma            = regret^2 / mutual info
//
// The lemma checks below evaluate both sides of each inequality in the
// variance-based proof of gamma <= 9d/2 by exact sums over the support.
// Nothing on this path is Monte-Carlo.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "logts/core_math.hpp"
#include "logts/errors.hpp"
#include "logts/finite_support.hpp"

namespace logts {

inline constexpr double kMiDegenerateThreshold = 1e-14;
inline constexpr double kDegenerateRegretCeiling = 1e-7;
inline constexpr double kIdentityTolerance = 1e-12;
inline constexpr double kBoundTolerance = 1e-9;
inline constexpr double kVarianceFloor = 1e-14;

inline double information_ratio_bound(std::size_t d) { return 4.5 * static_cast<double>(d); }

inline double degenerate_regret_ceiling(std::size_t d) {
  return std::max(kDegenerateRegretCeiling,
                  std::sqrt(information_ratio_bound(d) * kMiDegenerateThreshold));
}

struct InfoRatioReport {
  double expected_regret = 0.0;
  double mutual_info = 0.0;
  std::optional<double> gamma;  // empty when the mutual information vanishes
  double bound = 0.0;           // 9d/2
  std::size_t step = 0;

  bool degenerate() const noexcept { return !gamma.has_value(); }
};

// One evaluated inequality. `margin` is the slack in the direction of the
// claim (non-negative when it holds exactly).
struct LemmaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
};

namespace detail {

inline LemmaCheck check_le(double lhs, double rhs, double tol) {
  return {lhs, rhs, rhs - lhs, lhs <= rhs + tol};
}

inline LemmaCheck check_ge(double lhs, double rhs, double tol) {
  return {lhs, rhs, lhs - rhs, lhs >= rhs - tol};
}

// E_Theta[ Var_{Theta_hat}[ f(1 - <Theta_hat, Theta>) | Theta ] ], two-pass.
template <class F>
double mean_conditional_variance(const FiniteSupport& joint, std::span<const double> gram, F&& f) {
  const std::size_t n = joint.size();
  const auto w = joint.weights();
  std::vector<double> values(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0.0) continue;
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      values[j] = f(1.0 - gram[i * n + j]);
      mean += w[j] * values[j];
    }
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) var += w[j] * (values[j] - mean) * (values[j] - mean);
    total += w[i] * var;
  }
  return total;
}

inline double expected_regret(const FiniteSupport& post, std::span<const double> gram, Slope beta) {
  const std::size_t n = post.size();
  const auto w = post.weights();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += w[j] * psi(beta, 1.0 - gram[i * n + j]);
    total += w[i] * row;
  }
  return total;
}

inline double mutual_information(const FiniteSupport& post, std::span<const double> gram,
                                 Slope beta) {
  const std::size_t n = post.size();
  const auto w = post.weights();
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (w[j] == 0.0) continue;
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = logistic(beta, gram[i * n + j]);
      m += w[i] * p[i];
    }
    m = std::clamp(m, std::numeric_limits<double>::min(), 1.0 - 0x1.0p-53);
    double info = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i] != 0.0) info += w[i] * bernoulli_kl(p[i], m);
    }
    total += w[j] * info;
  }
  return total;
}

inline double plogp_sum(std::span<const double> probs) {
  double h = 0.0;
  for (double q : probs) {
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

}  // namespace detail

inline double expected_regret(const Posterior& post, Slope beta) {
  return detail::expected_regret(post, post.atoms().gram(), beta);
}

inline double mutual_information(const Posterior& post, Slope beta) {
  return detail::mutual_information(post, post.atoms().gram(), beta);
}

// Throws std::logic_error when the mutual information vanishes but the
// expected regret does not; for a Thompson-sampling posterior both vanish
// together. "Vanishes" for the regret means below 1e-7 or below the value
// sqrt(bound * 1e-14) that the ratio bound still allows, whichever is larger.
inline InfoRatioReport information_ratio(const Posterior& post, Slope beta, std::size_t step = 0) {
  const auto gram = post.atoms().gram();
  InfoRatioReport r;
  r.expected_regret = detail::expected_regret(post, gram, beta);
  r.mutual_info = detail::mutual_information(post, gram, beta);
  r.bound = information_ratio_bound(post.dim());
  r.step = step;
  if (r.mutual_info > kMiDegenerateThreshold) {
    r.gamma = r.expected_regret * r.expected_regret / r.mutual_info;
  } else if (r.expected_regret > degenerate_regret_ceiling(post.dim())) {
    throw std::logic_error("information_ratio: zero information with regret " +
                           std::to_string(r.expected_regret));
  }
  return r;
}

struct ChainIdentity {
  double joint_mi = 0.0;        // I(Theta; R, A)
  double conditional_mi = 0.0;  // I(Theta; R | A)
  double action_mi = 0.0;       // I(Theta; A), zero for Thompson sampling
  bool holds = false;
};

// Builds the joint law of (Theta, A, R) explicitly and evaluates both
// sides of I(Theta; R, A) = I(Theta; R | A) through entropies.
inline ChainIdentity mi_chain_identity_check(const Posterior& post, Slope beta) {
  const std::size_t n = post.size();
  const auto w = post.weights();
  const auto gram = post.atoms().gram();
  // joint[(i * n + j) * 2 + r] = P(Theta = i, A = j, R = r)
  std::vector<double> joint(n * n * 2), theta_action(n * n), action_reward(n * 2, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double pij = w[i] * w[j];
      const double s = gram[i * n + j];
      joint[(i * n + j) * 2 + 1] = pij * logistic(beta, s);
      joint[(i * n + j) * 2 + 0] = pij * logistic(beta, -s);
      theta_action[i * n + j] = pij;
      action_reward[j * 2 + 1] += joint[(i * n + j) * 2 + 1];
      action_reward[j * 2 + 0] += joint[(i * n + j) * 2 + 0];
    }
  }
  const double h_theta = detail::plogp_sum(w);
  const double h_action = h_theta;
  const double h_theta_action = detail::plogp_sum(theta_action);
  const double h_action_reward = detail::plogp_sum(action_reward);
  const double h_all = detail::plogp_sum(joint);

  ChainIdentity c;
  c.joint_mi = h_theta + h_action_reward - h_all;
  c.conditional_mi = h_theta_action + h_action_reward - h_all - h_action;
  c.action_mi = h_theta + h_action - h_theta_action;
  c.holds = std::abs(c.joint_mi - c.conditional_mi) <= 1e-10;
  return c;
}

// I(U; Bern(U)) = h2(E U) - E h2(U)  >=  2 Var U.
inline LemmaCheck lemma_mi_ge_2var(std::span<const double> u_atoms,
                                   std::span<const double> u_weights) {
  if (u_atoms.size() != u_weights.size() || u_atoms.empty()) {
    throw ConfigError("lemma_mi_ge_2var: atoms/weights size mismatch");
  }
  double mean = 0.0, mean_h = 0.0;
  for (std::size_t k = 0; k < u_atoms.size(); ++k) {
    if (u_atoms[k] < 0.0 || u_atoms[k] > 1.0) throw ConfigError("lemma_mi_ge_2var: U outside [0,1]");
    mean += u_weights[k] * u_atoms[k];
    mean_h += u_weights[k] * binary_entropy(u_atoms[k]);
  }
  double var = 0.0;
  for (std::size_t k = 0; k < u_atoms.size(); ++k) {
    var += u_weights[k] * (u_atoms[k] - mean) * (u_atoms[k] - mean);
  }
  return detail::check_ge(binary_entropy(mean) - mean_h, 2.0 * var, kIdentityTolerance);
}

// mutual information >= 2 E[ Var[ logistic(b, <Theta_hat, Theta>) | Theta ] ].
inline LemmaCheck lemma_mi_lower_bound_check(const Posterior& post, Slope beta) {
  const auto gram = post.atoms().gram();
  const double mi = detail::mutual_information(post, gram, beta);
  const double var = detail::mean_conditional_variance(
      post, gram, [&](double x) { return logistic(beta, 1.0 - x); });
  return detail::check_ge(mi, 2.0 * var, kIdentityTolerance);
}

// regret^2 <= d E[ Var[ surrogate(1 - <Theta_hat, Theta>) | Theta ] ].
inline LemmaCheck squared_regret_upper_check(const Posterior& post,
                                             const LogisticSurrogate& surrogate) {
  const auto gram = post.atoms().gram();
  const double regret = detail::expected_regret(post, gram, surrogate.beta());
  const double var = detail::mean_conditional_variance(post, gram, surrogate);
  return detail::check_le(regret * regret, static_cast<double>(post.dim()) * var,
                          kIdentityTolerance);
}

inline LemmaCheck squared_regret_upper_check(const Posterior& post, Slope beta) {
  return squared_regret_upper_check(post, LogisticSurrogate(beta));
}

// Finite joint law of a pair of vectors (U, V) in R^d.
struct VectorPairDistribution {
  std::size_t dim = 0;
  std::vector<double> u;  // row-major, size() * dim
  std::vector<double> v;
  std::vector<double> probs;

  std::size_t size() const noexcept { return probs.size(); }
  std::span<const double> u_at(std::size_t k) const { return {u.data() + k * dim, dim}; }
  std::span<const double> v_at(std::size_t k) const { return {v.data() + k * dim, dim}; }
};

// E[U.V]^2 <= d E[(U'.V')^2] with U', V' independent copies of the marginals.
inline LemmaCheck lemma_inner_product_d_check(const VectorPairDistribution& dist) {
  if (dist.u.size() != dist.size() * dist.dim || dist.v.size() != dist.size() * dist.dim) {
    throw DimensionError("lemma_inner_product_d_check: malformed pair distribution");
  }
  const std::size_t m = dist.size();
  double mean_dot = 0.0;
  for (std::size_t k = 0; k < m; ++k) mean_dot += dist.probs[k] * dot(dist.u_at(k), dist.v_at(k));
  double indep = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      const double s = dot(dist.u_at(k), dist.v_at(l));
      indep += dist.probs[k] * dist.probs[l] * s * s;
    }
  }
  const double lhs = mean_dot * mean_dot;
  const double rhs = static_cast<double>(dist.dim) * indep;
  return detail::check_le(lhs, rhs, kIdentityTolerance * std::max(1.0, rhs));
}

// Grid test of the preconditions f(0) >= 0 and f(x)/x non-decreasing.
template <class F>
bool ratio_nondecreasing_on_grid(F&& f, double hi = 2.0, std::size_t points = 10000,
                                 double tol = 1e-10) {
  if (f(0.0) < 0.0) return false;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= points; ++k) {
    const double x = hi * static_cast<double>(k) / static_cast<double>(points);
    const double r = f(x) / x;
    if (r < prev - tol) return false;
    prev = std::max(prev, r);
  }
  return true;
}

// E[f(U)]^2 / E[U]^2 <= Var[f(U)] / Var[U] for non-negative U.
// Returns nullopt when U is (numerically) constant.
template <class F>
std::optional<LemmaCheck> lemma_ratio_exp_var_check(F&& f, std::span<const double> u_atoms,
                                                    std::span<const double> u_weights) {
  if (u_atoms.size() != u_weights.size() || u_atoms.empty()) {
    throw ConfigError("lemma_ratio_exp_var_check: atoms/weights size mismatch");
  }
  const std::size_t n = u_atoms.size();
  std::vector<double> fu(n);
  double mean_u = 0.0, mean_f = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (u_atoms[k] < 0.0) throw ConfigError("lemma_ratio_exp_var_check: U must be non-negative");
    fu[k] = f(u_atoms[k]);
    mean_u += u_weights[k] * u_atoms[k];
    mean_f += u_weights[k] * fu[k];
  }
  double var_u = 0.0, var_f = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    var_u += u_weights[k] * (u_atoms[k] - mean_u) * (u_atoms[k] - mean_u);
    var_f += u_weights[k] * (fu[k] - mean_f) * (fu[k] - mean_f);
  }
  if (var_u <= 1e-12 * std::max(1.0, mean_u * mean_u)) return std::nullopt;
  const double lhs = (mean_f * mean_f) / (mean_u * mean_u);
  const double rhs = var_f / var_u;
  return detail::check_le(lhs, rhs, 1e-10 * std::max(1.0, rhs));
}

struct VarianceRatio {
  double numerator = 0.0;    // E[Var[phi-bar(1 - s) | Theta]]
  double denominator = 0.0;  // E[Var[psi-bar(1 - s) | Theta]] = E[Q(1 - Q)]
  double ratio = 0.0;
  bool degenerate = false;   // denominator vanishes; excluded from the claim
  bool holds_9 = false;
};

// Limit-shape variance ratio, via the indicator decomposition: with
// I = 1{s < 0}, Q = E[I | Theta], G = E[I s | Theta], the limit surrogate
// equals I (1 - 2s) with conditional mean Q - 2G, and the limit psi is the
// Bernoulli(Q) indicator.
inline VarianceRatio variance_ratio_limit_check(const DiscreteJoint& joint) {
  const std::size_t n = joint.size();
  const auto w = joint.weights();
  const auto gram = joint.atoms().gram();
  VarianceRatio out;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0.0) continue;
    double q = 0.0, g = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = gram[i * n + j];
      if (s < 0.0) {
        q += w[j];
        g += w[j] * s;
      }
    }
    const double mean = q - 2.0 * g;
    double var = (1.0 - q) * mean * mean;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = gram[i * n + j];
      if (s < 0.0) var += w[j] * (1.0 - 2.0 * s - mean) * (1.0 - 2.0 * s - mean);
    }
    out.numerator += w[i] * var;
    out.denominator += w[i] * q * (1.0 - q);
  }
  out.degenerate = out.denominator <= kVarianceFloor;
  if (!out.degenerate) {
    out.ratio = out.numerator / out.denominator;
    out.holds_9 = out.ratio <= 9.0 + kBoundTolerance;
  }
  return out;
}

struct BetaMonotonicity {
  double ratio_beta = 0.0;
  double ratio_limit = 0.0;
  bool degenerate = false;
  bool holds = false;
};

// E Var[surrogate] / E Var[psi] at finite slope versus the limit-shape ratio.
inline BetaMonotonicity beta_monotonicity_check(const DiscreteJoint& joint,
                                                const LogisticSurrogate& surrogate) {
  const auto gram = joint.atoms().gram();
  const Slope beta = surrogate.beta();
  const double den = detail::mean_conditional_variance(joint, gram,
                                                       [&](double x) { return psi(beta, x); });
  const double num = detail::mean_conditional_variance(joint, gram, surrogate);
  const auto limit = variance_ratio_limit_check(joint);
  BetaMonotonicity out;
  out.ratio_limit = limit.ratio;
  out.degenerate = den <= kVarianceFloor || limit.degenerate;
  if (!out.degenerate) {
    out.ratio_beta = num / den;
    out.holds = out.ratio_beta <= out.ratio_limit + kBoundTolerance;
  }
  return out;
}

inline BetaMonotonicity beta_monotonicity_check(const DiscreteJoint& joint, Slope beta) {
  return beta_monotonicity_check(joint, LogisticSurrogate(beta));
}

// d/2 * E Var[surrogate] / E Var[psi]: the bound on gamma before the limit
// argument. Returns nullopt when the psi variance vanishes.
inline std::optional<double> variance_chain_gamma_bound(const Posterior& post,
                                                        const LogisticSurrogate& surrogate) {
  const auto gram = post.atoms().gram();
  const Slope beta = surrogate.beta();
  const double den = detail::mean_conditional_variance(post, gram,
                                                       [&](double x) { return psi(beta, x); });
  if (den <= kVarianceFloor) return std::nullopt;
  const double num = detail::mean_conditional_variance(post, gram, surrogate);
  return 0.5 * static_cast<double>(post.dim()) * num / den;
}

}  // namespace logts
