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

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "logts/core_math.hpp"
#include "logts/errors.hpp"
#include "logts/finite_support.hpp"
#include "logts/geometry.hpp"
#include "logts/rng.hpp"

namespace logts {

struct UniformSpherePrior {};

using PriorSpec = std::variant<UniformSpherePrior, FinitePrior>;

inline UnitVector draw_from_prior(const PriorSpec& prior, std::size_t dim, RngStream& rng) {
  if (const auto* finite = std::get_if<FinitePrior>(&prior)) {
    if (finite->dim() != dim) throw DimensionError("prior dimension does not match env");
    return finite->atoms().at(rng.categorical(finite->weights()));
  }
  return sample_uniform_sphere(dim, rng);
}

// Finite priors pass through; the uniform sphere becomes `particles` i.i.d.
// atoms with equal weight.
inline FinitePrior discretize_prior(const PriorSpec& prior, std::size_t dim,
                                    std::size_t particles, RngStream& rng) {
  if (const auto* finite = std::get_if<FinitePrior>(&prior)) {
    if (finite->dim() != dim) throw DimensionError("prior dimension does not match");
    return *finite;
  }
  if (particles == 0) throw ConfigError("particle count must be >= 1");
  AtomSet atoms(dim);
  for (std::size_t i = 0; i < particles; ++i) atoms.push_back(sample_uniform_sphere(dim, rng));
  return FinitePrior::uniform(std::move(atoms));
}

inline constexpr double kActionNormTolerance = 1e-12;

inline void check_action(std::span<const double> action, std::size_t dim) {
  if (action.size() != dim) throw DimensionError("action dimension mismatch");
  if (norm(action) > 1.0 + kActionNormTolerance) {
    throw DimensionError("action lies outside the unit ball");
  }
}

struct HistoryEntry {
  std::vector<double> action;
  int reward;
  std::size_t step;
};

// Hidden parameter theta* on the sphere; each pull returns a Bernoulli
// reward with success probability logistic(beta, <a, theta*>).
class LogisticBanditEnv {
 public:
  // theta* is drawn from `prior` using `rng`; the same stream then feeds
  // the reward draws.
  LogisticBanditEnv(std::size_t dim, Slope beta, const PriorSpec& prior, RngStream rng)
      : dim_(dim), beta_(beta), rng_(std::move(rng)), theta_(draw_from_prior(prior, dim, rng_)) {}

  LogisticBanditEnv(Slope beta, UnitVector theta_star, RngStream rng)
      : dim_(theta_star.dim()), beta_(beta), rng_(std::move(rng)), theta_(std::move(theta_star)) {}

  double success_probability(std::span<const double> action) const {
    check_action(action, dim_);
    return logistic(beta_, dot(action, theta_.coords()));
  }

  int pull(std::span<const double> action) {
    const double p = success_probability(action);
    const int reward = rng_.bernoulli(p) ? 1 : 0;
    history_.push_back({{action.begin(), action.end()}, reward, step_});
    ++step_;
    return reward;
  }

  // Test/evaluation accessor; the agent never sees it.
  const UnitVector& optimal_action() const noexcept { return theta_; }
  double optimal_success_probability() const noexcept { return logistic(beta_, 1.0); }

  std::size_t dim() const noexcept { return dim_; }
  Slope beta() const noexcept { return beta_; }
  std::size_t step() const noexcept { return step_; }
  const std::vector<HistoryEntry>& history() const noexcept { return history_; }

 private:
  std::size_t dim_;
  Slope beta_;
  RngStream rng_;
  UnitVector theta_;
  std::size_t step_ = 1;
  std::vector<HistoryEntry> history_;
};

}  // namespace logts
