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

// Thompson sampling with an exact finite-support posterior.
//
// Each round samples an atom from the posterior and plays it (the optimal
// action for parameter theta on the sphere is theta itself), observes a
// Bernoulli reward and applies Bayes' rule to every atom. Weights are kept
// in log space and renormalised once per update.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "logts/bandit_env.hpp"
#include "logts/core_math.hpp"
#include "logts/finite_support.hpp"
#include "logts/geometry.hpp"
#include "logts/rng.hpp"

namespace logts {

class AgentState {
 public:
  AgentState(Posterior prior, Slope beta)
      : posterior_(std::move(prior)), beta_(beta), log_weights_(posterior_.size()) {
    const auto w = posterior_.weights();
    for (std::size_t i = 0; i < w.size(); ++i) {
      log_weights_[i] = w[i] > 0.0 ? std::log(w[i]) : -std::numeric_limits<double>::infinity();
    }
  }

  struct Draw {
    UnitVector action;
    std::size_t index;
  };

  Draw sample_action(RngStream& rng) const {
    const std::size_t i = rng.categorical(posterior_.weights());
    return {posterior_.atoms().at(i), i};
  }

  void update(std::span<const double> action, int reward) {
    if (reward != 0 && reward != 1) throw ConfigError("reward must be 0 or 1");
    check_action(action, posterior_.dim());
    const auto& atoms = posterior_.atoms();
    const std::size_t n = atoms.size();
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      log_weights_[i] += log_likelihood(beta_, dot(action, atoms[i]), reward);
      top = std::max(top, log_weights_[i]);
    }
    // Logistic likelihoods are strictly positive, so some weight survives.
    assert(std::isfinite(top));
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = std::exp(log_weights_[i] - top);
      total += w[i];
    }
    const double log_total = top + std::log(total);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] /= total;
      log_weights_[i] -= log_total;
    }
    posterior_.reweight(std::move(w));
    ++step_;
  }

  const Posterior& posterior() const noexcept { return posterior_; }
  Slope beta() const noexcept { return beta_; }
  std::size_t step() const noexcept { return step_; }

 private:
  Posterior posterior_;
  Slope beta_;
  std::vector<double> log_weights_;
  std::size_t step_ = 1;
};

// Continuous priors are discretised into `particles` i.i.d. atoms; finite
// priors are used verbatim.
inline AgentState init_agent(const PriorSpec& prior, std::size_t dim, std::size_t particles,
                             RngStream& rng, Slope beta) {
  return AgentState(discretize_prior(prior, dim, particles, rng), beta);
}

struct StepRecord {
  std::size_t t;
  UnitVector action;
  std::size_t sampled_index;
  int reward;
};

// Called once per round after the pull, with the posterior the action was
// sampled from (before the update).
using StepObserver = std::function<void(const StepRecord&, const Posterior&)>;

inline std::vector<StepRecord> run_episode(LogisticBanditEnv& env, AgentState& agent,
                                           std::size_t horizon, RngStream& policy_rng,
                                           const StepObserver& observer = {}) {
  std::vector<StepRecord> trajectory;
  trajectory.reserve(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    auto draw = agent.sample_action(policy_rng);
    const int reward = env.pull(draw.action.coords());
    trajectory.push_back({t, std::move(draw.action), draw.index, reward});
    if (observer) observer(trajectory.back(), agent.posterior());
    agent.update(trajectory.back().action.coords(), reward);
  }
  return trajectory;
}

inline void write_posterior(std::ostream& os, const Posterior& p) { write_finite_support(os, p); }

}  // namespace logts
