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

#include "logts/ts_agent.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "logts/instances.hpp"
#include "oracles.hpp"

namespace {

using logts::AgentState;
using logts::AtomSet;
using logts::Posterior;
using logts::RngStream;
using logts::Slope;
using logts::UnitVector;

Posterior plus_minus() {
  AtomSet atoms(1);
  atoms.push_back(std::vector<double>{1.0});
  atoms.push_back(std::vector<double>{-1.0});
  return Posterior::uniform(std::move(atoms));
}

// Posterior by multiplying every likelihood factor from scratch.
std::vector<long double> brute_force_posterior(const Posterior& prior, double beta,
                                               const std::vector<std::vector<double>>& actions,
                                               const std::vector<int>& rewards) {
  const std::size_t n = prior.size();
  std::vector<long double> w(n);
  long double total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double like = prior.weights()[i];
    for (std::size_t t = 0; t < actions.size(); ++t) {
      const auto z = beta * oracle::dot(actions[t], prior.atoms()[i]);
      like *= oracle::sigmoid(rewards[t] == 1 ? z : -z);
    }
    w[i] = like;
    total += like;
  }
  for (auto& x : w) x /= total;
  return w;
}

TEST(Agent, TwoAtomUpdateFrozen) {
  AgentState agent(plus_minus(), Slope(2.0));
  agent.update(std::vector<double>{1.0}, 1);
  EXPECT_NEAR(agent.posterior().weights()[0], 0.8807970779778824441, 1e-15);
  EXPECT_NEAR(agent.posterior().weights()[1], 0.1192029220221175559, 1e-15);
  EXPECT_EQ(agent.step(), 2u);
}

TEST(Agent, UpdateValidatesInput) {
  AgentState agent(plus_minus(), Slope(2.0));
  EXPECT_THROW(agent.update(std::vector<double>{1.0}, 2), logts::ConfigError);
  EXPECT_THROW(agent.update(std::vector<double>{1.0, 0.0}, 1), logts::DimensionError);
  EXPECT_THROW(agent.update(std::vector<double>{1.5}, 1), logts::DimensionError);
}

TEST(Agent, ExactBayesMatchesBruteForce) {
  RngStream rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = logts::uniform_count(rng, 1, 4);
    const std::size_t n = logts::uniform_count(rng, 1, 20);
    const double beta = logts::log_uniform(rng, 0.1, 50.0);
    const auto prior = logts::random_posterior(logts::PosteriorFamily::kDirichlet, d, n, rng);
    AgentState agent(prior, Slope(beta));
    std::vector<std::vector<double>> actions;
    std::vector<int> rewards;
    const std::size_t len = logts::uniform_count(rng, 0, 50);
    for (std::size_t t = 0; t < len; ++t) {
      const auto a = logts::sample_uniform_sphere(d, rng);
      actions.emplace_back(a.coords().begin(), a.coords().end());
      rewards.push_back(rng.bernoulli(0.5) ? 1 : 0);
      agent.update(actions.back(), rewards.back());
    }
    const auto ref = brute_force_posterior(prior, beta, actions, rewards);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_NEAR(agent.posterior().weights()[i], static_cast<double>(ref[i]), 1e-10)
          << "trial " << trial << " atom " << i;
    }
  }
}

TEST(Agent, ZeroPriorWeightStaysZero) {
  AtomSet atoms(1);
  atoms.push_back(std::vector<double>{1.0});
  atoms.push_back(std::vector<double>{-1.0});
  AgentState agent(Posterior(std::move(atoms), {1.0, 0.0}), Slope(1.0));
  for (int k = 0; k < 10; ++k) agent.update(std::vector<double>{-1.0}, 1);
  EXPECT_EQ(agent.posterior().weights()[1], 0.0);
  EXPECT_EQ(agent.posterior().weights()[0], 1.0);
}

TEST(Agent, ExtremeSlopeDoesNotCollapseToNaN) {
  AgentState agent(plus_minus(), Slope(1e4));
  for (int k = 0; k < 20; ++k) agent.update(std::vector<double>{1.0}, k % 2);
  const auto w = agent.posterior().weights();
  EXPECT_TRUE(std::isfinite(w[0]) && std::isfinite(w[1]));
  EXPECT_NEAR(w[0] + w[1], 1.0, 1e-12);
}

TEST(Agent, SamplingFollowsPosterior) {
  AtomSet atoms(1);
  atoms.push_back(std::vector<double>{1.0});
  atoms.push_back(std::vector<double>{-1.0});
  AgentState agent(Posterior(std::move(atoms), {0.25, 0.75}), Slope(1.0));
  RngStream rng(2);
  int second = 0;
  for (int k = 0; k < 40000; ++k) {
    const auto draw = agent.sample_action(rng);
    second += draw.index == 1;
    ASSERT_EQ(draw.action, agent.posterior().atoms().at(draw.index));
  }
  EXPECT_NEAR(second / 40000.0, 0.75, 0.01);
}

TEST(RunEpisode, ObserverSeesPreUpdatePosterior) {
  RngStream rng(3);
  AgentState agent(plus_minus(), Slope(2.0));
  logts::LogisticBanditEnv env(Slope(2.0), UnitVector::basis(1, 0), RngStream(4));
  std::vector<std::vector<double>> seen;
  const auto traj = logts::run_episode(env, agent, 25, rng,
                                       [&](const logts::StepRecord& rec, const Posterior& pre) {
                                         EXPECT_EQ(rec.t, seen.size() + 1);
                                         seen.emplace_back(pre.weights().begin(), pre.weights().end());
                                       });
  ASSERT_EQ(traj.size(), 25u);
  ASSERT_EQ(seen.size(), 25u);
  EXPECT_EQ(seen[0], (std::vector<double>{0.5, 0.5}));
  // Replay the trajectory: the weights the observer saw at t+1 are the
  // posterior after t updates.
  AgentState replay(plus_minus(), Slope(2.0));
  for (std::size_t t = 0; t < traj.size(); ++t) {
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(seen[t][i], replay.posterior().weights()[i]);
    replay.update(traj[t].action.coords(), traj[t].reward);
  }
  EXPECT_EQ(env.history().size(), 25u);
}

TEST(RunEpisode, PosteriorConcentratesOnTruth) {
  RngStream rng(5);
  AgentState agent(plus_minus(), Slope(2.0));
  logts::LogisticBanditEnv env(Slope(2.0), UnitVector::basis(1, 0, -1.0), RngStream(6));
  logts::run_episode(env, agent, 300, rng);
  EXPECT_GT(agent.posterior().weights()[1], 0.999);
}

}  // namespace
