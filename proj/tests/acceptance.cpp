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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
// any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "logts/experiment.hpp"
#include "logts/instances.hpp"
#include "logts/ts_agent.hpp"
#include "oracles.hpp"

namespace {

using logts::Slope;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) { return logts::detail::format_real(x); }

// Criterion 1: gamma <= 4.5 d + 1e-9 over random and structured posteriors.
Outcome info_ratio_bound() {
  logts::ScanConfig cfg;
  cfg.dims = {1, 2, 3, 4, 5};
  cfg.betas = {0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
  cfg.min_atoms = 2;
  cfg.max_atoms = 50;
  cfg.trials = 10000;
  cfg.structured = true;
  cfg.keep_rows = false;
  cfg.seed = 20261016;
  const auto res = logts::info_ratio_scan(cfg);
  std::ostringstream d;
  d << res.evaluated << " posteriors, " << res.degenerate << " degenerate, max gamma/d "
    << fmt(res.max_gamma_over_d) << ", violations " << res.violations.size();
  return {res.violations.empty() && res.evaluated >= 30u * 50000u, d.str()};
}

// Criterion 2: the two-atom posterior at slope 2 against closed forms.
Outcome canonical_case() {
  const auto rep = logts::information_ratio(logts::canonical_posterior(), Slope(2.0));
  const oracle::real regret_ref = std::tanh(1.0L) / 2.0L;
  const oracle::real mi_ref = std::log(2.0L) - oracle::h2(oracle::sigmoid(2.0L));
  const double regret_err = std::abs(rep.expected_regret - static_cast<double>(regret_ref));
  const double mi_err = std::abs(rep.mutual_info - static_cast<double>(mi_ref));
  const bool gamma_ok = rep.gamma && std::abs(*rep.gamma - 0.4423) <= 1e-4;
  std::ostringstream d;
  d << "regret " << fmt(rep.expected_regret) << " (err " << regret_err << "), MI "
    << fmt(rep.mutual_info) << " (err " << mi_err << "), gamma "
    << (rep.gamma ? fmt(*rep.gamma) : "none");
  return {regret_err <= 1e-12 && mi_err <= 1e-12 && gamma_ok, d.str()};
}

// Criteria 3 and 8 share one sweep.
const logts::LemmaResult& lemma_sweep() {
  static const logts::LemmaResult res = [] {
    logts::LemmaConfig cfg;
    cfg.trials = 10000;
    cfg.keep_rows = false;
    cfg.seed = 20261016;
    return logts::run_lemma_checks(cfg);
  }();
  return res;
}

Outcome tally_outcome(const std::function<bool(const std::string&)>& selected,
                      const std::map<std::string, std::size_t>& min_trials) {
  const auto& res = lemma_sweep();
  bool pass = true;
  std::ostringstream d;
  for (const auto& [name, t] : res.tally) {
    if (!selected(name)) continue;
    d << name << " " << t.checked << "/" << t.violations << "v/" << t.skipped << "s; ";
    pass = pass && t.violations == 0 && t.checked > 0;
  }
  for (const auto& [name, count] : min_trials) {
    const auto it = res.tally.find(name);
    if (it == res.tally.end() || it->second.checked + it->second.skipped < count) {
      d << "missing trials for " << name << "; ";
      pass = false;
    }
  }
  return {pass, d.str()};
}

Outcome lemma_oracles() {
  return tally_outcome(
      [](const std::string& n) { return n.rfind("loglik_lipschitz", 0) != 0; },
      {{"mi_ge_2var", 100000},
       {"mi_lower_bound", 10000},
       {"squared_regret_upper", 10000},
       {"inner_product_d", 10000},
       {"ratio_exp_var_surrogate", 10000},
       {"ratio_exp_var_limit_phi", 10000},
       {"variance_ratio_limit", 100000},
       {"beta_monotonicity@1", 10000}});
}

Outcome lipschitz() {
  return tally_outcome([](const std::string& n) { return n.rfind("loglik_lipschitz", 0) == 0; },
                       {{"loglik_lipschitz@1", 100000}, {"loglik_lipschitz@10", 100000}});
}

logts::FinitePrior plus_minus() {
  logts::AtomSet atoms(1);
  atoms.push_back(std::vector<double>{1.0});
  atoms.push_back(std::vector<double>{-1.0});
  return logts::FinitePrior::uniform(std::move(atoms));
}

// Criterion 4: mean cumulative regret + 3 stderr below the closed-form bound.
Outcome regret_vs_bound() {
  struct Case {
    std::size_t d;
    double beta;
    std::size_t horizon;
  };
  const Case cases[] = {{1, 2.0, 500}, {2, 1.0, 2000}, {2, 20.0, 2000}, {3, 5.0, 1000}};
  bool pass = true;
  std::ostringstream d;
  for (const auto& c : cases) {
    logts::ExperimentConfig cfg;
    cfg.dim = c.d;
    cfg.beta = c.beta;
    cfg.horizon = c.horizon;
    cfg.episodes = 200;
    cfg.particles = 500;
    if (c.d == 1) cfg.prior = plus_minus();
    cfg.metric_stride = 0;
    cfg.keep_trace = false;
    cfg.seed = 4000 + c.d;
    const auto res = logts::run_experiment(cfg);
    const auto& s = res.summary;
    const double upper = s.cum_regret_expected.mean + 3.0 * s.cum_regret_expected.stderr_;
    const bool ok = upper <= s.bound_main;
    pass = pass && ok;
    d << "(" << c.d << "," << c.beta << "," << c.horizon << ") " << fmt(s.cum_regret_expected.mean)
      << "+3*" << fmt(s.cum_regret_expected.stderr_) << " vs " << fmt(s.bound_main) << "; ";
  }
  return {pass, d.str()};
}

// Criterion 5: quantized bound with a constructed, validated net.
Outcome quantized_bound() {
  logts::ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.beta = 5.0;
  cfg.horizon = 1000;
  cfg.episodes = 200;
  cfg.particles = 500;
  cfg.metric_stride = 0;
  cfg.keep_trace = false;
  cfg.build_net = true;
  cfg.seed = 5000;
  const auto res = logts::run_experiment(cfg);
  const auto& s = res.summary;
  const double eps = 2.0 / (5.0 * 1000.0);
  const double covering = 2.0 * std::log(1.0 + 2.0 / eps);
  const bool covered = res.net && res.net->certificate.empirical_radius <= eps &&
                       res.net->certificate.validation_samples > 0;
  const bool eps_ok = s.epsilon == eps;
  const bool regret_ok = s.cum_regret_expected.mean <= s.bound_quantized;
  const bool lemma_ok = s.entropy_from_net && s.entropy_bound <= covering;
  std::ostringstream d;
  d << "|net| " << (s.net_size ? *s.net_size : 0) << ", radius "
    << (res.net ? fmt(res.net->certificate.empirical_radius) : "none") << " <= " << fmt(eps)
    << ", log|net| " << fmt(s.entropy_bound) << " <= " << fmt(covering) << ", regret "
    << fmt(s.cum_regret_expected.mean) << " <= " << fmt(s.bound_quantized);
  return {covered && eps_ok && regret_ok && lemma_ok, d.str()};
}

// Criterion 6: incremental posterior against the full-likelihood product.
Outcome exact_bayes() {
  logts::RngStream rng(6000);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = logts::uniform_count(rng, 1, 5);
    const std::size_t n = logts::uniform_count(rng, 1, 20);
    const double beta = logts::log_uniform(rng, 0.1, 100.0);
    const auto family = logts::kPosteriorFamilies[logts::uniform_count(rng, 0, 4)];
    const auto prior = logts::random_posterior(family, d, n, rng);
    logts::AgentState agent(prior, Slope(beta));
    std::vector<std::vector<double>> actions;
    std::vector<int> rewards;
    const std::size_t len = logts::uniform_count(rng, 0, 50);
    for (std::size_t t = 0; t < len; ++t) {
      const auto a = logts::sample_uniform_sphere(d, rng);
      actions.emplace_back(a.coords().begin(), a.coords().end());
      rewards.push_back(rng.bernoulli(0.5) ? 1 : 0);
      agent.update(actions.back(), rewards.back());
    }
    std::vector<oracle::real> w(prior.size());
    oracle::real total = 0.0L;
    for (std::size_t i = 0; i < prior.size(); ++i) {
      oracle::real like = prior.weights()[i];
      for (std::size_t t = 0; t < len; ++t) {
        const auto z = beta * oracle::dot(actions[t], prior.atoms()[i]);
        like *= oracle::sigmoid(rewards[t] == 1 ? z : -z);
      }
      w[i] = like;
      total += like;
    }
    for (std::size_t i = 0; i < prior.size(); ++i) {
      const double err = std::abs(agent.posterior().weights()[i] - static_cast<double>(w[i] / total));
      worst = std::max(worst, std::isfinite(err) ? err : 1.0);
    }
  }
  return {worst <= 1e-10, "1000 histories, max weight error " + fmt(worst)};
}

// Criterion 7: surrogate dominance and ratio monotonicity, breakpoint trends.
Outcome surrogate_properties() {
  bool pass = true;
  std::ostringstream d;
  for (double b : {0.5, 1.0, 2.0, 3.0, 5.0, 20.0, 100.0}) {
    const logts::LogisticSurrogate sur{Slope(b)};
    bool dominates = true;
    for (int k = 0; k <= 20000; ++k) {
      const double x = 2.0 * k / 20000.0;
      dominates = dominates && sur(x) >= logts::psi(Slope(b), x);
    }
    const bool ratio_ok = logts::ratio_nondecreasing_on_grid(sur, 2.0, 20000);
    if (!dominates || !ratio_ok) d << "beta " << b << " fails; ";
    pass = pass && dominates && ratio_ok;
  }
  const logts::FigureConfig fig;
  double prev_delta = 2.0, prev_ratio = 0.0;
  bool trends = true;
  for (double b : fig.table_betas) {
    const auto bp = logts::delta_beta(Slope(b));
    trends = trends && bp.delta <= prev_delta + 1e-10 && bp.ratio_at_delta >= prev_ratio - 1e-12;
    prev_delta = bp.delta;
    prev_ratio = bp.ratio_at_delta;
  }
  pass = pass && trends;
  const double delta_one = logts::delta_beta(Slope(1.0)).delta;
  const auto grid = oracle::psi_ratio_grid_max(1.0L);
  const bool delta_ok = std::abs(delta_one - 1.5) <= 0.05 &&
                        std::abs(delta_one - static_cast<double>(grid.x)) <= 0.05;
  pass = pass && delta_ok;
  d << "7 slopes checked on 20001-point grids; trends over " << fig.table_betas.size()
    << " slopes " << (trends ? "ok" : "broken") << "; delta_1 " << fmt(delta_one) << " vs grid "
    << fmt(static_cast<double>(grid.x));
  return {pass, d.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Criterion 9: the CLI at --jobs 1 and --jobs 8 writes identical bytes.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "logts_acceptance_determinism";
  fs::remove_all(base);
  const std::string args =
      " simulate --dim 2 --beta 2 --horizon 200 --episodes 16 --particles 100 --seed 2026";
  std::vector<std::string> outputs;
  for (int jobs : {1, 8}) {
    const fs::path dir = base / ("jobs" + std::to_string(jobs));
    fs::create_directories(dir);
    const std::string cmd = std::string(LOGTS_CLI_PATH) + args + " --jobs " + std::to_string(jobs) +
                            " --out " + dir.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      return {false, "simulate exited with status " + std::to_string(status)};
    }
    outputs.push_back(slurp(dir / "trace.csv"));
  }
  fs::remove_all(base);
  const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
  return {same, std::to_string(outputs[0].size()) + " bytes, " + (same ? "identical" : "differ")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "information-ratio bound", info_ratio_bound},
      {2, "canonical closed-form case", canonical_case},
      {3, "lemma oracles", lemma_oracles},
      {4, "regret vs main bound", regret_vs_bound},
      {5, "quantized bound", quantized_bound},
      {6, "exact-Bayes equivalence", exact_bayes},
      {7, "surrogate and breakpoint properties", surrogate_properties},
      {8, "log-likelihood Lipschitz", lipschitz},
      {9, "determinism across jobs", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("CRITERION %d %s: %s [%.1fs] %s\n", c.id, out.pass ? "PASS" : "FAIL", c.name, secs,
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
