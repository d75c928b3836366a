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

// Seeded multi-episode regret experiments, closed-form regret bounds, the
// information-ratio scan, the lemma sweep and the figure tables.
//
// Every unit of work (episode, scan trial, lemma trial) draws from its own
// stream, RngStream::for_task(seed, index, tag), and writes into its own
// slot, so results do not depend on the number of worker threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "logts/bandit_env.hpp"
#include "logts/core_math.hpp"
#include "logts/errors.hpp"
#include "logts/finite_support.hpp"
#include "logts/geometry.hpp"
#include "logts/info_metrics.hpp"
#include "logts/instances.hpp"
#include "logts/rng.hpp"
#include "logts/ts_agent.hpp"

namespace logts {

// ---------------------------------------------------------------------------
// Bounds

// 3 d sqrt(T log sqrt(3 + 6 beta T / d))
inline double regret_bound_main(std::size_t d, double beta, double horizon) {
  if (d == 0 || !(beta > 0.0) || horizon < 0.0) throw ConfigError("regret_bound_main: bad input");
  const double dd = static_cast<double>(d);
  return 3.0 * dd * std::sqrt(horizon * 0.5 * std::log(3.0 + 6.0 * beta * horizon / dd));
}

// sqrt(gamma T (H + eps beta T))
inline double regret_bound_quantized(double gamma, double horizon, double entropy, double epsilon,
                                     double beta) {
  if (!(gamma > 0.0) || horizon < 0.0 || entropy < 0.0 || epsilon < 0.0 || beta < 0.0) {
    throw ConfigError("regret_bound_quantized: bad input");
  }
  return std::sqrt(gamma * horizon * (entropy + epsilon * beta * horizon));
}

// d / (beta T), clipped to (0, 2].
inline double default_epsilon(std::size_t d, double beta, std::size_t horizon) {
  if (horizon == 0) return 2.0;
  return std::min(2.0, static_cast<double>(d) / (beta * static_cast<double>(horizon)));
}

// ---------------------------------------------------------------------------
// Parallel map

// Runs fn(i) for i in [0, count) on up to `jobs` threads. If any call
// throws, the exception from the lowest index is rethrown after all
// workers finish.
template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------------------
// Regret experiments

struct ExperimentConfig {
  std::size_t dim = 2;
  double beta = 1.0;
  std::size_t horizon = 100;
  std::size_t episodes = 10;
  std::size_t particles = 200;
  std::optional<double> epsilon;  // default d / (beta T)
  std::uint64_t seed = 0;
  PriorSpec prior = UniformSpherePrior{};
  std::size_t jobs = 1;
  // Information-ratio metrics cost O(N^2) per step; they are evaluated on
  // steps 1, 1 + stride, ... and skipped entirely when stride is 0.
  std::size_t metric_stride = 1;
  bool keep_trace = true;
  // Build an eps-net for the quantized bound; otherwise the covering-number
  // bound d log(1 + 2/eps) stands in for log|net|.
  bool build_net = false;

  void validate() const {
    if (dim == 0) throw ConfigError("dim must be >= 1");
    (void)Slope{beta};
    if (episodes == 0) throw ConfigError("episodes must be >= 1");
    if (particles == 0) throw ConfigError("particles must be >= 1");
    if (jobs == 0) throw ConfigError("jobs must be >= 1");
    if (epsilon && (!(*epsilon > 0.0) || *epsilon > 2.0)) {
      throw ConfigError("epsilon must lie in (0, 2]");
    }
    if (const auto* finite = std::get_if<FinitePrior>(&prior); finite && finite->dim() != dim) {
      throw ConfigError("prior dimension " + std::to_string(finite->dim()) +
                        " does not match dim " + std::to_string(dim));
    }
  }

  double effective_epsilon() const {
    return epsilon ? *epsilon : default_epsilon(dim, beta, horizon);
  }
};

enum class GammaFlag { kOk, kDegenerate, kSkipped, kAboveBound };

inline std::string_view gamma_flag_name(GammaFlag f) {
  switch (f) {
    case GammaFlag::kOk: return "ok";
    case GammaFlag::kDegenerate: return "degenerate";
    case GammaFlag::kSkipped: return "skipped";
    case GammaFlag::kAboveBound: return "above_bound";
  }
  return "unknown";
}

struct TraceRow {
  std::size_t episode = 0;
  std::size_t t = 0;
  double action_dot_theta = 0.0;
  int reward = 0;
  double inst_regret_expected = 0.0;  // logistic(b, 1) - logistic(b, <A_t, theta*>)
  double inst_regret_realized = 0.0;  // R*_t - R_t with a counterfactual draw for R*_t
  double cum_regret_realized = 0.0;
  std::optional<double> mutual_info;
  std::optional<double> gamma;
  GammaFlag flag = GammaFlag::kSkipped;
};

struct EpisodeOutcome {
  std::vector<TraceRow> rows;
  double cum_regret_expected = 0.0;
  double cum_regret_realized = 0.0;
  double max_gamma = 0.0;
  std::size_t gamma_violations = 0;
};

inline EpisodeOutcome run_single_episode(const ExperimentConfig& cfg, std::size_t episode) {
  const Slope beta{cfg.beta};
  auto particle_rng = RngStream::for_task(cfg.seed, episode, StreamTag::kParticles);
  auto prior_rng = RngStream::for_task(cfg.seed, episode, StreamTag::kPrior);
  auto policy_rng = RngStream::for_task(cfg.seed, episode, StreamTag::kPolicy);
  auto counterfactual_rng = RngStream::for_task(cfg.seed, episode, StreamTag::kCounterfactual);

  // Matched prior: theta* is drawn from the same finite prior the agent holds.
  auto prior = discretize_prior(cfg.prior, cfg.dim, cfg.particles, particle_rng);
  auto theta_star = prior.atoms().at(prior_rng.categorical(prior.weights()));
  LogisticBanditEnv env(beta, theta_star,
                        RngStream::for_task(cfg.seed, episode, StreamTag::kReward));
  AgentState agent(std::move(prior), beta);

  EpisodeOutcome out;
  if (cfg.keep_trace) out.rows.reserve(cfg.horizon);
  const double best = logistic(beta, 1.0);
  const double gamma_cap = information_ratio_bound(cfg.dim) + kBoundTolerance;

  auto observe = [&](const StepRecord& step, const Posterior& pre) {
    TraceRow row;
    row.episode = episode;
    row.t = step.t;
    row.action_dot_theta = dot(step.action.coords(), theta_star.coords());
    row.reward = step.reward;
    row.inst_regret_expected = best - logistic(beta, row.action_dot_theta);
    const int best_reward = counterfactual_rng.bernoulli(best) ? 1 : 0;
    row.inst_regret_realized = best_reward - step.reward;
    out.cum_regret_expected += row.inst_regret_expected;
    out.cum_regret_realized += row.inst_regret_realized;
    row.cum_regret_realized = out.cum_regret_realized;
    if (cfg.metric_stride > 0 && (step.t - 1) % cfg.metric_stride == 0) {
      const auto report = information_ratio(pre, beta, step.t);
      row.mutual_info = report.mutual_info;
      row.gamma = report.gamma;
      if (report.degenerate()) {
        row.flag = GammaFlag::kDegenerate;
      } else {
        out.max_gamma = std::max(out.max_gamma, *report.gamma);
        row.flag = *report.gamma > gamma_cap ? GammaFlag::kAboveBound : GammaFlag::kOk;
        if (row.flag == GammaFlag::kAboveBound) ++out.gamma_violations;
      }
    }
    if (cfg.keep_trace) out.rows.push_back(row);
  };
  run_episode(env, agent, cfg.horizon, policy_rng, observe);
  return out;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(std::span<const double> xs) {
  MeanStderr m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return m;
}

struct ExperimentSummary {
  MeanStderr cum_regret_expected;
  MeanStderr cum_regret_realized;
  double bound_main = 0.0;
  double bound_quantized = 0.0;
  double epsilon = 0.0;
  double entropy_bound = 0.0;    // log|net| or d log(1 + 2/eps)
  bool entropy_from_net = false;
  std::optional<std::size_t> net_size;
  double max_gamma_over_d = 0.0;
  std::size_t gamma_violations = 0;

  bool within_bounds() const {
    return cum_regret_expected.mean <= bound_main && cum_regret_expected.mean <= bound_quantized;
  }
};

struct ExperimentResult {
  std::vector<TraceRow> trace;  // ordered by (episode, t)
  std::vector<double> episode_regret_expected;
  std::vector<double> episode_regret_realized;
  ExperimentSummary summary;
  std::optional<EpsNet> net;
};

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<EpisodeOutcome> outcomes(cfg.episodes);
  parallel_for(cfg.episodes, cfg.jobs,
               [&](std::size_t e) { outcomes[e] = run_single_episode(cfg, e); });

  ExperimentResult res;
  auto& s = res.summary;
  for (auto& o : outcomes) {
    res.episode_regret_expected.push_back(o.cum_regret_expected);
    res.episode_regret_realized.push_back(o.cum_regret_realized);
    s.max_gamma_over_d = std::max(s.max_gamma_over_d, o.max_gamma / static_cast<double>(cfg.dim));
    s.gamma_violations += o.gamma_violations;
    res.trace.insert(res.trace.end(), o.rows.begin(), o.rows.end());
  }
  s.cum_regret_expected = mean_stderr(res.episode_regret_expected);
  s.cum_regret_realized = mean_stderr(res.episode_regret_realized);

  const double horizon = static_cast<double>(cfg.horizon);
  s.epsilon = cfg.effective_epsilon();
  s.bound_main = regret_bound_main(cfg.dim, cfg.beta, horizon);
  if (cfg.build_net) {
    auto net_rng = RngStream::for_task(cfg.seed, 0, StreamTag::kNet);
    res.net = build_eps_net(cfg.dim, s.epsilon, net_rng);
    s.net_size = res.net->size();
    s.entropy_bound = net_entropy_bound(*res.net);
    s.entropy_from_net = true;
  } else {
    s.entropy_bound = log_covering_upper(cfg.dim, s.epsilon);
  }
  s.bound_quantized = regret_bound_quantized(information_ratio_bound(cfg.dim), horizon,
                                             s.entropy_bound, s.epsilon, cfg.beta);
  return res;
}

inline constexpr const char* kTraceHeader =
    "episode,t,action_dot_theta,reward,inst_regret_expected,inst_regret_realized,"
    "cum_regret_realized,mutual_info,gamma,gamma_flag";

namespace detail {
inline std::string format_optional(const std::optional<double>& x) {
  return x ? format_real(*x) : std::string();
}

inline void write_csv_reals(std::ostream& os, std::span<const double> cols) {
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << format_real(cols[k]);
  os << '\n';
}
}  // namespace detail

inline void write_trace_csv(std::ostream& os, std::span<const TraceRow> rows) {
  os << kTraceHeader << '\n';
  for (const auto& r : rows) {
    os << r.episode << ',' << r.t << ',' << detail::format_real(r.action_dot_theta) << ','
       << r.reward << ',' << detail::format_real(r.inst_regret_expected) << ','
       << detail::format_real(r.inst_regret_realized) << ','
       << detail::format_real(r.cum_regret_realized) << ','
       << detail::format_optional(r.mutual_info) << ',' << detail::format_optional(r.gamma) << ','
       << gamma_flag_name(r.flag) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Bounds table

struct BoundsRow {
  std::size_t d = 0;
  double beta = 0.0;
  std::size_t horizon = 0;
  double bound_main = 0.0;
  double bound_quantized = 0.0;
  double net_size = 0.0;  // built net size, or ceil((1 + 2/eps)^d) when not built
  double entropy_bound = 0.0;
  bool net_built = false;
};

// Nets are built only when the covering bound (1 + 2/eps)^d is at most
// `net_limit`; beyond that the covering bound is reported instead.
inline BoundsRow bounds_row(std::size_t d, double beta, std::size_t horizon,
                            std::optional<double> epsilon, double net_limit, std::uint64_t seed) {
  (void)Slope{beta};
  if (d == 0 || horizon == 0) throw ConfigError("bounds: d and T must be >= 1");
  const double eps = epsilon ? *epsilon : default_epsilon(d, beta, horizon);
  if (!(eps > 0.0) || eps > 2.0) throw ConfigError("epsilon must lie in (0, 2]");
  BoundsRow row{d, beta, horizon};
  row.bound_main = regret_bound_main(d, beta, static_cast<double>(horizon));
  const auto cover = covering_number_bounds(d, eps);
  if (cover.upper <= net_limit) {
    auto rng = RngStream::for_task(seed, 0, StreamTag::kNet);
    const auto net = build_eps_net(d, eps, rng);
    row.net_size = static_cast<double>(net.size());
    row.entropy_bound = net_entropy_bound(net);
    row.net_built = true;
  } else {
    row.net_size = std::ceil(cover.upper);
    row.entropy_bound = log_covering_upper(d, eps);
  }
  row.bound_quantized = regret_bound_quantized(information_ratio_bound(d),
                                               static_cast<double>(horizon), row.entropy_bound,
                                               eps, beta);
  return row;
}

inline constexpr const char* kBoundsHeader =
    "d,beta,T,bound_main,bound_quantized,net_size,entropy_bound";

inline void write_bounds_csv(std::ostream& os, std::span<const BoundsRow> rows) {
  os << kBoundsHeader << '\n';
  for (const auto& r : rows) {
    os << r.d << ',' << detail::format_real(r.beta) << ',' << r.horizon << ','
       << detail::format_real(r.bound_main) << ',' << detail::format_real(r.bound_quantized)
       << ',' << detail::format_real(r.net_size) << ',' << detail::format_real(r.entropy_bound)
       << '\n';
  }
}

// ---------------------------------------------------------------------------
// Information-ratio scan

struct ScanConfig {
  std::vector<std::size_t> dims{1, 2, 3, 4, 5};
  std::vector<double> betas{0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
  std::size_t min_atoms = 2;
  std::size_t max_atoms = 50;
  std::size_t trials = 1000;  // per (d, beta, family)
  bool structured = true;     // add the antipodal/near-point-mass/simplex/cluster families
  bool keep_rows = true;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  void validate() const {
    if (dims.empty() || betas.empty()) throw ConfigError("scan: empty dim or beta list");
    for (auto d : dims) {
      if (d == 0) throw ConfigError("scan: dim must be >= 1");
    }
    for (double b : betas) (void)Slope{b};
    if (min_atoms == 0 || min_atoms > max_atoms) throw ConfigError("scan: bad atom range");
    if (jobs == 0) throw ConfigError("jobs must be >= 1");
  }
};

struct ScanRow {
  std::size_t d = 0;
  double beta = 0.0;
  std::string family;
  std::size_t trial = 0;
  std::size_t n_atoms = 0;
  double expected_regret = 0.0;
  double mutual_info = 0.0;
  std::optional<double> gamma;
  double gamma_over_d = 0.0;
  double running_max = 0.0;  // max gamma/d so far within this (d, beta)
  GammaFlag flag = GammaFlag::kOk;
};

struct ScanViolation {
  ScanRow row;
  Posterior posterior;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::size_t evaluated = 0;
  std::size_t degenerate = 0;
  double max_gamma_over_d = 0.0;
  std::vector<ScanViolation> violations;
};

// Uniform {+1, -1}: the closed-form reference case.
inline Posterior canonical_posterior() {
  AtomSet atoms(1);
  atoms.push_back(std::vector<double>{1.0});
  atoms.push_back(std::vector<double>{-1.0});
  return Posterior::uniform(std::move(atoms));
}

inline ScanResult info_ratio_scan(const ScanConfig& cfg) {
  cfg.validate();
  ScanResult res;
  const std::size_t families = cfg.structured ? kPosteriorFamilies.size() : 1;
  const std::size_t per_cell = families * cfg.trials;

  struct Slot {
    ScanRow row;
    std::optional<Posterior> posterior;  // kept only for violations
  };
  auto evaluate = [&](const Posterior& post, std::size_t d, double beta, std::string family,
                      std::size_t trial) {
    ScanRow row;
    row.d = d;
    row.beta = beta;
    row.family = std::move(family);
    row.trial = trial;
    const auto report = information_ratio(post, Slope{row.beta});
    row.n_atoms = post.size();
    row.expected_regret = report.expected_regret;
    row.mutual_info = report.mutual_info;
    row.gamma = report.gamma;
    Slot slot;
    if (report.degenerate()) {
      row.flag = GammaFlag::kDegenerate;
    } else {
      row.gamma_over_d = *report.gamma / static_cast<double>(row.d);
      row.flag = *report.gamma > report.bound + kBoundTolerance ? GammaFlag::kAboveBound
                                                                : GammaFlag::kOk;
      if (row.flag == GammaFlag::kAboveBound) slot.posterior = post;
    }
    slot.row = std::move(row);
    return slot;
  };

  std::size_t cell = 0;
  for (std::size_t d : cfg.dims) {
    for (double beta : cfg.betas) {
      std::vector<Slot> slots;
      if (d == 1 && cfg.trials > 0) {
        slots.push_back(evaluate(canonical_posterior(), 1, beta, "canonical", 0));
      }
      const std::size_t offset = slots.size();
      slots.resize(offset + per_cell);
      parallel_for(per_cell, cfg.jobs, [&](std::size_t k) {
        const std::size_t f = k / cfg.trials;
        const std::size_t trial = k % cfg.trials;
        auto rng = RngStream::for_task(cfg.seed, cell * per_cell + k, StreamTag::kScan);
        const auto family = kPosteriorFamilies[f];
        const std::size_t n = uniform_count(rng, cfg.min_atoms, cfg.max_atoms);
        const auto post = random_posterior(family, d, n, rng);
        slots[offset + k] = evaluate(post, d, beta, std::string(family_name(family)), trial);
      });
      double running = 0.0;
      for (auto& slot : slots) {
        ++res.evaluated;
        if (slot.row.flag == GammaFlag::kDegenerate) ++res.degenerate;
        running = std::max(running, slot.row.gamma_over_d);
        slot.row.running_max = running;
        if (slot.posterior) res.violations.push_back({slot.row, std::move(*slot.posterior)});
        if (cfg.keep_rows) res.rows.push_back(std::move(slot.row));
      }
      res.max_gamma_over_d = std::max(res.max_gamma_over_d, running);
      ++cell;
    }
  }
  return res;
}

inline constexpr const char* kScanHeader =
    "d,beta,family,trial,n_atoms,expected_regret,mutual_info,gamma,gamma_over_d,running_max,flag";

inline void write_scan_csv(std::ostream& os, std::span<const ScanRow> rows) {
  os << kScanHeader << '\n';
  for (const auto& r : rows) {
    os << r.d << ',' << detail::format_real(r.beta) << ',' << r.family << ',' << r.trial << ','
       << r.n_atoms << ',' << detail::format_real(r.expected_regret) << ','
       << detail::format_real(r.mutual_info) << ',' << detail::format_optional(r.gamma) << ','
       << detail::format_real(r.gamma_over_d) << ',' << detail::format_real(r.running_max) << ','
       << gamma_flag_name(r.flag) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Lemma sweep

struct LemmaConfig {
  // Base trial count; the scalar lemma, the limit variance ratio and the
  // Lipschitz check run 10x this many.
  std::size_t trials = 1000;
  std::vector<double> betas{0.5, 1.0, 2.0, 3.0, 5.0, 20.0};
  std::vector<double> monotonicity_betas{0.5, 1.0, 2.0, 5.0, 20.0};
  std::vector<double> lipschitz_betas{1.0, 10.0};
  bool keep_rows = true;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  void validate() const {
    if (betas.empty() || monotonicity_betas.empty() || lipschitz_betas.empty()) {
      throw ConfigError("lemma-check: empty beta list");
    }
    for (double b : betas) (void)Slope{b};
    for (double b : monotonicity_betas) (void)Slope{b};
    for (double b : lipschitz_betas) (void)Slope{b};
    if (jobs == 0) throw ConfigError("jobs must be >= 1");
  }
};

struct LemmaRow {
  std::string lemma;
  std::size_t trial = 0;
  LemmaCheck check;
};

struct LemmaTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;  // degenerate instances excluded from the claim
};

struct LemmaResult {
  std::vector<LemmaRow> rows;
  std::map<std::string, LemmaTally> tally;

  std::size_t total_violations() const {
    std::size_t v = 0;
    for (const auto& [name, t] : tally) v += t.violations;
    return v;
  }
};

namespace detail {

// Runs `count` trials of one lemma; `trial_fn(rng, trial)` returns the
// evaluated check or nullopt for an excluded (degenerate) instance.
template <class TrialFn>
void run_lemma(LemmaResult& res, const LemmaConfig& cfg, const std::string& name,
               std::uint64_t lemma_index, std::size_t count, TrialFn&& trial_fn) {
  std::vector<std::optional<LemmaCheck>> slots(count);
  parallel_for(count, cfg.jobs, [&](std::size_t k) {
    auto rng = RngStream::for_task(cfg.seed ^ (lemma_index << 48), k, StreamTag::kLemma);
    slots[k] = trial_fn(rng, k);
  });
  auto& tally = res.tally[name];
  for (std::size_t k = 0; k < count; ++k) {
    if (!slots[k]) {
      ++tally.skipped;
      continue;
    }
    ++tally.checked;
    if (!slots[k]->holds) ++tally.violations;
    if (cfg.keep_rows) res.rows.push_back({name, k, *slots[k]});
  }
}

}  // namespace detail

inline LemmaResult run_lemma_checks(const LemmaConfig& cfg) {
  cfg.validate();
  LemmaResult res;
  const std::size_t base = cfg.trials;
  const std::size_t many = 10 * cfg.trials;

  std::vector<LogisticSurrogate> surrogates;
  for (double b : cfg.betas) surrogates.emplace_back(Slope{b});
  auto pick_surrogate = [&](RngStream& rng) -> const LogisticSurrogate& {
    return surrogates[uniform_count(rng, 0, surrogates.size() - 1)];
  };

  detail::run_lemma(res, cfg, "mi_ge_2var", 1, many, [](RngStream& rng, std::size_t) {
    const auto law = random_discrete_law(rng, 0.0, 1.0, 20);
    return std::optional(lemma_mi_ge_2var(law.atoms, law.weights));
  });

  detail::run_lemma(res, cfg, "mi_lower_bound", 2, base, [&](RngStream& rng, std::size_t) {
    const auto post = random_joint(rng, 4, 30);
    return std::optional(lemma_mi_lower_bound_check(post, pick_surrogate(rng).beta()));
  });

  detail::run_lemma(res, cfg, "squared_regret_upper", 3, base, [&](RngStream& rng, std::size_t) {
    const auto post = random_joint(rng, 4, 30);
    return std::optional(squared_regret_upper_check(post, pick_surrogate(rng)));
  });

  detail::run_lemma(res, cfg, "inner_product_d", 4, base, [](RngStream& rng, std::size_t) {
    const auto dist = random_pair_distribution(uniform_count(rng, 1, 6), rng);
    return std::optional(lemma_inner_product_d_check(dist));
  });

  // The ratio lemma needs f(0) >= 0 and f(x)/x non-decreasing; check each
  // f once on a grid and fail every trial of an f that does not qualify.
  const LogisticSurrogate ratio_surrogate(Slope{3.0});
  const bool surrogate_ok = ratio_nondecreasing_on_grid(ratio_surrogate);
  const bool limit_ok = ratio_nondecreasing_on_grid([](double x) { return limit_phi(x); });
  auto ratio_trial = [](auto f, bool precondition) {
    return [f, precondition](RngStream& rng, std::size_t) -> std::optional<LemmaCheck> {
      const auto law = random_discrete_law(rng, 0.0, 2.0, 20);
      auto check = lemma_ratio_exp_var_check(f, law.atoms, law.weights);
      if (check && !precondition) check->holds = false;
      return check;
    };
  };
  detail::run_lemma(res, cfg, "ratio_exp_var_surrogate", 5, base,
                    ratio_trial(ratio_surrogate, surrogate_ok));
  detail::run_lemma(res, cfg, "ratio_exp_var_limit_phi", 6, base,
                    ratio_trial([](double x) { return limit_phi(x); }, limit_ok));

  detail::run_lemma(res, cfg, "variance_ratio_limit", 7, many,
                    [](RngStream& rng, std::size_t) -> std::optional<LemmaCheck> {
                      const auto joint = random_joint(rng, 5, 40);
                      const auto v = variance_ratio_limit_check(joint);
                      if (v.degenerate) return std::nullopt;
                      return LemmaCheck{v.ratio, 9.0, 9.0 - v.ratio, v.holds_9};
                    });

  for (double b : cfg.monotonicity_betas) {
    const LogisticSurrogate sur(Slope{b});
    // Same lemma index for every beta, hence the same joints.
    detail::run_lemma(res, cfg, "beta_monotonicity@" + detail::format_real(b), 8, base,
                      [&sur](RngStream& rng, std::size_t) -> std::optional<LemmaCheck> {
                        const auto joint = random_joint(rng, 5, 40);
                        const auto m = beta_monotonicity_check(joint, sur);
                        if (m.degenerate) return std::nullopt;
                        return LemmaCheck{m.ratio_beta, m.ratio_limit,
                                          m.ratio_limit - m.ratio_beta, m.holds};
                      });
  }

  detail::run_lemma(res, cfg, "mi_chain_identity", 9, base,
                    [&](RngStream& rng, std::size_t) {
                      const auto post = random_joint(rng, 4, 20);
                      const auto c = mi_chain_identity_check(post, pick_surrogate(rng).beta());
                      const double gap = std::abs(c.joint_mi - c.conditional_mi);
                      return std::optional(LemmaCheck{c.joint_mi, c.conditional_mi, -gap, c.holds});
                    });

  std::uint64_t index = 10;
  for (double b : cfg.lipschitz_betas) {
    const Slope beta{b};
    detail::run_lemma(res, cfg, "loglik_lipschitz@" + detail::format_real(b), index++, many,
                      [beta](RngStream& rng, std::size_t) {
                        const auto a = sample_uniform_sphere(3, rng);
                        const auto t1 = sample_uniform_sphere(3, rng);
                        const auto t2 = sample_uniform_sphere(3, rng);
                        const int r = rng.bernoulli(0.5) ? 1 : 0;
                        const double lhs = std::abs(log_likelihood(beta, dot(a, t1), r) -
                                                    log_likelihood(beta, dot(a, t2), r));
                        const double rhs = beta.value() * distance(t1, t2);
                        return std::optional(LemmaCheck{
                            lhs, rhs, rhs - lhs, loglik_lipschitz_check(beta, a, t1, t2, r)});
                      });
  }
  return res;
}

inline constexpr const char* kLemmaHeader = "lemma,trial,lhs,rhs,margin,holds";

inline void write_lemma_csv(std::ostream& os, std::span<const LemmaRow> rows) {
  os << kLemmaHeader << '\n';
  for (const auto& r : rows) {
    os << r.lemma << ',' << r.trial << ',' << detail::format_real(r.check.lhs) << ','
       << detail::format_real(r.check.rhs) << ',' << detail::format_real(r.check.margin) << ','
       << (r.check.holds ? "true" : "false") << '\n';
  }
}

// ---------------------------------------------------------------------------
// Figure tables

struct FigureConfig {
  std::vector<double> curve_betas{1.0, 2.0, 5.0, 10.0, 20.0};
  std::size_t resolution = 401;  // grid points on [0, 2]
  std::vector<double> table_betas = [] {
    // log-spaced 0.1 .. 100
    std::vector<double> b;
    for (int k = 0; k <= 60; ++k) b.push_back(0.1 * std::pow(1000.0, k / 60.0));
    return b;
  }();

  void validate() const {
    if (resolution < 2) throw ConfigError("figure-data: resolution must be >= 2");
    for (double b : curve_betas) (void)Slope{b};
    for (double b : table_betas) (void)Slope{b};
  }
};

// One grid point of the transformation chain used to compare the surrogate
// with psi: f raises everything below psi(1) to psi(1), g caps psi at
// psi(delta), and h maps [psi(1), psi(delta)] affinely onto [0, 1].
struct ChainPoint {
  double beta = 0.0;
  double x = 0.0;
  double psi = 0.0;
  double surrogate = 0.0;
  double psi_over_x = 0.0;        // at x = 0, the limit psi'(0)
  double surrogate_over_x = 0.0;
  double f_psi = 0.0;
  double g_f_psi = 0.0;
  double f_surrogate = 0.0;
  double h_g_f_psi = 0.0;
  double h_f_surrogate = 0.0;
  double limit_psi = 0.0;
  double limit_phi = 0.0;
};

inline std::vector<ChainPoint> transformation_chain(const LogisticSurrogate& sur,
                                                    std::size_t resolution) {
  const Slope beta = sur.beta();
  const double floor_value = psi(beta, 1.0);
  const double cap = psi(beta, sur.breakpoint().delta);
  auto f = [&](double y) { return std::max(y, floor_value); };
  auto g = [&](double y) { return std::min(y, cap); };
  auto h = [&](double y) { return (y - floor_value) / (cap - floor_value); };
  std::vector<ChainPoint> pts;
  pts.reserve(resolution);
  for (std::size_t k = 0; k < resolution; ++k) {
    ChainPoint p;
    p.beta = beta.value();
    p.x = 2.0 * static_cast<double>(k) / static_cast<double>(resolution - 1);
    p.psi = psi(beta, p.x);
    p.surrogate = sur(p.x);
    p.psi_over_x = p.x > 0.0 ? p.psi / p.x : psi_derivative(beta, 0.0);
    p.surrogate_over_x = p.x > 0.0 ? p.surrogate / p.x : psi_derivative(beta, 0.0);
    p.f_psi = f(p.psi);
    p.g_f_psi = g(p.f_psi);
    p.f_surrogate = f(p.surrogate);
    p.h_g_f_psi = h(p.g_f_psi);
    p.h_f_surrogate = h(p.f_surrogate);
    p.limit_psi = limit_psi(p.x);
    p.limit_phi = limit_phi(p.x);
    pts.push_back(p);
  }
  return pts;
}

inline constexpr const char* kChainHeader =
    "beta,x,psi,surrogate,psi_over_x,surrogate_over_x,f_psi,g_f_psi,f_surrogate,h_g_f_psi,"
    "h_f_surrogate,limit_psi,limit_phi";

inline void write_chain_csv(std::ostream& os, std::span<const ChainPoint> pts) {
  os << kChainHeader << '\n';
  for (const auto& p : pts) {
    const double cols[] = {p.beta,      p.x,           p.psi,         p.surrogate, p.psi_over_x,
                           p.surrogate_over_x, p.f_psi, p.g_f_psi,    p.f_surrogate,
                           p.h_g_f_psi, p.h_f_surrogate, p.limit_psi, p.limit_phi};
    detail::write_csv_reals(os, cols);
  }
}

inline constexpr const char* kBreakpointHeader = "beta,delta_beta,psi_delta_over_delta";

inline void write_breakpoint_csv(std::ostream& os, std::span<const double> betas) {
  os << kBreakpointHeader << '\n';
  for (double b : betas) {
    const auto bp = delta_beta(Slope{b});
    const double cols[] = {b, bp.delta, bp.ratio_at_delta};
    detail::write_csv_reals(os, cols);
  }
}

}  // namespace logts
