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

// Command-line front end.
//
// Exit status: 0 success, 2 configuration error, 3 a bound or lemma
// violation was detected, 1 anything else.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "logts/experiment.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;

logts::PriorSpec parse_prior(const std::string& spec) {
  if (spec == "uniform-sphere") return logts::UniformSpherePrior{};
  constexpr std::string_view kFile = "file:";
  if (spec.rfind(kFile, 0) == 0) {
    const std::string path = spec.substr(kFile.size());
    std::ifstream in(path);
    if (!in) throw logts::ConfigError("cannot open prior file '" + path + "'");
    return logts::read_finite_support(in);
  }
  throw logts::ConfigError("unknown prior '" + spec + "' (expected uniform-sphere or file:<path>)");
}

// Opens <out>/<name>, or returns nullopt when no output directory was given.
std::optional<std::ofstream> open_output(const std::string& out_dir, const std::string& name) {
  if (out_dir.empty()) return std::nullopt;
  fs::create_directories(out_dir);
  const auto path = fs::path(out_dir) / name;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

template <class Writer>
void emit(const std::string& out_dir, const std::string& name, Writer&& write) {
  if (auto os = open_output(out_dir, name)) {
    write(*os);
    if (!*os) throw std::runtime_error("write failed: " + name);
  } else {
    write(std::cout);
  }
}

json mean_stderr_json(const logts::MeanStderr& m) {
  return {{"mean", m.mean}, {"stderr", m.stderr_}};
}

struct Options {
  std::size_t dim = 2;
  double beta = 1.0;
  std::size_t horizon = 100;
  std::size_t episodes = 10;
  std::size_t particles = 200;
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  std::string prior = "uniform-sphere";
  std::string out;
  std::size_t trials = 1000;
  std::size_t jobs = 1;
  std::size_t metric_stride = 1;
  bool build_net = false;
  std::vector<std::size_t> dims;
  std::vector<double> betas;
  std::vector<std::size_t> horizons;
  std::size_t min_atoms = 2;
  std::size_t max_atoms = 50;
  bool no_structured = false;
  double net_limit = 2e5;
  std::size_t resolution = 401;
};

int run_simulate(const Options& o) {
  logts::ExperimentConfig cfg;
  cfg.dim = o.dim;
  cfg.beta = o.beta;
  cfg.horizon = o.horizon;
  cfg.episodes = o.episodes;
  cfg.particles = o.particles;
  cfg.epsilon = o.epsilon;
  cfg.seed = o.seed;
  cfg.prior = parse_prior(o.prior);
  cfg.jobs = o.jobs;
  cfg.metric_stride = o.metric_stride;
  cfg.build_net = o.build_net;
  const auto res = logts::run_experiment(cfg);
  emit(o.out, "trace.csv", [&](std::ostream& os) { logts::write_trace_csv(os, res.trace); });

  const auto& s = res.summary;
  json j = {{"dim", cfg.dim},
            {"beta", cfg.beta},
            {"horizon", cfg.horizon},
            {"episodes", cfg.episodes},
            {"particles", cfg.particles},
            {"seed", cfg.seed},
            {"epsilon", s.epsilon},
            {"cum_regret_expected", mean_stderr_json(s.cum_regret_expected)},
            {"cum_regret_realized", mean_stderr_json(s.cum_regret_realized)},
            {"bound_main", s.bound_main},
            {"bound_quantized", s.bound_quantized},
            {"entropy_bound", s.entropy_bound},
            {"entropy_source", s.entropy_from_net ? "net" : "covering_bound"},
            {"max_gamma_over_d", s.max_gamma_over_d},
            {"gamma_violations", s.gamma_violations},
            {"within_bounds", s.within_bounds()}};
  if (s.net_size) j["net_size"] = *s.net_size;
  if (auto os = open_output(o.out, "summary.json")) {
    *os << j.dump(2) << '\n';
  } else {
    std::cerr << j.dump(2) << '\n';
  }
  return s.gamma_violations > 0 ? kExitViolation : kExitOk;
}

int run_scan(const Options& o) {
  logts::ScanConfig cfg;
  if (!o.dims.empty()) cfg.dims = o.dims;
  if (!o.betas.empty()) cfg.betas = o.betas;
  cfg.min_atoms = o.min_atoms;
  cfg.max_atoms = o.max_atoms;
  cfg.trials = o.trials;
  cfg.structured = !o.no_structured;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  const auto res = logts::info_ratio_scan(cfg);
  emit(o.out, "info_ratio_scan.csv", [&](std::ostream& os) { logts::write_scan_csv(os, res.rows); });
  for (std::size_t k = 0; k < res.violations.size(); ++k) {
    // Full posterior for reproduction.
    const std::string name = "violation_" + std::to_string(k) + ".txt";
    emit(o.out.empty() ? "." : o.out, name,
         [&](std::ostream& os) { logts::write_finite_support(os, res.violations[k].posterior); });
  }
  std::cerr << "evaluated " << res.evaluated << " posteriors, " << res.degenerate
            << " degenerate, max gamma/d " << logts::detail::format_real(res.max_gamma_over_d)
            << ", violations " << res.violations.size() << '\n';
  return res.violations.empty() ? kExitOk : kExitViolation;
}

int run_lemmas(const Options& o) {
  logts::LemmaConfig cfg;
  cfg.trials = o.trials;
  if (!o.betas.empty()) cfg.betas = o.betas;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  const auto res = logts::run_lemma_checks(cfg);
  emit(o.out, "lemma_check.csv", [&](std::ostream& os) { logts::write_lemma_csv(os, res.rows); });
  for (const auto& [name, t] : res.tally) {
    std::cerr << name << ": checked " << t.checked << ", skipped " << t.skipped << ", violations "
              << t.violations << '\n';
  }
  return res.total_violations() == 0 ? kExitOk : kExitViolation;
}

int run_bounds(const Options& o) {
  const auto dims = o.dims.empty() ? std::vector<std::size_t>{o.dim} : o.dims;
  const auto betas = o.betas.empty() ? std::vector<double>{o.beta} : o.betas;
  const auto horizons = o.horizons.empty() ? std::vector<std::size_t>{o.horizon} : o.horizons;
  std::vector<logts::BoundsRow> rows;
  for (auto d : dims) {
    for (double b : betas) {
      for (auto t : horizons) rows.push_back(logts::bounds_row(d, b, t, o.epsilon, o.net_limit, o.seed));
    }
  }
  logts::write_bounds_csv(std::cout, rows);
  if (auto os = open_output(o.out, "bounds.csv")) logts::write_bounds_csv(*os, rows);
  return kExitOk;
}

int run_net(const Options& o) {
  const double eps = o.epsilon ? *o.epsilon : logts::default_epsilon(o.dim, o.beta, o.horizon);
  auto rng = logts::RngStream::for_task(o.seed, 0, logts::StreamTag::kNet);
  const auto net = logts::build_eps_net(o.dim, eps, rng);
  emit(o.out, "net.txt", [&](std::ostream& os) { logts::write_net(os, net); });
  const auto cover = logts::covering_number_bounds(o.dim, eps);
  json j = {{"dim", o.dim},
            {"epsilon", eps},
            {"size", net.size()},
            {"log_size", logts::net_entropy_bound(net)},
            {"covering_lower", cover.lower},
            {"covering_upper", cover.upper},
            {"empirical_radius", net.certificate.empirical_radius},
            {"validation_samples", net.certificate.validation_samples},
            {"rounds", net.certificate.rounds},
            {"exact", net.certificate.exact}};
  std::cerr << j.dump(2) << '\n';
  return kExitOk;
}

int run_figures(const Options& o) {
  logts::FigureConfig cfg;
  if (!o.betas.empty()) cfg.curve_betas = o.betas;
  cfg.resolution = o.resolution;
  cfg.validate();
  std::vector<logts::ChainPoint> pts;
  for (double b : cfg.curve_betas) {
    const auto chain = logts::transformation_chain(logts::LogisticSurrogate(logts::Slope{b}),
                                                   cfg.resolution);
    pts.insert(pts.end(), chain.begin(), chain.end());
  }
  const std::string out = o.out.empty() ? "." : o.out;
  emit(out, "transform_chain.csv", [&](std::ostream& os) { logts::write_chain_csv(os, pts); });
  emit(out, "delta_beta.csv",
       [&](std::ostream& os) { logts::write_breakpoint_csv(os, cfg.table_betas); });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thompson sampling for logistic bandits: simulations and bound checks"};
  app.require_subcommand(1);
  Options o;

  auto add_seed_jobs_out = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "output directory (default: stdout)");
  };

  auto* sim = app.add_subcommand("simulate", "multi-episode Thompson sampling regret runs");
  sim->add_option("--dim", o.dim, "dimension d")->check(CLI::PositiveNumber);
  sim->add_option("--beta", o.beta, "logistic slope");
  sim->add_option("--horizon", o.horizon, "rounds per episode");
  sim->add_option("--episodes", o.episodes, "episodes");
  sim->add_option("--particles", o.particles, "atoms used to discretise a continuous prior");
  sim->add_option("--epsilon", o.epsilon, "net radius for the quantized bound");
  sim->add_option("--prior", o.prior, "uniform-sphere | file:<path>");
  sim->add_option("--metric-stride", o.metric_stride,
                  "evaluate information-ratio metrics every k steps (0 = never)");
  sim->add_flag("--build-net", o.build_net, "build an eps-net for the quantized bound");
  add_seed_jobs_out(sim);

  auto* scan = app.add_subcommand("info-ratio-scan", "information ratio over random posteriors");
  scan->add_option("--dim", o.dims, "dimensions (comma list)")->delimiter(',');
  scan->add_option("--beta", o.betas, "slopes (comma list)")->delimiter(',');
  scan->add_option("--particles", o.max_atoms, "maximum support size");
  scan->add_option("--min-particles", o.min_atoms, "minimum support size");
  scan->add_option("--trials", o.trials, "posteriors per (d, beta, family)");
  scan->add_flag("--no-structured", o.no_structured, "random Dirichlet posteriors only");
  add_seed_jobs_out(scan);

  auto* lemma = app.add_subcommand("lemma-check", "randomized checks of the variance lemmas");
  lemma->add_option("--trials", o.trials, "base trial count");
  lemma->add_option("--beta", o.betas, "surrogate slopes (comma list)")->delimiter(',');
  add_seed_jobs_out(lemma);

  auto* bounds = app.add_subcommand("bounds", "closed-form regret bounds");
  bounds->add_option("--dim", o.dims, "dimensions (comma list)")->delimiter(',');
  bounds->add_option("--beta", o.betas, "slopes (comma list)")->delimiter(',');
  bounds->add_option("--horizon", o.horizons, "horizons (comma list)")->delimiter(',');
  bounds->add_option("--epsilon", o.epsilon, "net radius (default d/(beta T))");
  bounds->add_option("--net-limit", o.net_limit,
                     "build nets only when (1+2/eps)^d is at most this");
  bounds->add_option("--seed", o.seed, "seed for net construction");
  bounds->add_option("--out", o.out, "also write bounds.csv here");

  auto* net = app.add_subcommand("net", "build and validate an eps-net of the sphere");
  net->add_option("--dim", o.dim, "dimension d")->check(CLI::PositiveNumber);
  net->add_option("--epsilon", o.epsilon, "radius (default d/(beta T))");
  net->add_option("--beta", o.beta, "slope used for the default radius");
  net->add_option("--horizon", o.horizon, "horizon used for the default radius");
  add_seed_jobs_out(net);

  auto* fig = app.add_subcommand("figure-data", "tables of psi, the surrogate and its breakpoint");
  fig->add_option("--beta", o.betas, "slopes for the curves (comma list)")->delimiter(',');
  fig->add_option("--resolution", o.resolution, "grid points on [0, 2]");
  fig->add_option("--out", o.out, "output directory (default: current directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sim->parsed()) return run_simulate(o);
    if (scan->parsed()) return run_scan(o);
    if (lemma->parsed()) return run_lemmas(o);
    if (bounds->parsed()) return run_bounds(o);
    if (net->parsed()) return run_net(o);
    if (fig->parsed()) return run_figures(o);
  } catch (const logts::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const logts::DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const logts::FormatError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
