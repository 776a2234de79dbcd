// Command-line harness: run experiments, brute-force optima, diagnostics and
// synthetic instance generation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <unordered_set>

#include <CLI11.hpp>

#include "evosmc/core.hpp"
#include "evosmc/dedup.hpp"
#include "evosmc/errors.hpp"
#include "evosmc/harness.hpp"
#include "evosmc/mutation.hpp"
#include "evosmc/optimizers.hpp"

using namespace evosmc;

namespace {

enum ExitCode { ok = 0, failure = 1, bad_config = 2, bad_input = 3, refused = 4 };

struct CliState {
  RunConfig cfg;
  std::string algorithm = "evo";
  std::string objective = "vc";
  std::string evo_bound = "main";
  double beta = 0.0;
  double ic_prob = -1.0;
  std::uint64_t t_override = 0;
};

void add_instance_flags(CLI::App& cmd, CliState& st) {
  auto& c = st.cfg;
  cmd.add_option("--objective", st.objective, "vc | im | entropy")->capture_default_str();
  cmd.add_option("--input", c.input, "edge list (vc, im) or readings CSV (entropy)");
  cmd.add_option("--beta", st.beta, "budget (default: vc 30, im 20, entropy 10)");
  cmd.add_option("--seed", c.seed, "master seed")->capture_default_str();
  cmd.add_option("--q", c.q, "vertex-cover cost penalty")->capture_default_str();
  cmd.add_option("--lambda", c.lambda, "influence cost scale")->capture_default_str();
  cmd.add_option("--gamma", c.gamma, "influence cost exponent")->capture_default_str();
  cmd.add_option("--ic-samples", c.ic_samples, "live-edge worlds")->capture_default_str();
  cmd.add_option("--ic-prob", st.ic_prob, "constant edge probability (default weighted cascade)");
  cmd.add_option("--bins", c.bins, "entropy discretization bins")->capture_default_str();
}

void finish_config(CliState& st) {
  st.cfg.objective = parse_objective(st.objective);
  st.cfg.algorithm = parse_algorithm(st.algorithm);
  if (st.evo_bound == "main")
    st.cfg.evo_bound = EvoBound::Main;
  else if (st.evo_bound == "appendix")
    st.cfg.evo_bound = EvoBound::Appendix;
  else
    throw config_error("--evo-bound must be 'main' or 'appendix'");
  if (st.beta != 0.0) st.cfg.beta = st.beta;
  if (st.ic_prob >= 0.0) st.cfg.ic_prob = st.ic_prob;
  if (st.t_override > 0) st.cfg.t_override = st.t_override;
  st.cfg.validate();
}

int cmd_run(CliState& st) {
  finish_config(st);
  const auto report = run_experiment(st.cfg);
  std::printf("n=%zu beta=%g K_beta=%zu T=%llu reps=%zu greedy_f=%.6g greedy_calls=%llu\n",
              report.n, report.beta, report.k_beta,
              static_cast<unsigned long long>(report.iterations), report.finals.size(),
              report.greedy_f, static_cast<unsigned long long>(report.greedy_calls));
  if (report.brute) {
    std::printf("opt=%.6g fraction_ratio_ge_0.5=%.4f\n", report.brute->opt_value,
                report.brute->fraction_at_least_half);
  }
  if (st.cfg.output.empty()) emit_csv(report, std::cout);
  return ok;
}

int cmd_brute(CliState& st) {
  st.algorithm = "brute";
  finish_config(st);
  const Instance inst = build_instance(st.cfg);
  ObjectiveOracle oracle(inst.objective);
  const Budget beta(st.cfg.effective_beta());
  const auto res = brute_force_opt(oracle, inst.cost, beta);
  std::printf("opt_value=%.6g\nopt_cost=%.6g\nopt_subset=", res.opt_value,
              subset_cost(res.opt_subset, inst.cost));
  bool first = true;
  res.opt_subset.for_each([&](std::size_t e) {
    std::printf("%s%zu", first ? "" : " ", e);
    first = false;
  });
  std::printf("\n");
  if (res.o_star)
    std::printf("o_star=%zu\n", *res.o_star);
  else
    std::printf("o_star=none\n");
  std::printf("oracle_calls=%llu\n", static_cast<unsigned long long>(oracle.calls()));
  return ok;
}

int cmd_stats(std::size_t n, std::uint64_t trials, std::uint64_t bloom_t, std::uint64_t seed) {
  if (n == 0 || trials == 0 || bloom_t == 0) throw config_error("n, trials and bloom-t must be >= 1");
  Rng rng = Rng::substream(seed, 0);
  const auto fs = expected_flip_stats(n, trials, rng);
  std::printf("mutation n=%zu trials=%llu mean_flips=%.6f stay_same_rate=%.6f expected=%.6f\n", n,
              static_cast<unsigned long long>(trials), fs.mean_flips, fs.stay_same_rate,
              stay_same_probability(n));

  Rng brng = Rng::substream(seed, 1);
  BloomFilter filter(bloom_t, brng);
  std::unordered_set<std::uint64_t> truth;
  for (std::uint64_t i = 0; i < bloom_t; ++i) {
    const SubsetFingerprint fp{brng.next_u64()};
    filter.insert(fp);
    truth.insert(fp.value);
  }
  std::uint64_t probes = 0, fp_hits = 0;
  while (probes < bloom_t) {
    const SubsetFingerprint fp{brng.next_u64()};
    if (truth.count(fp.value)) continue;
    ++probes;
    if (filter.check(fp)) ++fp_hits;
  }
  std::printf("bloom T=%llu m=%llu k=%zu load=%.4f false_positive_rate=%.6f\n",
              static_cast<unsigned long long>(bloom_t),
              static_cast<unsigned long long>(filter.bit_count()), BloomFilter::hash_count,
              static_cast<double>(filter.set_bit_count()) / static_cast<double>(filter.bit_count()),
              static_cast<double>(fp_hits) / static_cast<double>(probes));
  return ok;
}

struct GenOptions {
  std::string kind = "gnm";
  std::size_t nodes = 100;
  std::size_t edges = 400;
  double exponent = 2.1;
  std::size_t rows = 500;
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_gen(const GenOptions& g) {
  Rng rng = Rng::substream(g.seed, 0);
  std::ofstream file;
  if (!g.output.empty()) {
    file.open(g.output, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error(g.output + ": cannot open for writing");
  }
  std::ostream& out = g.output.empty() ? std::cout : file;
  if (g.kind == "gnm")
    write_edge_list(random_gnm(g.nodes, g.edges, rng), out);
  else if (g.kind == "powerlaw")
    write_edge_list(power_law_graph(g.nodes, g.exponent, rng), out);
  else if (g.kind == "readings")
    write_readings(random_readings(g.rows, g.nodes, rng), out);
  else
    throw config_error("--kind must be gnm, powerlaw or readings");
  return ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary submodular maximization under a knapsack constraint"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; command-line flags take precedence");

  CliState run_state;
  auto* run = app.add_subcommand("run", "run an experiment and emit the breakpoint CSV");
  add_instance_flags(*run, run_state);
  {
    auto& c = run_state.cfg;
    run->add_option("--algorithm", run_state.algorithm, "evo | st-evo | greedy-max | brute")
        ->capture_default_str();
    run->add_option("--epsilon", c.epsilon, "error threshold")->capture_default_str();
    run->add_option("--p", c.p, "stochasticity probability")->capture_default_str();
    run->add_option("--t-override", run_state.t_override, "iteration count instead of the bound");
    run->add_option("--evo-bound", run_state.evo_bound, "main | appendix")->capture_default_str();
    run->add_option("--reps", c.reps, "repetitions")->capture_default_str();
    run->add_option("--breakpoints", c.breakpoints, "trace rows per run")->capture_default_str();
    run->add_option("--jobs", c.jobs, "concurrent repetitions")->capture_default_str();
    run->add_flag("--dedup,!--no-dedup", c.dedup, "bloom-filter pre-check (default on)");
    run->add_flag("--brute-check", c.brute_check, "compare against the exhaustive optimum");
    run->add_option("--output", c.output, "CSV path (stdout when omitted)");
  }

  CliState brute_state;
  auto* brute = app.add_subcommand("brute", "exhaustive optimum (n <= 24)");
  add_instance_flags(*brute, brute_state);

  std::size_t stats_n = 100;
  std::uint64_t stats_trials = 100000, stats_bloom_t = 100000, stats_seed = 1;
  auto* stats = app.add_subcommand("stats", "mutation and bloom filter diagnostics");
  stats->add_option("--n", stats_n, "ground set size")->capture_default_str();
  stats->add_option("--trials", stats_trials, "mutations of the empty set")->capture_default_str();
  stats->add_option("--bloom-t", stats_bloom_t, "bloom filter capacity T")->capture_default_str();
  stats->add_option("--seed", stats_seed, "seed")->capture_default_str();

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  gen->add_option("--kind", gen_opts.kind, "gnm | powerlaw | readings")->capture_default_str();
  gen->add_option("--nodes", gen_opts.nodes, "nodes, or sensors for readings")->capture_default_str();
  gen->add_option("--edges", gen_opts.edges, "edge count (gnm)")->capture_default_str();
  gen->add_option("--exponent", gen_opts.exponent, "out-degree exponent (powerlaw)")->capture_default_str();
  gen->add_option("--rows", gen_opts.rows, "time steps (readings)")->capture_default_str();
  gen->add_option("--seed", gen_opts.seed, "seed")->capture_default_str();
  gen->add_option("--output", gen_opts.output, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bad_config;
  }

  try {
    if (*run) return cmd_run(run_state);
    if (*brute) return cmd_brute(brute_state);
    if (*stats) return cmd_stats(stats_n, stats_trials, stats_bloom_t, stats_seed);
    if (*gen) return cmd_gen(gen_opts);
  } catch (const config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return bad_config;
  } catch (const ingest_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return bad_input;
  } catch (const resource_error& e) {
    std::fprintf(stderr, "refused: %s\n", e.what());
    return refused;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return failure;
  }
  return failure;
}
