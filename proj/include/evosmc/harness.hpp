#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evosmc/core.hpp"
#include "evosmc/objectives.hpp"
#include "evosmc/optimizers.hpp"

namespace evosmc {

enum class Algorithm { Evo, StEvo, GreedyMax, Brute };
enum class ObjectiveKind { VertexCover, Influence, Entropy };
enum class EvoBound { Main, Appendix };

Algorithm parse_algorithm(std::string_view s);
ObjectiveKind parse_objective(std::string_view s);
std::string_view to_string(Algorithm a);
std::string_view to_string(ObjectiveKind k);

struct RunConfig {
  Algorithm algorithm = Algorithm::Evo;
  ObjectiveKind objective = ObjectiveKind::VertexCover;
  std::optional<double> beta;           // defaults per objective: vc 30, im 20, entropy 10
  double epsilon = 0.1;
  double p = 0.5;
  std::optional<std::uint64_t> t_override;
  EvoBound evo_bound = EvoBound::Main;
  std::uint64_t seed = 1;
  std::size_t reps = 20;
  std::size_t breakpoints = 15;
  std::size_t jobs = 1;

  std::size_t q = 5;
  double lambda = 1.2;
  double gamma = 1.5;
  std::size_t ic_samples = 100;
  std::optional<double> ic_prob;        // constant edge probability; default weighted cascade
  std::size_t bins = 10;
  double cost_floor = 1e-6;
  double gaussian_floor = 0.1;

  bool dedup = true;
  bool brute_check = false;
  std::filesystem::path input;
  std::filesystem::path output;

  double effective_beta() const;
  void validate() const; // throws config_error
};

/// A ready-to-run problem: shared objective plus per-element costs.
struct Instance {
  std::shared_ptr<const Objective> objective;
  ModularCost cost;
};

// --- ingestion ---------------------------------------------------------------

/// Parses "u v [w]" lines ('#' comments, blank lines ignored). Node ids are
/// densified to 0..n-1 in first-seen order; duplicate edges keep the first
/// weight. If `edge_weights` is given it receives one weight per CSR edge
/// (NaN where the line had none).
DirectedGraph load_edge_list(const std::filesystem::path& path,
                             std::vector<double>* edge_weights = nullptr);
DirectedGraph parse_edge_list(std::istream& in, std::vector<double>* edge_weights = nullptr);

/// Numeric CSV, one row per time step and one column per sensor. A first
/// line containing a non-numeric field is treated as a header.
SensorDataset load_readings(const std::filesystem::path& path, std::size_t bins = 10);
SensorDataset parse_readings(std::istream& in, std::size_t bins = 10);

void write_edge_list(const DirectedGraph& g, std::ostream& out);
void write_readings(const SensorDataset& d, std::ostream& out);

// --- synthetic instances -------------------------------------------------------

// G(n, m): m distinct directed non-loop edges chosen uniformly.
DirectedGraph random_gnm(std::size_t n, std::size_t m, Rng& rng);
// Out-degrees drawn from a discrete power law P(d) ~ d^-exponent on
// [1, n-1]; targets uniform without repetition.
DirectedGraph power_law_graph(std::size_t n, double exponent, Rng& rng);
// Correlated random-walk readings for `sensors` columns.
SensorDataset random_readings(std::size_t rows, std::size_t sensors, Rng& rng, std::size_t bins = 10);

Instance build_instance(const RunConfig& cfg);

// --- experiment protocol -------------------------------------------------------

/// Iterations ceil(j T / B) for j = 1..B with B = min(breakpoints, T).
std::vector<std::uint64_t> breakpoint_schedule(std::uint64_t iterations, std::size_t breakpoints);

/// Lower median: element floor((k-1)/2) of the sorted values.
double lower_median(std::vector<double> values);

struct ReportRow {
  std::size_t breakpoint = 0;
  std::uint64_t iteration = 0;
  double median_f = 0.0;
  double median_f_normalized = 0.0;
  double median_oracle_calls = 0.0;
  double median_oracle_calls_normalized = 0.0;
  double cost_ratio = 0.0;
  double feasible_aug_ratio = 0.0;
  double stay_same_ratio = 0.0;
  double seen_before_ratio = 0.0;
};

struct BruteCheck {
  double opt_value = 0.0;
  std::vector<double> ratios; // final best_f / OPT per rep
  double fraction_at_least_half = 0.0;
};

struct AggregateReport {
  std::size_t n = 0;
  std::size_t k_beta = 0;
  std::uint64_t iterations = 0;
  double beta = 0.0;
  double greedy_f = 0.0;
  std::uint64_t greedy_calls = 0;
  std::vector<ReportRow> rows;
  std::vector<RunTrace> traces;     // per rep, rep order
  std::vector<RunResult> finals;    // per rep, rep order (trace moved out)
  std::optional<BruteCheck> brute;
};

AggregateReport run_experiment(const RunConfig& cfg);
AggregateReport run_experiment(const RunConfig& cfg, const Instance& instance);

inline constexpr std::string_view csv_header =
    "breakpoint,iteration,median_f,median_f_normalized,median_oracle_calls,"
    "median_oracle_calls_normalized,cost_ratio,feasible_aug_ratio,stay_same_ratio,"
    "seen_before_ratio";

void emit_csv(const AggregateReport& report, std::ostream& out);
void emit_csv(const AggregateReport& report, const std::filesystem::path& path);

} // namespace evosmc
