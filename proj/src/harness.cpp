#include "evosmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "evosmc/errors.hpp"

namespace evosmc {

namespace {

// Stream indices for deriving instance randomness from the master seed. Rep
// streams use the rep index itself, so these sit far above any rep count.
constexpr std::uint64_t ic_world_stream = 0xfffffffffff00001ULL;
constexpr std::uint64_t gaussian_cost_stream = 0xfffffffffff00002ULL;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template<typename T>
bool parse_number(std::string_view tok, T& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

} // namespace

Algorithm parse_algorithm(std::string_view s) {
  if (s == "evo") return Algorithm::Evo;
  if (s == "st-evo") return Algorithm::StEvo;
  if (s == "greedy-max") return Algorithm::GreedyMax;
  if (s == "brute") return Algorithm::Brute;
  throw config_error("unknown algorithm '" + std::string(s) + "' (evo, st-evo, greedy-max, brute)");
}

ObjectiveKind parse_objective(std::string_view s) {
  if (s == "vc") return ObjectiveKind::VertexCover;
  if (s == "im") return ObjectiveKind::Influence;
  if (s == "entropy") return ObjectiveKind::Entropy;
  throw config_error("unknown objective '" + std::string(s) + "' (vc, im, entropy)");
}

std::string_view to_string(Algorithm a) {
  switch (a) {
  case Algorithm::Evo: return "evo";
  case Algorithm::StEvo: return "st-evo";
  case Algorithm::GreedyMax: return "greedy-max";
  case Algorithm::Brute: return "brute";
  }
  return "?";
}

std::string_view to_string(ObjectiveKind k) {
  switch (k) {
  case ObjectiveKind::VertexCover: return "vc";
  case ObjectiveKind::Influence: return "im";
  case ObjectiveKind::Entropy: return "entropy";
  }
  return "?";
}

double RunConfig::effective_beta() const {
  if (beta) return *beta;
  switch (objective) {
  case ObjectiveKind::VertexCover: return 30.0;
  case ObjectiveKind::Influence: return 20.0;
  case ObjectiveKind::Entropy: return 10.0;
  }
  return 20.0;
}

void RunConfig::validate() const {
  if (!(effective_beta() > 0.0)) throw config_error("beta must be > 0");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw config_error("epsilon must lie in (0,1]");
  if (!(p > 0.0 && p <= 1.0)) throw config_error("p must lie in (0,1]");
  if (reps == 0) throw config_error("reps must be >= 1");
  if (breakpoints == 0) throw config_error("breakpoints must be >= 1");
  if (jobs == 0) throw config_error("jobs must be >= 1");
  if (!(lambda > 0.0)) throw config_error("lambda must be > 0");
  if (ic_samples == 0) throw config_error("ic-samples must be >= 1");
  if (ic_prob && !(*ic_prob >= 0.0 && *ic_prob <= 1.0)) throw config_error("ic-prob must lie in [0,1]");
  if (bins == 0 || bins > 65535) throw config_error("bins must lie in [1, 65535]");
  if (!(cost_floor > 0.0) || !(gaussian_floor > 0.0)) throw config_error("cost floors must be > 0");
}

// --- ingestion ----------------------------------------------------------------

DirectedGraph parse_edge_list(std::istream& in, std::vector<double>* edge_weights) {
  std::unordered_map<std::uint64_t, std::size_t> ids;
  std::vector<DirectedGraph::Edge> edges;
  std::vector<double> weights;
  auto dense = [&](std::uint64_t raw) {
    auto [it, fresh] = ids.try_emplace(raw, ids.size());
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto tok = split_ws(view);
    if (tok.empty()) continue;
    std::uint64_t u = 0, v = 0;
    double w = std::numeric_limits<double>::quiet_NaN();
    const bool ok = (tok.size() == 2 || tok.size() == 3) && parse_number(tok[0], u) &&
                    parse_number(tok[1], v) && (tok.size() == 2 || parse_number(tok[2], w));
    if (!ok) throw ingest_error("line " + std::to_string(lineno) + ": expected 'u v [w]', got '" + trim(line) + "'");
    const std::size_t du = dense(u);
    const std::size_t dv = dense(v);
    edges.emplace_back(du, dv);
    weights.push_back(w);
  }
  if (ids.empty()) throw ingest_error("empty graph: no edges found");

  if (edge_weights) {
    // First occurrence of each (u,v) wins; the graph stores edges sorted.
    std::vector<std::size_t> order(edges.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    edge_weights->clear();
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k > 0 && edges[order[k]] == edges[order[k - 1]]) continue;
      edge_weights->push_back(weights[order[k]]);
    }
  }
  return DirectedGraph(ids.size(), std::move(edges));
}

DirectedGraph load_edge_list(const std::filesystem::path& path, std::vector<double>* edge_weights) {
  std::ifstream in(path);
  if (!in) throw ingest_error(path.string() + ": cannot open");
  try {
    return parse_edge_list(in, edge_weights);
  } catch (const ingest_error& e) {
    throw ingest_error(path.string() + ": " + e.what());
  }
}

SensorDataset parse_readings(std::istream& in, std::size_t bins) {
  SensorDataset d;
  d.bins = bins;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(trim(f));
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      double x = 0.0;
      if (!parse_number(std::string_view(f), x)) {
        numeric = false;
        break;
      }
      row.push_back(x);
    }
    if (!numeric) {
      if (first) {
        first = false;
        d.cols = fields.size();
        continue;
      }
      throw ingest_error("row " + std::to_string(lineno) + ": non-numeric field");
    }
    if (first) d.cols = row.size();
    first = false;
    if (row.size() != d.cols) {
      throw ingest_error("row " + std::to_string(lineno) + ": expected " + std::to_string(d.cols) +
                         " fields, got " + std::to_string(row.size()));
    }
    d.readings.insert(d.readings.end(), row.begin(), row.end());
    ++d.rows;
  }
  if (d.rows == 0 || d.cols == 0) throw ingest_error("no numeric rows");
  return d;
}

SensorDataset load_readings(const std::filesystem::path& path, std::size_t bins) {
  std::ifstream in(path);
  if (!in) throw ingest_error(path.string() + ": cannot open");
  try {
    return parse_readings(in, bins);
  } catch (const ingest_error& e) {
    throw ingest_error(path.string() + ": " + e.what());
  }
}

void write_edge_list(const DirectedGraph& g, std::ostream& out) {
  out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void write_readings(const SensorDataset& d, std::ostream& out) {
  char buf[32];
  for (std::size_t r = 0; r < d.rows; ++r) {
    for (std::size_t c = 0; c < d.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.6g", d.at(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

// --- synthetic instances ----------------------------------------------------------

DirectedGraph random_gnm(std::size_t n, std::size_t m, Rng& rng) {
  if (n < 2) throw config_error("random_gnm: n must be >= 2");
  if (m > n * (n - 1)) throw config_error("random_gnm: more edges than ordered pairs");
  std::set<DirectedGraph::Edge> chosen;
  while (chosen.size() < m) {
    const auto u = static_cast<std::size_t>(rng.below(n));
    const auto v = static_cast<std::size_t>(rng.below(n));
    if (u != v) chosen.emplace(u, v);
  }
  return DirectedGraph(n, {chosen.begin(), chosen.end()});
}

DirectedGraph power_law_graph(std::size_t n, double exponent, Rng& rng) {
  if (n < 2) throw config_error("power_law_graph: n must be >= 2");
  std::vector<double> cdf(n - 1);
  double acc = 0.0;
  for (std::size_t d = 1; d < n; ++d) {
    acc += std::pow(static_cast<double>(d), -exponent);
    cdf[d - 1] = acc;
  }
  std::vector<DirectedGraph::Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    const double x = rng.uniform() * acc;
    const std::size_t deg =
        static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin()) + 1;
    std::set<std::size_t> targets;
    while (targets.size() < std::min(deg, n - 1)) {
      const auto v = static_cast<std::size_t>(rng.below(n));
      if (v != u) targets.insert(v);
    }
    for (auto v : targets) edges.emplace_back(u, v);
  }
  return DirectedGraph(n, std::move(edges));
}

SensorDataset random_readings(std::size_t rows, std::size_t sensors, Rng& rng, std::size_t bins) {
  SensorDataset d;
  d.rows = rows;
  d.cols = sensors;
  d.bins = bins;
  d.readings.resize(rows * sensors);
  constexpr std::size_t factors = 3;
  std::vector<double> latent(factors, 0.0);
  std::vector<double> loading(sensors);
  for (auto& l : loading) l = 0.5 + rng.uniform();
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto& z : latent) z += rng.normal();
    for (std::size_t c = 0; c < sensors; ++c)
      d.readings[r * sensors + c] = loading[c] * latent[c % factors] + 0.5 * rng.normal();
  }
  return d;
}

Instance build_instance(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.input.empty()) throw config_error("an --input file is required");
  switch (cfg.objective) {
  case ObjectiveKind::VertexCover: {
    auto g = load_edge_list(cfg.input);
    auto cost = vc_costs(g, cfg.q);
    std::vector<double> w(g.node_count(), 1.0);
    return {std::make_shared<VertexCoverObjective>(std::move(g), std::move(w)), std::move(cost)};
  }
  case ObjectiveKind::Influence: {
    std::vector<double> weights;
    auto g = load_edge_list(cfg.input, &weights);
    IcModel model;
    if (cfg.ic_prob) {
      model.edge_prob = constant_probs(g, *cfg.ic_prob);
    } else {
      model.edge_prob = weighted_cascade_probs(g);
      // Explicit per-edge weights in [0,1] override the cascade default.
      for (std::size_t k = 0; k < weights.size(); ++k)
        if (weights[k] >= 0.0 && weights[k] <= 1.0) model.edge_prob[k] = weights[k];
    }
    model.samples = cfg.ic_samples;
    model.seed = Rng::substream(cfg.seed, ic_world_stream).next_u64();
    auto cost = im_costs(g, cfg.lambda, cfg.gamma, cfg.cost_floor);
    model.graph = std::move(g);
    return {std::make_shared<InfluenceObjective>(std::move(model)), std::move(cost)};
  }
  case ObjectiveKind::Entropy: {
    auto d = load_readings(cfg.input, cfg.bins);
    Rng rng = Rng::substream(cfg.seed, gaussian_cost_stream);
    auto cost = gaussian_costs(d.cols, rng, cfg.gaussian_floor);
    return {std::make_shared<EntropyObjective>(d), std::move(cost)};
  }
  }
  throw config_error("unknown objective");
}

// --- experiment protocol --------------------------------------------------------------

std::vector<std::uint64_t> breakpoint_schedule(std::uint64_t iterations, std::size_t breakpoints) {
  const std::uint64_t b = std::min<std::uint64_t>(breakpoints, iterations);
  std::vector<std::uint64_t> marks;
  marks.reserve(b);
  for (std::uint64_t j = 1; j <= b; ++j) {
    const auto wide = (static_cast<unsigned __int128>(j) * iterations + b - 1) / b;
    marks.push_back(static_cast<std::uint64_t>(wide));
  }
  return marks;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

namespace {

std::uint64_t derive_iterations(const RunConfig& cfg, std::size_t n, std::size_t k_beta) {
  if (cfg.t_override) return std::max<std::uint64_t>(*cfg.t_override, 1);
  const std::size_t k = std::max<std::size_t>(k_beta, 1);
  std::uint64_t t = 0;
  switch (cfg.algorithm) {
  case Algorithm::Evo:
    if (n < 2) throw config_error("evo needs n >= 2 for its iteration bound; pass --t-override");
    t = cfg.evo_bound == EvoBound::Main ? iterations_evo(n, k) : iterations_evo_alt(n, k);
    break;
  case Algorithm::StEvo:
    t = iterations_st(n, k, BoundParams(cfg.epsilon, cfg.p));
    break;
  default:
    break;
  }
  return std::max<std::uint64_t>(t, 1);
}

double ratio_or_nan(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

AggregateReport run_experiment(const RunConfig& cfg) {
  return run_experiment(cfg, build_instance(cfg));
}

AggregateReport run_experiment(const RunConfig& cfg, const Instance& instance) {
  cfg.validate();
  const std::size_t n = instance.objective->ground_size();
  if (instance.cost.size() != n) throw config_error("instance cost vector does not match ground set");
  const Budget beta(cfg.effective_beta());

  AggregateReport report;
  report.n = n;
  report.beta = beta.beta;
  report.k_beta = max_feasible_size(instance.cost, beta);

  {
    ObjectiveOracle oracle(instance.objective);
    const auto g = greedy_max(oracle, instance.cost, beta);
    report.greedy_f = g.best_f;
    report.greedy_calls = g.oracle_calls;
  }

  if (cfg.algorithm == Algorithm::Brute && n > brute_force_cap)
    throw resource_error("brute: n=" + std::to_string(n) + " exceeds the enumeration cap of " +
                         std::to_string(brute_force_cap));
  if (cfg.brute_check && n > brute_force_cap)
    throw resource_error("brute check: n=" + std::to_string(n) + " exceeds the enumeration cap");

  const bool evolutionary = cfg.algorithm == Algorithm::Evo || cfg.algorithm == Algorithm::StEvo;
  const std::size_t reps = evolutionary ? cfg.reps : 1;
  report.traces.resize(reps);
  report.finals.resize(reps);

  if (evolutionary) {
    report.iterations = derive_iterations(cfg, n, report.k_beta);
    RunOptions opts;
    opts.dedup = cfg.dedup;
    opts.breakpoints = breakpoint_schedule(report.iterations, cfg.breakpoints);

    auto run_rep = [&](std::size_t r) {
      Rng rng = Rng::substream(cfg.seed, r);
      ObjectiveOracle oracle(instance.objective);
      RunResult res = cfg.algorithm == Algorithm::Evo
                          ? evo_smc(oracle, instance.cost, beta, report.iterations, rng, opts)
                          : st_evo_smc(oracle, instance.cost, beta, report.iterations,
                                       BoundParams(cfg.epsilon, cfg.p), rng, opts);
      report.traces[r] = std::move(res.trace);
      res.trace = {};
      report.finals[r] = std::move(res);
    };

    const std::size_t workers = std::min(cfg.jobs, reps);
    if (workers <= 1) {
      for (std::size_t r = 0; r < reps; ++r) run_rep(r);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::exception_ptr> errors(workers);
      {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            try {
              for (std::size_t r; (r = next.fetch_add(1)) < reps;) run_rep(r);
            } catch (...) {
              errors[w] = std::current_exception();
              next.store(reps);
            }
          });
        }
      }
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
  } else if (cfg.algorithm == Algorithm::GreedyMax) {
    ObjectiveOracle oracle(instance.objective);
    std::vector<GreedyStep> steps;
    RunResult res = greedy_max(oracle, instance.cost, beta,
                               [&](const GreedyStep& s) { steps.push_back(s); });
    report.iterations = std::max<std::uint64_t>(steps.size(), 1);
    RunTrace trace;
    std::size_t idx = 0;
    for (auto mark : breakpoint_schedule(report.iterations, cfg.breakpoints)) {
      Breakpoint bp;
      bp.index = ++idx;
      bp.iteration = mark;
      if (steps.empty()) {
        bp.best_f = res.best_f;
        bp.oracle_calls = res.oracle_calls;
      } else {
        const auto& s = steps[mark - 1];
        bp.best_f = s.best_f;
        bp.oracle_calls = s.oracle_calls;
        bp.cost_ratio = s.prefix_cost / beta.beta;
      }
      trace.breakpoints.push_back(bp);
    }
    report.traces[0] = std::move(trace);
    report.finals[0] = std::move(res);
  } else {
    ObjectiveOracle oracle(instance.objective);
    const auto bf = brute_force_opt(oracle, instance.cost, beta);
    RunResult res;
    res.best_subset = bf.opt_subset;
    res.best_f = bf.opt_value;
    res.best_cost = subset_cost(bf.opt_subset, instance.cost);
    res.oracle_calls = oracle.calls();
    report.iterations = 1;
    Breakpoint bp;
    bp.index = 1;
    bp.iteration = 1;
    bp.best_f = res.best_f;
    bp.oracle_calls = res.oracle_calls;
    bp.cost_ratio = res.best_cost / beta.beta;
    report.traces[0].breakpoints.push_back(bp);
    report.finals[0] = std::move(res);
  }

  const std::size_t rows = report.traces[0].breakpoints.size();
  for (std::size_t b = 0; b < rows; ++b) {
    std::vector<double> f, calls, cost, aug, stay, seen;
    for (const auto& tr : report.traces) {
      const auto& bp = tr.breakpoints[b];
      f.push_back(bp.best_f);
      calls.push_back(static_cast<double>(bp.oracle_calls));
      cost.push_back(bp.cost_ratio);
      aug.push_back(bp.feasible_aug_ratio);
      stay.push_back(bp.stay_same_ratio);
      seen.push_back(bp.seen_before_ratio);
    }
    ReportRow row;
    row.breakpoint = b + 1;
    row.iteration = report.traces[0].breakpoints[b].iteration;
    row.median_f = lower_median(f);
    row.median_oracle_calls = lower_median(calls);
    row.median_f_normalized = ratio_or_nan(row.median_f, report.greedy_f);
    row.median_oracle_calls_normalized =
        ratio_or_nan(row.median_oracle_calls, static_cast<double>(report.greedy_calls));
    row.cost_ratio = lower_median(cost);
    row.feasible_aug_ratio = lower_median(aug);
    row.stay_same_ratio = lower_median(stay);
    row.seen_before_ratio = lower_median(seen);
    report.rows.push_back(row);
  }

  if (cfg.brute_check) {
    ObjectiveOracle oracle(instance.objective);
    BruteCheck check;
    check.opt_value = brute_force_opt(oracle, instance.cost, beta).opt_value;
    std::size_t good = 0;
    for (const auto& fin : report.finals) {
      const double ratio = check.opt_value > 0.0 ? fin.best_f / check.opt_value : 1.0;
      check.ratios.push_back(ratio);
      if (fin.best_f >= 0.5 * check.opt_value) ++good;
    }
    check.fraction_at_least_half =
        static_cast<double>(good) / static_cast<double>(report.finals.size());
    report.brute = std::move(check);
  }

  if (!cfg.output.empty()) emit_csv(report, cfg.output);
  return report;
}

namespace {

std::string fmt6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

} // namespace

void emit_csv(const AggregateReport& report, std::ostream& out) {
  out << csv_header << '\n';
  for (const auto& r : report.rows) {
    out << r.breakpoint << ',' << r.iteration << ',' << fmt6(r.median_f) << ','
        << fmt6(r.median_f_normalized) << ',' << static_cast<std::uint64_t>(r.median_oracle_calls) << ','
        << fmt6(r.median_oracle_calls_normalized) << ',' << fmt6(r.cost_ratio) << ','
        << fmt6(r.feasible_aug_ratio) << ',' << fmt6(r.stay_same_ratio) << ','
        << fmt6(r.seen_before_ratio) << '\n';
  }
}

void emit_csv(const AggregateReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  emit_csv(report, out);
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

} // namespace evosmc
