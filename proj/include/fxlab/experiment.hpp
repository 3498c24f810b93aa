#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fxlab/graph.hpp"

namespace fxlab {

enum class Regime { Strong, Weak, Finite };

struct GraphSource {
  std::string id;
  std::optional<std::string> path;
  std::optional<std::string> gen;
  bool directed = false;
  bool weighted = false;
};

/// A fixed, named activation set scored alongside the heuristics.
struct ExplicitSet {
  std::string name;
  std::vector<std::string> nodes;
};

struct ExperimentConfig {
  std::vector<GraphSource> graphs;
  /// Budgets as fractions of n (k = floor(f n)); ignored when `ks` is set.
  std::vector<double> budget_fractions{0.1, 0.3, 0.5};
  std::vector<std::size_t> ks;
  Regime regime = Regime::Strong;
  double delta = 0.0;
  /// Heuristic names, plus the layouts `spaced` and `contiguous`.
  std::vector<std::string> heuristics{"random",       "high-degree",   "centrality", "temperature",
                                      "vertex-cover", "weak-selector", "lazy-greedy"};
  std::vector<ExplicitSet> explicit_sets;
  std::uint64_t trials = 10000;
  /// Monte-Carlo trials per lazy-greedy oracle call.
  std::uint64_t greedy_trials = 2000;
  std::uint64_t seed = 1;
  /// Strong regime scores exactly up to this many nodes.
  std::size_t exact_cap = 10;
  std::optional<std::string> csv_out;
  std::optional<std::string> json_out;

  void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ReportRow {
  std::string graph_id;
  std::size_t n = 0;
  std::size_t k = 0;
  std::string heuristic;
  std::vector<std::string> chosen;
  double raw = 0.0;
  double std_error = 0.0;
  double normalized = 0.0;
  /// First row by heuristic name attaining the group maximum.
  bool best = false;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t timeouts = 0;
  std::string status = "ok";
  double wall_ms = 0.0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
};

/// Divides each raw score by the maximum of its (graph, k) group. A group
/// whose maximum is zero is normalized to 1.0 throughout.
void normalize_scores(std::vector<ReportRow>& rows);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// `spaced`: floor(i n / k) for i in [0, k). `contiguous`: 0..k-1.
ActiveSet spaced_layout(std::size_t n, std::size_t k);
ActiveSet contiguous_layout(std::size_t n, std::size_t k);

/// CSV with a fixed header. Wall time is only emitted with `timing`, which
/// keeps default output byte-reproducible.
void write_csv(const ExperimentReport& report, std::ostream& out, bool timing = false);
void write_json(const ExperimentReport& report, std::ostream& out, bool timing = false);

/// printf("%.12g") formatting used by every report writer.
std::string format_real(double x);

}  // namespace fxlab
