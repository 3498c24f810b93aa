#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "fxlab/graph.hpp"
#include "fxlab/weak_selection.hpp"

namespace fxlab {

enum class Heuristic { Random, HighDegree, Centrality, Temperature, VertexCover, WeakSelector, LazyGreedy };

inline constexpr std::array<Heuristic, 7> kAllHeuristics = {
    Heuristic::Random,      Heuristic::HighDegree,   Heuristic::Centrality, Heuristic::Temperature,
    Heuristic::VertexCover, Heuristic::WeakSelector, Heuristic::LazyGreedy};

std::string_view to_string(Heuristic h);
std::optional<Heuristic> parse_heuristic(std::string_view name);

struct Selection {
  Heuristic heuristic;
  ActiveSet chosen;
  std::size_t k = 0;
  std::optional<std::uint64_t> seed;
  std::uint64_t oracle_evals = 0;
  /// Oracle value of the chosen set (LazyGreedy only).
  std::optional<double> objective;
};

Selection select_random(const Graph& g, std::size_t k, std::uint64_t seed);
Selection select_high_degree(const Graph& g, std::size_t k);
Selection select_centrality(const Graph& g, std::size_t k);
Selection select_temperature(const Graph& g, std::size_t k);
Selection select_vertex_cover(const Graph& g, std::size_t k);
Selection select_weak(const WeakSelectionTables& tables, std::size_t k);
Selection select_weak(const Graph& g, std::size_t k);

/// Shortest-path betweenness on the unweighted support (directed paths for
/// digraphs). Undirected values count each unordered pair once.
std::vector<double> betweenness(const Graph& g);

/// Number of support edges with at least one endpoint in the set. Each
/// unordered pair counts once.
std::size_t edges_covered(const Graph& g, const ActiveSet& set);

struct OracleValue {
  double value = 0.0;
  double std_error = 0.0;
};

using SetOracle = std::function<OracleValue(const ActiveSet&)>;

/// CELF lazy greedy. Marginal-gain bounds sit in a max-queue; the top
/// candidate is re-evaluated against the current set and accepted once its
/// fresh gain is at least the next bound minus epsilon. Without an explicit
/// epsilon, 2x the stderr of the latest evaluation is used.
Selection lazy_greedy(std::size_t n, std::size_t k, const SetOracle& oracle,
                      std::optional<double> epsilon = std::nullopt);

}  // namespace fxlab
