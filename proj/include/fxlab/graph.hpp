#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace fxlab {

using NodeId = std::uint32_t;

struct WeightedEdge {
  NodeId from;
  NodeId to;
  double weight;
};

/// Sorted, duplicate-free set of nodes that realize the mutant advantage.
class ActiveSet {
 public:
  ActiveSet() = default;
  explicit ActiveSet(std::vector<NodeId> members);

  const std::vector<NodeId>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(NodeId u) const;

  ActiveSet with(NodeId u) const;

  /// Dense 0/1 membership table of length n; throws if a member is >= n.
  std::vector<std::uint8_t> mask(std::size_t n) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const ActiveSet&, const ActiveSet&) = default;

 private:
  std::vector<NodeId> members_;
};

/// Population structure: a strongly connected digraph whose out-weights form a
/// probability distribution at every node. Immutable once built.
class Graph {
 public:
  std::size_t size() const noexcept { return labels_.size(); }
  bool undirected() const noexcept { return undirected_; }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {out_targets_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
  }
  std::span<const double> out_weights(NodeId u) const {
    return {out_w_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }
  std::span<const double> in_weights(NodeId v) const {
    return {in_w_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }

  /// Out-degree of the support. Equals the usual degree on undirected graphs.
  std::size_t degree(NodeId u) const { return out_offsets_[u + 1] - out_offsets_[u]; }

  /// w(u,v), or 0 when (u,v) is not an edge.
  double weight(NodeId u, NodeId v) const;

  const std::string& label(NodeId u) const { return labels_[u]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Index of a label; throws InvalidArgument when unknown.
  NodeId find(const std::string& label) const;

  /// All edges, sorted by (from, to).
  std::vector<WeightedEdge> edges() const;

  friend Graph build_directed(std::size_t, std::span<const WeightedEdge>, std::vector<std::string>);
  friend Graph build_undirected(std::size_t, std::span<const std::pair<NodeId, NodeId>>,
                                std::vector<std::string>);

 private:
  Graph() = default;
  static Graph from_sorted(std::size_t n, std::vector<WeightedEdge> edges, bool undirected,
                           std::vector<std::string> labels);

  std::vector<std::string> labels_;
  bool undirected_ = false;
  std::vector<std::size_t> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<double> out_w_;
  std::vector<std::size_t> in_offsets_;
  std::vector<NodeId> in_sources_;
  std::vector<double> in_w_;
};

/// Builds a weighted digraph. Rows within 1e-9 of one are renormalized;
/// anything further off is rejected. Labels default to "0".."n-1".
Graph build_directed(std::size_t n, std::span<const WeightedEdge> edges,
                     std::vector<std::string> labels = {});

/// Builds a simple undirected graph with w(u,v) = 1/deg(u).
Graph build_undirected(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                       std::vector<std::string> labels = {});

struct ParseOptions {
  bool directed = false;
  bool weighted = false;
};

/// Reads `<u> <v> [<w>]` lines; `#` starts a comment. Labels are mapped to
/// indices in order of first appearance.
Graph parse_edge_list(std::istream& in, ParseOptions options);
Graph parse_edge_list(const std::string& text, ParseOptions options);
Graph load_edge_list(const std::string& path, ParseOptions options);

/// Canonical text form: edges sorted by index pair. Undirected graphs list each
/// edge once (smaller index first) without weights; directed graphs always
/// carry weights.
std::string serialize(const Graph& g);

/// Total incoming replacement weight, sum over v of w(v,u).
double temperature(const Graph& g, NodeId u);

}  // namespace fxlab
