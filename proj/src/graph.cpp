#include "fxlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "fxlab/error.hpp"

namespace fxlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::RowNotStochastic: return "RowNotStochastic";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::WeightedUndirected: return "WeightedUndirected";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DirectedUnsupported: return "DirectedUnsupported";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SolverSingular: return "SolverSingular";
    case ErrorCode::ExcessiveTimeouts: return "ExcessiveTimeouts";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// ActiveSet

ActiveSet::ActiveSet(std::vector<NodeId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool ActiveSet::contains(NodeId u) const {
  return std::binary_search(members_.begin(), members_.end(), u);
}

ActiveSet ActiveSet::with(NodeId u) const {
  auto m = members_;
  m.push_back(u);
  return ActiveSet(std::move(m));
}

std::vector<std::uint8_t> ActiveSet::mask(std::size_t n) const {
  std::vector<std::uint8_t> out(n, 0);
  for (NodeId u : members_) {
    if (u >= n) {
      throw Error(ErrorCode::NodeOutOfRange, "active node " + std::to_string(u) + " >= n");
    }
    out[u] = 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graph

namespace {

constexpr double kRowTolerance = 1e-12;
constexpr double kRenormalizeWindow = 1e-9;

std::vector<std::string> default_labels(std::size_t n, std::vector<std::string> labels) {
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "label count does not match node count");
  }
  return labels;
}

// Strongly connected iff node 0 reaches every node along the arcs and against them.
bool strongly_connected(std::size_t n, const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<NodeId>> fwd(n), bwd(n);
  for (const auto& e : edges) {
    fwd[e.from].push_back(e.to);
    bwd[e.to].push_back(e.from);
  }
  auto reaches_all = [n](const std::vector<std::vector<NodeId>>& adj) {
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

}  // namespace

Graph Graph::from_sorted(std::size_t n, std::vector<WeightedEdge> edges, bool undirected,
                         std::vector<std::string> labels) {
  Graph g;
  g.labels_ = std::move(labels);
  g.undirected_ = undirected;

  g.out_offsets_.assign(n + 1, 0);
  for (const auto& e : edges) ++g.out_offsets_[e.from + 1];
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
  g.out_targets_.reserve(edges.size());
  g.out_w_.reserve(edges.size());
  for (const auto& e : edges) {
    g.out_targets_.push_back(e.to);
    g.out_w_.push_back(e.weight);
  }

  g.in_offsets_.assign(n + 1, 0);
  for (const auto& e : edges) ++g.in_offsets_[e.to + 1];
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  g.in_sources_.resize(edges.size());
  g.in_w_.resize(edges.size());
  std::vector<std::size_t> fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (const auto& e : edges) {
    std::size_t slot = fill[e.to]++;
    g.in_sources_[slot] = e.from;
    g.in_w_[slot] = e.weight;
  }
  return g;
}

double Graph::weight(NodeId u, NodeId v) const {
  auto targets = out_neighbors(u);
  auto it = std::lower_bound(targets.begin(), targets.end(), v);
  if (it == targets.end() || *it != v) return 0.0;
  return out_weights(u)[std::size_t(it - targets.begin())];
}

NodeId Graph::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(ErrorCode::InvalidArgument, "unknown node label '" + label + "'");
  return NodeId(it - labels_.begin());
}

std::vector<WeightedEdge> Graph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(out_targets_.size());
  for (NodeId u = 0; u < size(); ++u) {
    auto t = out_neighbors(u);
    auto w = out_weights(u);
    for (std::size_t i = 0; i < t.size(); ++i) out.push_back({u, t[i], w[i]});
  }
  return out;
}

Graph build_directed(std::size_t n, std::span<const WeightedEdge> input,
                     std::vector<std::string> labels) {
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "graph has no nodes");
  labels = default_labels(n, std::move(labels));

  std::vector<WeightedEdge> edges(input.begin(), input.end());
  for (const auto& e : edges) {
    if (e.from >= n || e.to >= n) {
      throw Error(ErrorCode::NodeOutOfRange,
                  "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ") out of range");
    }
    if (e.from == e.to) throw Error(ErrorCode::SelfLoop, "self-loop at node " + labels[e.from]);
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::NonPositiveWeight,
                  "edge " + labels[e.from] + "->" + labels[e.to] + " has non-positive weight");
    }
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].from == edges[i - 1].from && edges[i].to == edges[i - 1].to) {
      throw Error(ErrorCode::DuplicateEdge,
                  "duplicate edge " + labels[edges[i].from] + "->" + labels[edges[i].to]);
    }
  }

  if (!strongly_connected(n, edges)) {
    throw Error(ErrorCode::NotStronglyConnected, "support graph is not strongly connected");
  }

  std::vector<double> row_sum(n, 0.0);
  for (const auto& e : edges) row_sum[e.from] += e.weight;
  for (std::size_t u = 0; u < n; ++u) {
    if (std::abs(row_sum[u] - 1.0) > kRenormalizeWindow) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", row_sum[u]);
      throw Error(ErrorCode::RowNotStochastic, "out-weights of node " + labels[u] + " sum to " + buf);
    }
  }
  for (auto& e : edges) {
    if (row_sum[e.from] != 1.0) e.weight /= row_sum[e.from];
  }
  std::fill(row_sum.begin(), row_sum.end(), 0.0);
  for (const auto& e : edges) row_sum[e.from] += e.weight;
  for (std::size_t u = 0; u < n; ++u) {
    if (std::abs(row_sum[u] - 1.0) > kRowTolerance) {
      throw Error(ErrorCode::RowNotStochastic, "node " + labels[u] + " not stochastic after normalization");
    }
  }

  return Graph::from_sorted(n, std::move(edges), false, std::move(labels));
}

Graph build_undirected(std::size_t n, std::span<const std::pair<NodeId, NodeId>> input,
                       std::vector<std::string> labels) {
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "graph has no nodes");
  labels = default_labels(n, std::move(labels));

  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(2 * input.size());
  for (auto [u, v] : input) {
    if (u >= n || v >= n) {
      throw Error(ErrorCode::NodeOutOfRange,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    }
    if (u == v) throw Error(ErrorCode::SelfLoop, "self-loop at node " + labels[u]);
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  for (std::size_t i = 1; i < arcs.size(); ++i) {
    if (arcs[i] == arcs[i - 1]) {
      throw Error(ErrorCode::DuplicateEdge,
                  "duplicate edge " + labels[arcs[i].first] + "-" + labels[arcs[i].second]);
    }
  }

  std::vector<std::size_t> deg(n, 0);
  for (const auto& a : arcs) ++deg[a.first];
  std::vector<WeightedEdge> edges;
  edges.reserve(arcs.size());
  for (auto [u, v] : arcs) edges.push_back({u, v, 1.0 / double(deg[u])});

  if (n > 1 && std::any_of(deg.begin(), deg.end(), [](std::size_t d) { return d == 0; })) {
    throw Error(ErrorCode::NotStronglyConnected, "graph has an isolated node");
  }
  if (!strongly_connected(n, edges)) {
    throw Error(ErrorCode::NotStronglyConnected, "graph is disconnected");
  }
  if (n == 1) {
    throw Error(ErrorCode::NotStronglyConnected, "a single node has no outgoing distribution");
  }
  return Graph::from_sorted(n, std::move(edges), true, std::move(labels));
}

// ---------------------------------------------------------------------------
// Edge-list text format

Graph parse_edge_list(std::istream& in, ParseOptions options) {
  if (options.weighted && !options.directed) {
    throw Error(ErrorCode::WeightedUndirected, "undirected graphs carry uniform weights only");
  }
  std::unordered_map<std::string, NodeId> index;
  std::vector<std::string> labels;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.try_emplace(label, NodeId(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  struct RawEdge {
    NodeId u, v;
    double w;
  };
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;

    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
    };
    if (tokens.size() < 2 || tokens.size() > 3) fail("expected '<u> <v> [<w>]'");
    double w = 1.0;
    if (tokens.size() == 3) {
      if (!options.weighted) fail("unexpected weight in unweighted input");
      try {
        std::size_t used = 0;
        w = std::stod(tokens[2], &used);
        if (used != tokens[2].size()) fail("malformed weight '" + tokens[2] + "'");
      } catch (const std::logic_error&) {
        fail("malformed weight '" + tokens[2] + "'");
      }
    } else if (options.weighted) {
      fail("missing weight");
    }
    NodeId u = intern(tokens[0]);
    NodeId v = intern(tokens[1]);
    raw.push_back({u, v, w});
  }

  const std::size_t n = labels.size();
  if (!options.directed) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw.size());
    for (const auto& e : raw) edges.emplace_back(e.u, e.v);
    return build_undirected(n, edges, std::move(labels));
  }

  std::vector<WeightedEdge> edges;
  edges.reserve(raw.size());
  if (options.weighted) {
    for (const auto& e : raw) edges.push_back({e.u, e.v, e.w});
  } else {
    std::vector<std::size_t> outdeg(n, 0);
    for (const auto& e : raw) ++outdeg[e.u];
    for (const auto& e : raw) edges.push_back({e.u, e.v, 1.0 / double(outdeg[e.u])});
  }
  return build_directed(n, edges, std::move(labels));
}

Graph parse_edge_list(const std::string& text, ParseOptions options) {
  std::istringstream in(text);
  return parse_edge_list(in, options);
}

Graph load_edge_list(const std::string& path, ParseOptions options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return parse_edge_list(in, options);
}

std::string serialize(const Graph& g) {
  std::string out;
  char buf[64];
  for (const auto& e : g.edges()) {
    if (g.undirected()) {
      if (e.from > e.to) continue;
      out += g.label(e.from) + ' ' + g.label(e.to) + '\n';
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", e.weight);
      out += g.label(e.from) + ' ' + g.label(e.to) + ' ' + buf + '\n';
    }
  }
  return out;
}

double temperature(const Graph& g, NodeId u) {
  double t = 0.0;
  for (double w : g.in_weights(u)) t += w;
  return t;
}

}  // namespace fxlab
