#include "fxlab/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "fxlab/error.hpp"
#include "fxlab/rng.hpp"

namespace fxlab {

std::string_view to_string(Heuristic h) {
  switch (h) {
    case Heuristic::Random: return "random";
    case Heuristic::HighDegree: return "high-degree";
    case Heuristic::Centrality: return "centrality";
    case Heuristic::Temperature: return "temperature";
    case Heuristic::VertexCover: return "vertex-cover";
    case Heuristic::WeakSelector: return "weak-selector";
    case Heuristic::LazyGreedy: return "lazy-greedy";
  }
  return "unknown";
}

std::optional<Heuristic> parse_heuristic(std::string_view name) {
  for (Heuristic h : kAllHeuristics)
    if (to_string(h) == name) return h;
  return std::nullopt;
}

namespace {

// Scores closer than this (relative) count as tied, so that symmetric nodes
// whose scores differ only by rounding still fall back to index order.
constexpr double kTieTolerance = 1e-12;

ActiveSet top_k(const std::vector<double>& score, std::size_t k) {
  const std::size_t n = score.size();
  k = std::min(k, n);
  std::vector<std::uint8_t> taken(n, 0);
  std::vector<NodeId> chosen;
  chosen.reserve(k);
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best = n;
    for (std::size_t u = 0; u < n; ++u) {
      if (taken[u]) continue;
      if (best == n || score[u] > score[best] + kTieTolerance * std::max(1.0, std::abs(score[best]))) {
        best = u;
      }
    }
    taken[best] = 1;
    chosen.push_back(NodeId(best));
  }
  return ActiveSet(std::move(chosen));
}

Selection make(Heuristic h, std::size_t k, ActiveSet chosen) {
  Selection s{h, std::move(chosen), k, std::nullopt, 0, std::nullopt};
  return s;
}

// Unordered support pairs as an adjacency list.
std::vector<std::vector<NodeId>> undirected_support(const Graph& g) {
  std::vector<std::vector<NodeId>> adj(g.size());
  for (NodeId u = 0; u < g.size(); ++u) {
    for (NodeId v : g.out_neighbors(u)) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

}  // namespace

Selection select_random(const Graph& g, std::size_t k, std::uint64_t seed) {
  const std::size_t n = g.size();
  k = std::min(k, n);
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  Rng rng(stream_seed(seed, 0x72616e646f6dULL));
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(nodes[i], nodes[pick(rng)]);
  }
  nodes.resize(k);
  Selection s = make(Heuristic::Random, k, ActiveSet(std::move(nodes)));
  s.seed = seed;
  return s;
}

Selection select_high_degree(const Graph& g, std::size_t k) {
  std::vector<double> deg(g.size());
  for (NodeId u = 0; u < g.size(); ++u) deg[u] = double(g.degree(u));
  return make(Heuristic::HighDegree, k, top_k(deg, k));
}

std::vector<double> betweenness(const Graph& g) {
  // Brandes' accumulation over BFS shortest paths.
  const std::size_t n = g.size();
  std::vector<double> cb(n, 0.0);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    queue.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      NodeId v = queue[head];
      order.push_back(v);
      for (NodeId w : g.out_neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  if (g.undirected()) {
    for (double& c : cb) c /= 2.0;
  }
  return cb;
}

Selection select_centrality(const Graph& g, std::size_t k) {
  return make(Heuristic::Centrality, k, top_k(betweenness(g), k));
}

Selection select_temperature(const Graph& g, std::size_t k) {
  std::vector<double> t(g.size());
  for (NodeId u = 0; u < g.size(); ++u) t[u] = temperature(g, u);
  return make(Heuristic::Temperature, k, top_k(t, k));
}

std::size_t edges_covered(const Graph& g, const ActiveSet& set) {
  const auto in = set.mask(g.size());
  const auto adj = undirected_support(g);
  std::size_t covered = 0;
  for (NodeId u = 0; u < g.size(); ++u)
    for (NodeId v : adj[u])
      if (u < v && (in[u] || in[v])) ++covered;
  return covered;
}

Selection select_vertex_cover(const Graph& g, std::size_t k) {
  const std::size_t n = g.size();
  k = std::min(k, n);
  const auto adj = undirected_support(g);
  // gain[u] = uncovered edges at u; adding u raises c(S) by exactly gain[u].
  std::vector<std::size_t> gain(n);
  for (NodeId u = 0; u < n; ++u) gain[u] = adj[u].size();
  std::vector<std::uint8_t> in(n, 0);
  std::vector<NodeId> chosen;
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best = n;
    for (std::size_t u = 0; u < n; ++u) {
      if (!in[u] && (best == n || gain[u] > gain[best])) best = u;
    }
    in[best] = 1;
    chosen.push_back(NodeId(best));
    for (NodeId v : adj[best]) {
      if (!in[v]) --gain[v];
    }
    gain[best] = 0;
  }
  return make(Heuristic::VertexCover, k, ActiveSet(std::move(chosen)));
}

Selection select_weak(const WeakSelectionTables& tables, std::size_t k) {
  auto w = weak_select(tables, k);
  Selection s = make(Heuristic::WeakSelector, k, std::move(w.chosen));
  s.objective = w.objective;
  return s;
}

Selection select_weak(const Graph& g, std::size_t k) {
  return select_weak(WeakSelectionTables::compute(g), k);
}

Selection lazy_greedy(std::size_t n, std::size_t k, const SetOracle& oracle, std::optional<double> epsilon) {
  Selection sel = make(Heuristic::LazyGreedy, k, {});
  const std::size_t budget = std::min(k, n);
  if (budget == 0) return sel;

  auto evaluate = [&](const ActiveSet& s) {
    ++sel.oracle_evals;
    try {
      return oracle(s);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::OracleFailure, e.what());
    }
  };

  struct Candidate {
    double gain;
    double value;  // oracle value of (set at evaluation time) + node
    NodeId node;
    std::size_t round;
  };
  auto lower = [](const Candidate& a, const Candidate& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  };
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(lower)> queue(lower);

  ActiveSet current;
  double current_value = evaluate(current).value;
  for (NodeId u = 0; u < n; ++u) {
    const OracleValue v = evaluate(ActiveSet({u}));
    queue.push({v.value - current_value, v.value, u, 0});
  }

  for (std::size_t round = 0; round < budget; ++round) {
    for (;;) {
      Candidate top = queue.top();
      queue.pop();
      if (top.round != round) {
        const OracleValue v = evaluate(current.with(top.node));
        top = {v.value - current_value, v.value, top.node, round};
        const double eps = epsilon ? *epsilon : 2.0 * v.std_error;
        if (!queue.empty() && top.gain < queue.top().gain - eps) {
          queue.push(top);
          continue;
        }
      }
      current = current.with(top.node);
      current_value = top.value;
      break;
    }
  }
  sel.chosen = current;
  sel.objective = current_value;
  return sel;
}

}  // namespace fxlab
