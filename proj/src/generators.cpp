#include "fxlab/generators.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

#include "fxlab/error.hpp"
#include "fxlab/rng.hpp"

namespace fxlab {

namespace {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

bool connected(std::size_t n, const EdgeList& edges) {
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto root = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (auto [u, v] : edges) {
    NodeId a = root(u), b = root(v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

std::size_t parse_size(const std::string& token, const std::string& spec) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(token, &used);
    if (used == token.size()) return std::size_t(v);
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::InvalidArgument, "bad number '" + token + "' in generator '" + spec + "'");
}

}  // namespace

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "cycle needs n >= 3");
  EdgeList e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(NodeId(i), NodeId((i + 1) % n));
  return build_undirected(n, e);
}

Graph complete_graph(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "complete graph needs n >= 2");
  EdgeList e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(NodeId(i), NodeId(j));
  return build_undirected(n, e);
}

Graph star_graph(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "star needs n >= 2");
  EdgeList e;
  for (std::size_t i = 1; i < n; ++i) e.emplace_back(NodeId(0), NodeId(i));
  return build_undirected(n, e);
}

Graph path_graph(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "path needs n >= 2");
  EdgeList e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(NodeId(i), NodeId(i + 1));
  return build_undirected(n, e);
}

Graph random_connected(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "random-connected needs n >= 2");
  const std::size_t max_edges = n * (n - 1) / 2;
  if (m + 1 < n || m > max_edges) {
    throw Error(ErrorCode::InvalidArgument, "random-connected needs n-1 <= m <= n(n-1)/2");
  }
  EdgeList all;
  all.reserve(max_edges);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(NodeId(i), NodeId(j));

  Rng rng(stream_seed(seed, 0));
  for (std::size_t attempt = 0; attempt < 100000; ++attempt) {
    // Partial Fisher-Yates: the first m entries are a uniform m-subset.
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
      std::swap(all[i], all[pick(rng)]);
    }
    EdgeList chosen(all.begin(), all.begin() + std::ptrdiff_t(m));
    if (connected(n, chosen)) {
      std::sort(chosen.begin(), chosen.end());
      return build_undirected(n, chosen);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "could not sample a connected graph; raise m");
}

Graph random_strongly_connected(std::size_t n, std::size_t extra, std::uint64_t seed,
                                bool weighted) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "digraph needs n >= 2");
  Rng rng(stream_seed(seed, 1));
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::set<std::pair<NodeId, NodeId>> arcs;
  for (std::size_t i = 0; i < n; ++i) arcs.emplace(order[i], order[(i + 1) % n]);
  const std::size_t max_arcs = n * (n - 1);
  std::uniform_int_distribution<NodeId> node(0, NodeId(n - 1));
  while (arcs.size() < std::min(max_arcs, n + extra)) {
    NodeId u = node(rng), v = node(rng);
    if (u != v) arcs.emplace(u, v);
  }

  std::vector<WeightedEdge> edges;
  std::vector<double> row(n, 0.0);
  std::uniform_real_distribution<double> w(0.2, 1.0);
  for (auto [u, v] : arcs) {
    double x = weighted ? w(rng) : 1.0;
    edges.push_back({u, v, x});
    row[u] += x;
  }
  for (auto& e : edges) e.weight /= row[e.from];
  return build_directed(n, edges);
}

Graph generate(const std::string& spec) {
  std::string name;
  std::vector<std::string> args;
  auto open = spec.find_first_of("(:");
  if (open == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "generator spec '" + spec + "' has no arguments");
  }
  name = spec.substr(0, open);
  std::string rest = spec.substr(open + 1);
  if (spec[open] == '(') {
    if (rest.empty() || rest.back() != ')') {
      throw Error(ErrorCode::InvalidArgument, "unbalanced parentheses in '" + spec + "'");
    }
    rest.pop_back();
  }
  for (char& c : rest) {
    if (c == ',' || c == ':') c = ' ';
  }
  std::istringstream in(rest);
  for (std::string t; in >> t;) args.push_back(t);

  auto expect = [&](std::size_t count) {
    if (args.size() != count) {
      throw Error(ErrorCode::InvalidArgument,
                  "generator '" + name + "' takes " + std::to_string(count) + " argument(s)");
    }
  };
  if (name == "cycle") {
    expect(1);
    return cycle_graph(parse_size(args[0], spec));
  }
  if (name == "complete") {
    expect(1);
    return complete_graph(parse_size(args[0], spec));
  }
  if (name == "star") {
    expect(1);
    return star_graph(parse_size(args[0], spec));
  }
  if (name == "path") {
    expect(1);
    return path_graph(parse_size(args[0], spec));
  }
  if (name == "random-connected") {
    expect(3);
    return random_connected(parse_size(args[0], spec), parse_size(args[1], spec),
                            parse_size(args[2], spec));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown generator '" + name + "'");
}

}  // namespace fxlab
