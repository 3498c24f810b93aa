#pragma once

#include <cstdint>
#include <string>

#include "fxlab/graph.hpp"

namespace fxlab {

Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
/// Node 0 is the center; 1..n-1 are leaves.
Graph star_graph(std::size_t n);
Graph path_graph(std::size_t n);

/// Uniform simple graph with m edges, resampled until connected.
Graph random_connected(std::size_t n, std::size_t m, std::uint64_t seed);

/// Random strongly connected digraph: a shuffled Hamiltonian cycle plus
/// `extra` random arcs. With `weighted`, out-weights are random positive
/// values normalized per node; otherwise uniform by out-degree.
Graph random_strongly_connected(std::size_t n, std::size_t extra, std::uint64_t seed,
                                bool weighted);

/// Parses `cycle(50)`, `complete(4)`, `star(4)`, `path(3)` or
/// `random-connected(n,m,seed)`. A colon form such as `cycle:50` is accepted too.
Graph generate(const std::string& spec);

}  // namespace fxlab
