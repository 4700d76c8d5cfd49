#pragma once

#include <vector>

#include "linkpred/graph.hpp"
#include "linkpred/rng.hpp"

namespace fixtures {

using linkpred::Dyad;
using linkpred::Graph;
using linkpred::NodeId;

inline Graph path(std::size_t n) {
  std::vector<Dyad> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

inline Graph complete(std::size_t n) {
  std::vector<Dyad> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<Dyad> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
  return Graph::from_edges(n, e);
}

// Center 0 joined to leaves 1..leaves.
inline Graph star(std::size_t leaves) {
  std::vector<Dyad> e;
  for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

// Two K_k on nodes [0,k) and [k,2k), optionally joined by the edge (k-1, k).
inline Graph two_cliques(std::size_t k, bool bridge) {
  std::vector<Dyad> e;
  for (NodeId base : {NodeId{0}, static_cast<NodeId>(k)})
    for (NodeId i = 0; i < k; ++i)
      for (NodeId j = i + 1; j < k; ++j) e.emplace_back(base + i, base + j);
  if (bridge) e.emplace_back(static_cast<NodeId>(k - 1), static_cast<NodeId>(k));
  return Graph::from_edges(2 * k, e);
}

// G(n, p).
inline Graph gnp(std::size_t n, double p, std::uint64_t seed) {
  linkpred::Rng rng(seed);
  std::vector<Dyad> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (linkpred::uniform01(rng) < p) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

// G(n, p) plus a random spanning path, so the graph is connected.
inline Graph connected_gnp(std::size_t n, double p, std::uint64_t seed) {
  linkpred::Rng rng(seed ^ 0x5bd1e995u);
  std::vector<NodeId> order(n);
  for (NodeId i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[linkpred::uniform_index(rng, i)]);
  std::vector<Dyad> e = gnp(n, p, seed).edges();
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(order[i], order[i + 1]);
  return Graph::from_edges(n, e);
}

// Graph on n nodes from the bits of mask over the dyads in lexicographic order.
inline Graph from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<Dyad> e;
  std::size_t bit = 0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j, ++bit)
      if (mask >> bit & 1u) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

// `groups` cliques of size k arranged in a ring, one edge between neighbours.
inline Graph caveman_ring(std::size_t groups, std::size_t k) {
  std::vector<Dyad> e;
  for (std::size_t g = 0; g < groups; ++g) {
    const auto base = static_cast<NodeId>(g * k);
    for (NodeId i = 0; i < k; ++i)
      for (NodeId j = i + 1; j < k; ++j) e.emplace_back(base + i, base + j);
    e.emplace_back(base + static_cast<NodeId>(k - 1), static_cast<NodeId>(((g + 1) % groups) * k));
  }
  return Graph::from_edges(groups * k, e);
}

}  // namespace fixtures
