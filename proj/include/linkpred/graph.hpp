#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace linkpred {

using NodeId = std::uint32_t;

/// Unordered node pair, stored with u < v.
struct Dyad {
  NodeId u = 0;
  NodeId v = 0;

  Dyad() = default;
  Dyad(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend bool operator==(const Dyad&, const Dyad&) = default;
  friend auto operator<=>(const Dyad&, const Dyad&) = default;
};

/// Immutable undirected simple graph in compressed sparse row form.
///
/// Neighbor lists are sorted, symmetric, and free of self-loops and
/// duplicates. Node ids are contiguous; the original identifiers seen in the
/// input are kept in labels() when the graph came from an edge list.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on n nodes. Edges may come in any order and orientation;
  /// self-loops are dropped and duplicates collapsed.
  static Graph from_edges(std::size_t n, std::span<const Dyad> edges,
                          std::vector<std::int64_t> labels = {});
  static Graph from_edges(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId a, NodeId b) const;

  /// Original identifier of node v (v itself when no labels were supplied).
  std::int64_t label(NodeId v) const { return labels_.empty() ? std::int64_t(v) : labels_[v]; }
  const std::vector<std::int64_t>& labels() const { return labels_; }

  /// All edges as dyads, sorted.
  std::vector<Dyad> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<std::int64_t> labels_;
};

/// Reads a SNAP-style edge list: '#' comment lines, blank lines, and lines of
/// two whitespace-separated integer ids. Node ids are relabeled to 0..n-1 in
/// ascending order of the original id.
Graph parse_edge_list(std::istream& in);
Graph read_edge_list(const std::string& path);

/// Writes each undirected edge once as "label(u) label(v)" with u < v.
void write_edge_list(const Graph& g, std::ostream& out);

struct DegreeSummary {
  double mean = 0.0;
  std::size_t max = 0;
  std::size_t above_threshold = 0;
};

DegreeSummary degree_summary(const Graph& g, std::size_t threshold);

struct Components {
  std::size_t count = 0;
  std::size_t giant_size = 0;
  std::uint32_t giant_id = 0;
  /// Component id per node, numbered in order of smallest member.
  std::vector<std::uint32_t> id;
  std::vector<std::size_t> sizes;
};

Components connected_components(const Graph& g);

/// Exact diameter of one connected component, in edges.
std::size_t diameter(const Graph& g, const Components& comps, std::uint32_t component);

struct Clique {
  std::vector<NodeId> members;
  std::size_t size() const { return members.size(); }
};

/// Exact maximum clique. Throws CliqueTimeout carrying the incumbent when the
/// budget runs out.
Clique max_clique(const Graph& g, std::chrono::duration<double> budget = std::chrono::minutes(15));

struct GraphStats {
  std::size_t n = 0;
  std::size_t m = 0;
  double density = 0.0;
  double mean_degree = 0.0;
  std::size_t max_degree = 0;
  std::size_t degree_threshold = 0;
  std::size_t high_degree_count = 0;
  std::size_t components = 0;
  std::size_t giant_size = 0;
  double giant_fraction = 0.0;
  std::size_t diameter = 0;
  std::size_t max_clique = 0;
  /// False when the clique search ran out of budget; max_clique is then a lower bound.
  bool clique_exact = true;
  std::vector<std::int64_t> clique_witness;
};

struct StatsOptions {
  std::size_t degree_threshold = 400;
  std::chrono::duration<double> clique_budget = std::chrono::minutes(15);
};

GraphStats full_stats(const Graph& g, const StatsOptions& options = {});

}  // namespace linkpred
