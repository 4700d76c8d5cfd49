#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linkpred/graph.hpp"

namespace linkpred {

/// Held-out positive edges, sampled negatives, and the graph that remains for
/// training. test_neg is empty until filled by sample_negatives().
struct EdgeSplit {
  Graph train;
  std::vector<Dyad> test_pos;
  std::vector<Dyad> test_neg;
  std::uint64_t seed = 0;
  double test_frac = 0.1;
};

/// Moves round(test_frac * m) uniformly chosen edges into test_pos. The train
/// graph keeps every node.
EdgeSplit split_edges(const Graph& g, double test_frac, std::uint64_t seed);

/// Draws `count` distinct non-edges of g, uniformly, skipping anything in
/// `exclude`. Throws CapacityError if fewer are available.
std::vector<Dyad> sample_negatives(const Graph& g, std::size_t count, std::uint64_t seed,
                                   std::span<const Dyad> exclude = {});

/// split_edges followed by |test_pos| negatives drawn from the original graph.
EdgeSplit make_split(const Graph& g, double test_frac, std::uint64_t seed);

struct WalkConfig;

/// Truncated random walks stored back to back.
class WalkCorpus {
 public:
  std::size_t num_walks() const { return offsets_.size() - 1; }
  std::span<const NodeId> walk(std::size_t i) const {
    return {tokens_.data() + offsets_[i], tokens_.data() + offsets_[i + 1]};
  }
  std::size_t num_tokens() const { return tokens_.size(); }
  std::span<const NodeId> tokens() const { return tokens_; }

  void add_walk(std::span<const NodeId> walk);

  int walks_per_node = 0;
  int walk_length = 0;
  std::uint64_t seed = 0;

 private:
  friend WalkCorpus generate_walks(const Graph& g, const WalkConfig& config);

  std::vector<NodeId> tokens_;
  std::vector<std::size_t> offsets_{0};
};

struct WalkConfig {
  int walks_per_node = 100;
  int walk_length = 30;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Uniform random walks, `walks_per_node` from every node. Ordering is by
/// start node, then walk index, independent of the thread count.
WalkCorpus generate_walks(const Graph& g, const WalkConfig& config);

/// One walk per line, node labels separated by spaces.
void write_walks(const WalkCorpus& corpus, const Graph& g, const std::string& path);

}  // namespace linkpred
