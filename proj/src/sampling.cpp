#include "linkpred/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>
#include <unordered_set>

#include "linkpred/error.hpp"
#include "linkpred/rng.hpp"

namespace linkpred {

namespace {

std::uint64_t dyad_key(const Dyad& d, std::size_t n) { return std::uint64_t(d.u) * n + d.v; }

template <class T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[uniform_index(rng, i)]);
}

}  // namespace

EdgeSplit split_edges(const Graph& g, double test_frac, std::uint64_t seed) {
  if (!(test_frac > 0.0 && test_frac < 1.0)) throw InputError("test fraction must lie in (0, 1)");
  const std::size_t m = g.num_edges();
  if (m < 2) throw InputError("splitting needs at least two edges");
  const auto k = static_cast<std::size_t>(std::llround(test_frac * static_cast<double>(m)));
  if (k == 0 || k == m)
    throw InputError("test fraction " + std::to_string(test_frac) + " leaves an empty train or test set");

  std::vector<Dyad> edges = g.edges();
  Rng rng(derive_seed(seed, 0));
  shuffle(edges, rng);

  EdgeSplit split;
  split.seed = seed;
  split.test_frac = test_frac;
  split.test_pos.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(split.test_pos.begin(), split.test_pos.end());
  std::vector<Dyad> rest(edges.begin() + static_cast<std::ptrdiff_t>(k), edges.end());
  split.train = Graph::from_edges(g.num_nodes(), rest, g.labels());
  return split;
}

std::vector<Dyad> sample_negatives(const Graph& g, std::size_t count, std::uint64_t seed,
                                   std::span<const Dyad> exclude) {
  const std::size_t n = g.num_nodes();
  std::unordered_set<std::uint64_t> excluded;
  for (const Dyad& d : exclude)
    if (d.u != d.v && d.v < n && !g.has_edge(d.u, d.v)) excluded.insert(dyad_key(d, n));

  const std::size_t pairs = n < 2 ? 0 : n * (n - 1) / 2;
  const std::size_t capacity = pairs - g.num_edges() - excluded.size();
  if (count > capacity) throw CapacityError(count, capacity);

  std::vector<Dyad> out;
  out.reserve(count);
  Rng rng(seed);

  if (2 * count <= capacity && 4 * capacity >= pairs) {
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(count * 2);
    while (out.size() < count) {
      const auto a = static_cast<NodeId>(uniform_index(rng, n));
      auto b = static_cast<NodeId>(uniform_index(rng, n - 1));
      if (b >= a) ++b;
      const Dyad d(a, b);
      const std::uint64_t key = dyad_key(d, n);
      if (g.has_edge(d.u, d.v) || excluded.contains(key) || !chosen.insert(key).second) continue;
      out.push_back(d);
    }
    return out;
  }

  // Dense regime: enumerate every admissible dyad, then partial shuffle.
  std::vector<Dyad> pool;
  pool.reserve(capacity);
  for (NodeId u = 0; u < n; ++u) {
    const auto nb = g.neighbors(u);
    auto it = std::upper_bound(nb.begin(), nb.end(), u);
    for (NodeId v = u + 1; v < n; ++v) {
      while (it != nb.end() && *it < v) ++it;
      if (it != nb.end() && *it == v) continue;
      if (excluded.contains(dyad_key(Dyad(u, v), n))) continue;
      pool.emplace_back(u, v);
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
    out.push_back(pool[i]);
  }
  return out;
}

EdgeSplit make_split(const Graph& g, double test_frac, std::uint64_t seed) {
  EdgeSplit split = split_edges(g, test_frac, seed);
  split.test_neg = sample_negatives(g, split.test_pos.size(), derive_seed(seed, 1), split.test_pos);
  return split;
}

void WalkCorpus::add_walk(std::span<const NodeId> walk) {
  tokens_.insert(tokens_.end(), walk.begin(), walk.end());
  offsets_.push_back(tokens_.size());
}

WalkCorpus generate_walks(const Graph& g, const WalkConfig& config) {
  if (config.walks_per_node < 1 || config.walk_length < 1)
    throw InputError("walks per node and walk length must be positive");
  const std::size_t n = g.num_nodes();
  const auto r = static_cast<std::size_t>(config.walks_per_node);
  const auto len = static_cast<std::size_t>(config.walk_length);

  WalkCorpus corpus;
  corpus.walks_per_node = config.walks_per_node;
  corpus.walk_length = config.walk_length;
  corpus.seed = config.seed;

  // Every node reachable by a step has a neighbor, so only isolated start
  // nodes produce short walks and the layout is known up front.
  corpus.offsets_.assign(n * r + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t walk_len = g.degree(v) > 0 ? len : 1;
    for (std::size_t w = 0; w < r; ++w) corpus.offsets_[v * r + w + 1] = corpus.offsets_[v * r + w] + walk_len;
  }
  corpus.tokens_.resize(corpus.offsets_.back());

  auto walk_from = [&](NodeId start) {
    Rng rng(derive_seed(config.seed, start));
    for (std::size_t w = 0; w < r; ++w) {
      NodeId* out = corpus.tokens_.data() + corpus.offsets_[start * r + w];
      const std::size_t walk_len = corpus.offsets_[start * r + w + 1] - corpus.offsets_[start * r + w];
      NodeId cur = start;
      out[0] = cur;
      for (std::size_t t = 1; t < walk_len; ++t) {
        const auto nb = g.neighbors(cur);
        cur = nb[uniform_index(rng, nb.size())];
        out[t] = cur;
      }
    }
  };

  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    for (NodeId v = 0; v < n; ++v) walk_from(v);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t v = static_cast<std::size_t>(t); v < n; v += static_cast<std::size_t>(threads))
          walk_from(static_cast<NodeId>(v));
      });
  }
  return corpus;
}

void write_walks(const WalkCorpus& corpus, const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  for (std::size_t i = 0; i < corpus.num_walks(); ++i) {
    const auto walk = corpus.walk(i);
    for (std::size_t t = 0; t < walk.size(); ++t) out << (t ? " " : "") << g.label(walk[t]);
    out << '\n';
  }
}

}  // namespace linkpred
