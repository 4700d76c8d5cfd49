#include "linkpred/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>

#include "linkpred/error.hpp"

namespace linkpred {

Graph Graph::from_edges(std::size_t n, std::span<const Dyad> edges, std::vector<std::int64_t> labels) {
  if (!labels.empty() && labels.size() != n) throw InputError("label count does not match node count");
  if (n > std::numeric_limits<NodeId>::max()) throw InputError("too many nodes");

  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (const Dyad& e : edges) {
    if (e.u >= n || e.v >= n) throw InputError("edge endpoint out of range");
    if (e.u == e.v) continue;
    arcs.emplace_back(e.u, e.v);
    arcs.emplace_back(e.v, e.u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.offsets_.assign(n + 1, 0);
  g.neighbors_.reserve(arcs.size());
  for (const auto& [a, b] : arcs) {
    ++g.offsets_[a + 1];
    g.neighbors_.push_back(b);
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.labels_ = std::move(labels);
  return g;
}

Graph Graph::from_edges(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges) {
  std::vector<Dyad> dyads;
  dyads.reserve(edges.size());
  for (const auto& [a, b] : edges) dyads.emplace_back(a, b);
  return from_edges(n, dyads);
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (degree(a) > degree(b)) std::swap(a, b);
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<Dyad> Graph::edges() const {
  std::vector<Dyad> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Parses the next integer token from [pos, end); advances pos.
bool next_token(const std::string& line, std::size_t& pos, std::int64_t& value, bool& malformed) {
  while (pos < line.size() && is_space(line[pos])) ++pos;
  if (pos == line.size()) return false;
  std::size_t end = pos;
  while (end < line.size() && !is_space(line[end])) ++end;
  const char* first = line.data() + pos;
  const char* last = line.data() + end;
  auto [ptr, ec] = std::from_chars(first, last, value);
  malformed = ec != std::errc() || ptr != last;
  pos = end;
  return true;
}

}  // namespace

Graph parse_edge_list(std::istream& in) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = 0;
    while (pos < line.size() && is_space(line[pos])) ++pos;
    if (pos == line.size() || line[pos] == '#') continue;

    std::int64_t ids[2];
    for (int k = 0; k < 2; ++k) {
      bool malformed = false;
      if (!next_token(line, pos, ids[k], malformed))
        throw ParseError(lineno, "expected two node ids");
      if (malformed) throw ParseError(lineno, "node id is not an integer");
    }
    std::int64_t extra;
    bool malformed = false;
    if (next_token(line, pos, extra, malformed)) throw ParseError(lineno, "expected exactly two node ids");
    raw.emplace_back(ids[0], ids[1]);
  }
  if (raw.empty()) throw ParseError(0, "edge list has no data lines");

  std::vector<std::int64_t> labels;
  labels.reserve(raw.size() * 2);
  for (const auto& [a, b] : raw) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  auto index_of = [&](std::int64_t id) {
    return static_cast<NodeId>(std::lower_bound(labels.begin(), labels.end(), id) - labels.begin());
  };
  std::vector<Dyad> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) edges.emplace_back(index_of(a), index_of(b));
  const std::size_t n = labels.size();
  return Graph::from_edges(n, edges, std::move(labels));
}

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (const Dyad& e : g.edges()) out << g.label(e.u) << ' ' << g.label(e.v) << '\n';
}

DegreeSummary degree_summary(const Graph& g, std::size_t threshold) {
  if (g.num_nodes() == 0) throw InputError("degree summary of an empty graph");
  DegreeSummary s;
  s.mean = 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    s.max = std::max(s.max, g.degree(v));
    if (g.degree(v) > threshold) ++s.above_threshold;
  }
  return s;
}

Components connected_components(const Graph& g) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = g.num_nodes();
  Components c;
  c.id.assign(n, unset);
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    if (c.id[s] != unset) continue;
    const auto cid = static_cast<std::uint32_t>(c.count++);
    queue.clear();
    queue.push_back(s);
    c.id[s] = cid;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (NodeId w : g.neighbors(queue[head]))
        if (c.id[w] == unset) {
          c.id[w] = cid;
          queue.push_back(w);
        }
    c.sizes.push_back(queue.size());
    if (queue.size() > c.giant_size) {
      c.giant_size = queue.size();
      c.giant_id = cid;
    }
  }
  return c;
}

namespace {

// BFS from source; fills dist for reached nodes and returns the eccentricity.
std::size_t bfs_eccentricity(const Graph& g, NodeId source, std::vector<std::uint32_t>& dist,
                             std::vector<NodeId>& queue) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::fill(dist.begin(), dist.end(), unset);
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  std::uint32_t ecc = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    ecc = dist[u];
    for (NodeId w : g.neighbors(u))
      if (dist[w] == unset) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  return ecc;
}

}  // namespace

// Eccentricity bounding (Takes & Kosters): every BFS tightens lower and upper
// eccentricity bounds of all nodes; nodes whose upper bound cannot exceed the
// current lower diameter bound are dropped. The result is exact.
std::size_t diameter(const Graph& g, const Components& comps, std::uint32_t component) {
  if (component >= comps.count) throw InputError("component id out of range");
  std::vector<NodeId> members;
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (comps.id[v] == component) members.push_back(v);
  if (members.size() <= 1) return 0;

  const std::size_t n = g.num_nodes();
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> lower(n, 0), upper(n, inf);
  std::vector<std::uint32_t> dist(n);
  std::vector<NodeId> queue;
  queue.reserve(members.size());

  std::size_t diam_lower = 0;
  std::vector<NodeId> candidates = members;
  bool pick_upper = true;
  while (!candidates.empty()) {
    // Alternate between the largest upper bound and the smallest lower bound.
    auto better = [&](NodeId a, NodeId b) {
      if (pick_upper) {
        if (upper[a] != upper[b]) return upper[a] > upper[b];
      } else if (lower[a] != lower[b]) {
        return lower[a] < lower[b];
      }
      if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
      return a < b;
    };
    const NodeId v = *std::min_element(candidates.begin(), candidates.end(), better);
    pick_upper = !pick_upper;

    const std::size_t ecc = bfs_eccentricity(g, v, dist, queue);
    diam_lower = std::max(diam_lower, ecc);
    for (NodeId w : candidates) {
      const std::size_t d = dist[w];
      lower[w] = std::max({lower[w], d, ecc - d});
      upper[w] = std::min(upper[w], ecc + d);
      diam_lower = std::max(diam_lower, lower[w]);
    }
    lower[v] = upper[v] = ecc;

    std::erase_if(candidates, [&](NodeId w) { return upper[w] <= diam_lower; });
  }
  return diam_lower;
}

namespace {

class CliqueSearch {
 public:
  CliqueSearch(const Graph& g, std::chrono::duration<double> budget)
      : g_(g), deadline_(std::chrono::steady_clock::now() +
                         std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget)) {}

  std::vector<NodeId> run() {
    const std::vector<NodeId> order = degeneracy_order();
    std::vector<std::size_t> pos(g_.num_nodes());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    if (g_.num_nodes() > 0) best_ = {order.front()};

    for (NodeId v : order) {
      std::vector<NodeId> later, earlier;
      for (NodeId w : g_.neighbors(v)) (pos[w] > pos[v] ? later : earlier).push_back(w);
      if (later.size() + 1 <= best_.size()) continue;
      std::vector<NodeId> r{v};
      expand(r, later, earlier);
    }
    return best_;
  }

 private:
  // Smallest-last ordering via bucket queue.
  std::vector<NodeId> degeneracy_order() const {
    const std::size_t n = g_.num_nodes();
    std::size_t max_deg = 0;
    std::vector<std::size_t> deg(n);
    for (NodeId v = 0; v < n; ++v) max_deg = std::max(max_deg, deg[v] = g_.degree(v));
    std::vector<std::vector<NodeId>> buckets(max_deg + 1);
    for (NodeId v = 0; v < n; ++v) buckets[deg[v]].push_back(v);
    std::vector<bool> removed(n, false);
    std::vector<NodeId> order;
    order.reserve(n);
    std::size_t d = 0;
    while (order.size() < n) {
      d = d > 0 ? d - 1 : 0;
      while (buckets[d].empty()) ++d;
      const NodeId v = buckets[d].back();
      buckets[d].pop_back();
      if (removed[v] || deg[v] != d) continue;
      removed[v] = true;
      order.push_back(v);
      for (NodeId w : g_.neighbors(v))
        if (!removed[w]) buckets[--deg[w]].push_back(w);
    }
    return order;
  }

  std::vector<NodeId> intersect(const std::vector<NodeId>& set, NodeId v) const {
    std::vector<NodeId> out;
    const auto nb = g_.neighbors(v);
    for (NodeId w : set)
      if (std::binary_search(nb.begin(), nb.end(), w)) out.push_back(w);
    return out;
  }

  void expand(std::vector<NodeId>& r, std::vector<NodeId> p, std::vector<NodeId> x) {
    if ((++calls_ & 0x3ff) == 0 && std::chrono::steady_clock::now() > deadline_) throw CliqueTimeout(best_);
    if (p.empty()) {
      if (r.size() > best_.size()) best_ = r;
      return;
    }
    if (r.size() + p.size() <= best_.size()) return;

    // Pivot maximizing |P ∩ N(u)| over P ∪ X.
    NodeId pivot = p.front();
    std::ptrdiff_t best_cover = -1;
    auto consider = [&](NodeId u) {
      const auto nb = g_.neighbors(u);
      std::ptrdiff_t cover = 0;
      for (NodeId w : p) cover += std::binary_search(nb.begin(), nb.end(), w);
      if (cover > best_cover) {
        best_cover = cover;
        pivot = u;
      }
    };
    for (NodeId u : p) consider(u);
    for (NodeId u : x) consider(u);

    std::vector<NodeId> branch;
    for (NodeId w : p)
      if (!g_.has_edge(pivot, w)) branch.push_back(w);

    for (NodeId v : branch) {
      r.push_back(v);
      expand(r, intersect(p, v), intersect(x, v));
      r.pop_back();
      std::erase(p, v);
      x.push_back(v);
      if (r.size() + p.size() <= best_.size()) return;
    }
  }

  const Graph& g_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<NodeId> best_;
  std::uint64_t calls_ = 0;
};

}  // namespace

Clique max_clique(const Graph& g, std::chrono::duration<double> budget) {
  Clique c;
  c.members = CliqueSearch(g, budget).run();
  std::sort(c.members.begin(), c.members.end());
  return c;
}

GraphStats full_stats(const Graph& g, const StatsOptions& options) {
  GraphStats s;
  s.n = g.num_nodes();
  s.m = g.num_edges();
  const double pairs = 0.5 * static_cast<double>(s.n) * static_cast<double>(s.n - 1);
  s.density = s.n > 1 ? static_cast<double>(s.m) / pairs : 0.0;

  const DegreeSummary deg = degree_summary(g, options.degree_threshold);
  s.mean_degree = deg.mean;
  s.max_degree = deg.max;
  s.degree_threshold = options.degree_threshold;
  s.high_degree_count = deg.above_threshold;

  const Components comps = connected_components(g);
  s.components = comps.count;
  s.giant_size = comps.giant_size;
  s.giant_fraction = static_cast<double>(comps.giant_size) / static_cast<double>(s.n);
  s.diameter = diameter(g, comps, comps.giant_id);

  std::vector<NodeId> members;
  try {
    members = max_clique(g, options.clique_budget).members;
  } catch (const CliqueTimeout& e) {
    members = e.witness();
    s.clique_exact = false;
  }
  s.max_clique = members.size();
  for (NodeId v : members) s.clique_witness.push_back(g.label(v));
  return s;
}

}  // namespace linkpred
