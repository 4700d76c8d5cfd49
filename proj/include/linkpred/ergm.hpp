#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linkpred/graph.hpp"

namespace linkpred::ergm {

enum class TermKind { Edges, Triangles, KStar };

struct Term {
  TermKind kind = TermKind::Edges;
  int k = 0;  // star size, KStar only

  static Term edges() { return {TermKind::Edges, 0}; }
  static Term triangles() { return {TermKind::Triangles, 0}; }
  static Term kstar(int k) { return {TermKind::KStar, k}; }

  /// "edges", "triangles", "kstar3", ...
  std::string name() const;
  static Term parse(const std::string& name);

  friend bool operator==(const Term&, const Term&) = default;
};

/// Ordered, nonempty, duplicate-free list of sufficient statistics.
class StatSpec {
 public:
  StatSpec() = default;
  explicit StatSpec(std::vector<Term> terms);
  /// Comma-separated term names, e.g. "edges,triangles,kstar3".
  static StatSpec parse(const std::string& list);

  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& operator[](std::size_t i) const { return terms_[i]; }
  std::optional<std::size_t> index_of(TermKind kind) const;
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

struct ErgmModel {
  StatSpec spec;
  std::vector<double> theta;
  std::vector<double> std_errors;
  std::string estimator;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  /// Estimator-specific convergence details (gradient norm, moment gap, ...).
  std::vector<std::pair<std::string, double>> diagnostics;
};

/// Undirected graph with O(1) dyad toggling; the state space of the sampler.
class DenseGraph {
 public:
  explicit DenseGraph(std::size_t n) : n_(n), adj_(n * n, 0), deg_(n, 0) {}
  explicit DenseGraph(const Graph& g);

  std::size_t num_nodes() const { return n_; }
  std::size_t num_edges() const { return m_; }
  bool has_edge(NodeId i, NodeId j) const { return adj_[i * n_ + j] != 0; }
  std::size_t degree(NodeId i) const { return deg_[i]; }
  void toggle(NodeId i, NodeId j);
  std::size_t common_neighbors(NodeId i, NodeId j) const;
  Graph to_graph() const;

 private:
  std::size_t n_;
  std::size_t m_ = 0;
  std::vector<std::uint8_t> adj_;
  std::vector<std::size_t> deg_;
};

/// Binomial coefficient as a double; 0 when k > n.
double choose(std::size_t n, int k);

/// Sufficient statistics g(y).
std::vector<double> statistics(const Graph& g, const StatSpec& spec);
std::vector<double> statistics(const DenseGraph& g, const StatSpec& spec);

/// g(y with dyad on) - g(y with dyad off), from local structure only.
std::vector<double> change_statistics(const Graph& g, NodeId i, NodeId j, const StatSpec& spec);
std::vector<double> change_statistics(const DenseGraph& g, NodeId i, NodeId j, const StatSpec& spec);

struct DyadPlan {
  enum class Kind { Auto, AllDyads, Balanced } kind = Kind::Auto;
  /// Auto switches to the balanced plan above this many dyads.
  std::size_t all_dyads_limit = 2'000'000;
};

struct MpleOptions {
  DyadPlan plan;
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
};

/// Maximum pseudo-likelihood by Newton-Raphson on the dyad-level logistic
/// regression of y_ij on the change statistics. The balanced plan keeps all
/// edges plus as many sampled non-edges and corrects the Edges coefficient by
/// log(pi_1 / pi_0). Throws ConvergenceError on separation.
ErgmModel fit_mple(const Graph& g, const StatSpec& spec, std::uint64_t seed, const MpleOptions& options = {});

struct SimulationConfig {
  std::size_t burn_in = 10'000;
  std::size_t iterations = 100'000;  ///< proposals after burn-in
  std::size_t thin = 100;
};

/// Calls `visit` with the current graph and its statistics after every
/// `thin`-th post-burn-in proposal. Starts from `start` if given, else empty.
void run_sampler(const ErgmModel& model, std::size_t n, const SimulationConfig& config, std::uint64_t seed,
                 const std::function<void(const DenseGraph&, std::span<const double>)>& visit,
                 const Graph* start = nullptr);

/// Metropolis-Hastings on single dyad toggles; returns the thinned samples.
std::vector<Graph> simulate_mh(const ErgmModel& model, std::size_t n, const SimulationConfig& config,
                               std::uint64_t seed);

struct McmcMleConfig {
  std::size_t max_nodes = 200;
  int max_rounds = 30;
  std::size_t samples = 4000;
  std::size_t final_samples = 40000;
  std::size_t burn_in = 0;   ///< 0 picks 20 * C(n,2)
  std::size_t thin = 0;      ///< 0 picks C(n,2)
  double step = 1.0;
  /// Convergence when every |gap_k| is within this many Monte Carlo standard errors.
  double gap_z = 2.0;
  /// Overrides the MPLE starting point.
  std::vector<double> initial_theta;
};

/// Monte Carlo MLE (Geyer-Thompson importance sampling) started at the MPLE.
ErgmModel fit_mcmcmle(const Graph& g, const StatSpec& spec, const McmcMleConfig& config, std::uint64_t seed);

/// P(y_ij = 1 | rest of g) = sigmoid(theta . delta_ij(g)).
std::vector<double> predict_dyads(const ErgmModel& model, const Graph& g, std::span<const Dyad> dyads);

}  // namespace linkpred::ergm
