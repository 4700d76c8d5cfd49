#include "linkpred/ergm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "linkpred/error.hpp"
#include "linkpred/rng.hpp"
#include "linkpred/sampling.hpp"

namespace linkpred::ergm {

std::string Term::name() const {
  switch (kind) {
    case TermKind::Edges:
      return "edges";
    case TermKind::Triangles:
      return "triangles";
    case TermKind::KStar:
      return "kstar" + std::to_string(k);
  }
  return "?";
}

Term Term::parse(const std::string& name) {
  if (name == "edges") return edges();
  if (name == "triangles" || name == "triangle") return triangles();
  if (name.rfind("kstar", 0) == 0 && name.size() > 5) {
    try {
      std::size_t used = 0;
      const int k = std::stoi(name.substr(5), &used);
      if (used == name.size() - 5) return kstar(k);
    } catch (const std::exception&) {
    }
  }
  throw InputError("unknown ERGM term '" + name + "'");
}

StatSpec::StatSpec(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw InputError("ERGM specification needs at least one term");
  for (std::size_t a = 0; a < terms_.size(); ++a) {
    if (terms_[a].kind == TermKind::KStar && terms_[a].k < 2) throw InputError("k-star terms need k >= 2");
    for (std::size_t b = 0; b < a; ++b)
      if (terms_[a] == terms_[b]) throw InputError("duplicate ERGM term " + terms_[a].name());
  }
}

StatSpec StatSpec::parse(const std::string& list) {
  std::vector<Term> terms;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) terms.push_back(Term::parse(item));
  return StatSpec(std::move(terms));
}

std::optional<std::size_t> StatSpec::index_of(TermKind kind) const {
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].kind == kind) return i;
  return std::nullopt;
}

std::string StatSpec::to_string() const {
  std::string out;
  for (const Term& t : terms_) out += (out.empty() ? "" : ",") + t.name();
  return out;
}

DenseGraph::DenseGraph(const Graph& g) : DenseGraph(g.num_nodes()) {
  for (const Dyad& e : g.edges()) toggle(e.u, e.v);
}

void DenseGraph::toggle(NodeId i, NodeId j) {
  const bool on = !has_edge(i, j);
  adj_[i * n_ + j] = adj_[j * n_ + i] = on;
  if (on) {
    ++deg_[i], ++deg_[j], ++m_;
  } else {
    --deg_[i], --deg_[j], --m_;
  }
}

std::size_t DenseGraph::common_neighbors(NodeId i, NodeId j) const {
  std::size_t c = 0;
  const std::uint8_t* a = adj_.data() + i * n_;
  const std::uint8_t* b = adj_.data() + j * n_;
  for (std::size_t w = 0; w < n_; ++w) c += a[w] & b[w];
  return c;
}

Graph DenseGraph::to_graph() const {
  std::vector<Dyad> edges;
  edges.reserve(m_);
  for (NodeId i = 0; i < n_; ++i)
    for (NodeId j = i + 1; j < n_; ++j)
      if (has_edge(i, j)) edges.emplace_back(i, j);
  return Graph::from_edges(n_, edges);
}

double choose(std::size_t n, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > n) return 0.0;
  double r = 1.0;
  // Each partial product is itself a binomial coefficient, hence integral.
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - static_cast<std::size_t>(k - i)) / i;
  return r;
}

namespace {

std::size_t sorted_intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t c = 0;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++c, ++ia, ++ib;
    }
  }
  return c;
}

template <class G>
double star_sum(const G& g, int k) {
  double s = 0.0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) s += choose(g.degree(v), k);
  return s;
}

// Writes delta_ij into out given the dyad-absent degrees and common neighbors.
void fill_change(const StatSpec& spec, std::size_t deg_i, std::size_t deg_j, std::size_t common,
                 std::span<double> out) {
  for (std::size_t t = 0; t < spec.size(); ++t) {
    switch (spec[t].kind) {
      case TermKind::Edges:
        out[t] = 1.0;
        break;
      case TermKind::Triangles:
        out[t] = static_cast<double>(common);
        break;
      case TermKind::KStar:
        out[t] = choose(deg_i, spec[t].k - 1) + choose(deg_j, spec[t].k - 1);
        break;
    }
  }
}

void change_into(const DenseGraph& g, NodeId i, NodeId j, const StatSpec& spec, std::span<double> out) {
  const std::size_t on = g.has_edge(i, j);
  fill_change(spec, g.degree(i) - on, g.degree(j) - on, g.common_neighbors(i, j), out);
}

void change_into(const Graph& g, NodeId i, NodeId j, const StatSpec& spec, std::span<double> out) {
  const std::size_t on = g.has_edge(i, j);
  const bool need_common = spec.index_of(TermKind::Triangles).has_value();
  const std::size_t common = need_common ? sorted_intersection_size(g.neighbors(i), g.neighbors(j)) : 0;
  fill_change(spec, g.degree(i) - on, g.degree(j) - on, common, out);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

}  // namespace

std::vector<double> statistics(const Graph& g, const StatSpec& spec) {
  std::vector<double> out(spec.size());
  for (std::size_t t = 0; t < spec.size(); ++t) {
    switch (spec[t].kind) {
      case TermKind::Edges:
        out[t] = static_cast<double>(g.num_edges());
        break;
      case TermKind::Triangles: {
        double tri = 0.0;
        for (NodeId u = 0; u < g.num_nodes(); ++u) {
          const auto nu = g.neighbors(u);
          for (NodeId v : nu) {
            if (v <= u) continue;
            const auto nv = g.neighbors(v);
            // Third vertex above v, so each triangle is seen once.
            auto from_u = std::upper_bound(nu.begin(), nu.end(), v);
            auto from_v = std::upper_bound(nv.begin(), nv.end(), v);
            tri += static_cast<double>(sorted_intersection_size({from_u, nu.end()}, {from_v, nv.end()}));
          }
        }
        out[t] = tri;
        break;
      }
      case TermKind::KStar:
        out[t] = star_sum(g, spec[t].k);
        break;
    }
  }
  return out;
}

std::vector<double> statistics(const DenseGraph& g, const StatSpec& spec) {
  std::vector<double> out(spec.size());
  const std::size_t n = g.num_nodes();
  for (std::size_t t = 0; t < spec.size(); ++t) {
    switch (spec[t].kind) {
      case TermKind::Edges:
        out[t] = static_cast<double>(g.num_edges());
        break;
      case TermKind::Triangles: {
        double tri = 0.0;
        for (NodeId i = 0; i < n; ++i)
          for (NodeId j = i + 1; j < n; ++j) {
            if (!g.has_edge(i, j)) continue;
            for (NodeId k = j + 1; k < n; ++k) tri += g.has_edge(i, k) && g.has_edge(j, k);
          }
        out[t] = tri;
        break;
      }
      case TermKind::KStar:
        out[t] = star_sum(g, spec[t].k);
        break;
    }
  }
  return out;
}

std::vector<double> change_statistics(const Graph& g, NodeId i, NodeId j, const StatSpec& spec) {
  if (i == j) throw InputError("change statistics need two distinct nodes");
  std::vector<double> out(spec.size());
  change_into(g, i, j, spec, out);
  return out;
}

std::vector<double> change_statistics(const DenseGraph& g, NodeId i, NodeId j, const StatSpec& spec) {
  if (i == j) throw InputError("change statistics need two distinct nodes");
  std::vector<double> out(spec.size());
  change_into(g, i, j, spec, out);
  return out;
}

namespace {

// Distinct change-statistic rows with their 0/1 response weights.
struct DesignRow {
  std::vector<double> delta;
  double w1 = 0.0;
  double w0 = 0.0;
};

double log_pseudo_likelihood(const std::vector<DesignRow>& rows, const Eigen::VectorXd& theta) {
  double ll = 0.0;
  for (const DesignRow& r : rows) {
    const double eta = dot(r.delta, {theta.data(), static_cast<std::size_t>(theta.size())});
    ll += r.w1 * (eta - softplus(eta)) - r.w0 * softplus(eta);
  }
  return ll;
}

}  // namespace

ErgmModel fit_mple(const Graph& g, const StatSpec& spec, std::uint64_t seed, const MpleOptions& options) {
  const std::size_t n = g.num_nodes();
  const std::size_t m = g.num_edges();
  const std::size_t pairs = n < 2 ? 0 : n * (n - 1) / 2;
  if (pairs == 0) throw InputError("MPLE needs at least two nodes");
  const std::size_t k = spec.size();

  DyadPlan::Kind plan = options.plan.kind;
  if (plan == DyadPlan::Kind::Auto)
    plan = pairs <= options.plan.all_dyads_limit ? DyadPlan::Kind::AllDyads : DyadPlan::Kind::Balanced;

  std::map<std::vector<double>, std::pair<double, double>> tally;
  std::vector<double> delta(k);
  auto add = [&](NodeId i, NodeId j, bool edge) {
    change_into(g, i, j, spec, delta);
    auto& [w1, w0] = tally[delta];
    (edge ? w1 : w0) += 1.0;
  };

  double edge_offset = 0.0;
  std::size_t dyads_used = 0;
  if (plan == DyadPlan::Kind::AllDyads) {
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j) add(i, j, g.has_edge(i, j));
    dyads_used = pairs;
  } else {
    const auto edges_index = spec.index_of(TermKind::Edges);
    if (!edges_index) throw InputError("the balanced dyad plan needs an edges term for its offset correction");
    const std::size_t non_edges = pairs - m;
    const std::size_t draw = std::min(m, non_edges);
    for (const Dyad& e : g.edges()) add(e.u, e.v, true);
    for (const Dyad& d : sample_negatives(g, draw, seed)) add(d.u, d.v, false);
    dyads_used = m + draw;
    // Case-control correction: edges kept with probability 1, non-edges with draw / non_edges.
    if (draw > 0) edge_offset = -std::log(static_cast<double>(non_edges) / static_cast<double>(draw));
  }

  std::vector<DesignRow> rows;
  rows.reserve(tally.size());
  for (auto& [d, w] : tally) rows.push_back({d, w.first, w.second});

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  Eigen::VectorXd grad(k);
  Eigen::MatrixXd info(k, k);
  auto evaluate = [&] {
    grad.setZero();
    info.setZero();
    for (const DesignRow& r : rows) {
      const Eigen::Map<const Eigen::VectorXd> x(r.delta.data(), static_cast<Eigen::Index>(k));
      const double p = sigmoid(x.dot(theta));
      grad += (r.w1 * (1.0 - p) - r.w0 * p) * x;
      info.noalias() += (r.w1 + r.w0) * p * (1.0 - p) * x * x.transpose();
    }
  };

  ErgmModel model;
  model.spec = spec;
  model.estimator = plan == DyadPlan::Kind::AllDyads ? "mple" : "mple-balanced";
  model.seed = seed;

  const std::string hint = "; the pseudo-likelihood has no finite maximum (separation), try removing terms";
  int it = 0;
  double ll = log_pseudo_likelihood(rows, theta);
  for (; it < options.max_iterations; ++it) {
    evaluate();
    if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
      model.converged = true;
      break;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    const double scale = std::max(1.0, info.diagonal().cwiseAbs().maxCoeff());
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-13 * scale)
      throw ConvergenceError("singular information matrix in MPLE" + hint);
    Eigen::VectorXd step = ldlt.solve(grad);

    // Backtracking keeps the pseudo-likelihood increasing.
    double t = 1.0;
    Eigen::VectorXd next = theta + step;
    double next_ll = log_pseudo_likelihood(rows, next);
    while (next_ll < ll - 1e-12 * std::abs(ll) && t > 1e-6) {
      t *= 0.5;
      next = theta + t * step;
      next_ll = log_pseudo_likelihood(rows, next);
    }
    const double moved = (next - theta).lpNorm<Eigen::Infinity>();
    theta = next;
    ll = next_ll;
    if (!theta.allFinite() || theta.lpNorm<Eigen::Infinity>() > 50.0)
      throw ConvergenceError("MPLE coefficients diverged" + hint);
    if (moved < 1e-14 * (1.0 + theta.lpNorm<Eigen::Infinity>())) {
      evaluate();
      model.converged = true;
      ++it;
      break;
    }
  }
  if (!model.converged) evaluate();
  // Under separation the gradient decays with theta running off while the
  // Newton step stays O(1); at a finite optimum the step vanishes with it.
  if (model.converged) {
    const Eigen::VectorXd pending = info.ldlt().solve(grad);
    if (!pending.allFinite() || pending.lpNorm<Eigen::Infinity>() > 1e-4)
      throw ConvergenceError("MPLE has no finite optimum" + hint);
  }

  const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  model.theta.assign(theta.data(), theta.data() + k);
  for (std::size_t t = 0; t < k; ++t) model.std_errors.push_back(std::sqrt(std::max(0.0, cov(t, t))));
  if (edge_offset != 0.0) model.theta[*spec.index_of(TermKind::Edges)] += edge_offset;
  model.iterations = it;
  model.diagnostics = {{"gradient_inf_norm", grad.lpNorm<Eigen::Infinity>()},
                       {"dyads_used", static_cast<double>(dyads_used)},
                       {"edges_offset", edge_offset},
                       {"log_pseudo_likelihood", ll}};
  return model;
}

void run_sampler(const ErgmModel& model, std::size_t n, const SimulationConfig& config, std::uint64_t seed,
                 const std::function<void(const DenseGraph&, std::span<const double>)>& visit,
                 const Graph* start) {
  if (n < 2) throw InputError("simulation needs at least two nodes");
  if (model.theta.size() != model.spec.size()) throw InputError("coefficient count does not match terms");
  if (config.thin == 0) throw InputError("thinning interval must be positive");
  if (start && start->num_nodes() != n) throw InputError("start graph has the wrong node count");

  DenseGraph state = start ? DenseGraph(*start) : DenseGraph(n);
  std::vector<double> stats = statistics(state, model.spec);
  std::vector<double> delta(model.spec.size());
  Rng rng(seed);

  const std::size_t total = config.burn_in + config.iterations;
  for (std::size_t step = 1; step <= total; ++step) {
    const auto i = static_cast<NodeId>(uniform_index(rng, n));
    auto j = static_cast<NodeId>(uniform_index(rng, n - 1));
    if (j >= i) ++j;
    change_into(state, i, j, model.spec, delta);
    const double eta = dot(model.theta, delta);
    const bool present = state.has_edge(i, j);
    const double log_ratio = present ? -eta : eta;
    if (log_ratio >= 0.0 || uniform01(rng) < std::exp(log_ratio)) {
      state.toggle(i, j);
      const double sign = present ? -1.0 : 1.0;
      for (std::size_t t = 0; t < stats.size(); ++t) stats[t] += sign * delta[t];
    }
    if (step > config.burn_in && (step - config.burn_in) % config.thin == 0) visit(state, stats);
  }
}

std::vector<Graph> simulate_mh(const ErgmModel& model, std::size_t n, const SimulationConfig& config,
                               std::uint64_t seed) {
  std::vector<Graph> samples;
  samples.reserve(config.iterations / std::max<std::size_t>(config.thin, 1));
  run_sampler(model, n, config, seed, [&](const DenseGraph& g, std::span<const double>) {
    samples.push_back(g.to_graph());
  });
  return samples;
}

namespace {

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::VectorXd mc_se;     // batch-means standard error of the mean
  Eigen::MatrixXd mc_cov;    // batch-means covariance of the mean
};

Moments moments_of(const Eigen::MatrixXd& samples) {
  const Eigen::Index s = samples.rows();
  Moments mo;
  mo.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - mo.mean.transpose();
  mo.cov = centered.transpose() * centered / static_cast<double>(std::max<Eigen::Index>(s - 1, 1));

  const Eigen::Index batches = std::min<Eigen::Index>(20, s);
  const Eigen::Index per = s / batches;
  Eigen::MatrixXd bm(batches, samples.cols());
  for (Eigen::Index b = 0; b < batches; ++b) bm.row(b) = samples.middleRows(b * per, per).colwise().mean();
  const Eigen::MatrixXd bc = bm.rowwise() - bm.colwise().mean();
  mo.mc_cov = bc.transpose() * bc / static_cast<double>(std::max<Eigen::Index>(batches - 1, 1)) /
              static_cast<double>(batches);
  mo.mc_se = mo.mc_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return mo;
}

// Geyer-Thompson: maximizes the importance-sampled log-likelihood ratio
// relative to the sampling point. Steps are halved while the effective
// sample size of the weights drops below a quarter of the sample.
Eigen::VectorXd importance_newton(const Eigen::MatrixXd& samples, const Eigen::VectorXd& observed,
                                  const Eigen::VectorXd& theta0, double damping, int max_iter) {
  const Eigen::Index s = samples.rows();
  const Eigen::MatrixXd d = samples.rowwise() - observed.transpose();
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(theta0.size());

  auto weights = [&](const Eigen::VectorXd& dl, double& ess) {
    Eigen::VectorXd logw = d * dl;
    const double mx = logw.maxCoeff();
    Eigen::VectorXd w = (logw.array() - mx).exp();
    w /= w.sum();
    ess = 1.0 / w.squaredNorm();
    return w;
  };

  for (int it = 0; it < max_iter; ++it) {
    double ess = 0.0;
    const Eigen::VectorXd w = weights(delta, ess);
    const Eigen::VectorXd mean = d.transpose() * w;  // E_w[g] - g_obs
    const Eigen::MatrixXd centered = d.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * w.asDiagonal() * centered;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    const double scale = std::max(1e-300, cov.diagonal().cwiseAbs().maxCoeff());
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 1e-10 * scale) break;
    Eigen::VectorXd step = -damping * ldlt.solve(mean);
    double trial_ess = 0.0;
    double t = 1.0;
    weights(delta + step, trial_ess);
    while (trial_ess < 0.25 * static_cast<double>(s) && t > 1e-4) {
      t *= 0.5;
      weights(delta + t * step, trial_ess);
    }
    delta += t * step;
    if ((t * step).lpNorm<Eigen::Infinity>() < 1e-10 * (1.0 + delta.lpNorm<Eigen::Infinity>())) break;
    if (t < 1.0) break;
  }
  return theta0 + delta;
}

}  // namespace

ErgmModel fit_mcmcmle(const Graph& g, const StatSpec& spec, const McmcMleConfig& config, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  if (n > config.max_nodes)
    throw InputError("MCMC-MLE is limited to " + std::to_string(config.max_nodes) + " nodes; got " +
                     std::to_string(n) + " (use MPLE)");
  if (n < 2) throw InputError("MCMC-MLE needs at least two nodes");
  const auto k = static_cast<Eigen::Index>(spec.size());
  const std::size_t pairs = n * (n - 1) / 2;

  std::vector<double> start = config.initial_theta;
  bool mple_start = false;
  if (start.empty()) {
    try {
      start = fit_mple(g, spec, seed, {.plan = {DyadPlan::Kind::AllDyads}}).theta;
      mple_start = true;
    } catch (const ConvergenceError&) {
      // Separated pseudo-likelihood: start from the Bernoulli fit instead.
      start.assign(spec.size(), 0.0);
      const double m = static_cast<double>(g.num_edges());
      const double p = std::clamp(m / static_cast<double>(pairs), 0.5 / pairs, 1.0 - 0.5 / pairs);
      if (const auto e = spec.index_of(TermKind::Edges)) start[*e] = std::log(p / (1.0 - p));
    }
  } else if (start.size() != spec.size()) {
    throw InputError("initial theta has the wrong length");
  }
  Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(start.data(), k);
  const std::vector<double> obs_vec = statistics(g, spec);
  const Eigen::VectorXd observed = Eigen::Map<const Eigen::VectorXd>(obs_vec.data(), k);

  SimulationConfig sim;
  sim.burn_in = config.burn_in ? config.burn_in : 20 * pairs;
  // Odd by default: near θ = 0 almost every toggle is accepted, so an even
  // interval would only ever visit graphs with the starting edge parity.
  sim.thin = config.thin ? config.thin : (pairs | 1);

  auto draw = [&](std::size_t count, std::uint64_t stream) {
    ErgmModel current;
    current.spec = spec;
    current.theta.assign(theta.data(), theta.data() + k);
    sim.iterations = count * sim.thin;
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(count), k);
    Eigen::Index row = 0;
    run_sampler(current, n, sim, derive_seed(seed, stream),
                [&](const DenseGraph&, std::span<const double> stats) {
                  for (Eigen::Index t = 0; t < k; ++t) samples(row, t) = stats[static_cast<std::size_t>(t)];
                  ++row;
                },
                &g);
    return samples;
  };

  auto gap_of = [&](const Moments& mo) {
    const Eigen::VectorXd gap = observed - mo.mean;
    return std::vector<double>(gap.data(), gap.data() + k);
  };

  ErgmModel model;
  model.spec = spec;
  model.estimator = "mcmcmle";
  model.seed = seed;
  model.diagnostics.emplace_back("mple_start", mple_start ? 1.0 : 0.0);

  std::vector<double> last_gap;
  for (int round = 0; round < config.max_rounds; ++round) {
    const Eigen::MatrixXd samples = draw(config.samples, static_cast<std::uint64_t>(round) + 1);
    const Moments mo = moments_of(samples);
    last_gap = gap_of(mo);
    if (!theta.allFinite() || theta.lpNorm<Eigen::Infinity>() > 1e3)
      throw ConvergenceError("MCMC-MLE coefficients diverged", last_gap);

    bool within = true;
    for (Eigen::Index t = 0; t < k; ++t)
      within = within && std::abs(observed(t) - mo.mean(t)) <= config.gap_z * mo.mc_se(t) + 1e-12;
    if (within) {
      const Eigen::MatrixXd final_samples = draw(config.final_samples, 1000);
      const Eigen::VectorXd refined = importance_newton(final_samples, observed, theta, 1.0, 50);
      const Moments fm = moments_of(final_samples);

      Eigen::LDLT<Eigen::MatrixXd> info(fm.cov);
      const double fscale = std::max(1e-300, fm.cov.diagonal().cwiseAbs().maxCoeff());
      if (info.info() != Eigen::Success || fm.cov.diagonal().minCoeff() <= 1e-12 ||
          info.vectorD().minCoeff() <= 1e-10 * fscale || !refined.allFinite())
        throw ConvergenceError("MCMC-MLE has no finite optimum: simulated statistics are degenerate at the fit, "
                               "the observed graph is likely on the boundary of the model",
                               last_gap);
      const Eigen::MatrixXd inv = info.solve(Eigen::MatrixXd::Identity(k, k));
      const Eigen::MatrixXd mc = inv * fm.mc_cov * inv;

      theta = refined;
      model.theta.assign(theta.data(), theta.data() + k);
      for (Eigen::Index t = 0; t < k; ++t) {
        model.std_errors.push_back(std::sqrt(std::max(0.0, inv(t, t))));
        model.diagnostics.emplace_back("mc_se_" + spec[static_cast<std::size_t>(t)].name(),
                                       std::sqrt(std::max(0.0, mc(t, t))));
      }
      for (Eigen::Index t = 0; t < k; ++t)
        model.diagnostics.emplace_back("moment_gap_" + spec[static_cast<std::size_t>(t)].name(),
                                       last_gap[static_cast<std::size_t>(t)]);
      model.iterations = round + 1;
      model.converged = true;
      return model;
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(mo.cov);
    const double scale = std::max(1e-300, mo.cov.diagonal().cwiseAbs().maxCoeff());
    if (ldlt.info() != Eigen::Success || mo.cov.diagonal().minCoeff() <= 1e-12 ||
        ldlt.vectorD().minCoeff() <= 1e-10 * scale)
      throw ConvergenceError("MCMC-MLE is degenerate: simulated statistics have (near) zero variance at round " +
                                 std::to_string(round + 1),
                             last_gap);
    theta = importance_newton(samples, observed, theta, config.step, 20);
  }

  std::ostringstream msg;
  msg << "MCMC-MLE did not converge after " << config.max_rounds << " rounds; moment gap (";
  for (std::size_t t = 0; t < last_gap.size(); ++t) msg << (t ? ", " : "") << last_gap[t];
  msg << ")";
  throw ConvergenceError(msg.str(), last_gap);
}

std::vector<double> predict_dyads(const ErgmModel& model, const Graph& g, std::span<const Dyad> dyads) {
  if (model.theta.size() != model.spec.size()) throw InputError("coefficient count does not match terms");
  std::vector<double> out;
  out.reserve(dyads.size());
  std::vector<double> delta(model.spec.size());
  for (const Dyad& d : dyads) {
    if (d.u == d.v || d.v >= g.num_nodes()) throw InputError("dyad out of range");
    change_into(g, d.u, d.v, model.spec, delta);
    out.push_back(sigmoid(dot(model.theta, delta)));
  }
  return out;
}

}  // namespace linkpred::ergm
