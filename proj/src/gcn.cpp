#include "linkpred/gcn.hpp"

#include <cmath>

#include "linkpred/error.hpp"

namespace linkpred::gcn {

NormalizedAdjacency normalize_adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes();
  NormalizedAdjacency adj;
  adj.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::VectorXi per_row(static_cast<Eigen::Index>(n));
  for (NodeId v = 0; v < n; ++v) per_row(v) = static_cast<int>(g.degree(v) + 1);
  adj.matrix.reserve(per_row);
  // Entries come from the integer product (d_i + 1)(d_j + 1), so storage is exactly symmetric.
  for (NodeId i = 0; i < n; ++i) {
    bool diagonal_done = false;
    for (NodeId j : g.neighbors(i)) {
      if (!diagonal_done && j > i) {
        adj.matrix.insert(i, i) = 1.0 / static_cast<double>(g.degree(i) + 1);
        diagonal_done = true;
      }
      const double prod = static_cast<double>((g.degree(i) + 1) * (g.degree(j) + 1));
      adj.matrix.insert(i, j) = 1.0 / std::sqrt(prod);
    }
    if (!diagonal_done) adj.matrix.insert(i, i) = 1.0 / static_cast<double>(g.degree(i) + 1);
  }
  adj.matrix.makeCompressed();
  return adj;
}

GcnParams init_params(std::size_t n, Eigen::Index feature_dim, Eigen::Index hidden, Rng& rng) {
  const auto rows = static_cast<Eigen::Index>(n);
  GcnParams p;
  // Free features stand in for one-hot inputs times a learned projection,
  // so they take that projection's Glorot scale.
  p.features = nn::glorot_uniform(rows, feature_dim, rng, rows, feature_dim);
  p.w0 = nn::glorot_uniform(feature_dim, hidden, rng, feature_dim, hidden);
  p.w1 = nn::glorot_uniform(hidden, hidden, rng, hidden, hidden);
  return p;
}

ForwardCache gcn_forward_cached(const GcnParams& params, const NormalizedAdjacency& adj) {
  if (params.features.rows() != adj.size() || params.features.cols() != params.w0.rows() ||
      params.w0.cols() != params.w1.rows())
    throw InputError("GCN shape mismatch");
  ForwardCache c;
  c.ax = adj.matrix * params.features;
  c.pre = c.ax * params.w0;
  c.h = nn::relu(c.pre);
  c.ah = adj.matrix * c.h;
  c.z = c.ah * params.w1;
  return c;
}

Matrix gcn_forward(const GcnParams& params, const NormalizedAdjacency& adj) {
  return gcn_forward_cached(params, adj).z;
}

nn::Vector decode_edges(const Matrix& z, std::span<const Dyad> dyads) {
  nn::Vector out(static_cast<Eigen::Index>(dyads.size()));
  for (std::size_t k = 0; k < dyads.size(); ++k) {
    const Dyad& d = dyads[k];
    if (d.u >= z.rows() || d.v >= z.rows()) throw InputError("dyad out of range");
    out(static_cast<Eigen::Index>(k)) = z.row(d.u).dot(z.row(d.v));
  }
  return out;
}

GcnGrads gcn_backward(const GcnParams& params, const NormalizedAdjacency& adj, const ForwardCache& cache,
                      std::span<const Dyad> dyads, const nn::Vector& d_logits) {
  Matrix dz = Matrix::Zero(cache.z.rows(), cache.z.cols());
  for (std::size_t k = 0; k < dyads.size(); ++k) {
    const double g = d_logits(static_cast<Eigen::Index>(k));
    const Dyad& d = dyads[k];
    dz.row(d.u) += g * cache.z.row(d.v);
    dz.row(d.v) += g * cache.z.row(d.u);
  }
  GcnGrads grads;
  grads.w1 = cache.ah.transpose() * dz;
  // A is symmetric, so A^T dY = A dY.
  const Matrix dh = adj.matrix * (dz * params.w1.transpose());
  const Matrix dpre = (cache.pre.array() > 0.0).select(dh, 0.0);
  grads.w0 = cache.ax.transpose() * dpre;
  grads.features = adj.matrix * (dpre * params.w0.transpose());
  return grads;
}

double gcn_loss(const GcnParams& params, const NormalizedAdjacency& adj, std::span<const Dyad> pos,
                std::span<const Dyad> neg, GcnGrads* grads) {
  const ForwardCache cache = gcn_forward_cached(params, adj);
  const nn::EdgeLoss loss = nn::bce_edge_loss(decode_edges(cache.z, pos), decode_edges(cache.z, neg));
  if (grads) {
    std::vector<Dyad> all(pos.begin(), pos.end());
    all.insert(all.end(), neg.begin(), neg.end());
    nn::Vector d(static_cast<Eigen::Index>(all.size()));
    d << loss.d_pos, loss.d_neg;
    *grads = gcn_backward(params, adj, cache, all, d);
  }
  return loss.loss;
}

GcnResult train_gcn(const Graph& train, const GcnConfig& config) {
  if (train.num_edges() == 0) throw InputError("GCN training needs a train graph with edges");
  if (config.epochs < 1 || config.hidden < 1 || config.feature_dim < 1 || !(config.lr > 0.0))
    throw InputError("invalid GCN configuration");

  const NormalizedAdjacency adj = normalize_adjacency(train);
  Rng rng(derive_seed(config.seed, 0));
  GcnResult result{init_params(train.num_nodes(), config.feature_dim, config.hidden, rng), {}, {},
                   nn::Adam(config.lr)};
  const std::vector<Dyad> pos = train.edges();
  GcnParams& p = result.params;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const std::vector<Dyad> neg =
        sample_negatives(train, pos.size(), derive_seed(config.seed, static_cast<std::uint64_t>(epoch)));
    GcnGrads g;
    const double loss = gcn_loss(p, adj, pos, neg, &g);
    if (!std::isfinite(loss)) throw DivergenceError(epoch);
    result.loss_history.push_back(loss);
    Matrix* params[] = {&p.features, &p.w0, &p.w1};
    const Matrix* grads[] = {&g.features, &g.w0, &g.w1};
    result.optimizer.step(params, grads);
  }
  result.embeddings = gcn_forward(p, adj);
  if (!result.embeddings.allFinite()) throw DivergenceError(config.epochs);
  return result;
}

GcnResult train_gcn(const EdgeSplit& split, const GcnConfig& config) { return train_gcn(split.train, config); }

}  // namespace linkpred::gcn
