#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <span>
#include <vector>

#include "linkpred/graph.hpp"
#include "linkpred/nn.hpp"
#include "linkpred/sampling.hpp"

namespace linkpred::gcn {

using nn::Matrix;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I.
struct NormalizedAdjacency {
  SparseMatrix matrix;
  Eigen::Index size() const { return matrix.rows(); }
};

NormalizedAdjacency normalize_adjacency(const Graph& g);

/// Free node features (n x d0) followed by two graph convolutions.
struct GcnParams {
  Matrix features;  // n x d0
  Matrix w0;        // d0 x hidden
  Matrix w1;        // hidden x hidden
};

GcnParams init_params(std::size_t n, Eigen::Index feature_dim, Eigen::Index hidden, Rng& rng);

/// Intermediate activations kept for the backward pass.
struct ForwardCache {
  Matrix ax;   // A X
  Matrix pre;  // A X W0
  Matrix h;    // ReLU(pre)
  Matrix ah;   // A H
  Matrix z;    // A H W1
};

/// Z = A ReLU(A X W0) W1.
Matrix gcn_forward(const GcnParams& params, const NormalizedAdjacency& adj);
ForwardCache gcn_forward_cached(const GcnParams& params, const NormalizedAdjacency& adj);

/// Dot-product decoder: logit(i, j) = z_i . z_j.
nn::Vector decode_edges(const Matrix& z, std::span<const Dyad> dyads);

struct GcnGrads {
  Matrix features;
  Matrix w0;
  Matrix w1;
};

/// Backpropagates dL/dlogit for the given dyads through decoder and both layers.
GcnGrads gcn_backward(const GcnParams& params, const NormalizedAdjacency& adj, const ForwardCache& cache,
                      std::span<const Dyad> dyads, const nn::Vector& d_logits);

/// Edge loss over positive and negative dyads together with its gradient.
double gcn_loss(const GcnParams& params, const NormalizedAdjacency& adj, std::span<const Dyad> pos,
                std::span<const Dyad> neg, GcnGrads* grads);

struct GcnConfig {
  Eigen::Index feature_dim = 64;
  Eigen::Index hidden = 64;
  double lr = 0.01;
  int epochs = 200;
  std::uint64_t seed = 1;
};

struct GcnResult {
  GcnParams params;
  std::vector<double> loss_history;
  Matrix embeddings;  // final Z
  nn::Adam optimizer;
};

/// Full-batch training on split.train: per epoch, fresh train negatives
/// (equal in number to train edges), edge loss, backward, one Adam step.
/// Throws DivergenceError on a non-finite loss.
GcnResult train_gcn(const EdgeSplit& split, const GcnConfig& config);
GcnResult train_gcn(const Graph& train, const GcnConfig& config);

}  // namespace linkpred::gcn
