#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linkpred/nn.hpp"
#include "linkpred/sgns.hpp"

namespace linkpred::mlp {

using nn::Matrix;
using nn::Vector;

enum class EdgeFeatureMode { Hadamard, Concat, AbsDiff, Average };

std::string to_string(EdgeFeatureMode mode);
EdgeFeatureMode parse_feature_mode(const std::string& name);

/// One row per dyad built from the two node vectors (rows of `vectors`).
Matrix edge_features(const sgns::RowMatrix& vectors, std::span<const Dyad> dyads, EdgeFeatureMode mode);

/// ReLU hidden layer followed by a single linear logit.
struct MlpParams {
  nn::DenseLayer hidden;
  nn::DenseLayer output;
};

MlpParams init_mlp(Eigen::Index in, Eigen::Index hidden, Rng& rng);

/// Logit per row.
Vector mlp_logits(const MlpParams& params, const Matrix& features);

/// Edge loss with positive rows labelled 1; gradients written when requested.
double mlp_loss(const MlpParams& params, const Matrix& features, std::span<const std::uint8_t> labels,
                MlpParams* grads);

struct MlpConfig {
  Eigen::Index hidden = 64;
  double lr = 0.01;
  int epochs = 200;
  std::uint64_t seed = 1;
};

struct MlpResult {
  MlpParams params;
  std::vector<double> loss_history;
  nn::Adam optimizer;
};

/// Full-batch Adam training. Labels are 0/1 and both classes must be present.
MlpResult train_mlp(const Matrix& features, std::span<const std::uint8_t> labels, const MlpConfig& config);

/// sigmoid(logit) per row.
Vector predict_mlp(const MlpParams& params, const Matrix& features);

}  // namespace linkpred::mlp
