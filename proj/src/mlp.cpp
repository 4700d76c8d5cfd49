#include "linkpred/mlp.hpp"

#include <cmath>

#include "linkpred/error.hpp"

namespace linkpred::mlp {

std::string to_string(EdgeFeatureMode mode) {
  switch (mode) {
    case EdgeFeatureMode::Hadamard:
      return "hadamard";
    case EdgeFeatureMode::Concat:
      return "concat";
    case EdgeFeatureMode::AbsDiff:
      return "absdiff";
    case EdgeFeatureMode::Average:
      return "average";
  }
  return "?";
}

EdgeFeatureMode parse_feature_mode(const std::string& name) {
  for (auto mode : {EdgeFeatureMode::Hadamard, EdgeFeatureMode::Concat, EdgeFeatureMode::AbsDiff,
                    EdgeFeatureMode::Average})
    if (to_string(mode) == name) return mode;
  throw InputError("unknown edge feature mode '" + name + "'");
}

Matrix edge_features(const sgns::RowMatrix& vectors, std::span<const Dyad> dyads, EdgeFeatureMode mode) {
  const Eigen::Index d = vectors.cols();
  Matrix out(static_cast<Eigen::Index>(dyads.size()), mode == EdgeFeatureMode::Concat ? 2 * d : d);
  for (std::size_t k = 0; k < dyads.size(); ++k) {
    const Dyad& dy = dyads[k];
    if (dy.u >= vectors.rows() || dy.v >= vectors.rows()) throw InputError("dyad out of range");
    const auto a = vectors.row(dy.u);
    const auto b = vectors.row(dy.v);
    auto row = out.row(static_cast<Eigen::Index>(k));
    switch (mode) {
      case EdgeFeatureMode::Hadamard:
        row = a.cwiseProduct(b);
        break;
      case EdgeFeatureMode::Concat:
        row << a, b;
        break;
      case EdgeFeatureMode::AbsDiff:
        row = (a - b).cwiseAbs();
        break;
      case EdgeFeatureMode::Average:
        row = 0.5 * (a + b);
        break;
    }
  }
  return out;
}

MlpParams init_mlp(Eigen::Index in, Eigen::Index hidden, Rng& rng) {
  MlpParams p;
  p.hidden = nn::make_dense(in, hidden, nn::Activation::ReLU, rng);
  p.output = nn::make_dense(hidden, 1, nn::Activation::Identity, rng);
  return p;
}

Vector mlp_logits(const MlpParams& params, const Matrix& features) {
  return nn::forward(params.output, nn::forward(params.hidden, features)).col(0);
}

double mlp_loss(const MlpParams& params, const Matrix& features, std::span<const std::uint8_t> labels,
                MlpParams* grads) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) throw InputError("label count mismatch");
  const Matrix hidden = nn::forward(params.hidden, features);
  const Vector logits = nn::forward(params.output, hidden).col(0);

  std::vector<Eigen::Index> pos_rows, neg_rows;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] ? pos_rows : neg_rows).push_back(static_cast<Eigen::Index>(i));
  const nn::EdgeLoss loss = nn::bce_edge_loss(logits(pos_rows), logits(neg_rows));

  if (grads) {
    Matrix d_logits(logits.size(), 1);
    d_logits(pos_rows, 0) = loss.d_pos;
    d_logits(neg_rows, 0) = loss.d_neg;
    const nn::LayerGrads g2 = nn::backward(params.output, hidden, d_logits);
    const nn::LayerGrads g1 = nn::backward(params.hidden, features, g2.input);
    grads->hidden = {g1.weight, g1.bias, nn::Activation::ReLU};
    grads->output = {g2.weight, g2.bias, nn::Activation::Identity};
  }
  return loss.loss;
}

MlpResult train_mlp(const Matrix& features, std::span<const std::uint8_t> labels, const MlpConfig& config) {
  if (features.rows() == 0) throw InputError("MLP training needs data");
  if (config.epochs < 1 || config.hidden < 1 || !(config.lr > 0.0)) throw InputError("invalid MLP configuration");
  Rng rng(derive_seed(config.seed, 0));
  MlpResult result{init_mlp(features.cols(), config.hidden, rng), {}, nn::Adam(config.lr)};
  MlpParams& p = result.params;

  // Biases are optimized as column matrices alongside the weights.
  Matrix b1 = p.hidden.bias, b2 = p.output.bias;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    p.hidden.bias = b1.col(0);
    p.output.bias = b2.col(0);
    MlpParams g;
    const double loss = mlp_loss(p, features, labels, &g);
    if (!std::isfinite(loss)) throw DivergenceError(epoch);
    result.loss_history.push_back(loss);
    Matrix gb1 = g.hidden.bias, gb2 = g.output.bias;
    Matrix* params[] = {&p.hidden.weight, &b1, &p.output.weight, &b2};
    const Matrix* grads[] = {&g.hidden.weight, &gb1, &g.output.weight, &gb2};
    result.optimizer.step(params, grads);
  }
  p.hidden.bias = b1.col(0);
  p.output.bias = b2.col(0);
  return result;
}

Vector predict_mlp(const MlpParams& params, const Matrix& features) {
  return mlp_logits(params, features).unaryExpr([](double x) { return nn::sigmoid(x); });
}

}  // namespace linkpred::mlp
