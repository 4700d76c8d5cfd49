#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "linkpred/rng.hpp"

namespace linkpred::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { Identity, ReLU };

/// y = act(W x + b), applied row-wise to a batch (one sample per row).
struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
  Activation activation = Activation::Identity;

  Eigen::Index in_dim() const { return weight.cols(); }
  Eigen::Index out_dim() const { return weight.rows(); }
};

struct LayerGrads {
  Matrix weight;
  Vector bias;
  Matrix input;
};

/// Glorot-uniform weights, zero bias.
DenseLayer make_dense(Eigen::Index in, Eigen::Index out, Activation act, Rng& rng);
Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng, Eigen::Index fan_in, Eigen::Index fan_out);

Matrix forward(const DenseLayer& layer, const Matrix& x);
/// Gradients of a scalar loss given dL/dy for the batch x. ReLU'(0) = 0.
LayerGrads backward(const DenseLayer& layer, const Matrix& x, const Matrix& dy);

Matrix relu(const Matrix& x);
double sigmoid(double x);
/// log(1 + exp(x)) without overflow.
double softplus(double x);

struct EdgeLoss {
  double loss = 0.0;
  Vector d_pos;
  Vector d_neg;
};

/// -mean log sigmoid(pos) - mean log sigmoid(-neg) on logits, with gradients.
EdgeLoss bce_edge_loss(const Vector& pos, const Vector& neg);

/// Bias-corrected Adam over a list of parameter blocks. Moments are created
/// on the first step to match the blocks' shapes.
class Adam {
 public:
  explicit Adam(double lr = 0.01, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(std::span<Matrix* const> params, std::span<const Matrix* const> grads);

  double learning_rate() const { return lr_; }
  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  double epsilon() const { return eps_; }
  std::int64_t steps() const { return t_; }
  const std::vector<Matrix>& first_moments() const { return m_; }
  const std::vector<Matrix>& second_moments() const { return v_; }
  void restore(std::int64_t steps, std::vector<Matrix> m, std::vector<Matrix> v);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<Matrix> m_, v_;
};

/// Loss and gradient of a flat parameter vector.
using LossFn = std::function<double(const Vector& params, Vector* grad)>;

struct GradCheckOptions {
  /// Coordinates to probe; all of them when 0 or >= size.
  std::size_t coordinates = 0;
  std::uint64_t seed = 7;
};

/// Max over probed coordinates of |analytic - numeric| / max(|analytic|, |numeric|, 1e-6),
/// with central differences of step 1e-5 * max(1, |theta_i|).
double grad_check(const LossFn& fn, const Vector& params, const GradCheckOptions& options = {});

}  // namespace linkpred::nn
