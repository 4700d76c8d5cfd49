#include "linkpred/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linkpred/error.hpp"

namespace linkpred::nn {

Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng, Eigen::Index fan_in, Eigen::Index fan_out) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix w(rows, cols);
  // Row-major fill order, so the result does not depend on storage order.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = uniform_real(rng, -limit, limit);
  return w;
}

DenseLayer make_dense(Eigen::Index in, Eigen::Index out, Activation act, Rng& rng) {
  return {glorot_uniform(out, in, rng, in, out), Vector::Zero(out), act};
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

Matrix forward(const DenseLayer& layer, const Matrix& x) {
  if (x.cols() != layer.in_dim() || layer.bias.size() != layer.out_dim())
    throw InputError("dense layer shape mismatch");
  Matrix y = x * layer.weight.transpose();
  y.rowwise() += layer.bias.transpose();
  return layer.activation == Activation::ReLU ? relu(y) : y;
}

LayerGrads backward(const DenseLayer& layer, const Matrix& x, const Matrix& dy) {
  if (x.cols() != layer.in_dim() || dy.cols() != layer.out_dim() || dy.rows() != x.rows())
    throw InputError("dense layer shape mismatch");
  Matrix dz = dy;
  if (layer.activation == Activation::ReLU) {
    Matrix z = x * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    dz = (z.array() > 0.0).select(dy, 0.0);
  }
  LayerGrads g;
  g.weight = dz.transpose() * x;
  g.bias = dz.colwise().sum().transpose();
  g.input = dz * layer.weight;
  return g;
}

EdgeLoss bce_edge_loss(const Vector& pos, const Vector& neg) {
  if (pos.size() == 0 || neg.size() == 0) throw InputError("edge loss needs positive and negative scores");
  EdgeLoss out;
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  out.d_pos.resize(pos.size());
  out.d_neg.resize(neg.size());
  double lp = 0.0, ln = 0.0;
  // -log sigmoid(s) = softplus(-s); d/ds = sigmoid(s) - 1.
  for (Eigen::Index i = 0; i < pos.size(); ++i) {
    lp += softplus(-pos(i));
    out.d_pos(i) = (sigmoid(pos(i)) - 1.0) / np;
  }
  for (Eigen::Index i = 0; i < neg.size(); ++i) {
    ln += softplus(neg(i));
    out.d_neg(i) = sigmoid(neg(i)) / nn;
  }
  out.loss = lp / np + ln / nn;
  return out;
}

void Adam::step(std::span<Matrix* const> params, std::span<const Matrix* const> grads) {
  if (params.size() != grads.size()) throw InputError("Adam: parameter and gradient counts differ");
  if (m_.empty()) {
    for (const Matrix* p : params) {
      m_.push_back(Matrix::Zero(p->rows(), p->cols()));
      v_.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  if (m_.size() != params.size()) throw InputError("Adam: parameter list changed between steps");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    const Matrix& g = *grads[i];
    if (g.rows() != p.rows() || g.cols() != p.cols() || m_[i].rows() != p.rows() || m_[i].cols() != p.cols())
      throw InputError("Adam: gradient shape does not match parameter");
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseProduct(g);
    p.array() -= lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
  }
}

void Adam::restore(std::int64_t steps, std::vector<Matrix> m, std::vector<Matrix> v) {
  if (m.size() != v.size()) throw InputError("Adam: moment lists differ in length");
  t_ = steps;
  m_ = std::move(m);
  v_ = std::move(v);
}

double grad_check(const LossFn& fn, const Vector& params, const GradCheckOptions& options) {
  const auto size = static_cast<std::size_t>(params.size());
  Vector analytic(params.size());
  fn(params, &analytic);

  std::vector<std::size_t> coords(size);
  std::iota(coords.begin(), coords.end(), 0);
  if (options.coordinates > 0 && options.coordinates < size) {
    Rng rng(options.seed);
    for (std::size_t i = 0; i < options.coordinates; ++i)
      std::swap(coords[i], coords[i + uniform_index(rng, size - i)]);
    coords.resize(options.coordinates);
  }

  double worst = 0.0;
  Vector probe = params;
  for (std::size_t c : coords) {
    const auto i = static_cast<Eigen::Index>(c);
    const double h = 1e-5 * std::max(1.0, std::abs(params(i)));
    probe(i) = params(i) + h;
    const double up = fn(probe, nullptr);
    probe(i) = params(i) - h;
    const double down = fn(probe, nullptr);
    probe(i) = params(i);
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic(i)), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic(i) - numeric) / denom);
  }
  return worst;
}

}  // namespace linkpred::nn
