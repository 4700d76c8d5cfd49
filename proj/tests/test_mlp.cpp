#include <gtest/gtest.h>

#include <cmath>

#include "linkpred/error.hpp"
#include "linkpred/mlp.hpp"

using namespace linkpred;
using namespace linkpred::mlp;

namespace {

nn::Vector pack(const MlpParams& p) {
  nn::Vector v(p.hidden.weight.size() + p.hidden.bias.size() + p.output.weight.size() + p.output.bias.size());
  v << p.hidden.weight.reshaped(), p.hidden.bias, p.output.weight.reshaped(), p.output.bias;
  return v;
}

MlpParams unpack(const nn::Vector& v, const MlpParams& shape) {
  MlpParams p = shape;
  Eigen::Index at = 0;
  auto take = [&](auto&& block) {
    block = v.segment(at, block.size());
    at += block.size();
  };
  take(p.hidden.weight.reshaped());
  take(p.hidden.bias);
  take(p.output.weight.reshaped());
  take(p.output.bias);
  return p;
}

// Two Gaussian-free clusters split by the sign of the first coordinate.
void separable(Rng& rng, Eigen::Index rows, Eigen::Index cols, Matrix& x, std::vector<std::uint8_t>& y) {
  x.resize(rows, cols);
  y.resize(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = uniform_real(rng, -1.0, 1.0);
    const bool label = i % 2 == 0;
    x(i, 0) = label ? uniform_real(rng, 0.2, 1.0) : uniform_real(rng, -1.0, -0.2);
    y[static_cast<std::size_t>(i)] = label;
  }
}

double mlp_gradient_error(std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index in = 2 + static_cast<Eigen::Index>(uniform_index(rng, 5));
  const Eigen::Index hidden = 2 + static_cast<Eigen::Index>(uniform_index(rng, 6));
  Matrix x;
  std::vector<std::uint8_t> y;
  separable(rng, 8, in, x, y);
  MlpParams shape = init_mlp(in, hidden, rng);
  for (Eigen::Index i = 0; i < shape.hidden.bias.size(); ++i) shape.hidden.bias(i) = uniform_real(rng, -0.3, 0.3);
  auto fn = [&](const nn::Vector& v, nn::Vector* grad) {
    MlpParams g;
    const double loss = mlp_loss(unpack(v, shape), x, y, grad ? &g : nullptr);
    if (grad) *grad = pack(g);
    return loss;
  };
  return nn::grad_check(fn, pack(shape));
}

}  // namespace

TEST(EdgeFeatures, Examples) {
  sgns::RowMatrix v(3, 2);
  v << 1, 2, 3, 4, -1, 5;
  const std::vector<Dyad> d{{0, 1}, {2, 2}};
  Matrix had = edge_features(v, d, EdgeFeatureMode::Hadamard);
  EXPECT_EQ(had(0, 0), 3.0);
  EXPECT_EQ(had(0, 1), 8.0);
  EXPECT_EQ(had(1, 0), 1.0);  // u elementwise squared
  EXPECT_EQ(had(1, 1), 25.0);
  const Matrix diff = edge_features(v, d, EdgeFeatureMode::AbsDiff);
  EXPECT_EQ(diff.row(0), (Eigen::RowVector2d(2, 2)));
  EXPECT_TRUE(diff.row(1).isZero());
  const Matrix avg = edge_features(v, d, EdgeFeatureMode::Average);
  EXPECT_EQ(avg.row(0), (Eigen::RowVector2d(2, 3)));
  const Matrix cat = edge_features(v, d, EdgeFeatureMode::Concat);
  ASSERT_EQ(cat.cols(), 4);
  EXPECT_EQ(cat.row(0), (Eigen::RowVector4d(1, 2, 3, 4)));
}

TEST(EdgeFeatures, SymmetricModesAndCanonicalConcat) {
  sgns::RowMatrix v(2, 3);
  v << 0.5, -1, 2, 3, 0.25, -4;
  for (auto mode : {EdgeFeatureMode::Hadamard, EdgeFeatureMode::AbsDiff, EdgeFeatureMode::Average,
                    EdgeFeatureMode::Concat})
    EXPECT_EQ(edge_features(v, std::vector<Dyad>{{0, 1}}, mode), edge_features(v, std::vector<Dyad>{{1, 0}}, mode));
  EXPECT_THROW(edge_features(v, std::vector<Dyad>{{0, 2}}, EdgeFeatureMode::Hadamard), InputError);
}

TEST(EdgeFeatures, ModeNames) {
  for (auto mode : {EdgeFeatureMode::Hadamard, EdgeFeatureMode::AbsDiff, EdgeFeatureMode::Average,
                    EdgeFeatureMode::Concat})
    EXPECT_EQ(parse_feature_mode(to_string(mode)), mode);
  EXPECT_THROW(parse_feature_mode("sum"), InputError);
}

TEST(Mlp, ZeroWeightsGiveOneHalf) {
  Rng rng(1);
  MlpParams p = init_mlp(3, 4, rng);
  p.output.weight.setZero();
  Rng data(2);
  Matrix x(5, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = uniform_real(data, -5.0, 5.0);
  EXPECT_EQ(predict_mlp(p, x), nn::Vector::Constant(5, 0.5));
}

TEST(Mlp, PredictionsMonotoneInLogitAndRepeatable) {
  Rng rng(3);
  const MlpParams p = init_mlp(4, 8, rng);
  Matrix x(50, 4);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = uniform_real(rng, -3.0, 3.0);
  const nn::Vector logits = mlp_logits(p, x), prob = predict_mlp(p, x);
  for (Eigen::Index i = 0; i < 50; ++i) {
    EXPECT_GT(prob(i), 0.0);
    EXPECT_LT(prob(i), 1.0);
    for (Eigen::Index j = 0; j < 50; ++j)
      if (logits(i) < logits(j)) EXPECT_LE(prob(i), prob(j));
  }
  EXPECT_EQ(prob, predict_mlp(p, x));
}

TEST(Mlp, SeparableDataReachesFullAccuracy) {
  Rng rng(11);
  Matrix x;
  std::vector<std::uint8_t> y;
  separable(rng, 200, 6, x, y);
  const MlpResult r = train_mlp(x, y, {.seed = 4});
  ASSERT_EQ(r.loss_history.size(), 200u);
  const nn::Vector p = predict_mlp(r.params, x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) correct += (p(static_cast<Eigen::Index>(i)) >= 0.5) == (y[i] != 0);
  EXPECT_EQ(correct, y.size());
}

TEST(Mlp, LossDecreasesOverFiveSeeds) {
  double first = 0.0, last = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    Matrix x;
    std::vector<std::uint8_t> y;
    separable(rng, 60, 5, x, y);
    const MlpResult r = train_mlp(x, y, {.seed = seed});
    first += r.loss_history.front();
    last += r.loss_history.back();
  }
  EXPECT_LT(last, first);
}

TEST(Mlp, EndToEndGradient) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) worst = std::max(worst, mlp_gradient_error(seed));
  EXPECT_LT(worst, 1e-4);
}

TEST(Mlp, DeterministicGivenSeed) {
  Rng rng(5);
  Matrix x;
  std::vector<std::uint8_t> y;
  separable(rng, 40, 3, x, y);
  const MlpResult a = train_mlp(x, y, {.epochs = 50, .seed = 2}), b = train_mlp(x, y, {.epochs = 50, .seed = 2});
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_EQ(predict_mlp(a.params, x), predict_mlp(b.params, x));
}

TEST(Mlp, Errors) {
  const Matrix x = Matrix::Zero(2, 2);
  const std::vector<std::uint8_t> both{0, 1}, one{1, 1};
  EXPECT_THROW(train_mlp(Matrix(0, 2), {}, {}), InputError);
  EXPECT_THROW(train_mlp(x, both, {.epochs = 0}), InputError);
  EXPECT_THROW(train_mlp(x, one, {}), InputError);
  EXPECT_THROW(train_mlp(x, std::vector<std::uint8_t>{1}, {}), InputError);
}
