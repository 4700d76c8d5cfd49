#include <gtest/gtest.h>

#include <cmath>

#include "linkpred/error.hpp"
#include "linkpred/eval.hpp"
#include "linkpred/rng.hpp"

using namespace linkpred;
using namespace linkpred::eval;

namespace {

// Fraction of (pos, neg) pairs ordered correctly, ties counting one half.
double pair_count_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0;
  for (double p : pos)
    for (double n : neg) wins += p > n ? 1.0 : p == n ? 0.5 : 0.0;
  return wins / static_cast<double>(pos.size() * neg.size());
}

std::vector<double> draw(Rng& rng, std::size_t n, bool ties) {
  std::vector<double> s(n);
  for (double& x : s) x = ties ? static_cast<double>(uniform_index(rng, 6)) / 5.0 : uniform01(rng);
  return s;
}

}  // namespace

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(std::vector{0.9, 0.8}, std::vector{0.1, 0.2}).auc, 1.0);
  EXPECT_EQ(roc_auc(std::vector{0.8}, std::vector{0.8}).auc, 0.5);
  EXPECT_EQ(roc_auc(std::vector{0.9, 0.4}, std::vector{0.6, 0.1}).auc, 0.75);
  EXPECT_EQ(roc_auc(std::vector{0.1}, std::vector{0.9}).auc, 0.0);
}

TEST(RocAuc, ConstantScoresGiveOneHalf) {
  EXPECT_EQ(roc_auc(std::vector<double>(7, 0.3), std::vector<double>(11, 0.3)).auc, 0.5);
}

TEST(RocAuc, EmptyClassThrows) {
  EXPECT_THROW(roc_auc({}, std::vector{0.1}), InputError);
  EXPECT_THROW(roc_auc(std::vector{0.1}, {}), InputError);
}

TEST(RocAuc, MatchesPairCountingAndTrapezoidOnRandomSets) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const bool ties = trial % 2 == 0;
    const auto pos = draw(rng, 1 + uniform_index(rng, 40), ties);
    const auto neg = draw(rng, 1 + uniform_index(rng, 40), ties);
    const RocResult r = roc_auc(pos, neg);
    const double oracle = pair_count_auc(pos, neg);
    ASSERT_NEAR(r.auc, oracle, 1e-12) << "trial " << trial;
    ASSERT_NEAR(trapezoid_auc(r.points), oracle, 1e-12) << "trial " << trial;
  }
}

TEST(RocAuc, InvariantUnderIncreasingTransforms) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pos = draw(rng, 20, trial % 2), neg = draw(rng, 25, trial % 2);
    std::vector<double> tp, tn;
    for (double x : pos) tp.push_back(std::exp(3.0 * x) - 7.0);
    for (double x : neg) tn.push_back(std::exp(3.0 * x) - 7.0);
    EXPECT_EQ(roc_auc(pos, neg).auc, roc_auc(tp, tn).auc);
    std::vector<double> lp, ln;
    for (double x : pos) lp.push_back(1.0 / (1.0 + std::exp(-x)));
    for (double x : neg) ln.push_back(1.0 / (1.0 + std::exp(-x)));
    EXPECT_EQ(roc_auc(pos, neg).auc, roc_auc(lp, ln).auc);
  }
}

TEST(RocAuc, CurveEndpointsAndMonotonicity) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pos = draw(rng, 1 + uniform_index(rng, 30), trial % 3 == 0);
    const auto neg = draw(rng, 1 + uniform_index(rng, 30), trial % 3 == 0);
    const auto pts = roc_auc(pos, neg).points;
    ASSERT_GE(pts.size(), 2u);
    EXPECT_EQ(pts.front().fpr, 0.0);
    EXPECT_EQ(pts.front().tpr, 0.0);
    EXPECT_EQ(pts.back().fpr, 1.0);
    EXPECT_EQ(pts.back().tpr, 1.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      EXPECT_GE(pts[i].fpr, pts[i - 1].fpr);
      EXPECT_GE(pts[i].tpr, pts[i - 1].tpr);
    }
  }
}

TEST(Confusion, Examples) {
  const Confusion c = confusion(std::vector{0.9}, std::vector{0.1});
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.tn, 1u);
  EXPECT_EQ(c.fp, 0u);
  EXPECT_EQ(c.fn, 0u);
  EXPECT_EQ(c.threshold, 0.5);

  const Confusion half = confusion(std::vector<double>(3, 0.5), std::vector<double>(4, 0.5));
  EXPECT_EQ(half.tp, 3u);
  EXPECT_EQ(half.fp, 4u);
  EXPECT_EQ(half.tn + half.fn, 0u);
}

TEST(Confusion, CountsAndRowNormalization) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pos = draw(rng, 1 + uniform_index(rng, 20), false);
    const auto neg = draw(rng, 1 + uniform_index(rng, 20), false);
    const Confusion c = confusion(pos, neg, uniform01(rng));
    EXPECT_EQ(c.tp + c.fn, pos.size());
    EXPECT_EQ(c.tn + c.fp, neg.size());
    const auto m = c.row_normalized();
    EXPECT_NEAR(m[0][0] + m[0][1], 1.0, 1e-15);
    EXPECT_NEAR(m[1][0] + m[1][1], 1.0, 1e-15);
  }
  EXPECT_THROW(confusion({}, std::vector{0.2}), InputError);
}

TEST(RocSvg, LabelsAndTitle) {
  EvalReport r;
  r.model = "gcn";
  r.dataset = "toy";
  const RocResult roc = roc_auc(std::vector{0.9, 0.4}, std::vector{0.6, 0.1});
  r.auc = roc.auc;
  r.roc = roc.points;
  const std::string svg = roc_svg(r);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("AUC = 0.7500"), std::string::npos);
  EXPECT_NE(svg.find(">FPR<"), std::string::npos);
  EXPECT_NE(svg.find(">TPR<"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}
