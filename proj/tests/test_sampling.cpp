#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "linkpred/error.hpp"
#include "linkpred/sampling.hpp"

using namespace linkpred;

TEST(SplitEdges, Arithmetic) {
  const Graph g = fixtures::cycle(10);
  const EdgeSplit s = split_edges(g, 0.2, 7);
  EXPECT_EQ(s.test_pos.size(), 2u);
  EXPECT_EQ(s.train.num_edges(), 8u);
  EXPECT_EQ(s.train.num_nodes(), 10u);
  EXPECT_TRUE(s.test_neg.empty());
}

TEST(SplitEdges, SameSeedSameSplit) {
  const Graph g = fixtures::gnp(50, 0.1, 1);
  const EdgeSplit a = make_split(g, 0.1, 42), b = make_split(g, 0.1, 42);
  EXPECT_EQ(a.test_pos, b.test_pos);
  EXPECT_EQ(a.test_neg, b.test_neg);
  EXPECT_EQ(a.train, b.train);
  const EdgeSplit c = make_split(g, 0.1, 43);
  EXPECT_NE(a.test_pos, c.test_pos);
}

TEST(SplitEdges, Errors) {
  const Graph g = fixtures::cycle(10);
  EXPECT_THROW(split_edges(g, 0.0, 1), InputError);
  EXPECT_THROW(split_edges(g, 1.0, 1), InputError);
  EXPECT_THROW(split_edges(g, 0.01, 1), InputError);  // rounds to 0 test edges
  EXPECT_THROW(split_edges(g, 0.99, 1), InputError);  // rounds to all edges
  EXPECT_THROW(split_edges(fixtures::path(2), 0.5, 1), InputError);
}

TEST(SplitEdges, SetInvariantsOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = fixtures::gnp(20 + seed % 30, 0.15, seed);
    if (g.num_edges() < 10) continue;
    const EdgeSplit s = make_split(g, 0.2, seed);
    const std::vector<Dyad> original = g.edges();
    const std::vector<Dyad> train = s.train.edges();
    std::set<Dyad> pos(s.test_pos.begin(), s.test_pos.end());
    std::set<Dyad> neg(s.test_neg.begin(), s.test_neg.end());
    ASSERT_EQ(pos.size(), s.test_pos.size());
    ASSERT_EQ(neg.size(), s.test_neg.size());
    ASSERT_EQ(s.test_neg.size(), s.test_pos.size());

    std::set<Dyad> all(train.begin(), train.end());
    for (const Dyad& d : s.test_pos) ASSERT_TRUE(all.insert(d).second) << "test edge also in train";
    ASSERT_EQ(std::vector<Dyad>(all.begin(), all.end()), original);
    for (const Dyad& d : s.test_neg) {
      ASSERT_LT(d.u, d.v);
      ASSERT_FALSE(g.has_edge(d.u, d.v));
      ASSERT_FALSE(pos.count(d));
    }
    for (const Dyad& d : s.test_pos) ASSERT_LT(d.u, d.v);
  }
}

TEST(SampleNegatives, NoCapacity) {
  try {
    sample_negatives(fixtures::complete(3), 1, 1);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.available(), 0u);
    EXPECT_NE(std::string(e.what()).find('0'), std::string::npos);
  }
}

TEST(SampleNegatives, UniqueNonEdge) {
  const auto neg = sample_negatives(fixtures::path(3), 1, 5);
  ASSERT_EQ(neg.size(), 1u);
  EXPECT_EQ(neg[0], Dyad(0, 2));
}

TEST(SampleNegatives, ExclusionShrinksCapacity) {
  const Graph g = fixtures::path(4);  // non-edges: (0,2) (0,3) (1,3)
  const std::vector<Dyad> exclude{{0, 3}};
  const auto neg = sample_negatives(g, 2, 1, exclude);
  EXPECT_EQ(std::set<Dyad>(neg.begin(), neg.end()), (std::set<Dyad>{{0, 2}, {1, 3}}));
  EXPECT_THROW(sample_negatives(g, 3, 1, exclude), CapacityError);
}

TEST(SampleNegatives, DistinctValidAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = fixtures::gnp(30, 0.3, seed);
    const std::size_t capacity = 30 * 29 / 2 - g.num_edges();
    for (std::size_t count : {std::size_t{5}, capacity / 2, capacity}) {
      const auto neg = sample_negatives(g, count, seed);
      ASSERT_EQ(neg.size(), count);
      ASSERT_EQ(std::set<Dyad>(neg.begin(), neg.end()).size(), count);
      for (const Dyad& d : neg) {
        ASSERT_LT(d.u, d.v);
        ASSERT_FALSE(g.has_edge(d.u, d.v));
      }
      EXPECT_EQ(neg, sample_negatives(g, count, seed));
    }
  }
}

TEST(SampleNegatives, UniformOverNonEdges) {
  // Both the rejection path (sparse request) and the enumeration path (dense request).
  const Graph g = fixtures::cycle(8);  // 20 non-edges
  for (std::size_t count : {std::size_t{1}, std::size_t{15}}) {
    std::map<Dyad, double> freq;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t)
      for (const Dyad& d : sample_negatives(g, count, static_cast<std::uint64_t>(t))) freq[d] += 1.0;
    ASSERT_EQ(freq.size(), 20u);
    const double expected = trials * static_cast<double>(count) / 20.0;
    double chi2 = 0.0;
    for (const auto& [d, c] : freq) chi2 += (c - expected) * (c - expected) / expected;
    // Multinomial counts with fixed totals; 19 dof, 0.999 quantile is 43.8.
    EXPECT_LT(chi2, 43.8) << "count " << count;
  }
}

TEST(Walks, ForcedStepOnPath) {
  const WalkCorpus c = generate_walks(fixtures::path(3), {.walks_per_node = 50, .walk_length = 5, .seed = 3});
  for (std::size_t w = 0; w < 50; ++w) {
    const auto walk = c.walk(w);
    ASSERT_EQ(walk[0], 0u);
    ASSERT_EQ(walk[1], 1u);
  }
}

TEST(Walks, DefaultsAndShape) {
  const WalkConfig defaults;
  EXPECT_EQ(defaults.walks_per_node, 100);
  EXPECT_EQ(defaults.walk_length, 30);
  const Graph g = fixtures::gnp(25, 0.2, 4);
  const WalkCorpus c = generate_walks(g, defaults);
  EXPECT_EQ(c.num_walks(), 25u * 100u);
  EXPECT_EQ(c.walks_per_node, 100);
  EXPECT_EQ(c.walk_length, 30);
}

TEST(Walks, EveryStepIsAnEdgeAndOrderIsCanonical) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = fixtures::gnp(30, 0.1, seed);
    const WalkCorpus c = generate_walks(g, {.walks_per_node = 4, .walk_length = 12, .seed = seed});
    ASSERT_EQ(c.num_walks(), 120u);
    for (std::size_t w = 0; w < c.num_walks(); ++w) {
      const auto walk = c.walk(w);
      ASSERT_EQ(walk[0], w / 4);
      ASSERT_LE(walk.size(), 12u);
      if (g.degree(walk[0]) == 0) {
        ASSERT_EQ(walk.size(), 1u);
      } else {
        ASSERT_EQ(walk.size(), 12u);
      }
      for (std::size_t t = 1; t < walk.size(); ++t) ASSERT_TRUE(g.has_edge(walk[t - 1], walk[t]));
    }
  }
}

TEST(Walks, IndependentOfThreadCount) {
  const Graph g = fixtures::gnp(40, 0.1, 9);
  const WalkCorpus a = generate_walks(g, {.walks_per_node = 5, .walk_length = 10, .seed = 11, .threads = 1});
  const WalkCorpus b = generate_walks(g, {.walks_per_node = 5, .walk_length = 10, .seed = 11, .threads = 3});
  ASSERT_EQ(a.num_walks(), b.num_walks());
  EXPECT_TRUE(std::equal(a.tokens().begin(), a.tokens().end(), b.tokens().begin(), b.tokens().end()));
}

TEST(Walks, NextStepUniformFromDegreeThreeNode) {
  const int steps = 100000;
  const WalkCorpus c = generate_walks(fixtures::star(3), {.walks_per_node = steps, .walk_length = 2, .seed = 17});
  std::array<double, 4> count{};
  for (int w = 0; w < steps; ++w) count[c.walk(static_cast<std::size_t>(w))[1]] += 1.0;
  EXPECT_EQ(count[0], 0.0);
  const double expected = steps / 3.0;
  const double sd = std::sqrt(steps * (1.0 / 3.0) * (2.0 / 3.0));
  double chi2 = 0.0;
  for (int leaf = 1; leaf <= 3; ++leaf) {
    EXPECT_LT(std::abs(count[leaf] - expected), 3.0 * sd);
    chi2 += (count[leaf] - expected) * (count[leaf] - expected) / expected;
  }
  EXPECT_LT(chi2, 13.8);  // 2 dof, 0.999 quantile
}

TEST(Walks, WriteOneWalkPerLine) {
  std::istringstream in("7 8\n8 9\n");
  const Graph g = parse_edge_list(in);
  const WalkCorpus c = generate_walks(g, {.walks_per_node = 2, .walk_length = 3, .seed = 1});
  const auto path = std::filesystem::temp_directory_path() / "linkpred_walks_test.txt";
  write_walks(c, g, path.string());
  std::ifstream f(path);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(f, line)) {
    std::istringstream ls(line);
    std::int64_t id;
    std::size_t tokens = 0;
    while (ls >> id) {
      EXPECT_TRUE(id >= 7 && id <= 9);
      ++tokens;
    }
    EXPECT_EQ(tokens, 3u);
    ++lines;
  }
  EXPECT_EQ(lines, 6u);
  std::filesystem::remove(path);
}
