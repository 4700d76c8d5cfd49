#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linkpred/rng.hpp"
#include "linkpred/sampling.hpp"

namespace linkpred::sgns {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Discrete distribution with O(1) draws (Vose alias method).
class NoiseDistribution {
 public:
  NoiseDistribution() = default;
  explicit NoiseDistribution(std::vector<double> weights);

  const std::vector<double>& probabilities() const { return prob_; }
  std::size_t size() const { return prob_.size(); }
  NodeId sample(Rng& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<double> accept_;
  std::vector<NodeId> alias_;
};

/// P(v) proportional to count(v)^power over the corpus tokens; nodes that
/// never occur get probability 0.
NoiseDistribution build_noise_distribution(const WalkCorpus& corpus, std::size_t num_nodes, double power = 0.75);

struct PairLoss {
  double loss = 0.0;
  Eigen::VectorXd d_center;
  Eigen::VectorXd d_context;
  std::vector<Eigen::VectorXd> d_negatives;
};

/// -log sigmoid(u . v_ctx) - sum_neg log sigmoid(-u . v_neg) with analytic gradients.
PairLoss sgns_pair_loss(std::span<const double> center, std::span<const double> context,
                        std::span<const std::span<const double>> negatives);

struct SgnsConfig {
  int dim = 32;
  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double lr = 0.025;
  double min_lr = 1e-4;
  int min_count = 1;
  double noise_power = 0.75;
  std::uint64_t seed = 1;
  /// 1 is deterministic; more threads apply unsynchronized updates.
  int threads = 1;
  /// Record the mean pair loss on a fixed probe sample after every epoch.
  bool track_loss = false;
};

/// Input (node) and output (context) vectors, one row per node.
struct EmbeddingMatrix {
  RowMatrix input;
  RowMatrix output;
  std::vector<std::int64_t> labels;

  std::size_t num_nodes() const { return static_cast<std::size_t>(input.rows()); }
  int dim() const { return static_cast<int>(input.cols()); }
};

struct SgnsResult {
  EmbeddingMatrix embeddings;
  /// Nodes absent from the corpus (their vectors are zero).
  std::vector<NodeId> missing;
  std::vector<double> epoch_loss;
};

/// Skip-gram with negative sampling over every (center, context) pair within
/// a fixed window, learning rate decaying linearly from lr to min_lr.
SgnsResult train_sgns(const WalkCorpus& corpus, std::size_t num_nodes, const SgnsConfig& config);

double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace linkpred::sgns
