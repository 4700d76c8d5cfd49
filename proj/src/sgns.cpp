#include "linkpred/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "linkpred/error.hpp"

namespace linkpred::sgns {

NoiseDistribution::NoiseDistribution(std::vector<double> weights) {
  const std::size_t n = weights.size();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (n == 0 || !(total > 0.0)) throw InputError("noise distribution needs positive total weight");
  prob_.resize(n);
  for (std::size_t i = 0; i < n; ++i) prob_[i] = weights[i] / total;

  accept_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<NodeId> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = prob_[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<NodeId>(i));
  }
  while (!small.empty() && !large.empty()) {
    const NodeId s = small.back();
    small.pop_back();
    const NodeId l = large.back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Whatever is left is at scaled weight 1 up to rounding.
  for (NodeId i : large) accept_[i] = 1.0;
  for (NodeId i : small) accept_[i] = 1.0;
}

NodeId NoiseDistribution::sample(Rng& rng) const {
  const auto column = static_cast<NodeId>(uniform_index(rng, prob_.size()));
  return uniform01(rng) < accept_[column] ? column : alias_[column];
}

NoiseDistribution build_noise_distribution(const WalkCorpus& corpus, std::size_t num_nodes, double power) {
  if (corpus.num_tokens() == 0) throw InputError("noise distribution of an empty corpus");
  std::vector<double> counts(num_nodes, 0.0);
  for (NodeId t : corpus.tokens()) {
    if (t >= num_nodes) throw InputError("corpus token out of range");
    counts[t] += 1.0;
  }
  for (double& c : counts) c = c > 0.0 ? std::pow(c, power) : 0.0;
  return NoiseDistribution(std::move(counts));
}

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log sigmoid(x)
double neg_log_sigmoid(double x) { return std::max(-x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

}  // namespace

PairLoss sgns_pair_loss(std::span<const double> center, std::span<const double> context,
                        std::span<const std::span<const double>> negatives) {
  const std::size_t d = center.size();
  if (context.size() != d) throw InputError("pair loss vectors differ in dimension");
  PairLoss out;
  out.d_center = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  const Eigen::Map<const Eigen::VectorXd> u(center.data(), static_cast<Eigen::Index>(d));
  const Eigen::Map<const Eigen::VectorXd> v(context.data(), static_cast<Eigen::Index>(d));

  const double s = u.dot(v);
  out.loss = neg_log_sigmoid(s);
  const double gs = sigmoid(s) - 1.0;
  out.d_center += gs * v;
  out.d_context = gs * u;
  for (const auto& neg : negatives) {
    if (neg.size() != d) throw InputError("pair loss vectors differ in dimension");
    const Eigen::Map<const Eigen::VectorXd> w(neg.data(), static_cast<Eigen::Index>(d));
    const double t = u.dot(w);
    out.loss += neg_log_sigmoid(-t);
    const double gt = sigmoid(t);
    out.d_center += gt * w;
    out.d_negatives.push_back(gt * u);
  }
  return out;
}

SgnsResult train_sgns(const WalkCorpus& corpus, std::size_t num_nodes, const SgnsConfig& config) {
  if (config.dim < 1 || config.window < 1 || config.negatives < 1 || config.epochs < 1 ||
      !(config.lr > 0.0) || !(config.min_lr > 0.0) || config.min_lr > config.lr || config.min_count < 1)
    throw InputError("invalid skip-gram configuration");

  const auto dim = static_cast<std::size_t>(config.dim);
  SgnsResult result;
  EmbeddingMatrix& emb = result.embeddings;
  emb.input = RowMatrix::Zero(static_cast<Eigen::Index>(num_nodes), config.dim);
  emb.output = RowMatrix::Zero(static_cast<Eigen::Index>(num_nodes), config.dim);

  std::vector<std::size_t> counts(num_nodes, 0);
  for (NodeId t : corpus.tokens()) {
    if (t >= num_nodes) throw InputError("corpus token out of range");
    ++counts[t];
  }
  std::vector<bool> in_vocab(num_nodes);
  std::vector<double> noise_weights(num_nodes, 0.0);
  for (NodeId v = 0; v < num_nodes; ++v) {
    in_vocab[v] = counts[v] >= static_cast<std::size_t>(config.min_count);
    if (in_vocab[v]) {
      noise_weights[v] = std::pow(static_cast<double>(counts[v]), config.noise_power);
    } else {
      result.missing.push_back(v);
    }
  }
  if (result.missing.size() == num_nodes) throw InputError("no node reaches the minimum count");
  const NoiseDistribution noise(std::move(noise_weights));

  Rng init(derive_seed(config.seed, 0));
  const double half = 0.5 / static_cast<double>(dim);
  for (NodeId v = 0; v < num_nodes; ++v)
    for (std::size_t k = 0; k < dim; ++k) {
      const double x = uniform_real(init, -half, half);
      if (in_vocab[v]) emb.input(v, static_cast<Eigen::Index>(k)) = x;
    }

  const std::size_t walks = corpus.num_walks();
  const double total_tokens = static_cast<double>(corpus.num_tokens()) * config.epochs;
  std::atomic<std::size_t> processed{0};
  const int threads = std::max(1, config.threads);

  double* in = emb.input.data();
  double* outv = emb.output.data();
  const auto window = static_cast<std::ptrdiff_t>(config.window);

  // Fixed probe pairs and noise draws, scored at the end of every epoch.
  struct Probe {
    NodeId center, context;
    std::vector<NodeId> negatives;
  };
  std::vector<Probe> probes;
  if (config.track_loss) {
    Rng rng(derive_seed(config.seed, 0x9e37));
    for (int attempt = 0; attempt < 20000 && probes.size() < 5000; ++attempt) {
      const auto walk = corpus.walk(uniform_index(rng, walks));
      if (walk.size() < 2) continue;
      const auto len = static_cast<std::ptrdiff_t>(walk.size());
      const auto t = static_cast<std::ptrdiff_t>(uniform_index(rng, walk.size()));
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, t - window), hi = std::min(len - 1, t + window);
      auto j = lo + static_cast<std::ptrdiff_t>(uniform_index(rng, static_cast<std::size_t>(hi - lo)));
      if (j >= t) ++j;
      Probe p{walk[static_cast<std::size_t>(t)], walk[static_cast<std::size_t>(j)], {}};
      if (!in_vocab[p.center] || !in_vocab[p.context]) continue;
      for (int s = 0; s < config.negatives; ++s)
        if (const NodeId v = noise.sample(rng); v != p.context) p.negatives.push_back(v);
      probes.push_back(std::move(p));
    }
  }
  auto probe_loss = [&] {
    double sum = 0.0;
    for (const Probe& p : probes) {
      const double* u = in + p.center * dim;
      sum += neg_log_sigmoid(dot(u, outv + p.context * dim, dim));
      for (NodeId v : p.negatives) sum += neg_log_sigmoid(-dot(u, outv + v * dim, dim));
    }
    return probes.empty() ? 0.0 : sum / static_cast<double>(probes.size());
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order(walks);
    std::iota(order.begin(), order.end(), 0);
    {
      Rng rng(derive_seed(config.seed, 1 + 2 * static_cast<std::uint64_t>(epoch)));
      for (std::size_t i = walks; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    }

    auto work = [&](int tid) {
      Rng rng(derive_seed(config.seed, 2 + 2 * static_cast<std::uint64_t>(epoch) +
                                           (static_cast<std::uint64_t>(tid) << 32)));
      Eigen::VectorXd grad_center(static_cast<Eigen::Index>(dim));
      for (std::size_t w = static_cast<std::size_t>(tid); w < walks; w += static_cast<std::size_t>(threads)) {
        const auto walk = corpus.walk(order[w]);
        const auto len = static_cast<std::ptrdiff_t>(walk.size());
        const double progress = static_cast<double>(processed.fetch_add(walk.size(), std::memory_order_relaxed)) /
                                total_tokens;
        const double lr = std::max(config.min_lr, config.lr - (config.lr - config.min_lr) * progress);
        for (std::ptrdiff_t t = 0; t < len; ++t) {
          const NodeId center = walk[static_cast<std::size_t>(t)];
          if (!in_vocab[center]) continue;
          Eigen::Map<Eigen::VectorXd> u(in + center * dim, static_cast<Eigen::Index>(dim));
          for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, t - window); j <= std::min(len - 1, t + window); ++j) {
            if (j == t) continue;
            const NodeId context = walk[static_cast<std::size_t>(j)];
            if (!in_vocab[context]) continue;
            grad_center.setZero();
            for (int s = 0; s <= config.negatives; ++s) {
              NodeId target;
              double label;
              if (s == 0) {
                target = context;
                label = 1.0;
              } else {
                target = noise.sample(rng);
                if (target == context) continue;
                label = 0.0;
              }
              Eigen::Map<Eigen::VectorXd> v(outv + target * dim, static_cast<Eigen::Index>(dim));
              const double f = u.dot(v);
              const double g = (label - sigmoid(f)) * lr;
              grad_center.noalias() += g * v;
              v.noalias() += g * u;
            }
            u += grad_center;
          }
        }
      }
    };

    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }

    if (config.track_loss) result.epoch_loss.push_back(probe_loss());
  }

  if (!emb.input.allFinite() || !emb.output.allFinite()) throw DivergenceError(config.epochs);
  return result;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot(a.data(), a.data(), a.size()));
  const double nb = std::sqrt(dot(b.data(), b.data(), b.size()));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a.data(), b.data(), a.size()) / (na * nb);
}

}  // namespace linkpred::sgns
