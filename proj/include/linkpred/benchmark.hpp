#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linkpred/ergm.hpp"
#include "linkpred/eval.hpp"
#include "linkpred/gcn.hpp"
#include "linkpred/mlp.hpp"
#include "linkpred/sampling.hpp"
#include "linkpred/sgns.hpp"

namespace linkpred {

enum class ModelKind { Ergm, Gcn, Word2Vec };

std::string to_string(ModelKind kind);
ModelKind parse_model(const std::string& name);

struct ErgmSettings {
  std::string terms = "edges";
  /// "mple" or "mcmcmle".
  std::string estimator = "mple";
  ergm::MpleOptions mple;
  ergm::McmcMleConfig mcmc;
};

struct Word2VecSettings {
  WalkConfig walks;
  sgns::SgnsConfig sgns;
  mlp::MlpConfig mlp;
  mlp::EdgeFeatureMode features = mlp::EdgeFeatureMode::Hadamard;
};

struct ModelSettings {
  ErgmSettings ergm;
  gcn::GcnConfig gcn;
  Word2VecSettings w2v;
};

/// Fits one model on split.train and returns probabilities for test_pos
/// followed by test_neg. Seeds inside `settings` are replaced by values
/// derived from `seed`.
struct ModelScores {
  std::vector<double> pos;
  std::vector<double> neg;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
};

ModelScores run_model(ModelKind kind, const EdgeSplit& split, const ModelSettings& settings, std::uint64_t seed,
                      int threads);

/// Word2Vec half of the pipeline: walks on the train graph, then skip-gram.
sgns::SgnsResult fit_word2vec(const Graph& train, const Word2VecSettings& settings, std::uint64_t seed, int threads);
/// MLP on train edges against an equal number of sampled train non-edges.
mlp::MlpResult fit_edge_mlp(const Graph& train, const sgns::EmbeddingMatrix& emb, const Word2VecSettings& settings,
                            std::uint64_t seed);

struct BenchmarkConfig {
  std::string dataset = "dataset";
  std::vector<ModelKind> models{ModelKind::Ergm, ModelKind::Gcn, ModelKind::Word2Vec};
  double test_frac = 0.1;
  std::vector<std::uint64_t> seeds{1};
  ModelSettings settings;
  int threads = 1;
  /// Single-threaded everywhere; timing cells in the summary become NA.
  bool deterministic = false;
};

struct ModelSummary {
  ModelKind model;
  std::size_t runs = 0;  ///< successful seeds
  double auc_mean = 0.0;
  double auc_sd = 0.0;
  double seconds_mean = 0.0;
};

struct BenchmarkResult {
  std::vector<eval::EvalReport> reports;
  std::vector<ModelSummary> summary;
};

/// One shared split per seed; every model is fitted and scored on it. A
/// failing model is recorded in its report and the others still run.
BenchmarkResult run_benchmark(const Graph& g, const BenchmarkConfig& config);

/// "dataset,auc_ergm,auc_gcn,auc_word2vec,time_ergm,time_gcn,time_word2vec".
std::string summary_csv(const std::string& dataset, const BenchmarkResult& result, bool include_times);

}  // namespace linkpred
