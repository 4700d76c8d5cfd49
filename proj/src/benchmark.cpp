#include "linkpred/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "linkpred/error.hpp"

namespace linkpred {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Ergm:
      return "ergm";
    case ModelKind::Gcn:
      return "gcn";
    case ModelKind::Word2Vec:
      return "word2vec";
  }
  return "?";
}

ModelKind parse_model(const std::string& name) {
  if (name == "ergm") return ModelKind::Ergm;
  if (name == "gcn") return ModelKind::Gcn;
  if (name == "word2vec" || name == "w2v") return ModelKind::Word2Vec;
  throw InputError("unknown model '" + name + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> to_std(const nn::Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

sgns::SgnsResult fit_word2vec(const Graph& train, const Word2VecSettings& settings, std::uint64_t seed, int threads) {
  WalkConfig walks = settings.walks;
  walks.seed = derive_seed(seed, 201);
  walks.threads = threads;
  const WalkCorpus corpus = generate_walks(train, walks);
  sgns::SgnsConfig cfg = settings.sgns;
  cfg.seed = derive_seed(seed, 202);
  cfg.threads = threads;
  sgns::SgnsResult result = sgns::train_sgns(corpus, train.num_nodes(), cfg);
  result.embeddings.labels = train.labels();
  return result;
}

mlp::MlpResult fit_edge_mlp(const Graph& train, const sgns::EmbeddingMatrix& emb, const Word2VecSettings& settings,
                            std::uint64_t seed) {
  std::vector<Dyad> dyads = train.edges();
  const std::size_t m = dyads.size();
  const std::vector<Dyad> neg = sample_negatives(train, m, derive_seed(seed, 203));
  dyads.insert(dyads.end(), neg.begin(), neg.end());
  std::vector<std::uint8_t> labels(dyads.size(), 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(m), 1);

  mlp::MlpConfig cfg = settings.mlp;
  cfg.seed = derive_seed(seed, 204);
  return mlp::train_mlp(mlp::edge_features(emb.input, dyads, settings.features), labels, cfg);
}

ModelScores run_model(ModelKind kind, const EdgeSplit& split, const ModelSettings& settings, std::uint64_t seed,
                      int threads) {
  ModelScores out;
  auto t0 = Clock::now();
  switch (kind) {
    case ModelKind::Ergm: {
      const ergm::StatSpec spec = ergm::StatSpec::parse(settings.ergm.terms);
      const std::uint64_t s = derive_seed(seed, 101);
      ergm::ErgmModel model;
      if (settings.ergm.estimator == "mple") {
        model = ergm::fit_mple(split.train, spec, s, settings.ergm.mple);
      } else if (settings.ergm.estimator == "mcmcmle") {
        model = ergm::fit_mcmcmle(split.train, spec, settings.ergm.mcmc, s);
      } else {
        throw InputError("unknown ERGM estimator '" + settings.ergm.estimator + "'");
      }
      out.fit_seconds = seconds_since(t0);
      t0 = Clock::now();
      out.pos = ergm::predict_dyads(model, split.train, split.test_pos);
      out.neg = ergm::predict_dyads(model, split.train, split.test_neg);
      break;
    }
    case ModelKind::Gcn: {
      gcn::GcnConfig cfg = settings.gcn;
      cfg.seed = derive_seed(seed, 102);
      const gcn::GcnResult fit = gcn::train_gcn(split, cfg);
      out.fit_seconds = seconds_since(t0);
      t0 = Clock::now();
      auto probs = [&](const std::vector<Dyad>& d) {
        return to_std(gcn::decode_edges(fit.embeddings, d).unaryExpr([](double x) { return nn::sigmoid(x); }));
      };
      out.pos = probs(split.test_pos);
      out.neg = probs(split.test_neg);
      break;
    }
    case ModelKind::Word2Vec: {
      const sgns::SgnsResult emb = fit_word2vec(split.train, settings.w2v, seed, threads);
      const mlp::MlpResult clf = fit_edge_mlp(split.train, emb.embeddings, settings.w2v, seed);
      out.fit_seconds = seconds_since(t0);
      t0 = Clock::now();
      auto probs = [&](const std::vector<Dyad>& d) {
        return to_std(mlp::predict_mlp(clf.params, mlp::edge_features(emb.embeddings.input, d, settings.w2v.features)));
      };
      out.pos = probs(split.test_pos);
      out.neg = probs(split.test_neg);
      break;
    }
  }
  out.predict_seconds = seconds_since(t0);
  return out;
}

BenchmarkResult run_benchmark(const Graph& g, const BenchmarkConfig& config) {
  if (config.models.empty()) throw InputError("benchmark needs at least one model");
  if (config.seeds.empty()) throw InputError("benchmark needs at least one seed");
  const int threads = config.deterministic ? 1 : std::max(1, config.threads);

  BenchmarkResult result;
  for (std::uint64_t seed : config.seeds) {
    const EdgeSplit split = make_split(g, config.test_frac, seed);
    for (ModelKind kind : config.models) {
      eval::EvalReport report;
      report.model = to_string(kind);
      report.dataset = config.dataset;
      report.seed = seed;
      try {
        const ModelScores scores = run_model(kind, split, config.settings, seed, threads);
        const eval::RocResult roc = eval::roc_auc(scores.pos, scores.neg);
        report.auc = roc.auc;
        report.roc = roc.points;
        report.confusion = eval::confusion(scores.pos, scores.neg, 0.5);
        report.fit_seconds = scores.fit_seconds;
        report.predict_seconds = scores.predict_seconds;
      } catch (const std::exception& e) {
        report.ok = false;
        report.error = e.what();
      }
      result.reports.push_back(std::move(report));
    }
  }

  for (ModelKind kind : config.models) {
    ModelSummary s{kind};
    double sum = 0.0, sq = 0.0, secs = 0.0;
    for (const auto& r : result.reports)
      if (r.model == to_string(kind) && r.ok) {
        ++s.runs;
        sum += r.auc;
        sq += r.auc * r.auc;
        secs += r.total_seconds();
      }
    if (s.runs > 0) {
      const double n = static_cast<double>(s.runs);
      s.auc_mean = sum / n;
      s.auc_sd = s.runs > 1 ? std::sqrt(std::max(0.0, (sq - n * s.auc_mean * s.auc_mean) / (n - 1.0))) : 0.0;
      s.seconds_mean = secs / n;
    }
    result.summary.push_back(s);
  }
  return result;
}

std::string summary_csv(const std::string& dataset, const BenchmarkResult& result, bool include_times) {
  const ModelKind columns[] = {ModelKind::Ergm, ModelKind::Gcn, ModelKind::Word2Vec};
  auto find = [&](ModelKind k) -> const ModelSummary* {
    for (const auto& s : result.summary)
      if (s.model == k && s.runs > 0) return &s;
    return nullptr;
  };
  std::string csv = "dataset,auc_ergm,auc_gcn,auc_word2vec,time_ergm,time_gcn,time_word2vec\n";
  csv += dataset;
  char buf[32];
  for (ModelKind k : columns) {
    const ModelSummary* s = find(k);
    if (s) {
      std::snprintf(buf, sizeof buf, ",%.4f", s->auc_mean);
      csv += buf;
    } else {
      csv += ",NA";
    }
  }
  for (ModelKind k : columns) {
    const ModelSummary* s = find(k);
    if (s && include_times) {
      std::snprintf(buf, sizeof buf, ",%.1f", s->seconds_mean);
      csv += buf;
    } else {
      csv += ",NA";
    }
  }
  csv += "\n";
  return csv;
}

}  // namespace linkpred
