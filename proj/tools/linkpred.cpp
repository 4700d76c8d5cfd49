// linkpred: command-line front end for the link-prediction toolkit.
//
//   linkpred stats      <edges>                 graph statistics
//   linkpred split      <edges>                 seeded train/test split
//   linkpred fit-ergm   <edges> [--split f]     ERGM by MPLE or MCMC-MLE
//   linkpred fit-gcn    <edges> [--split f]     two-layer GCN autoencoder
//   linkpred fit-w2v    <edges> [--split f]     random walks + skip-gram
//   linkpred fit-mlp    <edges> --embeddings b  edge classifier on embeddings
//   linkpred predict    <edges> --run dir       score dyads with a fitted run
//   linkpred benchmark  <edges>                 all models, shared splits
//
// Exit codes: 0 success, 1 model failure, 2 input or configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <unordered_map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "linkpred/benchmark.hpp"
#include "linkpred/error.hpp"
#include "linkpred/eval.hpp"
#include "linkpred/gcn.hpp"
#include "linkpred/graph.hpp"
#include "linkpred/io.hpp"
#include "linkpred/mlp.hpp"
#include "linkpred/sampling.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace linkpred;

namespace {

constexpr int kOk = 0;
constexpr int kModelFailure = 1;
constexpr int kInputError = 2;

struct RunConfig {
  std::string dataset;
  std::string out = "run";
  std::string split;
  std::vector<std::uint64_t> seeds{1};
  double test_frac = 0.1;
  int threads = 1;
  bool deterministic = false;
  std::vector<std::string> models{"ergm", "gcn", "word2vec"};
  ModelSettings settings;
  std::string ergm_plan = "auto";
  std::string features = "hadamard";
  std::size_t degree_threshold = 400;
  double clique_budget = 900.0;
  std::string run;
  std::string pairs;
  std::string embeddings;
  bool save_walks = false;
};

int env_threads() {
  if (const char* s = std::getenv("LINKPRED_THREADS")) {
    try {
      const int t = std::stoi(s);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
    throw InputError(std::string("LINKPRED_THREADS must be a positive integer, got '") + s + "'");
  }
  return 1;
}

json config_to_json(const RunConfig& c) {
  const auto& s = c.settings;
  return {
      {"dataset", c.dataset},
      {"out", c.out},
      {"split", c.split},
      {"seeds", c.seeds},
      {"test_frac", c.test_frac},
      {"threads", c.threads},
      {"deterministic", c.deterministic},
      {"models", c.models},
      {"ergm",
       {{"terms", s.ergm.terms},
        {"estimator", s.ergm.estimator},
        {"plan", c.ergm_plan},
        {"max_rounds", s.ergm.mcmc.max_rounds},
        {"samples", s.ergm.mcmc.samples},
        {"final_samples", s.ergm.mcmc.final_samples}}},
      {"gcn",
       {{"features", s.gcn.feature_dim}, {"hidden", s.gcn.hidden}, {"lr", s.gcn.lr}, {"epochs", s.gcn.epochs}}},
      {"walks", {{"per_node", s.w2v.walks.walks_per_node}, {"length", s.w2v.walks.walk_length}}},
      {"sgns",
       {{"dim", s.w2v.sgns.dim},
        {"window", s.w2v.sgns.window},
        {"negatives", s.w2v.sgns.negatives},
        {"epochs", s.w2v.sgns.epochs},
        {"lr", s.w2v.sgns.lr},
        {"min_lr", s.w2v.sgns.min_lr},
        {"min_count", s.w2v.sgns.min_count}}},
      {"mlp",
       {{"hidden", s.w2v.mlp.hidden}, {"lr", s.w2v.mlp.lr}, {"epochs", s.w2v.mlp.epochs}, {"features", c.features}}},
      {"stats", {{"degree_threshold", c.degree_threshold}, {"clique_budget_seconds", c.clique_budget}}},
  };
}

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw InputError("config section '" + where + "' must be an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw InputError("unknown config key '" + where + key + "'");
  }
}

void apply_json(RunConfig& c, const json& j) {
  check_keys(j,
             {"dataset", "out", "split", "seeds", "seed", "test_frac", "threads", "deterministic", "models", "ergm",
              "gcn", "walks", "sgns", "mlp", "stats"},
             "");
  auto& s = c.settings;
  take(j, "dataset", c.dataset);
  take(j, "out", c.out);
  take(j, "split", c.split);
  take(j, "seeds", c.seeds);
  if (j.contains("seed")) c.seeds = {j.at("seed").get<std::uint64_t>()};
  take(j, "test_frac", c.test_frac);
  take(j, "threads", c.threads);
  take(j, "deterministic", c.deterministic);
  take(j, "models", c.models);
  if (j.contains("ergm")) {
    const json& e = j.at("ergm");
    check_keys(e, {"terms", "estimator", "plan", "max_rounds", "samples", "final_samples"}, "ergm.");
    take(e, "terms", s.ergm.terms);
    take(e, "estimator", s.ergm.estimator);
    take(e, "plan", c.ergm_plan);
    take(e, "max_rounds", s.ergm.mcmc.max_rounds);
    take(e, "samples", s.ergm.mcmc.samples);
    take(e, "final_samples", s.ergm.mcmc.final_samples);
  }
  if (j.contains("gcn")) {
    const json& g = j.at("gcn");
    check_keys(g, {"features", "hidden", "lr", "epochs"}, "gcn.");
    take(g, "features", s.gcn.feature_dim);
    take(g, "hidden", s.gcn.hidden);
    take(g, "lr", s.gcn.lr);
    take(g, "epochs", s.gcn.epochs);
  }
  if (j.contains("walks")) {
    const json& w = j.at("walks");
    check_keys(w, {"per_node", "length"}, "walks.");
    take(w, "per_node", s.w2v.walks.walks_per_node);
    take(w, "length", s.w2v.walks.walk_length);
  }
  if (j.contains("sgns")) {
    const json& w = j.at("sgns");
    check_keys(w, {"dim", "window", "negatives", "epochs", "lr", "min_lr", "min_count"}, "sgns.");
    take(w, "dim", s.w2v.sgns.dim);
    take(w, "window", s.w2v.sgns.window);
    take(w, "negatives", s.w2v.sgns.negatives);
    take(w, "epochs", s.w2v.sgns.epochs);
    take(w, "lr", s.w2v.sgns.lr);
    take(w, "min_lr", s.w2v.sgns.min_lr);
    take(w, "min_count", s.w2v.sgns.min_count);
  }
  if (j.contains("mlp")) {
    const json& m = j.at("mlp");
    check_keys(m, {"hidden", "lr", "epochs", "features"}, "mlp.");
    take(m, "hidden", s.w2v.mlp.hidden);
    take(m, "lr", s.w2v.mlp.lr);
    take(m, "epochs", s.w2v.mlp.epochs);
    take(m, "features", c.features);
  }
  if (j.contains("stats")) {
    const json& st = j.at("stats");
    check_keys(st, {"degree_threshold", "clique_budget_seconds"}, "stats.");
    take(st, "degree_threshold", c.degree_threshold);
    take(st, "clique_budget_seconds", c.clique_budget);
  }
}

void validate(RunConfig& c) {
  auto& s = c.settings;
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InputError("invalid configuration: " + what);
  };
  require(!c.seeds.empty(), "seeds must be nonempty");
  require(c.test_frac > 0.0 && c.test_frac < 1.0, "test_frac must lie in (0, 1)");
  require(c.threads >= 1, "threads must be >= 1");
  require(!c.models.empty(), "models must be nonempty");
  for (const auto& m : c.models) parse_model(m);
  require(s.gcn.feature_dim >= 1 && s.gcn.hidden >= 1, "gcn sizes must be >= 1");
  require(s.gcn.lr > 0.0 && s.gcn.epochs >= 1, "gcn lr > 0 and epochs >= 1");
  require(s.w2v.walks.walks_per_node >= 1 && s.w2v.walks.walk_length >= 1, "walk counts must be >= 1");
  require(s.w2v.sgns.dim >= 1 && s.w2v.sgns.window >= 1 && s.w2v.sgns.negatives >= 1 && s.w2v.sgns.epochs >= 1,
          "sgns sizes must be >= 1");
  require(s.w2v.sgns.lr > 0.0 && s.w2v.sgns.min_lr > 0.0 && s.w2v.sgns.min_lr <= s.w2v.sgns.lr,
          "sgns needs 0 < min_lr <= lr");
  require(s.w2v.mlp.hidden >= 1 && s.w2v.mlp.lr > 0.0 && s.w2v.mlp.epochs >= 1, "mlp hidden, lr, epochs");
  require(s.ergm.estimator == "mple" || s.ergm.estimator == "mcmcmle", "ergm estimator is mple or mcmcmle");
  require(c.clique_budget > 0.0, "clique budget must be positive");
  ergm::StatSpec::parse(s.ergm.terms);
  s.w2v.features = mlp::parse_feature_mode(c.features);

  auto& plan = s.ergm.mple.plan.kind;
  if (c.ergm_plan == "auto") {
    plan = ergm::DyadPlan::Kind::Auto;
  } else if (c.ergm_plan == "all") {
    plan = ergm::DyadPlan::Kind::AllDyads;
  } else if (c.ergm_plan == "balanced") {
    plan = ergm::DyadPlan::Kind::Balanced;
  } else {
    throw InputError("invalid configuration: ergm plan is auto, all or balanced");
  }
  if (c.deterministic) c.threads = 1;
  s.w2v.walks.threads = c.threads;
  s.w2v.sgns.threads = c.threads;
}

// Flags are bound to a scratch config; after parsing, only the ones given on
// the command line are copied over the file-derived config.
struct Flags {
  RunConfig scratch;
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bound;

  template <class F>
  CLI::Option* option(CLI::App* app, const std::string& name, F field, const std::string& help) {
    CLI::Option* opt = app->add_option(name, field(scratch), help);
    bound.emplace_back(opt, [this, field](RunConfig& c) { field(c) = field(scratch); });
    return opt;
  }
  template <class F>
  CLI::Option* flag(CLI::App* app, const std::string& name, F field, const std::string& help) {
    CLI::Option* opt = app->add_flag(name, field(scratch), help);
    bound.emplace_back(opt, [this, field](RunConfig& c) { field(c) = field(scratch); });
    return opt;
  }

  RunConfig resolve() const {
    RunConfig c;
    c.threads = env_threads();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InputError("cannot open config " + config_path);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw InputError("config " + config_path + ": " + e.what());
      }
      apply_json(c, j);
    }
    for (const auto& [opt, copy] : bound)
      if (opt->count() > 0) copy(c);
    return c;
  }
};

void add_common(CLI::App* app, Flags& f, bool dataset = true) {
  app->add_option("--config", f.config_path, "JSON config; flags override its values");
  if (dataset) f.option(app, "dataset", [](RunConfig& c) -> auto& { return c.dataset; }, "edge-list file");
  f.option(app, "-o,--out", [](RunConfig& c) -> auto& { return c.out; }, "run directory");
  f.option(app, "--seed,--seeds", [](RunConfig& c) -> auto& { return c.seeds; }, "seed(s)");
  f.option(app, "--threads", [](RunConfig& c) -> auto& { return c.threads; },
           "worker threads (default $LINKPRED_THREADS or 1)");
  f.flag(app, "--deterministic", [](RunConfig& c) -> auto& { return c.deterministic; },
         "single-threaded, reproducible output");
}

void add_split_input(CLI::App* app, Flags& f) {
  f.option(app, "--split", [](RunConfig& c) -> auto& { return c.split; }, "split.json; train on its train graph");
}

void add_ergm(CLI::App* app, Flags& f) {
  f.option(app, "--terms", [](RunConfig& c) -> auto& { return c.settings.ergm.terms; },
           "comma-separated terms: edges, triangles, kstarK");
  f.option(app, "--estimator", [](RunConfig& c) -> auto& { return c.settings.ergm.estimator; }, "mple or mcmcmle");
  f.option(app, "--plan", [](RunConfig& c) -> auto& { return c.ergm_plan; }, "MPLE dyads: auto, all, balanced");
  f.option(app, "--max-rounds", [](RunConfig& c) -> auto& { return c.settings.ergm.mcmc.max_rounds; },
           "MCMC-MLE rounds");
  f.option(app, "--samples", [](RunConfig& c) -> auto& { return c.settings.ergm.mcmc.samples; },
           "MCMC-MLE samples per round");
}

void add_gcn(CLI::App* app, Flags& f) {
  f.option(app, "--gcn-features", [](RunConfig& c) -> auto& { return c.settings.gcn.feature_dim; },
           "free feature width");
  f.option(app, "--gcn-hidden", [](RunConfig& c) -> auto& { return c.settings.gcn.hidden; }, "hidden width");
  f.option(app, "--gcn-lr", [](RunConfig& c) -> auto& { return c.settings.gcn.lr; }, "Adam learning rate");
  f.option(app, "--gcn-epochs", [](RunConfig& c) -> auto& { return c.settings.gcn.epochs; }, "epochs");
}

void add_w2v(CLI::App* app, Flags& f) {
  f.option(app, "--walks", [](RunConfig& c) -> auto& { return c.settings.w2v.walks.walks_per_node; },
           "walks per node");
  f.option(app, "--walk-length", [](RunConfig& c) -> auto& { return c.settings.w2v.walks.walk_length; },
           "nodes per walk");
  f.option(app, "--dim", [](RunConfig& c) -> auto& { return c.settings.w2v.sgns.dim; }, "embedding size");
  f.option(app, "--window", [](RunConfig& c) -> auto& { return c.settings.w2v.sgns.window; }, "context window");
  f.option(app, "--negatives", [](RunConfig& c) -> auto& { return c.settings.w2v.sgns.negatives; },
           "noise samples per pair");
  f.option(app, "--sgns-epochs", [](RunConfig& c) -> auto& { return c.settings.w2v.sgns.epochs; }, "passes");
  f.option(app, "--sgns-lr", [](RunConfig& c) -> auto& { return c.settings.w2v.sgns.lr; }, "initial learning rate");
}

void add_mlp(CLI::App* app, Flags& f) {
  f.option(app, "--mlp-hidden", [](RunConfig& c) -> auto& { return c.settings.w2v.mlp.hidden; }, "hidden width");
  f.option(app, "--mlp-lr", [](RunConfig& c) -> auto& { return c.settings.w2v.mlp.lr; }, "Adam learning rate");
  f.option(app, "--mlp-epochs", [](RunConfig& c) -> auto& { return c.settings.w2v.mlp.epochs; }, "epochs");
  f.option(app, "--edge-features", [](RunConfig& c) -> auto& { return c.features; },
           "hadamard, concat, absdiff, average");
}

// ---------------------------------------------------------------------------

struct Dataset {
  Graph graph;
  std::string hash;
};

Dataset load_dataset(const RunConfig& c) {
  if (c.dataset.empty()) throw InputError("no dataset given");
  if (!fs::exists(c.dataset)) throw InputError("dataset not found: " + c.dataset);
  return {read_edge_list(c.dataset), io::file_hash(c.dataset)};
}

std::string dataset_name(const std::string& path) {
  std::string stem = fs::path(path).stem().string();
  return stem.empty() ? "dataset" : stem;
}

json manifest(const std::string& command, const RunConfig& c, const Dataset& d) {
  return {{"tool", "linkpred"},
          {"version", LINKPRED_VERSION},
          {"command", command},
          {"dataset",
           {{"path", c.dataset},
            {"hash", d.hash},
            {"nodes", d.graph.num_nodes()},
            {"edges", d.graph.num_edges()}}},
          {"config", config_to_json(c)},
          {"seeds", c.seeds}};
}

fs::path prepare_out(const RunConfig& c) {
  fs::path out(c.out);
  fs::create_directories(out);
  return out;
}

// Train graph and, when a split is given, its held-out dyads.
struct TrainData {
  Graph train;
  std::optional<EdgeSplit> split;
};

TrainData train_data(const RunConfig& c, const Dataset& d) {
  if (c.split.empty()) return {d.graph, std::nullopt};
  EdgeSplit s = io::split_from_json(io::read_json(c.split), d.graph);
  Graph train = s.train;
  return {std::move(train), std::move(s)};
}

void write_history(const fs::path& path, const std::vector<double>& losses) {
  std::ostringstream os;
  os << "epoch,loss\n";
  char buf[64];
  for (std::size_t i = 0; i < losses.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g\n", i + 1, losses[i]);
    os << buf;
  }
  io::write_text(path.string(), os.str());
}

nn::Matrix column(const nn::Vector& v) { return v; }

// ---------------------------------------------------------------------------

int cmd_stats(const RunConfig& c) {
  const Dataset d = load_dataset(c);
  StatsOptions opt;
  opt.degree_threshold = c.degree_threshold;
  opt.clique_budget = std::chrono::duration<double>(c.clique_budget);
  const GraphStats s = full_stats(d.graph, opt);
  const fs::path out = prepare_out(c);
  json j = io::to_json(s);
  io::write_json((out / "stats.json").string(), j);
  json m = manifest("stats", c, d);
  m["stats"] = j;
  io::write_json((out / "manifest.json").string(), m);

  std::printf("nodes            %zu\n", s.n);
  std::printf("edges            %zu\n", s.m);
  std::printf("density          %.6g\n", s.density);
  std::printf("mean degree      %.4g\n", s.mean_degree);
  std::printf("max degree       %zu\n", s.max_degree);
  std::printf("degree > %-7zu %zu\n", s.degree_threshold, s.high_degree_count);
  std::printf("components       %zu\n", s.components);
  std::printf("giant fraction   %.4f (%zu nodes)\n", s.giant_fraction, s.giant_size);
  std::printf("giant diameter   %zu\n", s.diameter);
  std::printf("max clique       %zu%s\n", s.max_clique, s.clique_exact ? "" : " (lower bound, budget exceeded)");
  return s.clique_exact ? kOk : kModelFailure;
}

int cmd_split(const RunConfig& c) {
  const Dataset d = load_dataset(c);
  const EdgeSplit s = make_split(d.graph, c.test_frac, c.seeds.front());
  const fs::path out = prepare_out(c);
  io::write_json((out / "split.json").string(), io::split_to_json(s, d.graph));
  json m = manifest("split", c, d);
  m["train_edges"] = s.train.num_edges();
  m["test_pos"] = s.test_pos.size();
  m["test_neg"] = s.test_neg.size();
  io::write_json((out / "manifest.json").string(), m);
  std::printf("train %zu edges, test %zu positive + %zu negative dyads\n", s.train.num_edges(), s.test_pos.size(),
              s.test_neg.size());
  return kOk;
}

int cmd_fit_ergm(const RunConfig& c) {
  const Dataset d = load_dataset(c);
  const TrainData t = train_data(c, d);
  const auto& e = c.settings.ergm;
  const ergm::StatSpec spec = ergm::StatSpec::parse(e.terms);
  const std::uint64_t seed = c.seeds.front();
  const ergm::ErgmModel model = e.estimator == "mple" ? ergm::fit_mple(t.train, spec, seed, e.mple)
                                                      : ergm::fit_mcmcmle(t.train, spec, e.mcmc, seed);
  const fs::path out = prepare_out(c);
  const json mj = io::model_to_json(model);
  io::write_json((out / "model.json").string(), mj);

  std::ostringstream hist;
  hist << "name,value\n";
  for (const auto& [name, value] : model.diagnostics) hist << name << ',' << value << '\n';
  io::write_text((out / "history.csv").string(), hist.str());

  json m = manifest("fit-ergm", c, d);
  m["model"] = "ergm";
  m["theta"] = model.theta;
  m["terms"] = spec.to_string();
  io::write_json((out / "manifest.json").string(), m);
  for (std::size_t k = 0; k < model.theta.size(); ++k)
    std::printf("%-12s %.6f\n", spec.terms()[k].name().c_str(), model.theta[k]);
  return kOk;
}

int cmd_fit_gcn(const RunConfig& c) {
  const Dataset d = load_dataset(c);
  const TrainData t = train_data(c, d);
  gcn::GcnConfig cfg = c.settings.gcn;
  cfg.seed = c.seeds.front();
  const gcn::GcnResult r = gcn::train_gcn(t.train, cfg);
  const fs::path out = prepare_out(c);

  io::Checkpoint ck;
  ck.blocks = {{"features", r.params.features}, {"w0", r.params.w0}, {"w1", r.params.w1}};
  io::add_optimizer(ck, r.optimizer);
  ck.meta["model"] = "gcn";
  ck.meta["epochs"] = cfg.epochs;
  io::write_checkpoint((out / "checkpoint").string(), ck);
  write_history(out / "history.csv", r.loss_history);

  sgns::EmbeddingMatrix emb;
  emb.input = r.embeddings;
  emb.labels = t.train.labels();
  io::write_embeddings((out / "embeddings").string(), emb, {{"model", "gcn"}});

  json m = manifest("fit-gcn", c, d);
  m["model"] = "gcn";
  m["final_loss"] = r.loss_history.back();
  io::write_json((out / "manifest.json").string(), m);
  std::printf("gcn: %d epochs, loss %.4f -> %.4f\n", cfg.epochs, r.loss_history.front(), r.loss_history.back());
  return kOk;
}

int cmd_fit_w2v(const RunConfig& c) {
  const Dataset d = load_dataset(c);
  const TrainData t = train_data(c, d);
  const fs::path out = prepare_out(c);
  Word2VecSettings w = c.settings.w2v;
  w.sgns.track_loss = true;

  WalkConfig wc = w.walks;
  wc.seed = derive_seed(c.seeds.front(), 201);
  const WalkCorpus corpus = generate_walks(t.train, wc);
  if (c.save_walks) write_walks(corpus, t.train, (out / "walks.txt").string());
  sgns::SgnsConfig sc = w.sgns;
  sc.seed = derive_seed(c.seeds.front(), 202);
  sgns::SgnsResult r = sgns::train_sgns(corpus, t.train.num_nodes(), sc);
  r.embeddings.labels = t.train.labels();

  io::write_embeddings((out / "embeddings").string(), r.embeddings, {{"model", "word2vec"}});
  write_history(out / "history.csv", r.epoch_loss);
  json m = manifest("fit-w2v", c, d);
  m["model"] = "word2vec";
  m["dim"] = sc.dim;
  m["window"] = sc.window;
  m["walks"] = wc.walks_per_node;
  m["length"] = wc.walk_length;
  io::write_json((out / "manifest.json").string(), m);
  std::printf("word2vec: %zu walks, %zu tokens, dim %d\n", corpus.num_walks(), corpus.num_tokens(), sc.dim);
  return kOk;
}

int cmd_fit_mlp(const RunConfig& c) {
  const Dataset d = load_dataset(c);
  const TrainData t = train_data(c, d);
  if (c.embeddings.empty()) throw InputError("fit-mlp needs --embeddings <base>");
  const sgns::EmbeddingMatrix emb = io::read_embeddings(c.embeddings);
  if (emb.labels != t.train.labels()) throw InputError("embedding rows do not match the dataset nodes");
  const mlp::MlpResult r = fit_edge_mlp(t.train, emb, c.settings.w2v, c.seeds.front());
  const fs::path out = prepare_out(c);

  io::Checkpoint ck;
  ck.blocks = {{"hidden.weight", r.params.hidden.weight},
               {"hidden.bias", column(r.params.hidden.bias)},
               {"output.weight", r.params.output.weight},
               {"output.bias", column(r.params.output.bias)}};
  io::add_optimizer(ck, r.optimizer);
  ck.meta["model"] = "mlp";
  ck.meta["features"] = c.features;
  io::write_checkpoint((out / "checkpoint").string(), ck);
  write_history(out / "history.csv", r.loss_history);

  json m = manifest("fit-mlp", c, d);
  m["model"] = "mlp";
  m["embeddings"] = fs::absolute(c.embeddings).string();
  io::write_json((out / "manifest.json").string(), m);
  std::printf("mlp: %zu epochs, loss %.4f -> %.4f\n", r.loss_history.size(), r.loss_history.front(),
              r.loss_history.back());
  return kOk;
}

std::vector<Dyad> read_pairs(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::unordered_map<std::int64_t, NodeId> index;
  for (NodeId v = 0; v < g.num_nodes(); ++v) index.emplace(g.label(v), v);
  std::vector<Dyad> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::int64_t a, b;
    if (!(ls >> a >> b)) throw ParseError(lineno, "expected two node ids");
    const auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) throw InputError("unknown node in " + path);
    if (ia->second == ib->second) throw InputError("self pair in " + path);
    out.emplace_back(ia->second, ib->second);
  }
  return out;
}

int cmd_predict(const RunConfig& c) {
  const Dataset d = load_dataset(c);
  const TrainData t = train_data(c, d);
  if (c.run.empty()) throw InputError("predict needs --run <fit directory>");
  const fs::path run(c.run);
  const json rm = io::read_json((run / "manifest.json").string());
  const std::string model = rm.value("model", "");

  std::vector<Dyad> dyads;
  std::size_t n_pos = 0;
  if (t.split) {
    dyads = t.split->test_pos;
    n_pos = dyads.size();
    dyads.insert(dyads.end(), t.split->test_neg.begin(), t.split->test_neg.end());
  } else if (!c.pairs.empty()) {
    dyads = read_pairs(c.pairs, d.graph);
  } else {
    throw InputError("predict needs --split or --pairs");
  }

  std::vector<double> scores;
  if (model == "ergm") {
    const ergm::ErgmModel em = io::model_from_json(io::read_json((run / "model.json").string()));
    scores = ergm::predict_dyads(em, t.train, dyads);
  } else if (model == "gcn") {
    const io::Checkpoint ck = io::read_checkpoint((run / "checkpoint").string());
    const gcn::GcnParams p{ck.at("features"), ck.at("w0"), ck.at("w1")};
    if (p.features.rows() != static_cast<Eigen::Index>(t.train.num_nodes()))
      throw InputError("checkpoint does not match the dataset node count");
    const nn::Matrix z = gcn::gcn_forward(p, gcn::normalize_adjacency(t.train));
    const nn::Vector logits = gcn::decode_edges(z, dyads);
    for (Eigen::Index i = 0; i < logits.size(); ++i) scores.push_back(nn::sigmoid(logits(i)));
  } else if (model == "mlp") {
    const io::Checkpoint ck = io::read_checkpoint((run / "checkpoint").string());
    mlp::MlpParams p;
    p.hidden = {ck.at("hidden.weight"), ck.at("hidden.bias").col(0), nn::Activation::ReLU};
    p.output = {ck.at("output.weight"), ck.at("output.bias").col(0), nn::Activation::Identity};
    const sgns::EmbeddingMatrix emb = io::read_embeddings(rm.at("embeddings").get<std::string>());
    const auto mode = mlp::parse_feature_mode(ck.meta.value("features", "hadamard"));
    const nn::Vector probs = mlp::predict_mlp(p, mlp::edge_features(emb.input, dyads, mode));
    scores.assign(probs.data(), probs.data() + probs.size());
  } else {
    throw InputError("run " + c.run + " holds no predictor (model '" + model + "')");
  }

  const fs::path out = prepare_out(c);
  std::ostringstream csv;
  csv << "u,v,score\n";
  char buf[64];
  for (std::size_t k = 0; k < dyads.size(); ++k) {
    std::snprintf(buf, sizeof buf, ",%.10g\n", scores[k]);
    csv << d.graph.label(dyads[k].u) << ',' << d.graph.label(dyads[k].v) << buf;
  }
  io::write_text((out / "predictions.csv").string(), csv.str());

  json m = manifest("predict", c, d);
  m["model"] = model;
  m["run"] = c.run;
  if (t.split) {
    const std::span<const double> all(scores);
    eval::EvalReport r;
    r.model = model;
    r.dataset = dataset_name(c.dataset);
    r.seed = t.split->seed;
    const eval::RocResult roc = eval::roc_auc(all.first(n_pos), all.subspan(n_pos));
    r.auc = roc.auc;
    r.roc = roc.points;
    r.confusion = eval::confusion(all.first(n_pos), all.subspan(n_pos));
    io::write_json((out / "report.json").string(), io::report_to_json(r));
    io::write_text((out / ("roc-" + model + ".svg")).string(), eval::roc_svg(r));
    m["auc"] = r.auc;
    std::printf("%s: AUC %.4f on %zu dyads\n", model.c_str(), r.auc, dyads.size());
  } else {
    std::printf("%s: scored %zu dyads\n", model.c_str(), dyads.size());
  }
  io::write_json((out / "manifest.json").string(), m);
  return kOk;
}

int cmd_benchmark(const RunConfig& c) {
  const Dataset d = load_dataset(c);
  BenchmarkConfig bc;
  bc.dataset = dataset_name(c.dataset);
  bc.models.clear();
  for (const auto& m : c.models) bc.models.push_back(parse_model(m));
  bc.test_frac = c.test_frac;
  bc.seeds = c.seeds;
  bc.settings = c.settings;
  bc.threads = c.threads;
  bc.deterministic = c.deterministic;
  const BenchmarkResult r = run_benchmark(d.graph, bc);

  const fs::path out = prepare_out(c);
  io::write_text((out / "summary.csv").string(), summary_csv(bc.dataset, r, !c.deterministic));

  json report{{"dataset", bc.dataset}, {"reports", json::array()}, {"summary", json::array()}};
  for (const auto& rep : r.reports) report["reports"].push_back(io::report_to_json(rep));
  for (const auto& s : r.summary)
    report["summary"].push_back({{"model", to_string(s.model)},
                                 {"runs", s.runs},
                                 {"auc_mean", s.auc_mean},
                                 {"auc_sd", s.auc_sd},
                                 {"seconds_mean", s.seconds_mean}});
  io::write_json((out / "report.json").string(), report);

  for (ModelKind k : bc.models)
    for (const auto& rep : r.reports)
      if (rep.model == to_string(k) && rep.ok) {
        io::write_text((out / ("roc-" + rep.model + ".svg")).string(), eval::roc_svg(rep));
        break;
      }

  json m = manifest("benchmark", c, d);
  io::write_json((out / "manifest.json").string(), m);

  bool any_ok = false;
  for (const auto& rep : r.reports) {
    if (rep.ok) {
      any_ok = true;
      std::printf("%-9s seed %-6llu AUC %.4f  fit %.2fs  predict %.2fs\n", rep.model.c_str(),
                  static_cast<unsigned long long>(rep.seed), rep.auc, rep.fit_seconds, rep.predict_seconds);
    } else {
      std::printf("%-9s seed %-6llu FAILED: %s\n", rep.model.c_str(), static_cast<unsigned long long>(rep.seed),
                  rep.error.c_str());
    }
  }
  for (const auto& s : r.summary)
    if (s.runs > 0)
      std::printf("%-9s mean AUC %.4f +- %.4f over %zu seed(s)\n", to_string(s.model).c_str(), s.auc_mean, s.auc_sd,
                  s.runs);
  return any_ok ? kOk : kModelFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link prediction on undirected collaboration networks"};
  app.set_version_flag("--version", LINKPRED_VERSION);
  app.require_subcommand(1);
  Flags flags;

  auto* stats = app.add_subcommand("stats", "graph statistics");
  add_common(stats, flags);
  flags.option(stats, "--degree-threshold", [](RunConfig& c) -> auto& { return c.degree_threshold; },
               "count nodes with degree above this");
  flags.option(stats, "--clique-budget", [](RunConfig& c) -> auto& { return c.clique_budget; },
               "seconds allowed for the exact clique search");

  auto* split = app.add_subcommand("split", "seeded train/test split with balanced negatives");
  add_common(split, flags);
  flags.option(split, "--test-frac", [](RunConfig& c) -> auto& { return c.test_frac; }, "held-out edge fraction");

  auto* fit_ergm = app.add_subcommand("fit-ergm", "fit an ERGM");
  add_common(fit_ergm, flags);
  add_split_input(fit_ergm, flags);
  add_ergm(fit_ergm, flags);

  auto* fit_gcn = app.add_subcommand("fit-gcn", "train the GCN link predictor");
  add_common(fit_gcn, flags);
  add_split_input(fit_gcn, flags);
  add_gcn(fit_gcn, flags);

  auto* fit_w2v = app.add_subcommand("fit-w2v", "random walks and skip-gram embeddings");
  add_common(fit_w2v, flags);
  add_split_input(fit_w2v, flags);
  add_w2v(fit_w2v, flags);
  flags.flag(fit_w2v, "--save-walks", [](RunConfig& c) -> auto& { return c.save_walks; }, "write walks.txt");

  auto* fit_mlp = app.add_subcommand("fit-mlp", "train the edge classifier on saved embeddings");
  add_common(fit_mlp, flags);
  add_split_input(fit_mlp, flags);
  add_mlp(fit_mlp, flags);
  flags.option(fit_mlp, "--embeddings", [](RunConfig& c) -> auto& { return c.embeddings; },
               "embedding base path (without .bin/.json)");

  auto* predict = app.add_subcommand("predict", "score dyads with a fitted run");
  add_common(predict, flags);
  add_split_input(predict, flags);
  flags.option(predict, "--run", [](RunConfig& c) -> auto& { return c.run; }, "directory of a fit-* run");
  flags.option(predict, "--pairs", [](RunConfig& c) -> auto& { return c.pairs; }, "file of node-id pairs to score");

  auto* bench = app.add_subcommand("benchmark", "fit and evaluate all models on shared splits");
  add_common(bench, flags);
  flags.option(bench, "--models", [](RunConfig& c) -> auto& { return c.models; }, "ergm, gcn, word2vec");
  flags.option(bench, "--test-frac", [](RunConfig& c) -> auto& { return c.test_frac; }, "held-out edge fraction");
  add_ergm(bench, flags);
  add_gcn(bench, flags);
  add_w2v(bench, flags);
  add_mlp(bench, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    RunConfig cfg = flags.resolve();
    validate(cfg);
    if (stats->parsed()) return cmd_stats(cfg);
    if (split->parsed()) return cmd_split(cfg);
    if (fit_ergm->parsed()) return cmd_fit_ergm(cfg);
    if (fit_gcn->parsed()) return cmd_fit_gcn(cfg);
    if (fit_w2v->parsed()) return cmd_fit_w2v(cfg);
    if (fit_mlp->parsed()) return cmd_fit_mlp(cfg);
    if (predict->parsed()) return cmd_predict(cfg);
    if (bench->parsed()) return cmd_benchmark(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "model failure: " << e.what() << '\n';
    return kModelFailure;
  }
  return kInputError;
}
