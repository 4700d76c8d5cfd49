#include "linkpred/io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "linkpred/error.hpp"

namespace linkpred::io {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

json to_json(const GraphStats& s) {
  return {{"n", s.n},
          {"m", s.m},
          {"density", s.density},
          {"mean_degree", s.mean_degree},
          {"max_degree", s.max_degree},
          {"degree_threshold", s.degree_threshold},
          {"high_degree_count", s.high_degree_count},
          {"components", s.components},
          {"giant_size", s.giant_size},
          {"giant_fraction", s.giant_fraction},
          {"diameter", s.diameter},
          {"max_clique", s.max_clique},
          {"max_clique_exact", s.clique_exact},
          {"clique_witness", s.clique_witness}};
}

namespace {

json dyads_to_json(const std::vector<Dyad>& dyads, const Graph& g) {
  json arr = json::array();
  for (const Dyad& d : dyads) arr.push_back({g.label(d.u), g.label(d.v)});
  return arr;
}

std::vector<Dyad> dyads_from_json(const json& arr, const Graph& g) {
  std::unordered_map<std::int64_t, NodeId> index;
  for (NodeId v = 0; v < g.num_nodes(); ++v) index.emplace(g.label(v), v);
  std::vector<Dyad> out;
  for (const json& pair : arr) {
    const auto a = index.find(pair.at(0).get<std::int64_t>());
    const auto b = index.find(pair.at(1).get<std::int64_t>());
    if (a == index.end() || b == index.end()) throw InputError("split refers to a node not in the graph");
    out.emplace_back(a->second, b->second);
  }
  return out;
}

}  // namespace

json split_to_json(const EdgeSplit& split, const Graph& original) {
  return {{"seed", split.seed},
          {"test_frac", split.test_frac},
          {"test_pos", dyads_to_json(split.test_pos, original)},
          {"test_neg", dyads_to_json(split.test_neg, original)}};
}

EdgeSplit split_from_json(const json& j, const Graph& original) {
  EdgeSplit split;
  split.seed = j.at("seed").get<std::uint64_t>();
  split.test_frac = j.at("test_frac").get<double>();
  split.test_pos = dyads_from_json(j.at("test_pos"), original);
  split.test_neg = dyads_from_json(j.at("test_neg"), original);

  std::vector<Dyad> held = split.test_pos;
  std::sort(held.begin(), held.end());
  std::vector<Dyad> rest;
  for (const Dyad& e : original.edges())
    if (!std::binary_search(held.begin(), held.end(), e)) rest.push_back(e);
  if (rest.size() + held.size() != original.num_edges()) throw InputError("split positives are not edges of the graph");
  split.train = Graph::from_edges(original.num_nodes(), rest, original.labels());
  return split;
}

json model_to_json(const ergm::ErgmModel& model) {
  json terms = json::array();
  for (const auto& t : model.spec.terms()) terms.push_back(t.name());
  json diag = json::object();
  for (const auto& [k, v] : model.diagnostics) diag[k] = v;
  return {{"terms", terms},          {"theta", model.theta},         {"std_errors", model.std_errors},
          {"estimator", model.estimator}, {"seed", model.seed},      {"iterations", model.iterations},
          {"converged", model.converged}, {"diagnostics", diag}};
}

ergm::ErgmModel model_from_json(const json& j) {
  ergm::ErgmModel m;
  std::vector<ergm::Term> terms;
  for (const json& t : j.at("terms")) terms.push_back(ergm::Term::parse(t.get<std::string>()));
  m.spec = ergm::StatSpec(std::move(terms));
  m.theta = j.at("theta").get<std::vector<double>>();
  if (m.theta.size() != m.spec.size()) throw InputError("model file: coefficient count does not match terms");
  m.std_errors = j.value("std_errors", std::vector<double>{});
  m.estimator = j.value("estimator", "");
  m.seed = j.value("seed", std::uint64_t{0});
  m.iterations = j.value("iterations", 0);
  m.converged = j.value("converged", false);
  return m;
}

json report_to_json(const eval::EvalReport& r) {
  json roc = json::array();
  for (const auto& p : r.roc) roc.push_back({p.fpr, p.tpr});
  const auto norm = r.confusion.row_normalized();
  json j = {{"model", r.model},
            {"dataset", r.dataset},
            {"seed", r.seed},
            {"ok", r.ok},
            {"fit_seconds", r.fit_seconds},
            {"predict_seconds", r.predict_seconds},
            {"total_seconds", r.total_seconds()}};
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["auc"] = r.auc;
  j["threshold"] = r.confusion.threshold;
  j["confusion"] = {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn}, {"fn", r.confusion.fn}};
  j["confusion_row_normalized"] = {{norm[0][0], norm[0][1]}, {norm[1][0], norm[1][1]}};
  j["roc"] = roc;
  return j;
}

const nn::Matrix& Checkpoint::at(const std::string& name) const {
  for (const auto& [n, m] : blocks)
    if (n == name) return m;
  throw InputError("checkpoint has no block '" + name + "'");
}

namespace {

void write_matrix(std::ofstream& out, const nn::Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

nn::Matrix read_matrix(std::ifstream& in, Eigen::Index rows, Eigen::Index cols) {
  nn::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      double v;
      if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw InputError("binary matrix file is truncated");
      m(i, j) = v;
    }
  return m;
}

}  // namespace

void write_checkpoint(const std::string& base, const Checkpoint& ckpt) {
  std::ofstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw InputError("cannot write " + base + ".bin");
  json blocks = json::array();
  std::size_t offset = 0;
  for (const auto& [name, m] : ckpt.blocks) {
    blocks.push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}, {"offset", offset}});
    write_matrix(bin, m);
    offset += static_cast<std::size_t>(m.size());
  }
  json manifest = ckpt.meta;
  manifest["format"] = "float64-le-rowmajor";
  manifest["blocks"] = blocks;
  write_json(base + ".json", manifest);
}

Checkpoint read_checkpoint(const std::string& base) {
  Checkpoint ckpt;
  ckpt.meta = read_json(base + ".json");
  std::ifstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw InputError("cannot open " + base + ".bin");
  for (const json& b : ckpt.meta.at("blocks"))
    ckpt.blocks.emplace_back(b.at("name").get<std::string>(),
                             read_matrix(bin, b.at("rows").get<Eigen::Index>(), b.at("cols").get<Eigen::Index>()));
  ckpt.meta.erase("blocks");
  ckpt.meta.erase("format");
  return ckpt;
}

void add_optimizer(Checkpoint& ckpt, const nn::Adam& adam) {
  ckpt.meta["optimizer"] = {{"name", "adam"},
                            {"lr", adam.learning_rate()},
                            {"beta1", adam.beta1()},
                            {"beta2", adam.beta2()},
                            {"epsilon", adam.epsilon()},
                            {"steps", adam.steps()},
                            {"blocks", adam.first_moments().size()}};
  for (std::size_t i = 0; i < adam.first_moments().size(); ++i) {
    ckpt.blocks.emplace_back("adam.m." + std::to_string(i), adam.first_moments()[i]);
    ckpt.blocks.emplace_back("adam.v." + std::to_string(i), adam.second_moments()[i]);
  }
}

void write_embeddings(const std::string& base, const sgns::EmbeddingMatrix& emb, const json& meta) {
  std::ofstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw InputError("cannot write " + base + ".bin");
  bin.write(reinterpret_cast<const char*>(emb.input.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(emb.input.size())));
  json side = meta;
  side["format"] = "float64-le-rowmajor";
  side["rows"] = emb.input.rows();
  side["dim"] = emb.input.cols();
  side["labels"] = emb.labels;
  write_json(base + ".json", side);
}

sgns::EmbeddingMatrix read_embeddings(const std::string& base) {
  const json side = read_json(base + ".json");
  sgns::EmbeddingMatrix emb;
  const auto rows = side.at("rows").get<Eigen::Index>();
  const auto dim = side.at("dim").get<Eigen::Index>();
  emb.labels = side.at("labels").get<std::vector<std::int64_t>>();
  emb.input.resize(rows, dim);
  std::ifstream bin(base + ".bin", std::ios::binary);
  if (!bin || !bin.read(reinterpret_cast<char*>(emb.input.data()),
                        static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(rows * dim))))
    throw InputError("cannot read embeddings from " + base + ".bin");
  return emb;
}

void write_embeddings_text(const std::string& path, const sgns::EmbeddingMatrix& emb) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  char buf[32];
  for (Eigen::Index i = 0; i < emb.input.rows(); ++i) {
    out << (emb.labels.empty() ? std::int64_t(i) : emb.labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index k = 0; k < emb.input.cols(); ++k) {
      std::snprintf(buf, sizeof buf, " %.9g", emb.input(i, k));
      out << buf;
    }
    out << '\n';
  }
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace linkpred::io
