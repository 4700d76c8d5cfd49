#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "linkpred/ergm.hpp"
#include "linkpred/eval.hpp"
#include "linkpred/graph.hpp"
#include "linkpred/nn.hpp"
#include "linkpred/sampling.hpp"
#include "linkpred/sgns.hpp"

namespace linkpred::io {

using nlohmann::json;

json to_json(const GraphStats& s);

/// Dyads are written as original node labels.
json split_to_json(const EdgeSplit& split, const Graph& original);
/// Rebuilds the split (train graph included) against the original graph.
EdgeSplit split_from_json(const json& j, const Graph& original);

json model_to_json(const ergm::ErgmModel& model);
ergm::ErgmModel model_from_json(const json& j);

json report_to_json(const eval::EvalReport& r);

/// Named dense blocks stored back to back as little-endian float64, row-major,
/// in `<base>.bin`, described by the manifest `<base>.json`.
struct Checkpoint {
  std::vector<std::pair<std::string, nn::Matrix>> blocks;
  json meta = json::object();

  const nn::Matrix& at(const std::string& name) const;
};

void write_checkpoint(const std::string& base, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::string& base);

/// Adds the optimizer moments as blocks "adam.m.<i>" / "adam.v.<i>" and its
/// hyperparameters to the manifest.
void add_optimizer(Checkpoint& ckpt, const nn::Adam& adam);

/// `<base>.bin` holds the input vectors (n x dim, float64 row-major);
/// `<base>.json` holds dim, node labels and `meta`.
void write_embeddings(const std::string& base, const sgns::EmbeddingMatrix& emb, const json& meta);
sgns::EmbeddingMatrix read_embeddings(const std::string& base);
/// One line per node: label followed by dim values.
void write_embeddings_text(const std::string& path, const sgns::EmbeddingMatrix& emb);

/// FNV-1a 64-bit hash of a file's bytes, as 16 hex digits.
std::string file_hash(const std::string& path);

void write_text(const std::string& path, const std::string& content);
json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

}  // namespace linkpred::io
