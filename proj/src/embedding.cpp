#include "kgpath/embedding.hpp"

#include <fstream>

#include <json.hpp>

#include "kgpath/error.hpp"
#include "kgpath/rng.hpp"

namespace kgpath {

Tensor HashEmbeddingProvider::embed(const std::string& text) {
  Rng rng(splitmix64(seed_ ^ fnv1a64(text)));
  Tensor v = Tensor::zeros({dim_});
  for (std::size_t i = 0; i < dim_; ++i) v.at(i) = rng.normal();
  const double norm = l2_norm(v);
  if (norm > 0.0) {
    for (std::size_t i = 0; i < dim_; ++i) v.at(i) /= norm;
  }
  return v;
}

JsonlCacheProvider::JsonlCacheProvider(const std::string& jsonl_path) {
  std::ifstream in(jsonl_path);
  if (!in) throw IoError(msg("cannot open embedding cache: ", jsonl_path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(msg(jsonl_path, ":", line_no, ": bad JSON: ", e.what()));
    }
    if (!rec.contains("cui") || !rec.contains("vector")) {
      throw IoError(msg(jsonl_path, ":", line_no, ": need 'cui' and 'vector'"));
    }
    const std::string key = rec["cui"].get<std::string>();
    std::vector<double> values = rec["vector"].get<std::vector<double>>();
    if (values.empty()) {
      throw IoError(msg(jsonl_path, ":", line_no, ": empty vector"));
    }
    if (dim_ == 0) dim_ = values.size();
    if (values.size() != dim_) {
      throw IoError(msg(jsonl_path, ":", line_no, ": vector dim ",
                        values.size(), " != ", dim_));
    }
    Tensor t = Tensor::vector(std::move(values));
    check_finite(t, "embedding cache vector");
    table_.insert_or_assign(key, std::move(t));
  }
  if (table_.empty()) {
    throw IoError(msg("embedding cache is empty: ", jsonl_path));
  }
}

Tensor JsonlCacheProvider::embed(const std::string& text) {
  auto it = table_.find(text);
  if (it == table_.end()) {
    throw NotFoundError(
        msg("embedding cache has no entry for text of length ", text.size()));
  }
  return it->second;
}

std::optional<Tensor> JsonlCacheProvider::embed_key(const std::string& key) {
  auto it = table_.find(key);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

std::unique_ptr<EmbeddingProvider> make_hash_provider(std::size_t dim,
                                                      std::uint64_t seed) {
  return std::make_unique<HashEmbeddingProvider>(dim, seed);
}

}  // namespace kgpath
