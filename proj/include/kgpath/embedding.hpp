#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "kgpath/tensor.hpp"

namespace kgpath {

// Source of fixed-dimension text embeddings. embed() must be deterministic
// per text. embed_key() is an optional exact-match lookup (concept id or
// note id) that file-backed providers implement; callers fall back to
// embed() when it returns nothing.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  virtual Tensor embed(const std::string& text) = 0;
  virtual std::optional<Tensor> embed_key(const std::string& key) {
    (void)key;
    return std::nullopt;
  }
};

// Test provider: a seeded hash of the text drives a gaussian draw projected
// to the unit sphere. Deterministic across runs and platforms.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  HashEmbeddingProvider(std::size_t dim, std::uint64_t seed)
      : dim_(dim), seed_(seed) {}

  std::size_t dim() const override { return dim_; }
  Tensor embed(const std::string& text) override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// Production provider: exact-match table of precomputed vectors loaded from
// JSONL records {"cui": <key>, "vector": [floats]}. Keys may be concept ids,
// note ids, or full texts; embed() looks the text itself up and fails loudly
// on a miss.
class JsonlCacheProvider : public EmbeddingProvider {
 public:
  explicit JsonlCacheProvider(const std::string& jsonl_path);

  std::size_t dim() const override { return dim_; }
  Tensor embed(const std::string& text) override;
  std::optional<Tensor> embed_key(const std::string& key) override;
  std::size_t size() const { return table_.size(); }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, Tensor> table_;
};

std::unique_ptr<EmbeddingProvider> make_hash_provider(std::size_t dim,
                                                      std::uint64_t seed);

}  // namespace kgpath
