#pragma once

#include <cstdint>
#include <memory>

#include "kgpath/encoder.hpp"
#include "kgpath/nn.hpp"

namespace kgpath {

enum class ScoreVariant { MultiAttn, TriAttn };

ScoreVariant parse_variant(const std::string& name);
std::string variant_name(ScoreVariant v);

struct ModelConfig {
  std::size_t embed_dim = 64;       // provider dim, also GIN node dim
  std::size_t gin_layers = 2;       // K
  std::size_t model_dim = 64;       // path/scoring dim
  std::size_t heads = 4;            // MultiAttn heads
  std::size_t reduced_dim = 64;     // TriAttn projection dim
  std::size_t trilinear_rank = 32;  // TriAttn factor rank
  std::size_t scorer_hidden = 32;   // head MLP width
  ScoreVariant variant = ScoreVariant::TriAttn;
  bool l2_normalize = true;
  WeightStage weight_stage = WeightStage::PreGin;

  void validate() const;
};

// All ranker-side parameters; raw pointers into the owning ParamStore.
struct RankerParams {
  Parameter* proj_text = nullptr;     // {d_model, embed_dim}
  Parameter* proj_concept = nullptr;  // {d_model, embed_dim}
  Parameter* proj_node = nullptr;     // {d_model, K * embed_dim}

  Parameter* path_w_h = nullptr;      // {d_model, d_model}
  Parameter* path_w_t = nullptr;      // {d_model, R + K * embed_dim}
  Mlp2 path_ffn;                      // d_model -> d_model

  MultiheadAttention mha;
  Affine sigma_multi;                 // d_model -> scorer_hidden
  Mlp2 phi_multi;                     // scorer_hidden -> 1

  Parameter* red_x = nullptr;         // {reduced_dim, d_model}
  Parameter* red_v = nullptr;
  Parameter* red_p = nullptr;
  TrilinearForm trilinear;            // rank x reduced_dim
  Affine sigma_tri;                   // 1 -> scorer_hidden
  Mlp2 phi_tri;                       // scorer_hidden -> 1
};

// Encoder + ranker parameters behind one store; creation order (and thus
// RNG consumption) is fixed, so a seed fully determines the initial weights.
struct Model {
  ModelConfig cfg;
  std::size_t rel_vocab = 0;
  ParamStore params;
  NodeEncoderModel encoder;
  RankerParams ranker;

  static std::unique_ptr<Model> create(const ModelConfig& cfg,
                                       std::size_t rel_vocab_size,
                                       std::uint64_t seed);
};

}  // namespace kgpath
