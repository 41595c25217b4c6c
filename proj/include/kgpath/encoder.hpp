#pragma once

#include <map>
#include <string>
#include <vector>

#include "kgpath/embedding.hpp"
#include "kgpath/graph.hpp"
#include "kgpath/nn.hpp"
#include "kgpath/tape.hpp"

namespace kgpath {

// All names of a concept joined by " [SEP] ", in stored order; the text a
// provider embeds to represent the concept.
struct ConceptNameDoc {
  ConceptId cui;
  std::string doc;
};

ConceptNameDoc build_concept_doc(const Concept& c);

// One GIN layer: h'_i = MLP((1 + eps) * h_i + sum over in-neighbors s of
// ReLU(W_rel [h_s; onehot(rel)])). Aggregation covers stored edges only;
// implicit self-loops belong to path exploration, not message passing.
struct GinLayer {
  Parameter* eps = nullptr;    // {1}
  Mlp2 mlp;                    // D -> D, hidden D
  Parameter* rel_w = nullptr;  // {D, D + R}
};

struct NodeEncoderModel {
  std::size_t dim = 0;        // D
  std::size_t rel_vocab = 0;  // R
  std::vector<GinLayer> layers;

  std::size_t depth() const { return layers.size(); }
  std::size_t stacked_dim() const { return dim * layers.size(); }

  static NodeEncoderModel create(ParamStore& store, Rng& rng,
                                 const std::string& prefix, std::size_t dim,
                                 std::size_t depth, std::size_t rel_vocab);
  // eps = 0, identity MLPs, zero relation projection: the layer maps
  // nonnegative states to themselves. Used as a degenerate baseline.
  static NodeEncoderModel identity(ParamStore& store, const std::string& prefix,
                                   std::size_t dim, std::size_t depth,
                                   std::size_t rel_vocab);
};

// Whether W_CUI scaling applies to the provider vectors before GIN, to the
// stacked output after it, or not at all.
enum class WeightStage { Off, PreGin, PostGin };

// Base h_i per concept: provider vector of the concept's name doc (exact key
// lookup first), L2-normalized on ingest, optionally scaled by W_CUI.
std::map<ConceptId, Tensor> encode_concepts(
    EmbeddingProvider& provider, const std::vector<const Concept*>& concepts,
    std::size_t expected_dim, const std::map<ConceptId, double>* wcui = nullptr,
    bool l2_normalize = true);

struct NodeEncodings {
  std::vector<ConceptId> nodes;  // sorted
  std::map<ConceptId, Var> base;
  std::vector<std::map<ConceptId, Var>> per_layer;
  std::map<ConceptId, Var> stacked;  // {depth * D}

  const Var& stacked_of(const ConceptId& id) const;
};

std::map<ConceptId, Var> gin_layer_forward(
    Tape& tape, const GinLayer& layer, const Subgraph& subgraph,
    const KnowledgeGraph& graph, const std::map<ConceptId, Var>& states);

// Applies all layers in order and concatenates the per-layer states.
NodeEncodings stack_gin(Tape& tape, const NodeEncoderModel& model,
                        const Subgraph& subgraph, const KnowledgeGraph& graph,
                        const std::map<ConceptId, Var>& base);

}  // namespace kgpath
