#include "kgpath/encoder.hpp"

#include "kgpath/error.hpp"

namespace kgpath {

ConceptNameDoc build_concept_doc(const Concept& c) {
  if (c.names.empty()) throw Error(msg("concept ", c.id.value, " has no names"));
  ConceptNameDoc doc;
  doc.cui = c.id;
  for (std::size_t i = 0; i < c.names.size(); ++i) {
    if (i) doc.doc += " [SEP] ";
    doc.doc += c.names[i];
  }
  return doc;
}

NodeEncoderModel NodeEncoderModel::create(ParamStore& store, Rng& rng,
                                          const std::string& prefix,
                                          std::size_t dim, std::size_t depth,
                                          std::size_t rel_vocab) {
  if (depth == 0) throw ConfigError("node encoder needs at least one layer");
  NodeEncoderModel m;
  m.dim = dim;
  m.rel_vocab = rel_vocab;
  for (std::size_t k = 0; k < depth; ++k) {
    const std::string p = prefix + ".gin" + std::to_string(k);
    GinLayer layer;
    layer.eps = &store.create(p + ".eps", Tensor::zeros({1}));
    layer.mlp = Mlp2::create(store, rng, p + ".mlp", dim, dim, dim);
    layer.rel_w = &store.create(p + ".rel_w",
                                xavier_uniform(rng, dim, dim + rel_vocab));
    m.layers.push_back(layer);
  }
  return m;
}

NodeEncoderModel NodeEncoderModel::identity(ParamStore& store,
                                            const std::string& prefix,
                                            std::size_t dim, std::size_t depth,
                                            std::size_t rel_vocab) {
  NodeEncoderModel m;
  m.dim = dim;
  m.rel_vocab = rel_vocab;
  for (std::size_t k = 0; k < depth; ++k) {
    const std::string p = prefix + ".gin" + std::to_string(k);
    GinLayer layer;
    layer.eps = &store.create(p + ".eps", Tensor::zeros({1}));
    layer.mlp = Mlp2::identity(store, p + ".mlp", dim);
    layer.rel_w = &store.create(p + ".rel_w", Tensor::zeros({dim, dim + rel_vocab}));
    m.layers.push_back(layer);
  }
  return m;
}

std::map<ConceptId, Tensor> encode_concepts(
    EmbeddingProvider& provider, const std::vector<const Concept*>& concepts,
    std::size_t expected_dim, const std::map<ConceptId, double>* wcui,
    bool l2_normalize) {
  if (provider.dim() != expected_dim) {
    throw ConfigError(msg("embedding provider dim ", provider.dim(),
                          " != configured dim ", expected_dim));
  }
  std::map<ConceptId, Tensor> out;
  for (const Concept* c : concepts) {
    Tensor v;
    if (auto cached = provider.embed_key(c->id.value)) {
      v = std::move(*cached);
    } else {
      v = provider.embed(build_concept_doc(*c).doc);
    }
    if (v.numel() != expected_dim) {
      throw ConfigError(msg("embedding for ", c->id.value, " has dim ",
                            v.numel(), ", want ", expected_dim));
    }
    if (l2_normalize) {
      const double norm = l2_norm(v);
      if (norm > 0.0) v = t_scale(v, 1.0 / norm);
    }
    if (wcui != nullptr) {
      auto it = wcui->find(c->id);
      const double w = it == wcui->end() ? 0.0 : it->second;
      v = t_scale(v, w);
    }
    out.emplace(c->id, std::move(v));
  }
  return out;
}

const Var& NodeEncodings::stacked_of(const ConceptId& id) const {
  auto it = stacked.find(id);
  if (it == stacked.end()) {
    throw NotFoundError(msg("no encoding for concept ", id.value));
  }
  return it->second;
}

std::map<ConceptId, Var> gin_layer_forward(
    Tape& tape, const GinLayer& layer, const Subgraph& subgraph,
    const KnowledgeGraph& graph, const std::map<ConceptId, Var>& states) {
  for (const ConceptId& node : subgraph.nodes) {
    if (states.count(node) == 0) {
      throw NotFoundError(msg("gin layer: node ", node.value, " has no state"));
    }
  }
  const std::size_t rel_vocab = graph.relation_vocab().size();
  Var eps = tape.param(*layer.eps);
  Var w_rel = tape.param(*layer.rel_w);

  std::map<ConceptId, Var> next;
  for (const ConceptId& node : subgraph.nodes) {
    Var self_term = tape.add(states.at(node),
                             tape.scale_var(states.at(node), eps));
    Var combined = self_term;
    auto in_it = subgraph.in_edges.find(node);
    if (in_it != subgraph.in_edges.end()) {
      for (const auto& [rel, src] : in_it->second) {
        Tensor onehot = Tensor::zeros({rel_vocab});
        onehot.at(graph.relation_index(rel)) = 1.0;
        Var message = tape.concat({states.at(src), tape.constant(onehot)});
        Var projected = tape.relu(tape.matvec(w_rel, message));
        combined = tape.add(combined, projected);
      }
    }
    next.emplace(node, mlp2(tape, layer.mlp, combined));
  }
  return next;
}

NodeEncodings stack_gin(Tape& tape, const NodeEncoderModel& model,
                        const Subgraph& subgraph, const KnowledgeGraph& graph,
                        const std::map<ConceptId, Var>& base) {
  NodeEncodings enc;
  enc.nodes = subgraph.nodes;
  enc.base = base;
  std::map<ConceptId, Var> states = base;
  for (const GinLayer& layer : model.layers) {
    states = gin_layer_forward(tape, layer, subgraph, graph, states);
    enc.per_layer.push_back(states);
  }
  for (const ConceptId& node : subgraph.nodes) {
    std::vector<Var> parts;
    parts.reserve(enc.per_layer.size());
    for (const auto& layer_states : enc.per_layer) {
      parts.push_back(layer_states.at(node));
    }
    enc.stacked.emplace(node, parts.size() == 1 ? parts[0] : tape.concat(parts));
  }
  return enc;
}

}  // namespace kgpath
