#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace kgpath {

// Concept identifier: "C" followed by 7 decimal digits. Comparison is
// case-sensitive byte order, which also fixes every tie-break in the engine.
struct ConceptId {
  std::string value;

  static bool valid(const std::string& s);
  // Throws on malformed ids, naming the offender.
  static ConceptId parse(const std::string& s);

  auto operator<=>(const ConceptId&) const = default;
};

inline const std::string kSelfRelation = "self";

struct Concept {
  ConceptId id;
  std::vector<std::string> names;           // names[0] is the preferred name
  std::vector<std::string> semantic_types;  // "T" + 3 digits

  const std::string& preferred_name() const { return names.front(); }
};

struct RelationType {
  std::string label;

  bool is_self_loop() const { return label == kSelfRelation; }
  auto operator<=>(const RelationType&) const = default;
};

struct Triple {
  ConceptId src;
  std::string rel;
  ConceptId dst;

  auto operator<=>(const Triple&) const = default;
};

// Out-edge as stored in adjacency.
struct Edge {
  RelationType rel;
  ConceptId dst;

  auto operator<=>(const Edge&) const = default;
};

struct LoadReport {
  std::size_t concepts = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;  // relation outside the allowlist
  std::size_t deduped = 0;  // repeated triples, incl. redundant self-loops
};

// Nodes and real (stored) edges around a source set. Implicit self-loops are
// a graph-wide convention and are not materialized here; path exploration
// synthesizes them and GIN aggregation ignores them.
struct Subgraph {
  std::vector<ConceptId> nodes;  // sorted
  std::vector<Triple> edges;     // sorted (src, rel, dst)

  // dst -> (rel label, src) pairs, sorted; the in-neighbor view used by GIN.
  std::map<ConceptId, std::vector<std::pair<std::string, ConceptId>>> in_edges;

  bool contains(const ConceptId& id) const;
};

// Immutable after load; safe for unlimited concurrent readers.
class KnowledgeGraph {
 public:
  static KnowledgeGraph load(const std::string& concepts_path,
                             const std::string& triples_path,
                             const std::vector<std::string>& relation_allowlist,
                             LoadReport* report = nullptr);

  bool has(const ConceptId& id) const { return concepts_.count(id) > 0; }
  const Concept& concept_at(const ConceptId& id) const;
  std::size_t concept_count() const { return concepts_.size(); }
  std::vector<ConceptId> concept_ids() const;
  std::vector<const Concept*> concepts() const;

  // Stored out-edges plus the implicit (self, v) entry, sorted by
  // (relation label, dst id).
  std::vector<Edge> neighbors(const ConceptId& v) const;
  // Stored out-edges only, same order, no self entry.
  const std::vector<Edge>& out_edges(const ConceptId& v) const;

  // One-hot vocabulary: sorted distinct relation labels ("self" included).
  const std::vector<std::string>& relation_vocab() const { return relation_vocab_; }
  std::size_t relation_index(const std::string& label) const;

  Subgraph one_hop_subgraph(const std::set<ConceptId>& sources) const;
  // Union of one-hop expansions out to the given hop count; the working
  // subgraph for encoding and exploration.
  Subgraph expand_subgraph(const std::set<ConceptId>& sources,
                           std::size_t hops) const;

  // Deterministic snapshot: identical inputs produce identical bytes.
  std::string serialize() const;

 private:
  std::map<ConceptId, Concept> concepts_;
  std::map<ConceptId, std::vector<Edge>> adjacency_;
  std::vector<std::string> relation_vocab_;
};

// One label per line, '#' comments and blank lines ignored.
std::vector<std::string> load_relation_allowlist(const std::string& path);

}  // namespace kgpath
