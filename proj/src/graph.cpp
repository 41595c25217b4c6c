#include "kgpath/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "kgpath/error.hpp"

namespace kgpath {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, delim)) out.push_back(field);
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

bool valid_semantic_type(const std::string& s) {
  if (s.size() != 4 || s[0] != 'T') return false;
  return std::isdigit(static_cast<unsigned char>(s[1])) &&
         std::isdigit(static_cast<unsigned char>(s[2])) &&
         std::isdigit(static_cast<unsigned char>(s[3]));
}

[[noreturn]] void line_error(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw IoError(msg(path, ":", line_no, ": ", what));
}

}  // namespace

bool ConceptId::valid(const std::string& s) {
  if (s.size() != 8 || s[0] != 'C') return false;
  for (std::size_t i = 1; i < 8; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

ConceptId ConceptId::parse(const std::string& s) {
  if (!valid(s)) throw Error(msg("bad concept id: '", s, "'"));
  return ConceptId{s};
}

bool Subgraph::contains(const ConceptId& id) const {
  return std::binary_search(nodes.begin(), nodes.end(), id);
}

const Concept& KnowledgeGraph::concept_at(const ConceptId& id) const {
  auto it = concepts_.find(id);
  if (it == concepts_.end()) {
    throw NotFoundError(msg("unknown concept: ", id.value));
  }
  return it->second;
}

std::vector<ConceptId> KnowledgeGraph::concept_ids() const {
  std::vector<ConceptId> out;
  out.reserve(concepts_.size());
  for (const auto& [id, _] : concepts_) out.push_back(id);
  return out;
}

std::vector<const Concept*> KnowledgeGraph::concepts() const {
  std::vector<const Concept*> out;
  out.reserve(concepts_.size());
  for (const auto& [_, c] : concepts_) out.push_back(&c);
  return out;
}

const std::vector<Edge>& KnowledgeGraph::out_edges(const ConceptId& v) const {
  static const std::vector<Edge> kEmpty;
  if (!has(v)) throw NotFoundError(msg("unknown concept: ", v.value));
  auto it = adjacency_.find(v);
  return it == adjacency_.end() ? kEmpty : it->second;
}

std::vector<Edge> KnowledgeGraph::neighbors(const ConceptId& v) const {
  std::vector<Edge> out = out_edges(v);
  out.push_back(Edge{RelationType{kSelfRelation}, v});
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t KnowledgeGraph::relation_index(const std::string& label) const {
  auto it = std::lower_bound(relation_vocab_.begin(), relation_vocab_.end(), label);
  if (it == relation_vocab_.end() || *it != label) {
    throw NotFoundError(msg("relation not in vocabulary: '", label, "'"));
  }
  return static_cast<std::size_t>(it - relation_vocab_.begin());
}

KnowledgeGraph KnowledgeGraph::load(
    const std::string& concepts_path, const std::string& triples_path,
    const std::vector<std::string>& relation_allowlist, LoadReport* report) {
  if (relation_allowlist.empty()) {
    throw ConfigError("relation allowlist must not be empty");
  }

  KnowledgeGraph g;
  LoadReport rep;

  {
    std::ifstream in(concepts_path);
    if (!in) throw IoError(msg("cannot open concepts file: ", concepts_path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = strip_cr(line);
      if (line.empty() || line[0] == '#') continue;
      auto fields = split(line, '\t');
      if (fields.size() < 3 || fields.size() > 4) {
        line_error(concepts_path, line_no,
                   msg("expected 3 or 4 tab-separated fields, got ", fields.size()));
      }
      if (!ConceptId::valid(fields[0])) {
        line_error(concepts_path, line_no, msg("bad concept id '", fields[0], "'"));
      }
      Concept c;
      c.id = ConceptId{fields[0]};
      for (const auto& st : split(fields[1], ',')) {
        if (st.empty()) continue;
        if (!valid_semantic_type(st)) {
          line_error(concepts_path, line_no, msg("bad semantic type '", st, "'"));
        }
        c.semantic_types.push_back(st);
      }
      if (fields[2].empty()) {
        line_error(concepts_path, line_no, "empty preferred name");
      }
      c.names.push_back(fields[2]);
      if (fields.size() == 4 && !fields[3].empty()) {
        for (const auto& alias : split(fields[3], '|')) {
          if (!alias.empty()) c.names.push_back(alias);
        }
      }
      if (g.concepts_.count(c.id) > 0) {
        line_error(concepts_path, line_no, msg("duplicate concept id ", c.id.value));
      }
      g.concepts_.emplace(c.id, std::move(c));
    }
  }
  rep.concepts = g.concepts_.size();

  const std::set<std::string> allowed(relation_allowlist.begin(),
                                      relation_allowlist.end());

  std::set<Triple> seen;
  std::set<std::string> unknown_ids;
  {
    std::ifstream in(triples_path);
    if (!in) throw IoError(msg("cannot open triples file: ", triples_path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = strip_cr(line);
      if (line.empty() || line[0] == '#') continue;
      auto fields = split(line, '\t');
      if (fields.size() != 3) {
        line_error(triples_path, line_no,
                   msg("expected 3 tab-separated fields, got ", fields.size()));
      }
      if (!ConceptId::valid(fields[0])) {
        line_error(triples_path, line_no, msg("bad concept id '", fields[0], "'"));
      }
      if (!ConceptId::valid(fields[2])) {
        line_error(triples_path, line_no, msg("bad concept id '", fields[2], "'"));
      }
      if (fields[1].empty()) {
        line_error(triples_path, line_no, "empty relation label");
      }
      Triple t{ConceptId{fields[0]}, fields[1], ConceptId{fields[2]}};
      if (g.concepts_.count(t.src) == 0) unknown_ids.insert(t.src.value);
      if (g.concepts_.count(t.dst) == 0) unknown_ids.insert(t.dst.value);
      if (!unknown_ids.empty()) continue;  // keep scanning to list them all

      // Self-loops are an implicit graph-wide convention; a materialized one
      // is redundant with it.
      if (t.rel == kSelfRelation) {
        ++rep.deduped;
        continue;
      }
      if (allowed.count(t.rel) == 0) {
        ++rep.dropped;
        continue;
      }
      if (!seen.insert(t).second) {
        ++rep.deduped;
        continue;
      }
      g.adjacency_[t.src].push_back(Edge{RelationType{t.rel}, t.dst});
      ++rep.kept;
    }
  }
  if (!unknown_ids.empty()) {
    std::string joined;
    for (const auto& id : unknown_ids) {
      if (!joined.empty()) joined += ", ";
      joined += id;
    }
    throw IoError(msg(triples_path, ": triples reference unknown concept ids: ",
                      joined));
  }

  for (auto& [_, edges] : g.adjacency_) std::sort(edges.begin(), edges.end());

  std::set<std::string> vocab(allowed);
  vocab.insert(kSelfRelation);
  g.relation_vocab_.assign(vocab.begin(), vocab.end());

  if (report != nullptr) *report = rep;
  return g;
}

Subgraph KnowledgeGraph::one_hop_subgraph(const std::set<ConceptId>& sources) const {
  return expand_subgraph(sources, 1);
}

Subgraph KnowledgeGraph::expand_subgraph(const std::set<ConceptId>& sources,
                                         std::size_t hops) const {
  if (sources.empty()) {
    throw Error("subgraph retrieval: empty source set");
  }
  for (const auto& s : sources) {
    if (!has(s)) throw NotFoundError(msg("unknown source concept: ", s.value));
  }

  std::map<ConceptId, std::size_t> depth;
  std::vector<ConceptId> frontier(sources.begin(), sources.end());
  for (const auto& s : sources) depth[s] = 0;

  std::set<Triple> edge_set;
  for (std::size_t d = 0; d < hops && !frontier.empty(); ++d) {
    std::vector<ConceptId> next;
    for (const auto& v : frontier) {
      for (const Edge& e : out_edges(v)) {
        edge_set.insert(Triple{v, e.rel.label, e.dst});
        if (depth.emplace(e.dst, d + 1).second) next.push_back(e.dst);
      }
    }
    frontier = std::move(next);
  }

  Subgraph sg;
  for (const auto& [id, _] : depth) sg.nodes.push_back(id);
  sg.edges.assign(edge_set.begin(), edge_set.end());
  for (const Triple& t : sg.edges) {
    sg.in_edges[t.dst].emplace_back(t.rel, t.src);
  }
  for (auto& [_, ins] : sg.in_edges) std::sort(ins.begin(), ins.end());
  return sg;
}

std::string KnowledgeGraph::serialize() const {
  std::ostringstream os;
  for (const auto& [id, c] : concepts_) {
    os << "concept\t" << id.value << '\t';
    for (std::size_t i = 0; i < c.semantic_types.size(); ++i) {
      if (i) os << ',';
      os << c.semantic_types[i];
    }
    os << '\t';
    for (std::size_t i = 0; i < c.names.size(); ++i) {
      if (i) os << '|';
      os << c.names[i];
    }
    os << '\n';
  }
  for (const auto& [src, edges] : adjacency_) {
    for (const Edge& e : edges) {
      os << "edge\t" << src.value << '\t' << e.rel.label << '\t' << e.dst.value
         << '\n';
    }
  }
  os << "relations\t";
  for (std::size_t i = 0; i < relation_vocab_.size(); ++i) {
    if (i) os << ',';
    os << relation_vocab_[i];
  }
  os << '\n';
  return os.str();
}

std::vector<std::string> load_relation_allowlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(msg("cannot open relation allowlist: ", path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    // trim surrounding spaces
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t");
    line = line.substr(b, e - b + 1);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace kgpath
