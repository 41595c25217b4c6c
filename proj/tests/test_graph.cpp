#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "kgpath/error.hpp"
#include "kgpath/graph.hpp"
#include "test_util.hpp"

using namespace kgpath;
using testutil::TempDir;

namespace {

const char* kConceptsTsv =
    "# id\ttypes\tpreferred\taliases\n"
    "C0000001\tT184\tFever\tPyrexia|Febrile\n"
    "C0000002\tT184\tCough\n"
    "C0000003\tT047\tSepsis\tSeptic syndrome\n"
    "C0000004\tT047\tPneumonia and influenza\n"
    "C0000005\tT047\tRespiratory distress syndrome\n"
    "C0000006\tT047\tLeukocytosis\n";

const char* kTriplesTsv =
    "C0000001\tassociated with\tC0000004\n"
    "C0000002\tassociated with\tC0000004\n"
    "C0000003\tcause of\tC0000005\n"
    "C0000004\tassociated with\tC0000005\n";

const std::vector<std::string> kAllow = {"associated with", "cause of",
                                         "has finding site"};

KnowledgeGraph toy_graph(const TempDir& dir, LoadReport* report = nullptr,
                         const char* triples = kTriplesTsv) {
  return KnowledgeGraph::load(dir.file("concepts.tsv", kConceptsTsv),
                              dir.file("triples.tsv", triples), kAllow, report);
}

}  // namespace

TEST_CASE("concept id format") {
  CHECK(ConceptId::valid("C0243026"));
  CHECK_FALSE(ConceptId::valid("c0243026"));
  CHECK_FALSE(ConceptId::valid("C024302"));
  CHECK_FALSE(ConceptId::valid("C02430261"));
  CHECK_FALSE(ConceptId::valid("C024302x"));
  CHECK_THROWS_AS(ConceptId::parse("nope"), Error);
}

TEST_CASE("load: minimal graph keeps allowed triples") {
  TempDir dir("graph_min");
  LoadReport rep;
  auto g = KnowledgeGraph::load(
      dir.file("c.tsv", "C0000001\tT184\tFever\nC0000002\tT047\tSepsis\n"),
      dir.file("t.tsv", "C0000001\tassociated with\tC0000002\n"), kAllow, &rep);
  CHECK(rep.kept == 1);
  CHECK(rep.dropped == 0);
  CHECK(rep.deduped == 0);
  CHECK(rep.concepts == 2);
  CHECK(g.out_edges(ConceptId{"C0000001"}).size() == 1);
}

TEST_CASE("load: relation outside allowlist is dropped and counted") {
  TempDir dir("graph_drop");
  LoadReport rep;
  auto g = KnowledgeGraph::load(
      dir.file("c.tsv", "C0000001\tT184\tFever\nC0000002\tT047\tSepsis\n"),
      dir.file("t.tsv", "C0000001\tinverse isa\tC0000002\n"), kAllow, &rep);
  CHECK(rep.kept == 0);
  CHECK(rep.dropped == 1);
  CHECK(g.out_edges(ConceptId{"C0000001"}).empty());
}

TEST_CASE("load: duplicate triple deduped") {
  TempDir dir("graph_dup");
  LoadReport rep;
  auto g = KnowledgeGraph::load(
      dir.file("c.tsv", "C0000001\tT184\tFever\nC0000002\tT047\tSepsis\n"),
      dir.file("t.tsv",
               "C0000001\tassociated with\tC0000002\n"
               "C0000001\tassociated with\tC0000002\n"),
      kAllow, &rep);
  CHECK(rep.kept == 1);
  CHECK(rep.deduped == 1);
  CHECK(g.out_edges(ConceptId{"C0000001"}).size() == 1);
}

TEST_CASE("load: malformed line names file and line number") {
  TempDir dir("graph_bad");
  const std::string path = dir.file("c.tsv", "C0000001\tT184\tFever\nbadline\n");
  try {
    KnowledgeGraph::load(path, dir.file("t.tsv", ""), kAllow);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    const std::string what = e.what();
    CHECK(what.find(path) != std::string::npos);
    CHECK(what.find(":2:") != std::string::npos);
  }
}

TEST_CASE("load: unknown CUIs in triples are listed") {
  TempDir dir("graph_unknown");
  try {
    KnowledgeGraph::load(
        dir.file("c.tsv", "C0000001\tT184\tFever\n"),
        dir.file("t.tsv",
                 "C0000001\tassociated with\tC0000009\n"
                 "C0000008\tcause of\tC0000001\n"),
        kAllow);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    const std::string what = e.what();
    CHECK(what.find("C0000009") != std::string::npos);
    CHECK(what.find("C0000008") != std::string::npos);
  }
}

TEST_CASE("load: empty allowlist rejected") {
  TempDir dir("graph_noallow");
  CHECK_THROWS_AS(KnowledgeGraph::load(dir.file("c.tsv", "C0000001\tT184\tF\n"),
                                       dir.file("t.tsv", ""), {}),
                  ConfigError);
}

TEST_CASE("neighbors: isolated node has only the implicit self-loop") {
  TempDir dir("graph_iso");
  auto g = toy_graph(dir);
  auto n = g.neighbors(ConceptId{"C0000006"});  // Leukocytosis, no out-edges
  REQUIRE(n.size() == 1);
  CHECK(n[0].rel.label == kSelfRelation);
  CHECK(n[0].rel.is_self_loop());
  CHECK(n[0].dst == ConceptId{"C0000006"});
}

TEST_CASE("neighbors: sorted with exactly one self entry") {
  TempDir dir("graph_nb");
  auto g = toy_graph(dir, nullptr,
                     "C0000004\tassociated with\tC0000005\n"
                     "C0000004\tcause of\tC0000001\n");
  auto n = g.neighbors(ConceptId{"C0000004"});
  REQUIRE(n.size() == 3);
  CHECK(n[0].rel.label == "associated with");
  CHECK(n[1].rel.label == "cause of");
  CHECK(n[2].rel.label == "self");

  std::size_t self_count = 0;
  for (const auto& e : n) self_count += e.rel.is_self_loop() ? 1 : 0;
  CHECK(self_count == 1);

  CHECK_THROWS_AS(g.neighbors(ConceptId{"C9999999"}), NotFoundError);
}

TEST_CASE("one-hop subgraph covers sources and their targets") {
  TempDir dir("graph_hop");
  auto g = toy_graph(dir);
  std::set<ConceptId> sources{ConceptId{"C0000001"}, ConceptId{"C0000002"},
                              ConceptId{"C0000003"}};
  auto sg = g.one_hop_subgraph(sources);

  CHECK(sg.contains(ConceptId{"C0000004"}));  // Pneumonia and influenza
  CHECK(sg.contains(ConceptId{"C0000005"}));  // Respiratory distress syndrome
  CHECK_FALSE(sg.contains(ConceptId{"C0000006"}));

  // Node set equals sources union edge targets.
  std::set<ConceptId> expected(sources);
  for (const auto& t : sg.edges) expected.insert(t.dst);
  CHECK(std::set<ConceptId>(sg.nodes.begin(), sg.nodes.end()) == expected);

  CHECK_THROWS_AS(g.one_hop_subgraph({}), Error);

  auto iso = g.one_hop_subgraph({ConceptId{"C0000006"}});
  CHECK(iso.nodes == std::vector<ConceptId>{ConceptId{"C0000006"}});
  CHECK(iso.edges.empty());
}

TEST_CASE("one-hop subgraph on random graphs matches brute-force union") {
  Rng rng(314);
  for (int trial = 0; trial < 10; ++trial) {
    TempDir dir("graph_rand" + std::to_string(trial));
    std::string concepts, triples;
    const std::size_t n = 10;
    for (std::size_t i = 0; i < n; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "C%07zu", i + 1);
      concepts += std::string(buf) + "\tT047\tnode " + std::to_string(i + 1) + "\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < 2; ++k) {
        char src[16], dst[16];
        std::snprintf(src, sizeof(src), "C%07zu", i + 1);
        std::snprintf(dst, sizeof(dst), "C%07zu", rng.index(n) + 1);
        triples += std::string(src) + "\tassociated with\t" + dst + "\n";
      }
    }
    auto g = KnowledgeGraph::load(dir.file("c.tsv", concepts),
                                  dir.file("t.tsv", triples), kAllow);

    const auto ids = g.concept_ids();
    std::set<ConceptId> all(ids.begin(), ids.end());
    auto sg = g.one_hop_subgraph(all);
    CHECK(std::set<ConceptId>(sg.nodes.begin(), sg.nodes.end()) == all);

    // Brute-force oracle: union of adjacency targets over a random subset.
    std::set<ConceptId> subset;
    for (const auto& id : all) {
      if (rng.chance(0.4)) subset.insert(id);
    }
    if (subset.empty()) subset.insert(*all.begin());
    std::set<ConceptId> expected(subset);
    for (const auto& s : subset) {
      for (const auto& e : g.out_edges(s)) expected.insert(e.dst);
    }
    auto sub = g.one_hop_subgraph(subset);
    CHECK(std::set<ConceptId>(sub.nodes.begin(), sub.nodes.end()) == expected);
  }
}

TEST_CASE("load determinism: identical files serialize identically") {
  TempDir dir("graph_det");
  auto g1 = toy_graph(dir);
  auto g2 = toy_graph(dir);
  CHECK(g1.serialize() == g2.serialize());
  CHECK(!g1.serialize().empty());
}

TEST_CASE("relation vocabulary: sorted, includes self, stable indices") {
  TempDir dir("graph_vocab");
  auto g = toy_graph(dir);
  const auto& vocab = g.relation_vocab();
  CHECK(std::is_sorted(vocab.begin(), vocab.end()));
  CHECK(std::find(vocab.begin(), vocab.end(), kSelfRelation) != vocab.end());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    CHECK(g.relation_index(vocab[i]) == i);
  }
  CHECK_THROWS_AS(g.relation_index("made up relation"), NotFoundError);
}

TEST_CASE("materialized self triples are treated as redundant") {
  TempDir dir("graph_self");
  LoadReport rep;
  auto g = toy_graph(dir, &rep,
                     "C0000006\tself\tC0000006\n"
                     "C0000001\tassociated with\tC0000004\n");
  CHECK(rep.kept == 1);
  CHECK(rep.deduped == 1);
  // Still exactly one self entry in neighbors.
  auto n = g.neighbors(ConceptId{"C0000006"});
  CHECK(n.size() == 1);
}

TEST_CASE("expand subgraph walks out to the requested hop count") {
  TempDir dir("graph_expand");
  auto g = toy_graph(dir);
  std::set<ConceptId> src{ConceptId{"C0000001"}};
  auto one = g.expand_subgraph(src, 1);
  CHECK_FALSE(one.contains(ConceptId{"C0000005"}));
  auto two = g.expand_subgraph(src, 2);
  CHECK(two.contains(ConceptId{"C0000005"}));  // Fever -> PNA -> RDS
  // in-edge view matches edge list.
  std::size_t in_count = 0;
  for (const auto& [_, ins] : two.in_edges) in_count += ins.size();
  CHECK(in_count == two.edges.size());
}
