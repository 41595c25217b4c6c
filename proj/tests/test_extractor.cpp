#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kgpath/error.hpp"
#include "kgpath/extractor.hpp"
#include "test_util.hpp"

using namespace kgpath;

namespace {

Concept make_concept(const std::string& id, std::vector<std::string> names,
                     std::vector<std::string> types = {"T047"}) {
  Concept c;
  c.id = ConceptId{id};
  c.names = std::move(names);
  c.semantic_types = std::move(types);
  return c;
}

// Independent matcher: at every token position try every substring ending at
// a later token boundary (no max-length shortcut), take the longest indexed
// one, emit all candidate ids, continue after it.
std::vector<ExtractedMention> oracle_extract(const std::string& text,
                                             const VocabularyIndex& index) {
  std::vector<std::pair<std::size_t, std::size_t>> tokens;
  std::size_t i = 0;
  auto word = [&](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
  while (i < text.size()) {
    if (!word(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && word(static_cast<unsigned char>(text[j]))) ++j;
    tokens.emplace_back(i, j);
    i = j;
  }
  std::vector<ExtractedMention> out;
  std::size_t t = 0;
  while (t < tokens.size()) {
    std::ptrdiff_t best = -1;
    for (std::size_t last = t; last < tokens.size(); ++last) {
      const std::string surf =
          text.substr(tokens[t].first, tokens[last].second - tokens[t].first);
      if (index.by_surface.count(normalize_surface(surf)) > 0) {
        best = static_cast<std::ptrdiff_t>(last);
      }
    }
    if (best < 0) {
      ++t;
      continue;
    }
    const std::size_t start = tokens[t].first;
    const std::size_t end = tokens[static_cast<std::size_t>(best)].second;
    const std::string surf = text.substr(start, end - start);
    for (const auto& cui : index.by_surface.at(normalize_surface(surf))) {
      out.push_back(ExtractedMention{start, end, surf, cui});
    }
    t = static_cast<std::size_t>(best) + 1;
  }
  return out;
}

bool same_mentions(const std::vector<ExtractedMention>& a,
                   const std::vector<ExtractedMention>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].start != b[i].start || a[i].end != b[i].end ||
        !(a[i].cui == b[i].cui)) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("normalization: lowercase, collapse, strip") {
  CHECK(normalize_surface("Fever") == "fever");
  CHECK(normalize_surface("  Sepsis,  ") == "sepsis");
  CHECK(normalize_surface("Acute   Renal\tFailure") == "acute renal failure");
  CHECK(normalize_surface("...") == "");
  CHECK(normalize_surface("") == "");
}

TEST_CASE("vocab index: basics, ambiguity, normalization") {
  {
    auto index = build_vocab_index({make_concept("C0000001", {"Fever"})});
    REQUIRE(index.by_surface.count("fever") == 1);
    CHECK(index.by_surface.at("fever") ==
          std::vector<ConceptId>{ConceptId{"C0000001"}});
  }
  {
    auto index = build_vocab_index(
        {make_concept("C0000002", {"Common cold", "cold"}),
         make_concept("C0000001", {"Cold sensation", "cold"})});
    REQUIRE(index.by_surface.count("cold") == 1);
    CHECK(index.by_surface.at("cold") ==
          std::vector<ConceptId>{ConceptId{"C0000001"}, ConceptId{"C0000002"}});
  }
  {
    auto index = build_vocab_index({make_concept("C0000003", {"Sepsis", "  Sepsis,  "})});
    CHECK(index.by_surface.count("sepsis") == 1);
  }
  {
    auto index = build_vocab_index({make_concept("C0000004", {"valid", "..."})});
    CHECK(index.skipped_names == 1);
  }
  CHECK_THROWS_AS(build_vocab_index(std::vector<Concept>{}), Error);
}

TEST_CASE("extraction: offsets, longest match, empty cases") {
  auto index = build_vocab_index({make_concept("C0000001", {"fever"}),
                                  make_concept("C0000002", {"cough"})});
  const std::string text = "fever and cough";
  auto mentions = extract_concepts(text, index);
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0].start == 0);
  CHECK(mentions[0].end == 5);
  CHECK(mentions[0].surface == "fever");
  CHECK(mentions[0].cui == ConceptId{"C0000001"});
  CHECK(mentions[1].start == 10);
  CHECK(mentions[1].end == 15);

  CHECK(extract_concepts("", index).empty());
  CHECK(extract_concepts("no match here", index).empty());
}

TEST_CASE("extraction: prefers the longest indexed surface") {
  auto index = build_vocab_index(
      {make_concept("C0000001", {"renal failure"}),
       make_concept("C0000002", {"acute renal failure"})});
  auto mentions = extract_concepts("acute renal failure", index);
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].cui == ConceptId{"C0000002"});
  CHECK(mentions[0].surface == "acute renal failure");
  CHECK(same_mentions(mentions, oracle_extract("acute renal failure", index)));
}

TEST_CASE("extraction: ambiguous surface emits one mention per candidate") {
  auto index = build_vocab_index(
      {make_concept("C0000009", {"cold"}), make_concept("C0000001", {"cold"})});
  auto mentions = extract_concepts("a cold day", index);
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0].start == mentions[1].start);
  CHECK(mentions[0].cui == ConceptId{"C0000001"});
  CHECK(mentions[1].cui == ConceptId{"C0000009"});
}

TEST_CASE("extraction equals all-substrings oracle on random texts") {
  Rng rng(2024);
  const std::vector<std::string> vocab_words = {
      "fever", "cough", "sepsis", "acute", "renal", "failure",
      "chronic", "pain", "chest", "heart", "rate", "blood"};
  // Random multi-word vocabulary entries.
  std::vector<Concept> concepts;
  for (int c = 0; c < 12; ++c) {
    const std::size_t words = 1 + rng.index(3);
    std::string name;
    for (std::size_t w = 0; w < words; ++w) {
      if (w) name += " ";
      name += vocab_words[rng.index(vocab_words.size())];
    }
    char id[16];
    std::snprintf(id, sizeof(id), "C%07d", c + 1);
    concepts.push_back(make_concept(id, {name}));
  }
  auto index = build_vocab_index(concepts);

  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    const std::size_t len = 1 + rng.index(20);
    for (std::size_t w = 0; w < len && text.size() < 180; ++w) {
      if (w) text += rng.chance(0.2) ? ", " : " ";
      text += rng.chance(0.8) ? vocab_words[rng.index(vocab_words.size())]
                              : "filler";
    }
    auto got = extract_concepts(text, index);
    auto expected = oracle_extract(text, index);
    CHECK(same_mentions(got, expected));

    // Mentions sorted by start, non-overlapping (same-span ambiguity aside).
    for (std::size_t i = 1; i < got.size(); ++i) {
      CHECK(got[i - 1].start <= got[i].start);
      if (got[i - 1].start != got[i].start) {
        CHECK(got[i - 1].end <= got[i].start);
      }
    }
    // Pure function.
    CHECK(same_mentions(got, extract_concepts(text, index)));
  }
}

TEST_CASE("tfidf: single-note worked example gives weight 1") {
  // One note, one mention of one concept with a single semantic type:
  // idf = ln(2/2) + 1 = 1 for both, tf = 1, so W = (1*1) * (1*1) = 1.
  auto index = build_vocab_index({make_concept("C0000001", {"fever"})});
  auto mentions = extract_concepts("fever", index);
  std::map<ConceptId, std::vector<std::string>> types{
      {ConceptId{"C0000001"}, {"T184"}}};
  auto w = compute_tfidf_weights({{"note1", mentions}}, types);
  CHECK(w.weight(ConceptId{"C0000001"}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.weight(ConceptId{"C0000099"}) == 0.0);
}

TEST_CASE("tfidf: rarer concept gets strictly larger weight") {
  std::map<ConceptId, std::vector<std::string>> types{
      {ConceptId{"C0000001"}, {"T184"}}, {ConceptId{"C0000002"}, {"T184"}}};
  std::vector<NoteMentions> corpus;
  for (int n = 0; n < 10; ++n) {
    std::vector<ExtractedMention> ms;
    // common concept in every note
    ms.push_back(ExtractedMention{0, 5, "commo", ConceptId{"C0000002"}});
    if (n == 0) {
      ms.push_back(ExtractedMention{6, 10, "rare", ConceptId{"C0000001"}});
    }
    corpus.emplace_back("note" + std::to_string(n), ms);
  }
  auto w = compute_tfidf_weights(corpus, types);
  CHECK(w.weight(ConceptId{"C0000001"}) > w.weight(ConceptId{"C0000002"}));

  // idf is non-increasing in document frequency, by direct formula check.
  const double n10 = 10.0;
  for (std::size_t df = 1; df < 10; ++df) {
    const double idf_lo = std::log((1 + n10) / (1 + double(df))) + 1;
    const double idf_hi = std::log((1 + n10) / (1 + double(df + 1))) + 1;
    CHECK(idf_lo > idf_hi);
  }
}

TEST_CASE("tfidf: concept with no semantic types is flagged with weight 0") {
  std::map<ConceptId, std::vector<std::string>> types;  // none known
  std::vector<NoteMentions> corpus{
      {"n1", {ExtractedMention{0, 3, "foo", ConceptId{"C0000001"}}}}};
  auto w = compute_tfidf_weights(corpus, types);
  CHECK(w.weight(ConceptId{"C0000001"}) == 0.0);
  REQUIRE(w.flagged_no_types.size() == 1);
  CHECK(w.flagged_no_types[0] == ConceptId{"C0000001"});
  CHECK_THROWS_AS(compute_tfidf_weights({}, types), Error);
}

TEST_CASE("tfidf: invariant to note order") {
  std::map<ConceptId, std::vector<std::string>> types{
      {ConceptId{"C0000001"}, {"T184", "T047"}},
      {ConceptId{"C0000002"}, {"T047"}}};
  std::vector<NoteMentions> corpus{
      {"a", {ExtractedMention{0, 1, "x", ConceptId{"C0000001"}},
             ExtractedMention{2, 3, "y", ConceptId{"C0000002"}}}},
      {"b", {ExtractedMention{0, 1, "x", ConceptId{"C0000001"}}}},
      {"c", {ExtractedMention{0, 1, "y", ConceptId{"C0000002"}}}}};
  auto w1 = compute_tfidf_weights(corpus, types);
  std::reverse(corpus.begin(), corpus.end());
  auto w2 = compute_tfidf_weights(corpus, types);
  CHECK(w1.weight(ConceptId{"C0000001"}) ==
        doctest::Approx(w2.weight(ConceptId{"C0000001"})).epsilon(1e-15));
  CHECK(w1.weight(ConceptId{"C0000002"}) ==
        doctest::Approx(w2.weight(ConceptId{"C0000002"})).epsilon(1e-15));
}
