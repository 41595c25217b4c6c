#include "kgpath/extractor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "kgpath/error.hpp"

namespace kgpath {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

bool is_space_byte(unsigned char c) { return std::isspace(c); }

struct Token {
  std::size_t start;
  std::size_t end;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    tokens.push_back(Token{i, j});
    i = j;
  }
  return tokens;
}

}  // namespace

std::string normalize_surface(const std::string& raw) {
  // Strip surrounding punctuation/whitespace.
  std::size_t b = 0, e = raw.size();
  while (b < e && !is_word_byte(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && !is_word_byte(static_cast<unsigned char>(raw[e - 1]))) --e;

  std::string out;
  out.reserve(e - b);
  bool pending_space = false;
  for (std::size_t i = b; i < e; ++i) {
    const unsigned char c = static_cast<unsigned char>(raw[i]);
    if (is_space_byte(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

VocabularyIndex build_vocab_index(const std::vector<const Concept*>& concepts) {
  if (concepts.empty()) throw Error("build_vocab_index: no concepts");
  VocabularyIndex index;
  for (const Concept* c : concepts) {
    bool any = false;
    for (const std::string& name : c->names) {
      const std::string norm = normalize_surface(name);
      if (norm.empty()) {
        ++index.skipped_names;
        continue;
      }
      any = true;
      auto& ids = index.by_surface[norm];
      if (std::find(ids.begin(), ids.end(), c->id) == ids.end()) {
        ids.push_back(c->id);
      }
      const std::size_t words =
          1 + static_cast<std::size_t>(std::count(norm.begin(), norm.end(), ' '));
      index.max_words = std::max(index.max_words, words);
    }
    (void)any;
  }
  for (auto& [_, ids] : index.by_surface) std::sort(ids.begin(), ids.end());
  return index;
}

VocabularyIndex build_vocab_index(const std::vector<Concept>& concepts) {
  std::vector<const Concept*> ptrs;
  ptrs.reserve(concepts.size());
  for (const auto& c : concepts) ptrs.push_back(&c);
  return build_vocab_index(ptrs);
}

std::vector<ExtractedMention> extract_concepts(const std::string& text,
                                               const VocabularyIndex& index) {
  std::vector<ExtractedMention> mentions;
  const auto tokens = tokenize(text);
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::size_t longest = std::min(index.max_words, tokens.size() - i);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      const std::size_t start = tokens[i].start;
      const std::size_t end = tokens[i + len - 1].end;
      const std::string surface = text.substr(start, end - start);
      auto it = index.by_surface.find(normalize_surface(surface));
      if (it == index.by_surface.end()) continue;
      for (const ConceptId& cui : it->second) {
        mentions.push_back(ExtractedMention{start, end, surface, cui});
      }
      i += len;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return mentions;
}

double ConceptWeighting::weight(const ConceptId& id) const {
  auto it = corpus_weight.find(id);
  return it == corpus_weight.end() ? 0.0 : it->second;
}

double ConceptWeighting::note_weight(const std::string& note_id,
                                     const ConceptId& id) const {
  auto nit = per_note.find(note_id);
  if (nit == per_note.end()) return 0.0;
  auto it = nit->second.find(id);
  return it == nit->second.end() ? 0.0 : it->second;
}

ConceptWeighting compute_tfidf_weights(
    const std::vector<NoteMentions>& corpus,
    const std::map<ConceptId, std::vector<std::string>>& semantic_types_of) {
  if (corpus.empty()) throw Error("compute_tfidf_weights: empty corpus");

  ConceptWeighting w;
  w.corpus_size = corpus.size();

  // Per-note raw term frequencies for concepts and semantic types.
  std::vector<std::map<ConceptId, std::size_t>> concept_tf(corpus.size());
  std::vector<std::map<std::string, std::size_t>> type_tf(corpus.size());

  auto types_of = [&](const ConceptId& id) -> const std::vector<std::string>* {
    auto it = semantic_types_of.find(id);
    return it == semantic_types_of.end() ? nullptr : &it->second;
  };

  for (std::size_t n = 0; n < corpus.size(); ++n) {
    for (const auto& mention : corpus[n].second) {
      concept_tf[n][mention.cui] += 1;
      if (const auto* types = types_of(mention.cui)) {
        for (const auto& t : *types) type_tf[n][t] += 1;
      }
    }
  }
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    for (const auto& [cui, _] : concept_tf[n]) w.concept_df[cui] += 1;
    for (const auto& [type, _] : type_tf[n]) w.type_df[type] += 1;
  }

  const double big_n = static_cast<double>(w.corpus_size);
  auto idf = [&](std::size_t df) {
    return std::log((1.0 + big_n) / (1.0 + static_cast<double>(df))) + 1.0;
  };

  std::map<ConceptId, std::pair<double, std::size_t>> acc;  // sum, notes
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    const std::string& note_id = corpus[n].first;
    for (const auto& [cui, tf] : concept_tf[n]) {
      const double tfidf_concept = static_cast<double>(tf) * idf(w.concept_df[cui]);
      double type_sum = 0.0;
      if (const auto* types = types_of(cui)) {
        for (const auto& t : *types) {
          auto it = type_tf[n].find(t);
          if (it != type_tf[n].end()) {
            type_sum += static_cast<double>(it->second) * idf(w.type_df[t]);
          }
        }
      }
      const double weight = tfidf_concept * type_sum;
      w.per_note[note_id][cui] = weight;
      auto& [sum, count] = acc[cui];
      sum += weight;
      count += 1;
    }
  }
  for (const auto& [cui, sum_count] : acc) {
    w.corpus_weight[cui] = sum_count.first / static_cast<double>(sum_count.second);
    const auto* types = types_of(cui);
    if (types == nullptr || types->empty()) {
      w.flagged_no_types.push_back(cui);
    }
  }
  return w;
}

}  // namespace kgpath
