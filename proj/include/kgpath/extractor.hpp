#pragma once

#include <map>
#include <string>
#include <vector>

#include "kgpath/graph.hpp"

namespace kgpath {

// Normalized surface form -> candidate concept ids (sorted). Ambiguous
// surfaces keep every candidate.
struct VocabularyIndex {
  std::map<std::string, std::vector<ConceptId>> by_surface;
  std::size_t max_words = 0;       // longest indexed surface, in tokens
  std::size_t skipped_names = 0;   // names that normalized to empty
};

// Lowercase, collapse runs of whitespace to one space, strip surrounding
// punctuation. Tokenization and normalization are byte-oriented and
// locale-free; bytes >= 0x80 (UTF-8 continuation and lead bytes) count as
// word characters.
std::string normalize_surface(const std::string& raw);

VocabularyIndex build_vocab_index(const std::vector<Concept>& concepts);
VocabularyIndex build_vocab_index(const std::vector<const Concept*>& concepts);

struct ExtractedMention {
  std::size_t start = 0;  // byte offsets into the original text
  std::size_t end = 0;
  std::string surface;
  ConceptId cui;
};

// Greedy left-to-right longest match over word boundaries. Mentions never
// overlap; an ambiguous surface emits one mention per candidate CUI at the
// same span. Pure: identical text and index give identical output.
std::vector<ExtractedMention> extract_concepts(const std::string& text,
                                               const VocabularyIndex& index);

// Per-concept TF-IDF weights. tf = raw mention count within a note;
// idf = ln((1 + N) / (1 + df)) + 1 over the corpus; the weight of a concept
// in a note is tfidf(concept) * sum over its semantic types of tfidf(type),
// and the corpus-level weight is the mean over notes containing the concept.
struct ConceptWeighting {
  std::map<ConceptId, double> corpus_weight;
  std::map<std::string, std::map<ConceptId, double>> per_note;
  std::map<ConceptId, std::size_t> concept_df;
  std::map<std::string, std::size_t> type_df;
  std::size_t corpus_size = 0;
  std::vector<ConceptId> flagged_no_types;  // weight forced to 0

  // 0 for concepts unseen in the corpus.
  double weight(const ConceptId& id) const;
  double note_weight(const std::string& note_id, const ConceptId& id) const;
};

using NoteMentions = std::pair<std::string, std::vector<ExtractedMention>>;

ConceptWeighting compute_tfidf_weights(
    const std::vector<NoteMentions>& corpus,
    const std::map<ConceptId, std::vector<std::string>>& semantic_types_of);

}  // namespace kgpath
