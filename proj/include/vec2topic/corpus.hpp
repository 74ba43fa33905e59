#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace vec2topic {

using WordId = std::int32_t;
constexpr WordId kNoWord = -1;

// One sentence = token ids into the corpus word table.
using SentenceIds = std::vector<WordId>;

struct Document {
  std::string id;
  std::vector<SentenceIds> sentences;
};

// Tokenized corpus plus the interning table shared by all documents.
// Document order and sentence order are preserved from the input.
class Corpus {
 public:
  WordId intern(std::string_view w);
  WordId find(std::string_view w) const;  // kNoWord if absent
  const std::string& word(WordId id) const { return words_[static_cast<std::size_t>(id)]; }
  std::size_t table_size() const { return words_.size(); }

  std::uint64_t total_tokens() const;  // T
  std::size_t sentence_count() const;  // S

  // Token frequencies over the current sentences, indexed by word id.
  std::vector<std::uint64_t> count_tokens() const;

  std::vector<Document> documents;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

// Full vocabulary V-bar plus the noun/noun-phrase subset V, indexed against
// the owning Corpus's word table (build_vocabulary compacts that table so
// every id has frequency >= 1).
struct Vocabulary {
  std::vector<std::uint64_t> frequency;  // per word id, all >= 1
  std::vector<bool> is_noun;             // per word id
  std::vector<WordId> noun_ids;          // V, ascending
  std::size_t full_size() const { return frequency.size(); }
  std::size_t noun_size() const { return noun_ids.size(); }
};

// Splits at [.?!]+ followed by whitespace and an uppercase letter, and at
// blank lines. No abbreviation lexicon; occasional over-splitting is
// accepted. Never returns empty sentences.
std::vector<std::string> segment_sentences(std::string_view text);

// Lowercase alphabetic tokens of length >= 2, mapped through the bundled
// suffix-rule lemma table. Plural rules apply unconditionally; -ing/-ed are
// stripped only when a known stem exists, so the one-argument form leaves
// verbal inflections alone.
std::vector<std::string> tokenize_and_lemmatize(std::string_view sentence);
std::vector<std::string> tokenize_and_lemmatize(
    std::string_view sentence, const std::unordered_set<std::string>& known_stems);

// Plural-to-singular suffix rules (exposed for the phrase/vocab tests).
std::string plural_lemma(const std::string& token);

// Rewrites -ing/-ed tokens to a stem that already occurs in the corpus
// (candidates tried in order: bare strip, strip+e, undoubled consonant).
// Counts are taken once before any rewrite.
void apply_verb_lemma_pass(Corpus& corpus);

// Merges adjacent pair (a,b) into "a_b" wherever
//   (count(ab) - delta) * T / (count(a) * count(b)) >= threshold,
// counting over the corpus as given. Single left-to-right greedy pass,
// non-overlapping; pairs never cross sentence boundaries.
void detect_phrases(Corpus& corpus, std::uint32_t delta, double threshold);

// Compacts the corpus word table to words with frequency >= 1 and builds
// V-bar plus the noun subset V. A phrase belongs to V when every constituent
// is in the lexicon or the phrase itself is listed. Throws EmptyNounVocab
// when |V| < 2.
Vocabulary build_vocabulary(Corpus& corpus,
                            const std::unordered_set<std::string>& noun_lexicon,
                            const std::unordered_set<std::string>& stoplist,
                            std::uint64_t min_count = 3);

struct CorpusOptions {
  bool detect_bigrams = true;
  std::uint32_t phrase_delta = 5;
  double phrase_threshold = 10.0;
};

// Segment + tokenize + lemmatize the given (id, text) documents, then run
// the verb-lemma and phrase passes. Deterministic for identical input.
Corpus build_corpus(const std::vector<std::pair<std::string, std::string>>& docs,
                    const CorpusOptions& options = {});

// Reads a directory of UTF-8 .txt files (one document each, sorted by file
// name) or a single file (one document).
Corpus load_corpus(const std::filesystem::path& input, const CorpusOptions& options = {});

// One lemma per line, '#' comments and blank lines ignored.
std::unordered_set<std::string> load_word_list(const std::filesystem::path& path);

}  // namespace vec2topic
