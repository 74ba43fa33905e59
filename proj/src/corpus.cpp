#include "vec2topic/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "vec2topic/errors.hpp"

namespace vec2topic {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_terminal(char c) { return c == '.' || c == '?' || c == '!'; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

void flush_sentence(std::vector<std::string>& out, std::string_view text, std::size_t begin,
                    std::size_t end) {
  std::string s = trim(text.substr(begin, end - begin));
  if (!s.empty()) out.push_back(std::move(s));
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t begin = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();

  while (i < n) {
    if (is_terminal(text[i])) {
      std::size_t punct_end = i + 1;
      while (punct_end < n && is_terminal(text[punct_end])) ++punct_end;
      std::size_t j = punct_end;
      while (j < n && is_space(text[j])) ++j;
      if (j >= n || is_upper(text[j])) {
        flush_sentence(sentences, text, begin, punct_end);
        begin = j;
        i = j;
        continue;
      }
      i = punct_end;
      continue;
    }
    if (text[i] == '\n') {
      // A blank line ends the sentence regardless of punctuation.
      std::size_t j = i + 1;
      bool blank = false;
      std::size_t k = j;
      while (k < n && text[k] != '\n' && is_space(text[k])) ++k;
      if (k < n && text[k] == '\n') {
        blank = true;
        j = k + 1;
      }
      if (blank) {
        flush_sentence(sentences, text, begin, i);
        begin = j;
        i = j;
        continue;
      }
    }
    ++i;
  }
  flush_sentence(sentences, text, begin, n);
  return sentences;
}

namespace {

const std::unordered_map<std::string, std::string>& irregular_lemmas() {
  static const std::unordered_map<std::string, std::string> table = {
      {"men", "man"},           {"women", "woman"},       {"children", "child"},
      {"feet", "foot"},         {"teeth", "tooth"},       {"geese", "goose"},
      {"mice", "mouse"},        {"lives", "life"},        {"wives", "wife"},
      {"knives", "knife"},      {"leaves", "leaf"},       {"wolves", "wolf"},
      {"shelves", "shelf"},     {"halves", "half"},       {"indices", "index"},
      {"matrices", "matrix"},   {"vertices", "vertex"},   {"analyses", "analysis"},
      {"hypotheses", "hypothesis"}, {"theses", "thesis"}, {"criteria", "criterion"},
      {"phenomena", "phenomenon"},  {"goes", "go"},       {"does", "do"},
  };
  return table;
}

// Words that end in s but are not plurals; stripping would corrupt them.
const std::unordered_set<std::string>& s_final_exceptions() {
  static const std::unordered_set<std::string> table = {
      "news",    "series", "species", "always", "perhaps", "whereas",
      "towards", "besides", "physics", "economics", "mathematics", "statistics",
      "politics", "ethics", "dynamics", "analytics", "logistics", "electronics",
  };
  return table;
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

}  // namespace

std::string plural_lemma(const std::string& token) {
  auto irr = irregular_lemmas().find(token);
  if (irr != irregular_lemmas().end()) return irr->second;
  if (s_final_exceptions().count(token)) return token;

  if (ends_with(token, "sses")) return token.substr(0, token.size() - 2);
  if (ends_with(token, "ies")) {
    if (token.size() >= 5) return token.substr(0, token.size() - 3) + "y";
    return token.substr(0, token.size() - 1);  // ties -> tie
  }
  if (ends_with(token, "zzes") || ends_with(token, "xes") || ends_with(token, "ches") ||
      ends_with(token, "shes"))
    return token.substr(0, token.size() - 2);
  if (ends_with(token, "ss") || ends_with(token, "us") || ends_with(token, "is"))
    return token;
  if (token.size() >= 4 && token.back() == 's') return token.substr(0, token.size() - 1);
  return token;
}

namespace {

// Candidate stems for an inflected form, in trial order.
std::vector<std::string> verb_stem_candidates(const std::string& token) {
  std::string base;
  if (ends_with(token, "ing") && token.size() >= 6) {
    base = token.substr(0, token.size() - 3);
  } else if (ends_with(token, "ed") && token.size() >= 5) {
    base = token.substr(0, token.size() - 2);
  } else {
    return {};
  }
  std::vector<std::string> candidates;
  if (base.size() >= 3) candidates.push_back(base);
  candidates.push_back(base + "e");
  if (base.size() >= 4 && base[base.size() - 1] == base[base.size() - 2] &&
      !is_vowel(base.back()))
    candidates.push_back(base.substr(0, base.size() - 1));
  return candidates;
}

std::string lemmatize_token(const std::string& token,
                            const std::unordered_set<std::string>* known_stems) {
  std::string lemma = plural_lemma(token);
  if (known_stems) {
    for (const auto& stem : verb_stem_candidates(lemma)) {
      if (stem != lemma && known_stems->count(stem)) return stem;
    }
  }
  return lemma;
}

std::vector<std::string> tokenize_impl(std::string_view sentence,
                                       const std::unordered_set<std::string>* known_stems) {
  std::vector<std::string> out;
  std::string token;
  bool has_digit = false;
  auto flush = [&] {
    if (token.size() >= 2 && !has_digit) out.push_back(lemmatize_token(token, known_stems));
    token.clear();
    has_digit = false;
  };
  for (char c : sentence) {
    if (c >= 'A' && c <= 'Z') {
      token.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (c >= 'a' && c <= 'z') {
      token.push_back(c);
    } else if (c >= '0' && c <= '9') {
      token.push_back(c);
      has_digit = true;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace

std::vector<std::string> tokenize_and_lemmatize(std::string_view sentence) {
  return tokenize_impl(sentence, nullptr);
}

std::vector<std::string> tokenize_and_lemmatize(
    std::string_view sentence, const std::unordered_set<std::string>& known_stems) {
  return tokenize_impl(sentence, &known_stems);
}

WordId Corpus::intern(std::string_view w) {
  auto it = index_.find(std::string(w));
  if (it != index_.end()) return it->second;
  WordId id = static_cast<WordId>(words_.size());
  words_.emplace_back(w);
  index_.emplace(words_.back(), id);
  return id;
}

WordId Corpus::find(std::string_view w) const {
  auto it = index_.find(std::string(w));
  return it == index_.end() ? kNoWord : it->second;
}

std::uint64_t Corpus::total_tokens() const {
  std::uint64_t t = 0;
  for (const auto& doc : documents)
    for (const auto& sentence : doc.sentences) t += sentence.size();
  return t;
}

std::size_t Corpus::sentence_count() const {
  std::size_t s = 0;
  for (const auto& doc : documents) s += doc.sentences.size();
  return s;
}

std::vector<std::uint64_t> Corpus::count_tokens() const {
  std::vector<std::uint64_t> counts(words_.size(), 0);
  for (const auto& doc : documents)
    for (const auto& sentence : doc.sentences)
      for (WordId id : sentence) counts[static_cast<std::size_t>(id)]++;
  return counts;
}

void apply_verb_lemma_pass(Corpus& corpus) {
  const auto counts = corpus.count_tokens();
  std::vector<WordId> remap(corpus.table_size());
  bool changed = false;
  for (std::size_t id = 0; id < corpus.table_size(); ++id) {
    remap[id] = static_cast<WordId>(id);
    const std::string& w = corpus.word(static_cast<WordId>(id));
    for (const auto& stem : verb_stem_candidates(w)) {
      if (stem == w) continue;
      WordId stem_id = corpus.find(stem);
      if (stem_id != kNoWord && counts[static_cast<std::size_t>(stem_id)] > 0) {
        remap[id] = stem_id;
        changed = true;
        break;
      }
    }
  }
  if (!changed) return;
  for (auto& doc : corpus.documents)
    for (auto& sentence : doc.sentences)
      for (WordId& id : sentence) id = remap[static_cast<std::size_t>(id)];
}

void detect_phrases(Corpus& corpus, std::uint32_t delta, double threshold) {
  const auto counts = corpus.count_tokens();
  const double total = static_cast<double>(corpus.total_tokens());
  if (total == 0) return;

  // Bigram counts over adjacent pairs within sentences, taken once.
  std::unordered_map<std::uint64_t, std::uint64_t> bigrams;
  auto key = [](WordId a, WordId b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  };
  for (const auto& doc : corpus.documents)
    for (const auto& sentence : doc.sentences)
      for (std::size_t i = 0; i + 1 < sentence.size(); ++i)
        bigrams[key(sentence[i], sentence[i + 1])]++;

  auto qualifies = [&](WordId a, WordId b) {
    auto it = bigrams.find(key(a, b));
    if (it == bigrams.end()) return false;
    double pair_count = static_cast<double>(it->second);
    if (pair_count <= static_cast<double>(delta)) return false;
    double ca = static_cast<double>(counts[static_cast<std::size_t>(a)]);
    double cb = static_cast<double>(counts[static_cast<std::size_t>(b)]);
    double score = (pair_count - static_cast<double>(delta)) * total / (ca * cb);
    return score >= threshold;
  };

  for (auto& doc : corpus.documents) {
    for (auto& sentence : doc.sentences) {
      SentenceIds merged;
      merged.reserve(sentence.size());
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (i + 1 < sentence.size() && qualifies(sentence[i], sentence[i + 1])) {
          const std::string phrase =
              corpus.word(sentence[i]) + "_" + corpus.word(sentence[i + 1]);
          merged.push_back(corpus.intern(phrase));
          ++i;  // greedy, non-overlapping
        } else {
          merged.push_back(sentence[i]);
        }
      }
      sentence = std::move(merged);
    }
  }
}

Vocabulary build_vocabulary(Corpus& corpus,
                            const std::unordered_set<std::string>& noun_lexicon,
                            const std::unordered_set<std::string>& stoplist,
                            std::uint64_t min_count) {
  // Compact the word table to words that still occur; phrase merging can
  // leave constituents with zero occurrences.
  const auto counts = corpus.count_tokens();
  Corpus compacted;
  std::vector<WordId> remap(corpus.table_size(), kNoWord);
  for (std::size_t id = 0; id < corpus.table_size(); ++id)
    if (counts[id] > 0) remap[id] = compacted.intern(corpus.word(static_cast<WordId>(id)));
  compacted.documents = std::move(corpus.documents);
  for (auto& doc : compacted.documents)
    for (auto& sentence : doc.sentences)
      for (WordId& id : sentence) id = remap[static_cast<std::size_t>(id)];
  corpus = std::move(compacted);

  Vocabulary vocab;
  vocab.frequency = corpus.count_tokens();
  vocab.is_noun.assign(corpus.table_size(), false);

  auto in_lexicon = [&](const std::string& w) {
    if (noun_lexicon.count(w)) return true;
    // A phrase qualifies when every constituent does.
    if (w.find('_') == std::string::npos) return false;
    std::size_t start = 0;
    while (start <= w.size()) {
      std::size_t end = w.find('_', start);
      std::string part = w.substr(start, end == std::string::npos ? end : end - start);
      if (part.empty() || !noun_lexicon.count(part)) return false;
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return true;
  };

  for (std::size_t id = 0; id < corpus.table_size(); ++id) {
    const std::string& w = corpus.word(static_cast<WordId>(id));
    if (vocab.frequency[id] < min_count) continue;
    if (stoplist.count(w)) continue;
    if (!in_lexicon(w)) continue;
    vocab.is_noun[id] = true;
    vocab.noun_ids.push_back(static_cast<WordId>(id));
  }

  if (vocab.noun_ids.size() < 2)
    throw EmptyNounVocab("noun vocabulary has " + std::to_string(vocab.noun_ids.size()) +
                         " words; need at least 2");
  return vocab;
}

Corpus build_corpus(const std::vector<std::pair<std::string, std::string>>& docs,
                    const CorpusOptions& options) {
  Corpus corpus;
  for (const auto& [id, text] : docs) {
    Document doc;
    doc.id = id;
    for (const auto& sentence : segment_sentences(text)) {
      std::vector<std::string> tokens = tokenize_and_lemmatize(sentence);
      if (tokens.empty()) continue;
      SentenceIds ids;
      ids.reserve(tokens.size());
      for (const auto& t : tokens) ids.push_back(corpus.intern(t));
      doc.sentences.push_back(std::move(ids));
    }
    corpus.documents.push_back(std::move(doc));
  }
  apply_verb_lemma_pass(corpus);
  if (options.detect_bigrams)
    detect_phrases(corpus, options.phrase_delta, options.phrase_threshold);
  return corpus;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& input, const CorpusOptions& options) {
  std::vector<std::pair<std::string, std::string>> docs;
  if (std::filesystem::is_directory(input)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(input))
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) docs.emplace_back(f.stem().string(), read_file(f));
  } else if (std::filesystem::is_regular_file(input)) {
    docs.emplace_back(input.stem().string(), read_file(input));
  } else {
    throw Error("input path does not exist: " + input.string());
  }
  return build_corpus(docs, options);
}

std::unordered_set<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open word list " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string w = trim(line);
    if (!w.empty()) words.insert(std::move(w));
  }
  return words;
}

}  // namespace vec2topic
