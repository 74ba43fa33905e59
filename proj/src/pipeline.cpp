#include "vec2topic/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "vec2topic/errors.hpp"

namespace vec2topic {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "average";
}

Linkage linkage_from_string(const std::string& s) {
  if (s == "single") return Linkage::single;
  if (s == "complete") return Linkage::complete;
  if (s == "average") return Linkage::average;
  throw ConfigError("unknown linkage \"" + s + "\" (single|complete|average)");
}

std::string to_string(NormalizationMode mode) {
  return mode == NormalizationMode::fixed ? "fixed" : "median";
}

NormalizationMode norm_from_string(const std::string& s) {
  if (s == "fixed") return NormalizationMode::fixed;
  if (s == "median") return NormalizationMode::median;
  throw ConfigError("unknown normalization mode \"" + s + "\" (fixed|median)");
}

std::string to_string(DegreeUniverse u) {
  return u == DegreeUniverse::full ? "full" : "nouns";
}

DegreeUniverse universe_from_string(const std::string& s) {
  if (s == "full") return DegreeUniverse::full;
  if (s == "nouns") return DegreeUniverse::nouns;
  throw ConfigError("unknown degree universe \"" + s + "\" (full|nouns)");
}

std::string to_string(KbFormat f) { return f == KbFormat::text ? "text" : "binary"; }

KbFormat kb_format_from_string(const std::string& s) {
  if (s == "text") return KbFormat::text;
  if (s == "binary") return KbFormat::binary;
  throw ConfigError("unknown kb format \"" + s + "\" (text|binary)");
}

bool bool_from_string(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("invalid boolean for " + key + ": \"" + s + "\"");
}

template <typename T>
T int_from_string(const std::string& s, const std::string& key) {
  try {
    if constexpr (std::is_unsigned_v<T>)
      return static_cast<T>(std::stoull(s));
    else
      return static_cast<T>(std::stoll(s));
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": \"" + s + "\"");
  }
}

double double_from_string(const std::string& s, const std::string& key) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": \"" + s + "\"");
  }
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

void apply_key(RunConfig& c, std::string key, const std::string& value) {
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "input") c.input = value;
  else if (key == "kb_vectors") c.kb_vectors = value;
  else if (key == "kb_format") c.kb_format = kb_format_from_string(value);
  else if (key == "kb_only") c.kb_only = bool_from_string(value, key);
  else if (key == "k") c.k = int_from_string<int>(value, key);
  else if (key == "lambda") c.lambda = int_from_string<int>(value, key);
  else if (key == "window") c.window = int_from_string<int>(value, key);
  else if (key == "epochs") c.epochs = int_from_string<int>(value, key);
  else if (key == "negatives") c.negatives = int_from_string<int>(value, key);
  else if (key == "seed") c.seed = int_from_string<std::uint64_t>(value, key);
  else if (key == "min_count") c.min_count = int_from_string<std::uint64_t>(value, key);
  else if (key == "linkage") c.linkage = linkage_from_string(value);
  else if (key == "norm") c.norm = norm_from_string(value);
  else if (key == "degree_universe") c.degree_universe = universe_from_string(value);
  else if (key == "detect_bigrams") c.detect_bigrams = bool_from_string(value, key);
  else if (key == "phrase_delta") c.phrase_delta = int_from_string<std::uint32_t>(value, key);
  else if (key == "phrase_threshold") c.phrase_threshold = double_from_string(value, key);
  else if (key == "noun_lexicon") c.noun_lexicon = value;
  else if (key == "stoplist") c.stoplist = value;
  else if (key == "threads") c.threads = int_from_string<int>(value, key);
  else if (key == "train_threads") c.train_threads = int_from_string<int>(value, key);
  else if (key == "output") c.output = value;
  else if (key == "format") c.format = value;
  else throw ConfigError("unknown config key \"" + key + "\"");
}

}  // namespace

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key=value");
    apply_key(config, trimmed(line.substr(0, eq)), trimmed(line.substr(eq + 1)));
  }
}

void validate_config(const RunConfig& c) {
  if (c.input.empty()) throw ConfigError("input path is required");
  if (c.kb_vectors.empty()) throw ConfigError("kb vector path is required");
  if (c.k < 2) throw ConfigError("k must be >= 2");
  if (c.lambda < 1) throw ConfigError("lambda must be >= 1");
  if (c.window < 1) throw ConfigError("window must be >= 1");
  if (c.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (c.negatives < 0) throw ConfigError("negatives must be >= 0");
  if (c.threads < 1 || c.train_threads < 1) throw ConfigError("thread counts must be >= 1");
  if (c.format != "json" && c.format != "tsv")
    throw ConfigError("format must be json or tsv, got \"" + c.format + "\"");
  if (!std::filesystem::exists(c.input))
    throw ConfigError("input path does not exist: " + c.input);
  if (!std::filesystem::exists(c.kb_vectors))
    throw ConfigError("kb vector file does not exist: " + c.kb_vectors);
  if (!std::filesystem::exists(c.noun_lexicon))
    throw ConfigError("noun lexicon does not exist: " + c.noun_lexicon);
  if (!c.stoplist.empty() && !std::filesystem::exists(c.stoplist))
    throw ConfigError("stoplist does not exist: " + c.stoplist);
}

namespace {

// Rethrows the in-flight exception with the stage prepended, keeping its
// concrete type so callers can still catch what the module threw.
[[noreturn]] void rethrow_with_stage(const std::string& stage) {
  auto tag = [&](const std::exception& e) { return "[" + stage + "] " + e.what(); };
  try {
    throw;
  } catch (const PipelineError&) {
    throw;
  } catch (const EmptyNounVocab& e) {
    throw EmptyNounVocab(tag(e));
  } catch (const EmptyCorpus& e) {
    throw EmptyCorpus(tag(e));
  } catch (const FormatError& e) {
    throw FormatError(tag(e));
  } catch (const EmptyEmbeddingSet& e) {
    throw EmptyEmbeddingSet(tag(e));
  } catch (const ZeroVector& e) {
    throw ZeroVector(tag(e));
  } catch (const KTooLarge& e) {
    throw KTooLarge(tag(e));
  } catch (const TooFewWords& e) {
    throw TooFewWords(tag(e));
  } catch (const DegenerateCorpus& e) {
    throw DegenerateCorpus(tag(e));
  } catch (const ConfigError& e) {
    throw ConfigError(tag(e));
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& out) : out_(out) {}

  template <typename F>
  auto run(const std::string& stage, F&& f) -> decltype(f()) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(stage, start);
      } else {
        auto result = f();
        record(stage, start);
        return result;
      }
    } catch (...) {
      rethrow_with_stage(stage);
    }
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    out_.push_back({stage, elapsed.count()});
  }
  std::vector<StageTiming>& out_;
};

}  // namespace

RunReport run_pipeline(const RunConfig& config) {
  RunReport report;
  report.config = config;
  StageClock clock(report.timings);

  clock.run("config", [&] { validate_config(config); });

  CorpusOptions corpus_options;
  corpus_options.detect_bigrams = config.detect_bigrams;
  corpus_options.phrase_delta = config.phrase_delta;
  corpus_options.phrase_threshold = config.phrase_threshold;
  Corpus corpus = clock.run("corpus", [&] { return load_corpus(config.input, corpus_options); });

  Vocabulary vocab = clock.run("vocabulary", [&] {
    auto lexicon = load_word_list(config.noun_lexicon);
    auto stop = config.stoplist.empty() ? std::unordered_set<std::string>{}
                                        : load_word_list(config.stoplist);
    return build_vocabulary(corpus, lexicon, stop, config.min_count);
  });

  KbVectors kb = clock.run("kb_vectors", [&] {
    std::unordered_set<std::string> wanted;
    for (WordId id : vocab.noun_ids) wanted.insert(corpus.word(id));
    return load_kb_vectors(config.kb_vectors, wanted, config.kb_format);
  });

  LocalEmbeddings local;
  if (!config.kb_only) {
    local = clock.run("local_embeddings", [&] {
      SkipGramOptions opt;
      opt.dim = config.lambda;
      opt.window = config.window;
      opt.epochs = config.epochs;
      opt.negatives = config.negatives;
      opt.seed = config.seed;
      opt.min_count = config.min_count;
      opt.threads = config.train_threads;
      return train_local_embeddings(corpus, opt);
    });
  }

  ConcatResult concat = clock.run(
      "concat", [&] { return concat_embeddings(corpus, vocab.noun_ids, kb, local, config.kb_only); });
  const EmbeddingSet& emb = concat.set;

  TopicAssignment assignment = clock.run(
      "kmeans", [&] { return kmeans_cluster(emb, config.k, config.seed, 300, config.threads); });

  Dendrogram dendrogram = clock.run(
      "agglomerative", [&] { return agglomerative_cluster(emb, config.linkage, config.threads); });

  DepthMap depths = clock.run("depth", [&] {
    std::vector<int> leaf_depths = compute_depths(dendrogram);
    DepthMap map;
    map.reserve(leaf_depths.size());
    for (std::size_t i = 0; i < leaf_depths.size(); ++i)
      map[dendrogram.leaf_words[i]] = leaf_depths[i];
    return map;
  });

  DegreeMap degrees = clock.run("degree", [&] {
    DegreeMap all = compute_degrees(corpus, vocab, config.degree_universe);
    // Words dropped at concatenation have no depth and are excluded from
    // scoring entirely.
    DegreeMap scored;
    scored.reserve(emb.words.size());
    for (WordId w : emb.words) scored[w] = all.at(w);
    return scored;
  });

  Normalization norm = clock.run(
      "normalization", [&] { return fit_normalization(depths, degrees, config.norm); });

  ScoreTable scores = clock.run(
      "score", [&] { return score_words(depths, degrees, norm.alpha, norm.beta); });

  TopicModel model = clock.run("rank", [&] {
    return rank_topics(assignment, scores,
                       [&](WordId id) -> const std::string& { return corpus.word(id); });
  });

  report.stats.documents = corpus.documents.size();
  report.stats.sentences = corpus.sentence_count();
  report.stats.tokens = corpus.total_tokens();
  report.stats.vocab_full = vocab.full_size();
  report.stats.vocab_nouns = vocab.noun_size();
  report.stats.kb_dropped = concat.dropped.size();
  report.stats.kb_dim = kb.dim;
  report.alpha = norm.alpha;
  report.beta = norm.beta;
  report.deterministic = config.kb_only || local.deterministic;

  for (std::size_t t = 0; t < model.topics.size(); ++t) {
    const Topic& topic = model.topics[t];
    ReportTopic rt;
    rt.rank = static_cast<int>(t + 1);
    rt.cluster_id = topic.cluster_id;
    rt.score = topic.score;
    for (WordId w : topic.words) {
      const ScoreRow& row = scores.rows.at(w);
      rt.words.push_back({corpus.word(w), row.score, row.depth, row.degree});
    }
    report.topics.push_back(std::move(rt));
  }
  return report;
}

namespace {

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["input"] = c.input;
  j["kb_vectors"] = c.kb_vectors;
  j["kb_format"] = to_string(c.kb_format);
  j["kb_only"] = c.kb_only;
  j["k"] = c.k;
  j["lambda"] = c.lambda;
  j["window"] = c.window;
  j["epochs"] = c.epochs;
  j["negatives"] = c.negatives;
  j["seed"] = c.seed;
  j["min_count"] = c.min_count;
  j["linkage"] = to_string(c.linkage);
  j["norm"] = to_string(c.norm);
  j["degree_universe"] = to_string(c.degree_universe);
  j["detect_bigrams"] = c.detect_bigrams;
  j["phrase_delta"] = c.phrase_delta;
  j["phrase_threshold"] = c.phrase_threshold;
  j["noun_lexicon"] = c.noun_lexicon;
  j["stoplist"] = c.stoplist;
  j["threads"] = c.threads;
  j["train_threads"] = c.train_threads;
  return j;
}

ordered_json report_json_impl(const RunReport& r, bool with_timings) {
  ordered_json j;
  j["config"] = config_json(r.config);
  ordered_json stats;
  stats["documents"] = r.stats.documents;
  stats["sentences"] = r.stats.sentences;
  stats["tokens"] = r.stats.tokens;
  stats["vocab_full"] = r.stats.vocab_full;
  stats["vocab_nouns"] = r.stats.vocab_nouns;
  stats["kb_dropped"] = r.stats.kb_dropped;
  stats["kb_dim"] = r.stats.kb_dim;
  stats["alpha"] = r.alpha;
  stats["beta"] = r.beta;
  stats["deterministic"] = r.deterministic;
  j["stats"] = stats;
  ordered_json topics = ordered_json::array();
  for (const auto& topic : r.topics) {
    ordered_json t;
    t["rank"] = topic.rank;
    t["cluster"] = topic.cluster_id;
    t["score"] = topic.score;
    ordered_json words = ordered_json::array();
    for (const auto& w : topic.words) {
      ordered_json e;
      e["word"] = w.word;
      e["score"] = w.score;
      e["depth"] = w.depth;
      e["degree"] = w.degree;
      words.push_back(std::move(e));
    }
    t["words"] = std::move(words);
    topics.push_back(std::move(t));
  }
  j["topics"] = std::move(topics);
  if (with_timings) {
    ordered_json timings = ordered_json::array();
    for (const auto& t : r.timings) {
      ordered_json e;
      e["stage"] = t.stage;
      e["seconds"] = t.seconds;
      timings.push_back(std::move(e));
    }
    j["timings"] = std::move(timings);
  }
  return j;
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  return report_json_impl(report, true).dump(2) + "\n";
}

std::string report_payload_json(const RunReport& report) {
  return report_json_impl(report, false).dump(2) + "\n";
}

std::string report_to_tsv(const RunReport& report) {
  struct Row {
    const ReportWord* word;
    int cluster;
  };
  std::vector<Row> rows;
  for (const auto& topic : report.topics)
    for (const auto& w : topic.words) rows.push_back({&w, topic.cluster_id});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.word->score != b.word->score) return a.word->score > b.word->score;
    return a.word->word < b.word->word;
  });

  std::string out = "word\tcluster\tdepth\tdegree\tscore\n";
  char buf[64];
  for (const Row& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g", row.word->score);
    out += row.word->word;
    out += '\t';
    out += std::to_string(row.cluster);
    out += '\t';
    out += std::to_string(row.word->depth);
    out += '\t';
    out += std::to_string(row.word->degree);
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace vec2topic
