#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vec2topic/clustering.hpp"
#include "vec2topic/embeddings.hpp"
#include "vec2topic/scoring.hpp"

namespace vec2topic {

struct RunConfig {
  std::string input;       // directory of .txt files or a single file
  std::string kb_vectors;  // pretrained vector file
  KbFormat kb_format = KbFormat::text;
  bool kb_only = false;

  int k = 10;
  int lambda = 25;
  int window = 5;
  int epochs = 15;
  int negatives = 5;
  std::uint64_t seed = 1;
  std::uint64_t min_count = 3;

  Linkage linkage = Linkage::average;
  NormalizationMode norm = NormalizationMode::fixed;
  DegreeUniverse degree_universe = DegreeUniverse::full;

  bool detect_bigrams = true;
  std::uint32_t phrase_delta = 5;
  double phrase_threshold = 10.0;

  std::string noun_lexicon = "data/noun_lexicon.txt";
  std::string stoplist;  // optional

  int threads = 1;        // distance / assignment parallelism, result-neutral
  int train_threads = 1;  // > 1 forfeits training determinism

  std::string output;           // optional result file
  std::string format = "json";  // json | tsv
};

// Applies "key = value" lines over the given config; '#' comments allowed.
// Keys match the CLI flag names with '-' as '_'.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

// Checks ranges and that every referenced path resolves. Throws ConfigError.
void validate_config(const RunConfig& config);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::uint64_t tokens = 0;
  std::size_t vocab_full = 0;   // |V-bar|
  std::size_t vocab_nouns = 0;  // |V|
  std::size_t kb_dropped = 0;   // noun words absent from the knowledge base
  std::size_t kb_dim = 0;       // kappa, inferred from the vector file
};

struct ReportWord {
  std::string word;
  double score = 0.0;
  int depth = 0;
  std::int64_t degree = 0;
};

struct ReportTopic {
  int rank = 0;
  int cluster_id = 0;
  double score = 0.0;
  std::vector<ReportWord> words;
};

struct RunReport {
  RunConfig config;
  CorpusStats stats;
  double alpha = 1.0;
  double beta = 1.0;
  bool deterministic = true;
  std::vector<ReportTopic> topics;
  std::vector<StageTiming> timings;
};

// Runs the full stage graph: corpus -> vocabulary -> kb load -> local
// training -> concatenation -> k-means -> agglomerative -> depth -> degree
// -> normalization -> score -> rank. Module errors propagate as
// PipelineError with the stage attached.
RunReport run_pipeline(const RunConfig& config);

// Structured result document; schema documented in the README. Timings are
// the only section that varies between identical runs.
std::string report_to_json(const RunReport& report);

// The same document minus the timings section: byte-identical across
// identical seeded runs.
std::string report_payload_json(const RunReport& report);

// Flat "word cluster depth degree score" table, descending score.
std::string report_to_tsv(const RunReport& report);

}  // namespace vec2topic
