#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vec2topic/errors.hpp"
#include "vec2topic/pipeline.hpp"

namespace {

void print_summary(const vec2topic::RunReport& report, std::size_t top_words) {
  std::printf("documents=%zu  sentences=%zu  tokens=%llu  |vocab|=%zu  |nouns|=%zu",
              report.stats.documents, report.stats.sentences,
              static_cast<unsigned long long>(report.stats.tokens), report.stats.vocab_full,
              report.stats.vocab_nouns);
  if (report.stats.kb_dropped > 0)
    std::printf("  (dropped %zu words missing from the knowledge base)",
                report.stats.kb_dropped);
  std::printf("\nalpha=%.4f beta=%.4f%s\n\n", report.alpha, report.beta,
              report.deterministic ? "" : "  [nondeterministic training]");
  for (const auto& topic : report.topics) {
    std::printf("Topic %d (score %.4f, cluster %d, %zu words)\n", topic.rank, topic.score,
                topic.cluster_id, topic.words.size());
    std::size_t shown = 0;
    for (const auto& w : topic.words) {
      if (shown++ >= top_words) break;
      std::printf("  %-24s score=%.4f depth=%d degree=%lld\n", w.word.c_str(), w.score,
                  w.depth, static_cast<long long>(w.degree));
    }
  }
  for (const auto& t : report.timings)
    std::fprintf(stderr, "[timing] %-16s %.3fs\n", t.stage.c_str(), t.seconds);
}

}  // namespace

int main(int argc, char** argv) {
  vec2topic::RunConfig config;
  std::string config_path;
  std::size_t top_words = 10;

  // The config file supplies defaults; explicit flags override it.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  if (!config_path.empty()) {
    try {
      vec2topic::apply_config_file(config, config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }

  CLI::App app{"Ranks the key topics of a text corpus from word-embedding cluster density "
               "and sentence co-occurrence spread"};
  app.add_option("--config", config_path, "key=value config file (flags override it)");
  app.add_option("--input", config.input, "corpus directory of .txt files, or a single file");
  app.add_option("--kb-vectors", config.kb_vectors, "pretrained knowledge-base vector file");
  std::string kb_format, linkage, norm, universe;
  app.add_option("--kb-format", kb_format, "text|binary (default text)");
  app.add_flag("--kb-only", config.kb_only, "skip local training; use knowledge-base vectors alone");
  app.add_option("--k", config.k, "number of topics (default 10)");
  app.add_option("--lambda", config.lambda, "local embedding dimensions (default 25)");
  app.add_option("--window", config.window, "skip-gram context window (default 5)");
  app.add_option("--epochs", config.epochs, "skip-gram epochs (default 15)");
  app.add_option("--negatives", config.negatives, "negative samples per update (default 5)");
  app.add_option("--seed", config.seed, "RNG seed (default 1)");
  app.add_option("--min-count", config.min_count, "frequency floor for embedded words (default 3)");
  app.add_option("--linkage", linkage, "single|complete|average (default average)");
  app.add_option("--norm", norm, "score normalization: fixed|median (default fixed)");
  app.add_option("--degree-universe", universe, "co-occurrence neighbors: full|nouns (default full)");
  app.add_option("--phrase-delta", config.phrase_delta, "bigram discount (default 5)");
  app.add_option("--phrase-threshold", config.phrase_threshold, "bigram score threshold (default 10)");
  bool no_bigrams = false;
  app.add_flag("--no-bigrams", no_bigrams, "disable bigram phrase detection");
  app.add_option("--noun-lexicon", config.noun_lexicon,
                 "noun lemma list, one per line (default data/noun_lexicon.txt)");
  app.add_option("--stoplist", config.stoplist, "words to exclude from the noun vocabulary");
  app.add_option("--threads", config.threads, "distance/assignment threads, result-neutral");
  app.add_option("--train-threads", config.train_threads,
                 "training threads; >1 forfeits determinism");
  app.add_option("--output", config.output, "write the result document here");
  app.add_option("--format", config.format, "output format: json|tsv (default json)");
  app.add_option("--top-words", top_words, "words shown per topic on stdout (default 10)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kb_format.empty()) config.kb_format = kb_format == "binary"
                                                   ? vec2topic::KbFormat::binary
                                                   : vec2topic::KbFormat::text;
    if (!linkage.empty()) {
      if (linkage == "single") config.linkage = vec2topic::Linkage::single;
      else if (linkage == "complete") config.linkage = vec2topic::Linkage::complete;
      else if (linkage == "average") config.linkage = vec2topic::Linkage::average;
      else throw vec2topic::ConfigError("unknown linkage \"" + linkage + "\"");
    }
    if (!norm.empty()) {
      if (norm == "fixed") config.norm = vec2topic::NormalizationMode::fixed;
      else if (norm == "median") config.norm = vec2topic::NormalizationMode::median;
      else throw vec2topic::ConfigError("unknown normalization mode \"" + norm + "\"");
    }
    if (!universe.empty()) {
      if (universe == "full") config.degree_universe = vec2topic::DegreeUniverse::full;
      else if (universe == "nouns") config.degree_universe = vec2topic::DegreeUniverse::nouns;
      else throw vec2topic::ConfigError("unknown degree universe \"" + universe + "\"");
    }
    if (no_bigrams) config.detect_bigrams = false;

    vec2topic::RunReport report = vec2topic::run_pipeline(config);
    print_summary(report, top_words);

    if (!config.output.empty()) {
      std::ofstream out(config.output, std::ios::binary);
      if (!out) throw vec2topic::Error("cannot write " + config.output);
      out << (config.format == "tsv" ? vec2topic::report_to_tsv(report)
                                     : vec2topic::report_to_json(report));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
