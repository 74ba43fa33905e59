#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vec2topic/corpus.hpp"

namespace vec2topic {

enum class KbFormat { text, binary };

// Pretrained knowledge-base vectors, filtered to the requested words while
// scanning so memory scales with the corpus vocabulary, not the file.
struct KbVectors {
  std::size_t dim = 0;  // kappa
  std::unordered_map<std::string, std::vector<float>> vectors;
};

// File layout, both formats: a "count dim" header line. Text records are
// "word v1 ... vdim" lines; binary records are the word string, one space,
// then dim little-endian 32-bit floats. Throws FormatError with the
// offending line/offset.
KbVectors load_kb_vectors(const std::filesystem::path& path,
                          const std::unordered_set<std::string>& wanted,
                          KbFormat format = KbFormat::text);

struct SkipGramOptions {
  int dim = 25;  // lambda
  int window = 5;
  int epochs = 15;
  int negatives = 5;
  std::uint64_t seed = 1;
  double initial_lr = 0.025;     // linear decay to initial_lr * 1e-4
  double subsample = 1e-3;       // frequent-word subsampling threshold
  double unigram_power = 0.75;   // negative-sampling table exponent
  std::uint64_t min_count = 3;
  int threads = 1;  // > 1 trains hogwild-style and forfeits determinism
};

// Local skip-gram vectors, indexed by corpus word id; words below min_count
// get an empty slot. deterministic is false iff threads > 1 was used.
struct LocalEmbeddings {
  std::size_t dim = 0;  // lambda
  std::vector<std::vector<float>> vectors;
  bool deterministic = true;
  bool has(WordId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < vectors.size() &&
           !vectors[static_cast<std::size_t>(id)].empty();
  }
};

// Skip-gram with negative sampling over the corpus sentences; context
// windows never cross a sentence boundary. Identical corpus + options with
// threads == 1 give bit-identical vectors.
LocalEmbeddings train_local_embeddings(const Corpus& corpus, const SkipGramOptions& options);

// Negative-sampling objective for one (center, positive context, negatives)
// triple:
//   L = log sigmoid(center . pos) + sum_i log sigmoid(-center . neg_i)
// The trainer ascends these gradients; exposed in double precision so the
// update rule can be checked against finite differences.
double sgns_objective(std::span<const double> center, std::span<const double> positive,
                      const std::vector<std::vector<double>>& negatives);

struct SgnsGradients {
  std::vector<double> d_center;
  std::vector<double> d_positive;
  std::vector<std::vector<double>> d_negatives;
};

SgnsGradients sgns_gradients(std::span<const double> center, std::span<const double> positive,
                             const std::vector<std::vector<double>>& negatives);

// Concatenated rows w = [kb(v); local(v)] over the noun vocabulary, in
// noun_ids order minus drops. Row-major storage.
struct EmbeddingSet {
  std::vector<WordId> words;
  std::size_t kb_dim = 0;     // kappa
  std::size_t local_dim = 0;  // lambda; 0 in kb_only mode
  std::vector<double> data;

  std::size_t dim() const { return kb_dim + local_dim; }
  std::size_t rows() const { return words.size(); }
  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * dim(), dim()};
  }
};

struct ConcatResult {
  EmbeddingSet set;
  std::vector<WordId> dropped;  // noun words absent from the knowledge base
};

// kb_only skips the local part entirely (d = kappa). Words of V missing
// from the knowledge base are dropped and reported; throws
// EmptyEmbeddingSet when fewer than two rows survive.
ConcatResult concat_embeddings(const Corpus& corpus, const std::vector<WordId>& noun_ids,
                               const KbVectors& kb, const LocalEmbeddings& local,
                               bool kb_only);

// 1 - x.y / (|x| |y|), in [0, 2]. Throws ZeroVector.
double cosine_distance(std::span<const double> x, std::span<const double> y);

}  // namespace vec2topic
