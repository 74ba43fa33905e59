#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vec2topic/clustering.hpp"
#include "vec2topic/corpus.hpp"

namespace vec2topic {

using DepthMap = std::unordered_map<WordId, int>;
using DegreeMap = std::unordered_map<WordId, std::int64_t>;

enum class DegreeUniverse { full, nouns };

// degree(v) = number of distinct words sharing at least one sentence with v,
// self excluded; repeated co-occurrence counts once. Neighbors are counted
// over the full vocabulary by default, or restricted to V with
// DegreeUniverse::nouns.
DegreeMap compute_degrees(const Corpus& corpus, const Vocabulary& vocab,
                          DegreeUniverse universe = DegreeUniverse::full);

enum class NormalizationMode { fixed, median };

struct Normalization {
  double alpha = 1.0;
  double beta = 1.0;
  bool alpha_fallback = false;  // median was 0 or 1, exponent undefined
  bool beta_fallback = false;
};

// fixed -> (1, 1). median -> exponents that move the lower median of the
// normalized depth (resp. log-degree) ratio to 1/2, falling back to 1 where
// the median ratio is 0 or 1.
Normalization fit_normalization(const DepthMap& depths, const DegreeMap& degrees,
                                NormalizationMode mode);

struct ScoreRow {
  int depth = 0;
  std::int64_t degree = 0;
  double score = 0.0;
};

struct ScoreTable {
  std::unordered_map<WordId, ScoreRow> rows;
  double alpha = 1.0;
  double beta = 1.0;
};

// score(v) = (depth/max_depth)^alpha * (log(1+degree)/log(1+max_degree))^beta.
// Both maps must share a key set; throws DegenerateCorpus when max degree
// is 0.
ScoreTable score_words(const DepthMap& depths, const DegreeMap& degrees, double alpha,
                       double beta);

struct Topic {
  int cluster_id = 0;
  double score = 0.0;              // mean word score
  std::vector<WordId> words;       // descending word score, ties lexicographic
};

struct TopicModel {
  std::vector<Topic> topics;  // descending topic score, ties by cluster id
};

using WordName = std::function<const std::string&(WordId)>;

// Mean word score per cluster; topics sorted by descending score (ties by
// smaller cluster id), words within a topic by descending word score (ties
// lexicographic). Every assigned word must have a score row.
TopicModel rank_topics(const TopicAssignment& assignment, const ScoreTable& scores,
                       const WordName& name);

}  // namespace vec2topic
