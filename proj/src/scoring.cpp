#include "vec2topic/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "vec2topic/errors.hpp"

namespace vec2topic {

DegreeMap compute_degrees(const Corpus& corpus, const Vocabulary& vocab,
                          DegreeUniverse universe) {
  std::unordered_map<WordId, std::unordered_set<WordId>> neighbors;
  neighbors.reserve(vocab.noun_size());
  for (WordId v : vocab.noun_ids) neighbors.emplace(v, std::unordered_set<WordId>{});

  std::vector<WordId> distinct;
  for (const auto& doc : corpus.documents) {
    for (const auto& sentence : doc.sentences) {
      distinct.assign(sentence.begin(), sentence.end());
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (WordId v : distinct) {
        auto it = neighbors.find(v);
        if (it == neighbors.end()) continue;
        for (WordId u : distinct) {
          if (u == v) continue;
          if (universe == DegreeUniverse::nouns && !vocab.is_noun[static_cast<std::size_t>(u)])
            continue;
          it->second.insert(u);
        }
      }
    }
  }

  DegreeMap degrees;
  degrees.reserve(neighbors.size());
  for (const auto& [v, set] : neighbors) degrees[v] = static_cast<std::int64_t>(set.size());
  return degrees;
}

namespace {

// Lower median: no interpolation for even counts.
double lower_median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

double median_exponent(double median_ratio, bool& fallback) {
  if (!(median_ratio > 0.0) || median_ratio >= 1.0) {
    fallback = true;
    return 1.0;
  }
  return std::log(0.5) / std::log(median_ratio);
}

}  // namespace

Normalization fit_normalization(const DepthMap& depths, const DegreeMap& degrees,
                                NormalizationMode mode) {
  Normalization norm;
  if (mode == NormalizationMode::fixed) return norm;
  if (depths.empty() || degrees.empty()) return norm;

  int max_depth = 0;
  for (const auto& [w, d] : depths) max_depth = std::max(max_depth, d);
  std::int64_t max_degree = 0;
  for (const auto& [w, g] : degrees) max_degree = std::max(max_degree, g);

  std::vector<double> depth_ratios;
  depth_ratios.reserve(depths.size());
  for (const auto& [w, d] : depths)
    depth_ratios.push_back(static_cast<double>(d) / static_cast<double>(max_depth));
  norm.alpha = median_exponent(lower_median(std::move(depth_ratios)), norm.alpha_fallback);

  if (max_degree <= 0) {
    norm.beta_fallback = true;
    return norm;
  }
  const double log_max = std::log1p(static_cast<double>(max_degree));
  std::vector<double> degree_ratios;
  degree_ratios.reserve(degrees.size());
  for (const auto& [w, g] : degrees)
    degree_ratios.push_back(std::log1p(static_cast<double>(g)) / log_max);
  norm.beta = median_exponent(lower_median(std::move(degree_ratios)), norm.beta_fallback);
  return norm;
}

ScoreTable score_words(const DepthMap& depths, const DegreeMap& degrees, double alpha,
                       double beta) {
  if (depths.size() != degrees.size())
    throw Error("score_words: depth and degree maps differ in size");

  int max_depth = 0;
  std::int64_t max_degree = 0;
  for (const auto& [w, d] : depths) {
    auto it = degrees.find(w);
    if (it == degrees.end()) throw Error("score_words: degree missing for a scored word");
    max_depth = std::max(max_depth, d);
    max_degree = std::max(max_degree, it->second);
  }
  if (max_degree == 0)
    throw DegenerateCorpus("no word co-occurs with anything; degree is 0 everywhere");
  if (max_depth <= 0) throw Error("score_words: max depth must be positive");

  const double log_max_degree = std::log1p(static_cast<double>(max_degree));
  ScoreTable table;
  table.alpha = alpha;
  table.beta = beta;
  table.rows.reserve(depths.size());
  for (const auto& [w, d] : depths) {
    const std::int64_t g = degrees.at(w);
    const double depth_part =
        std::pow(static_cast<double>(d) / static_cast<double>(max_depth), alpha);
    const double degree_part =
        std::pow(std::log1p(static_cast<double>(g)) / log_max_degree, beta);
    table.rows[w] = ScoreRow{d, g, depth_part * degree_part};
  }
  return table;
}

TopicModel rank_topics(const TopicAssignment& assignment, const ScoreTable& scores,
                       const WordName& name) {
  const int K = assignment.k();
  std::vector<Topic> topics(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) topics[static_cast<std::size_t>(k)].cluster_id = k;

  for (std::size_t i = 0; i < assignment.words.size(); ++i) {
    const WordId w = assignment.words[i];
    if (!scores.rows.count(w))
      throw Error("rank_topics: no score for word \"" + name(w) + "\"");
    topics[static_cast<std::size_t>(assignment.cluster[i])].words.push_back(w);
  }

  TopicModel model;
  for (auto& topic : topics) {
    if (topic.words.empty()) continue;
    double sum = 0.0;
    for (WordId w : topic.words) sum += scores.rows.at(w).score;
    topic.score = sum / static_cast<double>(topic.words.size());
    std::sort(topic.words.begin(), topic.words.end(), [&](WordId a, WordId b) {
      const double sa = scores.rows.at(a).score;
      const double sb = scores.rows.at(b).score;
      if (sa != sb) return sa > sb;
      return name(a) < name(b);
    });
    model.topics.push_back(std::move(topic));
  }
  std::sort(model.topics.begin(), model.topics.end(), [](const Topic& a, const Topic& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.cluster_id < b.cluster_id;
  });
  return model;
}

}  // namespace vec2topic
