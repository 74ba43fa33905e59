#pragma once

// Independent reference implementations used only by tests. Each oracle
// recomputes its answer from first principles rather than reusing the
// library's incremental algorithms.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "vec2topic/clustering.hpp"
#include "vec2topic/corpus.hpp"
#include "vec2topic/embeddings.hpp"
#include "vec2topic/rng.hpp"

namespace oracles {

using vec2topic::WordId;

// Greedy average-linkage clustering, O(n^3)-ish: every step rescans all
// cluster pairs and recomputes the linkage as a fresh mean over leaf-pair
// cosine distances. Ties take the lexicographically smallest cluster pair.
struct NaiveMerge {
  std::vector<int> left_leaves;
  std::vector<int> right_leaves;
  double distance = 0.0;
};

inline std::vector<NaiveMerge> naive_average_linkage(const vec2topic::EmbeddingSet& emb) {
  const std::size_t n = emb.rows();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d[i][j] = d[j][i] = vec2topic::cosine_distance(emb.row(i), emb.row(j));

  std::vector<std::vector<int>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {static_cast<int>(i)};

  std::vector<NaiveMerge> merges;
  while (clusters.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best = -1.0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double sum = 0.0;
        for (int i : clusters[a])
          for (int j : clusters[b]) sum += d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const double linkage =
            sum / (static_cast<double>(clusters[a].size()) * static_cast<double>(clusters[b].size()));
        if (best < 0.0 || linkage < best) {
          best = linkage;
          best_a = a;
          best_b = b;
        }
      }
    }
    NaiveMerge m;
    m.left_leaves = clusters[best_a];
    m.right_leaves = clusters[best_b];
    m.distance = best;
    merges.push_back(m);
    std::vector<int> merged = clusters[best_a];
    merged.insert(merged.end(), clusters[best_b].begin(), clusters[best_b].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
    clusters[best_a] = std::move(merged);
  }
  return merges;
}

// Canonical form of a tree: the sorted family of leaf sets, one per
// internal node. Two dendrograms are topologically equal iff these match.
inline std::vector<std::vector<int>> leaf_set_family(const vec2topic::Dendrogram& dend) {
  std::vector<std::vector<int>> sets(dend.nodes.size());
  for (std::size_t i = 0; i < dend.leaf_count; ++i) sets[i] = {static_cast<int>(i)};
  for (std::size_t i = dend.leaf_count; i < dend.nodes.size(); ++i) {
    const auto& node = dend.nodes[i];
    sets[i] = sets[static_cast<std::size_t>(node.left)];
    const auto& right = sets[static_cast<std::size_t>(node.right)];
    sets[i].insert(sets[i].end(), right.begin(), right.end());
    std::sort(sets[i].begin(), sets[i].end());
  }
  std::vector<std::vector<int>> family(sets.begin() + static_cast<std::ptrdiff_t>(dend.leaf_count),
                                       sets.end());
  std::sort(family.begin(), family.end());
  return family;
}

inline std::vector<std::vector<int>> leaf_set_family(const std::vector<NaiveMerge>& merges) {
  std::vector<std::vector<int>> family;
  for (const auto& m : merges) {
    std::vector<int> s = m.left_leaves;
    s.insert(s.end(), m.right_leaves.begin(), m.right_leaves.end());
    std::sort(s.begin(), s.end());
    family.push_back(std::move(s));
  }
  std::sort(family.begin(), family.end());
  return family;
}

// Depths from a naive merge list: every time a cluster is merged, all the
// leaves it already contains move one link further from the eventual root.
inline std::vector<int> naive_depths(const std::vector<NaiveMerge>& merges, std::size_t n) {
  std::vector<int> depth(n, 0);
  for (const auto& m : merges) {
    for (int i : m.left_leaves) depth[static_cast<std::size_t>(i)]++;
    for (int i : m.right_leaves) depth[static_cast<std::size_t>(i)]++;
  }
  return depth;
}

// Leaf depths found by walking upward through an inverted child -> parent
// index, one leaf at a time.
inline std::vector<int> upward_walk_depths(const vec2topic::Dendrogram& dend) {
  std::vector<int> parent(dend.nodes.size(), -1);
  for (std::size_t i = dend.leaf_count; i < dend.nodes.size(); ++i) {
    parent[static_cast<std::size_t>(dend.nodes[i].left)] = static_cast<int>(i);
    parent[static_cast<std::size_t>(dend.nodes[i].right)] = static_cast<int>(i);
  }
  std::vector<int> depth(dend.leaf_count, 0);
  for (std::size_t leaf = 0; leaf < dend.leaf_count; ++leaf) {
    int links = 0;
    for (int at = static_cast<int>(leaf); parent[static_cast<std::size_t>(at)] != -1;
         at = parent[static_cast<std::size_t>(at)])
      ++links;
    depth[leaf] = links;
  }
  return depth;
}

// Degree by brute force: enumerate every unordered word pair in every
// sentence, then count distinct partners per word.
inline std::map<WordId, std::int64_t> brute_force_degrees(
    const vec2topic::Corpus& corpus, const std::vector<WordId>& subjects,
    bool nouns_only = false, const std::vector<bool>* is_noun = nullptr) {
  std::set<std::pair<WordId, WordId>> pairs;
  for (const auto& doc : corpus.documents)
    for (const auto& sentence : doc.sentences)
      for (std::size_t i = 0; i < sentence.size(); ++i)
        for (std::size_t j = 0; j < sentence.size(); ++j)
          if (sentence[i] != sentence[j]) pairs.insert({sentence[i], sentence[j]});

  std::map<WordId, std::int64_t> degree;
  for (WordId v : subjects) degree[v] = 0;
  for (const auto& [a, b] : pairs) {
    if (!degree.count(a)) continue;
    if (nouns_only && !(*is_noun)[static_cast<std::size_t>(b)]) continue;
    degree[a]++;
  }
  return degree;
}

// Central finite differences of a scalar function of one vector entry.
template <typename F>
double central_difference(F&& f, std::vector<double>& x, std::size_t i, double h = 1e-6) {
  const double saved = x[i];
  x[i] = saved + h;
  const double up = f();
  x[i] = saved - h;
  const double down = f();
  x[i] = saved;
  return (up - down) / (2.0 * h);
}

// Random unit vectors, optionally clustered at a given angular radius
// around a center direction.
inline std::vector<double> random_unit_vector(vec2topic::Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  double norm = 0.0;
  for (auto& x : v) {
    x = rng.gaussian();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

inline std::vector<double> vector_at_angle(vec2topic::Rng& rng, const std::vector<double>& center,
                                           double theta) {
  const std::size_t d = center.size();
  std::vector<double> w = random_unit_vector(rng, d);
  double dot = 0.0;
  for (std::size_t i = 0; i < d; ++i) dot += w[i] * center[i];
  double norm = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    w[i] -= dot * center[i];
    norm += w[i] * w[i];
  }
  norm = std::sqrt(norm);
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i)
    out[i] = std::cos(theta) * center[i] + std::sin(theta) * (w[i] / norm);
  return out;
}

inline vec2topic::EmbeddingSet embedding_set_from_rows(
    const std::vector<std::vector<double>>& rows) {
  vec2topic::EmbeddingSet set;
  set.kb_dim = rows.empty() ? 0 : rows[0].size();
  set.local_dim = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    set.words.push_back(static_cast<WordId>(i));
    set.data.insert(set.data.end(), rows[i].begin(), rows[i].end());
  }
  return set;
}

}  // namespace oracles
