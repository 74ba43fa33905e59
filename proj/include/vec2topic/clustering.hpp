#pragma once

#include <cstdint>
#include <vector>

#include "vec2topic/embeddings.hpp"

namespace vec2topic {

enum class Linkage { single, complete, average };

// Binary merge tree. Nodes 0..leaf_count-1 are leaves (children -1) and
// carry the word id of the matching EmbeddingSet row; node leaf_count + k is
// the k-th merge in ascending-distance order; the root is the last node.
struct DendrogramNode {
  std::int32_t left = -1;
  std::int32_t right = -1;
  double distance = 0.0;
};

struct Dendrogram {
  std::size_t leaf_count = 0;
  std::vector<WordId> leaf_words;
  std::vector<DendrogramNode> nodes;  // 2 * leaf_count - 1
  const DendrogramNode& root() const { return nodes.back(); }
};

struct TopicAssignment {
  std::vector<WordId> words;                   // row -> word id
  std::vector<int> cluster;                    // row -> cluster in [0, K)
  std::vector<std::vector<double>> centroids;  // K x d
  std::vector<double> objective_trace;         // per assignment step, non-increasing
  int k() const { return static_cast<int>(centroids.size()); }
};

// Euclidean K-means on unit-normalized copies of the rows (the original set
// is untouched). k-means++ init from seed, Lloyd iterations to an assignment
// fixpoint or max_iter, empty clusters reseeded to the point farthest from
// its centroid. The returned assignment has no empty cluster. Throws
// KTooLarge unless 2 <= K <= rows.
TopicAssignment kmeans_cluster(const EmbeddingSet& emb, int K, std::uint64_t seed,
                               int max_iter = 300, int threads = 1);

// Agglomerative clustering over cosine distance with the nearest-neighbor
// chain construction; O(n^2) after the distance matrix. The merge sequence
// matches the naive greedy algorithm up to exchanges of exactly-tied merges.
// Throws TooFewWords for fewer than two rows.
Dendrogram agglomerative_cluster(const EmbeddingSet& emb, Linkage linkage = Linkage::average,
                                 int threads = 1);

// Links from each leaf to the root of the unit-link tree, indexed by leaf.
// Single top-down pass.
std::vector<int> compute_depths(const Dendrogram& dendrogram);

}  // namespace vec2topic
