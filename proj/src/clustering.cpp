#include "vec2topic/clustering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "vec2topic/errors.hpp"
#include "vec2topic/rng.hpp"

namespace vec2topic {

namespace {

// Rows scaled to unit norm; the set is copied, never modified in place.
std::vector<double> unit_rows(const EmbeddingSet& emb) {
  const std::size_t n = emb.rows();
  const std::size_t d = emb.dim();
  std::vector<double> out(n * d);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = emb.row(r);
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) norm += row[i] * row[i];
    if (norm == 0.0)
      throw ZeroVector("row " + std::to_string(r) + " is the zero vector");
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) out[r * d + i] = row[i] / norm;
  }
  return out;
}

void parallel_rows(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Condensed upper-triangle index for i < j.
inline std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Pairwise cosine distances; each entry independent, so any thread count
// yields identical bits.
std::vector<double> condensed_cosine(const EmbeddingSet& emb, int threads) {
  const std::size_t n = emb.rows();
  const std::size_t d = emb.dim();
  const std::vector<double> unit = unit_rows(emb);
  std::vector<double> dist(n * (n - 1) / 2);
  parallel_rows(n - 1, threads, [&](std::size_t i) {
    const double* xi = unit.data() + i * d;
    std::size_t base = condensed_index(n, i, i + 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* xj = unit.data() + j * d;
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += xi[k] * xj[k];
      dist[base + (j - i - 1)] = 1.0 - dot;
    }
  });
  return dist;
}

struct MergeStep {
  std::int32_t a = 0;  // representative point indices at merge time
  std::int32_t b = 0;
  double distance = 0.0;
};

// Nearest-neighbor chain over a condensed distance matrix. D is consumed:
// entries are rewritten by the Lance-Williams update for the chosen linkage.
// The smaller representative index is retired at each merge.
std::vector<MergeStep> nn_chain(std::vector<double>& dist, std::size_t n, Linkage linkage) {
  auto d_at = [&](std::size_t i, std::size_t j) -> double& {
    return i < j ? dist[condensed_index(n, i, j)] : dist[condensed_index(n, j, i)];
  };

  std::vector<std::size_t> next(n + 1), prev(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    next[i] = i + 1;
    prev[i] = i == 0 ? 0 : i - 1;
  }
  std::size_t start = 0;
  auto remove_active = [&](std::size_t i) {
    if (i == start) {
      start = next[i];
    } else {
      next[prev[i]] = next[i];
      prev[next[i]] = prev[i];
    }
  };

  std::vector<double> size(n, 1.0);
  std::vector<std::size_t> chain;
  chain.reserve(n);
  std::vector<MergeStep> merges;
  merges.reserve(n - 1);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    if (chain.size() < 2) {
      chain.clear();
      chain.push_back(start);
    }
    for (;;) {
      const std::size_t tip = chain.back();
      // Nearest active neighbor of tip; ascending scan with strict < keeps
      // the smallest index on ties.
      std::size_t nearest = tip == start ? next[tip] : start;
      double best = d_at(tip, nearest);
      for (std::size_t i = next[start == tip ? next[tip] : start]; i < n; i = next[i]) {
        if (i == tip) continue;
        const double dij = d_at(tip, i);
        if (dij < best) {
          best = dij;
          nearest = i;
        }
      }
      if (chain.size() >= 2 && nearest == chain[chain.size() - 2]) {
        // Mutual nearest neighbors: merge tip with chain[-2].
        std::size_t a = chain[chain.size() - 2];
        std::size_t b = tip;
        chain.pop_back();
        chain.pop_back();
        if (a > b) std::swap(a, b);
        merges.push_back({static_cast<std::int32_t>(a), static_cast<std::int32_t>(b), best});

        const double sa = size[a];
        const double sb = size[b];
        size[b] = sa + sb;
        remove_active(a);
        for (std::size_t i = start; i < n; i = next[i]) {
          if (i == b) continue;
          double& target = d_at(i, b);
          const double other = d_at(i, a);
          switch (linkage) {
            case Linkage::single:
              target = std::min(target, other);
              break;
            case Linkage::complete:
              target = std::max(target, other);
              break;
            case Linkage::average:
              target = (sa * other + sb * target) / (sa + sb);
              break;
          }
        }
        break;
      }
      chain.push_back(nearest);
    }
  }
  return merges;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t leaves)
      : parent_(2 * leaves - 1, -1), next_label_(static_cast<std::int32_t>(leaves)) {}

  std::int32_t find(std::int32_t x) {
    std::int32_t root = x;
    while (parent_[static_cast<std::size_t>(root)] >= 0)
      root = parent_[static_cast<std::size_t>(root)];
    while (parent_[static_cast<std::size_t>(x)] >= 0) {
      std::int32_t up = parent_[static_cast<std::size_t>(x)];
      parent_[static_cast<std::size_t>(x)] = root;
      x = up;
    }
    return root;
  }

  std::int32_t merge(std::int32_t a, std::int32_t b) {
    parent_[static_cast<std::size_t>(a)] = next_label_;
    parent_[static_cast<std::size_t>(b)] = next_label_;
    return next_label_++;
  }

 private:
  std::vector<std::int32_t> parent_;
  std::int32_t next_label_;
};

}  // namespace

Dendrogram agglomerative_cluster(const EmbeddingSet& emb, Linkage linkage, int threads) {
  const std::size_t n = emb.rows();
  if (n < 2) throw TooFewWords("agglomerative clustering needs at least 2 words, got " +
                               std::to_string(n));

  std::vector<double> dist = condensed_cosine(emb, threads);
  std::vector<MergeStep> merges = nn_chain(dist, n, linkage);
  std::stable_sort(merges.begin(), merges.end(),
                   [](const MergeStep& a, const MergeStep& b) { return a.distance < b.distance; });

  Dendrogram dend;
  dend.leaf_count = n;
  dend.leaf_words = emb.words;
  dend.nodes.resize(2 * n - 1);

  UnionFind uf(n);
  for (std::size_t k = 0; k < merges.size(); ++k) {
    std::int32_t left = uf.find(merges[k].a);
    std::int32_t right = uf.find(merges[k].b);
    if (left > right) std::swap(left, right);
    DendrogramNode& node = dend.nodes[n + k];
    node.left = left;
    node.right = right;
    node.distance = merges[k].distance;
    uf.merge(left, right);
  }
  return dend;
}

std::vector<int> compute_depths(const Dendrogram& dendrogram) {
  const std::size_t total = dendrogram.nodes.size();
  const std::size_t n = dendrogram.leaf_count;
  std::vector<int> depth(total, 0);
  // Children always precede their parent, so one descending pass settles
  // every node's link count from the root.
  for (std::size_t idx = total; idx-- > n;) {
    const DendrogramNode& node = dendrogram.nodes[idx];
    depth[static_cast<std::size_t>(node.left)] = depth[idx] + 1;
    depth[static_cast<std::size_t>(node.right)] = depth[idx] + 1;
  }
  depth.resize(n);
  return depth;
}

TopicAssignment kmeans_cluster(const EmbeddingSet& emb, int K, std::uint64_t seed, int max_iter,
                               int threads) {
  const std::size_t n = emb.rows();
  const std::size_t d = emb.dim();
  if (K < 2 || static_cast<std::size_t>(K) > n)
    throw KTooLarge("K=" + std::to_string(K) + " outside [2, " + std::to_string(n) + "]");

  const std::vector<double> unit = unit_rows(emb);
  auto point = [&](std::size_t i) { return unit.data() + i * d; };
  auto sq_dist = [&](const double* a, const double* b) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = a[k] - b[k];
      s += diff * diff;
    }
    return s;
  };

  // k-means++ seeding.
  Rng rng(seed);
  std::vector<std::vector<double>> centroids;
  centroids.reserve(static_cast<std::size_t>(K));
  std::vector<bool> is_center(n, false);
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  centroids.emplace_back(point(first), point(first) + d);
  is_center[first] = true;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(point(i), centroids[0].data());
  for (int k = 1; k < K; ++k) {
    double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t chosen = n;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum >= r && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    }
    if (chosen == n) {
      // Rounding pushed r past the accumulated mass, or every remaining
      // point duplicates a center. Prefer the last positive-weight point.
      for (std::size_t i = n; i-- > 0;)
        if (d2[i] > 0.0) {
          chosen = i;
          break;
        }
    }
    if (chosen == n) {
      for (std::size_t i = 0; i < n; ++i)
        if (!is_center[i]) {
          chosen = i;
          break;
        }
    }
    is_center[chosen] = true;
    centroids.emplace_back(point(chosen), point(chosen) + d);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], sq_dist(point(i), centroids.back().data()));
  }

  std::vector<int> assign(n, 0);
  auto assign_all = [&](std::vector<int>& out) {
    parallel_rows(n, threads, [&](std::size_t i) {
      int best = 0;
      double best_d = sq_dist(point(i), centroids[0].data());
      for (int k = 1; k < K; ++k) {
        const double dk = sq_dist(point(i), centroids[static_cast<std::size_t>(k)].data());
        if (dk < best_d) {
          best_d = dk;
          best = k;
        }
      }
      out[i] = best;
    });
  };
  auto objective = [&](const std::vector<int>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += sq_dist(point(i), centroids[static_cast<std::size_t>(a[i])].data());
    return s;
  };
  std::vector<double> trace;
  assign_all(assign);
  trace.push_back(objective(assign));

  std::vector<int> fresh(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    // Centroids as plain means of members; inputs stay unit-normalized,
    // centroids do not.
    std::vector<std::size_t> members(static_cast<std::size_t>(K), 0);
    for (auto& c : centroids) std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = centroids[static_cast<std::size_t>(assign[i])];
      const double* p = point(i);
      for (std::size_t k = 0; k < d; ++k) c[k] += p[k];
      members[static_cast<std::size_t>(assign[i])]++;
    }
    for (int k = 0; k < K; ++k)
      if (members[static_cast<std::size_t>(k)] > 0)
        for (auto& v : centroids[static_cast<std::size_t>(k)])
          v /= static_cast<double>(members[static_cast<std::size_t>(k)]);

    // Reseed empty clusters with the point farthest from its own centroid.
    for (int k = 0; k < K; ++k) {
      if (members[static_cast<std::size_t>(k)] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (members[static_cast<std::size_t>(assign[i])] <= 1) continue;
        const double di =
            sq_dist(point(i), centroids[static_cast<std::size_t>(assign[i])].data());
        if (di > far_d) {
          far_d = di;
          far = i;
        }
      }
      members[static_cast<std::size_t>(assign[far])]--;
      assign[far] = k;
      members[static_cast<std::size_t>(k)] = 1;
      centroids[static_cast<std::size_t>(k)].assign(point(far), point(far) + d);
    }

    assign_all(fresh);
    trace.push_back(objective(fresh));
    if (fresh == assign) break;
    assign.swap(fresh);
  }

  // The iteration cap can leave a cluster emptied by the last reassignment;
  // the no-empty-cluster contract still has to hold.
  {
    std::vector<std::size_t> members(static_cast<std::size_t>(K), 0);
    for (int a : assign) members[static_cast<std::size_t>(a)]++;
    for (int k = 0; k < K; ++k) {
      if (members[static_cast<std::size_t>(k)] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (members[static_cast<std::size_t>(assign[i])] <= 1) continue;
        const double di =
            sq_dist(point(i), centroids[static_cast<std::size_t>(assign[i])].data());
        if (di > far_d) {
          far_d = di;
          far = i;
        }
      }
      members[static_cast<std::size_t>(assign[far])]--;
      assign[far] = k;
      members[static_cast<std::size_t>(k)] = 1;
      centroids[static_cast<std::size_t>(k)].assign(point(far), point(far) + d);
    }
  }

  TopicAssignment result;
  result.words = emb.words;
  result.cluster = std::move(assign);
  result.centroids = std::move(centroids);
  result.objective_trace = std::move(trace);
  return result;
}

}  // namespace vec2topic
