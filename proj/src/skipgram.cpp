#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vec2topic/embeddings.hpp"
#include "vec2topic/errors.hpp"
#include "vec2topic/rng.hpp"

namespace vec2topic {

namespace {

constexpr std::size_t kUnigramTableSize = 1u << 20;

struct TrainState {
  // Compact trainable vocabulary: word id <-> row index.
  std::vector<WordId> row_to_word;
  std::vector<std::int32_t> word_to_row;  // -1 when below min_count
  std::vector<std::uint64_t> counts;      // per row
  std::uint64_t total_tokens = 0;         // trainable occurrences

  std::vector<float> syn0;  // input vectors, the published embeddings
  std::vector<float> syn1;  // output vectors
  std::vector<std::int32_t> unigram_table;
  std::vector<double> keep_prob;  // subsampling, per row

  std::atomic<std::uint64_t> processed{0};
};

void build_unigram_table(TrainState& state, double power) {
  state.unigram_table.resize(kUnigramTableSize);
  double total_pow = 0.0;
  for (std::uint64_t c : state.counts) total_pow += std::pow(static_cast<double>(c), power);
  std::size_t row = 0;
  double cumulative = std::pow(static_cast<double>(state.counts[0]), power) / total_pow;
  for (std::size_t i = 0; i < kUnigramTableSize; ++i) {
    state.unigram_table[i] = static_cast<std::int32_t>(row);
    if (static_cast<double>(i) / kUnigramTableSize > cumulative && row + 1 < state.counts.size()) {
      ++row;
      cumulative += std::pow(static_cast<double>(state.counts[row]), power) / total_pow;
    }
  }
}

// One worker over a slice of documents. With a single worker this is the
// deterministic path; with several, updates race hogwild-style.
void train_worker(const Corpus& corpus, const SkipGramOptions& opt, TrainState& state,
                  int worker, int workers) {
  const std::size_t dim = static_cast<std::size_t>(opt.dim);
  Rng rng(opt.seed + 0x10001ULL * static_cast<std::uint64_t>(worker + 1));
  const std::uint64_t planned =
      static_cast<std::uint64_t>(opt.epochs) * state.total_tokens + 1;
  std::vector<std::int32_t> sentence;
  std::vector<float> hidden_grad(dim);

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    for (std::size_t di = static_cast<std::size_t>(worker); di < corpus.documents.size();
         di += static_cast<std::size_t>(workers)) {
      for (const auto& raw : corpus.documents[di].sentences) {
        sentence.clear();
        for (WordId id : raw) {
          std::int32_t row = state.word_to_row[static_cast<std::size_t>(id)];
          if (row < 0) continue;
          state.processed.fetch_add(1, std::memory_order_relaxed);
          if (opt.subsample > 0 && state.keep_prob[static_cast<std::size_t>(row)] < rng.uniform())
            continue;
          sentence.push_back(row);
        }
        const int len = static_cast<int>(sentence.size());
        for (int pos = 0; pos < len; ++pos) {
          const double progress =
              static_cast<double>(state.processed.load(std::memory_order_relaxed)) / planned;
          float lr = static_cast<float>(opt.initial_lr * std::max(1e-4, 1.0 - progress));
          const int shrink = static_cast<int>(rng.below(static_cast<std::uint64_t>(opt.window)));
          const int span = opt.window - shrink;
          const std::int32_t center = sentence[static_cast<std::size_t>(pos)];
          for (int off = -span; off <= span; ++off) {
            if (off == 0) continue;
            const int ctx_pos = pos + off;
            if (ctx_pos < 0 || ctx_pos >= len) continue;
            const std::size_t in_row =
                static_cast<std::size_t>(sentence[static_cast<std::size_t>(ctx_pos)]) * dim;
            std::fill(hidden_grad.begin(), hidden_grad.end(), 0.0f);
            for (int k = 0; k <= opt.negatives; ++k) {
              std::int32_t target;
              float label;
              if (k == 0) {
                target = center;
                label = 1.0f;
              } else {
                target = state.unigram_table[rng.below(kUnigramTableSize)];
                if (target == center) continue;
                label = 0.0f;
              }
              const std::size_t out_row = static_cast<std::size_t>(target) * dim;
              float f = 0.0f;
              for (std::size_t i = 0; i < dim; ++i)
                f += state.syn0[in_row + i] * state.syn1[out_row + i];
              const float g = (label - 1.0f / (1.0f + std::exp(-f))) * lr;
              for (std::size_t i = 0; i < dim; ++i)
                hidden_grad[i] += g * state.syn1[out_row + i];
              for (std::size_t i = 0; i < dim; ++i)
                state.syn1[out_row + i] += g * state.syn0[in_row + i];
            }
            for (std::size_t i = 0; i < dim; ++i) state.syn0[in_row + i] += hidden_grad[i];
          }
        }
      }
    }
  }
}

}  // namespace

LocalEmbeddings train_local_embeddings(const Corpus& corpus, const SkipGramOptions& opt) {
  if (corpus.total_tokens() == 0) throw EmptyCorpus("cannot train embeddings on an empty corpus");

  const auto counts = corpus.count_tokens();
  TrainState state;
  state.word_to_row.assign(corpus.table_size(), -1);
  for (std::size_t id = 0; id < counts.size(); ++id) {
    if (counts[id] >= opt.min_count) {
      state.word_to_row[id] = static_cast<std::int32_t>(state.row_to_word.size());
      state.row_to_word.push_back(static_cast<WordId>(id));
      state.counts.push_back(counts[id]);
      state.total_tokens += counts[id];
    }
  }

  LocalEmbeddings out;
  out.dim = static_cast<std::size_t>(opt.dim);
  out.vectors.resize(corpus.table_size());
  if (state.row_to_word.empty()) return out;

  const std::size_t dim = static_cast<std::size_t>(opt.dim);
  const std::size_t rows = state.row_to_word.size();
  state.syn0.resize(rows * dim);
  state.syn1.assign(rows * dim, 0.0f);
  Rng init_rng(opt.seed);
  for (auto& w : state.syn0)
    w = static_cast<float>((init_rng.uniform() - 0.5) / static_cast<double>(dim));

  build_unigram_table(state, opt.unigram_power);

  state.keep_prob.resize(rows);
  const double sample_floor = opt.subsample * static_cast<double>(state.total_tokens);
  for (std::size_t r = 0; r < rows; ++r) {
    const double c = static_cast<double>(state.counts[r]);
    state.keep_prob[r] =
        opt.subsample > 0 ? (std::sqrt(c / sample_floor) + 1.0) * sample_floor / c : 1.0;
  }

  const int workers = std::max(1, opt.threads);
  if (workers == 1) {
    train_worker(corpus, opt, state, 0, 1);
  } else {
    out.deterministic = false;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(train_worker, std::cref(corpus), std::cref(opt), std::ref(state), w,
                        workers);
    for (auto& t : pool) t.join();
  }

  for (std::size_t r = 0; r < rows; ++r) {
    auto& vec = out.vectors[static_cast<std::size_t>(state.row_to_word[r])];
    vec.assign(state.syn0.begin() + static_cast<std::ptrdiff_t>(r * dim),
               state.syn0.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim));
  }
  return out;
}

}  // namespace vec2topic
