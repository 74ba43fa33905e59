#include "vec2topic/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

#include "vec2topic/errors.hpp"

namespace vec2topic {

namespace {

struct Header {
  std::uint64_t count = 0;
  std::size_t dim = 0;
};

Header parse_header(const std::string& line, const std::string& where) {
  Header h;
  const char* p = line.data();
  const char* end = p + line.size();
  auto r1 = std::from_chars(p, end, h.count);
  if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ')
    throw FormatError(where + ": expected \"count dim\" header, got \"" + line + "\"");
  auto r2 = std::from_chars(r1.ptr + 1, end, h.dim);
  if (r2.ec != std::errc{} || r2.ptr != end || h.dim == 0)
    throw FormatError(where + ": expected \"count dim\" header, got \"" + line + "\"");
  return h;
}

KbVectors load_kb_text(std::ifstream& in, const std::filesystem::path& path,
                       const std::unordered_set<std::string>& wanted) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ":1: empty file");
  Header header = parse_header(line, path.string() + ":1");

  KbVectors kb;
  kb.dim = header.dim;
  std::vector<float> values(header.dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const char* p = line.data();
    const char* end = p + line.size();
    const char* word_end = p;
    while (word_end != end && *word_end != ' ') ++word_end;
    if (word_end == p || word_end == end) throw FormatError(where + ": missing vector values");
    std::string word(p, word_end);
    // Validate every line; store only the wanted ones.
    bool keep = wanted.count(word) > 0;
    p = word_end;
    for (std::size_t i = 0; i < header.dim; ++i) {
      if (p == end || *p != ' ')
        throw FormatError(where + ": expected " + std::to_string(header.dim) +
                          " values, got " + std::to_string(i));
      ++p;
      float v;
      auto r = std::from_chars(p, end, v);
      if (r.ec != std::errc{})
        throw FormatError(where + ": non-numeric field at value " + std::to_string(i + 1));
      p = r.ptr;
      if (keep) values[i] = v;
    }
    while (p != end && *p == ' ') ++p;  // tolerate a trailing space
    if (p != end)
      throw FormatError(where + ": expected " + std::to_string(header.dim) +
                        " values, got more");
    if (keep) kb.vectors.emplace(std::move(word), values);
  }
  return kb;
}

KbVectors load_kb_binary(std::ifstream& in, const std::filesystem::path& path,
                         const std::unordered_set<std::string>& wanted) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  Header header = parse_header(line, path.string());

  KbVectors kb;
  kb.dim = header.dim;
  std::vector<float> values(header.dim);
  static_assert(sizeof(float) == 4);
  for (std::uint64_t rec = 0; rec < header.count; ++rec) {
    int c = in.get();
    while (c == '\n' || c == ' ') c = in.get();  // record separators vary in the wild
    std::string word;
    while (c != ' ' && c != std::ifstream::traits_type::eof()) {
      word.push_back(static_cast<char>(c));
      c = in.get();
    }
    const std::string where = path.string() + ":offset " +
                              std::to_string(static_cast<long long>(in.tellg()));
    if (word.empty() || c == std::ifstream::traits_type::eof())
      throw FormatError(where + ": truncated record " + std::to_string(rec + 1));
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(header.dim * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != header.dim * sizeof(float))
      throw FormatError(where + ": truncated vector for \"" + word + "\"");
    if (wanted.count(word)) kb.vectors.emplace(std::move(word), values);
  }
  return kb;
}

}  // namespace

KbVectors load_kb_vectors(const std::filesystem::path& path,
                          const std::unordered_set<std::string>& wanted, KbFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vector file " + path.string());
  return format == KbFormat::text ? load_kb_text(in, path, wanted)
                                  : load_kb_binary(in, path, wanted);
}

double cosine_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error("cosine_distance: dimension mismatch " + std::to_string(x.size()) + " vs " +
                std::to_string(y.size()));
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0.0 || ny == 0.0) throw ZeroVector("cosine_distance: zero vector");
  return 1.0 - dot / (std::sqrt(nx) * std::sqrt(ny));
}

ConcatResult concat_embeddings(const Corpus& corpus, const std::vector<WordId>& noun_ids,
                               const KbVectors& kb, const LocalEmbeddings& local,
                               bool kb_only) {
  ConcatResult result;
  EmbeddingSet& set = result.set;
  set.kb_dim = kb.dim;
  set.local_dim = kb_only ? 0 : local.dim;
  const std::size_t d = set.dim();

  for (WordId id : noun_ids) {
    auto kb_it = kb.vectors.find(corpus.word(id));
    if (kb_it == kb.vectors.end() || (!kb_only && !local.has(id))) {
      result.dropped.push_back(id);
      continue;
    }
    const std::size_t offset = set.data.size();
    set.data.resize(offset + d);
    double norm = 0.0;
    for (std::size_t i = 0; i < kb.dim; ++i) {
      set.data[offset + i] = static_cast<double>(kb_it->second[i]);
      norm += set.data[offset + i] * set.data[offset + i];
    }
    if (!kb_only) {
      const auto& lv = local.vectors[static_cast<std::size_t>(id)];
      for (std::size_t i = 0; i < local.dim; ++i) {
        set.data[offset + kb.dim + i] = static_cast<double>(lv[i]);
        norm += set.data[offset + kb.dim + i] * set.data[offset + kb.dim + i];
      }
    }
    if (norm == 0.0) {  // an all-zero row is unusable under cosine distance
      set.data.resize(offset);
      result.dropped.push_back(id);
      continue;
    }
    set.words.push_back(id);
  }

  if (set.words.size() < 2)
    throw EmptyEmbeddingSet("only " + std::to_string(set.words.size()) +
                            " words have embeddings; need at least 2");
  return result;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double sgns_objective(std::span<const double> center, std::span<const double> positive,
                      const std::vector<std::vector<double>>& negatives) {
  double obj = std::log(sigmoid(dot(center, positive)));
  for (const auto& neg : negatives) obj += std::log(sigmoid(-dot(center, neg)));
  return obj;
}

SgnsGradients sgns_gradients(std::span<const double> center, std::span<const double> positive,
                             const std::vector<std::vector<double>>& negatives) {
  const std::size_t d = center.size();
  SgnsGradients g;
  g.d_center.assign(d, 0.0);
  g.d_positive.assign(d, 0.0);
  g.d_negatives.assign(negatives.size(), std::vector<double>(d, 0.0));

  const double g_pos = 1.0 - sigmoid(dot(center, positive));
  for (std::size_t i = 0; i < d; ++i) {
    g.d_center[i] += g_pos * positive[i];
    g.d_positive[i] = g_pos * center[i];
  }
  for (std::size_t n = 0; n < negatives.size(); ++n) {
    const double g_neg = -sigmoid(dot(center, negatives[n]));
    for (std::size_t i = 0; i < d; ++i) {
      g.d_center[i] += g_neg * negatives[n][i];
      g.d_negatives[n][i] = g_neg * center[i];
    }
  }
  return g;
}

}  // namespace vec2topic
