#include "poemdiv/semantic.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "poemdiv/errors.hpp"
#include "poemdiv/text.hpp"

namespace poemdiv {

namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

void l2_normalize(std::span<double> row) {
  double sq = 0.0;
  for (double v : row) sq += v * v;
  if (sq <= 0.0) return;
  const double inv = 1.0 / std::sqrt(sq);
  for (double& v : row) v *= inv;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void parallel_rows(std::size_t rows, int threads, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(std::max(threads, 1), hw);
  if (n_threads <= 1 || rows < 2) {
    for (std::size_t i = 0; i < rows; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= rows) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::uint64_t trigram_bucket(std::u32string_view gram, std::size_t dim) {
  return fnv1a(encode_utf8(gram)) % dim;
}

std::vector<double> builtin_embed(const Quatrain& q, std::size_t dim) {
  if (dim == 0) throw ValidationError("embedding dimension must be positive");
  std::vector<double> vec(dim, 0.0);
  if (q.token_count() == 0) return vec;  // zero vector; caller flags it invalid
  const std::u32string text = decode_utf8(q.normalized_text());
  if (text.size() < 3) {
    vec[trigram_bucket(text, dim)] += 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= text.size(); ++i)
      vec[trigram_bucket(std::u32string_view(text).substr(i, 3), dim)] += 1.0;
  }
  l2_normalize(vec);
  return vec;
}

EmbeddingMatrix builtin_embeddings(const Corpus& corpus, std::size_t dim) {
  EmbeddingMatrix m;
  m.dim = dim;
  m.provider = "trigram-tf-" + std::to_string(dim);
  m.ids.reserve(corpus.size());
  m.data.reserve(corpus.size() * dim);
  m.valid.reserve(corpus.size());
  for (const Quatrain& q : corpus.quatrains) {
    const std::vector<double> row = builtin_embed(q, dim);
    const bool nonzero = std::any_of(row.begin(), row.end(), [](double v) { return v != 0.0; });
    m.ids.push_back(q.id);
    m.data.insert(m.data.end(), row.begin(), row.end());
    m.valid.push_back(nonzero ? 1 : 0);
  }
  return m;
}

EmbeddingMatrix EmbeddingMatrix::select(std::span<const std::size_t> row_indices) const {
  EmbeddingMatrix out;
  out.dim = dim;
  out.provider = provider;
  out.ids.reserve(row_indices.size());
  out.data.reserve(row_indices.size() * dim);
  out.valid.reserve(row_indices.size());
  for (std::size_t i : row_indices) {
    out.ids.push_back(ids.at(i));
    const auto r = row(i);
    out.data.insert(out.data.end(), r.begin(), r.end());
    out.valid.push_back(valid.at(i));
  }
  return out;
}

EmbeddingLoadResult load_embeddings(std::istream& in, const Corpus& corpus,
                                    std::string_view provider) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim=", 0) != 0)
    throw ValidationError("embedding file must start with a dim=<d> header");
  std::size_t dim = 0;
  {
    const auto* begin = line.data() + 4;
    const auto* end = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(begin, end, dim);
    if (ec != std::errc{} || ptr != end || dim == 0)
      throw ValidationError("invalid embedding dimension header: " + line);
  }

  std::unordered_map<std::string, std::size_t> corpus_pos;
  for (std::size_t i = 0; i < corpus.size(); ++i) corpus_pos[corpus.quatrains[i].id] = i;

  std::vector<std::vector<double>> rows(corpus.size());
  std::vector<char> present(corpus.size(), 0);
  EmbeddingLoadResult result;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ValidationError("embedding line " + std::to_string(line_no) + " lacks a tab");
    std::string id = line.substr(0, tab);
    std::vector<double> values;
    values.reserve(dim);
    const char* p = line.data() + tab + 1;
    const char* line_end = line.data() + line.size();
    while (p < line_end) {
      while (p < line_end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p >= line_end) break;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(p, line_end, v);
      if (ec != std::errc{})
        throw ValidationError("embedding line " + std::to_string(line_no) +
                              " has a malformed value");
      values.push_back(v);
      p = ptr;
    }
    if (values.size() != dim)
      throw ValidationError("embedding line " + std::to_string(line_no) + " has " +
                            std::to_string(values.size()) + " values, expected " +
                            std::to_string(dim));
    const auto it = corpus_pos.find(id);
    if (it == corpus_pos.end()) {
      result.unknown_ids.push_back(std::move(id));
      continue;
    }
    rows[it->second] = std::move(values);
    present[it->second] = 1;
  }

  EmbeddingMatrix& m = result.matrix;
  m.dim = dim;
  m.provider = std::string(provider);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!present[i]) {
      result.missing_ids.push_back(corpus.quatrains[i].id);
      continue;
    }
    l2_normalize(rows[i]);
    const bool nonzero =
        std::any_of(rows[i].begin(), rows[i].end(), [](double v) { return v != 0.0; });
    m.ids.push_back(corpus.quatrains[i].id);
    m.data.insert(m.data.end(), rows[i].begin(), rows[i].end());
    m.valid.push_back(nonzero ? 1 : 0);
  }
  return result;
}

EmbeddingLoadResult load_embeddings_file(const std::string& path, const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open embedding file: " + path);
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  return load_embeddings(in, corpus, "file:" + name);
}

void write_embeddings(std::ostream& out, const EmbeddingMatrix& m) {
  out << "dim=" << m.dim << '\n';
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << m.ids[i];
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row[j]);
      out << (j == 0 ? '\t' : ' ');
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

double avg_max_within(const EmbeddingMatrix& m, int threads) {
  const std::size_t n = m.rows();
  if (n < 2) throw ValidationError("within-similarity needs at least 2 rows");
  std::vector<double> maxima(n);
  parallel_rows(n, threads, [&](std::size_t i) {
    const auto row_i = m.row(i);
    double best = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::max(best, dot(row_i, m.row(j)));
    }
    maxima[i] = best;
  });
  double sum = 0.0;
  for (double v : maxima) sum += v;
  return sum / static_cast<double>(n);
}

double avg_max_across(const EmbeddingMatrix& candidate, const EmbeddingMatrix& reference,
                      int threads) {
  if (candidate.rows() == 0 || reference.rows() == 0)
    throw ValidationError("across-similarity needs non-empty matrices");
  if (candidate.dim != reference.dim)
    throw ValidationError("embedding dimension mismatch: " + std::to_string(candidate.dim) +
                          " vs " + std::to_string(reference.dim));
  const std::size_t n = candidate.rows();
  std::vector<double> maxima(n);
  parallel_rows(n, threads, [&](std::size_t i) {
    const auto row_i = candidate.row(i);
    double best = -1.0;
    for (std::size_t j = 0; j < reference.rows(); ++j)
      best = std::max(best, dot(row_i, reference.row(j)));
    maxima[i] = best;
  });
  double sum = 0.0;
  for (double v : maxima) sum += v;
  return sum / static_cast<double>(n);
}

}  // namespace poemdiv
