#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poemdiv/corpus.hpp"

namespace poemdiv {

/// Row-major matrix of L2-normalized embedding rows, one per quatrain id.
/// Rows that could not be normalized (empty text, zero vector) keep zeros and
/// are marked invalid.
struct EmbeddingMatrix {
  std::vector<std::string> ids;
  std::size_t dim = 0;
  std::vector<double> data;  // ids.size() * dim
  std::vector<char> valid;   // per row
  std::string provider;

  std::size_t rows() const { return ids.size(); }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }

  /// Sub-matrix with the given rows, in the given order.
  EmbeddingMatrix select(std::span<const std::size_t> row_indices) const;
};

/// Bucket of a character trigram under the deterministic FNV-1a hash.
std::uint64_t trigram_bucket(std::u32string_view gram, std::size_t dim);

/// Hashed character-trigram term-frequency vector over the quatrain's
/// normalized text (verses joined by newlines), L2-normalized. Texts shorter
/// than three codepoints hash as a single feature; empty text yields the zero
/// vector, flagged invalid by the matrix builders.
std::vector<double> builtin_embed(const Quatrain& q, std::size_t dim = 256);

EmbeddingMatrix builtin_embeddings(const Corpus& corpus, std::size_t dim = 256);

struct EmbeddingLoadResult {
  EmbeddingMatrix matrix;                // rows in corpus order
  std::vector<std::string> unknown_ids;  // in file but not in corpus; excluded
  std::vector<std::string> missing_ids;  // in corpus but not in file
};

/// Reads the embedding format: first line "dim=<d>", then one row per line
/// "id<TAB>f1 f2 ... fd". Rows are re-normalized to unit norm. A dimension
/// mismatch is fatal (ValidationError); unknown ids are listed and excluded.
EmbeddingLoadResult load_embeddings(std::istream& in, const Corpus& corpus,
                                    std::string_view provider);
EmbeddingLoadResult load_embeddings_file(const std::string& path, const Corpus& corpus);

void write_embeddings(std::ostream& out, const EmbeddingMatrix& m);

/// Mean over rows i of max_{j != i} cosine(row_i, row_j). Needs >= 2 rows.
/// Row order only affects nothing: the statistic is permutation invariant.
double avg_max_within(const EmbeddingMatrix& m, int threads = 1);

/// Mean over candidate rows of the maximum cosine against all reference rows.
double avg_max_across(const EmbeddingMatrix& candidate, const EmbeddingMatrix& reference,
                      int threads = 1);

}  // namespace poemdiv
