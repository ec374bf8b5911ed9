#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace poemdiv {

/// One line of a quatrain. `tokens` is the normalized view (lowercased,
/// punctuation stripped); the raw line is kept for re-emission.
struct Verse {
  std::string raw;
  std::vector<std::string> tokens;

  static Verse from_raw(std::string raw_line);

  /// Last normalized token, absent iff the verse normalizes to nothing.
  std::optional<std::string_view> ending_token() const;

  /// Tokens joined by single spaces; the unit of exact-overlap comparison.
  std::string normalized() const;
};

/// The universal unit of analysis: exactly four verses.
struct Quatrain {
  std::string id;
  std::array<Verse, 4> verses;
  std::string lang;
  std::map<std::string, std::string> labels;  // passed through untouched

  /// Total token count over the four verses.
  int token_count() const;

  /// Normalized verses joined by single newlines.
  std::string normalized_text() const;
};

enum class CoupletPosition { first_half, second_half };

/// Verse pair (1,2) or (3,4) of a quatrain.
struct Couplet {
  std::string parent_id;
  CoupletPosition position;
  std::array<const Verse*, 2> verses;

  static Couplet of(const Quatrain& q, CoupletPosition pos);
  std::string normalized_text() const;
};

struct Corpus {
  std::string name;
  std::string lang;
  std::vector<Quatrain> quatrains;

  std::size_t size() const { return quatrains.size(); }
};

/// A seeded without-replacement draw; `seed` is the stream key that
/// reproduces `indices` exactly for the same corpus and size.
struct Sample {
  std::string corpus_ref;
  std::vector<std::size_t> indices;
  std::uint64_t seed = 0;
};

/// Three whole quatrains plus one couplet, all from distinct source
/// quatrains. Indices refer to the corpus the sonnet was built from.
struct PseudoSonnet {
  std::array<std::size_t, 4> source_indices;  // last one supplies the couplet
  CoupletPosition couplet_position = CoupletPosition::first_half;
};

struct RejectionRecord {
  std::size_t line_no = 0;  // 1-based
  std::string reason;
};

struct ParseResult {
  Corpus corpus;
  std::vector<RejectionRecord> rejections;
};

/// Reads the JSONL poem format: one object per line with "id", "lines"
/// (exactly 4 non-blank strings), optional "lang" and "labels". Records that
/// do not form a valid quatrain are logged and excluded. Records whose "lang"
/// conflicts with `lang` or whose id repeats an earlier one are rejected too.
ParseResult parse_corpus(std::istream& in, std::string_view lang, std::string_view name);

/// File variant; throws ValidationError when the file cannot be opened.
ParseResult parse_corpus_file(const std::string& path, std::string_view lang);

/// Undoes sliding-window augmentation. Pass 1 scans sequentially and drops
/// any quatrain that shares a verse (exact normalized-token equality) with
/// the immediately preceding retained one. Pass 2 repeatedly removes the
/// ceil(10%) of still-overlapping quatrains with the highest overlap counts
/// (ties: earlier index removed first) until no two retained quatrains share
/// a verse. Original order is preserved.
Corpus dedup_overlaps(const Corpus& corpus);

/// True iff the two quatrains share at least one normalized verse.
bool shares_verse(const Quatrain& a, const Quatrain& b);

/// Seeded shuffle then split; |dev| = round(0.1 * n), half rounded up.
/// Returns (train, dev); outputs are in shuffle order.
std::pair<Corpus, Corpus> split_train_dev(const Corpus& corpus, std::uint64_t seed);

/// Sonnet count at 3.5 quatrains consumed per sonnet: floor(2n/7).
std::size_t default_sonnet_count(std::size_t corpus_size);

/// Draws `count` pseudo-sonnets; each picks 4 distinct quatrains, uses 3
/// whole and takes one couplet (first or second half, uniformly) from the
/// fourth. Deterministic under `seed`.
std::vector<PseudoSonnet> build_pseudo_sonnets(const Corpus& corpus, std::size_t count,
                                               std::uint64_t seed);

/// k independent without-replacement draws of `size` quatrains.
std::vector<Sample> draw_samples(const Corpus& corpus, std::size_t k, std::size_t size,
                                 std::uint64_t seed);

/// Corpus holding the sampled quatrains in draw order.
Corpus materialize(const Corpus& corpus, const Sample& sample);

}  // namespace poemdiv
