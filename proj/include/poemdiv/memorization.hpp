#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "poemdiv/corpus.hpp"

namespace poemdiv {

enum class Level { quatrain, couplet, verse };

std::string_view level_name(Level level);

struct SimilarityThresholds {
  double quatrain = 0.7;
  double couplet = 0.8;
  double verse = 0.9;

  double at(Level level) const;
};

/// Ratcliff-Obershelp similarity 2K/(|a|+|b|) over codepoints, where K is the
/// matched total from recursive longest-common-substring decomposition.
/// Anchor ties break to the smallest a-index, then the smallest b-index.
/// Both inputs empty -> 1.0.
double ratcliff_obershelp(std::u32string_view a, std::u32string_view b);
double ratcliff_obershelp(std::string_view a, std::string_view b);

/// 2*min/(len_a+len_b): an upper bound on ratcliff_obershelp for any two
/// sequences of those lengths, since K cannot exceed the shorter length.
/// Both zero -> 1.0.
double similarity_upper_bound(std::size_t len_a, std::size_t len_b);

/// One comparison unit at a given level: the quatrain itself, one of its two
/// couplets, or one of its four verses. `text` is the normalized form with
/// verses joined by single newlines.
struct ScanUnit {
  std::string id;
  std::u32string text;
};

/// Units of a corpus at `level`, in corpus order. Couplet ids are
/// "<id>:c1"/"<id>:c2", verse ids "<id>:v1".."<id>:v4".
std::vector<ScanUnit> extract_units(const Corpus& corpus, Level level);

struct MatchRecord {
  std::string unit_id;
  std::string train_id;
  double score = 0.0;
};

struct MemorizationResult {
  Level level = Level::quatrain;
  double rate = 0.0;
  std::size_t unit_count = 0;
  std::vector<MatchRecord> matches;  // above-threshold units, sorted by unit_id
};

/// Flags each sample unit whose maximum similarity against the train units of
/// the same level reaches the level threshold. Candidates are pruned by the
/// length bound (and a character-count bound); pruning never changes the rate
/// or the match set, because a pruned candidate's similarity is strictly below
/// the threshold or below the current best. Ties for the best train unit
/// resolve to the earliest train position, so results are independent of scan
/// order and thread count. Throws ValidationError on an empty train corpus.
MemorizationResult memorization_scan(const Corpus& sample, const Corpus& train, Level level,
                                     const SimilarityThresholds& thresholds, int threads = 1);

}  // namespace poemdiv
