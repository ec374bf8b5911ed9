#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "poemdiv/corpus.hpp"

namespace poemdiv {

enum class RhymeVerdict { rhyme, repetition, none };

std::string_view verdict_name(RhymeVerdict v);

/// Word -> pronunciations, each a list of phoneme strings with stress digits
/// on vowel phonemes ("N AY1 T"). Lookup is case-insensitive on normalized
/// words. The loader accepts tab- or space-separated entries, strips
/// CMUdict-style "(n)" variant suffixes and ";;;" comment lines.
class PronouncingLexicon {
 public:
  static PronouncingLexicon load(std::istream& in);
  static PronouncingLexicon load_file(const std::string& path);

  const std::vector<std::vector<std::string>>* lookup(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::vector<std::string>>> entries_;
};

/// Deterministic rhyme judge. With both words in the lexicon the phonetic
/// path decides: they rhyme iff the phoneme suffixes from the last stressed
/// vowel onward coincide for some pronunciation pair. Otherwise the
/// orthographic fallback compares the suffix from the last vowel group
/// onward, requiring at least two codepoints.
struct RhymeJudge {
  const PronouncingLexicon* lexicon = nullptr;  // optional
  std::u32string vowels = U"aeiouyäöü";

  static RhymeJudge for_lang(std::string_view lang, const PronouncingLexicon* lexicon = nullptr);
};

/// Identical normalized words are repetitions, never rhymes.
RhymeVerdict judge_pair(std::string_view w1, std::string_view w2, const RhymeJudge& judge);

using JudgeFn = std::function<RhymeVerdict(std::string_view, std::string_view)>;

/// A (j, i) link meaning line i matched line j (its earliest matching
/// predecessor), plus whether the match was a repetition.
struct RhymeLink {
  int from = 0;
  int to = 0;
  bool repetition = false;
};

struct SchemeResult {
  std::string label;  // canonical: first line A, new letters in order
  std::vector<RhymeLink> links;
};

/// Canonical scheme of four ending words: line i takes the letter of the
/// earliest previous line whose ending rhymes with or repeats line i's,
/// otherwise the smallest unused letter. Any absent ending yields ABCD with
/// no links, by convention.
SchemeResult scheme_of_endings(const std::array<std::optional<std::string>, 4>& endings,
                               const JudgeFn& judge);

SchemeResult scheme_of(const Quatrain& q, const RhymeJudge& judge);

/// The 15 possible canonical 4-line schemes, lexicographically sorted.
const std::array<std::string, 15>& canonical_schemes();
int scheme_index(std::string_view label);

struct RhymeDistribution {
  std::array<double, 15> masses{};     // aligned with canonical_schemes()
  double repetition_rate = 0.0;        // repetition links / all links

  /// CSV export, "scheme,mass" with a header line.
  void write_csv(std::ostream& out) const;
};

/// Normalized scheme counts over a non-empty sample; zero-mass schemes kept.
RhymeDistribution scheme_distribution(const Corpus& sample, const RhymeJudge& judge);

/// Shannon entropy in bits, 0*log0 = 0.
double entropy(const RhymeDistribution& d);
double entropy(std::span<const double> masses);

/// D(reference || candidate) in bits after additive-epsilon smoothing and
/// renormalization of both sides. epsilon <= 0 is an error.
double kl_divergence(const RhymeDistribution& reference, const RhymeDistribution& candidate,
                     double epsilon = 1e-6);
double kl_divergence(std::span<const double> reference, std::span<const double> candidate,
                     double epsilon = 1e-6);

}  // namespace poemdiv
