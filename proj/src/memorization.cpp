#include "poemdiv/memorization.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <unordered_map>

#include "poemdiv/errors.hpp"
#include "poemdiv/text.hpp"

namespace poemdiv {

std::string_view level_name(Level level) {
  switch (level) {
    case Level::quatrain: return "quatrain";
    case Level::couplet: return "couplet";
    case Level::verse: return "verse";
  }
  return "?";
}

double SimilarityThresholds::at(Level level) const {
  switch (level) {
    case Level::quatrain: return quatrain;
    case Level::couplet: return couplet;
    case Level::verse: return verse;
  }
  return 1.0;
}

namespace {

struct Range {
  std::size_t alo, ahi, blo, bhi;
};

struct Anchor {
  std::size_t a_start = 0, b_start = 0, len = 0;
};

struct MatchWorkspace {
  std::vector<std::int32_t> prev, cur;
  std::vector<Range> stack;

  void reserve(std::size_t b_len) {
    if (prev.size() < b_len + 1) {
      prev.resize(b_len + 1);
      cur.resize(b_len + 1);
    }
  }
};

// Longest common substring of a[alo..ahi) and b[blo..bhi). Scanning i then j
// ascending with strict improvement yields the smallest a-start, then the
// smallest b-start, among all longest matches.
Anchor longest_common_substring(std::u32string_view a, std::u32string_view b, const Range& r,
                                MatchWorkspace& ws) {
  const std::size_t width = r.bhi - r.blo;
  std::fill(ws.prev.begin(), ws.prev.begin() + static_cast<std::ptrdiff_t>(width) + 1, 0);
  Anchor best;
  for (std::size_t i = r.alo; i < r.ahi; ++i) {
    ws.cur[0] = 0;
    const char32_t ac = a[i];
    for (std::size_t j = 0; j < width; ++j) {
      const std::int32_t v = ac == b[r.blo + j] ? ws.prev[j] + 1 : 0;
      ws.cur[j + 1] = v;
      if (v > static_cast<std::int32_t>(best.len)) {
        best.len = static_cast<std::size_t>(v);
        best.a_start = i + 1 - best.len;
        best.b_start = r.blo + j + 1 - best.len;
      }
    }
    std::swap(ws.prev, ws.cur);
  }
  return best;
}

double ratcliff_obershelp_ws(std::u32string_view a, std::u32string_view b, MatchWorkspace& ws) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  ws.reserve(b.size());
  std::size_t matched = 0;
  ws.stack.clear();
  ws.stack.push_back({0, a.size(), 0, b.size()});
  while (!ws.stack.empty()) {
    const Range r = ws.stack.back();
    ws.stack.pop_back();
    if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
    const Anchor m = longest_common_substring(a, b, r, ws);
    if (m.len == 0) continue;
    matched += m.len;
    ws.stack.push_back({r.alo, m.a_start, r.blo, m.b_start});
    ws.stack.push_back({m.a_start + m.len, r.ahi, m.b_start + m.len, r.bhi});
  }
  return 2.0 * static_cast<double>(matched) / static_cast<double>(a.size() + b.size());
}

}  // namespace

double ratcliff_obershelp(std::u32string_view a, std::u32string_view b) {
  MatchWorkspace ws;
  return ratcliff_obershelp_ws(a, b, ws);
}

double ratcliff_obershelp(std::string_view a, std::string_view b) {
  return ratcliff_obershelp(decode_utf8(a), decode_utf8(b));
}

double similarity_upper_bound(std::size_t len_a, std::size_t len_b) {
  if (len_a + len_b == 0) return 1.0;
  return 2.0 * static_cast<double>(std::min(len_a, len_b)) /
         static_cast<double>(len_a + len_b);
}

std::vector<ScanUnit> extract_units(const Corpus& corpus, Level level) {
  std::vector<ScanUnit> units;
  switch (level) {
    case Level::quatrain:
      units.reserve(corpus.size());
      for (const Quatrain& q : corpus.quatrains)
        units.push_back({q.id, decode_utf8(q.normalized_text())});
      break;
    case Level::couplet:
      units.reserve(corpus.size() * 2);
      for (const Quatrain& q : corpus.quatrains) {
        units.push_back({q.id + ":c1", decode_utf8(Couplet::of(q, CoupletPosition::first_half)
                                                       .normalized_text())});
        units.push_back({q.id + ":c2", decode_utf8(Couplet::of(q, CoupletPosition::second_half)
                                                       .normalized_text())});
      }
      break;
    case Level::verse:
      units.reserve(corpus.size() * 4);
      for (const Quatrain& q : corpus.quatrains)
        for (std::size_t v = 0; v < 4; ++v)
          units.push_back({q.id + ":v" + std::to_string(v + 1),
                           decode_utf8(q.verses[v].normalized())});
      break;
  }
  return units;
}

namespace {

constexpr std::size_t kBuckets = 64;
using CharCounts = std::array<std::uint16_t, kBuckets>;

CharCounts char_counts(std::u32string_view text) {
  CharCounts counts{};
  for (char32_t c : text) {
    auto& slot = counts[static_cast<std::size_t>(c) & (kBuckets - 1)];
    if (slot != std::numeric_limits<std::uint16_t>::max()) ++slot;
  }
  return counts;
}

// Matched characters form a common sub-multiset of both strings, so the
// bucketed common count bounds K from above (bucket merging only raises it).
std::size_t common_count_bound(const CharCounts& a, const CharCounts& b) {
  std::size_t total = 0;
  for (std::size_t k = 0; k < kBuckets; ++k) total += std::min(a[k], b[k]);
  return total;
}

// Deduplicated train units sorted by text length; duplicates keep the
// earliest id and position so tie-breaking matches an undeduplicated scan.
struct TrainIndex {
  struct Entry {
    std::u32string text;
    std::string id;
    std::size_t order;  // position in the original unit sequence
    CharCounts counts;
  };
  std::vector<Entry> entries;  // sorted by text length
  std::vector<std::size_t> lengths;

  explicit TrainIndex(std::vector<ScanUnit> units) {
    std::unordered_map<std::u32string, std::size_t> first_of;
    for (std::size_t i = 0; i < units.size(); ++i) {
      auto [it, inserted] = first_of.try_emplace(units[i].text, entries.size());
      if (inserted)
        entries.push_back({std::move(units[i].text), std::move(units[i].id), i, {}});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.text.size() != b.text.size()) return a.text.size() < b.text.size();
      return a.order < b.order;
    });
    lengths.reserve(entries.size());
    for (Entry& e : entries) {
      e.counts = char_counts(e.text);
      lengths.push_back(e.text.size());
    }
  }
};

struct BestMatch {
  double score = -1.0;
  std::size_t order = 0;
  const TrainIndex::Entry* entry = nullptr;
};

BestMatch scan_one(const ScanUnit& unit, const TrainIndex& index, double threshold,
                   MatchWorkspace& ws) {
  const std::size_t la = unit.text.size();
  const CharCounts counts_a = char_counts(unit.text);

  // Length window where 2*min/(la+lb) can reach the threshold.
  const double t = threshold;
  const auto lo_len = static_cast<std::size_t>(std::ceil(t * static_cast<double>(la) / (2.0 - t)));
  const auto hi_len = la == 0 ? std::size_t{0}
                              : static_cast<std::size_t>(std::floor(
                                    static_cast<double>(la) * (2.0 - t) / t));
  const auto begin = std::lower_bound(index.lengths.begin(), index.lengths.end(), lo_len) -
                     index.lengths.begin();
  const auto end = std::upper_bound(index.lengths.begin(), index.lengths.end(), hi_len) -
                   index.lengths.begin();

  BestMatch best;
  for (auto i = static_cast<std::size_t>(begin); i < static_cast<std::size_t>(end); ++i) {
    const TrainIndex::Entry& e = index.entries[i];
    const std::size_t cap = std::min(common_count_bound(counts_a, e.counts), std::min(la, e.text.size()));
    const double bound = la + e.text.size() == 0
                             ? 1.0
                             : 2.0 * static_cast<double>(cap) / static_cast<double>(la + e.text.size());
    // A candidate below the threshold or below the current best can neither
    // become a flagged match nor win a tie (ties need an equal score).
    if (bound < t || bound < best.score) continue;
    const double score = ratcliff_obershelp_ws(unit.text, e.text, ws);
    if (score > best.score || (score == best.score && best.entry && e.order < best.order)) {
      best = {score, e.order, &e};
    }
  }
  return best;
}

}  // namespace

MemorizationResult memorization_scan(const Corpus& sample, const Corpus& train, Level level,
                                     const SimilarityThresholds& thresholds, int threads) {
  if (train.size() == 0) throw ValidationError("memorization scan needs a non-empty train corpus");
  const double threshold = thresholds.at(level);
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw ValidationError("similarity threshold must be in (0, 1]");
  const std::vector<ScanUnit> sample_units = extract_units(sample, level);
  const TrainIndex index(extract_units(train, level));

  std::vector<BestMatch> bests(sample_units.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads =
      std::min<std::size_t>(std::max(threads, 1), std::min<std::size_t>(hw, sample_units.size() + 1));
  if (n_threads <= 1) {
    MatchWorkspace ws;
    for (std::size_t i = 0; i < sample_units.size(); ++i)
      bests[i] = scan_one(sample_units[i], index, threshold, ws);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        MatchWorkspace ws;
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= sample_units.size()) return;
          bests[i] = scan_one(sample_units[i], index, threshold, ws);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  MemorizationResult result;
  result.level = level;
  result.unit_count = sample_units.size();
  for (std::size_t i = 0; i < sample_units.size(); ++i) {
    if (bests[i].entry && bests[i].score >= threshold) {
      result.matches.push_back({sample_units[i].id, bests[i].entry->id, bests[i].score});
    }
  }
  std::sort(result.matches.begin(), result.matches.end(),
            [](const MatchRecord& a, const MatchRecord& b) { return a.unit_id < b.unit_id; });
  result.rate = sample_units.empty()
                    ? 0.0
                    : static_cast<double>(result.matches.size()) /
                          static_cast<double>(sample_units.size());
  return result;
}

}  // namespace poemdiv
