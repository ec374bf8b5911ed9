#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "poemdiv/corpus.hpp"

namespace poemdiv {

enum class StdDevMode { population, sample };

struct LengthStats {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

/// Token count of a quatrain (sum over its verses).
int quatrain_length(const Quatrain& q);

std::vector<int> sample_lengths(const Corpus& sample);

/// Exact mean/median/std/min/max; std divides by n by default.
LengthStats length_stats(std::span<const int> lengths, StdDevMode mode = StdDevMode::population);

/// Normalized histogram over integer token counts, one bin per count.
class LengthHistogram {
 public:
  static LengthHistogram from_lengths(std::span<const int> lengths);

  const std::map<int, double>& masses() const { return masses_; }
  double total_mass() const;

  /// CSV export, "length,mass" with a header line.
  void write_csv(std::ostream& out) const;

 private:
  std::map<int, double> masses_;
};

/// Sum of bin-wise minima over the union support; 1 iff identical.
double histogram_intersection(const LengthHistogram& p, const LengthHistogram& q);

}  // namespace poemdiv
