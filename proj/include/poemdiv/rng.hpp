#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

namespace poemdiv {

/// Counter-based generator with splittable streams. The i-th output is a pure
/// function of (key, i), so sequences are identical across platforms and
/// standard library versions. Streams derived via split() are statistically
/// independent of the parent and of each other.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : key_(seed) {}

  std::uint64_t next() { return mix(key_ + ++counter_ * kGamma); }

  /// Key of the derived stream `stream`; SplitRng(split_key(s)) reproduces
  /// exactly the generator returned by split(s).
  std::uint64_t split_key(std::uint64_t stream) const {
    return mix(mix(key_ ^ kStreamSalt) + stream * kGamma);
  }

  SplitRng split(std::uint64_t stream) const { return SplitRng(split_key(stream)); }

  /// Uniform draw from [0, n). Mask-and-reject keeps it unbiased without any
  /// platform-dependent arithmetic.
  std::uint64_t bounded(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t mask = std::bit_ceil(n) - 1;
    for (;;) {
      const std::uint64_t v = next() & mask;
      if (v < n) return v;
    }
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;

  static std::uint64_t mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// First `draw` elements of a Fisher-Yates pass over [0, population), in draw
/// order. draw == population yields a full permutation.
inline std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                           std::size_t draw,
                                                           SplitRng& rng) {
  if (draw > population) draw = population;
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < draw; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.bounded(population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(draw);
  return idx;
}

}  // namespace poemdiv
