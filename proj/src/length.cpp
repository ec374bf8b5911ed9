#include "poemdiv/length.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "poemdiv/errors.hpp"

namespace poemdiv {

int quatrain_length(const Quatrain& q) { return q.token_count(); }

std::vector<int> sample_lengths(const Corpus& sample) {
  std::vector<int> lengths;
  lengths.reserve(sample.size());
  for (const Quatrain& q : sample.quatrains) lengths.push_back(quatrain_length(q));
  return lengths;
}

LengthStats length_stats(std::span<const int> lengths, StdDevMode mode) {
  if (lengths.empty()) throw ValidationError("length_stats needs a non-empty list");
  LengthStats stats;
  stats.n = lengths.size();

  std::vector<int> sorted(lengths.begin(), lengths.end());
  std::sort(sorted.begin(), sorted.end());
  stats.min = sorted.front();
  stats.max = sorted.back();
  const std::size_t n = sorted.size();
  stats.median = n % 2 == 1 ? sorted[n / 2]
                            : (static_cast<double>(sorted[n / 2 - 1]) + sorted[n / 2]) / 2.0;

  double sum = 0.0;
  for (int v : lengths) sum += v;
  stats.mean = sum / static_cast<double>(n);

  double sq = 0.0;
  for (int v : lengths) {
    const double d = v - stats.mean;
    sq += d * d;
  }
  const double denom = mode == StdDevMode::population ? static_cast<double>(n)
                                                      : static_cast<double>(n > 1 ? n - 1 : 1);
  stats.stddev = std::sqrt(sq / denom);
  return stats;
}

LengthHistogram LengthHistogram::from_lengths(std::span<const int> lengths) {
  if (lengths.empty()) throw ValidationError("histogram needs a non-empty list");
  LengthHistogram hist;
  for (int v : lengths) hist.masses_[v] += 1.0;
  const auto n = static_cast<double>(lengths.size());
  for (auto& [length, mass] : hist.masses_) mass /= n;
  return hist;
}

double LengthHistogram::total_mass() const {
  double total = 0.0;
  for (const auto& [length, mass] : masses_) total += mass;
  return total;
}

void LengthHistogram::write_csv(std::ostream& out) const {
  out << "length,mass\n";
  for (const auto& [length, mass] : masses_) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", length, mass);
    out << buf;
  }
}

double histogram_intersection(const LengthHistogram& p, const LengthHistogram& q) {
  // Union support: bins absent on one side contribute min(mass, 0) = 0.
  double total = 0.0;
  auto it_p = p.masses().begin();
  auto it_q = q.masses().begin();
  while (it_p != p.masses().end() && it_q != q.masses().end()) {
    if (it_p->first < it_q->first) {
      ++it_p;
    } else if (it_q->first < it_p->first) {
      ++it_q;
    } else {
      total += std::min(it_p->second, it_q->second);
      ++it_p;
      ++it_q;
    }
  }
  return total;
}

}  // namespace poemdiv
