#include "poemdiv/lexical.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "poemdiv/errors.hpp"
#include "poemdiv/text.hpp"

namespace poemdiv {

double ttr(std::span<const std::string> tokens) {
  if (tokens.empty()) throw ValidationError("TTR needs a non-empty token list");
  std::unordered_set<std::string_view> types(tokens.begin(), tokens.end());
  return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

namespace {

std::vector<std::string> quatrain_tokens(const Quatrain& q, bool lowercase) {
  std::vector<std::string> tokens;
  for (const Verse& v : q.verses) {
    if (lowercase) {
      tokens.insert(tokens.end(), v.tokens.begin(), v.tokens.end());
    } else {
      auto raw = tokenize(v.raw, /*lowercase=*/false);
      tokens.insert(tokens.end(), std::make_move_iterator(raw.begin()),
                    std::make_move_iterator(raw.end()));
    }
  }
  return tokens;
}

}  // namespace

AttrResult attr(const Corpus& sample, bool lowercase) {
  AttrResult result;
  double sum = 0.0;
  std::size_t counted = 0;
  for (const Quatrain& q : sample.quatrains) {
    const auto tokens = quatrain_tokens(q, lowercase);
    if (tokens.empty()) {
      ++result.excluded;
      continue;
    }
    sum += ttr(tokens);
    ++counted;
  }
  if (counted == 0) throw ValidationError("ATTR: every quatrain is empty after normalization");
  result.value = sum / static_cast<double>(counted);
  return result;
}

double mattr(std::span<const std::string> tokens, std::size_t window) {
  if (window < 1) throw ValidationError("MATTR window must be >= 1");
  const std::size_t n = tokens.size();
  if (n == 0) throw ValidationError("MATTR needs a non-empty stream");
  if (n <= window) return ttr(tokens);

  std::unordered_map<std::string_view, std::size_t> counts;
  std::size_t distinct = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (++counts[tokens[i]] == 1) ++distinct;
    if (i + 1 < window) continue;
    if (i >= window) {
      auto it = counts.find(tokens[i - window]);
      if (--it->second == 0) {
        counts.erase(it);
        --distinct;
      }
    }
    sum += static_cast<double>(distinct) / static_cast<double>(window);
  }
  return sum / static_cast<double>(n - window + 1);
}

namespace {

template <typename Iter>
double mtld_scan(Iter begin, Iter end, double threshold) {
  const auto n = static_cast<double>(std::distance(begin, end));
  double factors = 0.0;
  std::unordered_set<std::string_view> types;
  std::size_t factor_tokens = 0;
  for (Iter it = begin; it != end; ++it) {
    types.insert(std::string_view(*it));
    ++factor_tokens;
    const double running_ttr =
        static_cast<double>(types.size()) / static_cast<double>(factor_tokens);
    if (running_ttr < threshold) {
      factors += 1.0;
      types.clear();
      factor_tokens = 0;
    }
  }
  if (factor_tokens > 0) {
    const double final_ttr =
        static_cast<double>(types.size()) / static_cast<double>(factor_tokens);
    factors += (1.0 - final_ttr) / (1.0 - threshold);
  }
  // A stream whose TTR never dips and leaves no remainder has no factors;
  // its diversity is bounded only by its own length.
  if (factors == 0.0) return n;
  return n / factors;
}

}  // namespace

double mtld_forward(std::span<const std::string> tokens, double ttr_threshold) {
  if (tokens.empty()) throw ValidationError("MTLD needs a non-empty stream");
  if (!(ttr_threshold > 0.0 && ttr_threshold < 1.0))
    throw ValidationError("MTLD threshold must be in (0, 1)");
  return mtld_scan(tokens.begin(), tokens.end(), ttr_threshold);
}

double mtld(std::span<const std::string> tokens, double ttr_threshold) {
  if (tokens.empty()) throw ValidationError("MTLD needs a non-empty stream");
  if (!(ttr_threshold > 0.0 && ttr_threshold < 1.0))
    throw ValidationError("MTLD threshold must be in (0, 1)");
  const double forward = mtld_scan(tokens.begin(), tokens.end(), ttr_threshold);
  const double backward = mtld_scan(tokens.rbegin(), tokens.rend(), ttr_threshold);
  return (forward + backward) / 2.0;
}

std::vector<std::string> token_stream(const Corpus& sample, bool lowercase) {
  std::vector<std::string> stream;
  for (const Quatrain& q : sample.quatrains) {
    auto tokens = quatrain_tokens(q, lowercase);
    stream.insert(stream.end(), std::make_move_iterator(tokens.begin()),
                  std::make_move_iterator(tokens.end()));
  }
  return stream;
}

LexicalReport lexical_report(const Corpus& sample, const LexicalConfig& config) {
  const AttrResult attr_result = attr(sample, config.lowercase);
  const std::vector<std::string> stream = token_stream(sample, config.lowercase);
  LexicalReport report;
  report.attr = attr_result.value;
  report.excluded_quatrains = attr_result.excluded;
  report.mattr = mattr(stream, config.mattr_window);
  report.mtld = mtld(stream, config.mtld_ttr_threshold);
  return report;
}

}  // namespace poemdiv
