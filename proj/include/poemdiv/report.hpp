#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace poemdiv {

enum class RankDirection { lower_better, higher_better };

/// Fractional ranks with rank 1 = best under `direction`; exact ties receive
/// the average of the covered positions. Models without a value are excluded
/// (nullopt in, nullopt out).
std::vector<std::optional<double>> rank_metric(std::span<const std::optional<double>> values,
                                               RankDirection direction);

/// Pearson product-moment correlation; equal lengths >= 2, non-zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Best-worst scaling score (best - worst) / n; throws on violated counts.
double bws_score(int best, int worst, int n);

/// Per-model metric values feeding the five-dimension ranking.
struct RankInput {
  std::string model;
  double mem_quatrain = 0.0, mem_couplet = 0.0, mem_verse = 0.0;  // lower better
  double length_hist_intersection = 0.0;                         // higher better
  double rhyme_kl = 0.0;                                         // lower better
  double attr = 0.0, mattr = 0.0, mtld = 0.0;                    // higher better
  double sem_within = 0.0, sem_across = 0.0;                     // lower better
};

inline constexpr std::array<std::string_view, 5> kDimensionNames = {
    "memorization", "length", "rhyme", "lexical", "semantic"};

struct RankRow {
  std::string model;
  std::array<double, 5> dimension_ranks{};  // aligned with kDimensionNames
  double avg_rank = 0.0;
};

struct RankTable {
  std::vector<RankRow> rows;  // sorted ascending by avg_rank, then model
  /// Pearson correlations between dimension rank vectors; nullopt when a
  /// dimension has zero variance.
  std::array<std::array<std::optional<double>, 5>, 5> correlations{};
  nlohmann::json metric_ranks;  // per-metric fractional ranks by model
};

/// Ranks every metric in its direction, averages metric ranks into the five
/// dimension ranks (memorization 3, lexical 3, semantic 2, length and rhyme
/// 1 each), then averages dimensions into avg_rank. Needs >= 2 models with
/// distinct names.
RankTable dimension_ranks(std::span<const RankInput> inputs);

/// Mean of the five dimension ranks of one row.
double average_dimension_ranks(const std::array<double, 5>& dims);

/// CSV with header model,memorization,length,rhyme,lexical,semantic,avg_rank;
/// ranks printed with one decimal.
std::string rank_table_csv(const RankTable& table);

nlohmann::json rank_table_json(const RankTable& table);

/// Extracts a RankInput from an analyze report document.
RankInput rank_input_from_report(const nlohmann::json& report);

/// Canonical serialization: sorted keys, 2-space indent, trailing newline.
/// Identical documents serialize to identical bytes.
std::string canonical_json(const nlohmann::json& doc);

/// Flat "key,value" CSV over the document's leaves, keys in dotted-path form
/// with array indices; values JSON-encoded. Parsing the CSV back yields the
/// same flat map.
std::string flat_csv(const nlohmann::json& doc);
std::vector<std::pair<std::string, std::string>> parse_flat_csv(const std::string& csv);

}  // namespace poemdiv
