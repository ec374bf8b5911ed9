#include "poemdiv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "poemdiv/errors.hpp"

namespace poemdiv {

using nlohmann::json;

std::vector<std::optional<double>> rank_metric(std::span<const std::optional<double>> values,
                                               RankDirection direction) {
  std::vector<std::size_t> present;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i].has_value()) present.push_back(i);

  std::sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
    return direction == RankDirection::lower_better ? *values[a] < *values[b]
                                                    : *values[a] > *values[b];
  });

  std::vector<std::optional<double>> ranks(values.size());
  std::size_t pos = 0;
  while (pos < present.size()) {
    std::size_t end = pos + 1;
    while (end < present.size() && *values[present[end]] == *values[present[pos]]) ++end;
    // Average of the 1-based positions pos+1 .. end covered by the tie group.
    const double rank = static_cast<double>(pos + 1 + end) / 2.0;
    for (std::size_t k = pos; k < end; ++k) ranks[present[k]] = rank;
    pos = end;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson needs equal-length vectors");
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("pearson needs at least 2 observations");
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ValidationError("pearson is undefined for zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double bws_score(int best, int worst, int n) {
  if (n < 1) throw ValidationError("BWS needs at least one instance");
  if (best < 0 || worst < 0 || best > n || worst > n || best + worst > 2 * n)
    throw ValidationError("BWS counts violate best, worst <= n and best + worst <= 2n");
  return static_cast<double>(best - worst) / static_cast<double>(n);
}

double average_dimension_ranks(const std::array<double, 5>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 0.0) / 5.0;
}

namespace {

struct MetricSpec {
  std::string_view name;
  int dimension;  // index into kDimensionNames
  RankDirection direction;
  double RankInput::* field;
};

constexpr std::array<MetricSpec, 10> kMetrics = {{
    {"memorization_quatrain", 0, RankDirection::lower_better, &RankInput::mem_quatrain},
    {"memorization_couplet", 0, RankDirection::lower_better, &RankInput::mem_couplet},
    {"memorization_verse", 0, RankDirection::lower_better, &RankInput::mem_verse},
    {"length_histogram_intersection", 1, RankDirection::higher_better,
     &RankInput::length_hist_intersection},
    {"rhyme_kl", 2, RankDirection::lower_better, &RankInput::rhyme_kl},
    {"attr", 3, RankDirection::higher_better, &RankInput::attr},
    {"mattr", 3, RankDirection::higher_better, &RankInput::mattr},
    {"mtld", 3, RankDirection::higher_better, &RankInput::mtld},
    {"semantic_within", 4, RankDirection::lower_better, &RankInput::sem_within},
    {"semantic_across", 4, RankDirection::lower_better, &RankInput::sem_across},
}};

}  // namespace

RankTable dimension_ranks(std::span<const RankInput> inputs) {
  const std::size_t n = inputs.size();
  if (n < 2) throw ValidationError("ranking needs at least 2 models");
  {
    std::vector<std::string> names;
    for (const RankInput& in : inputs) names.push_back(in.model);
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
      throw ValidationError("duplicate model names in rank inputs");
  }

  std::array<std::vector<double>, 5> dim_sums;
  std::array<int, 5> dim_metric_counts{};
  for (auto& v : dim_sums) v.assign(n, 0.0);

  json metric_ranks = json::object();
  for (const MetricSpec& spec : kMetrics) {
    std::vector<std::optional<double>> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = inputs[i].*(spec.field);
    const auto ranks = rank_metric(values, spec.direction);
    ++dim_metric_counts[spec.dimension];
    json by_model = json::object();
    for (std::size_t i = 0; i < n; ++i) {
      dim_sums[spec.dimension][i] += *ranks[i];
      by_model[inputs[i].model] = *ranks[i];
    }
    metric_ranks[std::string(spec.name)] = std::move(by_model);
  }

  RankTable table;
  table.metric_ranks = std::move(metric_ranks);
  table.rows.reserve(n);
  std::array<std::vector<double>, 5> dim_rank_vectors;
  for (std::size_t i = 0; i < n; ++i) {
    RankRow row;
    row.model = inputs[i].model;
    for (int d = 0; d < 5; ++d) {
      row.dimension_ranks[d] = dim_sums[d][i] / dim_metric_counts[d];
      dim_rank_vectors[d].push_back(row.dimension_ranks[d]);
    }
    row.avg_rank = average_dimension_ranks(row.dimension_ranks);
    table.rows.push_back(std::move(row));
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const RankRow& a, const RankRow& b) {
    if (a.avg_rank != b.avg_rank) return a.avg_rank < b.avg_rank;
    return a.model < b.model;
  });

  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      if (a == b) {
        table.correlations[a][b] = 1.0;
        continue;
      }
      try {
        table.correlations[a][b] = pearson(dim_rank_vectors[a], dim_rank_vectors[b]);
      } catch (const ValidationError&) {
        table.correlations[a][b] = std::nullopt;  // zero variance
      }
    }
  }
  return table;
}

namespace {

std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string rank_table_csv(const RankTable& table) {
  std::string out = "model,memorization,length,rhyme,lexical,semantic,avg_rank\n";
  for (const RankRow& row : table.rows) {
    out += row.model;
    for (double d : row.dimension_ranks) {
      out += ',';
      out += one_decimal(d);
    }
    out += ',';
    out += one_decimal(row.avg_rank);
    out += '\n';
  }
  return out;
}

json rank_table_json(const RankTable& table) {
  json rows = json::array();
  for (const RankRow& row : table.rows) {
    json r;
    r["model"] = row.model;
    for (int d = 0; d < 5; ++d) r[std::string(kDimensionNames[d])] = row.dimension_ranks[d];
    r["avg_rank"] = row.avg_rank;
    rows.push_back(std::move(r));
  }
  json correlations = json::object();
  for (int a = 0; a < 5; ++a) {
    json row = json::object();
    for (int b = 0; b < 5; ++b) {
      row[std::string(kDimensionNames[b])] =
          table.correlations[a][b] ? json(*table.correlations[a][b]) : json(nullptr);
    }
    correlations[std::string(kDimensionNames[a])] = std::move(row);
  }
  json doc;
  doc["rows"] = std::move(rows);
  doc["dimension_correlations"] = std::move(correlations);
  doc["metric_ranks"] = table.metric_ranks;
  return doc;
}

RankInput rank_input_from_report(const json& report) {
  RankInput input;
  try {
    input.model = report.at("model").get<std::string>();
    input.mem_quatrain = report.at("memorization").at("quatrain").at("rate").get<double>();
    input.mem_couplet = report.at("memorization").at("couplet").at("rate").get<double>();
    input.mem_verse = report.at("memorization").at("verse").at("rate").get<double>();
    input.length_hist_intersection =
        report.at("length").at("histogram_intersection").get<double>();
    input.rhyme_kl = report.at("rhyme").at("kl_from_reference").get<double>();
    const json& lex = report.at("lexical").at("candidate");
    input.attr = lex.at("attr").get<double>();
    input.mattr = lex.at("mattr").get<double>();
    input.mtld = lex.at("mtld").get<double>();
    const json& sem = report.at("semantic");
    input.sem_within = sem.at("within_candidate").get<double>();
    input.sem_across = sem.at("across").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report is missing ranking metrics: ") + e.what());
  }
  return input;
}

std::string canonical_json(const json& doc) { return doc.dump(2) + "\n"; }

namespace {

void flatten_into(const json& node, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items())
      flatten_into(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      flatten_into(node[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, node.dump());
  }
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string flat_csv(const json& doc) {
  std::vector<std::pair<std::string, std::string>> leaves;
  flatten_into(doc, "", leaves);
  std::string out = "key,value\n";
  for (const auto& [key, value] : leaves) {
    out += csv_escape(key);
    out += ',';
    out += csv_escape(value);
    out += '\n';
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_flat_csv(const std::string& csv) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(csv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {  // header
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(std::move(field));
    if (fields.size() != 2) throw ValidationError("flat CSV line must have 2 fields: " + line);
    out.emplace_back(std::move(fields[0]), std::move(fields[1]));
  }
  return out;
}

}  // namespace poemdiv
