#include "poemdiv/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "poemdiv/errors.hpp"
#include "poemdiv/rng.hpp"
#include "poemdiv/text.hpp"

namespace poemdiv {

using nlohmann::json;

Verse Verse::from_raw(std::string raw_line) {
  Verse v;
  v.tokens = tokenize(raw_line);
  v.raw = std::move(raw_line);
  return v;
}

std::optional<std::string_view> Verse::ending_token() const {
  if (tokens.empty()) return std::nullopt;
  return std::string_view(tokens.back());
}

std::string Verse::normalized() const { return join_tokens(tokens); }

int Quatrain::token_count() const {
  int n = 0;
  for (const Verse& v : verses) n += static_cast<int>(v.tokens.size());
  return n;
}

std::string Quatrain::normalized_text() const {
  std::string out;
  for (std::size_t i = 0; i < verses.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += verses[i].normalized();
  }
  return out;
}

Couplet Couplet::of(const Quatrain& q, CoupletPosition pos) {
  Couplet c;
  c.parent_id = q.id;
  c.position = pos;
  const std::size_t base = pos == CoupletPosition::first_half ? 0 : 2;
  c.verses = {&q.verses[base], &q.verses[base + 1]};
  return c;
}

std::string Couplet::normalized_text() const {
  return verses[0]->normalized() + "\n" + verses[1]->normalized();
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

ParseResult parse_corpus(std::istream& in, std::string_view lang, std::string_view name) {
  ParseResult result;
  result.corpus.name = std::string(name);
  result.corpus.lang = std::string(lang);
  std::unordered_set<std::string> seen_ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;

    auto reject = [&](std::string reason) {
      result.rejections.push_back({line_no, std::move(reason)});
    };

    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      reject("not a JSON object");
      continue;
    }
    if (!record.contains("id") || !record["id"].is_string() ||
        record["id"].get_ref<const std::string&>().empty()) {
      reject("missing or invalid id");
      continue;
    }
    std::string id = record["id"].get<std::string>();
    if (!record.contains("lines") || !record["lines"].is_array()) {
      reject("missing lines field");
      continue;
    }
    const json& lines = record["lines"];
    if (lines.size() != 4) {
      reject("expected exactly 4 lines, got " + std::to_string(lines.size()));
      continue;
    }
    bool lines_ok = true;
    for (const json& l : lines) {
      if (!l.is_string() || is_blank(l.get_ref<const std::string&>())) {
        lines_ok = false;
        break;
      }
    }
    if (!lines_ok) {
      reject("lines must be 4 non-empty strings");
      continue;
    }
    if (record.contains("lang") && (!record["lang"].is_string() ||
                                    record["lang"].get_ref<const std::string&>() != lang)) {
      reject("lang mismatch");
      continue;
    }
    Quatrain q;
    q.id = std::move(id);
    q.lang = std::string(lang);
    for (std::size_t i = 0; i < 4; ++i) q.verses[i] = Verse::from_raw(lines[i].get<std::string>());
    if (record.contains("labels")) {
      const json& labels = record["labels"];
      if (!labels.is_object()) {
        reject("labels must be an object");
        continue;
      }
      bool labels_ok = true;
      for (const auto& [key, value] : labels.items()) {
        if (value.is_string()) {
          q.labels[key] = value.get<std::string>();
        } else if (!value.is_null()) {
          labels_ok = false;
          break;
        }
      }
      if (!labels_ok) {
        reject("label values must be strings");
        continue;
      }
    }
    if (!seen_ids.insert(q.id).second) {
      reject("duplicate id: " + q.id);
      continue;
    }
    result.corpus.quatrains.push_back(std::move(q));
  }
  return result;
}

ParseResult parse_corpus_file(const std::string& path, std::string_view lang) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file: " + path);
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_corpus(in, lang, name);
}

namespace {

std::array<std::string, 4> verse_keys(const Quatrain& q) {
  return {q.verses[0].normalized(), q.verses[1].normalized(), q.verses[2].normalized(),
          q.verses[3].normalized()};
}

bool shares_any(const std::array<std::string, 4>& a, const std::array<std::string, 4>& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (x == y) return true;
  return false;
}

}  // namespace

bool shares_verse(const Quatrain& a, const Quatrain& b) {
  return shares_any(verse_keys(a), verse_keys(b));
}

Corpus dedup_overlaps(const Corpus& corpus) {
  const std::size_t n = corpus.size();
  std::vector<std::array<std::string, 4>> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = verse_keys(corpus.quatrains[i]);

  // Pass 1: sequential scan against the previous retained quatrain.
  std::vector<std::size_t> retained;
  retained.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (retained.empty() || !shares_any(keys[i], keys[retained.back()])) retained.push_back(i);
  }

  // Pass 2: iterated removal of the most-overlapping quatrains.
  for (;;) {
    std::unordered_map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t idx : retained)
      for (const auto& key : keys[idx]) groups[key].push_back(idx);

    std::unordered_map<std::size_t, std::size_t> overlap_count;
    for (std::size_t idx : retained) {
      std::unordered_set<std::size_t> neighbors;
      for (const auto& key : keys[idx]) {
        const auto& members = groups[key];
        if (members.size() < 2) continue;
        for (std::size_t other : members)
          if (other != idx) neighbors.insert(other);
      }
      if (!neighbors.empty()) overlap_count[idx] = neighbors.size();
    }
    if (overlap_count.empty()) break;

    std::vector<std::pair<std::size_t, std::size_t>> participating(overlap_count.begin(),
                                                                   overlap_count.end());
    // Biggest overlap first; ties drop the earlier-indexed quatrain.
    std::sort(participating.begin(), participating.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    const std::size_t remove_n = (participating.size() + 9) / 10;  // ceil(10%)
    std::unordered_set<std::size_t> removed;
    for (std::size_t i = 0; i < remove_n; ++i) removed.insert(participating[i].first);
    std::erase_if(retained, [&](std::size_t idx) { return removed.contains(idx); });
  }

  Corpus out;
  out.name = corpus.name;
  out.lang = corpus.lang;
  out.quatrains.reserve(retained.size());
  for (std::size_t idx : retained) out.quatrains.push_back(corpus.quatrains[idx]);
  return out;
}

std::pair<Corpus, Corpus> split_train_dev(const Corpus& corpus, std::uint64_t seed) {
  const std::size_t n = corpus.size();
  if (n == 0) throw ValidationError("cannot split an empty corpus");
  SplitRng rng(seed);
  const std::vector<std::size_t> order = sample_without_replacement(n, n, rng);
  const std::size_t dev_n = (n + 5) / 10;  // round(0.1 * n), half up

  Corpus train, dev;
  train.name = corpus.name + "-train";
  dev.name = corpus.name + "-dev";
  train.lang = dev.lang = corpus.lang;
  dev.quatrains.reserve(dev_n);
  train.quatrains.reserve(n - dev_n);
  for (std::size_t i = 0; i < n; ++i) {
    (i < dev_n ? dev : train).quatrains.push_back(corpus.quatrains[order[i]]);
  }
  return {std::move(train), std::move(dev)};
}

std::size_t default_sonnet_count(std::size_t corpus_size) { return corpus_size * 2 / 7; }

std::vector<PseudoSonnet> build_pseudo_sonnets(const Corpus& corpus, std::size_t count,
                                               std::uint64_t seed) {
  const std::size_t n = corpus.size();
  if (n < 4) throw ValidationError("pseudo-sonnets need at least 4 quatrains");
  SplitRng base(seed);
  std::vector<PseudoSonnet> sonnets;
  sonnets.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    SplitRng rng = base.split(s);
    const std::vector<std::size_t> picks = sample_without_replacement(n, 4, rng);
    PseudoSonnet sonnet;
    std::copy(picks.begin(), picks.end(), sonnet.source_indices.begin());
    sonnet.couplet_position =
        rng.bounded(2) == 0 ? CoupletPosition::first_half : CoupletPosition::second_half;
    sonnets.push_back(sonnet);
  }
  return sonnets;
}

std::vector<Sample> draw_samples(const Corpus& corpus, std::size_t k, std::size_t size,
                                 std::uint64_t seed) {
  const std::size_t n = corpus.size();
  if (size > n)
    throw ValidationError("sample size " + std::to_string(size) + " exceeds corpus size " +
                          std::to_string(n));
  SplitRng base(seed);
  std::vector<Sample> samples;
  samples.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    Sample sample;
    sample.corpus_ref = corpus.name;
    sample.seed = base.split_key(s);
    SplitRng rng(sample.seed);
    sample.indices = sample_without_replacement(n, size, rng);
    samples.push_back(std::move(sample));
  }
  return samples;
}

Corpus materialize(const Corpus& corpus, const Sample& sample) {
  Corpus out;
  out.name = corpus.name;
  out.lang = corpus.lang;
  out.quatrains.reserve(sample.indices.size());
  for (std::size_t idx : sample.indices) out.quatrains.push_back(corpus.quatrains.at(idx));
  return out;
}

}  // namespace poemdiv
