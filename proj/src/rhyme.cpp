#include "poemdiv/rhyme.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "poemdiv/errors.hpp"
#include "poemdiv/text.hpp"

namespace poemdiv {

std::string_view verdict_name(RhymeVerdict v) {
  switch (v) {
    case RhymeVerdict::rhyme: return "rhyme";
    case RhymeVerdict::repetition: return "repetition";
    case RhymeVerdict::none: return "none";
  }
  return "?";
}

namespace {

std::string lower_ascii_or_utf8(std::string_view word) {
  // Lexicon keys and lookups share the tokenizer's lowercasing.
  auto tokens = tokenize(word);
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) out += tokens[i];
  return out;
}

bool has_stress_digit(const std::string& phone, std::initializer_list<char> digits) {
  if (phone.empty()) return false;
  const char last = phone.back();
  return std::find(digits.begin(), digits.end(), last) != digits.end();
}

// Suffix from the last vowel phoneme carrying primary or secondary stress;
// falls back to the last vowel phoneme, then to the whole pronunciation.
std::vector<std::string> rhyming_part(const std::vector<std::string>& phones) {
  auto anchor = phones.end();
  for (auto it = phones.begin(); it != phones.end(); ++it)
    if (has_stress_digit(*it, {'1', '2'})) anchor = it;
  if (anchor == phones.end()) {
    for (auto it = phones.begin(); it != phones.end(); ++it)
      if (has_stress_digit(*it, {'0', '1', '2'})) anchor = it;
  }
  if (anchor == phones.end()) return phones;
  return {anchor, phones.end()};
}

bool phonetic_rhyme(const std::vector<std::vector<std::string>>& a,
                    const std::vector<std::vector<std::string>>& b) {
  for (const auto& pa : a) {
    const auto sa = rhyming_part(pa);
    for (const auto& pb : b) {
      if (sa == rhyming_part(pb)) return true;
    }
  }
  return false;
}

// Suffix starting at the last maximal vowel run; empty when the word has no
// vowel from the configured set.
std::u32string_view orthographic_suffix(std::u32string_view word, std::u32string_view vowels) {
  const auto is_vowel = [&](char32_t c) { return vowels.find(c) != std::u32string_view::npos; };
  std::size_t run_start = std::u32string_view::npos;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (is_vowel(word[i])) {
      if (i == 0 || !is_vowel(word[i - 1])) run_start = i;
    }
  }
  if (run_start == std::u32string_view::npos) return {};
  return word.substr(run_start);
}

}  // namespace

PronouncingLexicon PronouncingLexicon::load(std::istream& in) {
  PronouncingLexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind(";;;", 0) == 0) continue;
    std::istringstream parts(line);
    std::string word;
    if (!(parts >> word)) continue;
    // CMUdict variant suffix: WORD(2)
    if (auto paren = word.find('('); paren != std::string::npos) word.resize(paren);
    std::vector<std::string> phones;
    std::string phone;
    while (parts >> phone) phones.push_back(phone);
    if (word.empty() || phones.empty()) continue;
    lex.entries_[lower_ascii_or_utf8(word)].push_back(std::move(phones));
  }
  return lex;
}

PronouncingLexicon PronouncingLexicon::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon file: " + path);
  return load(in);
}

const std::vector<std::vector<std::string>>* PronouncingLexicon::lookup(
    std::string_view word) const {
  const auto it = entries_.find(lower_ascii_or_utf8(word));
  return it == entries_.end() ? nullptr : &it->second;
}

RhymeJudge RhymeJudge::for_lang(std::string_view lang, const PronouncingLexicon* lexicon) {
  RhymeJudge judge;
  judge.lexicon = lexicon;
  judge.vowels = lang == "en" ? U"aeiouy" : U"aeiouyäöü";
  return judge;
}

RhymeVerdict judge_pair(std::string_view w1, std::string_view w2, const RhymeJudge& judge) {
  if (w1 == w2) return RhymeVerdict::repetition;
  if (judge.lexicon) {
    const auto* p1 = judge.lexicon->lookup(w1);
    const auto* p2 = judge.lexicon->lookup(w2);
    if (p1 && p2) return phonetic_rhyme(*p1, *p2) ? RhymeVerdict::rhyme : RhymeVerdict::none;
  }
  const std::u32string u1 = decode_utf8(w1);
  const std::u32string u2 = decode_utf8(w2);
  const auto s1 = orthographic_suffix(u1, judge.vowels);
  const auto s2 = orthographic_suffix(u2, judge.vowels);
  if (s1.size() >= 2 && s1 == s2) return RhymeVerdict::rhyme;
  return RhymeVerdict::none;
}

SchemeResult scheme_of_endings(const std::array<std::optional<std::string>, 4>& endings,
                               const JudgeFn& judge) {
  SchemeResult result;
  for (const auto& e : endings) {
    if (!e) {
      result.label = "ABCD";
      return result;
    }
  }
  std::array<int, 4> letters{};
  int next_letter = 0;
  for (int i = 0; i < 4; ++i) {
    int assigned = -1;
    for (int j = 0; j < i; ++j) {
      const RhymeVerdict v = judge(*endings[j], *endings[i]);
      if (v != RhymeVerdict::none) {
        assigned = letters[j];
        result.links.push_back({j, i, v == RhymeVerdict::repetition});
        break;
      }
    }
    letters[i] = assigned >= 0 ? assigned : next_letter++;
  }
  result.label.resize(4);
  for (int i = 0; i < 4; ++i) result.label[i] = static_cast<char>('A' + letters[i]);
  return result;
}

SchemeResult scheme_of(const Quatrain& q, const RhymeJudge& judge) {
  std::array<std::optional<std::string>, 4> endings;
  for (std::size_t i = 0; i < 4; ++i) {
    if (auto e = q.verses[i].ending_token()) endings[i] = std::string(*e);
  }
  return scheme_of_endings(endings, [&](std::string_view a, std::string_view b) {
    return judge_pair(a, b, judge);
  });
}

const std::array<std::string, 15>& canonical_schemes() {
  // Restricted-growth strings over 4 lines, lexicographically sorted.
  static const std::array<std::string, 15> schemes = [] {
    std::vector<std::string> all;
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 4; ++d) {
          const int max_b = b, max_c = std::max(max_b, c);
          if (c > max_b + 1 || d > max_c + 1) continue;
          std::string label = "A";
          label += static_cast<char>('A' + b);
          label += static_cast<char>('A' + c);
          label += static_cast<char>('A' + d);
          all.push_back(label);
        }
    std::sort(all.begin(), all.end());
    std::array<std::string, 15> out;
    std::copy(all.begin(), all.end(), out.begin());
    return out;
  }();
  return schemes;
}

int scheme_index(std::string_view label) {
  const auto& schemes = canonical_schemes();
  const auto it = std::find(schemes.begin(), schemes.end(), label);
  if (it == schemes.end()) throw std::logic_error("non-canonical scheme label");
  return static_cast<int>(it - schemes.begin());
}

void RhymeDistribution::write_csv(std::ostream& out) const {
  out << "scheme,mass\n";
  const auto& schemes = canonical_schemes();
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s,%.17g\n", schemes[i].c_str(), masses[i]);
    out << buf;
  }
}

RhymeDistribution scheme_distribution(const Corpus& sample, const RhymeJudge& judge) {
  if (sample.size() == 0) throw ValidationError("scheme distribution needs a non-empty sample");
  RhymeDistribution dist;
  std::size_t links = 0, repetitions = 0;
  for (const Quatrain& q : sample.quatrains) {
    const SchemeResult scheme = scheme_of(q, judge);
    dist.masses[static_cast<std::size_t>(scheme_index(scheme.label))] += 1.0;
    for (const RhymeLink& link : scheme.links) {
      ++links;
      if (link.repetition) ++repetitions;
    }
  }
  for (double& m : dist.masses) m /= static_cast<double>(sample.size());
  dist.repetition_rate =
      links == 0 ? 0.0 : static_cast<double>(repetitions) / static_cast<double>(links);
  return dist;
}

double entropy(std::span<const double> masses) {
  double h = 0.0;
  for (double p : masses) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy(const RhymeDistribution& d) { return entropy(std::span(d.masses)); }

double kl_divergence(std::span<const double> reference, std::span<const double> candidate,
                     double epsilon) {
  if (epsilon <= 0.0) throw ValidationError("KL epsilon must be positive");
  if (reference.size() != candidate.size())
    throw ValidationError("KL divergence needs matching supports");
  const auto n = static_cast<double>(reference.size());
  double ref_total = 0.0, cand_total = 0.0;
  for (double p : reference) ref_total += p;
  for (double q : candidate) cand_total += q;
  const double ref_norm = ref_total + n * epsilon;
  const double cand_norm = cand_total + n * epsilon;
  double kl = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double p = (reference[i] + epsilon) / ref_norm;
    const double q = (candidate[i] + epsilon) / cand_norm;
    kl += p * std::log2(p / q);
  }
  return kl;
}

double kl_divergence(const RhymeDistribution& reference, const RhymeDistribution& candidate,
                     double epsilon) {
  return kl_divergence(std::span(reference.masses), std::span(candidate.masses), epsilon);
}

}  // namespace poemdiv
