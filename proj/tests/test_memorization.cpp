#include <doctest.h>

#include <algorithm>
#include <string>

#include "oracles.hpp"
#include "poemdiv/errors.hpp"
#include "poemdiv/memorization.hpp"
#include "poemdiv/rng.hpp"
#include "poemdiv/text.hpp"
#include "test_util.hpp"

using namespace poemdiv;

namespace {

std::u32string random_string(SplitRng& rng, std::size_t len, int alphabet = 6) {
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i)
    s += static_cast<char32_t>(U'a' + rng.bounded(static_cast<std::uint64_t>(alphabet)));
  return s;
}

bool same_matches(const MemorizationResult& a, const MemorizationResult& b) {
  if (a.rate != b.rate || a.matches.size() != b.matches.size()) return false;
  for (std::size_t i = 0; i < a.matches.size(); ++i) {
    if (a.matches[i].unit_id != b.matches[i].unit_id ||
        a.matches[i].train_id != b.matches[i].train_id ||
        a.matches[i].score != b.matches[i].score)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("ratcliff_obershelp examples") {
  CHECK(ratcliff_obershelp(U"abc", U"abc") == 1.0);
  CHECK(ratcliff_obershelp(U"abcd", U"bcde") == 0.75);  // anchor "bcd", K = 3
  CHECK(ratcliff_obershelp(U"abc", U"xyz") == 0.0);
  CHECK(ratcliff_obershelp(U"", U"") == 1.0);
  CHECK(ratcliff_obershelp(U"", U"abc") == 0.0);
  CHECK(ratcliff_obershelp("käse", "käse") == 1.0);
}

TEST_CASE("ratcliff_obershelp equals the naive recursive reference") {
  SplitRng rng(123);
  for (int round = 0; round < 400; ++round) {
    const auto a = random_string(rng, rng.bounded(60), 4);
    const auto b = random_string(rng, rng.bounded(60), 4);
    const double sim = ratcliff_obershelp(a, b);
    CHECK(sim == oracles::naive_ratcliff(a, b));
    CHECK(sim >= 0.0);
    CHECK(sim <= 1.0);
    // Similarity 1 forces equality (and vice versa) for non-empty inputs.
    if (!a.empty() || !b.empty()) CHECK((sim == 1.0) == (a == b));
  }
}

TEST_CASE("similarity bounds") {
  CHECK(similarity_upper_bound(10, 10) == 1.0);
  CHECK(similarity_upper_bound(5, 15) == 0.5);
  CHECK(similarity_upper_bound(0, 0) == 1.0);
  CHECK(similarity_upper_bound(0, 7) == 0.0);

  SplitRng rng(9);
  for (int round = 0; round < 2000; ++round) {
    const auto a = random_string(rng, rng.bounded(40), 5);
    const auto b = random_string(rng, rng.bounded(40), 5);
    CHECK(similarity_upper_bound(a.size(), b.size()) >= ratcliff_obershelp(a, b));
  }
}

TEST_CASE("unit extraction per level") {
  const Corpus corpus = testutil::make_corpus("c", {{"a b", "c d", "e f", "g h"}});
  const auto quatrains = extract_units(corpus, Level::quatrain);
  REQUIRE(quatrains.size() == 1);
  CHECK(quatrains[0].id == "q0");
  CHECK(quatrains[0].text == U"a b\nc d\ne f\ng h");
  const auto couplets = extract_units(corpus, Level::couplet);
  REQUIRE(couplets.size() == 2);
  CHECK(couplets[0].id == "q0:c1");
  CHECK(couplets[0].text == U"a b\nc d");
  CHECK(couplets[1].id == "q0:c2");
  CHECK(couplets[1].text == U"e f\ng h");
  const auto verses = extract_units(corpus, Level::verse);
  REQUIRE(verses.size() == 4);
  CHECK(verses[3].id == "q0:v4");
  CHECK(verses[3].text == U"g h");
}

TEST_CASE("memorization flags a verbatim copy and nothing else") {
  const Corpus train = testutil::random_corpus("train", 30, 17);
  Corpus sample = testutil::random_corpus("sample", 3, 99);
  sample.quatrains.push_back(train.quatrains[12]);
  sample.quatrains.back().id = "copy";

  const SimilarityThresholds th;
  const auto result = memorization_scan(sample, train, Level::quatrain, th);
  CHECK(result.rate == 0.25);
  REQUIRE(result.matches.size() == 1);
  CHECK(result.matches[0].unit_id == "copy");
  CHECK(result.matches[0].train_id == "q12");
  CHECK(result.matches[0].score == 1.0);
}

TEST_CASE("disjoint alphabets yield zero rates at every level") {
  const Corpus train = testutil::make_corpus("t", {{"aaa aa", "aab ab", "aba ba", "abb bb"}});
  const Corpus sample = testutil::make_corpus("s", {{"zzz zz", "zzy zy", "zyz yz", "zyy yy"}});
  const SimilarityThresholds th;
  for (Level level : {Level::quatrain, Level::couplet, Level::verse}) {
    const auto result = memorization_scan(sample, train, level, th);
    CHECK(result.rate == 0.0);
    CHECK(result.matches.empty());
  }
}

TEST_CASE("pruned scan equals the brute-force scan") {
  const Corpus train = testutil::random_corpus("train", 300, 21);
  Corpus sample = testutil::random_corpus("sample", 40, 22);
  // Plant near-misses and hits to exercise the threshold neighborhood.
  for (int i = 0; i < 6; ++i) {
    Quatrain q = train.quatrains[static_cast<std::size_t>(i) * 31];
    q.id = "planted" + std::to_string(i);
    if (i % 2 == 0) q.verses[1] = Verse::from_raw("perturbed middle verse here");
    sample.quatrains.push_back(std::move(q));
  }
  const SimilarityThresholds th;
  for (Level level : {Level::quatrain, Level::couplet, Level::verse}) {
    const auto pruned = memorization_scan(sample, train, level, th);
    const auto brute = oracles::brute_scan(sample, train, level, th.at(level));
    CHECK(same_matches(pruned, brute));
  }
}

TEST_CASE("scan is independent of thread count") {
  const Corpus train = testutil::random_corpus("train", 120, 31);
  Corpus sample = testutil::random_corpus("sample", 25, 32);
  sample.quatrains.push_back(train.quatrains[5]);
  sample.quatrains.back().id = "copy";
  const SimilarityThresholds th;
  const auto one = memorization_scan(sample, train, Level::verse, th, 1);
  const auto eight = memorization_scan(sample, train, Level::verse, th, 8);
  CHECK(same_matches(one, eight));
}

TEST_CASE("lowering a threshold never lowers the rate") {
  const Corpus train = testutil::random_corpus("train", 60, 41);
  Corpus sample = testutil::random_corpus("sample", 15, 42);
  sample.quatrains.push_back(train.quatrains[0]);
  sample.quatrains.back().id = "copy";
  double previous = -1.0;
  for (double threshold : {0.9, 0.7, 0.5, 0.3, 0.1}) {
    SimilarityThresholds th;
    th.quatrain = threshold;
    const auto result = memorization_scan(sample, train, Level::quatrain, th);
    CHECK(result.rate >= previous);
    previous = result.rate;
  }
}

TEST_CASE("a fully copied quatrain is flagged at all three levels") {
  const Corpus train = testutil::random_corpus("train", 20, 51);
  Corpus sample;
  sample.name = "s";
  sample.lang = "en";
  sample.quatrains.push_back(train.quatrains[7]);
  sample.quatrains[0].id = "copy";
  const SimilarityThresholds th;
  CHECK(memorization_scan(sample, train, Level::quatrain, th).rate == 1.0);
  CHECK(memorization_scan(sample, train, Level::couplet, th).rate == 1.0);
  CHECK(memorization_scan(sample, train, Level::verse, th).rate == 1.0);
}

TEST_CASE("empty train corpus is an error") {
  const Corpus sample = testutil::random_corpus("s", 2, 1);
  CHECK_THROWS_AS(memorization_scan(sample, Corpus{}, Level::quatrain, SimilarityThresholds{}),
                  ValidationError);
}
