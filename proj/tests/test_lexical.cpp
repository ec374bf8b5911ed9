#include <doctest.h>

#include <algorithm>
#include <map>

#include "oracles.hpp"
#include "poemdiv/errors.hpp"
#include "poemdiv/lexical.hpp"
#include "poemdiv/rng.hpp"
#include "test_util.hpp"

using namespace poemdiv;

namespace {

std::vector<std::string> random_stream(SplitRng& rng, std::size_t len, std::size_t vocab) {
  std::vector<std::string> tokens;
  tokens.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
    tokens.push_back("w" + std::to_string(rng.bounded(vocab)));
  return tokens;
}

}  // namespace

TEST_CASE("ttr examples") {
  CHECK(ttr(std::vector<std::string>{"a", "b", "c"}) == 1.0);
  CHECK(ttr(std::vector<std::string>{"a", "a", "a", "a"}) == 0.25);
  CHECK(ttr(std::vector<std::string>{"to", "be", "or", "not", "to", "be"}) ==
        doctest::Approx(4.0 / 6.0));
  CHECK_THROWS_AS(ttr(std::vector<std::string>{}), ValidationError);
}

TEST_CASE("attr examples") {
  const Corpus distinct = testutil::make_corpus("d", {
                                                         {"a b", "c d", "e f", "g h"},
                                                         {"p q", "r s", "t u", "v w"},
                                                     });
  CHECK(attr(distinct).value == 1.0);

  const Corpus mixed = testutil::make_corpus("m", {
                                                      {"a b", "c d", "e f", "g h"},
                                                      {"x x", "x x", "y y", "y y"},
                                                  });
  CHECK(attr(mixed).value == doctest::Approx(0.625));  // (1.0 + 0.25) / 2

  Corpus with_empty = mixed;
  with_empty.quatrains.push_back(testutil::make_quatrain("e", {"!", "?", "—", "…"}));
  const AttrResult r = attr(with_empty);
  CHECK(r.value == doctest::Approx(0.625));
  CHECK(r.excluded == 1);

  const Corpus all_empty = testutil::make_corpus("a", {{"!", "?", "—", "…"}});
  CHECK_THROWS_AS(attr(all_empty), ValidationError);
}

TEST_CASE("mattr examples") {
  {
    std::vector<std::string> same(100, "a");
    CHECK(mattr(same, 10) == doctest::Approx(0.1));
  }
  {
    std::vector<std::string> distinct;
    for (int i = 0; i < 50; ++i) distinct.push_back("w" + std::to_string(i));
    CHECK(mattr(distinct, 7) == 1.0);
  }
  {
    std::vector<std::string> alternating;
    for (int i = 0; i < 100; ++i) alternating.push_back(i % 2 == 0 ? "a" : "b");
    CHECK(mattr(alternating, 4) == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(mattr(std::vector<std::string>{"a"}, 0), ValidationError);
}

TEST_CASE("mattr with window == stream length degenerates to ttr") {
  SplitRng rng(15);
  for (int round = 0; round < 20; ++round) {
    const auto tokens = random_stream(rng, 50 + rng.bounded(200), 30);
    CHECK(mattr(tokens, tokens.size()) == ttr(tokens));
    // Shorter streams fall back to plain TTR too.
    CHECK(mattr(tokens, tokens.size() * 2) == ttr(tokens));
  }
}

TEST_CASE("mattr equals the materialized-window brute force") {
  SplitRng rng(25);
  for (int round = 0; round < 30; ++round) {
    const std::size_t len = 20 + rng.bounded(1000);
    const std::size_t vocab = 2 + rng.bounded(60);
    const std::size_t window = 1 + rng.bounded(len + 10);
    const auto tokens = random_stream(rng, len, vocab);
    CHECK(mattr(tokens, window) ==
          doctest::Approx(oracles::brute_mattr(tokens, window)).epsilon(1e-12));
  }
}

TEST_CASE("mtld examples") {
  {
    // A single repeated token completes a factor every two tokens.
    std::vector<std::string> same(100, "a");
    CHECK(mtld(same, 0.72) == doctest::Approx(2.0));
    CHECK(mtld_forward(same, 0.72) == doctest::Approx(2.0));
  }
  {
    // All distinct: no factor ever completes, the fallback returns N.
    std::vector<std::string> distinct;
    for (int i = 0; i < 37; ++i) distinct.push_back("w" + std::to_string(i));
    CHECK(mtld(distinct, 0.72) == 37.0);
  }
  CHECK_THROWS_AS(mtld(std::vector<std::string>{}, 0.72), ValidationError);
  CHECK_THROWS_AS(mtld(std::vector<std::string>{"a"}, 0.0), ValidationError);
  CHECK_THROWS_AS(mtld(std::vector<std::string>{"a"}, 1.0), ValidationError);
}

TEST_CASE("mtld equals the direct simulation, forward equals backward on palindromes") {
  SplitRng rng(35);
  for (int round = 0; round < 30; ++round) {
    const auto tokens = random_stream(rng, 20 + rng.bounded(1500), 2 + rng.bounded(40));
    CHECK(mtld(tokens, 0.72) ==
          doctest::Approx(oracles::brute_mtld(tokens, 0.72)).epsilon(1e-12));
  }
  for (int round = 0; round < 10; ++round) {
    auto half = random_stream(rng, 10 + rng.bounded(200), 8);
    std::vector<std::string> palindrome(half);
    palindrome.insert(palindrome.end(), half.rbegin(), half.rend());
    CHECK(mtld_forward(palindrome, 0.72) ==
          doctest::Approx(oracles::mtld_direction(palindrome, 0.72)));
    const std::vector<std::string> reversed(palindrome.rbegin(), palindrome.rend());
    CHECK(mtld_forward(palindrome, 0.72) == mtld_forward(reversed, 0.72));
  }
}

TEST_CASE("mtld is invariant under vocabulary relabeling") {
  SplitRng rng(45);
  for (int round = 0; round < 10; ++round) {
    const auto tokens = random_stream(rng, 400, 25);
    std::map<std::string, std::string> relabel;
    std::vector<std::string> renamed;
    renamed.reserve(tokens.size());
    for (const auto& tok : tokens) {
      auto [it, inserted] =
          relabel.try_emplace(tok, "fresh_" + std::to_string(relabel.size() * 7 + 3));
      renamed.push_back(it->second);
    }
    CHECK(mtld(tokens, 0.72) == mtld(renamed, 0.72));
  }
}

TEST_CASE("attr is order invariant; the stream metrics are order deterministic") {
  Corpus corpus = testutil::random_corpus("c", 12, 55);
  Corpus shuffled = corpus;
  std::reverse(shuffled.quatrains.begin(), shuffled.quatrains.end());
  CHECK(attr(corpus).value == attr(shuffled).value);

  const LexicalReport a = lexical_report(corpus);
  const LexicalReport b = lexical_report(corpus);
  CHECK(a.attr == b.attr);
  CHECK(a.mattr == b.mattr);
  CHECK(a.mtld == b.mtld);
}

TEST_CASE("lexical_report composes the three metrics") {
  const Corpus corpus = testutil::random_corpus("c", 20, 65);
  LexicalConfig config;
  config.mattr_window = 40;
  const LexicalReport report = lexical_report(corpus, config);
  const auto stream = token_stream(corpus);
  CHECK(report.attr == attr(corpus).value);
  CHECK(report.mattr == mattr(stream, 40));
  CHECK(report.mtld == mtld(stream, 0.72));
  CHECK(report.attr > 0.0);
  CHECK(report.attr <= 1.0);
}

TEST_CASE("lowercase=false keeps case distinctions") {
  const Corpus corpus = testutil::make_corpus("c", {{"The the THE the", "a a a a", "b b b b",
                                                     "c c c c"}});
  LexicalConfig cased;
  cased.lowercase = false;
  // Lowercased: {the, a, b, c} -> 4/16; cased adds The and THE -> 6/16.
  CHECK(lexical_report(corpus).attr == doctest::Approx(4.0 / 16.0));
  CHECK(lexical_report(corpus, cased).attr == doctest::Approx(6.0 / 16.0));
}
