#include <doctest.h>

#include <cmath>
#include <sstream>

#include "poemdiv/errors.hpp"
#include "poemdiv/length.hpp"
#include "test_util.hpp"

using namespace poemdiv;

TEST_CASE("quatrain_length sums verse tokens") {
  const Quatrain zero = testutil::make_quatrain("z", {"!!!", "...", "——", "??"});
  CHECK(quatrain_length(zero) == 0);
  const Quatrain q = testutil::make_quatrain(
      "q", {"one two three four five six", "one two three four five six",
            "one two three four five six", "one two three four five six"});
  CHECK(quatrain_length(q) == 24);
}

TEST_CASE("length_stats exact values") {
  {
    const std::vector<int> v{5, 5, 5};
    const LengthStats s = length_stats(v);
    CHECK(s.mean == 5.0);
    CHECK(s.stddev == 0.0);
    CHECK(s.median == 5.0);
  }
  {
    const std::vector<int> v{4, 65};
    const LengthStats s = length_stats(v);
    CHECK(s.min == 4.0);
    CHECK(s.max == 65.0);
  }
  {
    const std::vector<int> v{1, 2, 3, 4};
    const LengthStats s = length_stats(v);
    CHECK(s.median == 2.5);
    CHECK(s.mean == 2.5);
  }
  {
    // Population vs sample std on {1, 3}: sqrt(1) vs sqrt(2).
    const std::vector<int> v{1, 3};
    CHECK(length_stats(v).stddev == doctest::Approx(1.0));
    CHECK(length_stats(v, StdDevMode::sample).stddev == doctest::Approx(std::sqrt(2.0)));
  }
  CHECK_THROWS_AS(length_stats(std::vector<int>{}), ValidationError);
}

TEST_CASE("histogram intersection examples and properties") {
  const std::vector<int> a{1, 1, 2, 2};
  const std::vector<int> b{1, 2, 2, 2};
  const auto ha = LengthHistogram::from_lengths(a);
  const auto hb = LengthHistogram::from_lengths(b);

  // p = [0.5, 0.5], q = [0.25, 0.75] -> sum of minima 0.75.
  CHECK(histogram_intersection(ha, hb) == doctest::Approx(0.75).epsilon(1e-12));

  CHECK(histogram_intersection(ha, ha) == doctest::Approx(1.0).epsilon(1e-12));

  const auto hc = LengthHistogram::from_lengths(std::vector<int>{7, 8, 9});
  CHECK(histogram_intersection(ha, hc) == 0.0);

  // Symmetry.
  CHECK(histogram_intersection(ha, hb) == histogram_intersection(hb, ha));

  // Intersection of different histograms stays below 1.
  CHECK(histogram_intersection(ha, hb) < 1.0);
}

TEST_CASE("histogram masses are normalized") {
  SplitRng rng(7);
  std::vector<int> lengths;
  for (int i = 0; i < 500; ++i) lengths.push_back(static_cast<int>(rng.bounded(40)));
  const auto hist = LengthHistogram::from_lengths(lengths);
  CHECK(hist.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& [length, mass] : hist.masses()) CHECK(mass > 0.0);
}

TEST_CASE("histogram csv export") {
  const auto hist = LengthHistogram::from_lengths(std::vector<int>{3, 3, 5});
  std::ostringstream out;
  hist.write_csv(out);
  const std::string csv = out.str();
  CHECK(csv.rfind("length,mass\n", 0) == 0);
  CHECK(csv.find("3,0.66") != std::string::npos);
  CHECK(csv.find("5,0.33") != std::string::npos);
}

TEST_CASE("sample_lengths maps a corpus") {
  const Corpus corpus = testutil::make_corpus("c", {{"a b", "c", "d", "e"}, {"x", "y", "z", "w"}});
  CHECK(sample_lengths(corpus) == std::vector<int>{5, 4});
}
