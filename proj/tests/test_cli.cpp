#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "poemdiv/cli.hpp"
#include "poemdiv/length.hpp"
#include "poemdiv/lexical.hpp"
#include "poemdiv/memorization.hpp"
#include "poemdiv/rhyme.hpp"
#include "poemdiv/semantic.hpp"
#include "test_util.hpp"

using nlohmann::json;
using testutil::TempDir;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("poemdiv");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      poemdiv::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> read_jsonl(const std::string& bytes) {
  std::vector<json> records;
  std::istringstream in(bytes);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(json::parse(line));
  }
  return records;
}

std::string clean_fixture() {
  const poemdiv::Corpus corpus = testutil::random_corpus("clean", 20, 101);
  return testutil::corpus_to_jsonl(corpus);
}

}  // namespace

TEST_CASE("prep on a clean fixture is the identity modulo formatting") {
  TempDir dir("prep_clean");
  dir.write("in.jsonl", clean_fixture());
  const CliResult r = run_cli({"prep", "--input", dir.file("in.jsonl"), "--output-dir",
                               dir.file("out"), "--lang", "en", "--seed", "5"});
  REQUIRE(r.code == 0);

  const auto input = read_jsonl(dir.read("in.jsonl"));
  const auto output = read_jsonl(dir.read("out/corpus.jsonl"));
  REQUIRE(output.size() == input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    CHECK(output[i]["id"] == input[i]["id"]);
    CHECK(output[i]["lines"] == input[i]["lines"]);
  }
  CHECK(dir.read("out/rejections.jsonl").empty());

  const auto train = read_jsonl(dir.read("out/train.jsonl"));
  const auto dev = read_jsonl(dir.read("out/dev.jsonl"));
  CHECK(train.size() == 18);
  CHECK(dev.size() == 2);

  // Same seed, same bytes.
  const CliResult again = run_cli({"prep", "--input", dir.file("in.jsonl"), "--output-dir",
                                   dir.file("out2"), "--lang", "en", "--seed", "5"});
  REQUIRE(again.code == 0);
  CHECK(dir.read("out/train.jsonl") == dir.read("out2/train.jsonl"));
  CHECK(dir.read("out/dev.jsonl") == dir.read("out2/dev.jsonl"));
}

TEST_CASE("prep rejects malformed records into the rejection log") {
  TempDir dir("prep_rej");
  dir.write("in.jsonl", clean_fixture() +
                            "{\"id\": \"bad\", \"lines\": [\"a\", \"b\", \"c\"]}\n"
                            "garbage\n");
  const CliResult r = run_cli({"prep", "--input", dir.file("in.jsonl"), "--output-dir",
                               dir.file("out"), "--lang", "en"});
  REQUIRE(r.code == 0);
  const auto rejections = read_jsonl(dir.read("out/rejections.jsonl"));
  REQUIRE(rejections.size() == 2);
  CHECK(rejections[0]["line_no"] == 21);
  CHECK(rejections[1]["line_no"] == 22);
}

TEST_CASE("prep --sonnets emits fourteen-line pseudo-sonnets") {
  TempDir dir("prep_sonnets");
  dir.write("in.jsonl", clean_fixture());
  const CliResult r = run_cli({"prep", "--input", dir.file("in.jsonl"), "--output-dir",
                               dir.file("out"), "--lang", "en", "--seed", "5", "--sonnets"});
  REQUIRE(r.code == 0);
  const auto sonnets = read_jsonl(dir.read("out/train_sonnets.jsonl"));
  CHECK(sonnets.size() == 18 * 2 / 7);
  for (const json& s : sonnets) {
    CHECK(s["lines"].size() == 14);
    std::set<std::string> sources;
    for (const auto& id : s["source_ids"]) sources.insert(id.get<std::string>());
    CHECK(sources.size() == 4);
  }
}

TEST_CASE("analyze self-comparison hits the degenerate limits") {
  TempDir dir("analyze_self");
  dir.write("c.jsonl", clean_fixture());
  const CliResult r = run_cli({"analyze", "--candidate", dir.file("c.jsonl"), "--reference",
                               dir.file("c.jsonl"), "--lang", "en", "--seed", "3", "--output",
                               dir.file("report.json")});
  REQUIRE(r.code == 0);
  const json report = json::parse(dir.read("report.json"));
  CHECK(report["memorization"]["quatrain"]["rate"] == 1.0);
  CHECK(report["length"]["histogram_intersection"] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report["rhyme"]["kl_from_reference"] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report["semantic"]["across"] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report["provenance"]["seed"] == 3);
}

TEST_CASE("analyze reruns and thread counts are byte-identical") {
  TempDir dir("analyze_det");
  dir.write("c.jsonl", testutil::corpus_to_jsonl(testutil::random_corpus("cand", 30, 7)));
  dir.write("r.jsonl", testutil::corpus_to_jsonl(testutil::random_corpus("ref", 40, 8)));
  const std::vector<std::string> base = {"analyze",    "--candidate",
                                         dir.file("c.jsonl"), "--reference",
                                         dir.file("r.jsonl"), "--lang",
                                         "en",         "--seed",
                                         "11"};
  auto with = [&](std::initializer_list<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra);
    return args;
  };
  const CliResult a = run_cli(with({"--output", dir.file("a.json"), "--threads", "1"}));
  const CliResult b = run_cli(with({"--output", dir.file("b.json"), "--threads", "8"}));
  const CliResult c = run_cli(with({"--output", dir.file("c.json"), "--threads", "1"}));
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  REQUIRE(c.code == 0);
  CHECK(dir.read("a.json") == dir.read("b.json"));
  CHECK(dir.read("a.json") == dir.read("c.json"));
}

TEST_CASE("analyze csv format carries the same leaves") {
  TempDir dir("analyze_csv");
  dir.write("c.jsonl", clean_fixture());
  const CliResult r = run_cli({"analyze", "--candidate", dir.file("c.jsonl"), "--reference",
                               dir.file("c.jsonl"), "--lang", "en", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("key,value\n", 0) == 0);
  CHECK(r.out.find("rhyme.kl_from_reference,0.0") != std::string::npos);
}

TEST_CASE("rank aggregates reports; a single report is trivially first") {
  TempDir dir("rank");
  dir.write("c1.jsonl", testutil::corpus_to_jsonl(testutil::random_corpus("model-one", 25, 31)));
  dir.write("c2.jsonl", testutil::corpus_to_jsonl(testutil::random_corpus("model-two", 25, 32)));
  dir.write("ref.jsonl", testutil::corpus_to_jsonl(testutil::random_corpus("human", 40, 33)));
  for (const char* name : {"c1", "c2"}) {
    const CliResult r =
        run_cli({"analyze", "--candidate", dir.file(std::string(name) + ".jsonl"), "--reference",
                 dir.file("ref.jsonl"), "--lang", "en", "--seed", "2", "--model", name,
                 "--output", dir.file(std::string(name) + ".report.json")});
    REQUIRE(r.code == 0);
  }

  const CliResult single = run_cli({"rank", dir.file("c1.report.json")});
  REQUIRE(single.code == 0);
  CHECK(single.out.rfind("model,memorization,length,rhyme,lexical,semantic,avg_rank\n", 0) == 0);
  CHECK(single.out.find("c1,1.0,1.0,1.0,1.0,1.0,1.0\n") != std::string::npos);

  const CliResult both = run_cli({"rank", dir.file("c1.report.json"), dir.file("c2.report.json"),
                                  "--format", "json"});
  REQUIRE(both.code == 0);
  const json table = json::parse(both.out);
  REQUIRE(table["rows"].size() == 2);
  const double avg0 = table["rows"][0]["avg_rank"].get<double>();
  const double avg1 = table["rows"][1]["avg_rank"].get<double>();
  CHECK(avg0 <= avg1);
  CHECK(table["rows"][0].contains("memorization"));
  CHECK(table.contains("dimension_correlations"));
}

TEST_CASE("embed emits a deterministic file covering the corpus") {
  TempDir dir("embed");
  dir.write("c.jsonl", clean_fixture());
  const CliResult a = run_cli({"embed", "--input", dir.file("c.jsonl"), "--lang", "en",
                               "--output", dir.file("a.tsv"), "--dim", "32"});
  const CliResult b = run_cli({"embed", "--input", dir.file("c.jsonl"), "--lang", "en",
                               "--output", dir.file("b.tsv"), "--dim", "32"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const std::string bytes = dir.read("a.tsv");
  CHECK(bytes == dir.read("b.tsv"));
  CHECK(bytes.rfind("dim=32\n", 0) == 0);

  std::istringstream in(bytes);
  std::string line;
  std::getline(in, line);
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    if (!line.empty()) ids.insert(line.substr(0, line.find('\t')));
  }
  CHECK(ids.size() == 20);
  CHECK(ids.count("q0") == 1);
  CHECK(ids.count("q19") == 1);

  // Analyze accepts the emitted file for both sides, given once or twice.
  const CliResult used =
      run_cli({"analyze", "--candidate", dir.file("c.jsonl"), "--reference", dir.file("c.jsonl"),
               "--lang", "en", "--embeddings", dir.file("a.tsv"), "--output",
               dir.file("rep.json")});
  REQUIRE(used.code == 0);
  const json report = json::parse(dir.read("rep.json"));
  CHECK(report["semantic"]["across"] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report["semantic"]["provider"].get<std::string>().rfind("file:", 0) == 0);

  const CliResult pair =
      run_cli({"analyze", "--candidate", dir.file("c.jsonl"), "--reference", dir.file("c.jsonl"),
               "--lang", "en", "--embeddings", dir.file("a.tsv"), dir.file("b.tsv"),
               "--output", dir.file("rep2.json")});
  REQUIRE(pair.code == 0);
  CHECK(json::parse(dir.read("rep2.json"))["semantic"]["across"] ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("analyze report values compose from the module operations") {
  // Small corpora are drawn whole (as permutations), so every order-invariant
  // metric must equal a direct composition of the module-level calls.
  TempDir dir("analyze_compose");
  poemdiv::Corpus cand = testutil::random_corpus("cand", 6, 201);
  const poemdiv::Corpus ref = testutil::random_corpus("ref", 9, 202);
  cand.quatrains.push_back(ref.quatrains[4]);
  cand.quatrains.back().id = "copied";
  dir.write("cand.jsonl", testutil::corpus_to_jsonl(cand));
  dir.write("ref.jsonl", testutil::corpus_to_jsonl(ref));

  const CliResult r = run_cli({"analyze", "--candidate", dir.file("cand.jsonl"), "--reference",
                               dir.file("ref.jsonl"), "--lang", "en", "--seed", "12",
                               "--output", dir.file("report.json")});
  REQUIRE(r.code == 0);
  const json report = json::parse(dir.read("report.json"));

  const poemdiv::SimilarityThresholds th;
  for (const auto level : {poemdiv::Level::quatrain, poemdiv::Level::couplet,
                           poemdiv::Level::verse}) {
    const auto expected = poemdiv::memorization_scan(cand, ref, level, th);
    const json& got = report["memorization"][std::string(poemdiv::level_name(level))];
    CHECK(got["rate"].get<double>() == expected.rate);
    REQUIRE(got["matches"].size() == expected.matches.size());
    for (std::size_t i = 0; i < expected.matches.size(); ++i) {
      CHECK(got["matches"][i]["unit_id"] == expected.matches[i].unit_id);
      CHECK(got["matches"][i]["train_id"] == expected.matches[i].train_id);
      CHECK(got["matches"][i]["score"].get<double>() == expected.matches[i].score);
    }
  }

  const auto cand_hist = poemdiv::LengthHistogram::from_lengths(poemdiv::sample_lengths(cand));
  const auto ref_hist = poemdiv::LengthHistogram::from_lengths(poemdiv::sample_lengths(ref));
  CHECK(report["length"]["histogram_intersection"].get<double>() ==
        doctest::Approx(poemdiv::histogram_intersection(cand_hist, ref_hist)).epsilon(1e-12));

  const auto judge = poemdiv::RhymeJudge::for_lang("en");
  const auto cand_dist = poemdiv::scheme_distribution(cand, judge);
  const auto ref_dist = poemdiv::scheme_distribution(ref, judge);
  CHECK(report["rhyme"]["entropy_candidate"].get<double>() ==
        doctest::Approx(poemdiv::entropy(cand_dist)).epsilon(1e-12));
  CHECK(report["rhyme"]["kl_from_reference"].get<double>() ==
        doctest::Approx(poemdiv::kl_divergence(ref_dist, cand_dist)).epsilon(1e-12));

  CHECK(report["lexical"]["candidate"]["attr"].get<double>() ==
        doctest::Approx(poemdiv::attr(cand).value).epsilon(1e-12));

  const auto cand_m = poemdiv::builtin_embeddings(cand);
  const auto ref_m = poemdiv::builtin_embeddings(ref);
  CHECK(report["semantic"]["within_candidate"].get<double>() ==
        doctest::Approx(poemdiv::avg_max_within(cand_m)).epsilon(1e-12));
  CHECK(report["semantic"]["across"].get<double>() ==
        doctest::Approx(poemdiv::avg_max_across(cand_m, ref_m)).epsilon(1e-12));
}

TEST_CASE("config file values merge under command-line flags") {
  TempDir dir("config");
  dir.write("c.jsonl", clean_fixture());
  dir.write("run.cfg", "[analyze]\nseed=77\nsample-size=5\n");

  const CliResult from_config =
      run_cli({"--config", dir.file("run.cfg"), "analyze", "--candidate", dir.file("c.jsonl"),
               "--reference", dir.file("c.jsonl"), "--lang", "en"});
  REQUIRE(from_config.code == 0);
  const json r1 = json::parse(from_config.out);
  CHECK(r1["provenance"]["seed"] == 77);
  CHECK(r1["provenance"]["sample_size"] == 5);

  const CliResult flag_wins =
      run_cli({"--config", dir.file("run.cfg"), "analyze", "--candidate", dir.file("c.jsonl"),
               "--reference", dir.file("c.jsonl"), "--lang", "en", "--seed", "5"});
  REQUIRE(flag_wins.code == 0);
  CHECK(json::parse(flag_wins.out)["provenance"]["seed"] == 5);
}

TEST_CASE("analyze exports the auxiliary csv files on request") {
  TempDir dir("analyze_aux");
  dir.write("c.jsonl", clean_fixture());
  const CliResult r = run_cli({"analyze", "--candidate", dir.file("c.jsonl"), "--reference",
                               dir.file("c.jsonl"), "--lang", "en", "--output",
                               dir.file("rep.json"), "--length-histogram", dir.file("len.csv"),
                               "--rhyme-distribution", dir.file("rhyme.csv")});
  REQUIRE(r.code == 0);
  CHECK(dir.read("len.csv").rfind("length,mass\n", 0) == 0);
  const std::string rhyme_csv = dir.read("rhyme.csv");
  CHECK(rhyme_csv.rfind("scheme,mass\n", 0) == 0);
  // All 15 schemes present, zero-mass ones included.
  CHECK(std::count(rhyme_csv.begin(), rhyme_csv.end(), '\n') == 16);
}

TEST_CASE("validation failures exit 2 with machine-readable error JSON") {
  const CliResult missing = run_cli({"analyze", "--candidate", "/nonexistent/c.jsonl",
                                     "--reference", "/nonexistent/r.jsonl"});
  CHECK(missing.code == 2);
  const json error = json::parse(missing.out);
  CHECK(error["code"] == 2);
  CHECK(error["error"].is_string());

  const CliResult bad_flag = run_cli({"analyze", "--no-such-flag"});
  CHECK(bad_flag.code == 2);
  CHECK(json::parse(bad_flag.out)["code"] == 2);

  const CliResult no_sub = run_cli({});
  CHECK(no_sub.code == 2);

  TempDir dir("cli_err");
  dir.write("c.jsonl", clean_fixture());
  const CliResult bad_sample = run_cli({"analyze", "--candidate", dir.file("c.jsonl"),
                                        "--reference", dir.file("c.jsonl"), "--lang", "en",
                                        "--ref-samples", "0"});
  CHECK(bad_sample.code == 2);
}

TEST_CASE("help exits zero") {
  const CliResult help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("analyze") != std::string::npos);
}
