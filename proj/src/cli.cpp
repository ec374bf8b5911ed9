#include "poemdiv/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "poemdiv/corpus.hpp"
#include "poemdiv/errors.hpp"
#include "poemdiv/length.hpp"
#include "poemdiv/lexical.hpp"
#include "poemdiv/memorization.hpp"
#include "poemdiv/report.hpp"
#include "poemdiv/rhyme.hpp"
#include "poemdiv/rng.hpp"
#include "poemdiv/semantic.hpp"
#include "poemdiv/text.hpp"

namespace poemdiv {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Stream ids for seed derivation; echoed nowhere, but fixed so runs with the
// same seed reproduce every draw.
constexpr std::uint64_t kStreamCandidateSample = 1;
constexpr std::uint64_t kStreamReferenceSamples = 2;
constexpr std::uint64_t kStreamSplit = 3;
constexpr std::uint64_t kStreamTrainSonnets = 4;
constexpr std::uint64_t kStreamDevSonnets = 5;

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << bytes;
  if (!out) throw ValidationError("failed writing output file: " + path);
}

void emit(const std::string& bytes, const std::string& output_path, std::ostream& out) {
  if (output_path.empty() || output_path == "-") {
    out << bytes;
  } else {
    write_file(output_path, bytes);
  }
}

json quatrain_record(const Quatrain& q) {
  json rec;
  rec["id"] = q.id;
  rec["lang"] = q.lang;
  json lines = json::array();
  for (const Verse& v : q.verses) lines.push_back(v.raw);
  rec["lines"] = std::move(lines);
  if (!q.labels.empty()) {
    json labels = json::object();
    for (const auto& [key, value] : q.labels) labels[key] = value;
    rec["labels"] = std::move(labels);
  }
  return rec;
}

std::string corpus_jsonl(const Corpus& corpus) {
  std::string out;
  for (const Quatrain& q : corpus.quatrains) {
    out += quatrain_record(q).dump();
    out += '\n';
  }
  return out;
}

std::string rejections_jsonl(const std::vector<RejectionRecord>& rejections) {
  std::string out;
  for (const RejectionRecord& r : rejections) {
    json rec;
    rec["line_no"] = r.line_no;
    rec["reason"] = r.reason;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

struct PrepOptions {
  std::string input;
  std::string output_dir;
  std::string lang = "de";
  std::uint64_t seed = 0;
  bool sonnets = false;
  std::size_t sonnet_count = 0;  // 0 = floor(2n/7) per split
};

std::string sonnets_jsonl(const Corpus& split, const std::vector<PseudoSonnet>& sonnets,
                          std::string_view prefix) {
  std::string out;
  for (std::size_t k = 0; k < sonnets.size(); ++k) {
    const PseudoSonnet& s = sonnets[k];
    json rec;
    rec["id"] = std::string(prefix) + std::to_string(k);
    rec["lang"] = split.lang;
    rec["couplet"] = s.couplet_position == CoupletPosition::first_half ? "first-half" : "second-half";
    json lines = json::array();
    for (std::size_t qi = 0; qi < 3; ++qi)
      for (const Verse& v : split.quatrains[s.source_indices[qi]].verses) lines.push_back(v.raw);
    const Quatrain& couplet_src = split.quatrains[s.source_indices[3]];
    const std::size_t base = s.couplet_position == CoupletPosition::first_half ? 0 : 2;
    lines.push_back(couplet_src.verses[base].raw);
    lines.push_back(couplet_src.verses[base + 1].raw);
    rec["lines"] = std::move(lines);
    json source_ids = json::array();
    for (std::size_t idx : s.source_indices) source_ids.push_back(split.quatrains[idx].id);
    rec["source_ids"] = std::move(source_ids);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

int run_prep(const PrepOptions& opt, std::ostream& err) {
  ParseResult parsed = parse_corpus_file(opt.input, opt.lang);
  err << "parsed " << parsed.corpus.size() << " quatrains, rejected "
      << parsed.rejections.size() << "\n";

  const Corpus deduped = dedup_overlaps(parsed.corpus);
  err << "dedup kept " << deduped.size() << " of " << parsed.corpus.size() << "\n";

  SplitRng base(opt.seed);
  auto [train, dev] = split_train_dev(deduped, base.split_key(kStreamSplit));

  fs::create_directories(opt.output_dir);
  const fs::path dir(opt.output_dir);
  write_file((dir / "rejections.jsonl").string(), rejections_jsonl(parsed.rejections));
  write_file((dir / "corpus.jsonl").string(), corpus_jsonl(deduped));
  write_file((dir / "train.jsonl").string(), corpus_jsonl(train));
  write_file((dir / "dev.jsonl").string(), corpus_jsonl(dev));
  err << "split " << train.size() << " train / " << dev.size() << " dev\n";

  if (opt.sonnets) {
    const auto sonnets_for = [&](const Corpus& split, std::uint64_t stream) {
      const std::size_t count =
          opt.sonnet_count > 0 ? opt.sonnet_count : default_sonnet_count(split.size());
      if (count == 0) return std::vector<PseudoSonnet>{};  // split too small by default
      return build_pseudo_sonnets(split, count, base.split_key(stream));
    };
    const auto train_sonnets = sonnets_for(train, kStreamTrainSonnets);
    const auto dev_sonnets = sonnets_for(dev, kStreamDevSonnets);
    write_file((dir / "train_sonnets.jsonl").string(), sonnets_jsonl(train, train_sonnets, "ts"));
    write_file((dir / "dev_sonnets.jsonl").string(), sonnets_jsonl(dev, dev_sonnets, "ds"));
    err << "built " << train_sonnets.size() << " train / " << dev_sonnets.size()
        << " dev pseudo-sonnets\n";
  }
  return 0;
}

struct AnalyzeOptions {
  std::string candidate;
  std::string reference;
  std::string lang = "de";
  std::string model;
  std::uint64_t seed = 0;
  std::size_t sample_size = 1000;
  std::size_t ref_samples = 10;
  SimilarityThresholds thresholds;
  double kl_epsilon = 1e-6;
  LexicalConfig lexical;
  std::string lexicon_path;
  std::string vowels;
  std::vector<std::string> embeddings;  // empty/"builtin" or 1-2 file paths
  std::size_t embed_dim = 256;
  int threads = 1;
  std::string format = "json";
  std::string output;
  std::string length_histogram_csv;    // candidate histogram, for plotting
  std::string rhyme_distribution_csv;  // candidate scheme distribution
};

json stats_json(const LengthStats& s) {
  json out;
  out["mean"] = s.mean;
  out["median"] = s.median;
  out["std"] = s.stddev;
  out["min"] = s.min;
  out["max"] = s.max;
  out["n"] = s.n;
  return out;
}

json memorization_json(const MemorizationResult& r) {
  json out;
  out["level"] = std::string(level_name(r.level));
  out["rate"] = r.rate;
  out["unit_count"] = r.unit_count;
  json matches = json::array();
  for (const MatchRecord& m : r.matches) {
    json rec;
    rec["unit_id"] = m.unit_id;
    rec["train_id"] = m.train_id;
    rec["score"] = m.score;
    matches.push_back(std::move(rec));
  }
  out["matches"] = std::move(matches);
  return out;
}

int run_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.ref_samples < 1) throw ValidationError("--ref-samples must be >= 1");
  if (opt.sample_size < 1) throw ValidationError("--sample-size must be >= 1");
  if (opt.threads < 1) throw ValidationError("--threads must be >= 1");

  ParseResult cand_parsed = parse_corpus_file(opt.candidate, opt.lang);
  ParseResult ref_parsed = parse_corpus_file(opt.reference, opt.lang);
  const Corpus& cand_full = cand_parsed.corpus;
  const Corpus& ref_full = ref_parsed.corpus;
  if (cand_full.size() == 0) throw ValidationError("candidate corpus has no valid quatrains");
  if (ref_full.size() == 0) throw ValidationError("reference corpus has no valid quatrains");
  err << "candidate: " << cand_full.size() << " quatrains (" << cand_parsed.rejections.size()
      << " rejected); reference: " << ref_full.size() << " (" << ref_parsed.rejections.size()
      << " rejected)\n";

  SplitRng base(opt.seed);

  // Corpora smaller than the sample size are drawn whole (as a permutation).
  const std::size_t cand_size = std::min(opt.sample_size, cand_full.size());
  const std::size_t ref_size = std::min(opt.sample_size, ref_full.size());
  const Sample cand_sample =
      draw_samples(cand_full, 1, cand_size, base.split_key(kStreamCandidateSample))[0];
  const Corpus cand = materialize(cand_full, cand_sample);
  const std::vector<Sample> ref_samples =
      draw_samples(ref_full, opt.ref_samples, ref_size, base.split_key(kStreamReferenceSamples));

  // Memorization: candidate sample against the full reference corpus.
  err << "memorization scan...\n";
  json memorization = json::object();
  for (const Level level : {Level::quatrain, Level::couplet, Level::verse}) {
    const MemorizationResult r = memorization_scan(cand, ref_full, level, opt.thresholds,
                                                   opt.threads);
    memorization[std::string(level_name(level))] = memorization_json(r);
  }

  // Length.
  const std::vector<int> cand_lengths = sample_lengths(cand);
  const LengthStats cand_stats = length_stats(cand_lengths);
  const LengthHistogram cand_hist = LengthHistogram::from_lengths(cand_lengths);
  if (!opt.length_histogram_csv.empty()) {
    std::ostringstream csv;
    cand_hist.write_csv(csv);
    write_file(opt.length_histogram_csv, csv.str());
  }
  LengthStats ref_mean_stats;
  double hist_mean = 0.0;
  {
    double mean = 0, median = 0, stddev = 0, min = 0, max = 0;
    for (const Sample& s : ref_samples) {
      const std::vector<int> lengths = sample_lengths(materialize(ref_full, s));
      const LengthStats stats = length_stats(lengths);
      mean += stats.mean;
      median += stats.median;
      stddev += stats.stddev;
      min += stats.min;
      max += stats.max;
      hist_mean += histogram_intersection(cand_hist, LengthHistogram::from_lengths(lengths));
    }
    const auto k = static_cast<double>(ref_samples.size());
    ref_mean_stats = {mean / k, median / k, stddev / k, min / k, max / k,
                      ref_samples.front().indices.size()};
    hist_mean /= k;
  }

  // Rhyme.
  err << "rhyme classification...\n";
  std::optional<PronouncingLexicon> lexicon;
  if (!opt.lexicon_path.empty()) lexicon = PronouncingLexicon::load_file(opt.lexicon_path);
  RhymeJudge judge = RhymeJudge::for_lang(opt.lang, lexicon ? &*lexicon : nullptr);
  if (!opt.vowels.empty()) judge.vowels = decode_utf8(opt.vowels);
  const RhymeDistribution cand_dist = scheme_distribution(cand, judge);
  if (!opt.rhyme_distribution_csv.empty()) {
    std::ostringstream csv;
    cand_dist.write_csv(csv);
    write_file(opt.rhyme_distribution_csv, csv.str());
  }
  double ref_entropy_mean = 0.0, kl_mean = 0.0;
  for (const Sample& s : ref_samples) {
    const RhymeDistribution ref_dist = scheme_distribution(materialize(ref_full, s), judge);
    ref_entropy_mean += entropy(ref_dist);
    kl_mean += kl_divergence(ref_dist, cand_dist, opt.kl_epsilon);
  }
  ref_entropy_mean /= static_cast<double>(ref_samples.size());
  kl_mean /= static_cast<double>(ref_samples.size());

  // Lexical.
  const LexicalReport cand_lex = lexical_report(cand, opt.lexical);
  LexicalReport ref_lex{};
  std::size_t ref_lex_excluded = 0;
  for (const Sample& s : ref_samples) {
    const LexicalReport r = lexical_report(materialize(ref_full, s), opt.lexical);
    ref_lex.attr += r.attr;
    ref_lex.mattr += r.mattr;
    ref_lex.mtld += r.mtld;
    ref_lex_excluded += r.excluded_quatrains;
  }
  ref_lex.attr /= static_cast<double>(ref_samples.size());
  ref_lex.mattr /= static_cast<double>(ref_samples.size());
  ref_lex.mtld /= static_cast<double>(ref_samples.size());

  // Semantic.
  err << "semantic similarity...\n";
  EmbeddingMatrix cand_matrix, ref_matrix;
  const bool builtin = opt.embeddings.empty() || opt.embeddings.front() == "builtin";
  if (builtin) {
    cand_matrix = builtin_embeddings(cand, opt.embed_dim);
    ref_matrix = builtin_embeddings(ref_full, opt.embed_dim);
  } else {
    const std::string& cand_path = opt.embeddings.front();
    const std::string& ref_path = opt.embeddings.size() > 1 ? opt.embeddings[1] : cand_path;
    EmbeddingLoadResult cand_load = load_embeddings_file(cand_path, cand);
    if (!cand_load.missing_ids.empty())
      throw ValidationError("embedding file misses " +
                            std::to_string(cand_load.missing_ids.size()) +
                            " sampled candidate ids, first: " + cand_load.missing_ids.front());
    EmbeddingLoadResult ref_load = load_embeddings_file(ref_path, ref_full);
    if (!ref_load.missing_ids.empty())
      throw ValidationError("embedding file misses " +
                            std::to_string(ref_load.missing_ids.size()) +
                            " reference ids, first: " + ref_load.missing_ids.front());
    cand_matrix = std::move(cand_load.matrix);
    ref_matrix = std::move(ref_load.matrix);
  }
  const double within_candidate = avg_max_within(cand_matrix, opt.threads);
  double within_reference = 0.0;
  for (const Sample& s : ref_samples)
    within_reference += avg_max_within(ref_matrix.select(s.indices), opt.threads);
  within_reference /= static_cast<double>(ref_samples.size());
  const double across = avg_max_across(cand_matrix, ref_matrix, opt.threads);

  // Assemble the report.
  json report;
  report["model"] = opt.model.empty() ? cand_full.name : opt.model;
  report["lang"] = opt.lang;
  report["memorization"] = std::move(memorization);
  {
    json length;
    length["candidate"] = stats_json(cand_stats);
    length["reference_mean"] = stats_json(ref_mean_stats);
    length["histogram_intersection"] = hist_mean;
    report["length"] = std::move(length);
  }
  {
    json rhyme;
    json dist = json::object();
    const auto& schemes = canonical_schemes();
    for (std::size_t i = 0; i < schemes.size(); ++i) dist[schemes[i]] = cand_dist.masses[i];
    rhyme["candidate_distribution"] = std::move(dist);
    rhyme["repetition_rate"] = cand_dist.repetition_rate;
    rhyme["entropy_candidate"] = entropy(cand_dist);
    rhyme["entropy_reference_mean"] = ref_entropy_mean;
    rhyme["kl_from_reference"] = kl_mean;
    report["rhyme"] = std::move(rhyme);
  }
  {
    json lexical;
    json c;
    c["attr"] = cand_lex.attr;
    c["attr_pct"] = cand_lex.attr * 100.0;
    c["mattr"] = cand_lex.mattr;
    c["mattr_pct"] = cand_lex.mattr * 100.0;
    c["mtld"] = cand_lex.mtld;
    c["excluded_quatrains"] = cand_lex.excluded_quatrains;
    lexical["candidate"] = std::move(c);
    json r;
    r["attr"] = ref_lex.attr;
    r["attr_pct"] = ref_lex.attr * 100.0;
    r["mattr"] = ref_lex.mattr;
    r["mattr_pct"] = ref_lex.mattr * 100.0;
    r["mtld"] = ref_lex.mtld;
    r["excluded_quatrains"] = ref_lex_excluded;
    lexical["reference_mean"] = std::move(r);
    report["lexical"] = std::move(lexical);
  }
  {
    json semantic;
    semantic["within_candidate"] = within_candidate;
    semantic["within_reference_mean"] = within_reference;
    semantic["across"] = across;
    semantic["provider"] = cand_matrix.provider;
    report["semantic"] = std::move(semantic);
  }
  {
    json prov;
    prov["seed"] = opt.seed;
    prov["sample_size"] = opt.sample_size;
    prov["ref_samples"] = opt.ref_samples;
    json thresholds;
    thresholds["quatrain"] = opt.thresholds.quatrain;
    thresholds["couplet"] = opt.thresholds.couplet;
    thresholds["verse"] = opt.thresholds.verse;
    prov["thresholds"] = std::move(thresholds);
    prov["kl_epsilon"] = opt.kl_epsilon;
    json lex;
    lex["mattr_window"] = opt.lexical.mattr_window;
    lex["mtld_ttr_threshold"] = opt.lexical.mtld_ttr_threshold;
    lex["lowercase"] = opt.lexical.lowercase;
    prov["lexical"] = std::move(lex);
    prov["lexicon"] = opt.lexicon_path.empty() ? json(nullptr) : json(opt.lexicon_path);
    prov["vowels"] = encode_utf8(judge.vowels);
    json cand_info;
    cand_info["path"] = opt.candidate;
    cand_info["name"] = cand_full.name;
    cand_info["quatrains"] = cand_full.size();
    cand_info["rejected"] = cand_parsed.rejections.size();
    cand_info["sample_size_effective"] = cand_size;
    prov["candidate_corpus"] = std::move(cand_info);
    json ref_info;
    ref_info["path"] = opt.reference;
    ref_info["name"] = ref_full.name;
    ref_info["quatrains"] = ref_full.size();
    ref_info["rejected"] = ref_parsed.rejections.size();
    ref_info["sample_size_effective"] = ref_size;
    prov["reference_corpus"] = std::move(ref_info);
    prov["embedding_provider"] = cand_matrix.provider;
    prov["embedding_provider_reference"] = ref_matrix.provider;
    report["provenance"] = std::move(prov);
  }

  emit(opt.format == "csv" ? flat_csv(report) : canonical_json(report), opt.output, out);
  return 0;
}

struct RankOptions {
  std::vector<std::string> reports;
  std::string format = "csv";
  std::string output;
};

int run_rank(const RankOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<RankInput> inputs;
  inputs.reserve(opt.reports.size());
  for (const std::string& path : opt.reports) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open report file: " + path);
    json report = json::parse(in, nullptr, false);
    if (report.is_discarded()) throw ValidationError("report is not valid JSON: " + path);
    inputs.push_back(rank_input_from_report(report));
  }
  if (inputs.empty()) throw ValidationError("rank needs at least one report");

  RankTable table;
  if (inputs.size() == 1) {
    // A single model is trivially rank 1 in every dimension.
    RankRow row;
    row.model = inputs.front().model;
    row.dimension_ranks.fill(1.0);
    row.avg_rank = 1.0;
    table.rows.push_back(std::move(row));
    table.metric_ranks = json::object();
  } else {
    table = dimension_ranks(inputs);
  }
  err << "ranked " << table.rows.size() << " models\n";
  emit(opt.format == "json" ? canonical_json(rank_table_json(table)) : rank_table_csv(table),
       opt.output, out);
  return 0;
}

struct EmbedOptions {
  std::string input;
  std::string lang = "de";
  std::string output;
  std::size_t dim = 256;
};

int run_embed(const EmbedOptions& opt, std::ostream& out, std::ostream& err) {
  ParseResult parsed = parse_corpus_file(opt.input, opt.lang);
  if (parsed.corpus.size() == 0) throw ValidationError("corpus has no valid quatrains");
  err << "embedding " << parsed.corpus.size() << " quatrains at dim " << opt.dim << "\n";
  const EmbeddingMatrix m = builtin_embeddings(parsed.corpus, opt.dim);
  std::ostringstream buf;
  write_embeddings(buf, m);
  emit(buf.str(), opt.output, out);
  return 0;
}

json error_json(int code, const std::string& message) {
  json doc;
  doc["code"] = code;
  doc["error"] = message;
  return doc;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Corpus diversity audit for quatrain collections"};
  app.set_config("--config", "", "Flat key=value config file (flags win)");
  app.require_subcommand(1);

  PrepOptions prep;
  CLI::App* prep_cmd = app.add_subcommand(
      "prep", "Deduplicate a corpus, split train/dev, optionally build pseudo-sonnets");
  prep_cmd->add_option("--input", prep.input, "Input corpus (JSONL)")->required();
  prep_cmd->add_option("--output-dir", prep.output_dir, "Output directory")->required();
  prep_cmd->add_option("--lang", prep.lang, "Language tag (de|en)");
  prep_cmd->add_option("--seed", prep.seed, "Random seed");
  prep_cmd->add_flag("--sonnets", prep.sonnets, "Also emit pseudo-sonnet JSONL per split");
  prep_cmd->add_option("--sonnet-count", prep.sonnet_count,
                       "Pseudo-sonnets per split (default: floor(2n/7))");

  AnalyzeOptions analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Compare a candidate corpus against a reference corpus");
  analyze_cmd->add_option("--candidate", analyze.candidate, "Candidate corpus (JSONL)")->required();
  analyze_cmd->add_option("--reference", analyze.reference, "Reference corpus (JSONL)")->required();
  analyze_cmd->add_option("--lang", analyze.lang, "Language tag (de|en)");
  analyze_cmd->add_option("--model", analyze.model, "Model name for the report");
  analyze_cmd->add_option("--seed", analyze.seed, "Random seed");
  analyze_cmd->add_option("--sample-size", analyze.sample_size, "Sample size (default 1000)");
  analyze_cmd->add_option("--ref-samples", analyze.ref_samples,
                          "Number of reference samples (default 10)");
  analyze_cmd->add_option("--threshold-quatrain", analyze.thresholds.quatrain,
                          "Quatrain memorization threshold");
  analyze_cmd->add_option("--threshold-couplet", analyze.thresholds.couplet,
                          "Couplet memorization threshold");
  analyze_cmd->add_option("--threshold-verse", analyze.thresholds.verse,
                          "Verse memorization threshold");
  analyze_cmd->add_option("--kl-epsilon", analyze.kl_epsilon, "Additive KL smoothing");
  analyze_cmd->add_option("--mattr-window", analyze.lexical.mattr_window, "MATTR window");
  analyze_cmd->add_option("--mtld-threshold", analyze.lexical.mtld_ttr_threshold,
                          "MTLD TTR threshold");
  analyze_cmd->add_option("--lexicon", analyze.lexicon_path, "Pronouncing lexicon file");
  analyze_cmd->add_option("--vowels", analyze.vowels, "Vowel set for the orthographic judge");
  analyze_cmd
      ->add_option("--embeddings", analyze.embeddings,
                   "'builtin' or embedding file(s): one shared, or candidate then reference")
      ->expected(1, 2);
  analyze_cmd->add_option("--embed-dim", analyze.embed_dim, "Builtin embedding dimension");
  analyze_cmd->add_option("--threads", analyze.threads, "Worker threads");
  analyze_cmd->add_option("--format", analyze.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze_cmd->add_option("--output", analyze.output, "Report path (default stdout)");
  analyze_cmd->add_option("--length-histogram", analyze.length_histogram_csv,
                          "Also write the candidate length histogram CSV here");
  analyze_cmd->add_option("--rhyme-distribution", analyze.rhyme_distribution_csv,
                          "Also write the candidate rhyme distribution CSV here");

  RankOptions rank;
  CLI::App* rank_cmd = app.add_subcommand("rank", "Aggregate analyze reports into a rank table");
  rank_cmd->add_option("reports", rank.reports, "Report JSON files")->required();
  rank_cmd->add_option("--format", rank.format, "csv|json")
      ->check(CLI::IsMember({"json", "csv"}));
  rank_cmd->add_option("--output", rank.output, "Output path (default stdout)");

  EmbedOptions embed;
  CLI::App* embed_cmd =
      app.add_subcommand("embed", "Emit builtin embeddings for a corpus");
  embed_cmd->add_option("--input", embed.input, "Input corpus (JSONL)")->required();
  embed_cmd->add_option("--lang", embed.lang, "Language tag (de|en)");
  embed_cmd->add_option("--output", embed.output, "Output path (default stdout)")->required();
  embed_cmd->add_option("--dim", embed.dim, "Embedding dimension (default 256)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    out << error_json(2, e.what()).dump() << "\n";
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (prep_cmd->parsed()) return run_prep(prep, err);
    if (analyze_cmd->parsed()) return run_analyze(analyze, out, err);
    if (rank_cmd->parsed()) return run_rank(rank, out, err);
    if (embed_cmd->parsed()) return run_embed(embed, out, err);
    out << error_json(2, "no subcommand given").dump() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    out << error_json(2, e.what()).dump() << "\n";
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    out << error_json(3, e.what()).dump() << "\n";
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace poemdiv
