#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "poemdiv/corpus.hpp"
#include "poemdiv/errors.hpp"
#include "poemdiv/length.hpp"
#include "poemdiv/lexical.hpp"
#include "poemdiv/memorization.hpp"
#include "poemdiv/report.hpp"
#include "poemdiv/rhyme.hpp"
#include "poemdiv/semantic.hpp"
#include "poemdiv/text.hpp"

namespace py = pybind11;
using namespace poemdiv;

namespace {

Level level_from_name(const std::string& name) {
  if (name == "quatrain") return Level::quatrain;
  if (name == "couplet") return Level::couplet;
  if (name == "verse") return Level::verse;
  throw ValidationError("unknown level: " + name + " (expected quatrain|couplet|verse)");
}

EmbeddingMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  EmbeddingMatrix m;
  if (rows.empty()) return m;
  m.dim = rows.front().size();
  m.provider = "python";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.dim) throw ValidationError("rows must share one dimension");
    m.ids.push_back(std::to_string(i));
    m.data.insert(m.data.end(), rows[i].begin(), rows[i].end());
    m.valid.push_back(1);
  }
  return m;
}

Corpus corpus_from_records(
    const std::string& name, const std::string& lang,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& records) {
  Corpus corpus;
  corpus.name = name;
  corpus.lang = lang;
  for (const auto& [id, lines] : records) {
    if (lines.size() != 4) throw ValidationError("quatrain " + id + " must have 4 lines");
    Quatrain q;
    q.id = id;
    q.lang = lang;
    for (std::size_t i = 0; i < 4; ++i) q.verses[i] = Verse::from_raw(lines[i]);
    corpus.quatrains.push_back(std::move(q));
  }
  return corpus;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distributional diversity metrics for quatrain corpora";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<Corpus>(m, "Corpus")
      .def_readonly("name", &Corpus::name)
      .def_readonly("lang", &Corpus::lang)
      .def("__len__", &Corpus::size)
      .def_property_readonly("ids",
                             [](const Corpus& c) {
                               std::vector<std::string> ids;
                               for (const auto& q : c.quatrains) ids.push_back(q.id);
                               return ids;
                             })
      .def("lengths", [](const Corpus& c) { return sample_lengths(c); })
      .def("tokens", [](const Corpus& c) { return token_stream(c); });

  py::class_<PronouncingLexicon>(m, "PronouncingLexicon")
      .def_static("load", &PronouncingLexicon::load_file, py::arg("path"))
      .def("__len__", &PronouncingLexicon::size);

  m.def("corpus_from_records", &corpus_from_records, py::arg("name"), py::arg("lang"),
        py::arg("records"), "Builds a corpus from (id, [4 lines]) pairs.");
  m.def(
      "parse_corpus",
      [](const std::string& path, const std::string& lang) {
        ParseResult r = parse_corpus_file(path, lang);
        return py::make_tuple(std::move(r.corpus), r.rejections.size());
      },
      py::arg("path"), py::arg("lang"), "Returns (corpus, rejection_count).");
  m.def("dedup_overlaps", &dedup_overlaps, py::arg("corpus"));
  m.def(
      "split_train_dev",
      [](const Corpus& c, std::uint64_t seed) { return split_train_dev(c, seed); },
      py::arg("corpus"), py::arg("seed"));
  m.def(
      "draw_samples",
      [](const Corpus& c, std::size_t k, std::size_t size, std::uint64_t seed) {
        std::vector<std::vector<std::size_t>> out;
        for (const Sample& s : draw_samples(c, k, size, seed)) out.push_back(s.indices);
        return out;
      },
      py::arg("corpus"), py::arg("k"), py::arg("size"), py::arg("seed"));

  m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));

  m.def(
      "ratcliff_obershelp",
      [](const std::string& a, const std::string& b) {
        return ratcliff_obershelp(std::string_view(a), std::string_view(b));
      },
      py::arg("a"), py::arg("b"));
  m.def("similarity_upper_bound", &similarity_upper_bound, py::arg("len_a"), py::arg("len_b"));
  m.def(
      "memorization_scan",
      [](const Corpus& sample, const Corpus& train, const std::string& level, double quatrain,
         double couplet, double verse, int threads) {
        SimilarityThresholds th{quatrain, couplet, verse};
        const MemorizationResult r =
            memorization_scan(sample, train, level_from_name(level), th, threads);
        py::list matches;
        for (const MatchRecord& rec : r.matches) {
          py::dict d;
          d["unit_id"] = rec.unit_id;
          d["train_id"] = rec.train_id;
          d["score"] = rec.score;
          matches.append(std::move(d));
        }
        py::dict out;
        out["level"] = std::string(level_name(r.level));
        out["rate"] = r.rate;
        out["unit_count"] = r.unit_count;
        out["matches"] = std::move(matches);
        return out;
      },
      py::arg("sample"), py::arg("train"), py::arg("level") = "quatrain",
      py::arg("threshold_quatrain") = 0.7, py::arg("threshold_couplet") = 0.8,
      py::arg("threshold_verse") = 0.9, py::arg("threads") = 1);

  m.def(
      "length_stats",
      [](const std::vector<int>& lengths) {
        const LengthStats s = length_stats(lengths);
        py::dict d;
        d["mean"] = s.mean;
        d["median"] = s.median;
        d["std"] = s.stddev;
        d["min"] = s.min;
        d["max"] = s.max;
        d["n"] = s.n;
        return d;
      },
      py::arg("lengths"));
  m.def(
      "histogram_intersection",
      [](const std::vector<int>& a, const std::vector<int>& b) {
        return histogram_intersection(LengthHistogram::from_lengths(a),
                                      LengthHistogram::from_lengths(b));
      },
      py::arg("lengths_a"), py::arg("lengths_b"));

  m.def(
      "judge_pair",
      [](const std::string& w1, const std::string& w2, const PronouncingLexicon* lexicon,
         const std::string& lang) {
        const RhymeJudge judge = RhymeJudge::for_lang(lang, lexicon);
        return std::string(verdict_name(judge_pair(w1, w2, judge)));
      },
      py::arg("w1"), py::arg("w2"), py::arg("lexicon") = nullptr, py::arg("lang") = "de");
  m.def(
      "scheme_label",
      [](const std::vector<std::string>& endings, const PronouncingLexicon* lexicon,
         const std::string& lang) {
        if (endings.size() != 4) throw ValidationError("scheme needs 4 ending words");
        const RhymeJudge judge = RhymeJudge::for_lang(lang, lexicon);
        std::array<std::optional<std::string>, 4> arr;
        for (std::size_t i = 0; i < 4; ++i)
          if (!endings[i].empty()) arr[i] = endings[i];
        const SchemeResult r = scheme_of_endings(arr, [&](std::string_view a, std::string_view b) {
          return judge_pair(a, b, judge);
        });
        return r.label;
      },
      py::arg("endings"), py::arg("lexicon") = nullptr, py::arg("lang") = "de");
  m.def("canonical_schemes", [] {
    const auto& schemes = canonical_schemes();
    return std::vector<std::string>(schemes.begin(), schemes.end());
  });
  m.def(
      "entropy", [](const std::vector<double>& masses) { return entropy(std::span(masses)); },
      py::arg("masses"));
  m.def(
      "kl_divergence",
      [](const std::vector<double>& p, const std::vector<double>& q, double epsilon) {
        return kl_divergence(std::span(p), std::span(q), epsilon);
      },
      py::arg("reference"), py::arg("candidate"), py::arg("epsilon") = 1e-6);

  m.def(
      "ttr", [](const std::vector<std::string>& tokens) { return ttr(tokens); },
      py::arg("tokens"));
  m.def(
      "mattr",
      [](const std::vector<std::string>& tokens, std::size_t window) {
        return mattr(tokens, window);
      },
      py::arg("tokens"), py::arg("window") = 500);
  m.def(
      "mtld",
      [](const std::vector<std::string>& tokens, double threshold) {
        return mtld(tokens, threshold);
      },
      py::arg("tokens"), py::arg("threshold") = 0.72);

  m.def(
      "builtin_embeddings",
      [](const Corpus& c, std::size_t dim) {
        const EmbeddingMatrix m2 = builtin_embeddings(c, dim);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < m2.rows(); ++i) {
          const auto r = m2.row(i);
          rows.emplace_back(r.begin(), r.end());
        }
        return rows;
      },
      py::arg("corpus"), py::arg("dim") = 256);
  m.def(
      "avg_max_within",
      [](const std::vector<std::vector<double>>& rows, int threads) {
        return avg_max_within(matrix_from_rows(rows), threads);
      },
      py::arg("rows"), py::arg("threads") = 1);
  m.def(
      "avg_max_across",
      [](const std::vector<std::vector<double>>& cand, const std::vector<std::vector<double>>& ref,
         int threads) {
        return avg_max_across(matrix_from_rows(cand), matrix_from_rows(ref), threads);
      },
      py::arg("candidate"), py::arg("reference"), py::arg("threads") = 1);

  m.def(
      "rank_metric",
      [](const std::vector<double>& values, bool higher_better) {
        std::vector<std::optional<double>> in(values.begin(), values.end());
        const auto ranks = rank_metric(
            in, higher_better ? RankDirection::higher_better : RankDirection::lower_better);
        std::vector<double> out;
        for (const auto& r : ranks) out.push_back(*r);
        return out;
      },
      py::arg("values"), py::arg("higher_better") = false);
  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
      py::arg("x"), py::arg("y"));
  m.def("bws_score", &bws_score, py::arg("best"), py::arg("worst"), py::arg("n"));

#ifdef POEMDIV_VERSION
  m.attr("__version__") = POEMDIV_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
