// Copyright 2026 The formlink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings: formlink._core.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <chrono>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "formlink/baseline.h"
#include "formlink/errors.h"
#include "formlink/external_scorer.h"
#include "formlink/fixtures.h"
#include "formlink/funsd.h"
#include "formlink/geometry.h"
#include "formlink/linking.h"
#include "formlink/metrics.h"
#include "formlink/pairs.h"
#include "formlink/scoring.h"

namespace py = pybind11;

namespace formlink {
namespace {

// Lets Python subclasses of Scorer plug into the decoder.
class PyScorer : public Scorer {
 public:
  std::vector<double> Score(std::span<const PairExample> examples) override {
    py::gil_scoped_acquire gil;
    py::function fn = py::get_override(static_cast<const Scorer*>(this), "score");
    if (!fn) throw ConfigError("Scorer subclass must implement score()");
    std::vector<PairExample> batch(examples.begin(), examples.end());
    return fn(batch).cast<std::vector<double>>();
  }
  std::string Describe() const override {
    py::gil_scoped_acquire gil;
    py::function fn = py::get_override(static_cast<const Scorer*>(this), "describe");
    return fn ? fn().cast<std::string>() : "python";
  }
  bool concurrent() const override { return false; }
};

CandidateParams MakeParams(std::optional<std::size_t> k, double radius,
                           const std::string& distance) {
  CandidateParams params;
  params.k = k;
  params.radius = radius;
  auto mode = ParseDistanceMode(distance);
  if (!mode) throw ConfigError("distance must be 'center' or 'edge'");
  params.mode = *mode;
  params.Validate();
  return params;
}

NegativePolicy MakePolicy(const std::string& spec) {
  auto policy = NegativePolicy::Parse(spec);
  if (!policy) throw ConfigError("negatives must be 'all' or 'balanced:R'");
  return *policy;
}

std::vector<ScoredCandidate> ToScored(
    const std::vector<std::tuple<EntityId, double, double>>& rows) {
  std::vector<ScoredCandidate> out;
  for (const auto& [qid, score, distance] : rows) out.push_back({qid, score, distance});
  return out;
}

void RegisterErrors(py::module_& m) {
  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  // One Python class per library error, all derived from formlink.Error.
  static std::map<std::string, PyObject*> by_kind;
  for (const char* kind :
       {"MalformedJson", "SchemaViolation", "InvariantViolation", "UnknownId",
        "NotAnAnswer", "DegenerateDataset", "ExternalScorerFailure", "MissingScore",
        "FormMismatch", "NoGold", "ConfigError", "IoError"}) {
    py::object cls = py::reinterpret_steal<py::object>(PyErr_NewException(
        (std::string("formlink._core.") + kind).c_str(), base.ptr(), nullptr));
    m.attr(kind) = cls;
    by_kind[kind] = cls.release().ptr();
  }
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      auto it = by_kind.find(e.kind());
      PyErr_SetString(it == by_kind.end() ? base.ptr() : it->second, e.what());
    }
  });
}

}  // namespace
}  // namespace formlink

PYBIND11_MODULE(_core, m) {
  using namespace formlink;
  m.doc() = "Question/answer entity linking on form annotations.";
  m.attr("__version__") = FORMLINK_VERSION;
  RegisterErrors(m);

  // Annotations.
  py::class_<BBox>(m, "BBox")
      .def(py::init<double, double, double, double>(), py::arg("x_min"),
           py::arg("y_min"), py::arg("x_max"), py::arg("y_max"))
      .def_readonly("x_min", &BBox::x_min)
      .def_readonly("y_min", &BBox::y_min)
      .def_readonly("x_max", &BBox::x_max)
      .def_readonly("y_max", &BBox::y_max)
      .def_property_readonly("center", [](const BBox& b) {
        return std::make_pair(b.center_x(), b.center_y());
      })
      .def("__repr__", [](const BBox& b) {
        std::ostringstream s;
        s << "BBox(" << b.x_min << ", " << b.y_min << ", " << b.x_max << ", "
          << b.y_max << ")";
        return s.str();
      });

  py::class_<Entity>(m, "Entity")
      .def_readonly("id", &Entity::id)
      .def_property_readonly("label",
                             [](const Entity& e) { return std::string(LabelName(e.label)); })
      .def_readonly("box", &Entity::box)
      .def_property_readonly("text", &Entity::Text)
      .def_property_readonly("links", [](const Entity& e) {
        std::vector<std::pair<EntityId, EntityId>> out;
        for (const Link& l : e.links) out.emplace_back(l.from, l.to);
        return out;
      });

  py::class_<Form>(m, "Form")
      .def_property_readonly("name", &Form::name)
      .def_property_readonly("entities", &Form::entities)
      .def("find", &Form::Find, py::return_value_policy::reference_internal)
      .def("to_json", &SerializeForm)
      .def("__eq__", [](const Form& a, const Form& b) { return a == b; })
      .def("__repr__", [](const Form& f) {
        return "<Form " + f.name() + " with " + std::to_string(f.entities().size()) +
               " entities>";
      });

  m.def("parse_form", &ParseForm, py::arg("raw"), py::arg("name"));
  m.def("load_form", &LoadForm, py::arg("path"));
  m.def(
      "load_corpus",
      [](const std::filesystem::path& dir) {
        CorpusLoad load = LoadCorpus(dir);
        std::vector<std::tuple<std::string, std::string, std::string>> errors;
        for (const auto& e : load.errors) errors.emplace_back(e.path, e.kind, e.message);
        return std::make_pair(std::move(load.forms), errors);
      },
      py::arg("dir"), "Returns (forms, [(path, kind, message)]).");
  m.def("fixture_splits", [] {
    SyntheticSplits s = FixtureSplits();
    return std::make_pair(std::move(s.train), std::move(s.test));
  });
  m.def("synthetic_forms", &SyntheticForms, py::arg("count"), py::arg("seed"),
        py::arg("prefix") = "synthetic");
  m.def("write_corpus", &WriteCorpus, py::arg("dir"), py::arg("forms"));

  py::class_<GoldLinkSet>(m, "GoldLinkSet")
      .def_readonly("form_name", &GoldLinkSet::form_name)
      .def_property_readonly("links",
                             [](const GoldLinkSet& g) {
                               std::vector<std::pair<EntityId, EntityId>> out;
                               for (const QaLink& l : g.links) {
                                 out.emplace_back(l.question_id, l.answer_id);
                               }
                               return out;
                             })
      .def_readonly("question_ids", &GoldLinkSet::question_ids)
      .def_readonly("answer_ids", &GoldLinkSet::answer_ids)
      .def_readonly("discarded", &GoldLinkSet::discarded);
  m.def("gold_links", &GoldLinks, py::arg("form"));

  // Candidates.
  m.def(
      "box_distance",
      [](const BBox& a, const BBox& b, const std::string& distance) {
        auto mode = ParseDistanceMode(distance);
        if (!mode) throw ConfigError("distance must be 'center' or 'edge'");
        return BoxDistance(a, b, *mode);
      },
      py::arg("a"), py::arg("b"), py::arg("distance") = "center");
  m.def(
      "candidates",
      [](const Form& form, EntityId answer_id, std::optional<std::size_t> k,
         double radius, const std::string& distance) {
        std::vector<std::pair<EntityId, double>> out;
        for (const Candidate& c :
             CandidatesFor(form, answer_id, MakeParams(k, radius, distance)).candidates) {
          out.emplace_back(c.question_id, c.distance);
        }
        return out;
      },
      py::arg("form"), py::arg("answer_id"), py::arg("k") = 10,
      py::arg("radius") = std::numeric_limits<double>::infinity(),
      py::arg("distance") = "center",
      "Nearest questions as [(question_id, distance)]; k=None is unbounded.");
  m.def(
      "candidate_recall",
      [](const std::vector<Form>& forms, std::optional<std::size_t> k, double radius,
         const std::string& distance) {
        return MeasureCandidateRecall(forms, MakeParams(k, radius, distance)).recall();
      },
      py::arg("forms"), py::arg("k") = 10,
      py::arg("radius") = std::numeric_limits<double>::infinity(),
      py::arg("distance") = "center");

  // Pairs.
  py::class_<PairExample>(m, "PairExample")
      .def_readonly("form_name", &PairExample::form_name)
      .def_readonly("question_id", &PairExample::question_id)
      .def_readonly("answer_id", &PairExample::answer_id)
      .def_readonly("question_text", &PairExample::question_text)
      .def_readonly("answer_text", &PairExample::answer_text)
      .def_readonly("distance", &PairExample::distance)
      .def_readonly("same_row", &PairExample::same_row)
      .def_property_readonly(
          "label", [](const PairExample& p) { return std::string(PairLabelName(p.label)); })
      .def("to_json", [](const PairExample& p) { return PairToJson(p).dump(); })
      .def_static("from_json", [](const std::string& line) {
        return PairFromJson(nlohmann::json::parse(line));
      });
  m.def(
      "build_pairs",
      [](const Form& form, std::optional<std::size_t> k, double radius,
         const std::string& distance, const std::string& negatives) {
        PairBuildStats stats;
        auto pairs =
            BuildPairs(form, MakeParams(k, radius, distance), MakePolicy(negatives), &stats);
        py::dict s;
        s["positives"] = stats.positives;
        s["negatives"] = stats.negatives;
        s["gold_missed_by_candidates"] = stats.gold_missed_by_candidates;
        return std::make_pair(std::move(pairs), s);
      },
      py::arg("form"), py::arg("k") = 10,
      py::arg("radius") = std::numeric_limits<double>::infinity(),
      py::arg("distance") = "center", py::arg("negatives") = "all",
      "Labeled training pairs and a stats dict.");
  m.def("normalize_text", &NormalizeText, py::arg("text"));
  m.def(
      "write_pairs",
      [](const std::filesystem::path& path, const std::vector<PairExample>& pairs) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        WritePairs(out, pairs);
      },
      py::arg("path"), py::arg("pairs"));
  m.def(
      "read_pairs",
      [](const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot read " + path.string());
        return ReadPairs(in);
      },
      py::arg("path"));

  // Scorers.
  py::class_<Scorer, PyScorer, std::shared_ptr<Scorer>>(m, "Scorer")
      .def(py::init<>())
      .def(
          "score",
          [](Scorer& s, const std::vector<PairExample>& pairs) { return s.Score(pairs); },
          py::arg("pairs"))
      .def("describe", &Scorer::Describe);
  py::class_<OracleScorer, Scorer, std::shared_ptr<OracleScorer>>(m, "OracleScorer")
      .def(py::init([](const std::vector<GoldLinkSet>& gold) {
             return std::make_shared<OracleScorer>(gold);
           }),
           py::arg("gold"));
  py::class_<ConstantScorer, Scorer, std::shared_ptr<ConstantScorer>>(m, "ConstantScorer")
      .def(py::init<double>(), py::arg("value"));
  py::class_<ExternalScorer, Scorer, std::shared_ptr<ExternalScorer>>(m, "ExternalScorer")
      .def(py::init([](const std::string& endpoint, std::size_t batch_size,
                       long timeout_ms) {
             ExternalScorerOptions options;
             options.batch_size = batch_size;
             options.timeout = std::chrono::milliseconds(timeout_ms);
             return std::shared_ptr<ExternalScorer>(ExternalScorer::Open(endpoint, options));
           }),
           py::arg("endpoint"), py::arg("batch_size") = 64, py::arg("timeout_ms") = 60000)
      .def("close", &ExternalScorer::Close);

  py::class_<BaselineModel>(m, "BaselineModel")
      .def_static("load", &BaselineModel::Load, py::arg("path"))
      .def_static("from_json",
                  [](const std::string& blob) {
                    return BaselineModel::FromJson(nlohmann::json::parse(blob));
                  })
      .def("save", &BaselineModel::Save, py::arg("path"))
      .def("to_json", [](const BaselineModel& b) { return b.ToJson().dump(); })
      .def("predict", &BaselineModel::Predict, py::arg("pair"))
      .def("accuracy", &PairAccuracy, py::arg("pairs"), py::arg("threshold") = 0.5)
      .def("log_loss",
           [](const BaselineModel& b, const std::vector<PairExample>& pairs) {
             return LogLoss(b, pairs);
           })
      .def("__eq__", [](const BaselineModel& a, const BaselineModel& b) { return a == b; });
  m.def(
      "train_baseline",
      [](const std::vector<PairExample>& pairs, int epochs, double learning_rate,
         std::uint64_t seed, int hash_bits, bool balance_classes, bool geometric) {
        FeatureConfig config;
        config.hash_bits = hash_bits;
        config.geometric = geometric;
        TrainOptions options;
        options.epochs = epochs;
        options.learning_rate = learning_rate;
        options.seed = seed;
        options.balance_classes = balance_classes;
        py::gil_scoped_release release;
        return TrainBaseline(pairs, config, options);
      },
      py::arg("pairs"), py::arg("epochs") = 10, py::arg("learning_rate") = 0.5,
      py::arg("seed") = 0, py::arg("hash_bits") = 18, py::arg("balance_classes") = true,
      py::arg("geometric") = true);
  py::class_<BaselineScorer, Scorer, std::shared_ptr<BaselineScorer>>(m, "BaselineScorer")
      .def(py::init<BaselineModel>(), py::arg("model"));

  // Linking.
  py::class_<LinkPrediction>(m, "LinkPrediction")
      .def_readonly("form_name", &LinkPrediction::form_name)
      .def_property_readonly("links",
                             [](const LinkPrediction& p) {
                               std::vector<std::tuple<EntityId, EntityId, double, double>> out;
                               for (const PredictedLink& l : p.links) {
                                 out.emplace_back(l.question_id, l.answer_id, l.score,
                                                  l.distance);
                               }
                               return out;
                             })
      .def_property_readonly("answers",
                             [](const LinkPrediction& p) {
                               py::dict out;
                               for (const AnswerCandidates& a : p.answers) {
                                 py::list rows;
                                 for (const ScoredCandidate& c : a.candidates) {
                                   rows.append(py::make_tuple(c.question_id, c.score,
                                                              c.distance));
                                 }
                                 out[py::int_(a.answer_id)] = rows;
                               }
                               return out;
                             })
      .def("to_json", [](const LinkPrediction& p) { return PredictionToJson(p).dump(); })
      .def_static("from_json", [](const std::string& line) {
        return PredictionFromJson(nlohmann::json::parse(line));
      });
  m.def(
      "link",
      [](const std::vector<Form>& forms, std::shared_ptr<Scorer> scorer,
         std::optional<std::size_t> k, double radius, const std::string& distance,
         double threshold, std::size_t max_links, std::size_t jobs) {
        CorpusDecodeOptions options;
        options.candidates = MakeParams(k, radius, distance);
        options.decode.threshold = threshold;
        options.decode.max_links = max_links;
        options.decode.Validate();
        options.jobs = jobs;
        py::gil_scoped_release release;
        return DecodeCorpus(forms, *scorer, options).predictions;
      },
      py::arg("forms"), py::arg("scorer"), py::arg("k") = 10,
      py::arg("radius") = std::numeric_limits<double>::infinity(),
      py::arg("distance") = "center", py::arg("threshold") = 0.5,
      py::arg("max_links") = 1, py::arg("jobs") = 1);
  m.def(
      "write_predictions",
      [](const std::filesystem::path& path, const std::vector<LinkPrediction>& preds) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        WritePredictions(out, preds);
      },
      py::arg("path"), py::arg("predictions"));
  m.def(
      "read_predictions",
      [](const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot read " + path.string());
        return ReadPredictions(in).predictions;
      },
      py::arg("path"));

  // Metrics.
  py::class_<MetricsReport>(m, "MetricsReport")
      .def_property_readonly("tp", [](const MetricsReport& r) { return r.counts.tp; })
      .def_property_readonly("fp", [](const MetricsReport& r) { return r.counts.fp; })
      .def_property_readonly("fn", [](const MetricsReport& r) { return r.counts.fn; })
      .def_property_readonly("tn", [](const MetricsReport& r) { return r.counts.tn; })
      .def_property_readonly("precision",
                             [](const MetricsReport& r) { return r.prf1.precision; })
      .def_property_readonly("recall", [](const MetricsReport& r) { return r.prf1.recall; })
      .def_property_readonly("f1", [](const MetricsReport& r) { return r.prf1.f1; })
      .def_readonly("map", &MetricsReport::map)
      .def_readonly("mrank", &MetricsReport::mrank)
      .def("to_json",
           [](const MetricsReport& r) { return ReportToJson(r, nlohmann::ordered_json::object()).dump(); })
      .def("__str__", &FormatReport);
  m.def(
      "evaluate",
      [](const std::vector<LinkPrediction>& predictions, const std::vector<Form>& forms) {
        std::vector<GoldLinkSet> gold;
        for (const Form& f : forms) gold.push_back(GoldLinks(f));
        return Evaluate(predictions, gold);
      },
      py::arg("predictions"), py::arg("forms"));
  m.def(
      "prf1",
      [](std::size_t tp, std::size_t fp, std::size_t fn) {
        Prf1 p = ComputePrf1({tp, fp, fn, 0});
        return std::make_tuple(p.precision, p.recall, p.f1);
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"));
  m.def(
      "average_precision",
      [](const std::vector<std::tuple<EntityId, double, double>>& candidates,
         std::vector<EntityId> gold) {
        return AveragePrecision(AnswerRanking::Build(0, ToScored(candidates), std::move(gold)));
      },
      py::arg("candidates"), py::arg("gold"),
      "candidates is [(question_id, score, distance)].");
  m.def(
      "rank_value",
      [](const std::vector<std::tuple<EntityId, double, double>>& candidates,
         std::vector<EntityId> gold) {
        return RankValue(AnswerRanking::Build(0, ToScored(candidates), std::move(gold)));
      },
      py::arg("candidates"), py::arg("gold"));
}
