#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "stgain/commands.hpp"
#include "stgain/corpus.hpp"
#include "stgain/error.hpp"
#include "stgain/learner.hpp"
#include "stgain/metrics.hpp"
#include "stgain/predictor.hpp"
#include "stgain/report.hpp"
#include "stgain/results_io.hpp"
#include "stgain/selftrain.hpp"
#include "stgain/similarity.hpp"

namespace py = pybind11;
using namespace stgain;

namespace {

Corpus make_corpus(const std::string& domain_id,
                   const std::vector<std::pair<std::map<std::string, int>,
                                               std::optional<Label>>>& docs) {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (const auto& [tokens, label] : docs) out.push_back({tokens, label});
  return Corpus(domain_id, std::move(out));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Corpus similarity measures, self-training experiments and gain prediction";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::enum_<Label>(m, "Label")
      .value("POSITIVE", Label::Positive)
      .value("NEGATIVE", Label::Negative);
  py::enum_<GainLabel>(m, "GainLabel")
      .value("GAIN", GainLabel::Gain)
      .value("LOSS", GainLabel::Loss);
  py::enum_<Measure>(m, "Measure")
      .value("COSINE", Measure::Cosine)
      .value("EUCLIDEAN", Measure::Euclidean)
      .value("KL", Measure::Kl)
      .value("JS", Measure::Js)
      .value("SUWR", Measure::Suwr);
  py::enum_<CorpusFormat>(m, "CorpusFormat")
      .value("CANONICAL", CorpusFormat::Canonical)
      .value("BLITZER", CorpusFormat::Blitzer);
  py::enum_<Weighting>(m, "Weighting")
      .value("RAW_COUNT", Weighting::RawCount)
      .value("PMI", Weighting::Pmi)
      .value("REL_FREQ", Weighting::RelFreq);
  py::enum_<SweepMode>(m, "SweepMode")
      .value("DOMAIN", SweepMode::Domain)
      .value("BULK", SweepMode::Bulk);
  py::enum_<FeatureSet>(m, "FeatureSet")
      .value("THREE", FeatureSet::Three)
      .value("TEST_TRAIN_ONLY", FeatureSet::TestTrainOnly);
  py::enum_<Baseline>(m, "Baseline")
      .value("POS", Baseline::Pos)
      .value("NEG", Baseline::Neg)
      .value("ONCE", Baseline::Once)
      .value("MAJ", Baseline::Maj);
  py::enum_<ArStatistic>(m, "ArStatistic")
      .value("F1_DIFF", ArStatistic::F1Diff)
      .value("ACC_DIFF", ArStatistic::AccDiff);

  py::class_<Document>(m, "Document")
      .def(py::init<>())
      .def_readwrite("tokens", &Document::tokens)
      .def_readwrite("label", &Document::label);

  py::class_<Corpus>(m, "Corpus")
      .def(py::init(&make_corpus), py::arg("domain_id"), py::arg("documents"),
           "Build from a list of (token->count dict, label or None) pairs.")
      .def_property_readonly("domain_id", &Corpus::domain_id)
      .def_property_readonly("documents", &Corpus::documents)
      .def_property_readonly("vocabulary", &Corpus::vocabulary)
      .def("__len__", &Corpus::size);

  py::class_<CorpusVector>(m, "CorpusVector")
      .def_readonly("weighting", &CorpusVector::weighting)
      .def_readonly("entries", &CorpusVector::entries)
      .def_readonly("total_count", &CorpusVector::total_count);

  m.def("load_corpus", &load_corpus, py::arg("path"),
        py::arg("format") = CorpusFormat::Canonical, py::arg("domain_id") = py::none());
  m.def("save_corpus", &save_corpus, py::arg("corpus"), py::arg("path"));
  m.def("sample_corpus", &sample_corpus, py::arg("corpus"), py::arg("size"),
        py::arg("seed"), py::arg("stratify") = true);
  m.def("centroid", &centroid);
  m.def("pmi_transform", &pmi_transform, py::arg("v"), py::arg("partner"));
  m.def("rel_freq", &rel_freq);
  m.def("generate_synthetic_domains",
        py::overload_cast<int, int, int, double, std::uint64_t>(&generate_synthetic_domains),
        py::arg("n_domains"), py::arg("vocab_size"), py::arg("docs_per_domain"),
        py::arg("divergence"), py::arg("seed"));

  py::class_<SimilarityFeatures>(m, "SimilarityFeatures")
      .def(py::init<>())
      .def(py::init([](double tt, double et, double te) {
             return SimilarityFeatures{Measure::Cosine, tt, et, te};
           }),
           py::arg("test_train"), py::arg("extra_train"), py::arg("test_extra"))
      .def_readwrite("measure", &SimilarityFeatures::measure)
      .def_readwrite("test_train", &SimilarityFeatures::test_train)
      .def_readwrite("extra_train", &SimilarityFeatures::extra_train)
      .def_readwrite("test_extra", &SimilarityFeatures::test_extra);

  m.def(
      "similarity",
      [](Measure measure, const Corpus& p, const Corpus& q) {
        return similarity(measure, p, q).value;
      },
      py::arg("measure"), py::arg("p"), py::arg("q"),
      "Similarity of P (test role) to Q (train role); higher is less similar.");
  m.def(
      "similarity_features",
      [](const Corpus& test, const Corpus& train, const Corpus& extra, Measure measure) {
        return similarity_features(test, train, extra, measure);
      },
      py::arg("test"), py::arg("train"), py::arg("extra"), py::arg("measure"));
  m.def(
      "kl_divergence_dist",
      [](const std::vector<double>& p, const std::vector<double>& q) {
        return kl_divergence(std::span<const double>(p), std::span<const double>(q));
      },
      py::arg("p"), py::arg("q"));
  m.def(
      "js_divergence_dist",
      [](const std::vector<double>& p, const std::vector<double>& q) {
        return js_divergence(std::span<const double>(p), std::span<const double>(q));
      },
      py::arg("p"), py::arg("q"));

  py::class_<LinearHyperparams>(m, "LinearHyperparams")
      .def(py::init<>())
      .def_readwrite("regularization", &LinearHyperparams::regularization)
      .def_readwrite("epochs", &LinearHyperparams::epochs)
      .def_readwrite("seed", &LinearHyperparams::seed);
  py::class_<LinearModel>(m, "LinearModel")
      .def_readonly("weights", &LinearModel::weights)
      .def_readonly("bias", &LinearModel::bias);
  m.def(
      "train_linear",
      [](const Corpus& corpus, const LinearHyperparams& hp) {
        return train_linear(to_features(corpus), hp);
      },
      py::arg("corpus"), py::arg("hyperparams") = LinearHyperparams{});
  m.def(
      "predict_linear",
      [](const LinearModel& model, const std::map<std::string, int>& tokens) {
        return predict_linear(model, to_features(Document{tokens, std::nullopt}));
      },
      py::arg("model"), py::arg("tokens"));
  m.def(
      "knn_predict",
      [](const std::vector<std::pair<std::vector<double>, GainLabel>>& instances,
         const std::vector<double>& query, int k) {
        std::vector<KnnInstance> inst;
        for (const auto& [f, l] : instances) inst.push_back({f, l});
        return knn_predict(KnnModel(std::move(inst), k), query);
      },
      py::arg("instances"), py::arg("query"), py::arg("k") = 1);

  py::class_<ConfusionCounts>(m, "ConfusionCounts")
      .def(py::init<>())
      .def("add", py::overload_cast<GainLabel, GainLabel>(&ConfusionCounts::add),
           py::arg("gold"), py::arg("predicted"))
      .def("total", &ConfusionCounts::total)
      .def_readonly("cells", &ConfusionCounts::cells);
  py::class_<Scores>(m, "Scores")
      .def_readonly("accuracy", &Scores::accuracy)
      .def_readonly("precision", &Scores::precision)
      .def_readonly("recall", &Scores::recall)
      .def_readonly("f1", &Scores::f1)
      .def_readonly("macro_f1", &Scores::macro_f1);
  m.def("scores", &scores);
  m.def(
      "approx_randomization",
      [](const std::vector<Label>& a, const std::vector<Label>& b,
         const std::vector<Label>& gold, ArStatistic stat, int iterations,
         std::uint64_t seed) {
        return approx_randomization<Label>(a, b, gold, stat, iterations, seed);
      },
      py::arg("pred_a"), py::arg("pred_b"), py::arg("gold"),
      py::arg("statistic") = ArStatistic::F1Diff, py::arg("iterations") = 1000,
      py::arg("seed") = 0);
  m.def(
      "exact_randomization",
      [](const std::vector<Label>& a, const std::vector<Label>& b,
         const std::vector<Label>& gold, ArStatistic stat) {
        return exact_randomization<Label>(a, b, gold, stat);
      },
      py::arg("pred_a"), py::arg("pred_b"), py::arg("gold"),
      py::arg("statistic") = ArStatistic::F1Diff);

  py::class_<SetupTriple>(m, "SetupTriple")
      .def(py::init<std::string, std::string, std::string, std::uint64_t>(),
           py::arg("train"), py::arg("test"), py::arg("extra"), py::arg("seed") = 0)
      .def_readwrite("train", &SetupTriple::train)
      .def_readwrite("test", &SetupTriple::test)
      .def_readwrite("extra", &SetupTriple::extra)
      .def_readwrite("seed", &SetupTriple::seed)
      .def_property_readonly("id", &SetupTriple::id)
      .def("__repr__", [](const SetupTriple& s) { return "<SetupTriple " + s.id() + ">"; });

  py::class_<SelfTrainResult>(m, "SelfTrainResult")
      .def_readonly("setup", &SelfTrainResult::setup)
      .def_readonly("base_f1", &SelfTrainResult::base_f1)
      .def_readonly("st_f1", &SelfTrainResult::st_f1)
      .def_readonly("base_acc", &SelfTrainResult::base_acc)
      .def_readonly("st_acc", &SelfTrainResult::st_acc)
      .def_readonly("gain", &SelfTrainResult::gain)
      .def_readonly("p_value", &SelfTrainResult::p_value)
      .def_readonly("pseudo_label_acc", &SelfTrainResult::pseudo_label_acc)
      .def_readonly("similarities", &SelfTrainResult::similarities)
      .def("to_json", &to_jsonl_line);

  py::class_<SelfTrainOptions>(m, "SelfTrainOptions")
      .def(py::init<>())
      .def_readwrite("learner", &SelfTrainOptions::learner)
      .def_readwrite("ar_iterations", &SelfTrainOptions::ar_iterations);

  m.def("enumerate_setups", &enumerate_setups, py::arg("domains"), py::arg("mode"),
        py::arg("seed") = 0);
  m.def(
      "run_baseline",
      [](const Corpus& train, const Corpus& test, const LinearHyperparams& hp) {
        const LabelingScores s = run_baseline(train, test, hp);
        return py::make_tuple(s.macro_f1, s.accuracy);
      },
      py::arg("train"), py::arg("test"), py::arg("hyperparams") = LinearHyperparams{});
  m.def(
      "self_train",
      [](const SetupTriple& setup, const std::map<std::string, Corpus>& corpora,
         const SelfTrainOptions& opt) { return self_train(setup, corpora, opt); },
      py::arg("setup"), py::arg("corpora"), py::arg("options") = SelfTrainOptions{});

  m.def(
      "delta_indicator",
      [](const SimilarityFeatures& f, double tau) {
        return delta_indicator(f, IndicatorConfig{tau});
      },
      py::arg("features"), py::arg("tau") = -1.0);
  m.def("read_results",
        [](const std::filesystem::path& p) { return read_results(p).results; });
  m.def("loo_cv", &loo_cv, py::arg("results"), py::arg("measure"),
        py::arg("feature_set") = FeatureSet::Three, py::arg("k") = 1);
  m.def("tailored_loo_cv", &tailored_loo_cv, py::arg("results"), py::arg("measure"),
        py::arg("feature_set") = FeatureSet::Three, py::arg("k") = 1);
  m.def(
      "tailored_fold_sizes",
      [](const std::vector<SetupTriple>& setups, std::size_t index) {
        const TailoredFold f = tailored_fold(setups, index);
        return py::make_tuple(f.training.size(), f.excluded_extra, f.excluded_pair);
      },
      py::arg("setups"), py::arg("index"),
      "(training size, excluded by extra domain, excluded by train/test pair)");
}
