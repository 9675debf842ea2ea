#include "stgain/selftrain.hpp"

#include <algorithm>
#include <set>

#include "stgain/error.hpp"
#include "stgain/metrics.hpp"

namespace stgain {

LabelingScores labeling_scores(std::span<const Label> gold,
                               std::span<const Label> predicted) {
  const Scores s = scores(confusion(gold, predicted));
  return {100.0 * s.macro_f1, 100.0 * s.accuracy};
}

std::vector<Label> gold_labels(const Corpus& corpus) {
  std::vector<Label> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) {
    if (!doc.label) {
      throw Error("corpus " + corpus.domain_id() + " has unlabeled documents");
    }
    out.push_back(*doc.label);
  }
  return out;
}

BaseRun run_base(const Corpus& train, const Corpus& test,
                 const LinearHyperparams& hyperparams) {
  if (!train.fully_labeled()) {
    throw Error("training corpus " + train.domain_id() + " is not labeled");
  }
  const std::vector<Label> gold = gold_labels(test);
  BaseRun run;
  run.model = train_linear(to_features(train), hyperparams);
  run.test_predictions = predict_linear(run.model, to_features(test));
  run.scores = labeling_scores(gold, run.test_predictions);
  return run;
}

LabelingScores run_baseline(const Corpus& train, const Corpus& test,
                            const LinearHyperparams& hyperparams) {
  return run_base(train, test, hyperparams).scores;
}

SelfTrainResult self_train(const SetupTriple& setup, const Corpus& train,
                           const Corpus& test, const Corpus& extra,
                           const BaseRun& base, const SelfTrainOptions& options) {
  const std::vector<Label> gold = gold_labels(test);

  // Step 1: pseudo-label the additional data with the base model.
  std::vector<FeatureVector> data = to_features(train);
  std::vector<FeatureVector> extra_fv = to_features(extra);
  std::size_t agree = 0;
  const bool extra_has_gold = extra.fully_labeled();
  for (std::size_t i = 0; i < extra_fv.size(); ++i) {
    const Label pseudo = predict_linear(base.model, extra_fv[i]);
    if (extra_has_gold && extra.documents()[i].label == pseudo) ++agree;
    extra_fv[i].label = pseudo;
  }
  data.insert(data.end(), std::make_move_iterator(extra_fv.begin()),
              std::make_move_iterator(extra_fv.end()));

  // Step 2: retrain on the union and label the test data.
  LinearHyperparams hp = options.learner;
  hp.seed = setup.seed;
  const LinearModel st_model = train_linear(data, hp);
  const std::vector<Label> st_pred = predict_linear(st_model, to_features(test));
  const LabelingScores st = labeling_scores(gold, st_pred);

  SelfTrainResult r;
  r.setup = setup;
  r.base_f1 = base.scores.macro_f1;
  r.base_acc = base.scores.accuracy;
  r.st_f1 = st.macro_f1;
  r.st_acc = st.accuracy;
  r.gain = gain_label(r.base_f1, r.st_f1);
  if (options.ar_iterations > 0) {
    r.p_value = approx_randomization<Label>(st_pred, base.test_predictions, gold,
                                            ArStatistic::F1Diff,
                                            options.ar_iterations, setup.seed);
  }
  if (extra_has_gold && !extra.empty()) {
    r.pseudo_label_acc = 100.0 * static_cast<double>(agree) / extra.size();
  }
  return r;
}

SelfTrainResult self_train(const SetupTriple& setup, const Corpus& train,
                           const Corpus& test, const Corpus& extra,
                           const SelfTrainOptions& options) {
  LinearHyperparams hp = options.learner;
  hp.seed = setup.seed;
  return self_train(setup, train, test, extra, run_base(train, test, hp), options);
}

Corpus bulk_corpus(const std::map<std::string, Corpus>& corpora,
                   const std::string& train, const std::string& test) {
  std::vector<const Corpus*> parts;
  for (const auto& [id, c] : corpora) {
    if (id != train && id != test) parts.push_back(&c);
  }
  if (parts.empty()) throw Error("BULK setup has no additional domains");
  return concatenate(std::string(kBulk), parts);
}

SelfTrainResult self_train(const SetupTriple& setup,
                           const std::map<std::string, Corpus>& corpora,
                           const SelfTrainOptions& options) {
  auto find = [&](const std::string& id) -> const Corpus& {
    auto it = corpora.find(id);
    if (it == corpora.end()) throw Error("missing corpus for domain " + id);
    return it->second;
  };
  if (setup.train == setup.test) throw Error("train and test domains coincide");
  if (setup.bulk()) {
    return self_train(setup, find(setup.train), find(setup.test),
                      bulk_corpus(corpora, setup.train, setup.test), options);
  }
  if (setup.extra == setup.train || setup.extra == setup.test) {
    throw Error("extra domain " + setup.extra + " repeats train or test");
  }
  return self_train(setup, find(setup.train), find(setup.test),
                    find(setup.extra), options);
}

std::vector<SetupTriple> enumerate_setups(std::vector<std::string> domains,
                                          SweepMode mode, std::uint64_t seed) {
  std::sort(domains.begin(), domains.end());
  if (std::adjacent_find(domains.begin(), domains.end()) != domains.end()) {
    throw Error("duplicate domain ids");
  }
  if (domains.size() < 3) throw Error("at least 3 domains are required");
  std::vector<SetupTriple> out;
  for (const auto& train : domains) {
    for (const auto& test : domains) {
      if (test == train) continue;
      if (mode == SweepMode::Bulk) {
        out.push_back({train, test, std::string(kBulk), seed});
        continue;
      }
      for (const auto& extra : domains) {
        if (extra == train || extra == test) continue;
        out.push_back({train, test, extra, seed});
      }
    }
  }
  return out;
}

}  // namespace stgain
