#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stgain/corpus.hpp"
#include "stgain/labels.hpp"
#include "stgain/learner.hpp"
#include "stgain/similarity.hpp"

namespace stgain {

// Marker used as the extra domain when the additional data is the
// concatenation of every domain other than train and test.
inline constexpr std::string_view kBulk = "BULK";

struct SetupTriple {
  std::string train;
  std::string test;
  std::string extra;  // a domain id or kBulk
  std::uint64_t seed = 0;

  bool bulk() const { return extra == kBulk; }
  // "train|test|extra"
  std::string id() const { return train + "|" + test + "|" + extra; }

  friend bool operator==(const SetupTriple&, const SetupTriple&) = default;
};

struct SelfTrainResult {
  SetupTriple setup;
  // Percentages in [0, 100].
  double base_f1 = 0.0;
  double st_f1 = 0.0;
  double base_acc = 0.0;
  double st_acc = 0.0;
  GainLabel gain = GainLabel::Loss;
  std::optional<double> p_value;
  // Agreement of the pseudo-labels with the extra corpus' gold labels, when
  // it has them. Never used for training.
  std::optional<double> pseudo_label_acc;
  // Similarity features per measure, filled by the sweep.
  std::map<Measure, SimilarityFeatures> similarities;
};

// Strict: an unchanged F1 is a loss.
inline GainLabel gain_label(double base_f1, double st_f1) {
  return st_f1 > base_f1 ? GainLabel::Gain : GainLabel::Loss;
}

struct LabelingScores {
  double macro_f1 = 0.0;  // percent
  double accuracy = 0.0;  // percent
};

LabelingScores labeling_scores(std::span<const Label> gold,
                               std::span<const Label> predicted);
std::vector<Label> gold_labels(const Corpus& corpus);

LabelingScores run_baseline(const Corpus& train, const Corpus& test,
                            const LinearHyperparams& hyperparams = {});

struct SelfTrainOptions {
  LinearHyperparams learner;
  // Randomization iterations for the p-value; 0 skips the test.
  int ar_iterations = 1000;
};

// Model trained on the original training data, with its test predictions.
struct BaseRun {
  LinearModel model;
  std::vector<Label> test_predictions;
  LabelingScores scores;
};

BaseRun run_base(const Corpus& train, const Corpus& test,
                 const LinearHyperparams& hyperparams);

// Two-step self-training given a precomputed base run. The learner seed is
// the setup's seed.
SelfTrainResult self_train(const SetupTriple& setup, const Corpus& train,
                           const Corpus& test, const Corpus& extra,
                           const BaseRun& base, const SelfTrainOptions& options);

SelfTrainResult self_train(const SetupTriple& setup, const Corpus& train,
                           const Corpus& test, const Corpus& extra,
                           const SelfTrainOptions& options = {});

// Resolves the setup's domains in `corpora`; a BULK extra corpus is the
// concatenation of every other domain in id order.
SelfTrainResult self_train(const SetupTriple& setup,
                           const std::map<std::string, Corpus>& corpora,
                           const SelfTrainOptions& options = {});

Corpus bulk_corpus(const std::map<std::string, Corpus>& corpora,
                   const std::string& train, const std::string& test);

enum class SweepMode { Domain, Bulk };

// DOMAIN: all ordered triples of distinct domains; BULK: all ordered
// (train, test) pairs with a BULK extra. Domains are sorted first so the
// order is lexicographic.
std::vector<SetupTriple> enumerate_setups(std::vector<std::string> domains,
                                          SweepMode mode, std::uint64_t seed = 0);

}  // namespace stgain
