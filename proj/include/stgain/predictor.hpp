#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stgain/labels.hpp"
#include "stgain/metrics.hpp"
#include "stgain/selftrain.hpp"
#include "stgain/similarity.hpp"

namespace stgain {

struct IndicatorConfig {
  // Additive threshold on the test/train : test/extra ratio; -1 gives the
  // plain indicator.
  double tau = -1.0;
};

// GAIN iff test_train / test_extra + tau > 0. Throws when test_extra is 0 or
// the shifted ratio is exactly 0.
GainLabel delta_indicator(const SimilarityFeatures& f,
                          const IndicatorConfig& cfg = {});

struct GainPrediction {
  SetupTriple setup;
  GainLabel predicted;
  GainLabel actual;
  std::string method;
};

ConfusionCounts confusion(std::span<const GainPrediction> predictions);

enum class Baseline { Pos, Neg, Once, Maj };

std::string_view to_string(Baseline b);

// ONCE and MAJ consult history entries with the same (train, test) pair,
// excluding the setup itself, and throw when there are none.
GainLabel baseline_predict(Baseline kind, const SetupTriple& setup,
                           std::span<const SelfTrainResult> history);

enum class FeatureSet { Three, TestTrainOnly };

// (test_train, extra_train, test_extra) or (test_train).
std::vector<double> feature_vector(const SelfTrainResult& r, Measure m,
                                   FeatureSet fs);

std::vector<GainPrediction> loo_predictions(std::span<const SelfTrainResult> results,
                                            Measure m, FeatureSet fs, int k = 1);
ConfusionCounts loo_cv(std::span<const SelfTrainResult> results, Measure m,
                       FeatureSet fs, int k = 1);

// Training partition of one tailored leave-one-out fold. Instances that
// contain the test instance's extra domain in any role are removed first;
// of the remainder, instances containing both its train and test domains
// are removed.
struct TailoredFold {
  std::vector<std::size_t> training;
  std::size_t excluded_extra = 0;  // includes the test instance itself
  std::size_t excluded_pair = 0;
};

TailoredFold tailored_fold(std::span<const SetupTriple> setups, std::size_t test_index);

std::vector<GainPrediction> tailored_loo_predictions(
    std::span<const SelfTrainResult> results, Measure m, FeatureSet fs, int k = 1);
ConfusionCounts tailored_loo_cv(std::span<const SelfTrainResult> results,
                                Measure m, FeatureSet fs, int k = 1);

enum class GridCell { Both, DomainOnly, BulkOnly, None };

std::string_view to_string(GridCell c);

struct BulkGrid {
  std::vector<std::string> domains;  // sorted
  // Keyed by (train, test), train != test.
  std::map<std::pair<std::string, std::string>, GridCell> cells;

  std::size_t count(GridCell c) const;
};

BulkGrid bulk_grid(std::span<const SelfTrainResult> domain_results,
                   std::span<const SelfTrainResult> bulk_results);

}  // namespace stgain
