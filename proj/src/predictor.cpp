#include "stgain/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stgain/error.hpp"
#include "stgain/learner.hpp"

namespace stgain {

GainLabel delta_indicator(const SimilarityFeatures& f, const IndicatorConfig& cfg) {
  if (f.test_extra == 0.0) {
    throw Error("delta indicator undefined: test/extra similarity is 0");
  }
  const double shifted = f.test_train / f.test_extra + cfg.tau;
  if (shifted == 0.0) {
    throw Error("delta indicator undefined: shifted ratio is exactly 0");
  }
  // |x| / x is +1 for positive x, -1 for negative x.
  return std::fabs(shifted) / shifted > 0.0 ? GainLabel::Gain : GainLabel::Loss;
}

ConfusionCounts confusion(std::span<const GainPrediction> predictions) {
  ConfusionCounts c;
  for (const auto& p : predictions) c.add(p.actual, p.predicted);
  return c;
}

std::string_view to_string(Baseline b) {
  switch (b) {
    case Baseline::Pos: return "POS";
    case Baseline::Neg: return "NEG";
    case Baseline::Once: return "ONCE";
    case Baseline::Maj: return "MAJ";
  }
  return "?";
}

GainLabel baseline_predict(Baseline kind, const SetupTriple& setup,
                           std::span<const SelfTrainResult> history) {
  if (kind == Baseline::Pos) return GainLabel::Gain;
  if (kind == Baseline::Neg) return GainLabel::Loss;
  std::size_t matching = 0, gains = 0;
  for (const auto& h : history) {
    if (h.setup.train != setup.train || h.setup.test != setup.test) continue;
    if (h.setup == setup) continue;
    ++matching;
    if (h.gain == GainLabel::Gain) ++gains;
  }
  if (matching == 0) {
    throw Error("no history for pair " + setup.train + "/" + setup.test);
  }
  if (kind == Baseline::Once) return gains >= 1 ? GainLabel::Gain : GainLabel::Loss;
  return 2 * gains > matching ? GainLabel::Gain : GainLabel::Loss;
}

std::vector<double> feature_vector(const SelfTrainResult& r, Measure m, FeatureSet fs) {
  auto it = r.similarities.find(m);
  if (it == r.similarities.end()) {
    throw Error("result " + r.setup.id() + " lacks " + std::string(to_string(m)) +
                " similarities");
  }
  const SimilarityFeatures& f = it->second;
  if (fs == FeatureSet::TestTrainOnly) return {f.test_train};
  return {f.test_train, f.extra_train, f.test_extra};
}

namespace {

std::string method_name(std::string_view protocol, Measure m, FeatureSet fs, int k) {
  std::string s(protocol);
  s += ":";
  s += to_string(m);
  if (fs == FeatureSet::TestTrainOnly) s += ":tt";
  s += ":k" + std::to_string(k);
  return s;
}

GainPrediction predict_from(std::span<const SelfTrainResult> results,
                            std::span<const std::size_t> training, std::size_t test,
                            Measure m, FeatureSet fs, int k, const std::string& method) {
  if (training.empty()) {
    throw Error("empty training partition for " + results[test].setup.id());
  }
  std::vector<KnnInstance> inst;
  inst.reserve(training.size());
  for (std::size_t j : training) {
    inst.push_back({feature_vector(results[j], m, fs), results[j].gain});
  }
  const KnnModel model(std::move(inst), k);
  const std::vector<double> q = feature_vector(results[test], m, fs);
  return {results[test].setup, knn_predict(model, q), results[test].gain, method};
}

}  // namespace

std::vector<GainPrediction> loo_predictions(std::span<const SelfTrainResult> results,
                                            Measure m, FeatureSet fs, int k) {
  if (results.size() < 2) throw Error("leave-one-out needs at least 2 results");
  const std::string method = method_name("loo", m, fs, k);
  std::vector<GainPrediction> out;
  out.reserve(results.size());
  std::vector<std::size_t> training;
  for (std::size_t i = 0; i < results.size(); ++i) {
    training.clear();
    for (std::size_t j = 0; j < results.size(); ++j) {
      if (j != i) training.push_back(j);
    }
    out.push_back(predict_from(results, training, i, m, fs, k, method));
  }
  return out;
}

ConfusionCounts loo_cv(std::span<const SelfTrainResult> results, Measure m,
                       FeatureSet fs, int k) {
  return confusion(loo_predictions(results, m, fs, k));
}

namespace {

bool involves(const SetupTriple& s, const std::string& domain) {
  return s.train == domain || s.test == domain || s.extra == domain;
}

// Setups must be every ordered triple over their domain set exactly once.
void require_full_coverage(std::span<const SetupTriple> setups) {
  std::set<std::string> domains;
  std::set<std::string> ids;
  for (const auto& s : setups) {
    if (s.bulk()) throw Error("tailored leave-one-out excludes BULK setups");
    domains.insert(s.train);
    domains.insert(s.test);
    domains.insert(s.extra);
    if (!ids.insert(s.id()).second) throw Error("duplicate setup " + s.id());
  }
  const std::size_t d = domains.size();
  if (d < 3 || setups.size() != d * (d - 1) * (d - 2)) {
    throw Error("tailored leave-one-out needs all ordered triples over the domains");
  }
}

}  // namespace

TailoredFold tailored_fold(std::span<const SetupTriple> setups, std::size_t test_index) {
  const SetupTriple& t = setups[test_index];
  TailoredFold fold;
  for (std::size_t j = 0; j < setups.size(); ++j) {
    const SetupTriple& s = setups[j];
    if (involves(s, t.extra)) {
      ++fold.excluded_extra;
      continue;
    }
    if (involves(s, t.train) && involves(s, t.test)) {
      ++fold.excluded_pair;
      continue;
    }
    fold.training.push_back(j);
  }
  return fold;
}

std::vector<GainPrediction> tailored_loo_predictions(
    std::span<const SelfTrainResult> results, Measure m, FeatureSet fs, int k) {
  std::vector<SetupTriple> setups;
  setups.reserve(results.size());
  for (const auto& r : results) setups.push_back(r.setup);
  require_full_coverage(setups);
  const std::string method = method_name("tailored", m, fs, k);
  std::vector<GainPrediction> out;
  out.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TailoredFold fold = tailored_fold(setups, i);
    out.push_back(predict_from(results, fold.training, i, m, fs, k, method));
  }
  return out;
}

ConfusionCounts tailored_loo_cv(std::span<const SelfTrainResult> results,
                                Measure m, FeatureSet fs, int k) {
  return confusion(tailored_loo_predictions(results, m, fs, k));
}

std::string_view to_string(GridCell c) {
  switch (c) {
    case GridCell::Both: return "BOTH";
    case GridCell::DomainOnly: return "DOMAIN_ONLY";
    case GridCell::BulkOnly: return "BULK_ONLY";
    case GridCell::None: return "NONE";
  }
  return "?";
}

std::size_t BulkGrid::count(GridCell c) const {
  return static_cast<std::size_t>(std::count_if(
      cells.begin(), cells.end(), [c](const auto& kv) { return kv.second == c; }));
}

BulkGrid bulk_grid(std::span<const SelfTrainResult> domain_results,
                   std::span<const SelfTrainResult> bulk_results) {
  std::set<std::string> domains;
  using Pair = std::pair<std::string, std::string>;
  std::map<Pair, std::size_t> triples_per_pair;
  std::map<Pair, bool> domain_gain;
  std::map<Pair, GainLabel> bulk_gain;
  for (const auto& r : domain_results) {
    if (r.setup.bulk()) throw Error("BULK result among DOMAIN results");
    domains.insert(r.setup.train);
    domains.insert(r.setup.test);
    domains.insert(r.setup.extra);
    const Pair p{r.setup.train, r.setup.test};
    ++triples_per_pair[p];
    domain_gain[p] = domain_gain[p] || r.gain == GainLabel::Gain;
  }
  for (const auto& r : bulk_results) {
    if (!r.setup.bulk()) throw Error("DOMAIN result among BULK results");
    if (!bulk_gain.emplace(Pair{r.setup.train, r.setup.test}, r.gain).second) {
      throw Error("duplicate BULK result " + r.setup.id());
    }
  }
  const std::size_t d = domains.size();
  if (d < 3 || triples_per_pair.size() != d * (d - 1)) {
    throw Error("grid needs DOMAIN results for every (train, test) pair");
  }
  BulkGrid grid;
  grid.domains.assign(domains.begin(), domains.end());
  for (const auto& [pair, n] : triples_per_pair) {
    if (n != d - 2) throw Error("incomplete DOMAIN triples for " + pair.first + "/" + pair.second);
    auto b = bulk_gain.find(pair);
    if (b == bulk_gain.end()) {
      throw Error("missing BULK result for " + pair.first + "/" + pair.second);
    }
    const bool dom = domain_gain[pair];
    const bool bulk = b->second == GainLabel::Gain;
    grid.cells[pair] = dom && bulk ? GridCell::Both
                       : dom       ? GridCell::DomainOnly
                       : bulk      ? GridCell::BulkOnly
                                   : GridCell::None;
  }
  if (bulk_gain.size() != grid.cells.size()) {
    throw Error("BULK results name pairs outside the DOMAIN results");
  }
  return grid;
}

}  // namespace stgain
