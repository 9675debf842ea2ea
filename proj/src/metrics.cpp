#include "stgain/metrics.hpp"

#include <cmath>

#include "stgain/error.hpp"
#include "stgain/random.hpp"

namespace stgain {

// Randomized statistics within this distance of the observed one count as
// ties, so mathematically equal values are not split by rounding.
constexpr double kTieTolerance = 1e-12;

Scores scores(const ConfusionCounts& c) {
  const std::size_t total = c.total();
  if (total == 0) throw Error("scores of empty confusion counts");
  Scores s;
  s.accuracy = static_cast<double>(c.cells[0][0] + c.cells[1][1]) / total;
  for (int k = 0; k < 2; ++k) {
    const std::size_t tp = c.cells[k][k];
    const std::size_t predicted = c.cells[0][k] + c.cells[1][k];
    const std::size_t gold = c.cells[k][0] + c.cells[k][1];
    s.precision[k] = predicted == 0 ? 0.0 : static_cast<double>(tp) / predicted;
    s.recall[k] = gold == 0 ? 0.0 : static_cast<double>(tp) / gold;
    const double pr = s.precision[k] + s.recall[k];
    s.f1[k] = pr == 0.0 ? 0.0 : 2.0 * s.precision[k] * s.recall[k] / pr;
  }
  s.macro_f1 = 0.5 * (s.f1[0] + s.f1[1]);
  return s;
}

template <typename L>
ConfusionCounts confusion(std::span<const L> gold, std::span<const L> predicted) {
  if (gold.size() != predicted.size()) {
    throw Error("confusion over sequences of unequal length");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) c.add(gold[i], predicted[i]);
  return c;
}

template ConfusionCounts confusion<Label>(std::span<const Label>,
                                          std::span<const Label>);
template ConfusionCounts confusion<GainLabel>(std::span<const GainLabel>,
                                              std::span<const GainLabel>);

double randomization_p_value(double observed, std::span<const double> null_stats) {
  std::size_t extreme = 0;
  const double obs = std::fabs(observed);
  for (double s : null_stats) {
    if (std::fabs(s) >= obs - kTieTolerance) ++extreme;
  }
  return static_cast<double>(extreme + 1) / static_cast<double>(null_stats.size() + 1);
}

namespace {

struct Paired {
  std::vector<int> a, b, gold;
};

template <typename L>
Paired to_indices(std::span<const L> a, std::span<const L> b, std::span<const L> gold) {
  if (a.size() != b.size() || a.size() != gold.size()) {
    throw Error("randomization test over sequences of unequal length");
  }
  Paired p;
  p.a.reserve(a.size());
  p.b.reserve(a.size());
  p.gold.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    p.a.push_back(class_index(a[i]));
    p.b.push_back(class_index(b[i]));
    p.gold.push_back(class_index(gold[i]));
  }
  return p;
}

double score_of(const ConfusionCounts& c, ArStatistic stat) {
  const Scores s = scores(c);
  return stat == ArStatistic::F1Diff ? s.macro_f1 : s.accuracy;
}

// Statistic with positions where `swapped(i)` is true exchanged.
template <typename SwapFn>
double statistic(const Paired& p, ArStatistic stat, SwapFn&& swapped) {
  ConfusionCounts ca, cb;
  for (std::size_t i = 0; i < p.gold.size(); ++i) {
    const bool s = swapped(i);
    ca.add(p.gold[i], s ? p.b[i] : p.a[i]);
    cb.add(p.gold[i], s ? p.a[i] : p.b[i]);
  }
  return score_of(ca, stat) - score_of(cb, stat);
}

}  // namespace

template <typename L>
double approx_randomization(std::span<const L> pred_a, std::span<const L> pred_b,
                            std::span<const L> gold, ArStatistic stat,
                            int iterations, std::uint64_t seed) {
  if (iterations < 1) throw Error("randomization needs at least one iteration");
  const Paired p = to_indices(pred_a, pred_b, gold);
  if (p.gold.empty()) throw Error("randomization test over empty sequences");
  if (p.gold.size() <= 20 &&
      static_cast<std::uint64_t>(iterations) >= (std::uint64_t{1} << p.gold.size())) {
    return exact_randomization(pred_a, pred_b, gold, stat);
  }
  const double observed = statistic(p, stat, [](std::size_t) { return false; });

  Rng rng(seed);
  std::vector<double> null_stats;
  null_stats.reserve(iterations);
  std::vector<bool> swaps(p.gold.size());
  for (int it = 0; it < iterations; ++it) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < swaps.size(); ++i) {
      if (i % 64 == 0) bits = rng();
      swaps[i] = (bits >> (i % 64)) & 1U;
    }
    null_stats.push_back(statistic(p, stat, [&](std::size_t i) { return swaps[i]; }));
  }
  return randomization_p_value(observed, null_stats);
}

template <typename L>
double exact_randomization(std::span<const L> pred_a, std::span<const L> pred_b,
                           std::span<const L> gold, ArStatistic stat) {
  const Paired p = to_indices(pred_a, pred_b, gold);
  const std::size_t n = p.gold.size();
  if (n == 0) throw Error("randomization test over empty sequences");
  if (n > 20) throw Error("exact randomization supports at most 20 items");
  const double observed = std::fabs(statistic(p, stat, [](std::size_t) { return false; }));
  const std::uint32_t patterns = 1U << n;
  std::uint32_t extreme = 0;
  for (std::uint32_t mask = 0; mask < patterns; ++mask) {
    const double s = statistic(p, stat, [mask](std::size_t i) { return (mask >> i) & 1U; });
    if (std::fabs(s) >= observed - kTieTolerance) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(patterns);
}

template double approx_randomization<Label>(std::span<const Label>, std::span<const Label>,
                                            std::span<const Label>, ArStatistic, int,
                                            std::uint64_t);
template double approx_randomization<GainLabel>(std::span<const GainLabel>,
                                                std::span<const GainLabel>,
                                                std::span<const GainLabel>, ArStatistic,
                                                int, std::uint64_t);
template double exact_randomization<Label>(std::span<const Label>, std::span<const Label>,
                                           std::span<const Label>, ArStatistic);
template double exact_randomization<GainLabel>(std::span<const GainLabel>,
                                               std::span<const GainLabel>,
                                               std::span<const GainLabel>, ArStatistic);

}  // namespace stgain
