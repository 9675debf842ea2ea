#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stgain/labels.hpp"

namespace stgain {

// Binary confusion matrix indexed [gold][predicted] by class_index(); class 0
// is the positive class (POSITIVE or GAIN).
struct ConfusionCounts {
  std::array<std::array<std::size_t, 2>, 2> cells{};

  void add(int gold, int predicted) { ++cells[gold][predicted]; }
  void add(Label gold, Label predicted) {
    add(class_index(gold), class_index(predicted));
  }
  void add(GainLabel gold, GainLabel predicted) {
    add(class_index(gold), class_index(predicted));
  }
  std::size_t total() const {
    return cells[0][0] + cells[0][1] + cells[1][0] + cells[1][1];
  }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    for (int g = 0; g < 2; ++g)
      for (int p = 0; p < 2; ++p) cells[g][p] += o.cells[g][p];
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// All values are fractions in [0, 1].
struct Scores {
  double accuracy = 0.0;
  std::array<double, 2> precision{};
  std::array<double, 2> recall{};
  std::array<double, 2> f1{};
  double macro_f1 = 0.0;
};

Scores scores(const ConfusionCounts& c);

template <typename L>
ConfusionCounts confusion(std::span<const L> gold, std::span<const L> predicted);

enum class ArStatistic { F1Diff, AccDiff };

// Approximate randomization test of the difference between two systems'
// predictions on the same gold labels. Each iteration swaps a[i] and b[i]
// independently with probability 1/2; the p-value is
// (#{|randomized| >= |observed|} + 1) / (iterations + 1). When iterations
// reaches 2^n for n <= 20 items, every swap pattern is enumerated instead
// (see exact_randomization).
template <typename L>
double approx_randomization(std::span<const L> pred_a, std::span<const L> pred_b,
                            std::span<const L> gold, ArStatistic statistic,
                            int iterations, std::uint64_t seed);

// Exact variant enumerating all 2^n swap patterns; n must be <= 20.
// p = #{patterns with |stat| >= |observed|} / 2^n.
template <typename L>
double exact_randomization(std::span<const L> pred_a, std::span<const L> pred_b,
                           std::span<const L> gold, ArStatistic statistic);

// (#{|s| >= |observed|} + 1) / (n + 1) over a precomputed null sample.
double randomization_p_value(double observed, std::span<const double> null_stats);

}  // namespace stgain
