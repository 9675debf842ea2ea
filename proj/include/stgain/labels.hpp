#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace stgain {

// Sentiment label of a review instance.
enum class Label { Positive, Negative };

// Outcome of one self-training experiment.
enum class GainLabel { Gain, Loss };

inline std::string_view to_string(Label l) {
  return l == Label::Positive ? "positive" : "negative";
}

inline std::string_view to_string(GainLabel g) {
  return g == GainLabel::Gain ? "GAIN" : "LOSS";
}

std::optional<Label> parse_label(std::string_view s);
std::optional<GainLabel> parse_gain_label(std::string_view s);

// Index of a label in a binary confusion matrix: 0 is the "positive"
// class (POSITIVE, GAIN), 1 the other.
inline int class_index(Label l) { return l == Label::Positive ? 0 : 1; }
inline int class_index(GainLabel g) { return g == GainLabel::Gain ? 0 : 1; }

}  // namespace stgain
