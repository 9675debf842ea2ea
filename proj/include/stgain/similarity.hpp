#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stgain/corpus.hpp"

namespace stgain {

// Corpus-pair similarity measures. All follow the convention that a higher
// value means the corpora are less similar.
enum class Measure { Cosine, Euclidean, Kl, Js, Suwr };

inline constexpr std::array<Measure, 5> kAllMeasures = {
    Measure::Cosine, Measure::Euclidean, Measure::Kl, Measure::Js,
    Measure::Suwr};

constexpr bool is_symmetric(Measure m) {
  return m == Measure::Cosine || m == Measure::Euclidean || m == Measure::Js;
}

std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view s);

// Which distribution KL and JS are computed on.
enum class DivergenceInput {
  RelFreq,      // relative frequencies of the raw centroids
  PositivePmi,  // pairwise pmi clipped at 0 and renormalized
};

struct SimilarityOptions {
  DivergenceInput divergence_input = DivergenceInput::RelFreq;
};

// Smoothing value substituted for a zero q_k in KL.
inline constexpr double kKlFloor = 0x1.0p-52;

struct SimilarityValue {
  Measure measure;
  std::string from_corpus;  // P, the test-role corpus
  std::string to_corpus;    // Q, the train-role corpus
  double value;
};

// Vector-level measures over raw-count centroids of P and Q.
double cosine_distance(const CorpusVector& p, const CorpusVector& q);
double euclidean_distance(const CorpusVector& p, const CorpusVector& q);
double kl_divergence(const CorpusVector& p, const CorpusVector& q,
                     const SimilarityOptions& opt = {});
double js_divergence(const CorpusVector& p, const CorpusVector& q,
                     const SimilarityOptions& opt = {});
double suwr(const CorpusVector& p, const CorpusVector& q);

double similarity(Measure m, const CorpusVector& p, const CorpusVector& q,
                  const SimilarityOptions& opt = {});

// KL and JS on explicit probability vectors given position by position.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double js_divergence(std::span<const double> p, std::span<const double> q);

SimilarityValue cosine_distance(const Corpus& p, const Corpus& q);
SimilarityValue euclidean_distance(const Corpus& p, const Corpus& q);
SimilarityValue kl_divergence(const Corpus& p, const Corpus& q,
                              const SimilarityOptions& opt = {});
SimilarityValue js_divergence(const Corpus& p, const Corpus& q,
                              const SimilarityOptions& opt = {});
SimilarityValue suwr(const Corpus& p, const Corpus& q);
SimilarityValue similarity(Measure m, const Corpus& p, const Corpus& q,
                           const SimilarityOptions& opt = {});

// The three pairwise similarities of a self-training setup under one
// measure. For asymmetric measures the first-named corpus of each pair
// plays the P role.
struct SimilarityFeatures {
  Measure measure = Measure::Cosine;
  double test_train = 0.0;
  double extra_train = 0.0;
  double test_extra = 0.0;
};

SimilarityFeatures similarity_features(const Corpus& test, const Corpus& train,
                                       const Corpus& extra, Measure m,
                                       const SimilarityOptions& opt = {});
SimilarityFeatures similarity_features(const CorpusVector& test,
                                       const CorpusVector& train,
                                       const CorpusVector& extra, Measure m,
                                       const SimilarityOptions& opt = {});

// Full matrix; cell [i][j] = similarity(corpora[i], corpora[j]).
std::vector<std::vector<double>> similarity_matrix(
    std::span<const Corpus> corpora, Measure m,
    const SimilarityOptions& opt = {});

}  // namespace stgain
