#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stgain/corpus.hpp"
#include "stgain/labels.hpp"

namespace stgain {

struct FeatureVector {
  std::map<std::string, double> features;
  std::optional<Label> label;
};

// Binary occurrence features (1.0 per present token) unless binary is false,
// in which case raw counts are used.
FeatureVector to_features(const Document& doc, bool binary = true);
std::vector<FeatureVector> to_features(const Corpus& corpus, bool binary = true);

struct LinearHyperparams {
  double regularization = 1e-4;
  int epochs = 10;
  std::uint64_t seed = 0;

  friend bool operator==(const LinearHyperparams&,
                         const LinearHyperparams&) = default;
};

struct LinearModel {
  std::map<std::string, double> weights;
  double bias = 0.0;
  LinearHyperparams hyperparams;
};

// L2-regularized hinge loss minimized by stochastic subgradient descent
// (Pegasos step size 1/(lambda t)), reshuffling the data each epoch from a
// stream seeded by hyperparams.seed. The bias is a regularized constant
// feature. Requires at least one instance of each class.
LinearModel train_linear(std::span<const FeatureVector> data,
                         const LinearHyperparams& hyperparams = {});

double decision_value(const LinearModel& model, const FeatureVector& x);
// Zero decision value maps to POSITIVE.
Label predict_linear(const LinearModel& model, const FeatureVector& x);
std::vector<Label> predict_linear(const LinearModel& model,
                                  std::span<const FeatureVector> xs);

// Text format: one header line
//   #linear bias=<b> regularization=<r> epochs=<e> seed=<s>
// followed by `token<TAB>weight` lines in token order.
void write_model(std::ostream& out, const LinearModel& model);
LinearModel read_model(std::istream& in);
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

struct KnnInstance {
  std::vector<double> features;
  GainLabel label;
};

// Euclidean kNN over small dense feature vectors.
class KnnModel {
 public:
  explicit KnnModel(std::vector<KnnInstance> instances, int k = 1);

  const std::vector<KnnInstance>& instances() const { return instances_; }
  int k() const { return k_; }
  std::size_t dimension() const { return dim_; }

 private:
  std::vector<KnnInstance> instances_;
  int k_;
  std::size_t dim_;
};

// Majority label among the k nearest stored instances. Every instance tied
// with the k-th nearest distance votes; a tied vote yields LOSS.
GainLabel knn_predict(const KnnModel& model, std::span<const double> query);

}  // namespace stgain
