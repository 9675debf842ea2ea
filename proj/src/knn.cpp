#include <algorithm>

#include "stgain/error.hpp"
#include "stgain/learner.hpp"

namespace stgain {

KnnModel::KnnModel(std::vector<KnnInstance> instances, int k)
    : instances_(std::move(instances)), k_(k), dim_(0) {
  if (instances_.empty()) throw Error("kNN model needs at least one instance");
  if (k_ < 1) throw Error("kNN k must be positive");
  dim_ = instances_.front().features.size();
  for (const auto& inst : instances_) {
    if (inst.features.size() != dim_) {
      throw Error("kNN instances of mixed dimensionality");
    }
  }
}

GainLabel knn_predict(const KnnModel& model, std::span<const double> query) {
  if (query.size() != model.dimension()) {
    throw Error("kNN query has dimension " + std::to_string(query.size()) +
                ", model has " + std::to_string(model.dimension()));
  }
  const auto& inst = model.instances();
  std::vector<double> dist(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    double s = 0.0;
    for (std::size_t d = 0; d < query.size(); ++d) {
      const double diff = inst[i].features[d] - query[d];
      s += diff * diff;
    }
    dist[i] = s;
  }
  const std::size_t k = std::min<std::size_t>(model.k(), inst.size());
  std::vector<double> sorted = dist;
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  const double radius = sorted[k - 1];

  std::size_t gain = 0, loss = 0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (dist[i] > radius) continue;
    (inst[i].label == GainLabel::Gain ? gain : loss) += 1;
  }
  return gain > loss ? GainLabel::Gain : GainLabel::Loss;
}

}  // namespace stgain
