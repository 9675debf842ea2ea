#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "stgain/error.hpp"
#include "stgain/learner.hpp"
#include "stgain/random.hpp"

namespace stgain {

FeatureVector to_features(const Document& doc, bool binary) {
  FeatureVector fv;
  for (const auto& [token, count] : doc.tokens) {
    fv.features.emplace_hint(fv.features.end(), token,
                             binary ? 1.0 : static_cast<double>(count));
  }
  fv.label = doc.label;
  return fv;
}

std::vector<FeatureVector> to_features(const Corpus& corpus, bool binary) {
  std::vector<FeatureVector> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) out.push_back(to_features(doc, binary));
  return out;
}

namespace {

struct SparseRow {
  std::vector<std::pair<std::size_t, double>> terms;
  double y;
  double weight = 1.0;
};

struct SameInstance {
  bool operator()(const FeatureVector* a, const FeatureVector* b) const {
    if (*a->label != *b->label) return *a->label < *b->label;
    return a->features < b->features;
  }
};

}  // namespace

LinearModel train_linear(std::span<const FeatureVector> data,
                         const LinearHyperparams& hp) {
  if (hp.regularization <= 0.0) throw Error("regularization must be positive");
  if (hp.epochs < 1) throw Error("epochs must be positive");

  // Intern tokens in first-seen order; index 0 is the bias feature.
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<const std::string*> names{nullptr};
  std::vector<SparseRow> rows;
  rows.reserve(data.size());
  bool seen[2] = {false, false};
  // Identical instances collapse into one row with a multiplicity, so that
  // repeating the data leaves the optimization path unchanged.
  std::map<const FeatureVector*, std::size_t, SameInstance> unique;
  for (const FeatureVector& fv : data) {
    if (!fv.label) throw Error("train_linear needs labeled instances");
    seen[class_index(*fv.label)] = true;
    auto [dup, fresh] = unique.try_emplace(&fv, rows.size());
    if (!fresh) {
      rows[dup->second].weight += 1.0;
      continue;
    }
    SparseRow row;
    row.y = *fv.label == Label::Positive ? 1.0 : -1.0;
    row.terms.reserve(fv.features.size() + 1);
    row.terms.emplace_back(0, 1.0);
    for (const auto& [token, value] : fv.features) {
      auto [it, inserted] = ids.try_emplace(token, names.size());
      if (inserted) names.push_back(&it->first);
      row.terms.emplace_back(it->second, value);
    }
    rows.push_back(std::move(row));
  }
  if (!seen[0] || !seen[1]) {
    throw Error("train_linear needs instances of both classes");
  }

  const double mean_weight =
      static_cast<double>(data.size()) / static_cast<double>(rows.size());
  for (SparseRow& row : rows) row.weight /= mean_weight;

  // w = scale * v
  std::vector<double> v(names.size(), 0.0);
  double scale = 1.0;
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(hp.seed);
  const double lambda = hp.regularization;
  std::uint64_t t = 0;

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t idx : order) {
      ++t;
      const SparseRow& row = rows[idx];
      double dot = 0.0;
      for (const auto& [j, x] : row.terms) dot += v[j] * x;
      const double margin = row.y * scale * dot;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double step = eta * row.weight * row.y / scale;
        for (const auto& [j, x] : row.terms) v[j] += step * x;
      }
      if (scale < 1e-9) {
        for (double& w : v) w *= scale;
        scale = 1.0;
      }
    }
  }

  LinearModel model;
  model.hyperparams = hp;
  model.bias = scale * v[0];
  for (std::size_t j = 1; j < names.size(); ++j) {
    model.weights.emplace(*names[j], scale * v[j]);
  }
  return model;
}

double decision_value(const LinearModel& model, const FeatureVector& x) {
  double score = model.bias;
  for (const auto& [token, value] : x.features) {
    auto it = model.weights.find(token);
    if (it != model.weights.end()) score += it->second * value;
  }
  return score;
}

Label predict_linear(const LinearModel& model, const FeatureVector& x) {
  return decision_value(model, x) >= 0.0 ? Label::Positive : Label::Negative;
}

std::vector<Label> predict_linear(const LinearModel& model,
                                  std::span<const FeatureVector> xs) {
  std::vector<Label> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict_linear(model, x));
  return out;
}

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T>
T header_value(const std::string& header, const std::string& key) {
  const std::string needle = " " + key + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos) {
    throw InputError("model header lacks " + key);
  }
  std::istringstream in(header.substr(pos + needle.size()));
  T value{};
  if (!(in >> value)) throw InputError("bad model header value for " + key);
  return value;
}

}  // namespace

void write_model(std::ostream& out, const LinearModel& model) {
  out << "#linear bias=" << format_double(model.bias)
      << " regularization=" << format_double(model.hyperparams.regularization)
      << " epochs=" << model.hyperparams.epochs
      << " seed=" << model.hyperparams.seed << '\n';
  for (const auto& [token, w] : model.weights) {
    out << token << '\t' << format_double(w) << '\n';
  }
}

LinearModel read_model(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || !header.starts_with("#linear")) {
    throw InputError("missing model header");
  }
  LinearModel model;
  model.bias = header_value<double>(header, "bias");
  model.hyperparams.regularization = header_value<double>(header, "regularization");
  model.hyperparams.epochs = header_value<int>(header, "epochs");
  model.hyperparams.seed = header_value<std::uint64_t>(header, "seed");
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw InputError("malformed model line " + std::to_string(line_no));
    }
    char* end = nullptr;
    const std::string text = line.substr(tab + 1);
    const double w = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
      throw InputError("malformed weight at line " + std::to_string(line_no));
    }
    model.weights[line.substr(0, tab)] = w;
  }
  return model;
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_model(out, model);
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_model(in);
}

}  // namespace stgain
