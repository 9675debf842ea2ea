#include "stgain/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "stgain/error.hpp"

namespace stgain {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::Cosine: return "cosine";
    case Measure::Euclidean: return "euclidean";
    case Measure::Kl: return "kl";
    case Measure::Js: return "js";
    case Measure::Suwr: return "suwr";
  }
  return "?";
}

std::optional<Measure> parse_measure(std::string_view s) {
  for (Measure m : kAllMeasures) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

namespace {

using Entries = std::map<std::string, double>;

// Visits the union of two sorted supports; absent entries are passed as 0.
template <typename F>
void merge_walk(const Entries& a, const Entries& b, F&& f) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      f(i->second, 0.0);
      ++i;
    } else if (i == a.end() || j->first < i->first) {
      f(0.0, j->second);
      ++j;
    } else {
      f(i->second, j->second);
      ++i;
      ++j;
    }
  }
}

void require_mass(const CorpusVector& v) {
  if (v.total_count <= 0.0 || v.entries.empty()) {
    throw Error("similarity of an empty corpus");
  }
}

// Aligned positional arrays over the union vocabulary.
struct Aligned {
  std::vector<double> p, q;
};

Aligned align(const Entries& a, const Entries& b) {
  Aligned out;
  merge_walk(a, b, [&](double x, double y) {
    out.p.push_back(x);
    out.q.push_back(y);
  });
  return out;
}

Entries positive_pmi_distribution(const CorpusVector& v,
                                  const CorpusVector& partner) {
  Entries out = pmi_transform(v, partner).entries;
  double mass = 0.0;
  for (auto& [t, x] : out) {
    x = std::max(x, 0.0);
    mass += x;
  }
  if (mass > 0.0) {
    for (auto& [t, x] : out) x /= mass;
  }
  return out;
}

double mass_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Distributions fed to KL/JS, aligned over the union vocabulary. Returns
// nullopt when both are empty (identical distributions under pmi).
std::optional<Aligned> divergence_inputs(const CorpusVector& p,
                                         const CorpusVector& q,
                                         const SimilarityOptions& opt) {
  require_mass(p);
  require_mass(q);
  if (opt.divergence_input == DivergenceInput::RelFreq) {
    return align(rel_freq(p).entries, rel_freq(q).entries);
  }
  Aligned a = align(positive_pmi_distribution(p, q),
                    positive_pmi_distribution(q, p));
  const bool p_empty = mass_of(a.p) == 0.0;
  const bool q_empty = mass_of(a.q) == 0.0;
  if (p_empty && q_empty) return std::nullopt;
  if (p_empty || q_empty) {
    throw Error("positive-pmi distribution with zero mass");
  }
  return a;
}

double kl_sum(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    const double qk = q[k] > 0.0 ? q[k] : kKlFloor;
    sum += p[k] * std::log2(p[k] / qk);
  }
  return sum;
}

// KL against the midpoint distribution; midpoint entries are > 0 wherever
// p is, so no smoothing applies.
double kl_to_mid(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    const double m = (p[k] + q[k]) / 2.0;
    sum += p[k] * std::log2(p[k] / m);
  }
  return sum;
}

}  // namespace

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("KL over vectors of unequal length");
  // Clamp rounding noise below zero.
  return std::max(0.0, kl_sum(p, q));
}

double js_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("JS over vectors of unequal length");
  const double a = kl_to_mid(p, q);
  const double b = kl_to_mid(q, p);
  return std::clamp(0.5 * (a + b), 0.0, 1.0);
}

double cosine_distance(const CorpusVector& p, const CorpusVector& q) {
  require_mass(p);
  require_mass(q);
  const CorpusVector pp = pmi_transform(p, q);
  const CorpusVector qq = pmi_transform(q, p);
  double dot = 0.0, np = 0.0, nq = 0.0;
  merge_walk(pp.entries, qq.entries, [&](double x, double y) {
    dot += x * y;
    np += x * x;
    nq += y * y;
  });
  // Both pmi vectors vanish exactly when P and Q have the same relative
  // frequencies.
  if (np == 0.0 && nq == 0.0) return 0.0;
  if (np == 0.0 || nq == 0.0) {
    throw Error("cosine distance with a zero-norm pmi vector");
  }
  const double cos = dot / (std::sqrt(np) * std::sqrt(nq));
  return std::max(0.0, 1.0 - cos);
}

double euclidean_distance(const CorpusVector& p, const CorpusVector& q) {
  require_mass(p);
  require_mass(q);
  const CorpusVector pp = pmi_transform(p, q);
  const CorpusVector qq = pmi_transform(q, p);
  double sq = 0.0;
  merge_walk(pp.entries, qq.entries, [&](double x, double y) {
    const double d = x - y;
    sq += d * d;
  });
  return std::sqrt(sq);
}

double kl_divergence(const CorpusVector& p, const CorpusVector& q,
                     const SimilarityOptions& opt) {
  const auto in = divergence_inputs(p, q, opt);
  if (!in) return 0.0;
  return kl_divergence(in->p, in->q);
}

double js_divergence(const CorpusVector& p, const CorpusVector& q,
                     const SimilarityOptions& opt) {
  const auto in = divergence_inputs(p, q, opt);
  if (!in) return 0.0;
  return js_divergence(in->p, in->q);
}

double suwr(const CorpusVector& p, const CorpusVector& q) {
  if (p.entries.empty()) throw Error("sUWR with an empty test vocabulary");
  std::size_t unseen = 0;
  for (const auto& [token, count] : p.entries) {
    if (!q.entries.contains(token)) ++unseen;
  }
  return static_cast<double>(unseen) / static_cast<double>(p.entries.size());
}

double similarity(Measure m, const CorpusVector& p, const CorpusVector& q,
                  const SimilarityOptions& opt) {
  switch (m) {
    case Measure::Cosine: return cosine_distance(p, q);
    case Measure::Euclidean: return euclidean_distance(p, q);
    case Measure::Kl: return kl_divergence(p, q, opt);
    case Measure::Js: return js_divergence(p, q, opt);
    case Measure::Suwr: return suwr(p, q);
  }
  throw Error("unknown measure");
}

SimilarityValue similarity(Measure m, const Corpus& p, const Corpus& q,
                           const SimilarityOptions& opt) {
  if (p.empty() || q.empty()) throw Error("similarity of an empty corpus");
  return {m, p.domain_id(), q.domain_id(),
          similarity(m, centroid(p), centroid(q), opt)};
}

SimilarityValue cosine_distance(const Corpus& p, const Corpus& q) {
  return similarity(Measure::Cosine, p, q);
}
SimilarityValue euclidean_distance(const Corpus& p, const Corpus& q) {
  return similarity(Measure::Euclidean, p, q);
}
SimilarityValue kl_divergence(const Corpus& p, const Corpus& q,
                              const SimilarityOptions& opt) {
  return similarity(Measure::Kl, p, q, opt);
}
SimilarityValue js_divergence(const Corpus& p, const Corpus& q,
                              const SimilarityOptions& opt) {
  return similarity(Measure::Js, p, q, opt);
}
SimilarityValue suwr(const Corpus& p, const Corpus& q) {
  return similarity(Measure::Suwr, p, q);
}

SimilarityFeatures similarity_features(const CorpusVector& test,
                                       const CorpusVector& train,
                                       const CorpusVector& extra, Measure m,
                                       const SimilarityOptions& opt) {
  return {m, similarity(m, test, train, opt), similarity(m, extra, train, opt),
          similarity(m, test, extra, opt)};
}

SimilarityFeatures similarity_features(const Corpus& test, const Corpus& train,
                                       const Corpus& extra, Measure m,
                                       const SimilarityOptions& opt) {
  return similarity_features(centroid(test), centroid(train), centroid(extra),
                             m, opt);
}

std::vector<std::vector<double>> similarity_matrix(
    std::span<const Corpus> corpora, Measure m, const SimilarityOptions& opt) {
  std::vector<CorpusVector> c;
  c.reserve(corpora.size());
  for (const Corpus& x : corpora) c.push_back(centroid(x));
  std::vector<std::vector<double>> out(corpora.size(),
                                       std::vector<double>(corpora.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (is_symmetric(m) && j < i) {
        out[i][j] = out[j][i];
      } else {
        out[i][j] = similarity(m, c[i], c[j], opt);
      }
    }
  }
  return out;
}

}  // namespace stgain
