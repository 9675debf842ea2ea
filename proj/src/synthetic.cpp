#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stgain/corpus.hpp"
#include "stgain/error.hpp"
#include "stgain/random.hpp"

namespace stgain {

namespace {

struct PoolToken {
  std::string name;
  double base_weight;
  int polarity;      // -1, 0, +1
  double magnitude;  // weight of the token in the labeling rule
};

// Cumulative sampling table over one pool for one latent sentiment.
struct Sampler {
  std::vector<double> cumulative;

  std::size_t draw(Rng& rng) const {
    const double u = uniform_real(rng) * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
  }
};

std::vector<PoolToken> make_pool(const std::string& prefix, int size,
                                 Rng& rng) {
  std::vector<PoolToken> pool;
  pool.reserve(size);
  for (int i = 0; i < size; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%s%04d", prefix.c_str(), i);
    const double u = uniform_real(rng);
    const int polarity = u < 0.3 ? 1 : (u < 0.6 ? -1 : 0);
    // Zipf-like frequency profile.
    const double weight = 1.0 / std::pow(i + 1.0, 0.8);
    pool.push_back({name, weight, polarity, 0.5 + uniform_real(rng)});
  }
  return pool;
}

Sampler make_sampler(const std::vector<PoolToken>& pool,
                     const std::vector<int>& polarity, int sentiment,
                     double strength) {
  Sampler s;
  s.cumulative.reserve(pool.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    acc += pool[i].base_weight * std::exp(strength * sentiment * polarity[i]);
    s.cumulative.push_back(acc);
  }
  return s;
}

}  // namespace

std::vector<Corpus> generate_synthetic_domains(const SyntheticOptions& opt) {
  if (opt.n_domains < 1 || opt.vocab_size < 1 || opt.docs_per_domain < 1) {
    throw Error("synthetic generator sizes must be positive");
  }
  if (opt.divergence < 0.0 || opt.divergence > 1.0) {
    throw Error("divergence knob must lie in [0, 1]");
  }
  if (opt.min_doc_length < 1 || opt.max_doc_length < opt.min_doc_length) {
    throw Error("invalid synthetic document length range");
  }
  std::vector<int> pool_of = opt.pool_of_domain;
  if (pool_of.empty()) {
    for (int d = 0; d < opt.n_domains; ++d) pool_of.push_back(d);
  }
  if (static_cast<int>(pool_of.size()) != opt.n_domains) {
    throw Error("pool_of_domain must name one pool per domain");
  }
  const int n_pools = *std::max_element(pool_of.begin(), pool_of.end()) + 1;
  if (*std::min_element(pool_of.begin(), pool_of.end()) < 0) {
    throw Error("pool indices must be nonnegative");
  }
  const int pool_size = std::max(1, opt.vocab_size / (n_pools + 1));
  const int shared_size = std::max(1, opt.vocab_size - pool_size * n_pools);

  Rng structure(opt.seed);
  const std::vector<PoolToken> shared = make_pool("c", shared_size, structure);
  std::vector<std::vector<PoolToken>> pools;
  for (int p = 0; p < n_pools; ++p) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "p%02d_", p);
    pools.push_back(make_pool(prefix, pool_size, structure));
  }

  std::vector<Corpus> out;
  out.reserve(opt.n_domains);
  for (int d = 0; d < opt.n_domains; ++d) {
    Rng rng(opt.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(d + 1)));
    const std::vector<PoolToken>& own = pools[pool_of[d]];

    // Domain-specific polarity of shared tokens.
    std::vector<int> shared_pol(shared.size());
    for (std::size_t i = 0; i < shared.size(); ++i) {
      shared_pol[i] = shared[i].polarity;
      if (uniform_real(rng) < opt.polarity_flip) shared_pol[i] = -shared_pol[i];
    }
    std::vector<int> own_pol(own.size());
    for (std::size_t i = 0; i < own.size(); ++i) own_pol[i] = own[i].polarity;

    // [sentiment index][0 = shared, 1 = own]
    Sampler samplers[2][2];
    for (int s = 0; s < 2; ++s) {
      const int sentiment = s == 0 ? 1 : -1;
      samplers[s][0] = make_sampler(shared, shared_pol, sentiment,
                                    opt.sentiment_strength);
      samplers[s][1] = make_sampler(own, own_pol, sentiment,
                                    opt.sentiment_strength);
    }

    std::vector<Document> docs;
    docs.reserve(opt.docs_per_domain);
    const int span_len = opt.max_doc_length - opt.min_doc_length + 1;
    for (int n = 0; n < opt.docs_per_domain; ++n) {
      const int s = uniform_real(rng) < 0.5 ? 0 : 1;
      const int length =
          opt.min_doc_length + static_cast<int>(uniform_index(rng, span_len));
      Document doc;
      // The labeling rule is linear in binary token occurrence.
      std::map<std::size_t, double> rule_terms;
      for (int k = 0; k < length; ++k) {
        const bool from_own = uniform_real(rng) < opt.divergence;
        const Sampler& sampler = samplers[s][from_own ? 1 : 0];
        const std::size_t i = sampler.draw(rng);
        const PoolToken& tok = from_own ? own[i] : shared[i];
        const int pol = from_own ? own_pol[i] : shared_pol[i];
        doc.tokens[tok.name] += 1;
        const std::size_t key = from_own ? shared.size() + i : i;
        rule_terms[key] = pol * tok.magnitude;
      }
      double score = 0.0;
      for (const auto& [key, w] : rule_terms) score += w;
      doc.label = score >= 0.0 ? Label::Positive : Label::Negative;
      docs.push_back(std::move(doc));
    }
    char name[16];
    std::snprintf(name, sizeof name, "d%02d", d);
    out.emplace_back(name, std::move(docs));
  }
  return out;
}

std::vector<Corpus> generate_synthetic_domains(int n_domains, int vocab_size,
                                               int docs_per_domain,
                                               double divergence,
                                               std::uint64_t seed) {
  SyntheticOptions opt;
  opt.n_domains = n_domains;
  opt.vocab_size = vocab_size;
  opt.docs_per_domain = docs_per_domain;
  opt.divergence = divergence;
  opt.seed = seed;
  return generate_synthetic_domains(opt);
}

}  // namespace stgain
