#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "stgain/labels.hpp"

namespace stgain {

// A bag-of-words instance. Counts are >= 1 and token strings non-empty.
struct Document {
  std::map<std::string, int> tokens;
  std::optional<Label> label;

  friend bool operator==(const Document&, const Document&) = default;
};

// Ordered collection of documents from one domain. Immutable once built.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::string domain_id, std::vector<Document> documents);

  const std::string& domain_id() const { return domain_id_; }
  const std::vector<Document>& documents() const { return documents_; }
  const std::set<std::string>& vocabulary() const { return vocabulary_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  // True when every document carries a label.
  bool fully_labeled() const;
  std::size_t count_label(Label l) const;

 private:
  std::string domain_id_;
  std::vector<Document> documents_;
  std::set<std::string> vocabulary_;
};

enum class CorpusFormat { Canonical, Blitzer };

enum class Weighting { RawCount, Pmi, RelFreq };

// Corpus-level vector. total_count is the raw token mass the vector was
// built from, whatever the weighting.
struct CorpusVector {
  Weighting weighting = Weighting::RawCount;
  std::map<std::string, double> entries;
  double total_count = 0.0;
};

Corpus parse_corpus(std::istream& in, const std::string& domain_id,
                    CorpusFormat format);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   std::optional<std::string> domain_id = std::nullopt);

// CANONICAL writer; tokens are emitted in lexicographic order.
void write_canonical(std::ostream& out, const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Draws `size` documents without replacement. Selected documents keep
// their source order. With stratify, per-label counts stay within one
// document of the source proportions.
Corpus sample_corpus(const Corpus& corpus, std::size_t size,
                     std::uint64_t seed, bool stratify = true);

// Concatenates corpora in the given order under a new domain id.
Corpus concatenate(std::string domain_id, std::span<const Corpus* const> parts);

CorpusVector centroid(const Corpus& corpus);

// Pairwise pmi weighting of `v` relative to `partner`. The result is
// indexed by the union vocabulary; tokens absent from `v` get 0.
CorpusVector pmi_transform(const CorpusVector& v, const CorpusVector& partner);

CorpusVector rel_freq(const CorpusVector& v);

struct SyntheticOptions {
  int n_domains = 2;
  int vocab_size = 1000;
  int docs_per_domain = 100;
  // 0: every domain samples one shared token distribution; 1: each domain
  // samples only its own token pool.
  double divergence = 0.5;
  std::uint64_t seed = 0;
  // Token pool used by each domain; empty means domain i uses pool i.
  // Domains mapped to the same pool are distributionally close.
  std::vector<int> pool_of_domain;
  int min_doc_length = 20;
  int max_doc_length = 60;
  // Strength of the latent sentiment on token choice.
  double sentiment_strength = 1.5;
  // Fraction of shared-pool tokens whose polarity is reversed per domain.
  double polarity_flip = 0.15;
};

// Domains are named d00, d01, ... Each document is labeled by a
// domain-specific linear rule over token occurrences.
std::vector<Corpus> generate_synthetic_domains(const SyntheticOptions& options);
std::vector<Corpus> generate_synthetic_domains(int n_domains, int vocab_size,
                                               int docs_per_domain,
                                               double divergence,
                                               std::uint64_t seed);

}  // namespace stgain
