#include "stgain/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>

#include "stgain/error.hpp"
#include "stgain/random.hpp"

namespace stgain {

std::optional<Label> parse_label(std::string_view s) {
  if (s == "positive") return Label::Positive;
  if (s == "negative") return Label::Negative;
  return std::nullopt;
}

std::optional<GainLabel> parse_gain_label(std::string_view s) {
  if (s == "GAIN") return GainLabel::Gain;
  if (s == "LOSS") return GainLabel::Loss;
  return std::nullopt;
}

Corpus::Corpus(std::string domain_id, std::vector<Document> documents)
    : domain_id_(std::move(domain_id)), documents_(std::move(documents)) {
  for (const auto& doc : documents_) {
    for (const auto& [token, count] : doc.tokens) {
      if (token.empty()) throw Error("empty token in corpus " + domain_id_);
      if (count < 1) throw Error("non-positive count for token '" + token + "'");
      vocabulary_.insert(token);
    }
  }
}

bool Corpus::fully_labeled() const {
  return std::all_of(documents_.begin(), documents_.end(),
                     [](const Document& d) { return d.label.has_value(); });
}

std::size_t Corpus::count_label(Label l) const {
  return static_cast<std::size_t>(
      std::count_if(documents_.begin(), documents_.end(),
                    [l](const Document& d) { return d.label == l; }));
}

namespace {

std::string at_line(std::size_t line_no) {
  return " at line " + std::to_string(line_no);
}

// Parses one `token:count` field into doc.
void add_field(Document& doc, std::string_view field, std::size_t line_no) {
  const auto colon = field.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw InputError("malformed token field '" + std::string(field) + "'" +
                     at_line(line_no));
  }
  const std::string_view count_text = field.substr(colon + 1);
  int count = 0;
  const auto [ptr, ec] = std::from_chars(
      count_text.data(), count_text.data() + count_text.size(), count);
  if (ec != std::errc() || ptr != count_text.data() + count_text.size() ||
      count < 1) {
    throw InputError("malformed count" + at_line(line_no));
  }
  doc.tokens[std::string(field.substr(0, colon))] += count;
}

template <typename F>
void for_each_field(std::string_view text, F&& f) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == ' ') {
      ++pos;
      continue;
    }
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    f(text.substr(pos, end - pos));
    pos = end;
  }
}

Document parse_canonical_line(std::string_view line, std::size_t line_no) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) {
    throw InputError("missing label separator" + at_line(line_no));
  }
  Document doc;
  const std::string_view label = line.substr(0, tab);
  if (label != "unlabeled") {
    doc.label = parse_label(label);
    if (!doc.label) {
      throw InputError("unknown label '" + std::string(label) + "'" +
                       at_line(line_no));
    }
  }
  for_each_field(line.substr(tab + 1),
                 [&](std::string_view f) { add_field(doc, f, line_no); });
  return doc;
}

Document parse_blitzer_line(std::string_view line, std::size_t line_no) {
  constexpr std::string_view kLabelKey = "#label#:";
  Document doc;
  bool saw_label = false;
  for_each_field(line, [&](std::string_view f) {
    if (saw_label) {
      throw InputError("field after label" + at_line(line_no));
    }
    if (f.starts_with(kLabelKey)) {
      const std::string_view label = f.substr(kLabelKey.size());
      doc.label = parse_label(label);
      if (!doc.label) {
        throw InputError("unknown label '" + std::string(label) + "'" +
                         at_line(line_no));
      }
      saw_label = true;
      return;
    }
    add_field(doc, f, line_no);
  });
  if (!saw_label) throw InputError("missing #label# field" + at_line(line_no));
  return doc;
}

}  // namespace

Corpus parse_corpus(std::istream& in, const std::string& domain_id,
                    CorpusFormat format) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    docs.push_back(format == CorpusFormat::Canonical
                       ? parse_canonical_line(line, line_no)
                       : parse_blitzer_line(line, line_no));
  }
  if (docs.empty()) throw InputError("empty corpus file for " + domain_id);
  return Corpus(domain_id, std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   std::optional<std::string> domain_id) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  const std::string id = domain_id ? *domain_id : path.stem().string();
  try {
    return parse_corpus(in, id, format);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_canonical(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus.documents()) {
    out << (doc.label ? to_string(*doc.label) : std::string_view("unlabeled"))
        << '\t';
    bool first = true;
    for (const auto& [token, count] : doc.tokens) {
      if (!first) out << ' ';
      out << token << ':' << count;
      first = false;
    }
    out << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  write_canonical(out, corpus);
}

namespace {

// Partial Fisher-Yates: the first k entries of idx become a uniform sample.
void select_prefix(std::vector<std::size_t>& idx, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + uniform_index(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
}

}  // namespace

Corpus sample_corpus(const Corpus& corpus, std::size_t size,
                     std::uint64_t seed, bool stratify) {
  const std::size_t n = corpus.size();
  if (size < 1) throw Error("sample size must be positive");
  if (size > n) {
    throw Error("sample size " + std::to_string(size) + " exceeds corpus " +
                corpus.domain_id() + " of " + std::to_string(n) + " documents");
  }
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  if (!stratify) {
    chosen.resize(n);
    std::iota(chosen.begin(), chosen.end(), std::size_t{0});
    select_prefix(chosen, size, rng);
  } else {
    if (!corpus.fully_labeled()) {
      throw Error("stratified sampling needs a labeled corpus: " +
                  corpus.domain_id());
    }
    std::vector<std::size_t> groups[2];
    for (std::size_t i = 0; i < n; ++i) {
      groups[class_index(*corpus.documents()[i].label)].push_back(i);
    }
    // Largest-remainder quotas; ties resolved in favour of POSITIVE.
    std::size_t quota[2];
    double frac[2];
    for (int c = 0; c < 2; ++c) {
      const double exact = static_cast<double>(size) * groups[c].size() / n;
      quota[c] = static_cast<std::size_t>(std::floor(exact));
      frac[c] = exact - quota[c];
    }
    if (quota[0] + quota[1] < size) {
      const int c = frac[0] >= frac[1] ? 0 : 1;
      ++quota[c];
    }
    for (int c = 0; c < 2; ++c) {
      select_prefix(groups[c], quota[c], rng);
      chosen.insert(chosen.end(), groups[c].begin(), groups[c].end());
    }
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<Document> docs;
  docs.reserve(size);
  for (std::size_t i : chosen) docs.push_back(corpus.documents()[i]);
  return Corpus(corpus.domain_id(), std::move(docs));
}

Corpus concatenate(std::string domain_id,
                   std::span<const Corpus* const> parts) {
  std::vector<Document> docs;
  for (const Corpus* c : parts) {
    docs.insert(docs.end(), c->documents().begin(), c->documents().end());
  }
  return Corpus(std::move(domain_id), std::move(docs));
}

CorpusVector centroid(const Corpus& corpus) {
  if (corpus.empty()) throw Error("centroid of empty corpus " + corpus.domain_id());
  CorpusVector v;
  v.weighting = Weighting::RawCount;
  for (const auto& doc : corpus.documents()) {
    for (const auto& [token, count] : doc.tokens) {
      v.entries[token] += count;
      v.total_count += count;
    }
  }
  return v;
}

CorpusVector pmi_transform(const CorpusVector& v, const CorpusVector& partner) {
  if (v.weighting != Weighting::RawCount ||
      partner.weighting != Weighting::RawCount) {
    throw Error("pmi_transform needs raw-count vectors");
  }
  if (v.total_count <= 0.0 || partner.total_count <= 0.0) {
    throw Error("pmi_transform on a vector with zero mass");
  }
  const double n = v.total_count + partner.total_count;
  const double mass_v = v.total_count;
  CorpusVector out;
  out.weighting = Weighting::Pmi;
  out.total_count = v.total_count;

  auto emit = [&](const std::string& token, double in_v, double in_partner) {
    if (in_v > 0.0) {
      const double joint = in_v + in_partner;
      out.entries.emplace_hint(out.entries.end(), token,
                               std::log(n * in_v / (joint * mass_v)));
    } else {
      out.entries.emplace_hint(out.entries.end(), token, 0.0);
    }
  };

  // Merge walk over the two sorted supports.
  auto a = v.entries.begin();
  auto b = partner.entries.begin();
  while (a != v.entries.end() || b != partner.entries.end()) {
    if (b == partner.entries.end() ||
        (a != v.entries.end() && a->first < b->first)) {
      emit(a->first, a->second, 0.0);
      ++a;
    } else if (a == v.entries.end() || b->first < a->first) {
      emit(b->first, 0.0, b->second);
      ++b;
    } else {
      emit(a->first, a->second, b->second);
      ++a;
      ++b;
    }
  }
  if (out.entries.empty()) throw Error("pmi_transform over empty vocabulary");
  return out;
}

CorpusVector rel_freq(const CorpusVector& v) {
  double mass = 0.0;
  for (const auto& [token, count] : v.entries) mass += count;
  if (mass <= 0.0) throw Error("rel_freq of a vector with zero mass");
  CorpusVector out;
  out.weighting = Weighting::RelFreq;
  out.total_count = v.total_count;
  for (const auto& [token, count] : v.entries) {
    out.entries.emplace_hint(out.entries.end(), token, count / mass);
  }
  return out;
}

}  // namespace stgain
