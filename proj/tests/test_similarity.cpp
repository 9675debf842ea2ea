#include <doctest.h>

#include <cmath>
#include <set>

#include "stgain/error.hpp"
#include "stgain/similarity.hpp"

using namespace stgain;

namespace {

Corpus corpus(const std::string& id, std::vector<std::map<std::string, int>> docs) {
  std::vector<Document> out;
  for (auto& d : docs) out.push_back({std::move(d), Label::Positive});
  return Corpus(id, std::move(out));
}

// Scalar re-derivation of the pmi vectors over a fixed token order.
struct PmiPair {
  std::vector<double> p, q;
};

PmiPair oracle_pmi(const Corpus& a, const Corpus& b) {
  std::map<std::string, double> ca, cb;
  double na = 0, nb = 0;
  for (const auto& d : a.documents())
    for (const auto& [t, c] : d.tokens) ca[t] += c, na += c;
  for (const auto& d : b.documents())
    for (const auto& [t, c] : d.tokens) cb[t] += c, nb += c;
  std::set<std::string> vocab;
  for (const auto& [t, c] : ca) vocab.insert(t);
  for (const auto& [t, c] : cb) vocab.insert(t);
  PmiPair out;
  const double n = na + nb;
  for (const auto& t : vocab) {
    const double x = ca[t], y = cb[t];
    out.p.push_back(x > 0 ? std::log(n * x / ((x + y) * na)) : 0.0);
    out.q.push_back(y > 0 ? std::log(n * y / ((x + y) * nb)) : 0.0);
  }
  return out;
}

double oracle_cosine(const PmiPair& v) {
  double dot = 0, pp = 0, qq = 0;
  for (std::size_t i = 0; i < v.p.size(); ++i) {
    dot += v.p[i] * v.q[i];
    pp += v.p[i] * v.p[i];
    qq += v.q[i] * v.q[i];
  }
  return 1.0 - dot / (std::sqrt(pp) * std::sqrt(qq));
}

double oracle_euclid(const PmiPair& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.p.size(); ++i) s += (v.p[i] - v.q[i]) * (v.p[i] - v.q[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("measure names") {
  for (Measure m : kAllMeasures) CHECK(parse_measure(to_string(m)) == m);
  CHECK_FALSE(parse_measure("chi2").has_value());
  CHECK(is_symmetric(Measure::Js));
  CHECK_FALSE(is_symmetric(Measure::Kl));
  CHECK_FALSE(is_symmetric(Measure::Suwr));
}

TEST_CASE("cosine and euclidean against a scalar oracle") {
  const Corpus p = corpus("p", {{{"good", 2}, {"cheap", 1}}, {{"bad", 1}, {"good", 1}}});
  const Corpus q = corpus("q", {{{"good", 1}, {"slow", 3}}, {{"cheap", 2}, {"fast", 1}}});
  const PmiPair v = oracle_pmi(p, q);
  CHECK(cosine_distance(p, q).value == doctest::Approx(oracle_cosine(v)).epsilon(1e-12));
  CHECK(euclidean_distance(p, q).value == doctest::Approx(oracle_euclid(v)).epsilon(1e-12));
  const SimilarityValue sv = cosine_distance(p, q);
  CHECK(sv.from_corpus == "p");
  CHECK(sv.to_corpus == "q");
  CHECK(sv.measure == Measure::Cosine);
}

TEST_CASE("cosine and euclidean special cases") {
  const Corpus p = corpus("p", {{{"a", 2}, {"b", 1}}});
  CHECK(cosine_distance(p, p).value == doctest::Approx(0.0));
  CHECK(euclidean_distance(p, p).value == 0.0);

  SUBCASE("disjoint vocabularies are orthogonal") {
    const Corpus q = corpus("q", {{{"x", 1}, {"y", 4}}});
    CHECK(cosine_distance(p, q).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("unit orthogonal vectors") {
    CorpusVector a, b;
    a.entries = {{"u", 1}};
    a.total_count = 1;
    b.entries = {{"w", 1}};
    b.total_count = 1;
    // pmi of each present token is log 2; both vectors have one nonzero in
    // a different slot.
    CHECK(euclidean_distance(a, b) == doctest::Approx(std::sqrt(2.0) * std::log(2.0)));
  }
  SUBCASE("proportional corpora have all-zero pmi vectors") {
    const Corpus a = corpus("a", {{{"t", 1}, {"u", 2}}});
    const Corpus b = corpus("b", {{{"t", 3}, {"u", 6}}});
    CHECK(cosine_distance(a, b).value == 0.0);
    CHECK(euclidean_distance(a, b).value == doctest::Approx(0.0));
  }
}

TEST_CASE("KL closed forms") {
  const std::vector<double> p{1.0, 0.0}, h{0.5, 0.5}, q{0.0, 1.0};
  CHECK(kl_divergence(std::span<const double>(p), std::span<const double>(h)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kl_divergence(std::span<const double>(p), std::span<const double>(q)) ==
        doctest::Approx(52.0).epsilon(1e-12));
  CHECK(kl_divergence(std::span<const double>(p), std::span<const double>(p)) == 0.0);
}

TEST_CASE("KL and JS on corpora") {
  const Corpus a = corpus("a", {{{"x", 1}}});
  const Corpus b = corpus("b", {{{"y", 3}}});
  CHECK(kl_divergence(a, b).value == doctest::Approx(52.0).epsilon(1e-12));
  CHECK(js_divergence(a, b).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(js_divergence(a, a).value == 0.0);

  const Corpus c = corpus("c", {{{"x", 1}, {"y", 1}}});
  CHECK(kl_divergence(a, c).value == doctest::Approx(1.0).epsilon(1e-12));
  // 0.5 log2(0.5 / 1) + 0.5 log2(0.5 / 2^-52)
  CHECK(kl_divergence(c, a).value == doctest::Approx(25.0).epsilon(1e-12));

  SUBCASE("positive pmi input is available and well behaved") {
    SimilarityOptions opt;
    opt.divergence_input = DivergenceInput::PositivePmi;
    const Corpus p = corpus("p", {{{"x", 3}, {"y", 1}, {"z", 1}}});
    const Corpus q = corpus("q", {{{"x", 1}, {"y", 3}, {"w", 2}}});
    const double js = js_divergence(p, q, opt).value;
    CHECK(js >= 0.0);
    CHECK(js <= 1.0);
    CHECK(js == doctest::Approx(js_divergence(q, p, opt).value).epsilon(1e-12));
  }
}

TEST_CASE("JS matches its definition through the midpoint") {
  const std::vector<double> p{0.5, 0.25, 0.25, 0.0}, q{0.1, 0.1, 0.4, 0.4};
  std::vector<double> m(4);
  for (int i = 0; i < 4; ++i) m[i] = 0.5 * (p[i] + q[i]);
  double kpm = 0, kqm = 0;
  for (int i = 0; i < 4; ++i) {
    if (p[i] > 0) kpm += p[i] * std::log2(p[i] / m[i]);
    if (q[i] > 0) kqm += q[i] * std::log2(q[i] / m[i]);
  }
  CHECK(js_divergence(std::span<const double>(p), std::span<const double>(q)) ==
        doctest::Approx(0.5 * (kpm + kqm)).epsilon(1e-12));
}

TEST_CASE("sUWR") {
  const Corpus p = corpus("p", {{{"a", 1}, {"b", 1}}, {{"c", 5}, {"d", 1}}});
  const Corpus q = corpus("q", {{{"a", 9}, {"b", 1}}});
  CHECK(suwr(p, q).value == 0.5);
  CHECK(suwr(q, p).value == 0.0);
  CHECK(suwr(p, p).value == 0.0);
}

TEST_CASE("similarity_features composes pairwise calls") {
  const Corpus test = corpus("test", {{{"a", 2}, {"b", 1}}, {{"c", 1}}});
  const Corpus train = corpus("train", {{{"a", 1}, {"d", 2}}});
  const Corpus extra = corpus("extra", {{{"b", 3}, {"c", 1}, {"e", 1}}});
  for (Measure m : kAllMeasures) {
    const SimilarityFeatures f = similarity_features(test, train, extra, m);
    CHECK(f.measure == m);
    CHECK(f.test_train == similarity(m, test, train).value);
    CHECK(f.extra_train == similarity(m, extra, train).value);
    CHECK(f.test_extra == similarity(m, test, extra).value);
  }
  const SimilarityFeatures z = similarity_features(test, test, test, Measure::Kl);
  CHECK(z.test_train == 0.0);
  CHECK(z.extra_train == 0.0);
  CHECK(z.test_extra == 0.0);
}

TEST_CASE("pmi pairing order does not matter") {
  const Corpus p = corpus("p", {{{"a", 2}, {"b", 1}}, {{"c", 1}}});
  const Corpus q = corpus("q", {{{"a", 1}, {"d", 2}, {"c", 4}}});
  CHECK(cosine_distance(p, q).value == doctest::Approx(cosine_distance(q, p).value).epsilon(1e-15));
  CHECK(euclidean_distance(p, q).value == euclidean_distance(q, p).value);
}

TEST_CASE("similarity matrix") {
  const std::vector<Corpus> cs{corpus("a", {{{"x", 1}, {"y", 1}}}),
                               corpus("b", {{{"x", 1}}}),
                               corpus("c", {{{"z", 2}, {"x", 1}}})};
  const auto m = similarity_matrix(cs, Measure::Suwr);
  REQUIRE(m.size() == 3);
  CHECK(m[0][0] == 0.0);
  CHECK(m[0][1] == 0.5);
  CHECK(m[1][0] == 0.0);
}

TEST_CASE("empty inputs") {
  const Corpus e("e", {});
  const Corpus p = corpus("p", {{{"a", 1}}});
  for (Measure m : kAllMeasures) CHECK_THROWS_AS(similarity(m, e, p), Error);
}
