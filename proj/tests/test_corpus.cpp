#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "stgain/corpus.hpp"
#include "stgain/error.hpp"
#include "stgain/similarity.hpp"

using namespace stgain;

namespace {

Corpus parse(const std::string& text, CorpusFormat fmt = CorpusFormat::Canonical) {
  std::istringstream in(text);
  return parse_corpus(in, "t", fmt);
}

Corpus labeled(std::size_t pos, std::size_t neg) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < pos + neg; ++i) {
    docs.push_back({{{"w" + std::to_string(i), 1}, {"common", 2}},
                    i < pos ? Label::Positive : Label::Negative});
  }
  return Corpus("c", std::move(docs));
}

}  // namespace

TEST_CASE("BLITZER line maps tokens and trailing label") {
  Corpus c = parse("great:2 battery:1 #label#:positive\n", CorpusFormat::Blitzer);
  REQUIRE(c.size() == 1);
  CHECK(c.documents()[0].tokens == std::map<std::string, int>{{"great", 2}, {"battery", 1}});
  CHECK(c.documents()[0].label == Label::Positive);
}

TEST_CASE("CANONICAL line maps label and tokens") {
  Corpus c = parse("negative\tbad:1 slow:3\n");
  REQUIRE(c.size() == 1);
  CHECK(c.documents()[0].tokens == std::map<std::string, int>{{"bad", 1}, {"slow", 3}});
  CHECK(c.documents()[0].label == Label::Negative);
  CHECK(c.vocabulary() == std::set<std::string>{"bad", "slow"});
}

TEST_CASE("unlabeled CANONICAL documents and tokens containing colons") {
  Corpus c = parse("unlabeled\ta:b:2 x:1\npositive\ty:1\n");
  REQUIRE(c.size() == 2);
  CHECK_FALSE(c.documents()[0].label.has_value());
  CHECK(c.documents()[0].tokens.at("a:b") == 2);
  CHECK_FALSE(c.fully_labeled());
}

TEST_CASE("parse errors") {
  SUBCASE("malformed count reports the line") {
    try {
      parse("great:x #label#:positive\n", CorpusFormat::Blitzer);
      FAIL("expected an error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("malformed count at line 1") != std::string::npos);
    }
  }
  SUBCASE("line number counts from one") {
    try {
      parse("positive\ta:1\nnegative\tb:0\n");
      FAIL("expected an error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(parse("neutral\ta:1\n"), InputError);
  CHECK_THROWS_AS(parse("great:1 #label#:meh\n", CorpusFormat::Blitzer), InputError);
  CHECK_THROWS_AS(parse(""), InputError);
  CHECK_THROWS_AS(parse("positive a:1\n"), InputError);
}

TEST_CASE("a document may have no tokens") {
  const Corpus c = parse("positive\t\n");
  REQUIRE(c.size() == 1);
  CHECK(c.documents()[0].tokens.empty());
}

TEST_CASE("CANONICAL round trip through a file") {
  const auto dir = std::filesystem::temp_directory_path() / "stgain_test_corpus";
  std::filesystem::create_directories(dir);
  const Corpus c = parse("positive\tz:1 a:3\nunlabeled\tq:2\nnegative\tb:1 a:1\n");
  save_corpus(c, dir / "r.txt");
  const Corpus back = load_corpus(dir / "r.txt", CorpusFormat::Canonical);
  CHECK(back.domain_id() == "r");
  CHECK(back.documents() == c.documents());
  std::filesystem::remove_all(dir);
}

TEST_CASE("sample_corpus") {
  const Corpus c = labeled(60, 40);

  SUBCASE("exact size, deterministic, stratified") {
    const Corpus a = sample_corpus(c, 25, 7);
    const Corpus b = sample_corpus(c, 25, 7);
    CHECK(a.size() == 25);
    CHECK(a.documents() == b.documents());
    CHECK(a.count_label(Label::Positive) == 15);
    CHECK(a.count_label(Label::Negative) == 10);
  }
  SUBCASE("proportions stay within one document for odd sizes") {
    for (std::size_t size : {1u, 7u, 33u, 99u}) {
      const Corpus s = sample_corpus(c, size, 3);
      const double expect = 0.6 * static_cast<double>(size);
      CHECK(std::abs(static_cast<double>(s.count_label(Label::Positive)) - expect) <= 1.0);
    }
  }
  SUBCASE("sampling everything is a permutation of the source") {
    const Corpus s = sample_corpus(c, c.size(), 11, false);
    auto key = [](const Document& d) { return d.tokens.begin()->first; };
    std::multiset<std::string> a, b;
    for (const auto& d : c.documents()) a.insert(key(d));
    for (const auto& d : s.documents()) b.insert(key(d));
    CHECK(a == b);
  }
  SUBCASE("sampled vocabularies are subsets of the source") {
    for (std::uint64_t seed : {1u, 2u}) {
      const Corpus s = sample_corpus(c, 10, seed);
      CHECK(std::includes(c.vocabulary().begin(), c.vocabulary().end(),
                          s.vocabulary().begin(), s.vocabulary().end()));
    }
  }
  SUBCASE("different seeds differ") {
    CHECK_FALSE(sample_corpus(c, 20, 1).documents() == sample_corpus(c, 20, 2).documents());
  }
  CHECK_THROWS_AS(sample_corpus(c, 101, 0), Error);
  const Corpus unl = parse("unlabeled\ta:1\nunlabeled\tb:1\n");
  CHECK_THROWS_AS(sample_corpus(unl, 1, 0, true), Error);
  CHECK(sample_corpus(unl, 1, 0, false).size() == 1);
}

TEST_CASE("sample of 2500 from 8940 documents") {
  std::vector<Document> docs;
  for (int i = 0; i < 8940; ++i) {
    docs.push_back({{{"t" + std::to_string(i % 97), 1 + i % 3}},
                    i % 2 ? Label::Positive : Label::Negative});
  }
  const Corpus s = sample_corpus(Corpus("apparel", std::move(docs)), 2500, 7);
  CHECK(s.size() == 2500);
  CHECK(s.count_label(Label::Positive) == 1250);
}

TEST_CASE("centroid") {
  const Corpus c = parse("positive\ta:1 b:2\nnegative\ta:3\n");
  const CorpusVector v = centroid(c);
  CHECK(v.weighting == Weighting::RawCount);
  CHECK(v.entries == std::map<std::string, double>{{"a", 4.0}, {"b", 2.0}});
  CHECK(v.total_count == 6.0);

  const CorpusVector single = centroid(parse("positive\tx:5 y:1\n"));
  CHECK(single.entries == std::map<std::string, double>{{"x", 5.0}, {"y", 1.0}});

  SUBCASE("linear over concatenation") {
    const Corpus other = parse("positive\tb:1 c:4\n");
    const Corpus* parts[] = {&c, &other};
    const CorpusVector both = centroid(concatenate("ab", parts));
    const CorpusVector o = centroid(other);
    for (const auto& [t, x] : both.entries) {
      const double a = v.entries.count(t) ? v.entries.at(t) : 0.0;
      const double b = o.entries.count(t) ? o.entries.at(t) : 0.0;
      CHECK(x == a + b);
    }
    CHECK(both.total_count == v.total_count + o.total_count);
  }

  SUBCASE("total mass matches a re-count of the written file") {
    const Corpus big = generate_synthetic_domains(1, 300, 2500, 0.3, 5)[0];
    std::ostringstream out;
    write_canonical(out, big);
    std::istringstream in(out.str());
    std::string line;
    long long mass = 0;
    while (std::getline(in, line)) {
      std::istringstream fields(line.substr(line.find('\t') + 1));
      std::string f;
      while (fields >> f) mass += std::stoll(f.substr(f.rfind(':') + 1));
    }
    CHECK(centroid(big).total_count == static_cast<double>(mass));
  }
  CHECK_THROWS_AS(centroid(Corpus("e", {})), Error);
}

TEST_CASE("pmi_transform") {
  auto raw = [](std::map<std::string, double> e) {
    CorpusVector v;
    v.entries = std::move(e);
    for (const auto& [t, x] : v.entries) v.total_count += x;
    return v;
  };
  SUBCASE("identical one-token vectors give 0") {
    const CorpusVector p = pmi_transform(raw({{"a", 2}}), raw({{"a", 2}}));
    CHECK(p.weighting == Weighting::Pmi);
    CHECK(p.entries.at("a") == doctest::Approx(0.0));
  }
  SUBCASE("hand case") {
    // n = 4; c_a^* = 3, c_b^* = 1, c_*^v = 2
    const CorpusVector p = pmi_transform(raw({{"a", 1}, {"b", 1}}), raw({{"a", 2}}));
    CHECK(p.entries.at("a") == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-14));
    CHECK(p.entries.at("b") == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    const CorpusVector q = pmi_transform(raw({{"a", 2}}), raw({{"a", 1}, {"b", 1}}));
    CHECK(q.entries.at("b") == 0.0);
    CHECK(q.entries.at("a") == doctest::Approx(std::log(4.0 * 2 / (3.0 * 2))));
  }
  SUBCASE("self pairing is zero on the support") {
    const CorpusVector v = raw({{"a", 3}, {"b", 1}, {"c", 7}});
    for (const auto& [t, x] : pmi_transform(v, v).entries) CHECK(x == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(pmi_transform(raw({}), raw({{"a", 1}})), Error);
}

TEST_CASE("rel_freq") {
  CorpusVector v;
  v.entries = {{"a", 1}, {"b", 3}};
  v.total_count = 4;
  const CorpusVector r = rel_freq(v);
  CHECK(r.weighting == Weighting::RelFreq);
  CHECK(r.entries.at("a") == 0.25);
  CHECK(r.entries.at("b") == 0.75);

  CorpusVector one;
  one.entries = {{"a", 5}};
  one.total_count = 5;
  CHECK(rel_freq(one).entries.at("a") == 1.0);

  const CorpusVector c = centroid(generate_synthetic_domains(1, 500, 50, 0.5, 1)[0]);
  const auto& e = rel_freq(c).entries;
  const double sum = std::accumulate(e.begin(), e.end(), 0.0,
                                     [](double s, const auto& kv) { return s + kv.second; });
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(rel_freq(CorpusVector{}), Error);
}

TEST_CASE("synthetic domains") {
  SUBCASE("size contract") {
    const auto ds = generate_synthetic_domains(13, 400, 2500, 0.5, 3);
    REQUIRE(ds.size() == 13);
    for (const auto& d : ds) CHECK(d.size() == 2500);
    CHECK(ds[0].domain_id() == "d00");
    CHECK(ds[12].domain_id() == "d12");
  }
  SUBCASE("deterministic to the byte") {
    auto text = [](const Corpus& c) {
      std::ostringstream o;
      write_canonical(o, c);
      return o.str();
    };
    const auto a = generate_synthetic_domains(2, 300, 100, 0.4, 9);
    const auto b = generate_synthetic_domains(2, 300, 100, 0.4, 9);
    CHECK(text(a[0]) == text(b[0]));
    CHECK(text(a[1]) == text(b[1]));
  }
  SUBCASE("divergence knob separates domains") {
    const auto same = generate_synthetic_domains(2, 600, 200, 0.0, 4);
    const auto far = generate_synthetic_domains(2, 600, 200, 1.0, 4);
    const double js0 = js_divergence(same[0], same[1]).value;
    const double js1 = js_divergence(far[0], far[1]).value;
    CHECK(js0 < js1);
  }
  SUBCASE("labels are roughly balanced") {
    const Corpus d = generate_synthetic_domains(1, 500, 1000, 0.5, 2)[0];
    const auto pos = d.count_label(Label::Positive);
    CHECK(pos > 300);
    CHECK(pos < 700);
  }
  SUBCASE("shared pools make domains close") {
    SyntheticOptions opt;
    opt.n_domains = 3;
    opt.vocab_size = 600;
    opt.docs_per_domain = 200;
    opt.divergence = 0.8;
    opt.pool_of_domain = {0, 0, 1};
    const auto ds = generate_synthetic_domains(opt);
    CHECK(js_divergence(ds[0], ds[1]).value < js_divergence(ds[0], ds[2]).value);
  }
  CHECK_THROWS_AS(generate_synthetic_domains(0, 10, 10, 0.5, 0), Error);
}
