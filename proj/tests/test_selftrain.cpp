#include <doctest.h>

#include <set>

#include "stgain/error.hpp"
#include "stgain/selftrain.hpp"

using namespace stgain;

namespace {

std::map<std::string, Corpus> by_id(const std::vector<Corpus>& cs) {
  std::map<std::string, Corpus> out;
  for (const auto& c : cs) out.emplace(c.domain_id(), c);
  return out;
}

std::vector<std::string> names(int d) {
  std::vector<std::string> out;
  for (int i = 0; i < d; ++i) out.push_back("dom" + std::to_string(100 + i));
  return out;
}

}  // namespace

TEST_CASE("enumerate_setups counts") {
  CHECK(enumerate_setups(names(13), SweepMode::Domain).size() == 1716);
  CHECK(enumerate_setups(names(13), SweepMode::Bulk).size() == 156);
  CHECK(enumerate_setups(names(3), SweepMode::Domain).size() == 6);
  CHECK_THROWS_AS(enumerate_setups(names(2), SweepMode::Domain), Error);
  CHECK_THROWS_AS(enumerate_setups(names(2), SweepMode::Bulk), Error);
  CHECK_THROWS_AS(enumerate_setups({"a", "b", "a"}, SweepMode::Domain), Error);
}

TEST_CASE("enumerate_setups order and content") {
  const auto s = enumerate_setups({"c", "a", "b"}, SweepMode::Domain, 5);
  REQUIRE(s.size() == 6);
  CHECK(s[0].id() == "a|b|c");
  CHECK(s[1].id() == "a|c|b");
  CHECK(s[5].id() == "c|b|a");
  std::set<std::string> ids;
  for (const auto& t : s) {
    CHECK(t.seed == 5);
    CHECK(t.train != t.test);
    CHECK(t.extra != t.train);
    CHECK(t.extra != t.test);
    ids.insert(t.id());
  }
  CHECK(ids.size() == 6);
  const auto b = enumerate_setups({"c", "a", "b"}, SweepMode::Bulk);
  CHECK(b[0].id() == "a|b|BULK");
  CHECK(b[0].bulk());
}

TEST_CASE("gain rule is strict") {
  CHECK(gain_label(50.0, 50.0) == GainLabel::Loss);
  CHECK(gain_label(50.0, 50.0000001) == GainLabel::Gain);
  CHECK(gain_label(50.0, 49.0) == GainLabel::Loss);
}

TEST_CASE("run_baseline on its own training data") {
  const Corpus c = generate_synthetic_domains(1, 1000, 2500, 0.5, 21)[0];
  const LabelingScores s = run_baseline(c, c);
  CHECK(s.accuracy >= 95.0);
  CHECK(s.macro_f1 >= 95.0);
}

TEST_CASE("labeling_scores of a one-class labeler on balanced data") {
  const std::vector<Label> gold{Label::Positive, Label::Negative, Label::Positive, Label::Negative};
  const std::vector<Label> pred(4, Label::Negative);
  const LabelingScores s = labeling_scores(gold, pred);
  CHECK(s.accuracy == 50.0);
  CHECK(s.macro_f1 == doctest::Approx(100.0 / 3.0));
}

TEST_CASE("run_baseline requires a labeled test corpus") {
  const Corpus train = generate_synthetic_domains(1, 200, 60, 0.5, 2)[0];
  std::vector<Document> docs = train.documents();
  docs[3].label.reset();
  CHECK_THROWS_AS(run_baseline(train, Corpus("u", docs)), Error);
}

TEST_CASE("self_train with extra identical to train is not a gain") {
  const auto ds = generate_synthetic_domains(2, 400, 300, 0.3, 4);
  // The training data is learned perfectly, so its pseudo-labels match gold.
  REQUIRE(run_baseline(ds[0], ds[0]).accuracy == 100.0);
  const SetupTriple s{"d00", "d01", "copy", 9};
  const SelfTrainResult r = self_train(s, ds[0], ds[1], ds[0]);
  CHECK(r.st_f1 == r.base_f1);
  CHECK(r.st_acc == r.base_acc);
  CHECK(r.gain == GainLabel::Loss);
  REQUIRE(r.pseudo_label_acc.has_value());
  CHECK(*r.pseudo_label_acc == 100.0);
  REQUIRE(r.p_value.has_value());
  CHECK(*r.p_value == 1.0);
}

TEST_CASE("self_train result contract") {
  const auto corpora = by_id(generate_synthetic_domains(4, 400, 200, 0.5, 6));
  const SetupTriple s{"d00", "d01", "d02", 3};
  const SelfTrainResult a = self_train(s, corpora);
  const SelfTrainResult b = self_train(s, corpora);
  CHECK(a.setup == s);
  CHECK(a.base_f1 == b.base_f1);
  CHECK(a.st_f1 == b.st_f1);
  CHECK(a.p_value == b.p_value);
  for (double v : {a.base_f1, a.st_f1, a.base_acc, a.st_acc}) {
    CHECK(v >= 0.0);
    CHECK(v <= 100.0);
  }
  CHECK((a.gain == GainLabel::Gain) == (a.st_f1 > a.base_f1));
  CHECK(*a.p_value > 0.0);
  CHECK(*a.p_value <= 1.0);

  SUBCASE("base scores depend only on the pair") {
    const SelfTrainResult c = self_train({"d00", "d01", "d03", 3}, corpora);
    CHECK(c.base_f1 == a.base_f1);
    CHECK(c.base_acc == a.base_acc);
  }
  SUBCASE("a precomputed base run gives the same result") {
    LinearHyperparams hp;
    hp.seed = 3;
    const BaseRun base = run_base(corpora.at("d00"), corpora.at("d01"), hp);
    const SelfTrainResult c = self_train(s, corpora.at("d00"), corpora.at("d01"),
                                         corpora.at("d02"), base, {});
    CHECK(c.st_f1 == a.st_f1);
    CHECK(c.base_f1 == a.base_f1);
  }
  SUBCASE("skipping the significance test") {
    SelfTrainOptions opt;
    opt.ar_iterations = 0;
    CHECK_FALSE(self_train(s, corpora, opt).p_value.has_value());
  }
}

TEST_CASE("BULK extra data") {
  const auto corpora = by_id(generate_synthetic_domains(4, 300, 80, 0.5, 1));
  const Corpus bulk = bulk_corpus(corpora, "d01", "d03");
  CHECK(bulk.domain_id() == "BULK");
  CHECK(bulk.size() == corpora.at("d00").size() + corpora.at("d02").size());
  CHECK(bulk.documents().front() == corpora.at("d00").documents().front());
  CHECK(bulk.documents().back() == corpora.at("d02").documents().back());
  const SelfTrainResult r = self_train({"d01", "d03", "BULK", 0}, corpora);
  CHECK(r.setup.bulk());
}

TEST_CASE("self_train setup errors") {
  const auto corpora = by_id(generate_synthetic_domains(3, 200, 40, 0.5, 1));
  CHECK_THROWS_AS(self_train({"d00", "d01", "d00", 0}, corpora), Error);
  CHECK_THROWS_AS(self_train({"d00", "d00", "d01", 0}, corpora), Error);
  CHECK_THROWS_AS(self_train({"d00", "d01", "zz", 0}, corpora), Error);
}
