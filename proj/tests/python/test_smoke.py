import math

import pytest

import stgain


def corpus(name, docs):
    return stgain.Corpus(name, [(d, stgain.Label.POSITIVE) for d in docs])


def test_similarity_measures():
    p = corpus("p", [{"a": 1, "b": 1}, {"c": 5, "d": 1}])
    q = corpus("q", [{"a": 9, "b": 1}])
    assert stgain.similarity(stgain.Measure.SUWR, p, q) == 0.5
    assert stgain.similarity(stgain.Measure.SUWR, q, p) == 0.0
    for m in (stgain.Measure.COSINE, stgain.Measure.EUCLIDEAN, stgain.Measure.JS):
        assert stgain.similarity(m, p, q) == pytest.approx(stgain.similarity(m, q, p))
        assert stgain.similarity(m, p, p) == pytest.approx(0.0, abs=1e-12)


def test_divergence_anchors():
    assert stgain.kl_divergence_dist([1, 0], [0.5, 0.5]) == pytest.approx(1.0, abs=1e-12)
    assert stgain.kl_divergence_dist([1, 0], [0, 1]) == pytest.approx(52.0, abs=1e-12)
    assert stgain.js_divergence_dist([1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-12)


def test_pmi_hand_case():
    a = stgain.centroid(corpus("a", [{"a": 1, "b": 1}]))
    b = stgain.centroid(corpus("b", [{"a": 2}]))
    v = stgain.pmi_transform(a, b)
    assert v.entries["a"] == pytest.approx(math.log(2 / 3))
    assert v.entries["b"] == pytest.approx(math.log(2))


def test_delta_indicator():
    f = stgain.SimilarityFeatures(1.05, 0.3, 1.0)
    assert stgain.delta_indicator(f, -1.0) == stgain.GainLabel.GAIN
    assert stgain.delta_indicator(f, -1.1) == stgain.GainLabel.LOSS
    with pytest.raises(ValueError):
        stgain.delta_indicator(stgain.SimilarityFeatures(1.0, 0.0, 0.0))


def test_baseline_scores():
    c = stgain.ConfusionCounts()
    for _ in range(106):
        c.add(stgain.GainLabel.GAIN, stgain.GainLabel.LOSS)
    for _ in range(1610):
        c.add(stgain.GainLabel.LOSS, stgain.GainLabel.LOSS)
    s = stgain.scores(c)
    assert round(100 * s.accuracy, 2) == 93.82
    assert round(100 * s.macro_f1, 2) == 48.41
    assert s.precision[0] == 0.0


def test_setups_and_tailored_folds():
    doms = [f"x{i:02d}" for i in range(13)]
    setups = stgain.enumerate_setups(doms, stgain.SweepMode.DOMAIN)
    assert len(setups) == 1716
    assert len(stgain.enumerate_setups(doms, stgain.SweepMode.BULK)) == 156
    assert stgain.tailored_fold_sizes(setups, 0) == (1260, 396, 60)


def test_knn_tie_is_loss():
    inst = [([0.0], stgain.GainLabel.GAIN), ([1.0], stgain.GainLabel.LOSS)]
    assert stgain.knn_predict(inst, [0.5], 1) == stgain.GainLabel.LOSS
    assert stgain.knn_predict(inst, [0.1], 1) == stgain.GainLabel.GAIN


def test_randomization_identical_systems():
    labels = [stgain.Label.POSITIVE, stgain.Label.NEGATIVE] * 5
    assert stgain.approx_randomization(labels, labels, labels, iterations=100) == 1.0
    assert stgain.exact_randomization(labels, labels, labels) == 1.0


def test_self_train_on_synthetic_domains():
    domains = stgain.generate_synthetic_domains(3, 300, 120, 0.5, 4)
    assert [d.domain_id for d in domains] == ["d00", "d01", "d02"]
    corpora = {d.domain_id: d for d in domains}
    opts = stgain.SelfTrainOptions()
    opts.ar_iterations = 50
    r = stgain.self_train(stgain.SetupTriple("d00", "d01", "d02", 1), corpora, opts)
    assert 0.0 <= r.base_f1 <= 100.0
    assert (r.gain == stgain.GainLabel.GAIN) == (r.st_f1 > r.base_f1)
    assert 0.0 < r.p_value <= 1.0
    assert '"setup_id":"d00|d01|d02"' in r.to_json()


def test_load_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("great:x #label#:positive\n")
    with pytest.raises(ValueError, match="malformed count at line 1"):
        stgain.load_corpus(str(bad), stgain.CorpusFormat.BLITZER)
