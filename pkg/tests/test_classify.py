import math

import numpy as np
import pytest

from rtaudit.classify import (MEDIAN, METHODS, TRAINED, UPPER_BOUND, SplitProtocol, StepClassifier, aggregate,
                              best_step_classifier, classify_dataset, classify_participant, exemplary_participants,
                              median_classifier, train_step_classifier, upper_bound)
from rtaudit.core import ClassifierOutcome, Dataset, Orientation
from rtaudit.errors import DegenerateData, EmptyInput
from rtaudit.model import bayes_accuracy, model_from_targets
from rtaudit.simulate import SimulationConfig, synthesize_dataset


def test_step_classifier_predict():
    fc = StepClassifier(2.5, Orientation.FAST_IS_CONGRUENT)
    assert fc.predict([1, 2.5, 3]).tolist() == [0, 0, 1]
    fi = StepClassifier(2.5, Orientation.FAST_IS_INCONGRUENT)
    assert fi.predict([1, 2.5, 3]).tolist() == [1, 1, 0]
    assert fc.correct([1, 3], np.array([0, 1])) == 2


@pytest.mark.parametrize('labels, threshold, orientation, correct', [
    ([0, 0, 1, 1], 2.5, Orientation.FAST_IS_CONGRUENT, 4),
    ([1, 1, 0, 0], 2.5, Orientation.FAST_IS_INCONGRUENT, 4),
    ([0, 1, 0, 1], 1.5, Orientation.FAST_IS_CONGRUENT, 3),
    ([0, 0, 0, 0], 5.0, Orientation.FAST_IS_CONGRUENT, 4),
])
def test_best_step_classifier(labels, threshold, orientation, correct):
    clf, n = best_step_classifier([1, 2, 3, 4], np.array(labels))
    assert (clf.threshold, clf.orientation, n) == (threshold, orientation, correct)


def test_best_step_classifier_ties_take_lowest_threshold():
    # tied RTs cannot be separated, every cut scores 2
    clf, n = best_step_classifier([1, 1, 2, 2], np.array([0, 1, 0, 1]))
    assert (clf.threshold, clf.orientation, n) == (0.0, Orientation.FAST_IS_CONGRUENT, 2)


def test_upper_bound_matches_brute_force(make_record):
    rng = np.random.default_rng(3)
    for i in range(200):
        r = make_record(f"p{i}", rng.integers(1, 12, rng.integers(1, 7)), rng.integers(1, 12, rng.integers(1, 7)))
        candidates = np.concatenate(([r.rt.min() - 1], r.rt))
        brute = max(StepClassifier(t, o).correct(r.rt, r.labels) for t in candidates for o in Orientation)
        out = upper_bound(r)
        assert out.accuracy == brute / len(r)
        assert out.accuracy >= median_classifier(r).accuracy


def test_best_step_classifier_on_data_thresholds():
    clf, n = best_step_classifier([1, 2, 3, 4], np.array([0, 0, 1, 1]), on_data=True)
    assert (clf.threshold, clf.orientation, n) == (2.0, Orientation.FAST_IS_CONGRUENT, 4)

    clf, n = best_step_classifier([1, 1, 2, 2], np.array([0, 1, 0, 1]), on_data=True)
    assert clf.threshold == -math.inf and n == 2

    # same decisions and counts as the midpoint scan
    rng = np.random.default_rng(5)
    for _ in range(50):
        rt = rng.integers(1, 20, 16).astype(float)
        labels = rng.integers(0, 2, 16)
        mid, n_mid = best_step_classifier(rt, labels)
        on, n_on = best_step_classifier(rt, labels, on_data=True)
        assert n_mid == n_on and mid.orientation is on.orientation
        assert on.predict(rt).tolist() == mid.predict(rt).tolist()


INCREASING_MAPS = (
    lambda x: np.exp(x / 100) + x**3,
    np.log,
    np.sqrt,
    lambda x: 3.7 * x + 11.0,
    lambda x: x**2 / 1000,
)


def test_classifiers_invariant_under_increasing_maps(make_record):
    rng = np.random.default_rng(8)
    protocol = SplitProtocol(repetitions=4, seed=3)
    for i in range(100):
        r = make_record(f"p{i}", rng.integers(200, 1500, rng.integers(2, 31)).astype(float),
                        rng.integers(200, 1500, rng.integers(2, 31)).astype(float))
        m = r.map_rt(INCREASING_MAPS[rng.integers(len(INCREASING_MAPS))])
        assert median_classifier(m).accuracy == median_classifier(r).accuracy
        assert upper_bound(m).accuracy == upper_bound(r).accuracy
        a, b = train_step_classifier(r, protocol), train_step_classifier(m, protocol)
        assert a.repetition_accuracies == b.repetition_accuracies
        assert a.accuracy == b.accuracy


def test_best_step_classifier_empty():
    with pytest.raises(DegenerateData):
        best_step_classifier([], [])


def test_median_classifier(make_record):
    out = median_classifier(make_record('p', [1, 2, 3], [4, 5, 6]))
    assert (out.accuracy, out.threshold, out.orientation) == (1.0, 3.5, Orientation.FAST_IS_CONGRUENT)
    assert out.n_trials_evaluated == 6

    # no flipping, slow congruent trials are all wrong
    assert median_classifier(make_record('p', [4, 5, 6], [1, 2, 3])).accuracy == 0.0


def test_trained_classifier_split_sizes(make_record):
    rng = np.random.default_rng(0)
    r = make_record('p', rng.normal(500, 50, 180), rng.normal(520, 50, 180))
    out = train_step_classifier(r)
    assert out.n_trials_evaluated == 180
    assert len(out.repetition_accuracies) == 10
    assert out.accuracy == pytest.approx(np.mean(out.repetition_accuracies))

    odd = make_record('q', [1, 2, 3, 4, 5], [6, 7, 8, 9, 10])
    out = train_step_classifier(odd, SplitProtocol(repetitions=3))
    assert out.n_trials_evaluated == 4
    assert len(out.repetition_accuracies) == 3


def test_trained_classifier_is_deterministic(make_record):
    rng = np.random.default_rng(1)
    r = make_record('p', rng.normal(500, 50, 40), rng.normal(520, 50, 40))
    a = train_step_classifier(r, SplitProtocol(seed=7))
    b = train_step_classifier(r, SplitProtocol(seed=7))
    c = train_step_classifier(r, SplitProtocol(seed=8))
    assert a == b
    assert a.repetition_accuracies != c.repetition_accuracies


def test_trained_classifier_needs_two_trials(make_record):
    with pytest.raises(DegenerateData):
        train_step_classifier(make_record('p', [1], [2, 3]))


def test_upper_bound_dominates_median():
    ds = synthesize_dataset(SimulationConfig(participants=20, trials_per_condition=25, delta_ms=0.0), 0)
    for r in ds:
        assert upper_bound(r).accuracy >= median_classifier(r).accuracy
        assert 0.5 <= upper_bound(r).accuracy <= 1.0


def test_aggregate():
    outs = [ClassifierOutcome(a, Orientation.FAST_IS_CONGRUENT, 10, participant_id=p)
            for a, p in ((0.5, 'a'), (0.7, 'b'), (0.6, 'c'))]
    s = aggregate(outs)
    assert s.mean_accuracy == pytest.approx(0.6)
    assert s.sd_accuracy == pytest.approx(0.1)
    assert s.sd_defined

    single = aggregate(outs[:1])
    assert (single.sd_accuracy, single.sd_defined) == (0.0, False)

    with pytest.raises(EmptyInput):
        aggregate([])

    assert exemplary_participants(s) == ('c', 'b')
    assert exemplary_participants(aggregate(outs[:2])) == ('a', 'b')


def test_classify_participant(make_record):
    res = classify_participant(make_record('p', [1, 2, 3, 4], [5, 6, 7, 8]))
    assert res.participant_id == 'p'
    assert res.median.accuracy == res.upper.accuracy == 1.0
    assert res.trained.n_trials_evaluated == 4


def test_classify_dataset_independent_of_workers(small_dataset):
    one = classify_dataset(small_dataset, workers=1)
    two = classify_dataset(small_dataset, workers=2)
    assert set(one) == set(METHODS)
    for method in METHODS:
        assert one[method].accuracies.tolist() == two[method].accuracies.tolist()
        assert one[method].mean_accuracy == two[method].mean_accuracy


def test_classify_dataset_empty():
    with pytest.raises(EmptyInput):
        classify_dataset(Dataset([]))


@pytest.mark.slow
def test_median_classifier_converges_to_bayes_accuracy():
    # 4 standard errors of a binomial proportion over 2n trials
    rng = np.random.default_rng(2024)
    n = 20000
    for family in ('normal', 'lognormal'):
        for delta in (10.0, 40.0, 80.0):
            model = model_from_targets(family, 600, delta, 150)
            cfg = SimulationConfig(family=family, base_ms=600, delta_ms=delta, sigma_ms=150,
                                   participants=2, trials_per_condition=n, seed=int(rng.integers(1 << 30)))
            ds = synthesize_dataset(cfg, 0)
            expected = bayes_accuracy(model)
            for r in ds:
                acc = median_classifier(r).accuracy
                assert abs(acc - expected) < 4 * math.sqrt(expected * (1 - expected) / (2 * n))
