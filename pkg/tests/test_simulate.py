import math

import numpy as np
import pytest

from rtaudit.classify import median_classifier
from rtaudit.core import Condition, Dataset, within_subject_sd
from rtaudit.errors import EmptyInput
from rtaudit.inference import paired_t_test, t_test_power
from rtaudit.model import bayes_accuracy
from rtaudit.simulate import (REFERENCE_SIMULATION, SimulationConfig, SweepResult, run_fallacy_experiment,
                              run_replication, sweep, synthesize_dataset)


def test_synthesize_shape_and_ids(small_config):
    ds = synthesize_dataset(small_config, 0)
    assert ds.ids == [f"sim{i:03d}" for i in range(1, 7)]
    assert all(r.counts() == (30, 30) for r in ds)
    assert all((r.rt > 0).all() for r in ds)
    assert ds.metadata['model'] == small_config.model.to_dict()


def test_synthesize_is_deterministic(small_config):
    a = synthesize_dataset(small_config, 2)
    b = synthesize_dataset(small_config, 2)
    c = synthesize_dataset(small_config, 3)
    assert list(a) == list(b)
    assert list(a) != list(c)
    assert list(synthesize_dataset(small_config.replace(seed=1), 2)) != list(a)


def test_adding_participants_keeps_existing_ones(small_config):
    few = synthesize_dataset(small_config.replace(participants=3), 0)
    many = synthesize_dataset(small_config, 0)
    assert list(few) == list(many)[:3]


def test_normal_draws_are_positive():
    cfg = SimulationConfig(family='normal', base_ms=100, delta_ms=0, sigma_ms=80, participants=5,
                           trials_per_condition=200)
    assert all((r.rt > 0).all() for r in synthesize_dataset(cfg, 0))


def test_between_subject_jitter_moves_participants():
    cfg = SimulationConfig(participants=40, trials_per_condition=50, between_subject_sd=100.0)
    means = [r.rt.mean() for r in synthesize_dataset(cfg, 0)]
    flat = [r.rt.mean() for r in synthesize_dataset(cfg.replace(between_subject_sd=0.0), 0)]
    assert np.std(means) > 2 * np.std(flat)
    assert list(synthesize_dataset(cfg, 0)) == list(synthesize_dataset(cfg, 0))


def test_synthesized_moments_match_targets():
    cfg = SimulationConfig(participants=400, trials_per_condition=180, delta_ms=40.0)
    ds = synthesize_dataset(cfg, 0)
    delta = np.mean([r.condition_rts(Condition.INCONGRUENT).mean() - r.condition_rts(Condition.CONGRUENT).mean()
                     for r in ds])
    assert delta == pytest.approx(40.0, rel=0.1)
    assert within_subject_sd(ds).mean_of_pooled == pytest.approx(146.5, rel=0.02)


def test_protocol_seeds_per_replication():
    cfg = SimulationConfig(seed=4)
    assert cfg.protocol(0) == cfg.protocol(0)
    assert cfg.protocol(0).seed != cfg.protocol(1).seed
    assert cfg.protocol(0).repetitions == cfg.repetitions


def test_expected_effect():
    assert REFERENCE_SIMULATION.expected_effect() == pytest.approx(4.4 / (146.5 * math.sqrt(2 / 180)))


def test_run_replication(small_config):
    res = run_replication(small_config, 1)
    ds = synthesize_dataset(small_config, 1)
    assert res.test == paired_t_test(ds)
    assert res.median.mean_accuracy == pytest.approx(np.mean([median_classifier(r).accuracy for r in ds]))
    assert res.upper.mean_accuracy >= res.median.mean_accuracy


def test_fallacy_experiment_independent_of_workers(small_config):
    one = run_fallacy_experiment(small_config, workers=1)
    two = run_fallacy_experiment(small_config, workers=2)
    assert one.summary() == two.summary()
    assert len(one.replications) == 3
    assert one.bayes_accuracy == bayes_accuracy(small_config.model)
    assert 0 <= one.rejection_rate <= 1


def test_sweep(small_config):
    cfg = small_config.replace(replications=2, repetitions=1)
    result = sweep(cfg, [4], [10, 20], [0.0, 50.0])
    assert isinstance(result, SweepResult)
    assert len(result.cells) == 4
    frame = result.to_frame()
    assert list(frame.columns) == list(SweepResult.COLUMNS)
    assert frame['trials_per_condition'].tolist() == [10, 10, 20, 20]

    cell = result.cell(4, 20, 50.0)
    assert cell.bayes_accuracy > result.cell(4, 20, 0.0).bayes_accuracy
    with pytest.raises(KeyError):
        result.cell(5, 20, 0.0)
    assert result.to_dict()['config']['seed'] == cfg.seed


def test_sweep_empty_grid(small_config):
    with pytest.raises(EmptyInput):
        sweep(small_config, [], [10], [0.0])


@pytest.mark.slow
def test_null_calibration():
    # 1000 replications: the rejection rate has a standard error of about 0.007
    cfg = SimulationConfig(delta_ms=0.0, participants=20, trials_per_condition=40, replications=1000,
                           repetitions=2, seed=17)
    res = run_fallacy_experiment(cfg, workers=4)
    assert abs(res.rejection_rate - 0.05) <= 0.02
    assert res.bayes_accuracy == 0.5
    assert abs(res.mean_median_accuracy - 0.5) <= 0.005
    assert abs(res.mean_trained_accuracy - 0.5) <= 0.005
    assert res.mean_upper_bound > 0.5


@pytest.mark.slow
def test_reference_cell_fallacy():
    cfg = REFERENCE_SIMULATION
    assert cfg.repetitions == 10
    res = run_fallacy_experiment(cfg, workers=4)

    assert 0.495 <= res.mean_median_accuracy <= 0.515
    assert 0.485 <= res.mean_trained_accuracy <= 0.515
    assert 0.52 <= res.mean_upper_bound <= 0.56
    assert abs(res.mean_median_accuracy - res.bayes_accuracy) <= 0.005
    assert res.mean_within_sd == pytest.approx(146.5, rel=0.01)

    # without between-subject spread the simulated cell has d = 4.4 / (146.5 sqrt(2/180)) = 0.285,
    # the oracle at the observed d_across of 0.27 sits about 0.045 lower
    oracle = t_test_power(cfg.expected_effect(), cfg.participants, cfg.alpha)
    assert res.power_oracle == oracle
    assert t_test_power(0.27, 66, 0.05) == pytest.approx(0.58, abs=0.01)
    assert oracle > t_test_power(0.27, 66, 0.05)
    # 3 standard errors of a proportion over 500 replications
    assert abs(res.rejection_rate - oracle) <= 3 * math.sqrt(oracle * (1 - oracle) / cfg.replications)


def test_more_participants_raise_mean_t_with_common_draws():
    cfg = SimulationConfig(delta_ms=20.0, participants=40, trials_per_condition=20)
    counts = (5, 10, 20, 40)
    ts, rejected = np.zeros((100, len(counts))), np.zeros((100, len(counts)), dtype=bool)
    for i in range(len(ts)):
        records = list(synthesize_dataset(cfg, i))
        for j, n in enumerate(counts):
            res = paired_t_test(Dataset(records[:n]))
            ts[i, j], rejected[i, j] = res.t, res.p < cfg.alpha

    assert (np.diff(ts.mean(axis=0)) > 0).all()
    assert (np.diff(rejected.mean(axis=0)) >= 0).all()
