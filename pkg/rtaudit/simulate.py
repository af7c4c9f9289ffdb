""" Monte-Carlo engine: significant mean differences next to chance-level single-trial accuracy """

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from .classify import SplitProtocol, AccuracySummary, aggregate, median_classifier, train_step_classifier, upper_bound
from .core import Dataset, ParticipantRecord, within_subject_sd
from .errors import EmptyInput
from .inference import PairedTestResult, paired_t_test, t_test_power
from .model import Family, DistributionModel, bayes_accuracy, model_from_targets
from .params import Parameter, Parameterizable

__all__ = (
    'SimulationConfig',
    'REFERENCE_SIMULATION',
    'ReplicationResult',
    'FallacyResult',
    'SweepCell',
    'SweepResult',
    'synthesize_dataset',
    'run_replication',
    'run_fallacy_experiment',
    'sweep'
)

logger = logging.getLogger(__name__)

JITTER_STREAM = 2   # spawn-key slot after the two condition streams
MIN_BASE_MS = 1.0


class SimulationConfig(Parameterizable):
    """ synthetic experiment: model targets in ms, design size, replications and seed """
    family = Parameter(Family.LOGNORMAL, Family, doc='class-conditional RT family')
    base_ms = Parameter(600.0, float, fvalidate=lambda v: v > 0, rule='base_ms > 0',
                        doc='mean congruent RT (ms)')
    delta_ms = Parameter(4.4, float, fvalidate=math.isfinite, rule='finite',
                         doc='incongruent minus congruent mean RT (ms)')
    sigma_ms = Parameter(146.5, float, fvalidate=lambda v: v > 0, rule='sigma_ms > 0',
                         doc='within-subject trial SD (ms)')
    participants = Parameter(66, int, fvalidate=lambda v: v >= 2, rule='participants >= 2')
    trials_per_condition = Parameter(180, int, fvalidate=lambda v: v >= 2, rule='trials_per_condition >= 2')
    replications = Parameter(500, int, fvalidate=lambda v: v >= 1, rule='replications >= 1')
    seed = Parameter(0, int, fvalidate=lambda v: v >= 0, rule='seed >= 0')
    between_subject_sd = Parameter(0.0, float, fvalidate=lambda v: v >= 0, rule='between_subject_sd >= 0',
                                   doc='SD (ms) of the per-participant shift of both class means')
    alpha = Parameter(0.05, float, fvalidate=lambda v: 0 < v < 1, rule='0 < alpha < 1')
    train_fraction = Parameter(0.5, float, fvalidate=lambda v: 0 < v < 1, rule='0 < train_fraction < 1')
    repetitions = Parameter(10, int, fvalidate=lambda v: v >= 1, rule='repetitions >= 1')

    @property
    def model(self) -> DistributionModel:
        return model_from_targets(self.family, self.base_ms, self.delta_ms, self.sigma_ms)

    def participant_model(self, base_ms) -> DistributionModel:
        return model_from_targets(self.family, base_ms, self.delta_ms, self.sigma_ms)

    def protocol(self, replication_index) -> SplitProtocol:
        """ split protocol whose seed is derived from (seed, replication) """
        state = np.random.SeedSequence(self.seed, spawn_key=(replication_index,)).generate_state(1)
        return SplitProtocol(train_fraction=self.train_fraction, repetitions=self.repetitions, seed=int(state[0]))

    def expected_effect(self) -> float:
        """ standardized effect of the paired test, delta / (sigma * sqrt(2 / trials)) """
        return self.delta_ms / (self.sigma_ms * math.sqrt(2 / self.trials_per_condition))


REFERENCE_SIMULATION = SimulationConfig()


def _rng(cfg, replication, participant, stream):
    return np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(replication, participant, stream)))


def _draw(model, condition_code, size, rng):
    mu = model.mu2 if condition_code else model.mu1
    if model.family is Family.LOGNORMAL:
        return rng.lognormal(mu, model.sigma, size)

    # normal RTs are redrawn until positive, the bias is negligible for realistic targets
    x = rng.normal(mu, model.sigma, size)
    bad = x <= 0
    while bad.any():
        x[bad] = rng.normal(mu, model.sigma, int(bad.sum()))
        bad = x <= 0
    return x


def synthesize_dataset(cfg: SimulationConfig, replication_index=0) -> Dataset:
    """ draw one synthetic dataset, deterministic given (cfg.seed, replication_index)

    Streams are derived hierarchically (seed -> replication -> participant ->
    condition), so any participant can be regenerated on its own and adding
    participants leaves the existing ones unchanged.
    """
    n = cfg.trials_per_condition
    labels = np.repeat(np.array([0, 1], dtype=np.int8), n)

    records = []
    for i in range(cfg.participants):
        model = cfg.model
        if cfg.between_subject_sd > 0:
            shift = _rng(cfg, replication_index, i, JITTER_STREAM).normal(0.0, cfg.between_subject_sd)
            model = cfg.participant_model(max(cfg.base_ms + shift, MIN_BASE_MS))

        rt = np.concatenate([_draw(model, c, n, _rng(cfg, replication_index, i, c)) for c in (0, 1)])
        records.append(ParticipantRecord(f"sim{i + 1:03d}", rt, labels))

    return Dataset(records, {
        'source': 'simulation',
        'units': 'ms',
        'replication': replication_index,
        'seed': cfg.seed,
        'model': cfg.model.to_dict()
    })


#####################################################################################################################
#
# Fallacy experiment
#
#####################################################################################################################

@dataclass(frozen=True)
class ReplicationResult:
    replication: int
    test: PairedTestResult
    median: AccuracySummary
    trained: AccuracySummary
    upper: AccuracySummary
    within_sd: float


def run_replication(cfg: SimulationConfig, replication_index) -> ReplicationResult:
    """ synthesize one dataset and run the t-test and all three classifiers on it """
    ds = synthesize_dataset(cfg, replication_index)
    protocol = cfg.protocol(replication_index)
    logger.debug('replication %d: %d participants', replication_index, len(ds))
    return ReplicationResult(
        replication_index,
        paired_t_test(ds),
        aggregate(median_classifier(r) for r in ds),
        aggregate(train_step_classifier(r, protocol) for r in ds),
        aggregate(upper_bound(r) for r in ds),
        within_subject_sd(ds).mean_of_pooled)


@dataclass(frozen=True)
class FallacyResult:
    config: SimulationConfig
    replications: tuple
    rejection_rate: float
    mean_t: float
    mean_abs_t: float
    mean_median_accuracy: float
    mean_trained_accuracy: float
    mean_upper_bound: float
    median_accuracy_se: float
    mean_within_sd: float
    bayes_accuracy: float
    power_oracle: float

    def summary(self):
        """ aggregate numbers without the per-replication detail """
        return {
            'participants': self.config.participants,
            'trials_per_condition': self.config.trials_per_condition,
            'delta_ms': self.config.delta_ms,
            'replications': len(self.replications),
            'rejection_rate': self.rejection_rate,
            'power_oracle': self.power_oracle,
            'mean_t': self.mean_t,
            'mean_abs_t': self.mean_abs_t,
            'bayes_accuracy': self.bayes_accuracy,
            'mean_median_accuracy': self.mean_median_accuracy,
            'median_accuracy_se': self.median_accuracy_se,
            'mean_trained_accuracy': self.mean_trained_accuracy,
            'mean_upper_bound': self.mean_upper_bound,
            'mean_within_sd_ms': self.mean_within_sd
        }


def run_fallacy_experiment(cfg: SimulationConfig = REFERENCE_SIMULATION, workers=1) -> FallacyResult:
    """ repeat the synthesize / test / classify cycle cfg.replications times and aggregate

    Results are collected in replication order, so they do not depend on the
    number of workers.
    """
    logger.info('running %d replications (%d participants x %d trials, delta %.3g ms)',
                cfg.replications, cfg.participants, cfg.trials_per_condition, cfg.delta_ms)

    results = tuple(Parallel(n_jobs=max(1, workers))(delayed(run_replication)(cfg, i) for i in range(cfg.replications)))

    t = np.array([r.test.t for r in results])
    med = np.array([r.median.mean_accuracy for r in results])
    se = float(med.std(ddof=1) / math.sqrt(med.size)) if med.size > 1 else 0.0

    return FallacyResult(
        config=cfg,
        replications=results,
        rejection_rate=float(np.mean([r.test.rejects(cfg.alpha) for r in results])),
        mean_t=float(t.mean()),
        mean_abs_t=float(np.abs(t).mean()),
        mean_median_accuracy=float(med.mean()),
        mean_trained_accuracy=float(np.mean([r.trained.mean_accuracy for r in results])),
        mean_upper_bound=float(np.mean([r.upper.mean_accuracy for r in results])),
        median_accuracy_se=se,
        mean_within_sd=float(np.mean([r.within_sd for r in results])),
        bayes_accuracy=bayes_accuracy(cfg.model),
        power_oracle=t_test_power(cfg.expected_effect(), cfg.participants, cfg.alpha))


#####################################################################################################################
#
# Sweep
#
#####################################################################################################################

@dataclass(frozen=True)
class SweepCell:
    participants: int
    trials_per_condition: int
    delta_ms: float
    rejection_rate: float
    power_oracle: float
    bayes_accuracy: float
    mean_median_accuracy: float
    mean_trained_accuracy: float
    mean_upper_bound: float
    mean_t: float


@dataclass(frozen=True)
class SweepResult:
    config: SimulationConfig
    cells: tuple

    COLUMNS = ('participants', 'trials_per_condition', 'delta_ms', 'rejection_rate', 'power_oracle',
               'bayes_accuracy', 'mean_median_accuracy', 'mean_trained_accuracy', 'mean_upper_bound', 'mean_t')

    def cell(self, participants, trials_per_condition, delta_ms):
        for c in self.cells:
            if (c.participants, c.trials_per_condition, c.delta_ms) == (participants, trials_per_condition, delta_ms):
                return c
        raise KeyError(f"no sweep cell ({participants}, {trials_per_condition}, {delta_ms})")

    def to_frame(self):
        return pd.DataFrame([[getattr(c, k) for k in self.COLUMNS] for c in self.cells], columns=list(self.COLUMNS))

    def to_dict(self):
        return {
            'config': self.config.as_dict(),
            'cells': [{k: getattr(c, k) for k in self.COLUMNS} for c in self.cells]
        }


def sweep(base_cfg: SimulationConfig, participant_grid, trial_grid, delta_grid, workers=1) -> SweepResult:
    """ run the fallacy experiment on every (participants, trials, delta) cell

    All cells share base_cfg.seed, so neighbouring cells use common random numbers.
    """
    participant_grid, trial_grid, delta_grid = list(participant_grid), list(trial_grid), list(delta_grid)
    if not (participant_grid and trial_grid and delta_grid):
        raise EmptyInput('sweep grids must be non-empty')

    cells = []
    for p, n, d in itertools.product(participant_grid, trial_grid, delta_grid):
        cfg = base_cfg.replace(participants=int(p), trials_per_condition=int(n), delta_ms=float(d))
        res = run_fallacy_experiment(cfg, workers)
        cells.append(SweepCell(
            cfg.participants, cfg.trials_per_condition, cfg.delta_ms,
            res.rejection_rate, res.power_oracle, res.bayes_accuracy,
            res.mean_median_accuracy, res.mean_trained_accuracy, res.mean_upper_bound, res.mean_t))

    return SweepResult(base_cfg, tuple(cells))
