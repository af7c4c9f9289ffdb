""" conventional inferential statistics the classification accuracies are contrasted with """

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .classify import AccuracySummary
from .core import Dataset, summarize_participant, within_subject_sd
from .errors import DegenerateData, DomainError
from .math import norm_cdf, norm_ppf, sample_sd

__all__ = (
    'PairedTestResult',
    'EffectSizeLedger',
    'one_sample_t_test',
    'paired_t_test',
    'predict_sem',
    'effect_sizes',
    'd_value_test',
    'accuracy_vs_chance_test',
    't_test_power',
    'dprime_from_accuracy',
    'accuracy_from_dprime'
)


@dataclass(frozen=True)
class PairedTestResult:
    """ two-sided one-sample / paired t-test

    mean_diff and sem_diff are in the unit of the tested values (ms for RT
    differences, accuracy fraction for chance tests).
    """
    t: float
    df: int
    p: float
    mean_diff: float
    sem_diff: float
    degenerate: bool = False

    def rejects(self, alpha=0.05):
        return self.p < alpha

    def to_dict(self):
        return {
            't': _finite_or_str(self.t),
            'df': self.df,
            'p': self.p,
            'mean_diff': self.mean_diff,
            'sem_diff': self.sem_diff,
            'degenerate': self.degenerate
        }


def _finite_or_str(value):
    return value if math.isfinite(value) else ('inf' if value > 0 else '-inf')


def one_sample_t_test(values, popmean=0.0) -> PairedTestResult:
    """ two-sided t-test of the mean of values against popmean

    A zero spread yields a degenerate result instead of an exception:
    t = +-inf with p = 0 when the mean differs from popmean, t = 0 with p = 1
    when it does not.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < 2:
        raise DegenerateData(f"t-test needs at least two values, got {n}")

    diff = float(values.mean()) - popmean
    sd = sample_sd(values)
    sem = sd / math.sqrt(n)
    df = n - 1

    if sd == 0:
        if diff == 0:
            return PairedTestResult(0.0, df, 1.0, diff, 0.0, degenerate=True)
        return PairedTestResult(math.copysign(math.inf, diff), df, 0.0, diff, 0.0, degenerate=True)

    t = diff / sem
    p = float(min(1.0, 2 * stats.t.sf(abs(t), df)))
    return PairedTestResult(float(t), df, p, diff, sem)


def paired_t_test(ds: Dataset) -> PairedTestResult:
    """ t-test on the per-participant mean differences, incongruent minus congruent """
    if len(ds) < 2:
        raise DegenerateData(f"paired t-test needs at least two participants, got {len(ds)}")

    diffs = []
    for record in ds:
        record.require(1)
        diffs.append(record.rt[record.labels == 1].mean() - record.rt[record.labels == 0].mean())
    return one_sample_t_test(diffs, 0.0)


def predict_sem(within_sd, trials_per_condition, participants) -> float:
    """ rough SEM of the condition difference, within_sd * sqrt(2) / sqrt(trials * participants) """
    for name, value in (('within_sd', within_sd), ('trials_per_condition', trials_per_condition),
                        ('participants', participants)):
        if not value > 0:
            raise DomainError(f"'{name}' must be positive, got {value}")
    return within_sd * math.sqrt(2) / math.sqrt(trials_per_condition * participants)


@dataclass(frozen=True)
class EffectSizeLedger:
    """ per-trial and across-participant standardized effects

    input:
        per_participant_d - (participant_id, d_i) pairs, d_i = mean difference / pooled trial SD
        d_across - mean(d_i) / SD(d_i)
        snr - mean of d_i, the per-trial signal-to-noise ratio
        snr_ratio - mean difference / mean within-subject SD
    """
    per_participant_d: tuple
    d_across: float
    d_across_defined: bool
    snr: float
    snr_ratio: float
    mean_diff: float
    within_sd_mean: float
    within_sd_grand: float

    @property
    def d_values(self):
        return np.array([d for _, d in self.per_participant_d])

    def to_dict(self):
        return {
            'per_participant_d': [{'participant_id': p, 'd': d} for p, d in self.per_participant_d],
            'd_across': _finite_or_str(self.d_across),
            'd_across_defined': self.d_across_defined,
            'd_across_formula': 'mean(d_i) / sd(d_i)',
            'snr': self.snr,
            'snr_ratio': self.snr_ratio,
            'mean_diff_ms': self.mean_diff,
            'within_sd_mean_of_participants_ms': self.within_sd_mean,
            'within_sd_grand_pooled_ms': self.within_sd_grand
        }


def effect_sizes(ds: Dataset) -> EffectSizeLedger:
    """ Cohen's d per participant, d_across over participants and the per-trial SNR """
    summaries = [summarize_participant(r) for r in ds]
    if not summaries:
        raise DegenerateData('dataset has no participants')

    d = []
    for s in summaries:
        if not s.pooled_sd > 0:
            raise DegenerateData(f"participant '{s.participant_id}' has zero pooled SD")
        d.append(s.mean_diff / s.pooled_sd)
    d = np.array(d)

    sd_d = sample_sd(d)
    mean_d = float(d.mean())
    if math.isnan(sd_d) or sd_d == 0:
        d_across = 0.0 if mean_d == 0 else math.copysign(math.inf, mean_d)
        defined = False
    else:
        d_across = mean_d / sd_d
        defined = True

    within = within_subject_sd(ds)
    mean_diff = float(np.mean([s.mean_diff for s in summaries]))

    return EffectSizeLedger(
        per_participant_d=tuple((s.participant_id, float(v)) for s, v in zip(summaries, d)),
        d_across=d_across,
        d_across_defined=defined,
        snr=mean_d,
        snr_ratio=mean_diff / within.mean_of_pooled,
        mean_diff=mean_diff,
        within_sd_mean=within.mean_of_pooled,
        within_sd_grand=within.grand_pooled)


def d_value_test(ledger: EffectSizeLedger) -> PairedTestResult:
    """ t-test of the per-participant d_i against zero """
    return one_sample_t_test(ledger.d_values, 0.0)


def accuracy_vs_chance_test(summary: AccuracySummary) -> PairedTestResult:
    """ one-sample t-test of per-participant accuracies against 0.5 """
    return one_sample_t_test(summary.accuracies, 0.5)


def t_test_power(effect_d, n, alpha=0.05) -> float:
    """ power of a two-sided one-sample t-test with n observations at standardized effect effect_d """
    if n < 2:
        raise DomainError(f"power needs at least two observations, got {n}")
    df = n - 1
    crit = stats.t.ppf(1 - alpha / 2, df)
    nc = effect_d * math.sqrt(n)
    return float(stats.nct.sf(crit, df, nc) + stats.nct.cdf(-crit, df, nc))


def dprime_from_accuracy(accuracy) -> float:
    """ equal-variance signal-detection d' of an unbiased observer, 2 * Phi^-1(accuracy) """
    if not 0 < accuracy < 1:
        raise DomainError(f"accuracy must lie in (0, 1), got {accuracy}")
    return float(2 * norm_ppf(accuracy))


def accuracy_from_dprime(dprime) -> float:
    return float(norm_cdf(dprime / 2))
