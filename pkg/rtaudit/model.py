""" parametric RT models: normal and lognormal class-conditionals with a shared scale """

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats

from .core import Condition, ParticipantRecord
from .errors import DegenerateData, DegenerateModel, DomainError
from .math import norm_cdf, pooled_sd

__all__ = (
    'Family',
    'DistributionModel',
    'MixtureMarginal',
    'class_conditional_pdf',
    'marginal_cdf',
    'optimal_threshold',
    'bayes_accuracy',
    'fit_model',
    'class_moments',
    'model_from_targets'
)


class Family(enum.Enum):
    NORMAL = 'normal'
    LOGNORMAL = 'lognormal'


@dataclass(frozen=True)
class DistributionModel:
    """ two-class RT model with equal priors

    For NORMAL, mu1/mu2/sigma are in ms. For LOGNORMAL they live on the
    log scale and are unitless. Class 1 is congruent, class 2 incongruent.
    """
    family: Family
    mu1: float
    mu2: float
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, 'family', Family(self.family))
        for name in ('mu1', 'mu2', 'sigma'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"model parameter '{name}' must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not self.sigma > 0:
            raise ValueError(f"model scale sigma must be positive, got {self.sigma}")

    @property
    def priors(self):
        return (0.5, 0.5)

    def location(self, condition: Condition):
        return self.mu1 if condition is Condition.CONGRUENT else self.mu2

    def frozen(self, condition: Condition):
        """ scipy frozen distribution of one class-conditional (in ms) """
        mu = self.location(condition)
        if self.family is Family.NORMAL:
            return stats.norm(loc=mu, scale=self.sigma)
        return stats.lognorm(s=self.sigma, scale=math.exp(mu))

    def to_dict(self):
        return {'family': self.family.value, 'mu1': self.mu1, 'mu2': self.mu2, 'sigma': self.sigma}


def _check_support(model, x):
    x = np.asarray(x, dtype=float)
    if model.family is Family.LOGNORMAL and np.any(x <= 0):
        raise DomainError('lognormal densities are defined for x > 0 only')
    return x


def class_conditional_pdf(model: DistributionModel, condition: Condition, x):
    """ density of one class at x (scalar or array) """
    x = _check_support(model, x)
    y = model.frozen(condition).pdf(x)
    return float(y) if y.ndim == 0 else y


def _class_cdf(model, condition, x):
    mu = model.location(condition)
    if model.family is Family.LOGNORMAL:
        with np.errstate(divide='ignore'):
            z = (np.log(np.maximum(x, 0.0)) - mu) / model.sigma
    else:
        z = (x - mu) / model.sigma
    return norm_cdf(z)


class MixtureMarginal:
    """ equal-weight mixture of both class-conditionals, the marginal distribution of an RT """
    __slots__ = ('model',)

    def __init__(self, model: DistributionModel):
        self.model = model

    def pdf(self, x):
        x = _check_support(self.model, x)
        return 0.5 * (self.model.frozen(Condition.CONGRUENT).pdf(x)
                      + self.model.frozen(Condition.INCONGRUENT).pdf(x))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.model.family is Family.LOGNORMAL:
            x = np.where(x > 0, x, 0.0)
        y = 0.5 * (_class_cdf(self.model, Condition.CONGRUENT, x)
                   + _class_cdf(self.model, Condition.INCONGRUENT, x))
        return float(y) if np.ndim(y) == 0 else y

    def quantile(self, q):
        """ inverse cdf by bracketed root search """
        if not 0 < q < 1:
            raise DomainError(f"quantile level must lie in (0, 1), got {q}")

        m = self.model
        lo = min(m.mu1, m.mu2) - 40 * m.sigma
        hi = max(m.mu1, m.mu2) + 40 * m.sigma
        if m.family is Family.NORMAL:
            return optimize.brentq(lambda x: self.cdf(x) - q, lo, hi, xtol=1e-12)

        # search on the log scale, cdf is monotone there as well
        z = optimize.brentq(lambda u: self.cdf(math.exp(u)) - q, lo, hi, xtol=1e-14)
        return math.exp(z)


def marginal_cdf(model: DistributionModel, x):
    """ cdf of the equal-prior mixture, 0.5*(F1(x) + F2(x)) """
    return MixtureMarginal(model).cdf(x)


def optimal_threshold(model: DistributionModel) -> float:
    """ RT where both class-conditional densities intersect (ms)

    The normal densities meet at (mu1+mu2)/2, the lognormal ones at
    exp((mu1+mu2)/2). In both cases this is the median of the marginal.
    Raises DegenerateModel carrying the common location when mu1 == mu2.
    """
    mid = (model.mu1 + model.mu2) / 2
    t = mid if model.family is Family.NORMAL else math.exp(mid)
    if model.mu1 == model.mu2:
        raise DegenerateModel('class locations coincide, every threshold is equally good', threshold=t)
    return t


def bayes_accuracy(model: DistributionModel) -> float:
    """ accuracy of the Bayes classifier, Phi(|mu2 - mu1| / 2 sigma) on the model's own scale """
    return float(norm_cdf(abs(model.mu2 - model.mu1) / (2 * model.sigma)))


def fit_model(record: ParticipantRecord, family) -> DistributionModel:
    """ method-of-moments fit: class means and pooled SD of the (log-)RTs """
    family = Family(family)
    record.require(2)

    rt = record.rt
    if family is Family.LOGNORMAL:
        if np.any(rt <= 0):
            raise DomainError(f"participant '{record.participant_id}' has non-positive RTs, cannot fit a lognormal model")
        rt = np.log(rt)

    con = rt[record.labels == 0]
    inc = rt[record.labels == 1]
    sigma = pooled_sd([con, inc])
    if not sigma > 0:
        raise DegenerateData(f"participant '{record.participant_id}' has zero within-condition spread")

    return DistributionModel(family, float(con.mean()), float(inc.mean()), sigma)


def class_moments(model: DistributionModel):
    """ arithmetic ((mean1, sd1), (mean2, sd2)) of both classes in ms """
    if model.family is Family.NORMAL:
        return (model.mu1, model.sigma), (model.mu2, model.sigma)

    k = math.sqrt(math.expm1(model.sigma**2))
    out = []
    for mu in (model.mu1, model.mu2):
        mean = math.exp(mu + model.sigma**2 / 2)
        out.append((mean, mean * k))
    return tuple(out)


def model_from_targets(family, base_ms, delta_ms, sigma_ms) -> DistributionModel:
    """ model whose class means are base_ms and base_ms + delta_ms with within-class SD sigma_ms

    input:
        family - NORMAL uses the targets directly, LOGNORMAL matches moments on the log scale
        base_ms - arithmetic mean RT of the congruent class
        delta_ms - incongruent minus congruent mean
        sigma_ms - pooled within-class SD
    """
    family = Family(family)
    m1, m2 = float(base_ms), float(base_ms) + float(delta_ms)
    if sigma_ms <= 0:
        raise DomainError(f"within-class SD must be positive, got {sigma_ms}")

    if family is Family.NORMAL:
        return DistributionModel(family, m1, m2, float(sigma_ms))

    if m1 <= 0 or m2 <= 0:
        raise DomainError(f"lognormal class means must be positive, got {m1} and {m2}")

    # shared sigma so that the pooled variance of both classes equals sigma_ms**2
    s2 = math.log1p(sigma_ms**2 / ((m1**2 + m2**2) / 2))
    return DistributionModel(family, math.log(m1) - s2 / 2, math.log(m2) - s2 / 2, math.sqrt(s2))
