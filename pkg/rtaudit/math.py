import math

import numpy as np
from scipy import special

__all__ = (
    'norm_cdf',
    'norm_ppf',
    'sample_sd',
    'pooled_sd',
    'midpoints',
    'nice_ticks',
    'Range'
)

def norm_cdf(x):
    """ standard normal cdf, Phi(x) """
    return special.ndtr(x)

def norm_ppf(p):
    """ standard normal quantile, inverse of Phi """
    return special.ndtri(p)

def sample_sd(values) -> float:
    """ unbiased (n-1) standard deviation, nan for fewer than two values """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return math.nan
    return float(np.std(values, ddof=1))

def pooled_sd(groups) -> float:
    """ square root of the df-weighted average of the group variances

    input:
        groups - iterable of 1-d arrays, each with at least two values
    """
    ss, df = 0.0, 0
    for values in groups:
        values = np.asarray(values, dtype=float)
        if values.size < 2:
            raise ValueError('pooled SD needs at least two values per group')
        ss += float(np.sum((values - values.mean())**2))
        df += values.size - 1
    return math.sqrt(ss / df)

def midpoints(values):
    """ midpoints between consecutive entries of a sorted array """
    values = np.asarray(values, dtype=float)
    return (values[:-1] + values[1:]) / 2

def nice_ticks(lo, hi, count=5):
    """ round tick positions covering [lo, hi] with roughly count steps """
    span = hi - lo
    if not span > 0:
        return [lo]

    raw = span / count
    mag = 10 ** math.floor(math.log10(raw))
    step = mag
    for m in (1, 2, 2.5, 5, 10):
        if m * mag >= raw:
            step = m * mag
            break

    first = math.ceil(lo / step) * step
    n = int(math.floor((hi - first) / step + 1e-9)) + 1
    return [round(first + i * step, 10) for i in range(n)]


class Range:
    """
        Closed interval [a,b] on the ms axis, a nan end leaves that side open
    """
    __slots__ = ('a', 'b')
    def __init__(self, a=math.nan, b=math.nan):
        self.a = math.nan if a is None else float(a)
        self.b = math.nan if b is None else float(b)

    def __repr__(self):
        return f"Range({self.a:g}, {self.b:g})"

    @property
    def min(self):
        return self.a

    @property
    def max(self):
        return self.b

    @property
    def extent(self):
        return self.b - self.a

    def includes(self, value):
        """ elementwise membership test, open ends accept everything """
        value = np.asarray(value, dtype=float)
        inside = np.ones(value.shape, dtype=bool)
        if not math.isnan(self.a):
            inside &= value >= self.a
        if not math.isnan(self.b):
            inside &= value <= self.b
        return inside

    def bound(self, values):
        """ shrink or grow to the tightest interval holding all values """
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            self.a = self.b = math.nan
        else:
            self.a, self.b = float(values.min()), float(values.max())
        return self

    def pad(self, fraction):
        """ widen both ends by a fraction of the extent """
        d = self.extent * fraction
        return Range(self.a - d, self.b + d)

    def normalize(self, value):
        """ map a -> 0 and b -> 1 """
        return (np.asarray(value, dtype=float) - self.a) / self.extent
