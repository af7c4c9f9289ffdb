""" accuracy estimates from binned or digitized RT histograms """

import io
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .core import Orientation
from .errors import EmptyHistogram, InvariantViolation, ParseError
from .ingest import decode_text, read_bytes

__all__ = (
    'HistogramPair',
    'HistogramAccuracy',
    'EQUAL_PRIORS',
    'RAW_COUNTS',
    'histogram_step_accuracy',
    'histogram_bayes_accuracy',
    'ingest_digitized',
    'emit_digitized'
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
HEADER = ('edge_ms', 'congruent', 'incongruent')

EQUAL_PRIORS = 'equal'
RAW_COUNTS = 'counts'


class HistogramPair:
    """ congruent and incongruent counts over shared bin edges

    input:
        bin_edges - n+1 strictly increasing edges (ms)
        congruent_counts, incongruent_counts - n nonnegative counts each
    """
    __slots__ = ('bin_edges', 'congruent_counts', 'incongruent_counts')

    def __init__(self, bin_edges, congruent_counts, incongruent_counts):
        edges = np.array(bin_edges, dtype=float)
        con = np.array(congruent_counts, dtype=float)
        inc = np.array(incongruent_counts, dtype=float)

        problems = []
        if con.ndim != 1 or con.size < 1 or con.shape != inc.shape:
            problems.append(f"count vectors must have the same length n >= 1 (got {con.size} and {inc.size})")
        elif edges.shape != (con.size + 1,):
            problems.append(f"expected {con.size + 1} bin edges, got {edges.size}")
        if edges.size > 1 and np.any(np.diff(edges) <= 0):
            problems.append('bin edges must be strictly increasing')
        if np.any(con < 0) or np.any(inc < 0):
            problems.append('counts must be nonnegative')
        if not (np.all(np.isfinite(edges)) and np.all(np.isfinite(con)) and np.all(np.isfinite(inc))):
            problems.append('edges and counts must be finite')
        if problems:
            raise InvariantViolation('invalid histogram pair', problems)

        for a in (edges, con, inc):
            a.flags.writeable = False
        object.__setattr__(self, 'bin_edges', edges)
        object.__setattr__(self, 'congruent_counts', con)
        object.__setattr__(self, 'incongruent_counts', inc)

    def __setattr__(self, key, value):
        raise AttributeError('HistogramPair is immutable')

    def __eq__(self, other):
        return (isinstance(other, HistogramPair)
                and np.array_equal(self.bin_edges, other.bin_edges)
                and np.array_equal(self.congruent_counts, other.congruent_counts)
                and np.array_equal(self.incongruent_counts, other.incongruent_counts))

    __hash__ = None

    def __len__(self):
        return self.congruent_counts.size

    def __repr__(self):
        return f"HistogramPair(bins={len(self)}, congruent={self.congruent_counts.sum():g}, incongruent={self.incongruent_counts.sum():g})"

    def masses(self, weighting=EQUAL_PRIORS):
        """ per-bin probability masses of both classes

        EQUAL_PRIORS gives each class a total mass of 0.5, RAW_COUNTS divides
        both by the grand total.
        """
        con, inc = self.congruent_counts, self.incongruent_counts
        if not (con.sum() > 0 and inc.sum() > 0):
            raise EmptyHistogram('both classes need a positive total count')

        if weighting == EQUAL_PRIORS:
            return 0.5 * con / con.sum(), 0.5 * inc / inc.sum()
        if weighting == RAW_COUNTS:
            total = con.sum() + inc.sum()
            return con / total, inc / total
        raise ValueError(f"unknown weighting '{weighting}', use '{EQUAL_PRIORS}' or '{RAW_COUNTS}'")


@dataclass(frozen=True)
class HistogramAccuracy:
    accuracy: float
    threshold_edge: float
    orientation: Orientation


def histogram_step_accuracy(h: HistogramPair, weighting=EQUAL_PRIORS) -> HistogramAccuracy:
    """ best step classifier with its threshold on a bin edge, both orientations """
    con, inc = h.masses(weighting)

    # cut k classifies the first k bins as fast
    con_le = np.concatenate(([0.0], np.cumsum(con)))
    inc_le = np.concatenate(([0.0], np.cumsum(inc)))
    fast_con = con_le + (inc.sum() - inc_le)
    fast_inc = inc_le + (con.sum() - con_le)

    i = int(np.argmax(fast_con))
    j = int(np.argmax(fast_inc))
    if fast_con[i] >= fast_inc[j]:
        return HistogramAccuracy(float(fast_con[i]), float(h.bin_edges[i]), Orientation.FAST_IS_CONGRUENT)
    return HistogramAccuracy(float(fast_inc[j]), float(h.bin_edges[j]), Orientation.FAST_IS_INCONGRUENT)


def histogram_bayes_accuracy(h: HistogramPair, weighting=EQUAL_PRIORS) -> float:
    """ per-bin Bayes rule, the larger class mass wins each bin """
    con, inc = h.masses(weighting)
    return float(np.maximum(con, inc).sum())


#####################################################################################################################
#
# CSV layout: header edge_ms,congruent,incongruent; the last row carries only the final edge
#
#####################################################################################################################

def _cell(value):
    return value.strip() if isinstance(value, str) else ''


def ingest_digitized(file) -> HistogramPair:
    """ read a histogram CSV (path or file object) into a validated HistogramPair """
    data, path = read_bytes(file)
    lines = decode_text(data, path).splitlines()

    # optional '# format_version: N' line before the header
    offset = 0
    while offset < len(lines) and lines[offset].lstrip().startswith('#'):
        offset += 1
    body = '\n'.join(lines[offset:])
    if not body.strip():
        raise ParseError('histogram file is empty', line=offset + 1, path=path)

    try:
        frame = pd.read_csv(io.StringIO(body), dtype=str, keep_default_na=False, skipinitialspace=True,
                            skip_blank_lines=False)
    except pd.errors.ParserError as err:
        raise ParseError(f"malformed CSV: {err}", path=path)
    columns = [c.strip() for c in frame.columns]
    if tuple(columns) != HEADER:
        raise ParseError(f"expected header '{','.join(HEADER)}', got '{','.join(columns)}'", line=offset + 1, path=path)

    rows = []
    for i, cells in enumerate(frame.itertuples(index=False)):
        cells = tuple(_cell(v) for v in cells)
        if any(cells):
            rows.append((offset + 2 + i,) + cells)
    if len(rows) < 2:
        raise ParseError('histogram needs at least one bin (two edge rows)', line=offset + 2, path=path)

    edges, con, inc = [], [], []
    for line, edge, c, n in rows[:-1]:
        try:
            edges.append(float(edge))
        except ValueError:
            raise ParseError(f"edge '{edge}' is not a number", line=line, path=path)
        try:
            con.append(float(c))
            inc.append(float(n))
        except ValueError:
            raise ParseError(f"counts '{c}', '{n}' are not numbers", line=line, path=path)

    line, edge, c, n = rows[-1]
    if c or n:
        raise ParseError('final row must leave the count cells empty', line=line, path=path)
    try:
        edges.append(float(edge))
    except ValueError:
        raise ParseError(f"edge '{edge}' is not a number", line=line, path=path)

    h = HistogramPair(edges, con, inc)
    logger.info('read histogram with %d bins from %s', len(h), path or 'stream')
    return h


def _num(value):
    value = float(value)
    return str(int(value)) if value.is_integer() and abs(value) < 1e15 else repr(value)


def emit_digitized(h: HistogramPair) -> bytes:
    """ serialize in the layout ingest_digitized reads """
    out = [f"# format_version: {FORMAT_VERSION}", ','.join(HEADER)]
    for edge, c, i in zip(h.bin_edges[:-1], h.congruent_counts, h.incongruent_counts):
        out.append(f"{_num(edge)},{_num(c)},{_num(i)}")
    out.append(f"{_num(h.bin_edges[-1])},,")
    return ('\n'.join(out) + '\n').encode('utf-8')
