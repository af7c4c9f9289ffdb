""" distribution figures: single-trial RT distributions vs. distributions of condition means """

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import Condition, Dataset, ParticipantRecord, summarize_participant
from .errors import DegenerateData, DegenerateModel
from .figure import Figure
from .ingest import FORMAT_VERSION
from .inference import paired_t_test
from .math import Range, nice_ticks
from .model import DistributionModel, Family, MixtureMarginal, class_conditional_pdf, fit_model, optimal_threshold
from .shape import Curve, HLine, RectWH, VLine

__all__ = (
    'TRIAL_DISTRIBUTIONS',
    'MEAN_SEM_DISTRIBUTIONS',
    'STYLES',
    'MeanSemPair',
    'emit_distribution_plot'
)

logger = logging.getLogger(__name__)

TRIAL_DISTRIBUTIONS = 'trial_distributions'
MEAN_SEM_DISTRIBUTIONS = 'mean_sem_distributions'
STYLES = (TRIAL_DISTRIBUTIONS, MEAN_SEM_DISTRIBUTIONS)

WIDTH, HEIGHT = 160.0, 90.0     # plot area in figure units
SAMPLES = 241
MAX_BINS = 40


@dataclass(frozen=True)
class MeanSemPair:
    """ grand condition means (ms) with the SEM of their difference """
    congruent_mean: float
    incongruent_mean: float
    sem: float

    @classmethod
    def from_dataset(cls, ds: Dataset):
        test = paired_t_test(ds)
        con = np.mean([r.condition_rts(Condition.CONGRUENT).mean() for r in ds])
        inc = np.mean([r.condition_rts(Condition.INCONGRUENT).mean() for r in ds])
        return cls(float(con), float(inc), test.sem_diff)


class _Axes:
    """ maps data coordinates (ms, density) into the plot area of a figure """
    def __init__(self, figure, xrange: Range, ymax):
        self.figure = figure
        self.xrange = xrange
        self.ymax = ymax

    def x(self, value):
        return self.xrange.normalize(value) * WIDTH

    def y(self, value):
        return np.asarray(value, dtype=float) / self.ymax * HEIGHT

    def curve(self, layer, xs, ys):
        self.figure.insert(layer, Curve(self.x(xs), self.y(ys)))

    def bars(self, layer, edges, heights):
        for lo, hi, h in zip(edges[:-1], edges[1:], heights):
            if h > 0:
                x0 = float(self.x(lo))
                self.figure.insert(layer, RectWH((x0, 0.0), float(self.x(hi)) - x0, float(self.y(h))))

    def marker(self, value, text):
        x = float(self.x(value))
        self.figure.insert('Marker', VLine(x, 0.0, HEIGHT, t=0.3))
        self.figure.label('Text', text, (x, HEIGHT + 1.5), anchor='s')

    def frame(self, title, xlabel):
        f = self.figure
        f.insert('Axis', HLine(0.0, WIDTH, 0.0, t=0.4))
        f.insert('Axis', VLine(0.0, 0.0, HEIGHT, t=0.4))
        for tick in nice_ticks(self.xrange.min, self.xrange.max, 6):
            x = float(self.x(tick))
            f.insert('Axis', VLine(x, -1.5, 0.0, t=0.3))
            f.label('Text', f"{tick:g}", (x, -2.5), anchor='n')
        f.label('Text', xlabel, (WIDTH / 2, -9.0), anchor='n')
        f.label('Text', 'density', (-2.0, HEIGHT), anchor='e')
        f.label('TextTitle', title, (WIDTH / 2, HEIGHT + 9.0), anchor='s')

        # legend, dashed/solid as in the curves
        for i, (layer, text) in enumerate((('Congruent', 'congruent'), ('Incongruent', 'incongruent'))):
            y = HEIGHT - 4.0 - 6.0 * i
            f.insert(layer, HLine(WIDTH - 40.0, WIDTH - 30.0, y, t=1.5))
            f.label('Text', text, (WIDTH - 28.0, y), anchor='w')


def _grid(xrange: Range, positive):
    lo = xrange.min
    if positive:
        lo = max(lo, xrange.extent * 1e-4)
    return np.linspace(lo, xrange.max, SAMPLES)


def _bin_edges(rt):
    edges = np.histogram_bin_edges(rt, bins='auto')
    if edges.size - 1 > MAX_BINS:
        edges = np.linspace(rt.min(), rt.max(), MAX_BINS + 1)
    return edges


def _model_lines(model):
    return (f"family={model.family.value}; mu1={model.mu1:.6g}; mu2={model.mu2:.6g}; sigma={model.sigma:.6g}; "
            f"priors=0.5/0.5")


def _record_figure(record: ParticipantRecord):
    summary = summarize_participant(record)
    if not summary.pooled_sd > 0:
        raise DegenerateData(f"participant '{record.participant_id}' has zero RT variance, nothing to plot")

    model = fit_model(record, Family.LOGNORMAL)
    edges = _bin_edges(record.rt)
    hist = {c: np.histogram(record.condition_rts(c), bins=edges, density=True)[0] for c in Condition}

    xrange = Range().bound([edges[0], edges[-1]]).pad(0.05)
    xs = _grid(xrange, positive=True)
    pdf = {c: class_conditional_pdf(model, c, xs) for c in Condition}
    ymax = 1.1 * max(max(h.max() for h in hist.values()), max(p.max() for p in pdf.values()))

    fig = Figure(f"participant_{record.participant_id}")
    ax = _Axes(fig, xrange, ymax)
    ax.bars('CongruentBars', edges, hist[Condition.CONGRUENT])
    ax.bars('IncongruentBars', edges, hist[Condition.INCONGRUENT])
    ax.curve('Congruent', xs, pdf[Condition.CONGRUENT])
    ax.curve('Incongruent', xs, pdf[Condition.INCONGRUENT])
    ax.marker(float(np.median(record.rt)), 'median')
    ax.frame(f"Single-trial RT distributions, participant {record.participant_id}", 'reaction time (ms)')

    desc = (f"format_version={FORMAT_VERSION}; style={TRIAL_DISTRIBUTIONS}; source=participant {record.participant_id}; "
            f"fit=lognormal method of moments on log-RT (class means, pooled SD); {_model_lines(model)}; "
            f"bins={edges.size - 1}")
    return fig, desc


def _model_figure(model: DistributionModel):
    marginal = MixtureMarginal(model)
    xrange = Range(marginal.quantile(0.001), marginal.quantile(0.999))
    xs = _grid(xrange, positive=model.family is Family.LOGNORMAL)
    pdf = {c: class_conditional_pdf(model, c, xs) for c in Condition}
    ymax = 1.1 * max(p.max() for p in pdf.values())

    fig = Figure('idealized_participant')
    ax = _Axes(fig, xrange, ymax)
    ax.curve('Congruent', xs, pdf[Condition.CONGRUENT])
    ax.curve('Incongruent', xs, pdf[Condition.INCONGRUENT])
    try:
        ax.marker(optimal_threshold(model), 'optimal threshold')
    except DegenerateModel:
        logger.info('model classes coincide, no threshold marker drawn')
    ax.frame('Single-trial RT distributions, idealized participant', 'reaction time (ms)')

    desc = (f"format_version={FORMAT_VERSION}; style={TRIAL_DISTRIBUTIONS}; source=model; "
            f"fit=none (parameters supplied); {_model_lines(model)}")
    return fig, desc


def _mean_sem_figure(pair: MeanSemPair):
    if not pair.sem > 0:
        raise DegenerateData('SEM is zero, the mean distributions are degenerate')

    lo = min(pair.congruent_mean, pair.incongruent_mean) - 4 * pair.sem
    hi = max(pair.congruent_mean, pair.incongruent_mean) + 4 * pair.sem
    xrange = Range(lo, hi)
    xs = _grid(xrange, positive=False)
    pdf = {}
    for c, mean in ((Condition.CONGRUENT, pair.congruent_mean), (Condition.INCONGRUENT, pair.incongruent_mean)):
        pdf[c] = np.exp(-0.5 * ((xs - mean) / pair.sem)**2) / (pair.sem * math.sqrt(2 * math.pi))
    ymax = 1.1 * max(p.max() for p in pdf.values())

    fig = Figure('condition_means')
    ax = _Axes(fig, xrange, ymax)
    ax.curve('Congruent', xs, pdf[Condition.CONGRUENT])
    ax.curve('Incongruent', xs, pdf[Condition.INCONGRUENT])
    ax.frame('Distributions of condition means (SD = SEM)', 'mean reaction time (ms)')

    desc = (f"format_version={FORMAT_VERSION}; style={MEAN_SEM_DISTRIBUTIONS}; "
            f"congruent_mean={pair.congruent_mean:.6g}; incongruent_mean={pair.incongruent_mean:.6g}; "
            f"sem={pair.sem:.6g}; abscissa scaled to the means, not to single trials")
    return fig, desc


def emit_distribution_plot(source, style=TRIAL_DISTRIBUTIONS) -> bytes:
    """ render a distribution figure as svg bytes

    input:
        source - ParticipantRecord or DistributionModel for trial_distributions,
                 Dataset or MeanSemPair for mean_sem_distributions
        style - one of STYLES
    """
    if style == TRIAL_DISTRIBUTIONS:
        if isinstance(source, ParticipantRecord):
            fig, desc = _record_figure(source)
        elif isinstance(source, DistributionModel):
            fig, desc = _model_figure(source)
        else:
            raise ValueError(f"style '{style}' needs a ParticipantRecord or DistributionModel, got {type(source).__name__}")

    elif style == MEAN_SEM_DISTRIBUTIONS:
        if isinstance(source, Dataset):
            source = MeanSemPair.from_dataset(source)
        if not isinstance(source, MeanSemPair):
            raise ValueError(f"style '{style}' needs a Dataset or MeanSemPair, got {type(source).__name__}")
        fig, desc = _mean_sem_figure(source)

    else:
        raise ValueError(f"unknown plot style '{style}', use one of: {', '.join(STYLES)}")

    title = desc.split(';')[1].split('=')[1].replace('_', ' ')
    return fig.to_svg(title=f"rtaudit {title}", description=desc)
