""" dataset audit report and its JSON / CSV / text serializations """

import io
import json
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from . import __version__
from .classify import MEDIAN, TRAINED, UPPER_BOUND, METHODS, REFERENCE_PROTOCOL, SplitProtocol, classify_dataset
from .core import Dataset
from .errors import RtAuditError
from .inference import (accuracy_vs_chance_test, d_value_test, dprime_from_accuracy, effect_sizes,
                        paired_t_test, predict_sem)
from .model import Family, bayes_accuracy, fit_model

__all__ = (
    'FORMAT_VERSION',
    'FORMATS',
    'AuditReport',
    'build_report',
    'emit_report',
    'load_report',
    'emit_sweep'
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
FORMATS = ('json', 'csv', 'text')

# table rows in display order: (method key, label)
ROWS = (
    (MEDIAN, '(i) Median classifier (model: lognormal)'),
    (MEDIAN, '    Median classifier (model: normal)'),
    (TRAINED, '(ii) Trained classifier (model-free)'),
    (UPPER_BOUND, '(iii) Over-optimistic upper bound'),
)


@dataclass(frozen=True)
class AuditReport:
    fingerprint: str
    source: str
    n_participants: int
    n_trials: int
    dropped_count: int
    summaries: dict
    chance_tests: dict
    paired_test: object
    d_test: object
    effects: object
    predicted_sem: float
    trials_per_condition: float
    fitted_bayes_accuracy: dict
    config: dict
    toolkit_version: str = __version__
    format_version: int = FORMAT_VERSION

    def dprime(self, method):
        acc = self.summaries[method].mean_accuracy
        return dprime_from_accuracy(acc) if 0 < acc < 1 else None

    def to_dict(self):
        return {
            'format_version': self.format_version,
            'toolkit_version': self.toolkit_version,
            'dataset': {
                'fingerprint': self.fingerprint,
                'source': self.source,
                'n_participants': self.n_participants,
                'n_trials': self.n_trials,
                'dropped_count': self.dropped_count,
                'mean_trials_per_condition': self.trials_per_condition
            },
            'classifiers': {
                m: dict(self.summaries[m].to_dict(),
                        vs_chance=self.chance_tests[m].to_dict(),
                        dprime=self.dprime(m))
                for m in METHODS
            },
            'paired_t_test': self.paired_test.to_dict(),
            'd_value_test': self.d_test.to_dict(),
            'effect_sizes': self.effects.to_dict(),
            'predicted_sem_ms': self.predicted_sem,
            'fitted_bayes_accuracy': dict(self.fitted_bayes_accuracy),
            'config': self.config
        }


def _mean_fitted_bayes(ds, family):
    values = []
    for record in ds:
        try:
            values.append(bayes_accuracy(fit_model(record, family)))
        except RtAuditError as err:
            logger.warning('skipping %s fit for %s: %s', family.value, record.participant_id, err)
    return float(np.mean(values)) if values else None


def build_report(ds: Dataset, protocol: SplitProtocol = REFERENCE_PROTOCOL, workers=1, config=None) -> AuditReport:
    """ run every classifier and inferential statistic on a dataset

    input:
        ds - ingested dataset (metadata supplies fingerprint, source and dropped_count)
        protocol - split protocol of the trained classifier
        workers - process count for per-participant classification
        config - extra settings echoed in the report (ingest options, alpha)
    """
    summaries = classify_dataset(ds, protocol, workers)
    effects = effect_sizes(ds)
    paired = paired_t_test(ds)

    per_condition = float(np.mean([len(r) / 2 for r in ds]))
    echo = {'protocol': protocol.as_dict(), 'workers_independent': True}
    echo.update(config or {})

    return AuditReport(
        fingerprint=ds.metadata.get('fingerprint', ''),
        source=str(ds.metadata.get('source', '')),
        n_participants=len(ds),
        n_trials=ds.n_trials,
        dropped_count=int(ds.metadata.get('dropped_count', 0)),
        summaries=summaries,
        chance_tests={m: accuracy_vs_chance_test(summaries[m]) for m in METHODS},
        paired_test=paired,
        d_test=d_value_test(effects),
        effects=effects,
        predicted_sem=predict_sem(effects.within_sd_mean, per_condition, len(ds)),
        trials_per_condition=per_condition,
        fitted_bayes_accuracy={f.value: _mean_fitted_bayes(ds, f) for f in Family},
        config=echo)


#####################################################################################################################
#
# Emission
#
#####################################################################################################################

def _pct(value):
    return f"{100 * value:.2f}%"


def _p(value):
    return f"{value:.3f}" if value >= 0.001 else f"{value:.1e}"


def _t(test):
    return f"t({test.df}) = {test.t:.2f}, p = {_p(test.p)}" + (' [zero spread]' if test.degenerate else '')


def _table(report):
    width = max(len(label) for _, label in ROWS) + 2
    lines = [f"{'Method':<{width}}{'mean(accuracy)':>16}{'std(accuracy)':>16}"]
    lines.append('-' * (width + 32))
    for method, label in ROWS:
        s = report.summaries[method]
        sd = _pct(s.sd_accuracy) if s.sd_defined else 'n/a'
        lines.append(f"{label:<{width}}{_pct(s.mean_accuracy):>16}{sd:>16}")
    return lines


def _text(report):
    e = report.effects
    lines = [
        f"# rtaudit {report.toolkit_version} report, format_version {report.format_version}",
        f"dataset: {report.source} ({report.n_participants} participants, {report.n_trials} trials, "
        f"{report.dropped_count} dropped)",
        f"fingerprint: {report.fingerprint}",
        ''
    ]
    lines += _table(report)
    lines.append('')
    lines.append('accuracy vs. chance (0.5):')
    for method in METHODS:
        lines.append(f"  {method:<12}{_t(report.chance_tests[method])}")
    lines += [
        '',
        f"paired t-test (incongruent - congruent): {_t(report.paired_test)}",
        f"  mean difference: {report.paired_test.mean_diff:.2f} ms, SEM: {report.paired_test.sem_diff:.2f} ms, "
        f"predicted SEM: {report.predicted_sem:.2f} ms",
        f"t-test on per-participant d: {_t(report.d_test)}",
        f"within-subject SD: {e.within_sd_mean:.1f} ms (mean of participants), "
        f"{e.within_sd_grand:.1f} ms (grand pooled)",
        f"signal-to-noise ratio (mean d_i): {e.snr:.3f}, mean diff / within SD: {e.snr_ratio:.3f}",
        f"d_across = mean(d_i) / sd(d_i): {e.d_across:.3f}" + ('' if e.d_across_defined else ' [undefined spread]'),
    ]
    fitted = report.fitted_bayes_accuracy
    for family in Family:
        value = fitted.get(family.value)
        if value is not None:
            lines.append(f"Bayes accuracy of fitted {family.value} models (mean): {_pct(value)}")
    proto = report.config.get('protocol', {})
    lines.append(f"protocol: train_fraction={proto.get('train_fraction')}, repetitions={proto.get('repetitions')}, "
                 f"seed={proto.get('seed')}")
    return '\n'.join(lines) + '\n'


def _csv(report):
    rows = []
    for method, label in ROWS:
        s = report.summaries[method]
        test = report.chance_tests[method]
        rows.append([method, label.strip(), s.mean_accuracy, s.sd_accuracy, len(s.per_participant),
                     test.t, test.p, report.dprime(method)])
    frame = pd.DataFrame(rows, columns=['method', 'label', 'mean_accuracy', 'sd_accuracy', 'n_participants',
                                        't_vs_chance', 'p_vs_chance', 'dprime'])
    return f"# format_version: {report.format_version}\n" + frame.to_csv(index=False, lineterminator='\n')


def emit_report(report: AuditReport, format='json') -> bytes:
    """ deterministic serialization: 'json' (sorted keys), 'csv' summary table or 'text' """
    if format == 'json':
        out = json.dumps(report.to_dict(), sort_keys=True, indent=2) + '\n'
    elif format == 'csv':
        out = _csv(report)
    elif format == 'text':
        out = _text(report)
    else:
        raise ValueError(f"unknown report format '{format}', use one of: {', '.join(FORMATS)}")
    return out.encode('utf-8')


def load_report(data: bytes) -> dict:
    """ parse an emitted JSON report back into its dictionary form """
    return json.loads(data.decode('utf-8'))


def emit_sweep(result, format='json') -> bytes:
    """ serialize a SweepResult as 'json', 'csv' (one row per cell) or 'text' """
    if format == 'json':
        payload = dict(result.to_dict(), format_version=FORMAT_VERSION, toolkit_version=__version__)
        out = json.dumps(payload, sort_keys=True, indent=2) + '\n'
    elif format == 'csv':
        out = f"# format_version: {FORMAT_VERSION}\n" + result.to_frame().to_csv(index=False, lineterminator='\n')
    elif format == 'text':
        buf = io.StringIO()
        buf.write(f"# rtaudit {__version__} sweep, format_version {FORMAT_VERSION}\n")
        buf.write(result.to_frame().to_string(index=False, float_format=lambda v: f"{v:.4f}"))
        buf.write('\n')
        out = buf.getvalue()
    else:
        raise ValueError(f"unknown sweep format '{format}', use one of: {', '.join(FORMATS)}")
    return out.encode('utf-8')
