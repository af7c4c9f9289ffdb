""" rtaudit command line: analyze, simulate, histogram and plot subcommands """

import argparse
import itertools
import json
import logging
import sys
from pathlib import Path

import pandas as pd

from . import __version__
from .classify import REFERENCE_PROTOCOL, SplitProtocol, aggregate, exemplary_participants, median_classifier
from .errors import RtAuditError, UsageError
from .histogram import EQUAL_PRIORS, RAW_COUNTS, histogram_bayes_accuracy, histogram_step_accuracy, ingest_digitized
from .inference import predict_sem
from .ingest import ColumnMap, IngestOptions, emit_trials, ingest_trials
from .model import Family
from .plot import MEAN_SEM_DISTRIBUTIONS, STYLES, TRIAL_DISTRIBUTIONS, MeanSemPair, emit_distribution_plot
from .report import FORMAT_VERSION, FORMATS, build_report, emit_report, emit_sweep
from .simulate import REFERENCE_SIMULATION, SimulationConfig, synthesize_dataset, sweep

__all__ = (
    'build_parser',
    'main'
)

logger = logging.getLogger(__name__)

EXTENSIONS = {'json': 'json', 'csv': 'csv', 'text': 'txt'}
USAGE_ERROR = 2


def _grid(cast):
    def parse(text):
        try:
            return [cast(v) for v in text.split(',') if v.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid grid '{text}', expected comma-separated numbers")
    return parse


#####################################################################################################################
#
# Parser
#
#####################################################################################################################

def _common(parser, tables=True):
    group = parser.add_argument_group('output')
    group.add_argument('--output-dir', type=Path, default=None,
                       help='directory receiving the result files (default: print only)')
    if tables:
        group.add_argument('--format', action='append', choices=FORMATS, default=None,
                           help='result file format, repeatable (default: json)')
        group.add_argument('--workers', type=int, default=1,
                           help='process count, results do not depend on it (default: %(default)s)')
    group.add_argument('-v', '--verbose', action='count', default=0,
                       help='more log output on stderr (-vv for debug)')
    group.add_argument('-q', '--quiet', action='store_true', help='log errors only')


def _protocol(parser):
    group = parser.add_argument_group('trained classifier')
    group.add_argument('--seed', type=int, default=REFERENCE_PROTOCOL.seed,
                       help='root seed of all random streams (default: %(default)s)')
    group.add_argument('--train-fraction', type=float, default=REFERENCE_PROTOCOL.train_fraction,
                       help='share of each condition used for training (default: %(default)s)')
    group.add_argument('--repetitions', type=int, default=REFERENCE_PROTOCOL.repetitions,
                       help='random train/test splits per participant (default: %(default)s)')


def _model(parser):
    cfg = REFERENCE_SIMULATION
    group = parser.add_argument_group('model')
    group.add_argument('--family', choices=[f.value for f in Family], default=cfg.family.value,
                       help='class-conditional RT family (default: %(default)s)')
    group.add_argument('--base-ms', type=float, default=cfg.base_ms,
                       help='mean congruent RT in ms (default: %(default)s)')
    group.add_argument('--delta-ms', '--delta', dest='delta_ms', type=float, default=cfg.delta_ms,
                       help='incongruent minus congruent mean RT in ms (default: %(default)s)')
    group.add_argument('--sigma-ms', type=float, default=cfg.sigma_ms,
                       help='within-subject trial SD in ms (default: %(default)s)')
    group.add_argument('--participants', type=int, default=cfg.participants,
                       help='participants per experiment (default: %(default)s)')
    group.add_argument('--trials', type=int, default=cfg.trials_per_condition,
                       help='trials per condition and participant (default: %(default)s)')


def _ingest(parser):
    group = parser.add_argument_group('ingestion')
    group.add_argument('--rt-min', type=float, default=None, help='drop trials faster than this (ms)')
    group.add_argument('--rt-max', type=float, default=None, help='drop trials slower than this (ms)')
    group.add_argument('--column-map', default='',
                       help="target=source pairs, e.g. 'participant_id=subj,rt_ms=RT,congruent=1,incongruent=0'")


def build_parser():
    parser = argparse.ArgumentParser(
        prog='rtaudit',
        description='Single-trial classification audit of reaction-time congruency experiments.')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('analyze', help='classify and test a trial CSV')
    p.add_argument('--input', type=Path, required=True, help='trial CSV (participant_id,condition,rt_ms)')
    p.add_argument('--alpha', type=float, default=REFERENCE_SIMULATION.alpha,
                   help='significance level echoed in the report (default: %(default)s)')
    _protocol(p)
    _ingest(p)
    _common(p)
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser('simulate', help='Monte-Carlo fallacy experiment over a parameter grid')
    _model(p)
    p.add_argument('--replications', type=int, default=REFERENCE_SIMULATION.replications,
                   help='replications per grid cell (default: %(default)s)')
    p.add_argument('--alpha', type=float, default=REFERENCE_SIMULATION.alpha,
                   help='significance level of the paired t-test (default: %(default)s)')
    p.add_argument('--between-sd', type=float, default=REFERENCE_SIMULATION.between_subject_sd,
                   help='between-subject SD of the base RT in ms (default: %(default)s)')
    p.add_argument('--participant-grid', type=_grid(int), default=None, help='comma-separated participant counts')
    p.add_argument('--trial-grid', type=_grid(int), default=None, help='comma-separated trials per condition')
    p.add_argument('--delta-grid', type=_grid(float), default=None, help='comma-separated differences in ms')
    p.add_argument('--dataset-out', type=Path, default=None,
                   help='also write replication 0 of the base cell as a trial CSV')
    _protocol(p)
    _common(p)
    p.set_defaults(run=cmd_simulate)

    p = sub.add_parser('histogram', help='accuracy bounds from a digitized histogram pair')
    p.add_argument('--input', type=Path, required=True, help='histogram CSV (edge_ms,congruent,incongruent)')
    p.add_argument('--weighting', choices=(EQUAL_PRIORS, RAW_COUNTS), default=EQUAL_PRIORS,
                   help='normalize each condition (equal) or pool raw counts (default: %(default)s)')
    _common(p)
    p.set_defaults(run=cmd_histogram)

    p = sub.add_parser('plot', help='svg figure of trial or mean distributions')
    p.add_argument('--input', type=Path, default=None, help='trial CSV (default: plot the model)')
    p.add_argument('--style', choices=STYLES, default=TRIAL_DISTRIBUTIONS, help='figure style (default: %(default)s)')
    p.add_argument('--participant', default='median',
                   help="participant of a trial_distributions plot: median, max or an id (default: %(default)s)")
    _model(p)
    _ingest(p)
    _common(p, tables=False)
    p.set_defaults(run=cmd_plot)

    return parser


#####################################################################################################################
#
# Commands
#
#####################################################################################################################

def _formats(args):
    return args.format or ['json']


def _write(args, stem, payloads):
    """ write {format: bytes} under the output directory, if one was given """
    if args.output_dir is None:
        return
    args.output_dir.mkdir(parents=True, exist_ok=True)
    for fmt, data in payloads.items():
        path = args.output_dir / f"{stem}.{EXTENSIONS.get(fmt, fmt)}"
        path.write_bytes(data)
        logger.info('wrote %s', path)


def _checked(build, *args, **kwargs):
    """ build a parameter set from flag values, invalid values become a UsageError """
    try:
        return build(*args, **kwargs)
    except RtAuditError:
        raise
    except (ValueError, TypeError) as err:
        raise UsageError(f"invalid option: {err}") from err


def _ingest_options(args):
    options = _checked(IngestOptions, rt_min=args.rt_min, rt_max=args.rt_max, column_map=args.column_map)
    _checked(ColumnMap.parse, options.column_map)
    if args.rt_min is not None and args.rt_max is not None and args.rt_min > args.rt_max:
        raise UsageError(f"invalid option: --rt-min {args.rt_min} exceeds --rt-max {args.rt_max}")
    return options


def _simulation(args, **extra):
    return _checked(
        SimulationConfig,
        family=args.family,
        base_ms=args.base_ms,
        delta_ms=args.delta_ms,
        sigma_ms=args.sigma_ms,
        participants=args.participants,
        trials_per_condition=args.trials,
        **extra)


def cmd_analyze(args):
    options = _ingest_options(args)
    protocol = _checked(SplitProtocol, train_fraction=args.train_fraction, repetitions=args.repetitions, seed=args.seed)
    ds = ingest_trials(args.input, options)
    report = build_report(ds, protocol, workers=args.workers,
                          config={'ingest': options.as_dict(), 'alpha': args.alpha})

    _write(args, 'report', {fmt: emit_report(report, fmt) for fmt in _formats(args)})
    sys.stdout.write(emit_report(report, 'text').decode('utf-8'))
    return 0


def cmd_simulate(args):
    cfg = _simulation(args,
                      replications=args.replications,
                      seed=args.seed,
                      between_subject_sd=args.between_sd,
                      alpha=args.alpha,
                      train_fraction=args.train_fraction,
                      repetitions=args.repetitions)

    grids = (args.participant_grid or [cfg.participants],
             args.trial_grid or [cfg.trials_per_condition],
             args.delta_grid or [cfg.delta_ms])
    for p, t, d in itertools.product(*grids):
        _checked(cfg.replace, participants=p, trials_per_condition=t, delta_ms=d)

    result = sweep(cfg, *grids, workers=args.workers)

    _write(args, 'sweep', {fmt: emit_sweep(result, fmt) for fmt in _formats(args)})
    if args.dataset_out is not None:
        args.dataset_out.parent.mkdir(parents=True, exist_ok=True)
        args.dataset_out.write_bytes(emit_trials(synthesize_dataset(cfg, 0)))
        logger.info('wrote %s', args.dataset_out)

    sys.stdout.write(emit_sweep(result, 'text').decode('utf-8'))
    return 0


def _histogram_payloads(summary, formats):
    out = {}
    for fmt in formats:
        if fmt == 'json':
            out[fmt] = (json.dumps(summary, sort_keys=True, indent=2) + '\n').encode('utf-8')
        elif fmt == 'csv':
            frame = pd.DataFrame([summary])
            out[fmt] = (f"# format_version: {FORMAT_VERSION}\n" + frame.to_csv(index=False, lineterminator='\n')).encode('utf-8')
        else:
            out[fmt] = _histogram_text(summary).encode('utf-8')
    return out


def _histogram_text(summary):
    return (f"# rtaudit {__version__} histogram accuracy, format_version {FORMAT_VERSION}\n"
            f"weighting: {summary['weighting']} ({summary['bins']} bins)\n"
            f"best step classifier: {100 * summary['step_accuracy']:.2f}% "
            f"(threshold {summary['threshold_edge_ms']:g} ms, {summary['orientation']})\n"
            f"per-bin Bayes rule:   {100 * summary['bayes_accuracy']:.2f}%\n")


def cmd_histogram(args):
    h = ingest_digitized(args.input)
    step = histogram_step_accuracy(h, args.weighting)
    summary = {
        'format_version': FORMAT_VERSION,
        'source': str(args.input),
        'weighting': args.weighting,
        'bins': len(h),
        'step_accuracy': step.accuracy,
        'threshold_edge_ms': step.threshold_edge,
        'orientation': step.orientation.value,
        'bayes_accuracy': histogram_bayes_accuracy(h, args.weighting)
    }

    _write(args, 'histogram', _histogram_payloads(summary, _formats(args)))
    sys.stdout.write(_histogram_text(summary))
    return 0


def _plot_source(args):
    cfg = _simulation(args)
    if args.input is None:
        if args.style == TRIAL_DISTRIBUTIONS:
            return cfg.model
        sem = predict_sem(cfg.sigma_ms, cfg.trials_per_condition, cfg.participants)
        return MeanSemPair(cfg.base_ms, cfg.base_ms + cfg.delta_ms, sem)

    ds = ingest_trials(args.input, _ingest_options(args))
    if args.style == MEAN_SEM_DISTRIBUTIONS:
        return ds

    if args.participant in ('median', 'max'):
        median_id, max_id = exemplary_participants(aggregate(median_classifier(r) for r in ds))
        pid = median_id if args.participant == 'median' else max_id
        logger.info('plotting participant %s (%s median-classifier accuracy)', pid, args.participant)
        return ds[pid]
    if not args.participant in ds.ids:
        raise UsageError(f"participant '{args.participant}' not found in {args.input}")
    return ds[args.participant]


def cmd_plot(args):
    svg = emit_distribution_plot(_plot_source(args), args.style)
    if args.output_dir is None:
        sys.stdout.write(svg.decode('utf-8'))
    else:
        _write(args, args.style, {'svg': svg})
    return 0


#####################################################################################################################
#
# Entry point
#
#####################################################################################################################

def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    logging.getLogger().setLevel(level)


def main(argv=None) -> int:
    """ run one subcommand, returns the process exit code """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR

    _configure_logging(args)
    try:
        return args.run(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as err:
        print(f"rtaudit: cannot read '{err.filename}': {err.strerror}", file=sys.stderr)
        return USAGE_ERROR
    except RtAuditError as err:
        print(f"rtaudit {args.command}: {type(err).__name__}: {err}", file=sys.stderr)
        return err.exit_code


if __name__ == '__main__':
    sys.exit(main())
