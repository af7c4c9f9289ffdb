""" trial CSV ingestion and emission """

import codecs
import hashlib
import io
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from .core import Condition, Dataset, ParticipantRecord, validate_dataset
from .errors import InvariantViolation, ParseError
from .math import Range
from .params import Parameter, Parameterizable

__all__ = (
    'FORMAT_VERSION',
    'ColumnMap',
    'IngestOptions',
    'fingerprint',
    'read_bytes',
    'decode_text',
    'ingest_trials',
    'emit_trials'
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
TARGETS = ('participant_id', 'condition', 'rt_ms', 'rt_s')
VALUE_ALIASES = ('congruent', 'incongruent')


class ColumnMap:
    """ maps the toolkit's column names (and condition labels) to those of a source file

    Parsed from 'target=source' pairs separated by commas, e.g.
    'participant_id=subject,condition=cong,rt_ms=RT,congruent=1,incongruent=0'.
    """
    __slots__ = ('columns', 'labels')

    def __init__(self, columns=None, labels=None):
        self.columns = dict(columns or {})
        self.labels = dict(labels or {})

    def __str__(self):
        pairs = [f"{k}={v}" for k, v in self.columns.items()] + [f"{k}={v}" for k, v in self.labels.items()]
        return ','.join(pairs)

    @classmethod
    def parse(cls, text):
        columns, labels = dict(), dict()
        for item in filter(None, (s.strip() for s in (text or '').split(','))):
            if not '=' in item:
                raise ValueError(f"invalid column-map entry '{item}', expected target=source")
            target, source = (s.strip() for s in item.split('=', 1))
            if target in TARGETS:
                columns[target] = source
            elif target in VALUE_ALIASES:
                labels[target] = source
            else:
                raise ValueError(f"unknown column-map target '{target}', use one of: {', '.join(TARGETS + VALUE_ALIASES)}")
        return cls(columns, labels)

    def source(self, target):
        return self.columns.get(target, target)

    def condition(self, raw):
        """ Condition for a raw cell value, None when unrecognized """
        value = raw.strip()
        for cond in Condition:
            alias = self.labels.get(cond.value)
            if alias is not None and value == alias:
                return cond
        lowered = value.lower()
        for cond in Condition:
            if lowered == cond.value and cond.value not in self.labels:
                return cond
        return None


class IngestOptions(Parameterizable):
    """ optional RT filter bounds (ms) and column mapping """
    rt_min = Parameter(None, float, fvalidate=lambda v: v >= 0, rule='rt_min >= 0')
    rt_max = Parameter(None, float, fvalidate=lambda v: v > 0, rule='rt_max > 0')
    column_map = Parameter('', str, doc='target=source pairs, see ColumnMap')

    @property
    def window(self):
        return Range(self.rt_min, self.rt_max)


def fingerprint(data: bytes) -> str:
    """ sha256 of the raw file bytes """
    return hashlib.sha256(data).hexdigest()


def read_bytes(file):
    """ (bytes, display name) of a path or binary/text stream """
    if isinstance(file, (str, Path)):
        return Path(file).read_bytes(), str(file)
    data = file.read()
    if isinstance(data, str):
        data = data.encode('utf-8')
    return data, getattr(file, 'name', None)


def decode_text(data: bytes, path=None) -> str:
    """ utf-8 text of a file (a leading BOM is dropped), ParseError on undecodable bytes """
    if data.startswith(codecs.BOM_UTF8):
        data = data[len(codecs.BOM_UTF8):]
    try:
        return data.decode('utf-8')
    except UnicodeDecodeError as err:
        line = data[:err.start].count(b'\n') + 1
        raise ParseError(f"byte 0x{data[err.start]:02x} is not valid UTF-8", line=line, path=path)


def ingest_trials(file, options: IngestOptions = None) -> Dataset:
    """ read participant_id,condition,rt_ms rows into a validated Dataset

    input:
        file - path or stream; an optional leading '# format_version: N' line is skipped
        options - IngestOptions with RT window and column map

    Rows outside the RT window are dropped and counted in metadata['dropped_count'].
    An rt_s column instead of rt_ms is read as seconds and converted to ms.
    """
    options = options or IngestOptions()
    if (options.rt_min is not None and options.rt_max is not None and options.rt_min > options.rt_max):
        raise ValueError(f"rt_min {options.rt_min} exceeds rt_max {options.rt_max}")
    mapping = ColumnMap.parse(options.column_map)

    data, path = read_bytes(file)
    text = decode_text(data, path)
    lines = text.splitlines()
    offset = 0
    while offset < len(lines) and lines[offset].lstrip().startswith('#'):
        offset += 1
    body = '\n'.join(lines[offset:])
    if not body.strip():
        raise ParseError('trial file is empty', line=offset + 1, path=path)

    try:
        frame = pd.read_csv(io.StringIO(body), dtype=str, keep_default_na=False, skipinitialspace=True,
                            skip_blank_lines=False)
    except pd.errors.ParserError as err:
        raise ParseError(f"malformed CSV: {err}", path=path)
    frame.columns = [c.strip() for c in frame.columns]

    pid_col = mapping.source('participant_id')
    cond_col = mapping.source('condition')
    scale = 1.0
    rt_col = mapping.source('rt_ms')
    if not rt_col in frame.columns and mapping.source('rt_s') in frame.columns:
        rt_col, scale = mapping.source('rt_s'), 1000.0

    missing = [c for c in (pid_col, cond_col, rt_col) if not c in frame.columns]
    if missing:
        raise ParseError(f"missing column(s) {', '.join(missing)} in header '{','.join(frame.columns)}'",
                         line=offset + 1, path=path)

    window = options.window
    order, trials = [], dict()
    dropped = 0
    for i, (pid, cond, rt) in enumerate(zip(frame[pid_col], frame[cond_col], frame[rt_col])):
        line = offset + 2 + i
        pid, cond, rt = (v if isinstance(v, str) else '' for v in (pid, cond, rt))
        if not (pid.strip() or cond.strip() or rt.strip()):
            continue

        pid = pid.strip()
        if not pid:
            raise ParseError('empty participant_id', line=line, path=path)
        condition = mapping.condition(cond)
        if condition is None:
            raise ParseError(f"unknown condition label '{cond.strip()}'", line=line, path=path)
        try:
            value = float(rt) * scale
        except ValueError:
            raise ParseError(f"rt '{rt.strip()}' is not a number", line=line, path=path)

        if not window.includes(value):
            dropped += 1
            continue

        if not pid in trials:
            order.append(pid)
            trials[pid] = ([], [])
        trials[pid][0].append(value)
        trials[pid][1].append(condition.code)

    records = [ParticipantRecord(pid, trials[pid][0], np.array(trials[pid][1], dtype=np.int8)) for pid in order]
    ds = Dataset(records, {
        'source': path or 'stream',
        'units': 'ms',
        'format_version': FORMAT_VERSION,
        'fingerprint': fingerprint(data),
        'dropped_count': dropped,
        'rt_min': options.rt_min,
        'rt_max': options.rt_max,
        'column_map': str(mapping)
    })

    violations = validate_dataset(ds)
    errors = [v for v in violations if v.severity == 'error']
    for v in violations:
        if v.severity != 'error':
            logger.warning('%s', v)
    if errors:
        raise InvariantViolation(f"{path or 'stream'}: dataset violates {len(errors)} invariant(s)", errors)

    logger.info('ingested %d participants, %d trials (%d dropped by RT filter)', len(ds), ds.n_trials, dropped)
    return ds


def emit_trials(ds: Dataset) -> bytes:
    """ serialize a dataset in the layout ingest_trials reads, participant and trial order kept """
    rows = []
    for record in ds:
        for rt, code in zip(record.rt, record.labels):
            rows.append((record.participant_id, Condition.from_code(code).value, float(rt)))

    frame = pd.DataFrame(rows, columns=['participant_id', 'condition', 'rt_ms'])
    body = frame.to_csv(index=False, lineterminator='\n', float_format=None)
    return (f"# format_version: {FORMAT_VERSION}\n" + body).encode('utf-8')
