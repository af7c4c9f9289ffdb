""" domain data model: trials, participants, datasets and their bookkeeping """

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateData
from .math import sample_sd, pooled_sd

__all__ = (
    'Condition',
    'Orientation',
    'Trial',
    'ParticipantRecord',
    'Dataset',
    'ClassifierOutcome',
    'ConditionSummary',
    'ParticipantSummary',
    'Violation',
    'WithinSubjectSD',
    'summarize_participant',
    'validate_dataset',
    'within_subject_sd'
)


class Condition(enum.Enum):
    CONGRUENT = 'congruent'
    INCONGRUENT = 'incongruent'

    @property
    def code(self):
        """ integer label stored in record arrays, 0 congruent / 1 incongruent """
        return 0 if self is Condition.CONGRUENT else 1

    @classmethod
    def from_code(cls, code):
        return cls.INCONGRUENT if code else cls.CONGRUENT


class Orientation(enum.Enum):
    FAST_IS_CONGRUENT = 'fast_is_congruent'
    FAST_IS_INCONGRUENT = 'fast_is_incongruent'


@dataclass(frozen=True)
class Trial:
    rt: float
    condition: Condition


class ParticipantRecord:
    """ all trials of one participant, in ingestion order

    input:
        participant_id - opaque identifier
        rt - reaction times in ms
        labels - condition codes (0 congruent, 1 incongruent) or Condition values
    """
    __slots__ = ('participant_id', 'rt', 'labels')

    def __init__(self, participant_id, rt, labels):
        rt = np.array(rt, dtype=float)
        if isinstance(labels, np.ndarray) and labels.dtype.kind in 'biu':
            labels = labels.astype(np.int8)
        else:
            labels = np.array([l.code if isinstance(l, Condition) else int(l) for l in labels], dtype=np.int8)

        if rt.ndim != 1 or rt.shape != labels.shape:
            raise ValueError('rt and labels must be 1-d arrays of equal length')
        if np.any((labels != 0) & (labels != 1)):
            raise ValueError('condition codes must be 0 (congruent) or 1 (incongruent)')

        rt.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, 'participant_id', str(participant_id))
        object.__setattr__(self, 'rt', rt)
        object.__setattr__(self, 'labels', labels)

    def __setattr__(self, key, value):
        raise AttributeError('ParticipantRecord is immutable')

    def __reduce__(self):
        return (ParticipantRecord, (self.participant_id, self.rt.copy(), self.labels.copy()))

    def __len__(self):
        return self.rt.size

    def __eq__(self, other):
        return (isinstance(other, ParticipantRecord)
                and self.participant_id == other.participant_id
                and np.array_equal(self.rt, other.rt)
                and np.array_equal(self.labels, other.labels))

    __hash__ = None

    def __repr__(self):
        n_con, n_inc = self.counts()
        return f"ParticipantRecord({self.participant_id!r}, congruent={n_con}, incongruent={n_inc})"

    @classmethod
    def from_trials(cls, participant_id, trials):
        trials = list(trials)
        return cls(participant_id, [t.rt for t in trials], [t.condition for t in trials])

    @property
    def trials(self):
        return tuple(Trial(float(x), Condition.from_code(y)) for x, y in zip(self.rt, self.labels))

    @property
    def incongruent(self):
        """ boolean mask of incongruent trials """
        return self.labels == 1

    def condition_rts(self, condition: Condition):
        return self.rt[self.labels == condition.code]

    def counts(self):
        """ (congruent, incongruent) trial counts """
        n_inc = int(np.count_nonzero(self.labels))
        return self.rt.size - n_inc, n_inc

    def require(self, per_condition=2):
        """ raise DegenerateData unless each condition has enough trials """
        n_con, n_inc = self.counts()
        if min(n_con, n_inc) < per_condition:
            raise DegenerateData(
                f"participant '{self.participant_id}' needs at least {per_condition} trials per condition "
                f"(has {n_con} congruent, {n_inc} incongruent)")

    def map_rt(self, f):
        """ copy with every RT passed through f """
        return ParticipantRecord(self.participant_id, f(self.rt.copy()), self.labels)


@dataclass(frozen=True)
class Dataset:
    participants: tuple
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'participants', tuple(self.participants))

    def __len__(self):
        return len(self.participants)

    def __iter__(self):
        return iter(self.participants)

    def __getitem__(self, key):
        for record in self.participants:
            if record.participant_id == key:
                return record
        raise KeyError(f"participant '{key}' not found in dataset")

    @property
    def ids(self):
        return [r.participant_id for r in self.participants]

    @property
    def n_trials(self):
        return sum(len(r) for r in self.participants)


@dataclass(frozen=True)
class ClassifierOutcome:
    """ accuracy of one classifier on one participant """
    accuracy: float
    orientation: Orientation
    n_trials_evaluated: int
    threshold: Optional[float] = None
    participant_id: Optional[str] = None
    repetition_accuracies: tuple = ()

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(f"accuracy {self.accuracy} outside [0, 1]")

    def to_dict(self):
        return {
            'participant_id': self.participant_id,
            'accuracy': self.accuracy,
            # an all-slow trained cut has threshold -inf
            'threshold': self.threshold if self.threshold is None or math.isfinite(self.threshold) else None,
            'orientation': self.orientation.value,
            'n_trials_evaluated': self.n_trials_evaluated,
            'repetition_accuracies': list(self.repetition_accuracies)
        }


#####################################################################################################################
#
# Summaries
#
#####################################################################################################################

@dataclass(frozen=True)
class ConditionSummary:
    count: int
    mean: float
    sd: float


@dataclass(frozen=True)
class ParticipantSummary:
    participant_id: str
    congruent: ConditionSummary
    incongruent: ConditionSummary
    pooled_sd: float

    @property
    def mean_diff(self):
        """ incongruent minus congruent mean (ms) """
        return self.incongruent.mean - self.congruent.mean


def _condition_summary(values):
    return ConditionSummary(int(values.size), float(values.mean()), sample_sd(values))


def summarize_participant(record: ParticipantRecord) -> ParticipantSummary:
    """ per-condition count / mean / SD plus the df-weighted pooled SD """
    record.require(2)
    con = record.condition_rts(Condition.CONGRUENT)
    inc = record.condition_rts(Condition.INCONGRUENT)
    return ParticipantSummary(
        record.participant_id,
        _condition_summary(con),
        _condition_summary(inc),
        pooled_sd([con, inc]))


@dataclass(frozen=True)
class WithinSubjectSD:
    """ the two readings of the average within-subject trial SD """
    mean_of_pooled: float   # mean over participants of each participant's pooled SD
    grand_pooled: float     # one pooled SD over all participant x condition cells


def within_subject_sd(ds: Dataset) -> WithinSubjectSD:
    summaries = [summarize_participant(r) for r in ds]
    if not summaries:
        raise DegenerateData('dataset has no participants')

    ss, df = 0.0, 0
    for s in summaries:
        for c in (s.congruent, s.incongruent):
            ss += (c.count - 1) * c.sd**2
            df += c.count - 1

    return WithinSubjectSD(
        float(np.mean([s.pooled_sd for s in summaries])),
        math.sqrt(ss / df))


#####################################################################################################################
#
# Validation
#
#####################################################################################################################

class ViolationKind(enum.Enum):
    NON_POSITIVE_RT = 'NonPositiveRT'
    NON_FINITE_RT = 'NonFiniteRT'
    DUPLICATE_PARTICIPANT = 'DuplicateParticipant'
    TOO_FEW_TRIALS = 'TooFewTrials'

    @property
    def severity(self):
        return 'warning' if self is ViolationKind.TOO_FEW_TRIALS else 'error'


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    participant_id: str
    detail: str = ''

    @property
    def severity(self):
        return self.kind.severity

    def __str__(self):
        return f"{self.kind.value} [{self.participant_id}] {self.detail}".rstrip()


def validate_dataset(ds: Dataset):
    """ list every broken invariant of the dataset, empty when well-formed """
    violations = []

    seen = Counter(ds.ids)
    for pid, n in seen.items():
        if n > 1:
            violations.append(Violation(ViolationKind.DUPLICATE_PARTICIPANT, pid, f"appears {n} times"))

    for record in ds:
        rt = record.rt
        finite = np.isfinite(rt)
        for i in np.flatnonzero(~finite):
            violations.append(Violation(ViolationKind.NON_FINITE_RT, record.participant_id, f"trial {i}: rt={rt[i]}"))
        for i in np.flatnonzero(finite & (rt <= 0)):
            violations.append(Violation(ViolationKind.NON_POSITIVE_RT, record.participant_id, f"trial {i}: rt={rt[i]}"))

        n_con, n_inc = record.counts()
        if min(n_con, n_inc) < 2:
            violations.append(Violation(
                ViolationKind.TOO_FEW_TRIALS, record.participant_id,
                f"{n_con} congruent / {n_inc} incongruent trials"))

    return violations
