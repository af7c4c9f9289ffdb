""" single-trial step-function classifiers: median, trained and over-optimistic upper bound """

import hashlib
import logging
import math
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .core import ClassifierOutcome, Dataset, Orientation, ParticipantRecord
from .errors import DegenerateData, EmptyInput
from .math import midpoints, sample_sd
from .params import Parameter, Parameterizable

__all__ = (
    'StepClassifier',
    'SplitProtocol',
    'AccuracySummary',
    'ParticipantClassification',
    'REFERENCE_PROTOCOL',
    'MEDIAN',
    'TRAINED',
    'UPPER_BOUND',
    'METHODS',
    'best_step_classifier',
    'median_classifier',
    'train_step_classifier',
    'upper_bound',
    'aggregate',
    'classify_participant',
    'classify_dataset',
    'exemplary_participants'
)

logger = logging.getLogger(__name__)

MEDIAN = 'median'
TRAINED = 'trained'
UPPER_BOUND = 'upper_bound'
METHODS = (MEDIAN, TRAINED, UPPER_BOUND)


@dataclass(frozen=True)
class StepClassifier:
    """ labels x <= threshold as the fast class and x > threshold as the slow class """
    threshold: float
    orientation: Orientation = Orientation.FAST_IS_CONGRUENT

    def predict(self, rt):
        """ condition codes (0 congruent, 1 incongruent) for an array of RTs """
        slow = np.asarray(rt, dtype=float) > self.threshold
        if self.orientation is Orientation.FAST_IS_CONGRUENT:
            return slow.astype(np.int8)
        return (~slow).astype(np.int8)

    def correct(self, rt, labels) -> int:
        return int(np.count_nonzero(self.predict(rt) == labels))


class SplitProtocol(Parameterizable):
    """ random train/test split repeated a fixed number of times """
    train_fraction = Parameter(0.5, float, fvalidate=lambda v: 0 < v < 1, rule='0 < train_fraction < 1',
                               doc='share of each condition used for training')
    repetitions = Parameter(10, int, fvalidate=lambda v: v >= 1, rule='repetitions >= 1',
                            doc='number of independent random splits')
    seed = Parameter(0, int, fvalidate=lambda v: v >= 0, rule='seed >= 0',
                     doc='root of the per-participant split streams')


REFERENCE_PROTOCOL = SplitProtocol()


#####################################################################################################################
#
# Threshold scan
#
#####################################################################################################################

def best_step_classifier(rt, labels, on_data=False):
    """ exhaustive search for the step classifier with the most correct labels

    Candidates are 1 ms below the minimum, the midpoints between consecutive
    distinct RTs and 1 ms above the maximum, each in both orientations. Ties go
    to FAST_IS_CONGRUENT, then to the lowest threshold.

    With on_data the threshold of a cut is the largest RT at or below it (-inf
    for the empty cut). Decisions then depend on RT ranks only.

    returns:
        (StepClassifier, number of correctly labelled trials)
    """
    rt = np.asarray(rt, dtype=float)
    labels = np.asarray(labels)
    n = rt.size
    if n == 0:
        raise DegenerateData('cannot scan thresholds over an empty trial set')

    order = np.argsort(rt, kind='stable')
    xs = rt[order]
    inc = labels[order] == 1
    n_inc = int(np.count_nonzero(inc))

    # cut k puts the first k sorted trials at or below the threshold
    last = np.flatnonzero(np.diff(xs) > 0) + 1
    cuts = np.concatenate(([0], last, [n]))
    inc_le = np.concatenate(([0], np.cumsum(inc)))[cuts]
    con_le = cuts - inc_le

    correct_fc = con_le + (n_inc - inc_le)
    correct_fi = n - correct_fc

    thresholds = np.empty(cuts.size)
    if on_data:
        thresholds[0] = -math.inf
        thresholds[1:] = xs[cuts[1:] - 1]
    else:
        thresholds[0] = xs[0] - 1.0
        thresholds[-1] = xs[-1] + 1.0
        thresholds[1:-1] = midpoints(xs)[cuts[1:-1] - 1]

    i_fc = int(np.argmax(correct_fc))
    i_fi = int(np.argmax(correct_fi))
    if correct_fc[i_fc] >= correct_fi[i_fi]:
        return StepClassifier(float(thresholds[i_fc]), Orientation.FAST_IS_CONGRUENT), int(correct_fc[i_fc])
    return StepClassifier(float(thresholds[i_fi]), Orientation.FAST_IS_INCONGRUENT), int(correct_fi[i_fi])


#####################################################################################################################
#
# Classifiers
#
#####################################################################################################################

def median_classifier(record: ParticipantRecord) -> ClassifierOutcome:
    """ threshold at the pooled median RT, congruent trials assumed fast """
    record.require(1)
    clf = StepClassifier(float(np.median(record.rt)), Orientation.FAST_IS_CONGRUENT)
    n = len(record)
    return ClassifierOutcome(
        accuracy=clf.correct(record.rt, record.labels) / n,
        orientation=clf.orientation,
        n_trials_evaluated=n,
        threshold=clf.threshold,
        participant_id=record.participant_id)


def _stream(seed, participant_id, repetition):
    digest = hashlib.sha256(participant_id.encode('utf-8')).digest()
    pid = int.from_bytes(digest[:8], 'little')
    return np.random.default_rng(np.random.SeedSequence([seed, pid, repetition]))


def _split(indices, fraction, rng):
    """ random (train, test) partition, train takes the extra trial of odd counts """
    n = indices.size
    n_train = min(n - 1, max(1, math.ceil(n * fraction)))
    perm = rng.permutation(indices)
    return perm[:n_train], perm[n_train:]


def train_step_classifier(record: ParticipantRecord, protocol: SplitProtocol = REFERENCE_PROTOCOL) -> ClassifierOutcome:
    """ fit the threshold on a random training half, score on the test half, average over repetitions

    The split is stratified: each condition is divided independently so both
    halves keep equal class priors. Streams derive from (seed, participant_id,
    repetition), so results do not depend on scheduling.
    """
    record.require(2)
    con_idx = np.flatnonzero(record.labels == 0)
    inc_idx = np.flatnonzero(record.labels == 1)

    accuracies = []
    clf, n_test = None, 0
    for rep in range(protocol.repetitions):
        rng = _stream(protocol.seed, record.participant_id, rep)
        con_train, con_test = _split(con_idx, protocol.train_fraction, rng)
        inc_train, inc_test = _split(inc_idx, protocol.train_fraction, rng)
        train = np.concatenate((con_train, inc_train))
        test = np.concatenate((con_test, inc_test))

        clf, _ = best_step_classifier(record.rt[train], record.labels[train], on_data=True)
        n_test = test.size
        accuracies.append(clf.correct(record.rt[test], record.labels[test]) / n_test)

    return ClassifierOutcome(
        accuracy=float(np.mean(accuracies)),
        orientation=clf.orientation,
        n_trials_evaluated=n_test,
        threshold=clf.threshold,
        participant_id=record.participant_id,
        repetition_accuracies=tuple(accuracies))


def upper_bound(record: ParticipantRecord) -> ClassifierOutcome:
    """ best step classifier chosen and scored on all trials (over-optimistic) """
    record.require(1)
    clf, correct = best_step_classifier(record.rt, record.labels)
    n = len(record)
    return ClassifierOutcome(
        accuracy=correct / n,
        orientation=clf.orientation,
        n_trials_evaluated=n,
        threshold=clf.threshold,
        participant_id=record.participant_id)


#####################################################################################################################
#
# Aggregation
#
#####################################################################################################################

@dataclass(frozen=True)
class AccuracySummary:
    per_participant: tuple
    mean_accuracy: float
    sd_accuracy: float
    sd_defined: bool = True

    @property
    def accuracies(self):
        return np.array([o.accuracy for o in self.per_participant])

    def to_dict(self):
        return {
            'mean_accuracy': self.mean_accuracy,
            'sd_accuracy': self.sd_accuracy,
            'sd_defined': self.sd_defined,
            'n_participants': len(self.per_participant),
            'per_participant': [o.to_dict() for o in self.per_participant]
        }


def aggregate(outcomes) -> AccuracySummary:
    """ mean and (n-1) SD of per-participant accuracies, SD reported as 0 for a single outcome """
    outcomes = tuple(outcomes)
    if not outcomes:
        raise EmptyInput('cannot aggregate an empty list of classifier outcomes')

    acc = np.array([o.accuracy for o in outcomes])
    if acc.size == 1:
        return AccuracySummary(outcomes, float(acc[0]), 0.0, sd_defined=False)
    return AccuracySummary(outcomes, float(acc.mean()), sample_sd(acc))


@dataclass(frozen=True)
class ParticipantClassification:
    participant_id: str
    median: ClassifierOutcome
    trained: ClassifierOutcome
    upper: ClassifierOutcome


def classify_participant(record: ParticipantRecord, protocol: SplitProtocol = REFERENCE_PROTOCOL):
    """ all three classifiers on one participant """
    return ParticipantClassification(
        record.participant_id,
        median_classifier(record),
        train_step_classifier(record, protocol),
        upper_bound(record))


def classify_dataset(ds: Dataset, protocol: SplitProtocol = REFERENCE_PROTOCOL, workers=1):
    """ per-participant classification of a whole dataset

    returns:
        dict mapping MEDIAN / TRAINED / UPPER_BOUND to an AccuracySummary
    """
    if len(ds) == 0:
        raise EmptyInput('dataset has no participants to classify')

    # joblib returns results in submission order
    logger.info('classifying %d participants with %d worker(s)', len(ds), workers)
    results = Parallel(n_jobs=max(1, workers))(delayed(classify_participant)(record, protocol) for record in ds)

    return {
        MEDIAN: aggregate(r.median for r in results),
        TRAINED: aggregate(r.trained for r in results),
        UPPER_BOUND: aggregate(r.upper for r in results)
    }


def exemplary_participants(summary: AccuracySummary):
    """ ids of the participant with median accuracy and the one with maximal accuracy """
    ranked = sorted(summary.per_participant, key=lambda o: (o.accuracy, o.participant_id or ''))
    middle = ranked[(len(ranked) - 1) // 2]
    return middle.participant_id, ranked[-1].participant_id
