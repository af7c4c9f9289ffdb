from pathlib import Path

import numpy as np
import pytest

from rtaudit.core import Dataset, ParticipantRecord
from rtaudit.simulate import SimulationConfig, synthesize_dataset

DATA = Path(__file__).resolve().parent.parent / 'data'


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long Monte-Carlo acceptance runs')


def record(pid, congruent, incongruent):
    """ participant with the congruent trials first, then the incongruent ones """
    rt = list(congruent) + list(incongruent)
    labels = np.array([0] * len(congruent) + [1] * len(incongruent), dtype=np.int8)
    return ParticipantRecord(pid, rt, labels)


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def make_record():
    return record


@pytest.fixture
def tiny_dataset():
    return Dataset([
        record('a', [500, 520, 540], [530, 550, 570]),
        record('b', [600, 610, 640], [620, 650, 660]),
        record('c', [450, 480, 470], [455, 495, 500])
    ])


@pytest.fixture
def small_config():
    return SimulationConfig(participants=6, trials_per_condition=30, delta_ms=50.0, replications=3, repetitions=3)


@pytest.fixture
def small_dataset(small_config):
    return synthesize_dataset(small_config, 0)
