# rtaudit library import

__version__ = '0.1.0'

from .errors import *
from .core import *
from .model import *
from .classify import *
from .inference import *
from .simulate import *
from .histogram import HistogramPair, HistogramAccuracy, histogram_step_accuracy, histogram_bayes_accuracy, ingest_digitized, emit_digitized
from .ingest import ColumnMap, IngestOptions, ingest_trials, emit_trials, fingerprint
from .report import AuditReport, build_report, emit_report, load_report, emit_sweep
from .plot import MeanSemPair, emit_distribution_plot
