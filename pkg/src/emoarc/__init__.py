"""Emotion arcs from lexicons or simulated classifiers, scored against gold arcs."""

from .arcgen import (
    ArcConfig,
    EmotionArc,
    gold_arc,
    instance_arc,
    predicted_arc,
    read_arc,
    rolling_mean,
    score_instance,
    standardize,
    write_arc,
)
from .errors import DegenerateArcError, EmoArcError, EmptyWindowError, FormatError
from .evaluate import (
    STANDARD_BINS,
    STANDARD_THRESHOLDS,
    EvalReport,
    OracleMethod,
    SweepGrid,
    evaluate_pair,
    spearman,
    sweep,
    write_reports,
)
from .ingest import (
    ColumnMapping,
    LabeledCorpus,
    LabelScheme,
    OrderPolicy,
    load_corpus,
    relabel_to_unit,
    save_corpus,
)
from .lexstore import (
    EmotionLexicon,
    ThresholdSpec,
    load_lexicon,
    lookup,
    save_lexicon,
    threshold_lexicon,
)
from .oracle import OracleConfig, oracle_curve, simulate_labels
from .synthgen import SynthSpec, generate
from .textprep import tokenize

__version__ = "0.1.0"
