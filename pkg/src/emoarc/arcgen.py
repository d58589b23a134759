"""Gold and predicted emotion arcs by rolling-window aggregation.

A window of ``bin_size`` consecutive instances starts at every ``stride``-th
instance, so a corpus of N instances yields ``(N - bin_size) // stride + 1``
arc points.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DegenerateArcError, EmptyWindowError, FormatError
from .ingest import LabeledCorpus
from .lexstore import EmotionLexicon, ThresholdSpec, threshold_lexicon
from .textprep import tokenize_all

OOV_POLICIES = ("drop_na", "zero")
GRANULARITIES = ("instance_mean", "window_word_pool")


@dataclass(frozen=True)
class ArcConfig:
    bin_size: int
    stride: int = 1
    oov_policy: str = "zero"
    scoring_granularity: str = "instance_mean"
    threshold: Optional[ThresholdSpec] = None

    def __post_init__(self):
        if int(self.bin_size) != self.bin_size or self.bin_size < 1:
            raise ValueError(f"bin_size must be a positive integer, got {self.bin_size}")
        if int(self.stride) != self.stride or self.stride < 1:
            raise ValueError(f"stride must be a positive integer, got {self.stride}")
        if self.oov_policy not in OOV_POLICIES:
            raise ValueError(f"unknown OOV policy {self.oov_policy!r}")
        if self.scoring_granularity not in GRANULARITIES:
            raise ValueError(f"unknown scoring granularity {self.scoring_granularity!r}")

    def to_dict(self) -> dict:
        return {
            "bin_size": self.bin_size,
            "stride": self.stride,
            "oov_policy": self.oov_policy,
            "scoring_granularity": self.scoring_granularity,
            "threshold": (
                None if self.threshold is None
                else {"tau": self.threshold.tau, "mode": self.threshold.mode}
            ),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ArcConfig":
        d = dict(d)
        if d.get("threshold"):
            d["threshold"] = ThresholdSpec(**d["threshold"])
        return cls(**d)


@dataclass(frozen=True, eq=False)
class EmotionArc:
    values: np.ndarray
    window_starts: np.ndarray
    standardized: bool = False
    config: Optional[ArcConfig] = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        starts = np.asarray(self.window_starts, dtype=np.int64)
        if values.shape != starts.shape or values.ndim != 1:
            raise ValueError("values and window_starts must be 1-d and of equal length")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "window_starts", starts)

    def __len__(self) -> int:
        return len(self.values)


def n_windows(n: int, bin_size: int, stride: int = 1) -> int:
    if bin_size > n:
        return 0
    return (n - bin_size) // stride + 1


def window_starts(n: int, bin_size: int, stride: int = 1) -> np.ndarray:
    return np.arange(n_windows(n, bin_size, stride), dtype=np.int64) * stride


def window_sums(x, bin_size: int, stride: int = 1) -> np.ndarray:
    """Sum of every window; each window is reduced on its own, left to right in memory."""
    x = np.asarray(x)
    if bin_size > len(x):
        raise ValueError(f"bin_size {bin_size} exceeds series length {len(x)}")
    return sliding_window_view(x, bin_size)[::stride].sum(axis=1)


def rolling_mean(x, bin_size: int, stride: int = 1) -> np.ndarray:
    """Window means of ``x``; NaN entries are skipped.

    Raises :class:`EmptyWindowError` when a window holds only NaNs.
    """
    x = np.asarray(x, dtype=float)
    if len(x) == 0:
        raise ValueError("cannot build an arc from an empty series")
    missing = np.isnan(x)
    if not missing.any():
        return window_sums(x, bin_size, stride) / bin_size
    counts = window_sums((~missing).astype(np.int64), bin_size, stride)
    if (counts == 0).any():
        first = int(np.argmax(counts == 0)) * stride
        raise EmptyWindowError(f"window has no scorable content (window starting at {first})")
    return window_sums(np.where(missing, 0.0, x), bin_size, stride) / counts


def _check_corpus(corpus: LabeledCorpus, config: ArcConfig) -> None:
    if len(corpus) == 0:
        raise ValueError("corpus is empty")
    if config.bin_size > len(corpus):
        raise ValueError(f"bin_size {config.bin_size} exceeds corpus length {len(corpus)}")


def gold_arc(corpus: LabeledCorpus, config: ArcConfig) -> EmotionArc:
    """Window means of the human labels."""
    _check_corpus(corpus, config)
    gold = corpus.gold
    values = rolling_mean(gold, config.bin_size, config.stride)
    # a mean cannot leave the label range; guard against the last-bit rounding
    np.clip(values, gold.min(), gold.max(), out=values)
    return EmotionArc(
        values,
        window_starts(len(corpus), config.bin_size, config.stride),
        config=config,
        provenance={"kind": "gold", "corpus": corpus.corpus_id, "emotion": corpus.emotion_name},
    )


def lexicon_stats(token_lists: Sequence[Sequence[str]], lex: EmotionLexicon):
    """Per-instance (sum of known scores, known-token count, token count)."""
    n = len(token_lists)
    sums = np.zeros(n)
    known = np.zeros(n, dtype=np.int64)
    total = np.zeros(n, dtype=np.int64)
    entries = lex.entries
    for i, tokens in enumerate(token_lists):
        scores = [entries[t] for t in tokens if t in entries]
        sums[i] = sum(scores)
        known[i] = len(scores)
        total[i] = len(tokens)
    return sums, known, total


def score_instance(tokens: Sequence[str], lex: EmotionLexicon, oov_policy: str) -> Optional[float]:
    """Mean word score of one instance, or ``None`` when nothing can be scored.

    With a 0/1 lexicon and ``oov_policy="zero"`` this is the fraction of
    emotion words.
    """
    if oov_policy not in OOV_POLICIES:
        raise ValueError(f"unknown OOV policy {oov_policy!r}")
    sums, known, total = lexicon_stats([tokens], lex)
    denom = known[0] if oov_policy == "drop_na" else total[0]
    if denom == 0:
        return None
    return float(sums[0] / denom)


def arc_values_from_stats(stats, config: ArcConfig) -> np.ndarray:
    """Arc values from the per-instance output of :func:`lexicon_stats`."""
    sums, known, total = stats
    if not known.any():
        raise EmptyWindowError("window has no scorable content (no lexicon term occurs in the corpus)")
    denom = known if config.oov_policy == "drop_na" else total
    b, s = config.bin_size, config.stride
    if config.scoring_granularity == "instance_mean":
        with np.errstate(invalid="ignore", divide="ignore"):
            per_instance = np.where(denom > 0, sums / np.maximum(denom, 1), np.nan)
        return rolling_mean(per_instance, b, s)
    wden = window_sums(denom, b, s)
    if (wden == 0).any():
        first = int(np.argmax(wden == 0)) * s
        raise EmptyWindowError(f"window has no scorable content (window starting at {first})")
    return window_sums(sums, b, s) / wden


def predicted_arc(
    corpus: LabeledCorpus,
    lex: EmotionLexicon,
    config: ArcConfig,
    tokens: Optional[Sequence[Sequence[str]]] = None,
) -> EmotionArc:
    """Lexicon-only arc.

    ``tokens`` lets callers that score one corpus many times tokenize once.
    Instances with no scorable words are skipped under ``instance_mean``;
    a window with nothing scorable at all raises :class:`EmptyWindowError`.
    """
    _check_corpus(corpus, config)
    if config.threshold is not None:
        lex = threshold_lexicon(lex, config.threshold)
    if tokens is None:
        tokens = tokenize_all(corpus.texts)
    if len(tokens) != len(corpus):
        raise ValueError(f"{len(tokens)} token lists for {len(corpus)} instances")
    values = arc_values_from_stats(lexicon_stats(tokens, lex), config)
    b, s = config.bin_size, config.stride
    return EmotionArc(
        values,
        window_starts(len(corpus), b, s),
        config=config,
        provenance={
            "kind": "lexo",
            "corpus": corpus.corpus_id,
            "emotion": corpus.emotion_name,
            "lexicon": lex.lexicon_id,
        },
    )


def instance_arc(scores, config: ArcConfig, provenance: Optional[dict] = None) -> EmotionArc:
    """Arc from ready-made per-instance scores (NaN = no score), e.g. classifier output."""
    scores = np.asarray(scores, dtype=float)
    if config.bin_size > len(scores):
        raise ValueError(f"bin_size {config.bin_size} exceeds series length {len(scores)}")
    return EmotionArc(
        rolling_mean(scores, config.bin_size, config.stride),
        window_starts(len(scores), config.bin_size, config.stride),
        config=config,
        provenance=dict(provenance or {"kind": "instance"}),
    )


def standardize(arc: EmotionArc) -> EmotionArc:
    """Z-score with the population standard deviation."""
    v = arc.values
    if len(v) < 2:
        raise DegenerateArcError(f"cannot standardize an arc of length {len(v)}")
    if np.all(v == v[0]):
        raise DegenerateArcError("cannot standardize a constant arc")
    centred = v - v.mean()
    # second pass removes the rounding left by a mean far from zero
    centred -= centred.mean()
    sd = math.sqrt(np.mean(centred * centred))
    if not 0.0 < sd < math.inf:
        raise DegenerateArcError(f"arc variance is not representable (std={sd})")
    return EmotionArc(centred / sd, arc.window_starts, True, arc.config, dict(arc.provenance))


def write_arc(arc: EmotionArc, path) -> Path:
    """CSV ``window_start,score`` plus a ``.json`` sidecar with config and provenance."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["window_start", "score"])
        for start, value in zip(arc.window_starts, arc.values):
            writer.writerow([int(start), repr(float(value))])
    sidecar = {
        "n_windows": len(arc),
        "standardized": arc.standardized,
        "config": arc.config.to_dict() if arc.config is not None else None,
        "provenance": arc.provenance,
    }
    with open(path.with_suffix(".json"), "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_arc(path) -> EmotionArc:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"arc file not found: {path}")
    starts, values = [], []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["window_start", "score"]:
            raise FormatError(f"{path}: expected header window_start,score, got {header}")
        for row in reader:
            if len(row) != 2:
                raise FormatError(f"{path}:{reader.line_num}: expected 2 columns")
            try:
                starts.append(int(row[0]))
                values.append(float(row[1]))
            except ValueError:
                raise FormatError(f"{path}:{reader.line_num}: non-numeric value") from None
    meta = {}
    sidecar = path.with_suffix(".json")
    if sidecar.is_file():
        with open(sidecar, encoding="utf-8") as fh:
            meta = json.load(fh)
    config = ArcConfig.from_dict(meta["config"]) if meta.get("config") else None
    return EmotionArc(
        np.array(values),
        np.array(starts, dtype=np.int64),
        bool(meta.get("standardized", False)),
        config,
        meta.get("provenance", {}),
    )
