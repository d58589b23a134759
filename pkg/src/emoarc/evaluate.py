"""Rank correlation between arcs, evaluation reports and experiment sweeps."""

from __future__ import annotations

import csv
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .arcgen import (
    GRANULARITIES,
    OOV_POLICIES,
    ArcConfig,
    EmotionArc,
    arc_values_from_stats,
    gold_arc,
    lexicon_stats,
    standardize,
)
from .errors import DegenerateArcError, EmptyWindowError
from .ingest import LabeledCorpus
from .lexstore import EmotionLexicon, ThresholdSpec, threshold_lexicon
from .textprep import tokenize_all

STANDARD_BINS = (1, 10, 50, 100, 200, 300)
STANDARD_THRESHOLDS = (0.0, 0.25, 0.33, 0.5, 0.66, 0.75)

REPORT_COLUMNS = (
    "corpus", "emotion", "method", "lexicon", "accuracy", "granularity", "oov",
    "tau", "tau_mode", "bin", "stride", "n_windows", "rho", "rho_min", "rho_max",
    "trials", "status",
)


def average_ranks(x) -> np.ndarray:
    """1-based ranks; tied values share the mean of the positions they occupy."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    # group boundaries in sorted order
    starts = np.flatnonzero(np.r_[True, xs[1:] != xs[:-1]])
    ends = np.r_[starts[1:], n]
    group_rank = (starts + ends + 1) / 2.0
    ranks = np.empty(n)
    ranks[order] = np.repeat(group_rank, ends - starts)
    return ranks


def _as_values(arc) -> np.ndarray:
    return arc.values if isinstance(arc, EmotionArc) else np.asarray(arc, dtype=float)


def spearman(a: Union[EmotionArc, Sequence[float]], b: Union[EmotionArc, Sequence[float]]) -> float:
    """Spearman's rho: Pearson correlation of average ranks.

    Raises ``ValueError`` on length or window mismatch and
    :class:`DegenerateArcError` when either side is constant or shorter than 2.
    """
    if isinstance(a, EmotionArc) and isinstance(b, EmotionArc):
        if len(a) == len(b) and not np.array_equal(a.window_starts, b.window_starts):
            raise ValueError("arcs are not aligned: window_starts differ")
    x, y = _as_values(a), _as_values(b)
    if len(x) != len(y):
        raise ValueError(f"arc lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise DegenerateArcError(f"need at least 2 windows, got {n}")
    if np.isnan(x).any() or np.isnan(y).any():
        raise ValueError("arcs contain NaN")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateArcError("rank correlation is undefined for a constant arc")
    # half-integer ranks around an exact mean: the sums below are exact
    mid = (n + 1) / 2.0
    rx = average_ranks(x) - mid
    ry = average_ranks(y) - mid
    rho = float(np.dot(rx, ry) / math.sqrt(float(np.dot(rx, rx)) * float(np.dot(ry, ry))))
    return min(1.0, max(-1.0, rho))


@dataclass
class EvalReport:
    """One evaluated cell; ``rho`` is ``None`` unless ``status == "ok"``."""

    rho: Optional[float]
    n_windows: int
    status: str = "ok"
    corpus: str = ""
    emotion: str = ""
    method: str = "lexo"
    lexicon: Optional[str] = None
    accuracy: Optional[float] = None
    config: Optional[ArcConfig] = None
    rho_min: Optional[float] = None
    rho_max: Optional[float] = None
    trials: Optional[int] = None
    standardized: tuple[bool, bool] = (False, False)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def row(self) -> dict:
        cfg = self.config
        thr = cfg.threshold if cfg is not None else None

        def num(v):
            return "" if v is None else f"{v:.6f}"

        return {
            "corpus": self.corpus,
            "emotion": self.emotion,
            "method": self.method,
            "lexicon": self.lexicon or "",
            "accuracy": "" if self.accuracy is None else repr(self.accuracy),
            "granularity": cfg.scoring_granularity if cfg else "",
            "oov": cfg.oov_policy if cfg else "",
            "tau": "" if thr is None else repr(thr.tau),
            "tau_mode": "" if thr is None or thr.mode is None else thr.mode,
            "bin": cfg.bin_size if cfg else "",
            "stride": cfg.stride if cfg else "",
            "n_windows": self.n_windows,
            "rho": num(self.rho),
            "rho_min": num(self.rho_min),
            "rho_max": num(self.rho_max),
            "trials": "" if self.trials is None else self.trials,
            "status": self.status,
        }

    def to_json(self) -> dict:
        def r6(v):
            return None if v is None else round(v, 6)

        return {
            "corpus": self.corpus,
            "emotion": self.emotion,
            "method": self.method,
            "lexicon": self.lexicon,
            "accuracy": self.accuracy,
            "config": self.config.to_dict() if self.config is not None else None,
            "n_windows": self.n_windows,
            "rho": r6(self.rho),
            "rho_min": r6(self.rho_min),
            "rho_max": r6(self.rho_max),
            "trials": self.trials,
            "standardized": list(self.standardized),
            "status": self.status,
            "message": self.message,
        }


def status_of(exc: Exception) -> str:
    if isinstance(exc, DegenerateArcError):
        return "degenerate"
    if isinstance(exc, EmptyWindowError):
        return "empty_window"
    return "invalid"


def evaluate_pair(gold: EmotionArc, pred: EmotionArc, **ids) -> EvalReport:
    """Correlate a predicted arc with its gold arc.

    Raw or standardized inputs give the same rho; the report records which
    was used.  ``ids`` fills report fields such as ``corpus`` or ``lexicon``.
    """
    rho = spearman(gold, pred)
    ids.setdefault("corpus", gold.provenance.get("corpus", ""))
    ids.setdefault("emotion", gold.provenance.get("emotion", ""))
    ids.setdefault("lexicon", pred.provenance.get("lexicon"))
    ids.setdefault("method", pred.provenance.get("kind", "pair"))
    ids.setdefault("config", pred.config or gold.config)
    return EvalReport(rho=rho, n_windows=len(gold),
                      standardized=(gold.standardized, pred.standardized), **ids)


@dataclass(frozen=True)
class OracleMethod:
    """Sweep method: instance labels from a simulated classifier of each accuracy."""

    accuracies: tuple[float, ...]
    trials: int = 20
    seed: int = 0
    confusion: str = "uniform"


@dataclass
class SweepGrid:
    bin_sizes: Sequence[int] = STANDARD_BINS
    oov_policies: Sequence[str] = OOV_POLICIES
    thresholds: Sequence[Optional[ThresholdSpec]] = (None,)
    lexicons: Sequence[EmotionLexicon] = ()
    granularities: Sequence[str] = ("instance_mean",)
    stride: int = 1

    def __post_init__(self):
        for name in ("bin_sizes", "oov_policies", "thresholds", "granularities"):
            if not len(getattr(self, name)):
                raise ValueError(f"sweep grid {name} is empty")
        for p in self.oov_policies:
            if p not in OOV_POLICIES:
                raise ValueError(f"unknown OOV policy {p!r}")
        for g in self.granularities:
            if g not in GRANULARITIES:
                raise ValueError(f"unknown scoring granularity {g!r}")

    @classmethod
    def standard(cls, lexicons: Sequence[EmotionLexicon], thresholds=None, **kwargs) -> "SweepGrid":
        """Bins 1..300, stride 1, both OOV policies."""
        if thresholds is None:
            thresholds = (None,)
        return cls(STANDARD_BINS, OOV_POLICIES, tuple(thresholds), tuple(lexicons), stride=1, **kwargs)

    def cells(self):
        return list(itertools.product(
            range(len(self.lexicons)), self.thresholds, self.granularities,
            self.oov_policies, self.bin_sizes,
        ))

    def to_dict(self) -> dict:
        return {
            "bin_sizes": list(self.bin_sizes),
            "oov_policies": list(self.oov_policies),
            "thresholds": [None if t is None else {"tau": t.tau, "mode": t.mode}
                           for t in self.thresholds],
            "lexicons": [lex.metadata() for lex in self.lexicons],
            "granularities": list(self.granularities),
            "stride": self.stride,
        }


def _map(fn, items, n_jobs: int):
    if n_jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))


def sweep(
    corpus: LabeledCorpus,
    grid: SweepGrid,
    method: Union[str, OracleMethod] = "lexo",
    *,
    n_jobs: int = 1,
    standardize_arcs: bool = False,
    tokens=None,
) -> list[EvalReport]:
    """Evaluate every grid cell; failing cells come back with a non-ok status.

    For an :class:`OracleMethod` only ``grid.bin_sizes`` and ``grid.stride``
    are used.  Output is identical for any ``n_jobs``.

    With ``standardize_arcs`` both arcs are z-scored (so constant arcs fail
    as degenerate) but rho is taken from the raw values: z-scoring cannot
    change ranks in exact arithmetic, whereas in floating point it can merge
    window means that differ only in their last bits.
    """
    if isinstance(method, OracleMethod):
        from .oracle import OracleConfig, oracle_curve

        cfg = OracleConfig(accuracy=1.0, seed=method.seed, trials=method.trials,
                           confusion=method.confusion)
        return oracle_curve(corpus, method.accuracies, grid.bin_sizes, cfg,
                            stride=grid.stride, n_jobs=n_jobs)
    if method != "lexo":
        raise ValueError(f"unknown sweep method {method!r}")
    if not grid.lexicons:
        raise ValueError("a lexo sweep needs at least one lexicon")
    if tokens is None:
        tokens = tokenize_all(corpus.texts)

    gold_cache: dict[int, Union[EmotionArc, Exception]] = {}
    for b in grid.bin_sizes:
        try:
            arc = gold_arc(corpus, ArcConfig(b, grid.stride))
            if standardize_arcs:
                standardize(arc)
            gold_cache[b] = arc
        except ValueError as exc:
            gold_cache[b] = exc

    stats_cache: dict = {}
    for li, lex in enumerate(grid.lexicons):
        for thr in grid.thresholds:
            try:
                used = threshold_lexicon(lex, thr) if thr is not None else lex
                stats_cache[li, thr] = (used, lexicon_stats(tokens, used))
            except ValueError as exc:
                stats_cache[li, thr] = (exc, None)

    def run(cell) -> EvalReport:
        li, thr, gran, oov, b = cell
        lex = grid.lexicons[li]
        used, stats = stats_cache[li, thr]
        if thr is not None and isinstance(used, EmotionLexicon):
            thr = used.threshold
        config = ArcConfig(b, grid.stride, oov, gran, thr)
        report = EvalReport(
            rho=None, n_windows=0, corpus=corpus.corpus_id, emotion=corpus.emotion_name,
            method="lexo", lexicon=lex.lexicon_id, config=config,
            standardized=(standardize_arcs, standardize_arcs),
        )
        gold = gold_cache[b]
        try:
            if isinstance(gold, Exception):
                raise gold
            report.n_windows = len(gold)
            if stats is None:
                raise used
            pred = EmotionArc(arc_values_from_stats(stats, config), gold.window_starts, config=config)
            if standardize_arcs:
                standardize(pred)
            report.rho = spearman(gold, pred)
        except ValueError as exc:
            report.status = status_of(exc)
            report.message = str(exc)
        return report

    return _map(run, grid.cells(), n_jobs)


def best_cell(reports: Sequence[EvalReport]) -> Optional[EvalReport]:
    """Highest-rho ok report; the earliest one wins ties."""
    best = None
    for r in reports:
        if r.ok and (best is None or r.rho > best.rho):
            best = r
    return best


def write_reports(reports: Sequence[EvalReport], path, provenance: Optional[dict] = None) -> Path:
    """Long-format CSV, one row per cell, plus a JSON mirror carrying ``provenance``."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in reports:
            writer.writerow(r.row())
    with open(path.with_suffix(".json"), "w", encoding="utf-8") as fh:
        json.dump({"provenance": provenance or {}, "reports": [r.to_json() for r in reports]},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
