"""Simulated instance-level classifier of a chosen accuracy.

Each instance keeps its gold label with probability ``accuracy``; otherwise
it gets one of the other k - 1 labels uniformly at random.  The random draws
for an instance depend only on (seed, trial, instance), where instances are
keyed by their rank in sorted-id order, so reordering a corpus does not
change any instance's fate.  The same draws are reused for every accuracy,
which keeps accuracy curves free of between-cell sampling noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arcgen import ArcConfig, EmotionArc, gold_arc, rolling_mean
from .evaluate import EvalReport, _map, spearman, status_of
from .ingest import LabeledCorpus

CONFUSIONS = ("uniform", "distance")


@dataclass(frozen=True)
class OracleConfig:
    accuracy: float
    seed: int = 0
    trials: int = 20
    # "distance" weights wrong labels by 1/|label distance|; off by default
    confusion: str = "uniform"

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(f"accuracy must lie in [0, 1], got {self.accuracy}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.confusion not in CONFUSIONS:
            raise ValueError(f"unknown confusion model {self.confusion!r}")


def _label_index(corpus: LabeledCorpus) -> np.ndarray:
    scheme = corpus.scheme
    if scheme.kind != "categorical":
        raise ValueError("the oracle needs a categorical label scheme")
    if scheme.k < 2:
        raise ValueError("the oracle needs at least 2 labels")
    return np.searchsorted(np.array(scheme.labels), corpus.gold)


def trial_draws(corpus: LabeledCorpus, seed: int, trial: int) -> np.ndarray:
    """Two uniforms per instance, in corpus order: (keep-or-err, which wrong label)."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, trial]))
    draws = rng.random((len(corpus), 2))
    by_id = np.argsort(np.array(corpus.ids, dtype=object), kind="stable")
    out = np.empty_like(draws)
    out[by_id] = draws
    return out


def _wrong_index(gold_idx: np.ndarray, v: np.ndarray, k: int, confusion: str) -> np.ndarray:
    if confusion == "uniform":
        r = np.minimum((v * (k - 1)).astype(np.int64), k - 2)
        return r + (r >= gold_idx)
    out = np.empty_like(gold_idx)
    cols = np.arange(k)
    for g in np.unique(gold_idx):
        w = np.where(cols == g, 0.0, 1.0 / np.maximum(np.abs(cols - g), 1))
        cdf = np.cumsum(w) / w.sum()
        sel = gold_idx == g
        out[sel] = np.minimum(np.searchsorted(cdf, v[sel], side="right"), k - 1)
    return out


def labels_from_draws(corpus: LabeledCorpus, draws: np.ndarray, accuracy: float,
                      confusion: str = "uniform") -> np.ndarray:
    gold_idx = _label_index(corpus)
    k = corpus.scheme.k
    keep = draws[:, 0] < accuracy
    pred_idx = np.where(keep, gold_idx, _wrong_index(gold_idx, draws[:, 1], k, confusion))
    return np.array(corpus.scheme.labels)[pred_idx]


def simulate_labels(corpus: LabeledCorpus, cfg: OracleConfig, trial: int = 0) -> np.ndarray:
    """Predicted label of every instance for one trial."""
    _label_index(corpus)
    return labels_from_draws(corpus, trial_draws(corpus, cfg.seed, trial), cfg.accuracy,
                             cfg.confusion)


def oracle_arc(corpus: LabeledCorpus, cfg: OracleConfig, config: ArcConfig,
               trial: int = 0) -> EmotionArc:
    labels = simulate_labels(corpus, cfg, trial)
    return EmotionArc(
        rolling_mean(labels, config.bin_size, config.stride),
        gold_arc(corpus, config).window_starts,
        config=config,
        provenance={"kind": "oracle", "corpus": corpus.corpus_id, "accuracy": cfg.accuracy,
                    "seed": cfg.seed, "trial": trial},
    )


def oracle_curve(
    corpus: LabeledCorpus,
    accuracies: Sequence[float],
    bins: Sequence[int],
    cfg: OracleConfig,
    *,
    stride: int = 1,
    n_jobs: int = 1,
) -> list[EvalReport]:
    """Mean (and min/max) rho over ``cfg.trials`` simulations for every (accuracy, bin)."""
    _label_index(corpus)
    for p in accuracies:
        OracleConfig(p, cfg.seed, cfg.trials, cfg.confusion)
    draws = [trial_draws(corpus, cfg.seed, t) for t in range(cfg.trials)]
    gold = {}
    for b in bins:
        try:
            gold[b] = gold_arc(corpus, ArcConfig(b, stride))
        except ValueError as exc:
            gold[b] = exc

    def run(cell) -> EvalReport:
        p, b = cell
        report = EvalReport(
            rho=None, n_windows=0, corpus=corpus.corpus_id, emotion=corpus.emotion_name,
            method="oracle", accuracy=p, config=ArcConfig(b, stride), trials=cfg.trials,
        )
        try:
            g = gold[b]
            if isinstance(g, Exception):
                raise g
            report.n_windows = len(g)
            rhos = []
            for d in draws:
                labels = labels_from_draws(corpus, d, p, cfg.confusion)
                rhos.append(spearman(g.values, rolling_mean(labels, b, stride)))
            report.rho = float(np.mean(rhos))
            report.rho_min = float(min(rhos))
            report.rho_max = float(max(rhos))
        except ValueError as exc:
            report.status = status_of(exc)
            report.message = str(exc)
        return report

    cells = [(p, b) for p in accuracies for b in bins]
    return _map(run, cells, n_jobs)
