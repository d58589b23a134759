"""Emotion lexicons: loading, validation, thresholding and lookup.

Three on-disk layouts are understood (UTF-8, tab separated, ``#`` comments):

``two_column``
    ``term<TAB>score``; an optional header row.
``nrc_emolex``
    ``term<TAB>emotion<TAB>score`` rows; only rows of the requested emotion
    are kept.  The NRC Emotion Intensity layout is identical, so it loads
    through the same path with ``granularity="continuous"``.
``nrc_vad_column``
    a required header row naming the term column followed by one column per
    dimension (e.g. ``Word Valence Arousal Dominance``).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .errors import FormatError

log = logging.getLogger(__name__)

FORMATS = ("two_column", "nrc_emolex", "nrc_vad_column")
GRANULARITIES = ("categorical", "continuous")
THRESHOLD_MODES = ("magnitude", "signed")

_META_PREFIX = "#@meta "


@dataclass(frozen=True)
class ThresholdSpec:
    """Keep entries with ``|score| >= tau`` (magnitude) or ``score >= tau`` (signed).

    ``mode=None`` defers to the lexicon: magnitude for lexicons whose range
    goes below zero, signed otherwise.
    """

    tau: float
    mode: Optional[str] = None

    def __post_init__(self):
        if not math.isfinite(self.tau) or self.tau < 0:
            raise ValueError(f"threshold tau must be a finite value >= 0, got {self.tau}")
        if self.mode is not None and self.mode not in THRESHOLD_MODES:
            raise ValueError(f"unknown threshold mode {self.mode!r}")

    def resolve(self, lex: "EmotionLexicon") -> "ThresholdSpec":
        if self.mode is not None:
            return self
        return ThresholdSpec(self.tau, default_threshold_mode(lex))

    def keeps(self, score: float) -> bool:
        if self.mode == "magnitude":
            return abs(score) >= self.tau
        return score >= self.tau


@dataclass(frozen=True)
class EmotionLexicon:
    """Immutable term -> score map plus the metadata needed to interpret it.

    ``n_duplicates`` and ``n_multiword`` are load statistics: terms listed
    more than once (the last occurrence wins) and multi-word entries that were
    rejected because the tokenizer can never produce them.
    """

    emotion_name: str
    granularity: str
    score_range: tuple[float, float]
    entries: Mapping[str, float]
    provenance: str = ""
    labels: Optional[tuple[float, ...]] = None
    threshold: Optional[ThresholdSpec] = None
    n_duplicates: int = field(default=0, compare=False)
    n_multiword: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"unknown granularity {self.granularity!r}")
        lo, hi = (float(v) for v in self.score_range)
        if not lo <= hi:
            raise ValueError(f"empty score range [{lo}, {hi}]")
        object.__setattr__(self, "score_range", (lo, hi))
        labels = self.labels
        if self.granularity == "categorical":
            if labels is None:
                labels = tuple(float(v) for v in range(math.ceil(lo), math.floor(hi) + 1))
            labels = tuple(sorted({float(v) for v in labels}))
            if len(labels) < 2:
                raise ValueError("a categorical lexicon needs at least two labels")
            if labels[0] < lo or labels[-1] > hi:
                raise ValueError(f"labels {labels} fall outside score range [{lo}, {hi}]")
        elif labels is not None:
            raise ValueError("labels are only meaningful for categorical lexicons")
        object.__setattr__(self, "labels", labels)
        allowed = set(labels) if labels is not None else None
        for term, score in self.entries.items():
            _check_term(term)
            if not lo <= score <= hi:
                raise FormatError(f"score {score} for {term!r} outside [{lo}, {hi}]")
            if allowed is not None and score not in allowed:
                raise FormatError(f"score {score} for {term!r} is not one of the labels {labels}")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, term: str) -> bool:
        return term in self.entries

    def lookup(self, term: str) -> Optional[float]:
        return self.entries.get(term)

    @property
    def lexicon_id(self) -> str:
        name = self.provenance or self.emotion_name
        if self.threshold is not None:
            name += f"@{self.threshold.mode}>={self.threshold.tau:g}"
        return name

    def metadata(self) -> dict:
        return {
            "emotion_name": self.emotion_name,
            "granularity": self.granularity,
            "score_range": list(self.score_range),
            "labels": list(self.labels) if self.labels is not None else None,
            "provenance": self.provenance,
            "threshold": (
                {"tau": self.threshold.tau, "mode": self.threshold.mode}
                if self.threshold is not None else None
            ),
            "n_entries": len(self.entries),
        }


def lookup(lex: EmotionLexicon, term: str) -> Optional[float]:
    """Score of ``term`` or ``None``; what to do with ``None`` is the caller's OOV policy."""
    return lex.entries.get(term)


def default_threshold_mode(lex: EmotionLexicon) -> str:
    return "magnitude" if lex.score_range[0] < 0 else "signed"


def threshold_lexicon(lex: EmotionLexicon, spec: ThresholdSpec) -> EmotionLexicon:
    """Return a new lexicon holding only the entries that pass ``spec``.

    Comparison is inclusive, so ``tau=0`` with signed mode is the identity
    on a non-negative lexicon.  An empty result is allowed.
    """
    bound = max(abs(lex.score_range[0]), abs(lex.score_range[1]))
    if spec.tau > bound:
        raise ValueError(f"tau={spec.tau} outside [0, {bound}] for lexicon {lex.lexicon_id!r}")
    spec = spec.resolve(lex)
    kept = {t: s for t, s in lex.entries.items() if spec.keeps(s)}
    if not kept:
        log.warning("threshold %s removed every entry of %s", spec, lex.lexicon_id)
    return replace(lex, entries=kept, threshold=spec, n_duplicates=0, n_multiword=0)


def _check_term(term: str) -> None:
    if not isinstance(term, str) or not term:
        raise FormatError(f"lexicon term must be a non-empty string, got {term!r}")
    if term != term.lower():
        raise FormatError(f"lexicon term {term!r} is not lowercase")
    if any(ch.isspace() for ch in term):
        raise FormatError(f"lexicon term {term!r} contains whitespace")


def _parse_score(raw: str, where: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise FormatError(f"{where}: non-numeric score {raw!r}") from None
    if not math.isfinite(value):
        raise FormatError(f"{where}: non-finite score {raw!r}")
    return value


def _data_rows(path: Path) -> Iterable[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            yield lineno, line.split("\t")


def _read_meta(path: Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith(_META_PREFIX):
                return json.loads(line[len(_META_PREFIX):])
            if line.strip() and not line.startswith("#"):
                break
    return {}


def _looks_numeric(raw: str) -> bool:
    try:
        float(raw)
    except ValueError:
        return False
    return True


def load_lexicon(
    path,
    format: str = "two_column",
    emotion: Optional[str] = None,
    *,
    granularity: Optional[str] = None,
    score_range: Optional[tuple[float, float]] = None,
    labels: Optional[Iterable[float]] = None,
    provenance: Optional[str] = None,
) -> EmotionLexicon:
    """Read a lexicon file into a validated :class:`EmotionLexicon`.

    Keyword metadata overrides what a ``#@meta`` line written by
    :func:`save_lexicon` declares, which in turn overrides per-format defaults
    (EmoLex: categorical 0/1; otherwise continuous on [-1, 1]).
    """
    path = Path(path)
    if format not in FORMATS:
        raise ValueError(f"unknown lexicon format {format!r}; expected one of {FORMATS}")
    if not path.is_file():
        raise FileNotFoundError(f"lexicon file not found: {path}")
    meta = _read_meta(path)
    if format == "nrc_emolex":
        defaults = {"granularity": "categorical", "score_range": (0.0, 1.0), "labels": (0.0, 1.0)}
    else:
        defaults = {"granularity": "continuous", "score_range": (-1.0, 1.0), "labels": None}
    if granularity is None:
        granularity = meta.get("granularity", defaults["granularity"])
    if score_range is None:
        score_range = tuple(meta.get("score_range") or defaults["score_range"])
    if labels is None:
        labels = meta.get("labels")
        if labels is None and granularity == defaults["granularity"]:
            labels = defaults["labels"]
    if emotion is None:
        emotion = meta.get("emotion_name")
    if emotion is None:
        if format != "two_column":
            raise ValueError(f"format {format!r} needs the emotion/dimension to select")
        emotion = path.stem
    if provenance is None:
        provenance = meta.get("provenance") or path.name

    entries: dict[str, float] = {}
    n_dup = n_multi = 0
    rows = _data_rows(path)

    def add(term: str, score: float):
        nonlocal n_dup, n_multi
        term = term.strip().lower()
        if len(term.split()) > 1:
            n_multi += 1
            return
        if term in entries:
            n_dup += 1
        entries[term] = score

    if format == "two_column":
        for i, (lineno, cols) in enumerate(rows):
            if len(cols) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 columns, got {len(cols)}")
            if i == 0 and not _looks_numeric(cols[1]):
                continue  # header
            add(cols[0], _parse_score(cols[1], f"{path}:{lineno}"))
    elif format == "nrc_emolex":
        seen_emotions = set()
        for lineno, cols in rows:
            if len(cols) != 3:
                raise FormatError(f"{path}:{lineno}: expected 3 columns, got {len(cols)}")
            seen_emotions.add(cols[1].strip().lower())
            if cols[1].strip().lower() == emotion.lower():
                add(cols[0], _parse_score(cols[2], f"{path}:{lineno}"))
        if emotion.lower() not in seen_emotions:
            raise FormatError(
                f"{path}: emotion {emotion!r} not present (found {sorted(seen_emotions)})"
            )
    else:
        header = next(rows, None)
        if header is None:
            raise FormatError(f"{path}: empty file, header row required")
        names = [h.strip().lower() for h in header[1]]
        if emotion.lower() not in names[1:]:
            raise FormatError(f"{path}: dimension {emotion!r} not in header {names[1:]}")
        col = names.index(emotion.lower(), 1)
        for lineno, cols in rows:
            if len(cols) != len(names):
                raise FormatError(
                    f"{path}:{lineno}: expected {len(names)} columns, got {len(cols)}"
                )
            add(cols[0], _parse_score(cols[col], f"{path}:{lineno}"))

    if n_dup:
        log.warning("%s: %d duplicate terms, last occurrence kept", path, n_dup)
    if n_multi:
        log.warning("%s: %d multi-word entries rejected", path, n_multi)
    threshold = meta.get("threshold")
    return EmotionLexicon(
        emotion_name=emotion,
        granularity=granularity,
        score_range=tuple(score_range),
        entries=entries,
        provenance=provenance,
        labels=tuple(labels) if labels is not None else None,
        threshold=ThresholdSpec(**threshold) if threshold else None,
        n_duplicates=n_dup,
        n_multiword=n_multi,
    )


def format_score(value: float) -> str:
    """Shortest text that parses back to exactly ``value``."""
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def save_lexicon(lex: EmotionLexicon, path) -> Path:
    """Write ``lex`` as a two_column file whose ``#@meta`` line makes reloading lossless."""
    path = Path(path)
    meta = lex.metadata()
    meta.pop("n_entries")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_META_PREFIX + json.dumps(meta, sort_keys=True) + "\n")
        fh.write("term\tscore\n")
        for term in sorted(lex.entries):
            fh.write(f"{term}\t{format_score(lex.entries[term])}\n")
    return path
