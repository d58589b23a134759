"""Labeled corpora: reading, label validation and instance ordering."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import FormatError

ORDER_KINDS = ("as_given", "by_timestamp", "seeded_shuffle")


@dataclass(frozen=True)
class LabelScheme:
    """Either a finite ordered set of numeric labels or a closed interval."""

    kind: str
    labels: Optional[tuple[float, ...]] = None
    value_range: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if self.kind == "categorical":
            if self.labels is None:
                raise ValueError("categorical scheme needs labels")
            labels = tuple(sorted({float(v) for v in self.labels}))
            if len(labels) < 2:
                raise ValueError("categorical scheme needs at least 2 distinct labels")
            object.__setattr__(self, "labels", labels)
            object.__setattr__(self, "value_range", (labels[0], labels[-1]))
        elif self.kind == "continuous":
            if self.value_range is None:
                raise ValueError("continuous scheme needs a value range")
            lo, hi = (float(v) for v in self.value_range)
            if not lo < hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            object.__setattr__(self, "value_range", (lo, hi))
            object.__setattr__(self, "labels", None)
        else:
            raise ValueError(f"unknown scheme kind {self.kind!r}")

    @classmethod
    def categorical(cls, labels: Iterable[float]) -> "LabelScheme":
        return cls("categorical", labels=tuple(labels))

    @classmethod
    def continuous(cls, lo: float = 0.0, hi: float = 1.0) -> "LabelScheme":
        return cls("continuous", value_range=(lo, hi))

    @classmethod
    def parse(cls, text: str) -> "LabelScheme":
        """``categorical:-3..3``, ``categorical:0,1`` or ``continuous:0,1``."""
        kind, _, body = text.partition(":")
        kind = kind.strip()
        if kind == "categorical":
            if ".." in body:
                lo, hi = (int(v) for v in body.split(".."))
                return cls.categorical(range(lo, hi + 1))
            return cls.categorical(float(v) for v in body.split(","))
        if kind == "continuous":
            lo, hi = (float(v) for v in (body or "0,1").split(","))
            return cls.continuous(lo, hi)
        raise ValueError(f"cannot parse label scheme {text!r}")

    @property
    def k(self) -> int:
        """Number of classes (categorical schemes only)."""
        if self.labels is None:
            raise ValueError("continuous schemes have no class count")
        return len(self.labels)

    @property
    def chance_accuracy(self) -> float:
        return 1.0 / self.k

    def conforms(self, value: float) -> bool:
        if self.labels is not None:
            return value in self.labels
        lo, hi = self.value_range
        return lo <= value <= hi

    def to_dict(self) -> dict:
        if self.labels is not None:
            return {"kind": self.kind, "labels": list(self.labels)}
        return {"kind": self.kind, "value_range": list(self.value_range)}


@dataclass(frozen=True)
class OrderPolicy:
    kind: str = "as_given"
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown order policy {self.kind!r}")
        if self.kind == "seeded_shuffle" and self.seed is None:
            raise ValueError("seeded_shuffle needs a seed")

    @classmethod
    def parse(cls, text: str) -> "OrderPolicy":
        """``as_given``, ``by_timestamp`` or ``shuffle:SEED``."""
        if text.startswith(("shuffle:", "seeded_shuffle:")):
            return cls("seeded_shuffle", int(text.split(":", 1)[1]))
        return cls(text)

    def __str__(self):
        return f"seeded_shuffle({self.seed})" if self.kind == "seeded_shuffle" else self.kind


AS_GIVEN = OrderPolicy()


@dataclass(frozen=True)
class ColumnMapping:
    """Which fields of a row hold the text, the label, the id and the timestamp."""

    text: str = "text"
    label: str = "label"
    id: Optional[str] = None
    timestamp: Optional[str] = None


@dataclass(frozen=True)
class Instance:
    id: str
    text: str
    gold: float
    # POSIX seconds; naive ISO datetimes are read as UTC
    timestamp: Optional[float] = None


@dataclass(frozen=True)
class LabeledCorpus:
    instances: tuple[Instance, ...]
    scheme: LabelScheme
    emotion_name: str = "emotion"
    order_policy: OrderPolicy = AS_GIVEN
    corpus_id: str = "corpus"
    _gold: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))
        seen = set()
        for inst in self.instances:
            if inst.id in seen:
                raise FormatError(f"duplicate instance id {inst.id!r}")
            seen.add(inst.id)
            if not self.scheme.conforms(inst.gold):
                raise FormatError(f"label {inst.gold} of {inst.id!r} does not fit {self.scheme}")
        if self.order_policy.kind == "by_timestamp":
            ts = [inst.timestamp for inst in self.instances]
            if any(t is None for t in ts):
                raise FormatError("by_timestamp ordering needs a timestamp on every instance")
            if any(a > b for a, b in zip(ts, ts[1:])):
                raise FormatError("instances are not in nondecreasing timestamp order")
        gold = np.array([inst.gold for inst in self.instances], dtype=float)
        gold.flags.writeable = False
        object.__setattr__(self, "_gold", gold)

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def gold(self) -> np.ndarray:
        return self._gold

    @property
    def texts(self) -> list[str]:
        return [inst.text for inst in self.instances]

    @property
    def ids(self) -> list[str]:
        return [inst.id for inst in self.instances]

    @classmethod
    def from_lists(
        cls,
        texts: Sequence[str],
        gold: Sequence[float],
        scheme: LabelScheme,
        *,
        ids: Optional[Sequence[str]] = None,
        **kwargs,
    ) -> "LabeledCorpus":
        if len(texts) != len(gold):
            raise ValueError(f"{len(texts)} texts but {len(gold)} labels")
        if ids is None:
            ids = [str(i) for i in range(len(texts))]
        instances = [Instance(i, t, float(g)) for i, t, g in zip(ids, texts, gold)]
        return cls(tuple(instances), scheme, **kwargs)


def apply_order(instances: Sequence[Instance], policy: OrderPolicy) -> list[Instance]:
    instances = list(instances)
    if policy.kind == "by_timestamp":
        if any(inst.timestamp is None for inst in instances):
            raise FormatError("by_timestamp ordering needs a timestamp on every instance")
        return sorted(instances, key=lambda inst: inst.timestamp)  # stable
    if policy.kind == "seeded_shuffle":
        perm = np.random.default_rng(policy.seed).permutation(len(instances))
        return [instances[i] for i in perm]
    return instances


def parse_label(raw, scheme: LabelScheme, where: str) -> float:
    """Numeric label from a cell; SemEval-style ``"-2: moderately negative ..."`` is accepted."""
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        value = float(raw)
    else:
        text = str(raw).strip().split(":", 1)[0].strip()
        try:
            value = float(text)
        except ValueError:
            raise FormatError(f"{where}: unparseable label {raw!r}") from None
    if not math.isfinite(value) or not scheme.conforms(value):
        raise FormatError(f"{where}: label {value} outside scheme {scheme.to_dict()}")
    return value


def parse_timestamp(raw, where: str) -> float:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    text = str(raw).strip()
    try:
        return float(text)
    except ValueError:
        pass
    try:
        dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        raise FormatError(f"{where}: unparseable timestamp {raw!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _read_rows(path: Path) -> Iterable[tuple[int, dict]]:
    suffix = path.suffix.lower()
    if suffix in (".jsonl", ".ndjson"):
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{path}:{lineno}: bad JSON ({exc})") from None
                if not isinstance(row, dict):
                    raise FormatError(f"{path}:{lineno}: expected a JSON object")
                yield lineno, row
        return
    delimiter = "," if suffix == ".csv" else "\t"
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        for row in reader:
            if None in row or any(v is None for v in row.values()):
                raise FormatError(f"{path}:{reader.line_num}: wrong number of columns")
            yield reader.line_num, row


def load_corpus(
    paths,
    mapping: ColumnMapping = ColumnMapping(),
    scheme: Optional[LabelScheme] = None,
    order_policy: OrderPolicy = AS_GIVEN,
    *,
    emotion_name: Optional[str] = None,
    corpus_id: Optional[str] = None,
) -> LabeledCorpus:
    """Read one file, or several (e.g. train/dev/test splits) concatenated in order.

    TSV is the default layout; ``.csv`` switches to commas and ``.jsonl`` to
    one JSON object per line.  Any malformed row aborts the load.
    """
    if scheme is None:
        raise ValueError("a label scheme is required")
    if isinstance(paths, (str, Path)):
        paths = [paths]
    paths = [Path(p) for p in paths]
    instances = []
    for path in paths:
        if not path.is_file():
            raise FileNotFoundError(f"corpus file not found: {path}")
        prefix = f"{path.stem}:" if len(paths) > 1 else ""
        for n, (lineno, row) in enumerate(_read_rows(path)):
            where = f"{path}:{lineno}"
            for col in (mapping.text, mapping.label, mapping.id, mapping.timestamp):
                if col is not None and col not in row:
                    raise FormatError(f"{where}: missing column {col!r}")
            ts = None
            if mapping.timestamp is not None and row[mapping.timestamp] not in ("", None):
                ts = parse_timestamp(row[mapping.timestamp], where)
            ident = str(row[mapping.id]) if mapping.id is not None else f"{prefix}{n}"
            instances.append(
                Instance(
                    id=ident,
                    text=str(row[mapping.text]),
                    gold=parse_label(row[mapping.label], scheme, where),
                    timestamp=ts,
                )
            )
    return LabeledCorpus(
        tuple(apply_order(instances, order_policy)),
        scheme,
        emotion_name=emotion_name or mapping.label,
        order_policy=order_policy,
        corpus_id=corpus_id or "+".join(p.stem for p in paths),
    )


def reorder(corpus: LabeledCorpus, policy: OrderPolicy) -> LabeledCorpus:
    return replace(corpus, instances=tuple(apply_order(corpus.instances, policy)), order_policy=policy)


def relabel_to_unit(corpus: LabeledCorpus) -> LabeledCorpus:
    """Affinely map categorical labels onto [0, 1]; ranks of any window means are preserved."""
    scheme = corpus.scheme
    if scheme.kind != "categorical":
        raise ValueError("relabel_to_unit needs a categorical scheme")
    lo, hi = scheme.labels[0], scheme.labels[-1]
    span = hi - lo

    def unit(v):
        return (v - lo) / span

    new_scheme = LabelScheme.categorical(unit(v) for v in scheme.labels)
    instances = tuple(replace(inst, gold=unit(inst.gold)) for inst in corpus.instances)
    return replace(corpus, instances=instances, scheme=new_scheme)


def save_corpus(corpus: LabeledCorpus, path) -> Path:
    """Write ``id``, ``text``, ``label`` (and ``timestamp`` when known) as TSV."""
    path = Path(path)
    with_ts = any(inst.timestamp is not None for inst in corpus.instances)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["id", "text", "label"] + (["timestamp"] if with_ts else []))
        for inst in corpus.instances:
            label = int(inst.gold) if float(inst.gold).is_integer() else repr(inst.gold)
            row = [inst.id, inst.text, label]
            if with_ts:
                row.append("" if inst.timestamp is None else repr(inst.timestamp))
            writer.writerow(row)
    return path
