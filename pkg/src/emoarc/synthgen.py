"""Deterministic synthetic corpora and lexicons for desk-scale experiments.

Gold labels follow a smooth latent trajectory (a few random sinusoids over
the corpus) plus per-instance noise, so arcs have real structure to recover.
Each token is drawn from the vocabulary of the instance's own label with
probability ``label_signal`` and uniformly from the whole vocabulary
otherwise.  The whole vocabulary includes filler words that the companion
lexicon does not list, so both OOV policies see out-of-vocabulary tokens.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ingest import Instance, LabeledCorpus, LabelScheme
from .lexstore import EmotionLexicon

CONTINUOUS_LEVELS = 11


@dataclass(frozen=True)
class SynthSpec:
    n_instances: int = 5000
    scheme: LabelScheme = LabelScheme.categorical(range(-3, 4))
    vocab_size: int = 700
    tokens_per_instance: int = 6
    label_signal: float = 0.3
    seed: int = 42
    # OOV filler words, drawn only by the uniform-noise branch
    filler_size: int = 300
    # latent trajectory: number of sinusoids, lowest/highest cycles per corpus
    arc_components: int = 4
    arc_cycles: tuple[float, float] = (0.5, 6.0)
    # latent and per-instance spread, as fractions of the label span
    arc_spread: float = 0.25
    label_noise: float = 0.25

    def __post_init__(self):
        for name in ("n_instances", "vocab_size", "tokens_per_instance", "arc_components"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.filler_size < 0:
            raise ValueError("filler_size must be >= 0")
        if not 0.0 <= self.label_signal <= 1.0:
            raise ValueError("label_signal must lie in [0, 1]")
        if self.vocab_size < len(self.levels):
            raise ValueError(
                f"vocab_size {self.vocab_size} too small for {len(self.levels)} label levels"
            )

    @property
    def levels(self) -> np.ndarray:
        if self.scheme.kind == "categorical":
            return np.array(self.scheme.labels)
        lo, hi = self.scheme.value_range
        return np.linspace(lo, hi, CONTINUOUS_LEVELS)


def word(i: int, prefix: str) -> str:
    """Letter-only pseudo-word, distinct for every (prefix, i)."""
    letters = string.ascii_lowercase
    out = ""
    while True:
        i, r = divmod(i, 26)
        out = letters[r] + out
        if i == 0:
            break
    return prefix + out


def latent_trajectory(n: int, rng: np.random.Generator, components: int = 4,
                      cycles: tuple[float, float] = (0.5, 6.0)) -> np.ndarray:
    """Zero-mean, unit-variance smooth curve of length ``n``."""
    t = np.arange(n) / n
    freqs = rng.uniform(cycles[0], cycles[1], components)
    phases = rng.uniform(0, 2 * np.pi, components)
    amps = rng.uniform(0.5, 1.0, components)
    z = (amps[:, None] * np.sin(2 * np.pi * freqs[:, None] * t + phases[:, None])).sum(axis=0)
    z = z - z.mean()
    sd = z.std()
    return z / sd if sd > 0 else z


def _gold_levels(spec: SynthSpec, rng: np.random.Generator):
    """Gold values and the index of the lexicon level each one draws words from."""
    levels = spec.levels
    n_levels = len(levels)
    z = latent_trajectory(spec.n_instances, rng, spec.arc_components, spec.arc_cycles)
    eps = rng.standard_normal(spec.n_instances)
    pos = 0.5 + spec.arc_spread * z + spec.label_noise * eps  # fraction of the span
    if spec.scheme.kind == "categorical":
        idx = np.clip(np.rint(pos * (n_levels - 1)), 0, n_levels - 1).astype(np.int64)
        return levels[idx], idx
    lo, hi = spec.scheme.value_range
    frac = np.clip(pos, 0.0, 1.0)
    gold = lo + (hi - lo) * frac
    idx = np.rint(frac * (n_levels - 1)).astype(np.int64)
    return gold, idx


def generate(spec: SynthSpec = SynthSpec()) -> tuple[LabeledCorpus, EmotionLexicon]:
    """Corpus whose tokens track the gold labels at strength ``label_signal``, plus its lexicon."""
    rng = np.random.default_rng(spec.seed)
    levels = spec.levels
    n_levels = len(levels)
    gold, level_idx = _gold_levels(spec, rng)

    # lexicon words are dealt round-robin over the levels
    lex_words = [word(i, "q") for i in range(spec.vocab_size)]
    word_level = np.arange(spec.vocab_size) % n_levels
    by_level = [np.flatnonzero(word_level == j) for j in range(n_levels)]
    all_words = lex_words + [word(i, "z") for i in range(spec.filler_size)]

    n, t = spec.n_instances, spec.tokens_per_instance
    from_label = rng.random((n, t)) < spec.label_signal
    pick = rng.random((n, t))
    uniform_pick = rng.integers(0, len(all_words), (n, t))
    instances = []
    for i in range(n):
        own = by_level[level_idx[i]]
        own_pick = own[np.minimum((pick[i] * len(own)).astype(np.int64), len(own) - 1)]
        ids = np.where(from_label[i], own_pick, uniform_pick[i])
        instances.append(Instance(str(i), " ".join(all_words[j] for j in ids), float(gold[i])))

    corpus = LabeledCorpus(tuple(instances), spec.scheme, emotion_name="synthetic",
                           corpus_id=f"synth-s{spec.seed}")
    lo, hi = float(levels[0]), float(levels[-1])
    lexicon = EmotionLexicon(
        emotion_name="synthetic",
        granularity="continuous",
        score_range=(lo, hi),
        entries={w: float(levels[word_level[i]]) for i, w in enumerate(lex_words)},
        provenance=f"synth-lexicon-s{spec.seed}",
    )
    return corpus, lexicon


def noisy_threshold_fixture(
    n_instances: int = 3000,
    seed: int = 0,
    tokens_per_instance: int = 6,
    strong_levels: int = 6,
    words_per_level: int = 40,
    n_weak: int = 400,
    strong_rate: float = 0.35,
    weak_rate: float = 0.4,
) -> tuple[LabeledCorpus, EmotionLexicon]:
    """Emotion-intensity corpus where the low-score lexicon entries are pure noise.

    Strong entries have scores on a grid in [0.5, 1]; an instance draws them
    from the grid level nearest its own gold intensity.  Weak entries (scores
    0.05-0.45) turn up at a fixed rate whatever the gold value.  Thresholding
    the weak entries away should therefore help.
    """
    rng = np.random.default_rng(seed)
    z = latent_trajectory(n_instances, rng)
    gold = np.clip(0.5 + 0.2 * z + 0.2 * rng.standard_normal(n_instances), 0.0, 1.0)
    grid = np.linspace(0.5, 1.0, strong_levels)
    strong = [[word(j * words_per_level + i, "s") for i in range(words_per_level)]
              for j in range(strong_levels)]
    weak = [word(i, "w") for i in range(n_weak)]
    filler = [word(i, "f") for i in range(300)]
    entries = {w: float(grid[j]) for j in range(strong_levels) for w in strong[j]}
    entries.update({w: float(s) for w, s in zip(weak, rng.uniform(0.05, 0.45, n_weak).round(3))})

    level = np.rint(gold * (strong_levels - 1)).astype(np.int64)
    u = rng.random((n_instances, tokens_per_instance))
    kind = np.where(u < strong_rate, 0, np.where(u < strong_rate + weak_rate, 1, 2))
    choice = rng.random((n_instances, tokens_per_instance))
    instances = []
    for i in range(n_instances):
        pools = (strong[level[i]], weak, filler)
        toks = [pools[k][int(c * len(pools[k]))] for k, c in zip(kind[i], choice[i])]
        instances.append(Instance(str(i), " ".join(toks), float(gold[i])))
    corpus = LabeledCorpus(tuple(instances), LabelScheme.continuous(0.0, 1.0),
                           emotion_name="anger", corpus_id=f"noisy-threshold-s{seed}")
    lexicon = EmotionLexicon("anger", "continuous", (0.0, 1.0), entries,
                             provenance=f"noisy-threshold-lexicon-s{seed}")
    return corpus, lexicon


def write_synthetic(spec: SynthSpec, corpus_path, lexicon_path,
                    out: Optional[tuple[LabeledCorpus, EmotionLexicon]] = None):
    """Write a generated pair in the TSV formats the loaders read."""
    from .ingest import save_corpus
    from .lexstore import save_lexicon

    corpus, lexicon = out if out is not None else generate(spec)
    return save_corpus(corpus, corpus_path), save_lexicon(lexicon, lexicon_path)
