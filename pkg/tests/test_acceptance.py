"""Acceptance criteria A1-A10.

A one-line pass/fail summary per criterion is printed at the end of the run
(see ``conftest.py``).  A8 and A9 need real datasets and are skipped unless
the environment variables below point at them.

A8: ``EMOARC_A8_CORPUS`` (valence regression TSV) and ``EMOARC_A8_LEXICON``;
optional ``EMOARC_A8_TEXT_COL`` (default ``Tweet``), ``EMOARC_A8_LABEL_COL``
(``Intensity Score``), ``EMOARC_A8_LEXICON_FORMAT`` (``nrc_vad_column``) and
``EMOARC_A8_EMOTION`` (``valence``).

A9: ``EMOARC_A9_MANIFEST``, a JSON file ``{"datasets": [{"path", "text_col",
"label_col", "scheme"}], "lexicons": [{"path", "format", "emotion", ...}]}``.
"""

import itertools
import json
import math
import os
import time

import numpy as np
import pytest

from emoarc.arcgen import EmotionArc, rolling_mean, standardize
from emoarc.errors import DegenerateArcError
from emoarc.evaluate import (
    STANDARD_BINS,
    STANDARD_THRESHOLDS,
    OracleMethod,
    SweepGrid,
    average_ranks,
    best_cell,
    spearman,
    sweep,
    write_reports,
)
from emoarc.ingest import ColumnMapping, LabelScheme, load_corpus
from emoarc.lexstore import ThresholdSpec, load_lexicon
from emoarc.oracle import OracleConfig, oracle_curve
from emoarc.synthgen import SynthSpec, generate, noisy_threshold_fixture

from oracles import brute_spearman, brute_window_means, tie_corrected_spearman


@pytest.fixture(scope="module")
def pinned():
    """The 5,000-instance, 7-class, signal 0.3, seed 42 fixture."""
    return generate(SynthSpec(seed=42))


def _check_pair(a, b):
    want = brute_spearman(a, b)
    assert want == tie_corrected_spearman(a, b) or abs(want - tie_corrected_spearman(a, b)) < 1e-15
    if want is None:
        with pytest.raises(DegenerateArcError):
            spearman(a, b)
    else:
        got = spearman(np.array(a, float), np.array(b, float))
        assert abs(got - want) <= 1e-12, (a, b, got, want)


def test_a1_spearman_matches_bruteforce_oracle():
    """Spearman equals the brute-force average-rank oracle on every {0,1,2} series pair up to length 7."""
    start = time.perf_counter()
    # every ordered pair of series, lengths 2..5
    for n in range(2, 6):
        series = list(itertools.product(range(3), repeat=n))
        for a in series:
            for b in series:
                _check_pair(a, b)
    # lengths 6 and 7: rho depends only on the multiset of (a_i, b_i) pairs,
    # so every class is covered once, in a seeded random arrangement
    rng = np.random.default_rng(0)
    cells = list(itertools.product(range(3), range(3)))
    classes = 0
    for n in (6, 7):
        for combo in itertools.combinations_with_replacement(cells, n):
            perm = rng.permutation(n)
            a = [combo[i][0] for i in perm]
            b = [combo[i][1] for i in perm]
            _check_pair(a, b)
            classes += 1
    assert classes == math.comb(6 + 8, 8) + math.comb(7 + 8, 8)
    assert time.perf_counter() - start < 60


def test_a2_standardization_properties():
    """z-scoring: mean 0 and population std 1 within 1e-10, idempotent, ranks unchanged, on 1,000 arcs."""
    rng = np.random.default_rng(2024)
    for i in range(1000):
        n = int(rng.integers(2, 600))
        v = rng.normal(rng.uniform(-50, 50), 10 ** rng.uniform(-3, 3), n)
        if i % 4 == 0:
            v = np.round(v, 1)  # window means of coarse labels tie a lot
        if np.all(v == v[0]):
            continue
        arc = EmotionArc(v, np.arange(n))
        z = standardize(arc)
        assert abs(z.values.mean()) < 1e-10
        assert abs(z.values.std() - 1.0) < 1e-10
        assert np.max(np.abs(standardize(z).values - z.values)) <= 1e-12
        assert np.array_equal(average_ranks(z.values), average_ranks(v))


def test_a3_window_algebra():
    """Rolling means equal per-window brute-force sums and the window-count formula on 100 random triples."""
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 2001))
        b = int(rng.integers(1, n + 1))
        stride = int(rng.integers(1, max(2, n // 3)))
        expected = (n - b) // stride + 1
        # integer-valued data: every partial sum is exact, so equality is exact
        ints = rng.integers(-3, 4, n)
        got = rolling_mean(ints, b, stride)
        assert len(got) == expected
        assert got.tolist() == brute_window_means(ints.tolist(), b, stride)
        # real-valued data: summation order differs, so compare to an exactly rounded sum
        reals = rng.uniform(-1, 1, n)
        got = rolling_mean(reals, b, stride)
        want = [math.fsum(reals[s:s + b]) / b for s in range(0, n - b + 1, stride)]
        assert len(got) == expected
        assert np.max(np.abs(got - want)) <= 1e-12


def test_a4_perfect_lexicon_identity():
    """With label_signal 1 the lexicon arc correlates perfectly with the gold arc at every bin size."""
    corpus, lex = generate(SynthSpec(label_signal=1.0, seed=42))
    for rep in sweep(corpus, SweepGrid.standard([lex])):
        assert rep.ok and rep.rho == 1.0, rep


def test_a5_bin_size_monotonicity():
    """Mean rho over 20 seeds rises strictly with bin size and gains at least 0.3 from b=1 to b=300."""
    start = time.perf_counter()
    table = []
    for seed in range(42, 62):
        corpus, lex = generate(SynthSpec(seed=seed))
        reps = sweep(corpus, SweepGrid(STANDARD_BINS, ("zero",), lexicons=(lex,)))
        assert all(r.ok for r in reps)
        table.append([r.rho for r in reps])
    mean = np.mean(table, axis=0)
    print("A5 mean rho by bin:", dict(zip(STANDARD_BINS, np.round(mean, 4).tolist())))
    assert all(a < b for a, b in zip(mean, mean[1:])), mean
    assert mean[-1] - mean[0] >= 0.3
    assert time.perf_counter() - start < 300


def test_a6_oracle_calibration(pinned):
    """Oracle: p=1 gives rho 1 exactly, chance gives |rho|<0.05, p=0.6 at b=300 gives >=0.95, p=0.05 is negative."""
    corpus, _ = pinned
    for rep in oracle_curve(corpus, [1.0], STANDARD_BINS, OracleConfig(1.0, seed=0, trials=5)):
        assert rep.rho == 1.0 and rep.rho_min == 1.0
    (chance,) = oracle_curve(corpus, [1 / 7], [100], OracleConfig(1 / 7, seed=0, trials=50))
    assert abs(chance.rho) < 0.05, chance.rho
    (sixty,) = oracle_curve(corpus, [0.6], [300], OracleConfig(0.6, seed=0, trials=20))
    assert sixty.rho >= 0.95, sixty.rho
    below = oracle_curve(corpus, [0.05], STANDARD_BINS, OracleConfig(0.05, seed=0, trials=20))
    assert all(r.rho < 0 for r in below), [r.rho for r in below]


def _best_tau_by_cell(reports):
    """Best threshold for every (oov, bin) with at least two successful thresholds."""
    out = {}
    keys = sorted({(r.config.oov_policy, r.config.bin_size) for r in reports})
    for key in keys:
        cell = [r for r in reports if (r.config.oov_policy, r.config.bin_size) == key]
        ok = [r for r in cell if r.ok]
        if len(ok) >= 2:
            out[key] = (best_cell(cell), ok)
    return out


def test_a7_threshold_behaviour(pinned):
    """Noisy low-score entries make the best tau positive; fully informative entries make tau=0 optimal."""
    noisy_corpus, noisy_lex = noisy_threshold_fixture()
    grid = SweepGrid.standard([noisy_lex], [ThresholdSpec(t) for t in STANDARD_THRESHOLDS])
    reports = sweep(noisy_corpus, grid)
    for oov in ("drop_na", "zero"):
        best = best_cell([r for r in reports if r.config.oov_policy == oov])
        assert best.config.threshold.tau > 0, (oov, best.rho)
    for key, (best, _) in _best_tau_by_cell(reports).items():
        assert best.config.threshold.tau > 0, key

    corpus, lex = pinned
    taus = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
    reports = sweep(corpus, SweepGrid.standard([lex], [ThresholdSpec(t, "magnitude") for t in taus]))
    for key, (best, ok) in _best_tau_by_cell(reports).items():
        at_zero = [r for r in ok if r.config.threshold.tau == 0.0]
        assert at_zero and at_zero[0].rho == best.rho, key


A8 = os.environ.get("EMOARC_A8_CORPUS"), os.environ.get("EMOARC_A8_LEXICON")


@pytest.mark.skipif(not all(A8), reason="set EMOARC_A8_CORPUS and EMOARC_A8_LEXICON")
def test_a8_real_valence_regression():
    """Real valence-regression data: rho >= 0.90 at b=100 and >= 0.95 at b=300 under both OOV policies."""
    env = os.environ.get
    corpus = load_corpus(
        A8[0],
        ColumnMapping(env("EMOARC_A8_TEXT_COL", "Tweet"), env("EMOARC_A8_LABEL_COL", "Intensity Score")),
        LabelScheme.continuous(0, 1),
    )
    lex = load_lexicon(A8[1], env("EMOARC_A8_LEXICON_FORMAT", "nrc_vad_column"),
                       env("EMOARC_A8_EMOTION", "valence"))
    reports = sweep(corpus, SweepGrid((100, 300), lexicons=(lex,)))
    for r in reports:
        print("A8", r.config.oov_policy, r.config.bin_size, r.rho)
        floor = 0.90 if r.config.bin_size == 100 else 0.95
        assert r.ok and r.rho >= floor


A9 = os.environ.get("EMOARC_A9_MANIFEST")


@pytest.mark.skipif(not A9, reason="set EMOARC_A9_MANIFEST")
def test_a9_real_categorical_majority():
    """Real categorical data: most dataset x lexicon x OOV cells exceed rho 0.9 at b=50."""
    manifest = json.loads(open(A9, encoding="utf-8").read())
    lexicons = []
    for spec in manifest["lexicons"]:
        spec = dict(spec)
        path = spec.pop("path")
        if "score_range" in spec:
            spec["score_range"] = tuple(spec["score_range"])
        lexicons.append(load_lexicon(path, **spec))
    rhos = []
    for ds in manifest["datasets"]:
        corpus = load_corpus(ds["path"], ColumnMapping(ds.get("text_col", "text"),
                                                       ds.get("label_col", "label")),
                             LabelScheme.parse(ds["scheme"]))
        rhos += [r.rho for r in sweep(corpus, SweepGrid((50,), lexicons=tuple(lexicons)))]
    print("A9 rho at b=50:", rhos)
    assert sum(r is not None and r > 0.9 for r in rhos) > len(rhos) / 2


def test_a10_determinism_across_runs_and_workers(tmp_path, pinned):
    """Sweep and oracle report files are byte-identical across repeats and worker counts."""
    corpus, lex = pinned
    grid = SweepGrid.standard([lex], [ThresholdSpec(t) for t in (0.0, 1.0, 2.0)])
    method = OracleMethod((0.05, 1 / 7, 0.6, 1.0), trials=5, seed=3)
    for name, run in (("lexo", lambda j: sweep(corpus, grid, n_jobs=j)),
                      ("oracle", lambda j: sweep(corpus, SweepGrid(STANDARD_BINS), method, n_jobs=j))):
        blobs = []
        for i, jobs in enumerate((1, 1, 4, 4)):
            path = write_reports(run(jobs), tmp_path / f"{name}{i}.csv", {"seed": 3})
            blobs.append((path.read_bytes(), path.with_suffix(".json").read_bytes()))
        assert all(b == blobs[0] for b in blobs), name
