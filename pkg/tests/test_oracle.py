import numpy as np
import pytest

from emoarc.arcgen import ArcConfig, gold_arc
from emoarc.evaluate import OracleMethod, SweepGrid, spearman, sweep
from emoarc.ingest import LabeledCorpus, LabelScheme, OrderPolicy, reorder
from emoarc.oracle import OracleConfig, oracle_arc, oracle_curve, simulate_labels
from emoarc.synthgen import SynthSpec, generate

SEVEN = LabelScheme.parse("categorical:-3..3")


@pytest.fixture(scope="module")
def seven_class():
    return generate(SynthSpec(n_instances=10_000, seed=11))[0]


def test_perfect_accuracy_reproduces_gold(seven_class):
    assert np.array_equal(simulate_labels(seven_class, OracleConfig(1.0)), seven_class.gold)


def test_zero_accuracy_binary_flips():
    c = LabeledCorpus.from_lists(list("abcdef"), [0, 1, 1, 0, 1, 0], LabelScheme.parse("categorical:0,1"))
    assert simulate_labels(c, OracleConfig(0.0)).tolist() == [1, 0, 0, 1, 0, 1]


def test_zero_accuracy_never_gold(seven_class):
    pred = simulate_labels(seven_class, OracleConfig(0.0, seed=4))
    assert not np.any(pred == seven_class.gold)
    assert set(pred.tolist()) <= set(SEVEN.labels)


def test_agreement_concentrates(seven_class):
    # sd of the agreement rate is sqrt(.24 / 10000) ~ 0.0049, so 0.015 is ~3 sd
    for trial in range(3):
        pred = simulate_labels(seven_class, OracleConfig(0.6, seed=123), trial)
        assert abs(np.mean(pred == seven_class.gold) - 0.6) <= 0.015


def test_wrong_labels_uniform(seven_class):
    pred = simulate_labels(seven_class, OracleConfig(0.0, seed=9))
    gold_idx = np.searchsorted(SEVEN.labels, seven_class.gold)
    pred_idx = np.searchsorted(SEVEN.labels, pred)
    # offset of the wrong label among the k-1 others, which is uniform on 0..5
    offset = (pred_idx - gold_idx) % 7 - 1
    counts = np.bincount(offset, minlength=6)
    expected = len(pred) / 6
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < 20.5  # 0.999 quantile of chi-square with 5 dof


def test_distance_confusion_prefers_neighbours(seven_class):
    pred = simulate_labels(seven_class, OracleConfig(0.0, seed=9, confusion="distance"))
    dist = np.abs(pred - seven_class.gold)
    assert dist.min() >= 1
    assert np.mean(dist == 1) > np.mean(
        np.abs(simulate_labels(seven_class, OracleConfig(0.0, seed=9)) - seven_class.gold) == 1)


def test_instance_fate_survives_reordering(seven_class):
    cfg = OracleConfig(0.5, seed=2)
    base = dict(zip(seven_class.ids, simulate_labels(seven_class, cfg, 3)))
    shuffled = reorder(seven_class, OrderPolicy("seeded_shuffle", 99))
    again = dict(zip(shuffled.ids, simulate_labels(shuffled, cfg, 3)))
    assert base == again


def test_trials_and_seeds_differ(seven_class):
    a = simulate_labels(seven_class, OracleConfig(0.5, seed=1), 0)
    assert not np.array_equal(a, simulate_labels(seven_class, OracleConfig(0.5, seed=1), 1))
    assert not np.array_equal(a, simulate_labels(seven_class, OracleConfig(0.5, seed=2), 0))
    assert np.array_equal(a, simulate_labels(seven_class, OracleConfig(0.5, seed=1), 0))


def test_validation():
    with pytest.raises(ValueError):
        OracleConfig(1.5)
    with pytest.raises(ValueError):
        OracleConfig(0.5, trials=0)
    with pytest.raises(ValueError):
        OracleConfig(0.5, seed=-1)
    c = LabeledCorpus.from_lists(["a", "b"], [0.2, 0.4], LabelScheme.continuous())
    with pytest.raises(ValueError, match="categorical"):
        simulate_labels(c, OracleConfig(0.5))


def test_oracle_arc_matches_curve_mean(seven_class):
    cfg = OracleConfig(0.4, seed=5, trials=3)
    arc_cfg = ArcConfig(50)
    gold = gold_arc(seven_class, arc_cfg)
    rhos = [spearman(gold, oracle_arc(seven_class, cfg, arc_cfg, t)) for t in range(3)]
    (rep,) = oracle_curve(seven_class, [0.4], [50], cfg)
    assert rep.rho == pytest.approx(float(np.mean(rhos)), abs=0)
    assert rep.rho_min == min(rhos) and rep.rho_max == max(rhos)
    assert rep.method == "oracle" and rep.accuracy == 0.4 and rep.trials == 3


def test_curve_cells_and_parallel_identity(seven_class):
    cfg = OracleConfig(1.0, seed=3, trials=4)
    serial = oracle_curve(seven_class, [1.0, 0.3], [1, 10, 10_000], cfg)
    parallel = oracle_curve(seven_class, [1.0, 0.3], [1, 10, 10_000], cfg, n_jobs=4)
    assert [r.row() for r in serial] == [r.row() for r in parallel]
    assert [r.rho for r in serial[:2]] == [1.0, 1.0]
    assert serial[2].status == "degenerate"


def test_sweep_dispatches_to_oracle(seven_class):
    reps = sweep(seven_class, SweepGrid((10,)), OracleMethod((0.2, 0.9), trials=2, seed=1))
    assert [r.accuracy for r in reps] == [0.2, 0.9]
    assert reps[0].rho < reps[1].rho
