"""When does dropping weakly associated lexicon terms pay off?

Two fixtures: one whose low-score entries are pure noise, and the pinned
synthetic corpus whose every entry is informative.

    python demos/thresholds.py
"""

from emoarc import STANDARD_THRESHOLDS, SweepGrid, SynthSpec, ThresholdSpec, generate, sweep
from emoarc.evaluate import best_cell
from emoarc.synthgen import noisy_threshold_fixture


def show(title, corpus, lexicon, taus, mode=None, bin_size=100):
    grid = SweepGrid((bin_size,), thresholds=[ThresholdSpec(t, mode) for t in taus],
                     lexicons=[lexicon])
    reports = sweep(corpus, grid)
    print(f"\n{title} (bin {bin_size})")
    for oov in ("drop_na", "zero"):
        cells = [r for r in reports if r.config.oov_policy == oov]
        line = "  ".join(
            f"{r.config.threshold.tau:g}:{r.rho:.3f}" if r.ok else f"{r.config.threshold.tau:g}:{r.status}"
            for r in cells
        )
        best = best_cell(cells)
        print(f"  {oov:<8} {line}   best tau {best.config.threshold.tau:g}")


show("noisy low-score entries", *noisy_threshold_fixture(), STANDARD_THRESHOLDS)
show("all entries informative", *generate(SynthSpec(seed=42)), (0, 0.5, 1, 1.5, 2, 2.5, 3),
     mode="magnitude")
