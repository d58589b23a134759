"""Arc quality as a function of instance-level classifier accuracy.

A simulated classifier keeps each gold label with probability p and otherwise
picks a wrong label uniformly.  Below chance (1/7 here) the arcs anti-correlate.

    python demos/oracle_curve.py
"""

import numpy as np

from emoarc import OracleConfig, SynthSpec, generate, oracle_curve

corpus, _ = generate(SynthSpec(seed=42))
accuracies = [0.05, 1 / 7, 0.3, 0.5, 0.6, 0.8, 1.0]
bins = [1, 10, 50, 100, 200, 300]
reports = oracle_curve(corpus, accuracies, bins, OracleConfig(1.0, seed=0, trials=20))

table = np.array([r.rho for r in reports]).reshape(len(accuracies), len(bins))
print("p \\ bin " + "".join(f"{b:>8}" for b in bins))
for p, row in zip(accuracies, table):
    print(f"{p:>7.3f} " + "".join(f"{v:>8.3f}" for v in row))
