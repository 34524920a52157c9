"""Where the closed-form region and the split-rate feasibility test agree, and where they do not.

Terms produced by an actual joint distribution obey chain-rule inequalities
the closed form relies on; arbitrary vectors need not.
"""
import numpy as np

from ccifc import cli, dmc

rng = np.random.default_rng(1)

mis = sum(cli.oracle_trial(dmc.random_scheme_terms(rng), 30)[0] for _ in range(20))
print(f"terms from random joints: {mis} disagreements over 20 x 900 queries")

bad = 0
for _ in range(100):
    I = np.zeros(22)
    I[1:] = rng.uniform(0, 1, 21)
    I[1:][rng.uniform(size=21) < 0.15] = 0.0
    I[16], I[17] = max(I[16], I[1]), max(I[17], I[2])
    I[0] = rng.uniform(0, I[3])
    bad += cli.oracle_trial(I, 50)[0] > 0
print(f"unstructured vectors: {bad}/100 show disagreements")
