"""Shared test utilities."""
import numpy as np

from ccifc.scenario import BETA_FIELDS, GAMMA_FIELDS, PowerAllocation


def random_allocation(rng, strategy="classical", sparse=False):
    """Uniform-ish point of the two fraction simplices (slack allowed)."""
    b = rng.dirichlet(np.ones(7))[:6]
    g = rng.dirichlet(np.ones(4))[:3]
    if sparse:
        b = b * (rng.random(6) < 0.6)
        g = g * (rng.random(3) < 0.6)
    f = dict(zip(BETA_FIELDS, b))
    f.update(zip(GAMMA_FIELDS, g))
    if strategy == "lookahead":
        f["bp2"] = f["b2"] = 0.0
    return PowerAllocation(strategy=strategy, **f)
