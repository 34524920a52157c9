"""Comparison curves: the rate-splitting-only inner region and a broadcast outer bound."""
from __future__ import annotations

import numpy as np

from .rate_terms import theta
from .region import GridSpec, convex_closure, sweep_frontier
from .scenario import Strategy

HK_MASKS = {"bp2": 0.0, "b2": 0.0, "b3": 0.0, "b4": 0.0, "g3": 0.0, "dpc": "zero"}
OUTER_BOUND_TYPE = "outer_sum_power_relaxation"


def hk_region(scen, grid=None, masks=None):
    """Rate splitting with no cooperation and no binning.

    This is the causal sweep with the relaying, cognitive and binning
    fractions pinned to zero, so it shares every line of code with
    :func:`ccifc.region.sweep_frontier`.  Extra ``masks`` are applied on top.
    """
    m = dict(HK_MASKS)
    m.update(masks or {})
    return sweep_frontier(scen, Strategy.CLASSICAL, grid or GridSpec(), masks=m, label="hk")


def interference_free_cap(scen, with_gain=False):
    """Single-user bound on the second rate.

    The default omits the direct gain, ``theta(P2 / N4)``; ``with_gain``
    uses ``theta(h42**2 P2 / N4)`` instead.
    """
    g = scen.h42 ** 2 if with_gain else 1.0
    return theta(g * scen.P2 / scen.N4)


def _bc_points(ga, gb, P, power_points, angle_points):
    """Rate pairs ``(R_a, R_b)`` with ``b`` encoded first (interference-free).

    User ``b`` transmits a rank-one covariance of power ``pb`` along a unit
    direction; user ``a`` then beamforms the remaining power along its own
    channel, which is optimal for a single receive antenna once ``b`` is
    fixed.
    """
    pb = P * np.linspace(0.0, 1.0, power_points)[:, None]
    phi = np.linspace(0.0, np.pi, angle_points, endpoint=False)[None, :]
    w = np.stack([np.cos(phi), np.sin(phi)], -1)             # (1, n, 2)
    sb = (w @ gb) ** 2
    sa = (w @ ga) ** 2
    rb = 0.5 * np.log2(1.0 + pb * sb)
    ra = 0.5 * np.log2(1.0 + (ga @ ga) * (P - pb) / (1.0 + pb * sa))
    return np.stack([ra.ravel(), rb.ravel()], -1)


def mimo_bc_outer(scen, grid=None, with_gain=False, power_points=801, angle_points=2048):
    """Sum-power dirty-paper region of the cooperating-transmitter broadcast channel.

    Both transmitters are pooled into one two-antenna transmitter with total
    power ``P1 + P2``.  Receiver 3 and receiver 4 see channel rows
    ``(h31, h32) / sqrt(N3)`` and ``(h41, h42) / sqrt(N4)``.  Both encoding
    orders are swept, the union is hulled and then cut at
    :func:`interference_free_cap`.

    ``grid`` is accepted for interface symmetry; the resolution is set by
    ``power_points`` and ``angle_points``.
    """
    g3 = np.array([scen.h31, scen.h32]) / np.sqrt(scen.N3)
    g4 = np.array([scen.h41, scen.h42]) / np.sqrt(scen.N4)
    P = scen.P1 + scen.P2
    first4 = _bc_points(g3, g4, P, power_points, angle_points)          # (R1, R2)
    first3 = _bc_points(g4, g3, P, power_points, angle_points)[:, ::-1]
    fr = convex_closure(np.vstack([first4, first3]))
    fr = fr.clip_r2(interference_free_cap(scen, with_gain))
    fr.strategy = "outer"
    fr.scenario = scen.key()
    fr.meta = {"bound_type": OUTER_BOUND_TYPE, "cap_with_gain": bool(with_gain),
               "power_points": power_points, "angle_points": angle_points}
    return fr
