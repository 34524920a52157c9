"""Two-dimensional rate regions from rate terms, and frontier sweeps.

A vector of rate terms defines a polytope in the split-rate variables
``(R1cd, R1cn, R1pd, R1pn, R2c, R2p, L2c, L2p)``.  Its projection onto
``(R1, R2)`` is available two ways: the closed-form eight-family polygon
(:func:`corollary_region`, used in sweeps) and an exact linear feasibility
test of the full system (:func:`lp_project`, used as an oracle).
"""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import simplex
from .rate_terms import NTERMS, RateTerms, evaluate_batch
from .scenario import (BETA_FIELDS, FRACTION_FIELDS, GAMMA_FIELDS, SUM_TOL, DpcMode,
                       Strategy)

VARIABLES = ("R1cd", "R1cn", "R1pd", "R1pn", "R2c", "R2p", "L2c", "L2p")
R1_PARTS = ("R1cd", "R1cn", "R1pd", "R1pn")
R2_PARTS = ("R2c", "R2p")

# (variables on the left-hand side, index of the bounding term, sense)
# sense +1: sum <= I_k ; sense -1: sum >= I_k
SPLIT_ROWS = (
    (("L2c",), 1, -1),
    (("L2p",), 2, -1),
    (("L2c", "L2p"), 3, -1),
    (("R1pn",), 4, 1),
    (("R1cd", "R1cn", "R1pd", "R1pn", "L2c", "R2c"), 5, 1),
    (("R1cn", "R1pd", "R1pn"), 6, 1),
    (("R1pd", "R1pn"), 7, 1),
    (("R1pd", "R1pn", "L2c", "R2c"), 8, 1),
    (("R1cn", "R1pn"), 9, 1),
    (("R1pn", "L2c", "R2c"), 10, 1),
    (("R1cn", "R1pd", "R1pn", "L2c", "R2c"), 11, 1),
    (("R1cn", "R1pn", "L2c", "R2c"), 12, 1),
    (("L2c", "R2c"), 13, 1),
    (("L2p", "R2p"), 14, 1),
    (("R1cd", "R1cn", "L2c", "R2c", "L2p", "R2p"), 15, 1),
    (("R1cn", "L2c", "R2c"), 16, 1),
    (("R1cn", "L2p", "R2p"), 17, 1),
    (("R1cn", "L2c", "R2c", "L2p", "R2p"), 18, 1),
    (("L2c", "R2c", "L2p", "R2p"), 19, 1),
    (("R1pd",), 20, 1),
    (("R1cd", "R1pd"), 21, 1),
)

DIRECTIONS = ((1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (2, 3), (3, 2))


class EmptyRegion(RuntimeError):
    pass


# ------------------------------------------------------------ polytope

@dataclass(frozen=True)
class SplitRatePolytope:
    """The split-rate constraint system for one strategy.

    The look-ahead variant bounds the same two sums ``R1pd`` and
    ``R1cd + R1pd`` by its own cognitive-decoding terms, so its left-hand
    sides coincide with the causal system and only the term values differ.
    """

    variant: Strategy = Strategy.CLASSICAL
    rows: tuple = SPLIT_ROWS

    def lhs(self):
        """Dense ``(21, 8)`` coefficient matrix and the ``(21,)`` senses."""
        A = np.zeros((len(self.rows), len(VARIABLES)))
        s = np.zeros(len(self.rows))
        for i, (names, _, sense) in enumerate(self.rows):
            for nm in names:
                A[i, VARIABLES.index(nm)] = 1.0
            s[i] = sense
        return A, s

    def check(self, t, x, tol=1e-9):
        """Whether split vector ``x`` (dict or array in VARIABLES order) satisfies every row."""
        x = np.array([x[v] for v in VARIABLES]) if isinstance(x, dict) else np.asarray(x, float)
        if np.any(x < -tol):
            return False
        A, s = self.lhs()
        lhs = A @ x
        I = np.asarray(t.as_array() if isinstance(t, RateTerms) else t, float)
        rhs = I[[k for _, k, _ in self.rows]]
        return bool(np.all(s * lhs <= s * rhs + tol))


def _lp_system(I, R1, R2, variant=Strategy.CLASSICAL):
    """Equality-form system ``A x = b`` (x >= 0) for a batch of queries.

    Slack variables turn every inequality into an equality; ``R1`` and
    ``R2`` pin the two rate sums.  ``+inf`` upper bounds are replaced by a
    value that no minimal solution can reach.
    """
    P = SplitRatePolytope(variant)
    L, sense = P.lhs()
    nr, nv = L.shape
    A = np.zeros((nr + 2, nv + nr))
    A[:nr, :nv] = L
    A[:nr, nv:] = np.diag(sense)
    A[nr, [VARIABLES.index(v) for v in R1_PARTS]] = 1.0
    A[nr + 1, [VARIABLES.index(v) for v in R2_PARTS]] = 1.0
    R1 = np.asarray(R1, float).reshape(-1)
    R2 = np.asarray(R2, float).reshape(-1)
    rhs = I[[k for _, k, _ in P.rows]]
    big = 10.0 * (np.max(R1) + np.max(R2) + np.sum(np.where(np.isfinite(I[1:4]), I[1:4], 0.0)) + 1.0)
    rhs = np.where(np.isposinf(rhs) & (sense > 0), big, rhs)
    B = np.empty((R1.size, nr + 2))
    B[:, :nr] = rhs[None, :]
    B[:, nr] = R1
    B[:, nr + 1] = R2
    return A, B


def lp_project_many(t, points, variant=Strategy.CLASSICAL, tol=simplex.FEAS_TOL):
    """Membership of many ``(R1, R2)`` points in the projected split-rate polytope."""
    I = np.asarray(t.as_array() if isinstance(t, RateTerms) else t, float)
    pts = np.atleast_2d(np.asarray(points, float))
    if np.any(np.isnan(I)):
        raise ValueError("rate terms contain NaN")
    if not np.all(np.isfinite(pts)):
        raise ValueError("query points must be finite")
    if np.any(np.isposinf(I[1:4])):
        return np.zeros(len(pts), bool)
    A, B = _lp_system(I, pts[:, 0], pts[:, 1], variant)
    out = simplex.phase1(A, B) <= tol
    return out & np.all(pts >= -tol, axis=1)


def lp_project(t, variant=Strategy.CLASSICAL, query=(0.0, 0.0)):
    """Whether ``query = (R1, R2)`` admits a nonnegative split satisfying every row."""
    return bool(lp_project_many(t, [query], variant)[0])


# ------------------------------------------------------- closed-form region

def corollary_bounds(T):
    """Right-hand sides of the eight bound families, vectorized.

    Parameters
    ----------
    T : ndarray, shape (..., 22)
        Rate-term arrays in the ``[I3', I1..I21]`` layout.

    Returns
    -------
    bounds : ndarray, shape (..., 8)
        One column per entry of :data:`DIRECTIONS`.
    side_ok : ndarray of bool
        The stated side conditions ``I1 <= I16`` and ``I2 <= I17``.
    nonempty : ndarray of bool
        Exact nonemptiness of the split-rate polytope (see notes).

    Notes
    -----
    Every rate variable has a positive coefficient in some upper-bound row,
    so the polytope is nonempty iff the origin ``(R1, R2) = (0, 0)`` is
    feasible.  With all message rates zero the system reduces to choosing
    ``L2c, L2p`` with ``L2c >= I1``, ``L2p >= I2``, ``L2c + L2p >= I3`` under
    the upper bounds that involve only ``L``; eliminating them gives the
    three inequalities computed here.  The stated side conditions alone do
    not imply this.
    """
    I = [T[..., k] for k in range(NTERMS + 1)]
    m = np.minimum
    Ip = np.maximum(I[1] + I[2], I[3])
    b = np.empty(T.shape[:-1] + (8,))
    b[..., 0] = m(m(I[21] + I[4] + I[16], I[5]) - I[1], I[21] + m(I[4] + I[17] - I[2], I[9]))
    b[..., 1] = m(I[19], I[14] + m(I[10], I[13])) - Ip
    b[..., 2] = m.reduce([I[14] + I[5],
                          I[15] + m(I[7], I[8] - I[1]),
                          I[21] + I[17] + m(I[10], I[4] + I[13]),
                          I[4] + m(I[21] + I[18], I[20] + I[15]),
                          I[21] + I[14] + m.reduce([I[12], I[4] + I[16], I[10] + I[17] - I[2]])]) - Ip
    b[..., 3] = m.reduce([I[4] + I[15] + m(I[6], I[11] - I[1]),
                          I[21] + 2 * I[4] + I[17] + I[16],
                          I[4] + I[17] + m(I[21] + I[12], I[5])]) + I[21] - Ip
    b[..., 4] = m(I[21] + I[10] + I[14] + m(I[14] + I[16], I[18]),
                  I[14] + I[15] + m(I[20] + I[10], I[8])) - 2 * Ip
    b[..., 5] = (m(I[4] + m(I[14] + I[11], I[17] + I[8]),
                   I[10] + I[14] + m(I[6], I[11] - I[1])) + I[21] + I[15] - 2 * Ip)
    b[..., 6] = I[21] + I[10] + 2 * I[14] + I[11] + I[15] - 3 * Ip
    b[..., 7] = 2 * I[21] + 2 * I[4] + I[11] + I[17] + I[15] - 2 * Ip
    side_ok = (I[1] <= I[16]) & (I[2] <= I[17])
    uc = m.reduce([I[5], I[8], I[10], I[11], I[12], I[13], I[16]])
    up = m(I[14], I[17])
    us = m.reduce([I[15], I[18], I[19]])
    nonempty = (I[1] <= uc) & (I[2] <= up) & (Ip <= m(uc + up, us))
    nonempty &= np.isfinite(I[1]) & np.isfinite(I[2]) & np.isfinite(I[3])
    return b, side_ok, nonempty


@dataclass(frozen=True)
class RegionPolytope:
    """``{R >= 0 : a1 R1 + a2 R2 <= b}`` over the eight bound families.

    ``feasible`` is False when the region is empty; ``side_conditions``
    records the stated side conditions separately.
    """

    bounds: tuple
    feasible: bool
    side_conditions: bool = True
    directions: tuple = DIRECTIONS

    def halfplanes(self):
        return [(d, b) for d, b in zip(self.directions, self.bounds) if np.isfinite(b)]

    def contains(self, R1, R2, tol=1e-9):
        if not self.feasible or R1 < -tol or R2 < -tol:
            return False
        return all(a1 * R1 + a2 * R2 <= b + tol for (a1, a2), b in self.halfplanes())

    def margin(self, R1, R2):
        """Smallest slack over all half-planes and the two axes (negative outside)."""
        s = [R1, R2] + [b - (a1 * R1 + a2 * R2) for (a1, a2), b in self.halfplanes()]
        return min(s)

    def max_r1(self):
        return _axis_max(self.bounds, 0)

    def max_r2(self):
        return _axis_max(self.bounds, 1)

    def vertices(self):
        if not self.feasible:
            return np.zeros((0, 2))
        V, ok = polygon_vertices(np.asarray(self.bounds)[None, :], np.array([True]))
        pts = V[0][ok[0]]
        return convex_closure(pts).points if len(pts) else np.zeros((0, 2))


def _axis_max(bounds, axis):
    b = np.asarray(bounds, float)
    a = np.array(DIRECTIONS, float)
    use = a[:, axis] > 0
    return float(np.min(b[use] / a[use, axis]))


def corollary_region(t):
    """Closed-form projection of the split-rate polytope for one term vector."""
    I = np.asarray(t.as_array() if isinstance(t, RateTerms) else t, float)
    b, ok, ne = corollary_bounds(I[None, :])
    return RegionPolytope(tuple(float(x) for x in b[0]), bool(ne[0] and ok[0]), bool(ok[0]))


# ------------------------------------------------------------ vertices

def _merged_lines(B):
    """Distinct lines ``a . R <= b`` with the parallel families combined."""
    a = np.array(DIRECTIONS, float)
    b = B.copy()
    # (2,2) is parallel to (1,1)
    b[..., 2] = np.minimum(b[..., 2], b[..., 5] / 2)
    keep = [0, 1, 2, 3, 4, 6, 7]
    A = np.vstack([a[keep], [[-1.0, 0.0], [0.0, -1.0]]])
    bb = np.concatenate([b[..., keep], np.zeros(b.shape[:-1] + (2,))], axis=-1)
    return A, bb


_PAIRS = None


def polygon_vertices(B, ok):
    """Candidate vertices of many polygons at once.

    Returns
    -------
    V : ndarray, shape (n, npairs, 2)
    valid : ndarray of bool, shape (n, npairs)
    """
    global _PAIRS
    A, bb = _merged_lines(np.asarray(B, float))
    nl = A.shape[0]
    if _PAIRS is None:
        pr = [(i, j) for i in range(nl) for j in range(i + 1, nl)
              if abs(A[i, 0] * A[j, 1] - A[i, 1] * A[j, 0]) > 0]
        _PAIRS = np.array(pr)
    i, j = _PAIRS[:, 0], _PAIRS[:, 1]
    det = A[i, 0] * A[j, 1] - A[i, 1] * A[j, 0]
    bi, bj = bb[:, i], bb[:, j]
    fin = np.isfinite(bi) & np.isfinite(bj)
    bi = np.where(fin, bi, 0.0)
    bj = np.where(fin, bj, 0.0)
    x = (bi * A[j, 1] - bj * A[i, 1]) / det
    y = (A[i, 0] * bj - A[j, 0] * bi) / det
    V = np.stack([x, y], -1)
    scale = 1.0 + np.max(np.where(np.isfinite(bb), np.abs(bb), 0.0), axis=1)
    lhs = V @ A.T                                         # (n, npairs, nl)
    slack = bb[:, None, :] - lhs
    inside = np.all(slack >= -1e-12 * scale[:, None, None], axis=-1)
    valid = inside & fin & ok[:, None]
    return np.maximum(V, 0.0), valid


# ------------------------------------------------------------ frontiers

@dataclass
class Frontier:
    """Upper-right boundary of a convex, down-closed rate region.

    ``points`` runs from ``(0, max R2)`` to ``(max R1, 0)`` with ``R1``
    increasing and ``R2`` decreasing.
    """

    points: np.ndarray
    strategy: str = ""
    scenario: str = ""
    grid: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, float).reshape(-1, 2)

    def __len__(self):
        return len(self.points)

    @property
    def max_r1(self):
        return float(self.points[:, 0].max())

    @property
    def max_r2(self):
        return float(self.points[:, 1].max())

    def r2_at(self, r1):
        """Largest ``R2`` in the region at a given ``R1`` (``-inf`` outside)."""
        p = self.points
        if r1 > self.max_r1 or r1 < 0:
            return -np.inf
        return float(np.interp(r1, p[:, 0], p[:, 1], left=p[0, 1], right=p[-1, 1])) if len(p) > 1 else float(p[0, 1])

    def _inside(self, x, y):
        if x < 0 or y < 0 or x > self.max_r1 or y > self.max_r2:
            return False
        p = self.points
        d = np.diff(p, axis=0)
        cross = d[:, 0] * (y - p[:-1, 1]) - d[:, 1] * (x - p[:-1, 0])
        return bool(np.all(cross <= 0))

    def distance(self, point):
        """Euclidean distance from ``point`` to the region (0 inside)."""
        x, y = float(point[0]), float(point[1])
        if self._inside(x, y):
            return 0.0
        p = self.points
        ring = np.vstack([[0.0, 0.0], p, [0.0, 0.0]])
        a, d = ring[:-1], np.diff(ring, axis=0)
        q = np.array([x, y])
        nn = (d * d).sum(axis=1)
        t = np.where(nn > 0, ((q - a) * d).sum(axis=1) / np.where(nn > 0, nn, 1.0), 0.0)
        c = a + np.clip(t, 0.0, 1.0)[:, None] * d
        return float(np.sqrt(((q - c) ** 2).sum(axis=1)).min())

    def contains(self, point, tol=0.0):
        """Whether ``point`` lies in the region within Euclidean distance ``tol``."""
        return self.distance(point) <= tol

    def clip_r2(self, cap):
        """Intersect with ``R2 <= cap``."""
        p = self.points
        if cap >= self.max_r2:
            return Frontier(p.copy(), self.strategy, self.scenario, dict(self.grid), dict(self.meta))
        x_cap = _x_at_y(p, cap)
        keep = p[p[:, 1] < cap]
        pts = np.vstack([[0.0, cap], [x_cap, cap], keep])
        return Frontier(convex_closure(pts).points, self.strategy, self.scenario, dict(self.grid), dict(self.meta))

    def to_csv(self, path=None, extra=None):
        """Write ``R1,R2,strategy,scenario`` rows (9 significant digits)."""
        cols = ["R1", "R2", "strategy", "scenario"] + list((extra or {}).keys())
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r1, r2 in self.points:
            w.writerow([f"{r1:.9g}", f"{r2:.9g}", self.strategy, self.scenario] + list((extra or {}).values()))
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


def _x_at_y(p, y):
    # frontier is monotone: R1 as a function of R2 along the decreasing chain
    xs, ys = p[::-1, 0], p[::-1, 1]
    return float(np.interp(y, ys, xs))


def read_frontier_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no frontier rows")
    pts = [(float(r["R1"]), float(r["R2"])) for r in rows]
    meta = {k: v for k, v in rows[0].items() if k not in ("R1", "R2", "strategy", "scenario")}
    return Frontier(np.array(pts), rows[0]["strategy"], rows[0]["scenario"], meta=meta)


def convex_closure(points):
    """Upper-right convex hull of a nonnegative point cloud.

    The region represented is the down-closure of the convex hull, i.e.
    everything achievable by time sharing and rate reduction.

    Raises
    ------
    ValueError
        On empty input.
    """
    P = np.asarray(points, float).reshape(-1, 2)
    if len(P) == 0:
        raise ValueError("convex_closure needs at least one point")
    if np.any(~np.isfinite(P)):
        raise ValueError("points must be finite")
    P = np.maximum(P, 0.0)
    xmax, ymax = P[:, 0].max(), P[:, 1].max()
    P = np.vstack([P, [[0.0, ymax], [xmax, 0.0]]])
    # Pareto filter: sort by R1 desc, R2 desc; keep points with R2 above running max
    order = np.lexsort((-P[:, 1], -P[:, 0]))
    P = P[order]
    run = np.maximum.accumulate(np.concatenate([[-np.inf], P[:-1, 1]]))
    P = P[P[:, 1] > run]
    P = P[::-1]                                           # R1 ascending, R2 descending
    # merge near-duplicates
    if len(P) > 1:
        d = np.abs(np.diff(P, axis=0)).max(axis=1)
        P = P[np.concatenate([[True], d > 1e-12])]
    hull = []
    for p in P:
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    H = np.array(hull)
    if H[0, 0] > 0:
        H = np.vstack([[0.0, H[0, 1]], H])
    if H[-1, 1] > 0:
        H = np.vstack([H, [H[-1, 0], 0.0]])
    if len(H) > 1:
        d = np.abs(np.diff(H, axis=0)).max(axis=1)
        H = H[np.concatenate([[True], d > 1e-12])]
        if H[0, 0] <= 1e-12:
            H[0, 0] = 0.0
        if H[-1, 1] <= 1e-12:
            H[-1, 1] = 0.0
    return Frontier(H)


def region_dominates(a, b, tol=0.0):
    """True iff every vertex of ``b`` lies in ``a``'s region within ``tol``."""
    return all(a.contains(p, tol) for p in b.points)


def domination_gap(a, b):
    """Largest distance from a vertex of ``b`` to ``a``'s region (0 if all inside)."""
    return max(a.distance(p) for p in b.points)


# ------------------------------------------------------------ sweeps

@dataclass(frozen=True)
class GridSpec:
    """Resolution of the allocation sweep.

    ``fraction_points`` values ``k / (fraction_points - 1)`` per power
    fraction (simplex-constrained), ``relay_beta_points`` values of the
    relay weight in ``[0, 1]`` and ``relay_h_points`` values of the
    normalizer, spaced up to its power-budget maximum.
    """

    fraction_points: int = 7
    relay_beta_points: int = 7
    relay_h_points: int = 3
    chunk: int = 20000

    def __post_init__(self):
        for k in ("fraction_points", "relay_beta_points", "relay_h_points"):
            if getattr(self, k) < 2:
                raise ValueError(f"{k} must be >= 2")

    def to_dict(self):
        return {"fraction_points": self.fraction_points, "relay_beta_points": self.relay_beta_points,
                "relay_h_points": self.relay_h_points}


def _compositions(k, Q):
    """All nonnegative integer vectors of length ``k`` with sum <= ``Q``."""
    if k == 0:
        return np.zeros((1, 0), int)
    out = []

    def rec(prefix, left, depth):
        if depth == k:
            out.append(prefix)
            return
        for v in range(left + 1):
            rec(prefix + (v,), left - v, depth + 1)

    rec((), Q, 0)
    return np.array(out, int)


def _simplex_block(names, fixed, Q):
    active = [n for n in names if n not in fixed]
    budget = 1.0 - sum(fixed.get(n, 0.0) for n in names)
    C = _compositions(len(active), Q) / Q
    if budget < -SUM_TOL:
        C = C[:0]                                         # no valid point: empty grid
    C = C[C.sum(axis=1) <= budget + SUM_TOL] if len(active) else C
    cols = {}
    for n in names:
        cols[n] = C[:, active.index(n)] if n in active else np.full(len(C), float(fixed[n]))
    return cols, len(C)


MASK_ALIASES = {"gamma1": "g1", "gamma2": "g2", "gamma3": "g3", "beta1": "b1", "beta2": "b2",
                "beta3": "b3", "beta4": "b4", "beta1p": "bp1", "beta2p": "bp2", "beta": "relay_beta",
                "h": "relay_h"}


def normalize_masks(masks):
    """Canonical field names; returns ``(fraction_masks, relay_masks, dpc_override)``."""
    frac, relay, dpc = {}, {}, None
    for k, v in (masks or {}).items():
        k = MASK_ALIASES.get(k, k)
        if k == "dpc":
            dpc = DpcMode(v)
        elif k in FRACTION_FIELDS:
            v = float(v)
            if not 0 <= v <= 1:
                raise ValueError(f"mask {k}={v} outside [0, 1]")
            frac[k] = v
        elif k in ("relay_beta", "relay_h"):
            relay[k] = float(v)
        else:
            raise ValueError(f"unknown mask field {k!r}")
    return frac, relay, dpc


def allocation_grid(strategy, grid=GridSpec(), masks=None):
    """Simplex-constrained fraction grid as a dict of equal-length arrays."""
    strategy = Strategy(strategy)
    frac, _, _ = normalize_masks(masks)
    fixed = dict(frac)
    if strategy is Strategy.LOOKAHEAD:
        for k in ("bp2", "b2"):
            if fixed.get(k, 0.0) != 0.0:
                raise ValueError("look-ahead requires bp2 = b2 = 0")
            fixed[k] = 0.0
    Q = grid.fraction_points - 1
    bc, nb = _simplex_block(BETA_FIELDS, fixed, Q)
    gc, ng = _simplex_block(GAMMA_FIELDS, fixed, Q)
    out = {}
    for k, v in bc.items():
        out[k] = np.repeat(v, ng)
    for k, v in gc.items():
        out[k] = np.tile(v, nb)
    return out


def _relay_load(scen, f, beta):
    P1, P2 = scen.P1, scen.P2
    direct = f["bp1"] + f["b1"] + f["bp2"] + f["b2"] + f["b3"]
    coh = scen.h21 * beta * np.sqrt(f["b4"] * P1) + (1 - beta) * np.sqrt(f["g3"] * P2)
    return scen.h21 ** 2 * beta ** 2 * direct * P1 + coh ** 2 + beta ** 2 * scen.N2 + (1 - beta) ** 2 * (f["g1"] + f["g2"]) * P2


def relay_grid(scen, f, grid=GridSpec(), masks=None):
    """Expand a fraction grid with relay weights and normalizers.

    Normalizers are ``h_max * j / H`` for ``j = 1..H`` plus ``h = 1`` when
    it is within budget, so the no-relay point of every allocation is
    always present.
    """
    _, relay, _ = normalize_masks(masks)
    if "relay_beta" in relay:
        betas = np.array([relay["relay_beta"]])
    else:
        betas = np.linspace(0.0, 1.0, grid.relay_beta_points)
    n = len(next(iter(f.values())))
    F = {k: np.tile(v, len(betas)) for k, v in f.items()}
    beta = np.repeat(betas, n)
    load = _relay_load(scen, F, beta)
    with np.errstate(divide="ignore"):
        hmax = np.where(load > 0, np.sqrt(scen.P2 / np.where(load > 0, load, 1.0)), np.inf)
    if "relay_h" in relay:
        hs = np.full((len(beta), 1), relay["relay_h"])
    else:
        H = grid.relay_h_points
        fin = np.isfinite(hmax)
        base = np.where(fin, hmax, 1.0)[:, None] * (np.arange(1, H + 1) / H)[None, :]
        base[~fin] = 1.0
        one = np.where(hmax >= 1.0, 1.0, np.nan)[:, None]
        hs = np.concatenate([base, one], axis=1)
    m = hs.shape[1]
    out = {k: np.repeat(v, m) for k, v in F.items()}
    rb = np.repeat(beta, m)
    rh = hs.reshape(-1)
    keep = np.isfinite(rh) & (rh > 0)
    keep &= rh ** 2 * np.repeat(load, m) <= scen.P2 * (1 + SUM_TOL) + SUM_TOL
    # drop exact duplicates (h_max may equal 1)
    out = {k: v[keep] for k, v in out.items()}
    rb, rh = rb[keep], rh[keep]
    key = np.stack([out[k] for k in FRACTION_FIELDS] + [rb, rh], 1)
    _, first = np.unique(key, axis=0, return_index=True)
    first.sort()
    out = {k: v[first] for k, v in out.items()}
    return out, rb[first], rh[first]


def _threads():
    try:
        n = int(os.environ.get("CCIFC_THREADS", "0"))
    except ValueError:
        n = 0
    if n <= 0:
        n = min(4, os.cpu_count() or 1)
    return max(1, n)


def region_points(T, bad=None):
    """All candidate vertices of the per-allocation polygons, flattened."""
    B, side_ok, nonempty = corollary_bounds(T)
    ok = side_ok & nonempty
    if bad is not None:
        ok &= ~bad
    V, valid = polygon_vertices(B, ok)
    return V[valid], int(ok.sum())


def sweep_frontier(scen, strategy, grid=None, dpc="paper", masks=None, manual=None,
                   formula="exact", label=None):
    """Convex closure of the union of per-allocation regions over a grid.

    Parameters
    ----------
    scen : GaussianScenario
    strategy : Strategy or str
    grid : GridSpec, optional
    dpc : {"paper", "zero", "manual"}
    masks : dict, optional
        Fixed values for allocation fields, e.g. ``{"g3": 0}``; the key
        ``"dpc"`` overrides the binning-coefficient mode.

    Raises
    ------
    EmptyRegion
        If no grid allocation yields a nonempty region.
    """
    strategy = Strategy(strategy)
    grid = grid or GridSpec()
    _, _, dpc_over = normalize_masks(masks)
    mode = dpc_over or DpcMode(dpc)
    f = allocation_grid(strategy, grid, masks)
    rb = rh = None
    if strategy is Strategy.NODELAY:
        f, rb, rh = relay_grid(scen, f, grid, masks)
    n = len(f["bp1"])
    if n == 0:
        raise EmptyRegion("the allocation grid is empty")
    starts = list(range(0, n, grid.chunk))

    def work(s):
        sl = slice(s, s + grid.chunk)
        fs = {k: v[sl] for k, v in f.items()}
        T, bad = evaluate_batch(scen, fs, strategy, mode, manual,
                                None if rb is None else rb[sl], None if rh is None else rh[sl], formula)
        pts, used = region_points(T, bad)
        if len(pts) == 0:
            return np.zeros((0, 2)), used
        return convex_closure(pts).points, used

    nt = _threads()
    if nt > 1 and len(starts) > 1:
        with ThreadPoolExecutor(nt) as ex:
            parts = list(ex.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    used = sum(u for _, u in parts)
    if used == 0:
        raise EmptyRegion(f"no allocation on the grid gives a nonempty {strategy.value} region")
    pts = np.vstack([p for p, _ in parts])
    fr = convex_closure(pts)
    fr.strategy = label or strategy.value
    fr.scenario = scen.key()
    fr.grid = grid.to_dict()
    fr.meta = {"allocations": n, "nonempty": used, "dpc": mode.value,
               "masks": {k: v for k, v in (masks or {}).items()}, "formula": formula}
    return fr
