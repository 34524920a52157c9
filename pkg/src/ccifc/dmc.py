"""Finite-alphabet channels: mutual information, channel conditions and capacity sweeps.

Joints are dense arrays with named trailing axes and an optional leading
batch shape, so the same entropy code serves single evaluations and
whole distribution grids.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .rate_terms import NTERMS, RateTerms
from .region import convex_closure
from .scenario import Strategy

STOCH_TOL = 1e-12
JOINT_TOL = 1e-10
STRUCT_TOL = 1e-10
COND_TOL = 1e-10

CHANNEL_AXES = ("x1", "x2", "y2", "y3", "y4")
AUX_NAMES = ("tc", "tp", "u1c", "u1p", "v1c", "v1p", "u2c", "u2p")


class ChannelError(ValueError):
    pass


class ConditionRefused(RuntimeError):
    """A capacity formula was requested for a channel outside its class."""

    def __init__(self, condition, detail=""):
        self.condition = condition
        super().__init__(f"{condition} fails" + (f": {detail}" if detail else ""))


# ------------------------------------------------------------- channel

@dataclass(frozen=True, eq=False)
class FiniteChannel:
    """Transition tensor ``W[x1, x2, y2, y3, y4] = p(y2, y3, y4 | x1, x2)``."""

    W: np.ndarray

    def __post_init__(self):
        W = np.asarray(self.W, float)
        if W.ndim != 5:
            raise ChannelError(f"transition tensor must have 5 axes, got {W.ndim}")
        if not np.all(np.isfinite(W)) or np.any(W < 0):
            raise ChannelError("transition entries must be finite and nonnegative")
        s = W.sum(axis=(2, 3, 4))
        if np.max(np.abs(s - 1)) > STOCH_TOL:
            raise ChannelError(f"rows must sum to 1 (worst {np.max(np.abs(s - 1)):.3g})")
        W.setflags(write=False)
        object.__setattr__(self, "W", W)

    @property
    def sizes(self):
        return dict(zip(("X1", "X2", "Y2", "Y3", "Y4"), self.W.shape))

    def to_json(self):
        return json.dumps({"sizes": self.sizes, "transition": self.W.ravel().tolist()})

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
            sizes = [d["sizes"][k] for k in ("X1", "X2", "Y2", "Y3", "Y4")]
            trans = d["transition"]
        except (KeyError, TypeError, ValueError) as e:
            raise ChannelError(f"malformed channel file: {e}") from None
        if not all(type(n) is int for n in sizes):
            raise ChannelError("alphabet sizes must be JSON integers")
        if not isinstance(trans, list) or not all(type(w) in (int, float) for w in trans):
            raise ChannelError("transition must be a flat array of numbers")
        shape = tuple(sizes)
        flat = np.asarray(trans, float)
        if any(n < 1 for n in shape):
            raise ChannelError("alphabet sizes must be >= 1")
        if flat.size != int(np.prod(shape)):
            raise ChannelError(f"transition has {flat.size} entries, expected {int(np.prod(shape))}")
        return cls(flat.reshape(shape))


def load_channel(path):
    with open(path) as fh:
        return FiniteChannel.from_json(fh.read())


def _bsc(eps):
    return np.array([[1 - eps, eps], [eps, 1 - eps]])


def binary_fixture(eps2=0.1, eps3=0.05, degraded=True):
    """Binary XOR channel used for tests and demos.

    ``Y2 = X1 + N2``, ``Y3 = Y2 + X2 + N3`` and ``Y4 = X1 + X2 + N4`` (mod 2)
    with ``N4`` matched to the end-to-end noise of ``Y3``.  Both strong
    interference conditions then hold with equality.  ``degraded=False``
    feeds ``X1`` into ``Y3`` directly instead of through ``Y2``.
    """
    e4 = eps2 * (1 - eps3) + eps3 * (1 - eps2)
    W = np.zeros((2,) * 5)
    for x1, x2, y2, y3, y4 in itertools.product(range(2), repeat=5):
        p2 = _bsc(eps2)[x1, y2]
        src = y2 if degraded else x1
        p3 = _bsc(eps3 if degraded else e4)[src ^ x2, y3]
        p4 = _bsc(e4)[x1 ^ x2, y4]
        W[x1, x2, y2, y3, y4] = p2 * p3 * p4
    return FiniteChannel(W)


def semidet_fixture(eps3=0.05):
    """``Y2 = X1`` exactly, otherwise as :func:`binary_fixture`."""
    return binary_fixture(0.0, eps3)


def useless_channel(shape=(2, 2, 2, 2, 2)):
    """Outputs uniform and independent of the inputs."""
    W = np.ones(shape) / np.prod(shape[2:])
    return FiniteChannel(W)


# ------------------------------------------------------------- joints

@dataclass(frozen=True, eq=False)
class JointPmf:
    """Dense pmf with named trailing axes and an optional batch prefix."""

    p: np.ndarray
    names: tuple

    def __post_init__(self):
        p = np.asarray(self.p, float)
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise ValueError("axis names must be distinct")
        if p.ndim < len(names):
            raise ValueError("fewer array axes than names")
        if np.any(p < -JOINT_TOL) or not np.all(np.isfinite(p)):
            raise ValueError("pmf entries must be finite and nonnegative")
        tot = p.sum(axis=tuple(range(p.ndim - len(names), p.ndim)))
        if np.max(np.abs(tot - 1)) > JOINT_TOL:
            raise ValueError(f"pmf must sum to 1 (off by {np.max(np.abs(tot - 1)):.3g})")
        object.__setattr__(self, "p", np.maximum(p, 0.0))
        object.__setattr__(self, "names", names)

    @property
    def batch_ndim(self):
        return self.p.ndim - len(self.names)

    def entropy(self, group):
        """``H(group)`` in bits, batched."""
        keep = {self.names.index(n) for n in group}
        off = self.batch_ndim
        drop = tuple(off + i for i in range(len(self.names)) if i not in keep)
        m = self.p.sum(axis=drop) if drop else self.p
        m = m.reshape(m.shape[:off] + (-1,))
        with np.errstate(divide="ignore", invalid="ignore"):
            h = np.where(m > 0, -m * np.log2(np.where(m > 0, m, 1.0)), 0.0)
        return h.sum(axis=-1)


def mutual_information(joint, A, B, C=()):
    """``I(A; B | C)`` in bits by direct entropy summation (``0 log 0 = 0``).

    Groups are iterables of axis names; overlapping groups are allowed.
    """
    A, B, C = set(A), set(B), set(C)
    for g in (A, B, C):
        bad = g - set(joint.names)
        if bad:
            raise ValueError(f"unknown axes {sorted(bad)}")
    H = joint.entropy
    val = H(A | C) + H(B | C) - H(A | B | C) - (H(C) if C else 0.0)
    return np.maximum(val, 0.0) if np.ndim(val) else max(float(val), 0.0)


def entropy(joint, A, C=()):
    A, C = set(A), set(C)
    return joint.entropy(A | C) - (joint.entropy(C) if C else 0.0)


@dataclass(frozen=True, eq=False)
class InputFamily:
    """``p(t) p(x1|t) p(x2|t)``; the arrays may carry a leading batch shape."""

    pt: np.ndarray
    px1: np.ndarray
    px2: np.ndarray

    def __post_init__(self):
        for nm in ("pt", "px1", "px2"):
            a = np.asarray(getattr(self, nm), float)
            if np.any(a < 0) or np.max(np.abs(a.sum(-1) - 1)) > STOCH_TOL:
                raise ValueError(f"{nm} is not a valid distribution")
            object.__setattr__(self, nm, a)

    def joint(self, ch):
        """Joint over ``(t, x1, x2, y2, y3, y4)``."""
        p = np.einsum("...t,...ta,...tb,abcde->...tabcde", self.pt, self.px1, self.px2, ch.W)
        return JointPmf(p, ("t",) + CHANNEL_AXES)


def input_joint(ch, pxx):
    """Joint over the channel axes for an arbitrary input pmf ``p(x1, x2)``."""
    return JointPmf(np.einsum("...ab,abcde->...abcde", pxx, ch.W), CHANNEL_AXES)


# ------------------------------------------------------------- conditions

@dataclass
class ConditionReport:
    degraded: bool
    semidet: bool
    strong_rx1: bool
    strong_rx2: bool
    strong_sum: bool
    semidet_extra: bool
    samples: int
    margins: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    LABELS = {
        "degraded": "degradedness",
        "semidet": "semi-determinism",
        "strong_rx1": "strong interference at receiver 3",
        "strong_rx2": "strong interference at receiver 4",
        "strong_sum": "sum-rate strong interference",
        "semidet_extra": "semi-deterministic side condition",
    }

    def first_failure(self, required):
        for k in required:
            if not getattr(self, k):
                return k
        return None

    def require(self, required):
        k = self.first_failure(required)
        if k is not None:
            detail = ""
            if k in self.margins:
                detail = f"worst margin {self.margins[k]:.3g} (no sampled pass)"
            raise ConditionRefused(self.LABELS[k], detail)

    def to_dict(self):
        d = {k: getattr(self, k) for k in self.LABELS}
        d["samples"] = self.samples
        d["margins"] = {k: float(v) for k, v in self.margins.items()}
        d["witnesses"] = {k: np.asarray(v).tolist() for k, v in self.witnesses.items()}
        d["note"] = (f"mutual-information conditions: no counterexample found in {self.samples} "
                     "sampled input distributions plus deterministic corner cases")
        return d


def is_degraded(ch, tol=STRUCT_TOL):
    """``p(y3 | x1, x2, y2)`` does not depend on ``x1`` wherever it is defined."""
    W23 = ch.W.sum(axis=4)                                 # x1 x2 y2 y3
    p2 = W23.sum(axis=3)                                   # x1 x2 y2
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = W23 / p2[..., None]
    for x2 in range(ch.W.shape[1]):
        for y2 in range(ch.W.shape[2]):
            live = p2[:, x2, y2] > tol
            if live.sum() < 2:
                continue
            rows = cond[live, x2, y2, :]
            if np.max(np.abs(rows - rows[0])) > tol:
                return False
    return True


def is_semidet(ch, tol=STRUCT_TOL):
    """``Y2`` is a deterministic function of ``X1`` alone."""
    p2 = ch.W.sum(axis=(3, 4))                             # x1 x2 y2
    if np.max(np.abs(p2 - p2[:, :1, :])) > tol:
        return False
    return bool(np.all((np.abs(p2) <= tol) | (np.abs(p2 - 1) <= tol)))


def _input_samples(shape, n, rng):
    a, b = shape
    out = [np.full((a, b), 1.0 / (a * b))]
    for i in range(a):
        for j in range(b):
            e = np.zeros((a, b))
            e[i, j] = 1
            out.append(e)
    ua, ub = np.full(a, 1.0 / a), np.full(b, 1.0 / b)
    for i in range(a):
        e = np.zeros(a)
        e[i] = 1
        out.append(np.outer(e, ub))
    for j in range(b):
        e = np.zeros(b)
        e[j] = 1
        out.append(np.outer(ua, e))
    if n > 0:
        out.extend(rng.dirichlet(np.full(a * b, 0.5), size=n).reshape(n, a, b))
    return np.array(out)


def condition_margins(ch, pxx):
    """Slack (rhs minus lhs) of each mutual-information condition, batched over inputs."""
    J = input_joint(ch, pxx)
    I = lambda A, B, C=(): mutual_information(J, A, B, C)
    return {
        "strong_rx1": I(["x2"], ["y3"], ["x1"]) - I(["x2"], ["y4"], ["x1"]),
        "strong_rx2": I(["x1"], ["y4"]) - I(["x1"], ["y3"]),
        "strong_sum": I(["x1", "x2"], ["y4"]) - I(["x1", "x2"], ["y3"]),
        "semidet_extra": I(["x1"], ["y4"], ["y2", "x2"]) - I(["x1"], ["y3"], ["y2", "x2"]),
    }


def check_conditions(ch, samples=200, seed=0):
    """Structural and sampled checks of every condition used by the capacity results.

    The structural tests are exact.  The mutual-information inequalities
    are tested on ``samples`` random input pmfs ``p(x1, x2)`` plus the
    uniform pmf and all point-mass and half-point-mass corners; a pass only
    means no counterexample was found.
    """
    rng = np.random.default_rng(seed)
    pxx = _input_samples(ch.W.shape[:2], samples, rng)
    M = condition_margins(ch, pxx)
    flags, margins, wit = {}, {}, {}
    for k, v in M.items():
        i = int(np.argmin(v))
        margins[k] = float(v[i])
        flags[k] = bool(v[i] >= -COND_TOL)
        if not flags[k]:
            wit[k] = pxx[i]
    return ConditionReport(is_degraded(ch), is_semidet(ch), flags["strong_rx1"], flags["strong_rx2"],
                           flags["strong_sum"], flags["semidet_extra"], len(pxx), margins, wit)


# ------------------------------------------------------------- grids

def simplex_grid(n, Q):
    """All pmfs on ``n`` symbols with entries in ``{0, 1/Q, ..., 1}``."""
    out = []
    for c in itertools.combinations(range(Q + n - 1), n - 1):
        parts = np.diff((-1,) + c + (Q + n - 1,)) - 1
        out.append(parts)
    return np.array(out, float) / Q


def _positive_compositions(k, Q):
    out = []
    for c in itertools.combinations(range(1, Q), k - 1):
        out.append(np.diff((0,) + c + (Q,)))
    return np.array(out, float) / Q


@dataclass(frozen=True)
class DistGrid:
    """Resolution of the input-family enumeration.

    ``atom_q`` sets the conditional pmfs ``p(x1|t)``, ``p(x2|t)`` and
    ``weight_q`` the time-sharing weights ``p(t)``.
    """

    atom_q: int = 6
    weight_q: int = 6
    max_families: int = 5_000_000
    chunk: int = 20000


def family_count(ch, tmax, grid=DistGrid()):
    a = len(simplex_grid(ch.W.shape[0], grid.atom_q)) * len(simplex_grid(ch.W.shape[1], grid.atom_q))
    return sum(comb(a, k) * comb(grid.weight_q - 1, k - 1) for k in range(1, tmax + 1) if k <= grid.weight_q)


def _atoms(ch, grid):
    A1 = simplex_grid(ch.W.shape[0], grid.atom_q)
    A2 = simplex_grid(ch.W.shape[1], grid.atom_q)
    return np.repeat(A1, len(A2), axis=0), np.tile(A2, (len(A1), 1))


def iter_family_indices(ch, tmax, grid=DistGrid()):
    """Yield ``(atom_index, weight)`` blocks covering ``|T| = 1..tmax``.

    For each ``k`` the atoms are distinct pairs ``(p(x1|t), p(x2|t))`` and
    the weights strictly positive, so the families for ``tmax`` contain
    those for every smaller cap.
    """
    n = family_count(ch, tmax, grid)
    if n > grid.max_families:
        raise ValueError(f"{n} input families exceed the limit {grid.max_families}; "
                         "lower tmax or the grid resolution")
    na = len(_atoms(ch, grid)[0])
    for k in range(1, min(tmax, grid.weight_q) + 1):
        wts = _positive_compositions(k, grid.weight_q)
        combos = itertools.combinations(range(na), k)
        while True:
            block = np.array(list(itertools.islice(combos, max(1, grid.chunk // len(wts)))), int)
            if block.size == 0:
                break
            yield np.repeat(block, len(wts), axis=0), np.tile(wts, (len(block), 1))


def iter_families(ch, tmax, grid=DistGrid()):
    """As :func:`iter_family_indices`, yielding batched :class:`InputFamily` objects."""
    a1, a2 = _atoms(ch, grid)
    for idx, w in iter_family_indices(ch, tmax, grid):
        yield InputFamily(w, a1[idx], a2[idx])


def capacity_values(ch, fam):
    """The capacity-formula constraint values for a batch of input families."""
    J = fam.joint(ch)
    I = lambda A, B, C=(): mutual_information(J, A, B, C)
    H = lambda A, C=(): entropy(J, A, C)
    return {
        "r1_degraded": I(["x1"], ["y2"], ["x2", "t"]),
        "r1_semidet": H(["y2"], ["x2", "t"]) + I(["x1"], ["y3"], ["y2", "x2", "t"]),
        "r2": I(["x2"], ["y4"], ["x1", "t"]),
        "sum3": I(["x1", "x2"], ["y3"]),
        "sum4": I(["x1", "x2"], ["y4"]),
    }


def _h(p):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0).sum(-1)


class _AtomTable:
    """Per-atom quantities from which every family value follows.

    Terms conditioned on ``T`` are averages over atoms; the two sum-rate
    terms need the entropy of the mixed output distribution.
    """

    def __init__(self, ch, grid):
        a1, a2 = _atoms(ch, grid)
        single = InputFamily(np.ones((len(a1), 1)), a1[:, None, :], a2[:, None, :])
        v = capacity_values(ch, single)
        self.linear = {k: v[k] for k in ("r1_degraded", "r1_semidet", "r2")}
        J = single.joint(ch).p[:, 0]                       # atom x1 x2 y2 y3 y4
        self.y3 = J.sum(axis=(1, 2, 3, 5))
        self.y4 = J.sum(axis=(1, 2, 3, 4))
        pin = np.einsum("na,nb->nab", a1, a2)
        W3 = ch.W.sum(axis=(2, 4))
        W4 = ch.W.sum(axis=(2, 3))
        self.h3 = np.einsum("nab,ab->n", pin, _h(W3))
        self.h4 = np.einsum("nab,ab->n", pin, _h(W4))

    def values(self, idx, w):
        out = {k: np.einsum("nk,nk->n", w, v[idx]) for k, v in self.linear.items()}
        out["sum3"] = _h(np.einsum("nk,nky->ny", w, self.y3[idx])) - np.einsum("nk,nk->n", w, self.h3[idx])
        out["sum4"] = _h(np.einsum("nk,nky->ny", w, self.y4[idx])) - np.einsum("nk,nk->n", w, self.h4[idx])
        return out


def _polygon_vertices(a, b, c):
    a, b = np.minimum(a, c), np.minimum(b, c)
    z = np.zeros_like(a)
    pts = [np.stack([a, z], -1), np.stack([z, b], -1),
           np.stack([a, np.minimum(b, c - a)], -1), np.stack([np.minimum(a, c - b), b], -1)]
    return np.concatenate(pts, axis=0)


def _sweep(ch, tmax, grid, r1_key, sum_keys, label):
    if tmax < 1:
        raise ValueError("tmax must be >= 1")
    tab = _AtomTable(ch, grid)
    acc = [np.zeros((1, 2))]
    for idx, w in iter_family_indices(ch, tmax, grid):
        v = tab.values(idx, w)
        s = np.minimum.reduce([v[k] for k in sum_keys])
        pts = np.maximum(_polygon_vertices(v[r1_key], v["r2"], s), 0.0)
        acc.append(convex_closure(pts).points)
    fr = convex_closure(np.vstack(acc))
    fr.strategy = label
    fr.meta = {"tmax": tmax, "atom_q": grid.atom_q, "weight_q": grid.weight_q}
    return fr


def capacity_degraded(ch, tmax=4, grid=DistGrid(), report=None):
    """Capacity frontier of a degraded channel under both strong interference conditions.

    Raises
    ------
    ConditionRefused
        If the channel is not degraded or a sampled condition fails.
    """
    report = report or check_conditions(ch)
    report.require(("degraded", "strong_rx1", "strong_rx2"))
    return _sweep(ch, tmax, grid, "r1_degraded", ("sum3", "sum4"), "capacity_degraded")


def capacity_degraded_cor(ch, tmax=4, grid=DistGrid(), report=None):
    """As :func:`capacity_degraded` with the receiver-4 sum bound removed.

    Requires the sum-rate strong interference condition instead of the
    receiver-4 one.
    """
    report = report or check_conditions(ch)
    report.require(("degraded", "strong_rx1", "strong_sum"))
    return _sweep(ch, tmax, grid, "r1_degraded", ("sum3",), "capacity_degraded_cor")


def capacity_semidet(ch, tmax=4, grid=DistGrid(), report=None):
    """Capacity frontier when ``Y2`` is a deterministic function of ``X1``."""
    report = report or check_conditions(ch)
    report.require(("semidet", "strong_rx1", "strong_rx2", "semidet_extra"))
    return _sweep(ch, tmax, grid, "r1_semidet", ("sum3", "sum4"), "capacity_semidet")


CAPACITY = {"degraded": capacity_degraded, "degraded_cor": capacity_degraded_cor,
            "semidet": capacity_semidet}


# ------------------------------------------------------------- scheme terms

# (A, B, C) groups; "+I1" adds the first term
_SCHEME = {
    1: (["u2c"], ["tp"], ["tc"]),
    2: (["u2p"], ["tp"], ["tc"]),
    4: (["v1p"], ["y3"], ["u2c", "v1c", "u1p", "u1c", "tp", "tc"]),
    5: (["u2c", "v1p", "v1c", "u1p", "u1c", "tp", "tc"], ["y3"], []),
    6: (["v1p", "v1c", "u1p", "tp"], ["y3", "u2c"], ["u1c", "tc"]),
    7: (["v1p", "u1p", "tp"], ["y3", "u2c"], ["v1c", "u1c", "tc"]),
    8: (["u2c", "v1p", "u1p", "tp"], ["y3"], ["v1c", "u1c", "tc"]),
    9: (["v1c", "v1p"], ["y3"], ["u2c", "u1p", "u1c", "tp", "tc"]),
    10: (["v1p", "u2c"], ["y3"], ["v1c", "u1p", "u1c", "tp", "tc"]),
    11: (["u2c", "v1p", "v1c", "u1p", "tp"], ["y3"], ["u1c", "tc"]),
    12: (["u2c", "v1p", "v1c"], ["y3"], ["u1p", "u1c", "tp", "tc"]),
    13: (["u2c"], ["y4", "u2p"], ["v1c", "u1c", "tc"]),
    14: (["u2p"], ["y4", "u2c"], ["v1c", "u1c", "tc"]),
    15: (["u2c", "u2p", "v1c", "u1c", "tc"], ["y4"], []),
    16: (["u2c", "v1c"], ["y4", "u2p"], ["u1c", "tc"]),
    17: (["u2p", "v1c"], ["y4", "u2c"], ["u1c", "tc"]),
    18: (["u2c", "u2p", "v1c"], ["y4"], ["u1c", "tc"]),
    19: (["u2c", "u2p"], ["y4"], ["v1c", "u1c", "tc"]),
    20: (["u1p"], ["y2"], ["u2c", "u2p", "u1c", "tp", "tc"]),
    21: (["u1c", "u1p"], ["y2"], ["u2c", "u2p", "tp", "tc"]),
}
_PLUS_I1 = (5, 8, 10, 11, 12)


def scheme_terms(joint, assign=None, provenance=Strategy.CLASSICAL):
    """Rate terms of the causal scheme for a joint over auxiliaries and channel symbols.

    Parameters
    ----------
    joint : JointPmf
        Unbatched or batched.  Axis names are taken from ``AUX_NAMES`` and
        ``CHANNEL_AXES``.
    assign : dict, optional
        Maps an auxiliary name to an existing axis (the auxiliary *is* that
        variable) or to ``None`` (constant).  Auxiliaries absent from both
        the joint and ``assign`` are treated as constants.

    Returns
    -------
    RateTerms, or an array of shape ``batch + (22,)`` for batched joints.
    """
    assign = dict(assign or {})

    def res(group):
        out = []
        for n in group:
            n = assign.get(n, n) if n in assign else n
            if n is None or n not in joint.names:
                continue
            out.append(n)
        return out

    mi = lambda A, B, C: mutual_information(joint, res(A), res(B), res(C))
    shape = joint.p.shape[:joint.batch_ndim]
    T = np.zeros(shape + (NTERMS + 1,))
    for k, (A, B, C) in _SCHEME.items():
        T[..., k] = mi(A, B, C)
    for k in _PLUS_I1:
        T[..., k] += T[..., 1]
    u2c, u2p, tp, tc = ["u2c"], ["u2p"], ["tp"], ["tc"]
    T[..., 0] = mi(u2c, u2p, tc)                           # binning-cost part of I3
    T[..., 3] = mi(u2c, u2p, tc) + mi(u2c + u2p, tp, tc)
    if shape:
        return T
    return RateTerms.from_array(T, provenance)


def random_scheme_joint(rng, k=2):
    """Random joint over every auxiliary and a random binary channel.

    The factorization follows the causal scheme: ``tp | tc``, the Tx1
    auxiliaries superposed on ``(tp, tc)``, ``(u2c, u2p)`` drawn jointly
    given ``(tp, tc)`` and close to independent, and the inputs and outputs
    drawn from random conditionals.
    """
    def rc(shape, n=k):
        return rng.dirichlet(np.full(n, 0.5), size=shape)

    ptc = rc(())
    ptp = rc((k,))
    pu1c = rc((k,))
    pu1p = rc((k, k, k))
    pv1c = rc((k,))
    pv1p = rc((k, k, k))
    px1 = rc((k,) * 6)
    base = np.einsum("ai,aj->aij", rc((k,)), rc((k,))).reshape(k, k * k)
    eps = rng.uniform(0, 1) ** 3
    pu2 = ((1 - eps) * base[None] + eps * rc((k, k), k * k)).reshape(k, k, k, k)
    px2 = rc((k,) * 4)
    py2 = rc((k,))
    py34 = rc((k, k), k * k).reshape(k, k, k, k)
    J = np.einsum("a,ab,ac,cbad,ae,ebaf,fdecbag,bahi,hibaj,gk,gjlm->abcdefhigjklm",
                  ptc, ptp, pu1c, pu1p, pv1c, pv1p, px1, pu2, px2, py2, py34)
    return JointPmf(J, AUX_NAMES + CHANNEL_AXES)


def random_scheme_terms(rng, k=2):
    """Rate terms realized by :func:`random_scheme_joint`."""
    return scheme_terms(random_scheme_joint(rng, k))


def degraded_assignment():
    """Auxiliary choice that specializes the causal scheme to the degraded capacity formula."""
    return {"tc": "t", "u2c": "x2", "u1c": "x1", "tp": None, "u1p": None, "v1c": None,
            "v1p": None, "u2p": None}
