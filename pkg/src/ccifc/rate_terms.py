"""Gaussian rate terms of the causal cognitive interference channel.

Two evaluators are provided.

``formula="exact"`` (default)
    Mutual informations of the Gaussian superposition mapping, computed in
    closed form from conditional variances.  Every term is a genuine
    mutual information of the mapping, so it is nonnegative, scales exactly
    with power and respects the chain rule.

``formula="printed"``
    A literal transcription of the published closed forms, including the
    intermediate quantities ``A, B, C, D, F``.  Several of those expressions
    disagree with the mutual informations they are meant to equal; they are
    kept as an audit path and for comparison.

Column layout of batch results: ``T[:, 0]`` holds the shared component
``I3'`` and ``T[:, k]`` holds ``I_k`` for ``k = 1..21``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import (BETA_FIELDS, FRACTION_FIELDS, DpcCoefficients, DpcMode,
                       GaussianScenario, Strategy, validate_allocation)

NEG_TOL = 1e-12
_RANK_TOL = 1e-24
NTERMS = 21


class NegativeThetaArgument(ValueError):
    """A rate kernel received a negative argument; the point is infeasible."""

    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"negative argument {value!r} in rate term I{index}")


class InvalidAllocation(ValueError):
    pass


def theta(x, index=None):
    """Gaussian rate kernel ``0.5 * log2(1 + x)`` in bits.

    Accepts scalars or arrays; ``+inf`` maps to ``+inf``.  Arguments below
    ``-1e-12`` raise :class:`NegativeThetaArgument`; tiny negative rounding
    residue is clamped to zero.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -NEG_TOL):
        bad = arr[arr < -NEG_TOL]
        raise NegativeThetaArgument(index, float(bad.flat[0]))
    out = 0.5 * np.log2(1.0 + np.maximum(arr, 0.0))
    return float(out) if out.ndim == 0 else out


def _th(x):
    # unchecked kernel for internal use on nonnegative arrays
    return 0.5 * np.log2(1.0 + x)


def _ratio(num, den):
    """``num / den`` with ``0/0 -> 0`` and ``x/0 -> sign(x) * inf``."""
    num, den = np.broadcast_arrays(np.asarray(num, float), np.asarray(den, float))
    out = np.zeros(num.shape)
    pos = den > 0
    np.divide(num, den, out=out, where=pos)
    out[~pos & (num > 0)] = np.inf
    out[~pos & (num < 0)] = -np.inf
    return out


def _half_log(before, after):
    """``0.5 * log2(before / after)`` for variances, with degenerate cases.

    A target that is already deterministic contributes nothing; one that
    becomes deterministic only after conditioning contributes ``inf``.
    """
    before, after = np.broadcast_arrays(np.asarray(before, float), np.asarray(after, float))
    out = np.zeros(before.shape)
    ok = (before > 0) & (after > 0)
    out[ok] = 0.5 * np.log2(before[ok] / after[ok])
    out[(before > 0) & ~(after > 0)] = np.inf
    return out


def _residual(target, obs):
    """Squared norm of ``target`` after projecting out ``span(obs)``.

    Vectors live in whitened source coordinates (last axis), so this is the
    conditional variance of a noiseless linear combination of independent
    unit sources.  Modified Gram-Schmidt; near-null directions are dropped.
    """
    basis = []
    for o in obs:
        v = o.copy()
        for q in basis:
            v -= np.sum(v * q, axis=-1, keepdims=True) * q
        n2 = np.sum(v * v, axis=-1, keepdims=True)
        ref = np.sum(o * o, axis=-1, keepdims=True)
        keep = n2 > _RANK_TOL * np.maximum(ref, np.finfo(float).tiny)
        basis.append(np.where(keep, v / np.sqrt(np.where(keep, n2, 1.0)), 0.0))
    r = target.copy()
    for q in basis:
        r -= np.sum(r * q, axis=-1, keepdims=True) * q
    return np.sum(r * r, axis=-1)


# ------------------------------------------------------------- containers

@dataclass(frozen=True)
class RateTerms:
    """The 21 rate terms (bits per channel use) and the shared ``I3'`` part."""

    I: tuple
    I3prime: float
    provenance: Strategy = Strategy.CLASSICAL

    def __post_init__(self):
        if len(self.I) != NTERMS:
            raise ValueError(f"expected {NTERMS} terms, got {len(self.I)}")
        object.__setattr__(self, "I", tuple(float(x) for x in self.I))
        object.__setattr__(self, "provenance", Strategy(self.provenance))

    def __getitem__(self, k):
        if not 1 <= k <= NTERMS:
            raise IndexError(f"rate terms are numbered 1..{NTERMS}")
        return self.I[k - 1]

    def as_array(self):
        """Length-22 array: ``[I3', I1, ..., I21]``."""
        return np.array((self.I3prime,) + self.I)

    @classmethod
    def from_array(cls, arr, provenance=Strategy.CLASSICAL):
        arr = np.asarray(arr, float)
        return cls(tuple(arr[1:NTERMS + 1]), float(arr[0]), provenance)

    def to_dict(self):
        d = {f"I{k}": self[k] for k in range(1, NTERMS + 1)}
        d["I3prime"] = self.I3prime
        d["provenance"] = self.provenance.value
        return d


@dataclass(frozen=True)
class Intermediates:
    A: float
    B: float
    C: float
    D: float
    F: float


# ------------------------------------------------------- effective channel

def _gains(scen):
    return {k: getattr(scen, k) for k in ("P1", "P2", "h21", "h31", "h32", "h41", "h42", "N2", "N3", "N4")}


def relay_substitution(g, beta, h):
    """Receiver gains and noises seen under instantaneous relaying.

    The cognitive transmitter forwards ``beta`` of its overheard signal, so
    the primary signal reaches receiver ``u`` through ``h_u1 + h beta h21 h_u2``
    and the forwarded noise adds ``h^2 beta^2 h_u2^2 N2``.  The link to the
    cognitive transmitter itself is unchanged.
    """
    out = dict(g)
    for u in ("3", "4"):
        hu1, hu2, Nu = g[f"h{u}1"], g[f"h{u}2"], g[f"N{u}"]
        out[f"h{u}1"] = hu1 + h * beta * g["h21"] * hu2
        out[f"h{u}2"] = h * (1 - beta) * hu2
        out[f"N{u}"] = Nu + h ** 2 * beta ** 2 * hu2 ** 2 * g["N2"]
    return out


def effective_scenario(scen, alloc):
    """Scenario with receiver gains replaced per the relay substitution."""
    if alloc.strategy is not Strategy.NODELAY:
        return scen
    g = relay_substitution(_gains(scen), alloc.relay_beta, alloc.relay_h)
    return GaussianScenario(**{k: float(v) for k, v in g.items()})


def _closed_form_alphas(g, f):
    P1, P2 = g["P1"], g["P2"]
    D = g["N4"] + g["h41"] ** 2 * (f["bp1"] + f["b1"] + f["bp2"] + f["b2"]) * P1 + g["h42"] ** 2 * f["g2"] * P2
    E = (g["h41"] * np.sqrt(f["b4"] * P1) + g["h42"] * np.sqrt(f["g3"] * P2)) ** 2
    a1 = g["h42"] * f["g1"] * P2 / (g["h42"] ** 2 * f["g1"] * P2 + D + E)
    a2 = g["h42"] * f["g2"] * P2 / (D + E)
    return a1, a2


def _alphas(g, f, mode, manual=None):
    mode = DpcMode(mode)
    if mode is DpcMode.PAPER:
        return _closed_form_alphas(g, f)
    shape = np.broadcast(*f.values()).shape
    if mode is DpcMode.ZERO:
        return np.zeros(shape), np.zeros(shape)
    if manual is None:
        raise ValueError("manual DPC mode needs (alpha1, alpha2)")
    return np.full(shape, float(manual[0])), np.full(shape, float(manual[1]))


# --------------------------------------------------------- exact evaluator

def _exact_core(g, f, a1, a2, lookahead=False):
    P1, P2 = g["P1"], g["P2"]
    h21, h31, h32, h41, h42 = g["h21"], g["h31"], g["h32"], g["h41"], g["h42"]
    N2, N3, N4 = g["N2"], g["N3"], g["N4"]
    # component powers
    vp, v, up, u, t, c4 = (f[k] * P1 for k in BETA_FIELDS)
    q1, q2, q3 = f["g1"] * P2, f["g2"] * P2, f["g3"] * P2
    shape = np.broadcast(vp, v, up, u, t, c4, q1, q2, q3, a1, a2,
                         h21, h31, h32, h41, h42, N2, N3, N4).shape
    n = int(np.prod(shape)) if shape else 1

    def col(x):
        return np.broadcast_to(np.asarray(x, float), shape).reshape(n)

    vp, v, up, u, t, c4, q1, q2, q3, a1, a2 = map(col, (vp, v, up, u, t, c4, q1, q2, q3, a1, a2))
    h21, h31, h32, h41, h42, N2, N3, N4 = map(col, (h21, h31, h32, h41, h42, N2, N3, N4))

    # whitened coordinates (T'p, U'2c, U'2p) of the binning codewords
    st, s1, s2 = np.sqrt(t), np.sqrt(q1), np.sqrt(q2)
    zero = np.zeros(n)
    a, b, c = a1 * h41, a2 * h41, a2 * h42
    o1 = np.stack([a * st, s1, zero], -1)            # U2c
    o2 = np.stack([b * st, c * s1, s2], -1)          # U2p
    eT = np.stack([np.ones(n), zero, zero], -1)      # T'p itself

    T = np.empty((n, NTERMS + 1))
    # binning costs at the cognitive encoder
    I1 = _th(_ratio(a * a * t, q1))
    T[:, 2] = _th(_ratio(b * b * t, q2 + c * c * q1))
    v2 = np.sum(o2 * o2, -1)
    v2_1 = _residual(o2, [o1])
    I3p = _half_log(v2, v2_1)
    middle = _half_log(v2_1, _residual(o2, [o1, eT]))
    T[:, 1] = I1
    T[:, 0] = I3p
    T[:, 3] = I1 + middle + I3p

    # primary receiver
    n3 = h32 ** 2 * q2 + N3
    T[:, 4] = _th(h31 ** 2 * vp / n3)
    coh3 = (h31 * np.sqrt(c4) + h32 * np.sqrt(q3)) ** 2
    T[:, 5] = I1 + _th((h31 ** 2 * (vp + v + up + u + t) + coh3 + h32 ** 2 * q1) / n3)
    r3 = _residual(np.stack([h31 * st, h32 * s1, zero], -1), [o1])
    T[:, 6] = I1 + _half_log(n3 + h31 ** 2 * (up + v + vp) + r3, n3)
    T[:, 7] = I1 + _half_log(n3 + h31 ** 2 * (up + vp) + r3, n3)
    T[:, 8] = I1 + _th((h31 ** 2 * (vp + up + t) + h32 ** 2 * q1) / n3)
    T[:, 9] = _th(h31 ** 2 * (vp + v) / n3)
    T[:, 10] = I1 + _th((h31 ** 2 * vp + h32 ** 2 * q1) / n3)
    T[:, 11] = I1 + _th((h31 ** 2 * (vp + v + up + t) + h32 ** 2 * q1) / n3)
    T[:, 12] = I1 + _th((h31 ** 2 * (vp + v) + h32 ** 2 * q1) / n3)

    # cognitive receiver
    n4 = N4 + h41 ** 2 * (vp + up)
    e = np.stack([h41 * st, h42 * s1, h42 * s2], -1)
    r0 = np.sum(e * e, -1)
    r1 = _residual(e, [o1])
    r2 = _residual(e, [o2])
    r12 = _residual(e, [o1, o2])
    coh4 = (h41 * np.sqrt(c4) + h42 * np.sqrt(q3)) ** 2
    total4 = N4 + h41 ** 2 * (vp + v + up + u + t) + coh4 + h42 ** 2 * (q1 + q2)
    T[:, 13] = I3p + _half_log(n4 + r2, n4 + r12)
    T[:, 14] = I3p + _half_log(n4 + r1, n4 + r12)
    T[:, 15] = _half_log(total4, n4 + r12)
    T[:, 16] = T[:, 13] + _th(h41 ** 2 * v / (n4 + r2))
    T[:, 17] = T[:, 14] + _th(h41 ** 2 * v / (n4 + r1))
    T[:, 18] = _half_log(n4 + r0 + h41 ** 2 * v, n4 + r12)
    T[:, 19] = _half_log(n4 + r0, n4 + r12)

    # decoding at the cognitive transmitter
    n2 = h21 ** 2 * (vp + v) + N2
    if lookahead:
        T[:, 20] = _th(_ratio(h21 ** 2 * t, n2))
        T[:, 21] = _th(_ratio(h21 ** 2 * (t + c4), n2))
    else:
        T[:, 20] = _th(_ratio(h21 ** 2 * up, n2))
        T[:, 21] = _th(_ratio(h21 ** 2 * (up + u), n2))
    return T.reshape(shape + (NTERMS + 1,))


# ------------------------------------------------------- printed formulas

def _intermediates(g, f, a1, a2):
    P1, P2 = g["P1"], g["P2"]
    h41, h42 = g["h41"], g["h42"]
    bp1, b1, bp2, b2, b3, b4 = (f[k] for k in BETA_FIELDS)
    g1, g2 = f["g1"], f["g2"]
    A = g1 * P2 + a1 ** 2 * h41 ** 2 * b3 * P1
    B = a2 ** 2 * h41 ** 2 * b3 * P1 + (g2 + h42 ** 2 * a2 ** 2 * g1) * P2
    C = h41 ** 2 * b3 * g1 * P1 * P2 * (1 - a1 * h42) ** 2
    D = g["N4"] + h41 ** 2 * (bp1 + b1 + bp2 + b2) * P1 + h42 ** 2 * g2 * P2
    # F as printed: three summands
    F = ((h41 ** 2 * b3 * a1 * P1 + 2 * h42 * g1 * P2) * h41 ** 2 * b3 * a1 * g2 * P1 * P2
         + C * a2 * (a2 * h42 ** 2 * g1 * P2 + a2 * h41 ** 2 * b3 * P1 + 2 * h42 * g2 * P2)
         + (A * g2 + g1 ** 2 * P2) * h42 ** 2 * g2 * P2 ** 2)
    return A, B, C, D, F


def _printed_core(g, f, a1, a2, lookahead=False):
    """Literal closed forms.  Returns ``(T, args)`` where ``args[:, k]`` is
    the most negative theta argument used by term ``k``."""
    P1, P2 = g["P1"], g["P2"]
    h21, h31, h32, h41, h42 = g["h21"], g["h31"], g["h32"], g["h41"], g["h42"]
    N2, N3, N4 = g["N2"], g["N3"], g["N4"]
    bp1, b1, bp2, b2, b3, b4 = (f[k] for k in BETA_FIELDS)
    g1, g2, g3 = f["g1"], f["g2"], f["g3"]
    A, B, C, D, F = _intermediates(g, f, a1, a2)
    shape = np.broadcast(bp1, b1, bp2, b2, b3, b4, g1, g2, g3, a1, a2,
                         h21, h31, h32, h41, h42, N2, N3, N4).shape
    args = {}

    def th(k, x):
        x = np.broadcast_to(np.asarray(x, float), shape)
        args[k] = np.minimum(args.get(k, np.inf), x)
        return _th(np.maximum(x, 0.0))

    n3 = h32 ** 2 * g2 * P2 + N3
    n4 = N4 + h41 ** 2 * (bp1 + bp2) * P1
    den = n4 * (A * g2 * P2 + C * a2 ** 2) + C * (1 - a2 * h42) ** 2 * g2 * P2
    I = {}
    I[1] = th(1, _ratio(a1 ** 2 * h41 ** 2 * b3 * P1, g1 * P2))
    I[2] = th(2, _ratio(a2 ** 2 * h41 ** 2 * b3 * P1, (g2 + a2 ** 2 * h42 ** 2 * g1) * P2))
    I3p = th(3, _ratio(a2 ** 2 * (a1 * h41 ** 2 * b3 * P1 + h42 * g1 * P2) ** 2, A * g2 * P2 + C * a2 ** 2))
    I[3] = I[1] + th(3, _ratio(a2 ** 2 * h41 ** 2 * b3 * (1 - a1 * h42) ** 2 * g1 * P1 * P2, A * g2 * P2)) + I3p
    I[4] = th(4, h31 ** 2 * bp1 * P1 / n3)
    I[5] = I[1] + th(5, (h31 ** 2 * P1 + h32 ** 2 * (g1 + g3) * P2
                         + 2 * h31 * h32 * np.sqrt(b4 * g3 * P1 * P2)) / n3)
    cross = a1 ** 2 * h41 ** 2 * b3 * (h32 ** 2 * g2 * P2 - h31 ** 2 * b3 * P1) - 2 * a1 * h31 * h32 * h41 * b3 * g1 * P2
    I[6] = I[1] + th(6, P1 * _ratio(A * h31 ** 2 * (bp1 + b1 + bp2 + b2 + b3) + cross, A))
    I[7] = I[1] + th(7, P1 * _ratio(A * h31 ** 2 * (bp1 + bp2 + b2 + b3) + cross, A))
    I[8] = I[1] + th(8, (h31 ** 2 * (bp1 + bp2 + b3) * P1 + h32 ** 2 * g1 * P2) / n3)
    I[9] = th(9, h31 ** 2 * (bp1 + b1) * P1 / n3)
    I[10] = I[1] + th(10, (h31 ** 2 * bp1 * P1 + h32 ** 2 * g1 * P2) / n3)
    I[11] = I[1] + th(11, (h31 ** 2 * (bp1 + b1 + bp2 + b3) * P1 + h32 ** 2 * g1 * P2) / n3)
    I[12] = I[1] + th(12, (h31 ** 2 * (bp1 + b1) * P1 + h32 ** 2 * g1 * P2) / n3)
    num13 = g2 * P2 ** 2 * (A * h41 ** 2 * b3 * g2 * (1 - 2 * a2 * h42) * P1 + C * g2 * (2 * a1 * h42 - 1)
                            + h42 ** 2 * g1 * (g1 * g2 * (1 - a2 * h42) ** 2 * P2 ** 2 - a2 ** 2))
    I[13] = I3p + th(13, _ratio(num13, B * den))
    # denominator grouping exactly as parenthesized: A*n4*(A g2 P2 + C a2^2) + C (1 - a2 h42)^2 g2 P2
    num14 = (_ratio(C, g1 * P2) * (a2 ** 2 * h41 ** 2 * b3 * P1 + 2 * a2 * h42 * g2 * (a1 ** 2 + g1 * P2) * P2)
             + A ** 2 * h42 ** 2 * g2 * P2)
    I[14] = I3p + th(14, _ratio(num14, A * n4 * (A * g2 * P2 + C * a2 ** 2) + C * (1 - a2 * h42) ** 2 * g2 * P2))
    I[15] = th(15, _ratio((A * g2 * P2 + C * a2 ** 2) * ((b1 + b2 + b4) * h41 ** 2 * P1 + h42 ** 2 * g3 * P2
                          + 2 * h41 * h42 * np.sqrt(b4 * g3 * P1 * P2)) + F, den))
    I[16] = I[13] + th(16, _ratio(B * h41 ** 2 * b1 * P1,
                                  B * n4 + h41 ** 2 * b3 * g2 * (1 - 2 * a2 * h42) * P1 * P2
                                  + h42 ** 2 * g1 * g2 * (1 - a2 * h42) ** 2 * P2 ** 2))
    I[17] = I[14] + th(17, _ratio(A * h41 ** 2 * b1 * P1, A * (n4 + h41 ** 2 * g2 * P2) + C))
    I[18] = th(18, _ratio(h41 ** 2 * b1 * P1 * (A * g2 * P2 + C * a2 ** 2) + F, den))
    I[19] = th(19, _ratio(F, den))
    n2 = h21 ** 2 * (bp1 + b1) * P1 + N2
    if lookahead:
        I[20] = th(20, _ratio(h21 ** 2 * b3 * P1, n2))
        I[21] = th(21, _ratio(h21 ** 2 * (b3 + b4) * P1, n2))
    else:
        I[20] = th(20, _ratio(h21 ** 2 * bp2 * P1, n2))
        I[21] = th(21, _ratio(h21 ** 2 * (bp2 + b2) * P1, n2))
    T = np.empty(shape + (NTERMS + 1,))
    T[..., 0] = I3p
    worst = np.empty(shape + (NTERMS + 1,))
    worst[..., 0] = np.inf
    for k in range(1, NTERMS + 1):
        T[..., k] = I[k]
        worst[..., k] = args[k]
    return T, worst


# ------------------------------------------------------------ batch entry

def evaluate_batch(scen, fr, strategy, dpc="paper", manual=None, relay_beta=None, relay_h=None,
                   formula="exact"):
    """Vectorized rate terms for many allocations of one scenario.

    Parameters
    ----------
    scen : GaussianScenario
    fr : dict
        Arrays (broadcastable) for every name in ``FRACTION_FIELDS``.
    strategy : Strategy
    dpc : {"paper", "zero", "manual"}
    relay_beta, relay_h : array_like, optional
        Required for the no-delay strategy.
    formula : {"exact", "printed"}

    Returns
    -------
    T : ndarray, shape (n, 22)
    bad : ndarray of bool, shape (n,)
        Points where a printed closed form produced a negative argument.
    """
    strategy = Strategy(strategy)
    g = _gains(scen)
    f = {k: np.asarray(fr[k], float) for k in FRACTION_FIELDS}
    if strategy is Strategy.NODELAY:
        if relay_beta is None or relay_h is None:
            raise ValueError("no-delay evaluation needs relay_beta and relay_h")
        g = relay_substitution(g, np.asarray(relay_beta, float), np.asarray(relay_h, float))
    a1, a2 = _alphas(g, f, dpc, manual)
    look = strategy is Strategy.LOOKAHEAD
    if formula == "exact":
        T = _exact_core(g, f, a1, a2, lookahead=look)
        return T, np.zeros(T.shape[:-1], bool)
    if formula == "printed":
        T, worst = _printed_core(g, f, a1, a2, lookahead=look)
        return T, np.any(worst < -NEG_TOL, axis=-1)
    raise ValueError(f"unknown formula {formula!r}")


# ------------------------------------------------------------ scalar API

def _fr(alloc):
    return {k: np.float64(getattr(alloc, k)) for k in FRACTION_FIELDS}


def _resolve_dpc(dpc):
    """Return ``(mode, manual_pair)`` from the accepted ``dpc`` spellings."""
    if dpc is None:
        return DpcMode.PAPER, None
    if isinstance(dpc, DpcCoefficients):
        if dpc.mode is DpcMode.MANUAL:
            return DpcMode.MANUAL, (dpc.alpha1, dpc.alpha2)
        return dpc.mode, None
    if isinstance(dpc, (tuple, list)):
        return DpcMode.MANUAL, (float(dpc[0]), float(dpc[1]))
    return DpcMode(dpc), None


def dpc_coefficients(scen, alloc, mode=DpcMode.PAPER, manual=None):
    """Binning coefficients for an allocation.

    For the no-delay strategy they are computed on the relay-substituted
    receiver gains.  The denominators are at least ``N4 > 0``.
    """
    mode = DpcMode(mode)
    g = _gains(effective_scenario(scen, alloc))
    a1, a2 = _alphas(g, _fr(alloc), mode, manual)
    return DpcCoefficients(float(a1), float(a2), mode)


def intermediates(scen, alloc, dpc=None):
    """The auxiliary quantities ``A, B, C, D, F`` of the printed forms."""
    if dpc is None:
        dpc = dpc_coefficients(scen, alloc)
    g = _gains(effective_scenario(scen, alloc))
    return Intermediates(*(float(x) for x in _intermediates(g, _fr(alloc), dpc.alpha1, dpc.alpha2)))


def _scalar_terms(scen, alloc, dpc, formula, expected):
    if alloc.strategy is not expected:
        raise InvalidAllocation(f"allocation strategy is {alloc.strategy.value}, expected {expected.value}")
    verdict = validate_allocation(alloc, scen)
    if not verdict:
        raise InvalidAllocation(verdict.reason)
    mode, manual = _resolve_dpc(dpc)
    g = _gains(effective_scenario(scen, alloc))
    f = _fr(alloc)
    a1, a2 = _alphas(g, f, mode, manual)
    look = expected is Strategy.LOOKAHEAD
    if formula == "exact":
        T = _exact_core(g, f, a1, a2, lookahead=look)
    elif formula == "printed":
        T, worst = _printed_core(g, f, a1, a2, lookahead=look)
        neg = np.nonzero(worst < -NEG_TOL)[0]
        if neg.size:
            k = int(neg[0])
            raise NegativeThetaArgument(k, float(worst[k]))
    else:
        raise ValueError(f"unknown formula {formula!r}")
    return RateTerms.from_array(np.asarray(T).reshape(-1), expected)


def terms_classical(scen, alloc, dpc=None, formula="exact"):
    """Rate terms of the causal (zero look-ahead) scheme."""
    return _scalar_terms(scen, alloc, dpc, formula, Strategy.CLASSICAL)


def terms_no_delay(scen, alloc, dpc=None, formula="exact"):
    """Rate terms with instantaneous relaying (one-symbol look-ahead).

    Identical to :func:`terms_classical` evaluated on the relay-substituted
    receiver gains and noises; the transmitter-to-transmitter link terms
    keep the original ``h21`` and ``N2``.
    """
    return _scalar_terms(scen, alloc, dpc, formula, Strategy.NODELAY)


def terms_lookahead(scen, alloc, dpc=None, formula="exact"):
    """Rate terms with unlimited look-ahead (non-causal partial decode-forward)."""
    return _scalar_terms(scen, alloc, dpc, formula, Strategy.LOOKAHEAD)


def terms(scen, alloc, dpc=None, formula="exact"):
    """Dispatch on ``alloc.strategy``."""
    return _scalar_terms(scen, alloc, dpc, formula, alloc.strategy)
