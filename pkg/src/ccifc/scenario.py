"""Physical channel instances, power allocations and their validity rules.

Every evaluator in the package reads its inputs from the types defined here.
Allocations store power *fractions*; absolute powers are formed only at
evaluation time.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

SUM_TOL = 1e-12

BETA_FIELDS = ("bp1", "b1", "bp2", "b2", "b3", "b4")
GAMMA_FIELDS = ("g1", "g2", "g3")
FRACTION_FIELDS = BETA_FIELDS + GAMMA_FIELDS
SCENARIO_KEYS = ("P1", "P2", "h21", "h31", "h32", "h41", "h42", "N2", "N3", "N4")


class Strategy(str, enum.Enum):
    CLASSICAL = "classical"
    NODELAY = "nodelay"
    LOOKAHEAD = "lookahead"


class DpcMode(str, enum.Enum):
    PAPER = "paper"
    MANUAL = "manual"
    ZERO = "zero"


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class GaussianScenario:
    """Gains, powers and noise variances of the two-transmitter channel.

    ``Y2 = h21 X1 + Z2``, ``Y3 = h31 X1 + h32 X2 + Z3`` and
    ``Y4 = h41 X1 + h42 X2 + Z4``.  ``N2 = 0`` models a noiseless link
    between the transmitters.  Zero powers are accepted so that degenerate
    instances can be represented (they yield the trivial region).
    """

    P1: float
    P2: float
    h21: float
    h31: float
    h32: float
    h41: float
    h42: float
    N2: float
    N3: float
    N4: float

    def __post_init__(self):
        for k in SCENARIO_KEYS:
            v = getattr(self, k)
            if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
                raise ScenarioError(f"{k} must be a real number, got {v!r}")
            if not math.isfinite(float(v)):
                raise ScenarioError(f"{k} must be finite, got {v!r}")
            object.__setattr__(self, k, float(v))
        if self.P1 < 0 or self.P2 < 0:
            raise ScenarioError("powers must be nonnegative")
        if self.N2 < 0:
            raise ScenarioError("N2 must be >= 0")
        if self.N3 <= 0 or self.N4 <= 0:
            raise ScenarioError("N3 and N4 must be > 0")

    def to_dict(self):
        return asdict(self)

    def key(self):
        """Short stable digest used to tag exported files."""
        import hashlib
        blob = json.dumps([repr(getattr(self, k)) for k in SCENARIO_KEYS]).encode()
        return hashlib.sha1(blob).hexdigest()[:12]

    def with_(self, **kw):
        return replace(self, **kw)


def scenario_from_dict(d):
    missing = [k for k in SCENARIO_KEYS if k not in d]
    if missing:
        raise ScenarioError(f"scenario is missing keys: {', '.join(missing)}")
    extra = sorted(set(d) - set(SCENARIO_KEYS))
    if extra:
        raise ScenarioError(f"unknown scenario keys: {', '.join(extra)}")
    return GaussianScenario(**{k: d[k] for k in SCENARIO_KEYS})


def load_scenario(path):
    try:
        with open(path) as fh:
            d = json.load(fh)
    except OSError as e:
        raise ScenarioError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{path}: not valid JSON ({e})") from None
    if not isinstance(d, dict):
        raise ScenarioError(f"{path}: expected a JSON object")
    return scenario_from_dict(d)


@dataclass(frozen=True)
class PowerAllocation:
    """One point of the union over power splits.

    ``bp1, b1, bp2, b2, b3, b4`` split ``P1`` and ``g1, g2, g3`` split ``P2``.
    ``relay_beta`` and ``relay_h`` are the amplify-and-forward weight and
    the normalizer used only by the no-delay strategy.
    """

    bp1: float = 0.0
    b1: float = 0.0
    bp2: float = 0.0
    b2: float = 0.0
    b3: float = 0.0
    b4: float = 0.0
    g1: float = 0.0
    g2: float = 0.0
    g3: float = 0.0
    relay_beta: float = 0.0
    relay_h: float = 1.0
    strategy: Strategy = Strategy.CLASSICAL

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))

    @property
    def beta_sum(self):
        return sum(getattr(self, k) for k in BETA_FIELDS)

    @property
    def gamma_sum(self):
        return sum(getattr(self, k) for k in GAMMA_FIELDS)

    def fractions(self):
        return {k: getattr(self, k) for k in FRACTION_FIELDS}

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class DpcCoefficients:
    alpha1: float
    alpha2: float
    mode: DpcMode = DpcMode.PAPER


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: Optional[str] = None

    def __bool__(self):
        return self.valid


def relay_power_load(scen, alloc):
    """Power the relay-and-forward transmitter needs before normalization.

    The no-delay strategy is feasible iff ``relay_h**2 * load <= P2``.
    """
    P1, P2 = scen.P1, scen.P2
    b = alloc.relay_beta
    direct = alloc.bp1 + alloc.b1 + alloc.bp2 + alloc.b2 + alloc.b3
    coherent = scen.h21 * b * math.sqrt(alloc.b4 * P1) + (1 - b) * math.sqrt(alloc.g3 * P2)
    return (scen.h21 ** 2 * b ** 2 * direct * P1 + coherent ** 2 + b ** 2 * scen.N2
            + (1 - b) ** 2 * (alloc.g1 + alloc.g2) * P2)


def max_relay_gain(scen, alloc):
    """Largest normalizer allowed by the relay power budget (inf if unconstrained)."""
    load = relay_power_load(scen, alloc)
    if load <= 0:
        return math.inf
    return math.sqrt(scen.P2 / load)


def validate_allocation(alloc, scen):
    """Check an allocation against the union constraints of its strategy.

    Returns
    -------
    Verdict
        ``Verdict(True)`` or ``Verdict(False, reason)`` naming the first
        violated rule.  Never raises for finite inputs.
    """
    try:
        for k in FRACTION_FIELDS + ("relay_beta",):
            v = getattr(alloc, k)
            if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v)):
                return Verdict(False, f"{k} is not a finite number")
            if v < 0 or v > 1:
                return Verdict(False, f"{k}={v} outside [0, 1]")
        if alloc.beta_sum > 1 + SUM_TOL:
            return Verdict(False, f"P1 fractions sum to {alloc.beta_sum:.6g} > 1")
        if alloc.gamma_sum > 1 + SUM_TOL:
            return Verdict(False, f"P2 fractions sum to {alloc.gamma_sum:.6g} > 1")
        if alloc.strategy is Strategy.LOOKAHEAD and (alloc.bp2 != 0 or alloc.b2 != 0):
            return Verdict(False, "look-ahead requires bp2 = b2 = 0")
        if alloc.strategy is Strategy.NODELAY:
            h = alloc.relay_h
            if not (isinstance(h, (int, float, np.floating, np.integer)) and math.isfinite(h)) or h <= 0:
                return Verdict(False, f"relay_h={h!r} must be a positive finite number")
            load = relay_power_load(scen, alloc)
            if h * h * load > scen.P2 * (1 + SUM_TOL) + SUM_TOL:
                return Verdict(False, f"relay power h^2 P'={h * h * load:.6g} exceeds P2={scen.P2:.6g}")
    except (TypeError, ValueError, OverflowError) as e:
        return Verdict(False, f"malformed allocation: {e}")
    return Verdict(True)


# ---------------------------------------------------------------- presets

@dataclass(frozen=True)
class Preset:
    name: str
    scenario: GaussianScenario
    strategies: tuple
    h21_values: tuple = ()
    n2_values: tuple = ()
    masks: tuple = ()           # ((label, {field: value}), ...) ablations
    outer_bound: bool = False
    notes: str = ""

    def scenarios(self):
        """Expand the h21 / N2 sweeps into concrete scenarios."""
        out = []
        hs = self.h21_values or (self.scenario.h21,)
        ns = self.n2_values or (self.scenario.N2,)
        for h in hs:
            for n in ns:
                out.append(self.scenario.with_(h21=float(h), N2=float(n)))
        return out


_S055 = math.sqrt(0.55)
_ALL = (Strategy.CLASSICAL, Strategy.NODELAY, Strategy.LOOKAHEAD)


def _base(P1=6.0, P2=6.0, h32=_S055, h41=_S055, h21=4.0, N2=1.0):
    return GaussianScenario(P1=P1, P2=P2, h21=h21, h31=1.0, h32=h32, h41=h41, h42=1.0,
                            N2=N2, N3=1.0, N4=1.0)


PRESETS = {
    "fig6": Preset("fig6", _base(), _ALL, h21_values=(1.0, 4.0)),
    "fig7": Preset("fig7", _base(P2=1.5), _ALL, h21_values=(1.0, 4.0), outer_bound=True),
    "fig8": Preset("fig8", _base(), _ALL,
                   h21_values=(1.0, 4.0),
                   masks=(("full", {}),
                          ("no_relay_power", {"g3": 0.0}),
                          ("no_instant_relay", {"relay_beta": 0.0}),
                          ("no_dpc", {"dpc": "zero"}))),
    "fig9strong": Preset("fig9strong", _base(h32=math.sqrt(1.5), h41=math.sqrt(1.5)), _ALL,
                         h21_values=(1.0, 4.0)),
    "fig9mixed": Preset("fig9mixed", _base(h32=_S055, h41=math.sqrt(1.5)), _ALL,
                        h21_values=(1.0, 4.0)),
    "fig10": Preset("fig10", _base(h32=math.sqrt(2.0), h41=math.sqrt(0.3), h21=1.0),
                    (Strategy.LOOKAHEAD,), n2_values=(100.0, 10.0, 1.0, 0.1, 0.0)),
}


def figure_preset(name):
    """Look up a compiled-in figure parameter set.

    Raises
    ------
    KeyError
        If ``name`` is not a known preset.
    """
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
