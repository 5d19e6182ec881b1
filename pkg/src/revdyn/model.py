"""Core protest-fraction model: switching terms, phase-line analysis, calibration.

The state is a single fraction r in [0, 1] (share of the population
protesting).  Its rate of change is

    dr/dt = c1 * v(r; alpha) * (1 - r) - c2 * p(r; beta) * r

where v is the visibility indicator (1 once r exceeds the visibility
threshold ``1 - alpha``) and p is the policing indicator (1 while r is below
the policing capacity ``beta``).  Both indicators use strict inequalities and
are 0 exactly at their thresholds, so r = 0 and r = 1 are always fixed
points.

Everything in this module is pure and immutable: parameter sets, region
labels, equilibrium sets.  The classifier and the equilibrium builder are the
analytic (non-numeric) half of the toolkit; the numeric half lives in
``revdyn.integrate``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

# Natural-log calibration constants: spread to 90% in one month, clear 90%
# in one day (1/30 month).  Stored at full double precision; 2.30 / 69.1 are
# display roundings only.
LN10 = math.log(10.0)
DEFAULT_C1 = LN10            # 2.302585092994046
DEFAULT_C2 = 30.0 * LN10     # 69.07755278982138

#: Default tolerance for boundary detection in region classification.
CLASSIFY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """The four model parameters.

    alpha: visibility, in (0, 1).  The growth switch turns on once r > 1 - alpha.
    beta: policing capacity, in (0, 1).  The decay switch is on while r < beta.
    c1: enthusiasm rate (1/month), > 0.
    c2: policing efficiency rate (1/month), > 0.

    Endpoint values alpha, beta in {0, 1} are rejected: the analysis assumes
    the open interval.
    """

    alpha: float
    beta: float
    c1: float = DEFAULT_C1
    c2: float = DEFAULT_C2

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0,1), got {self.alpha!r}")
        if not (0.0 < self.beta < 1.0):
            raise ValueError(f"beta must lie in (0,1), got {self.beta!r}")
        if not (self.c1 > 0.0 and math.isfinite(self.c1)):
            raise ValueError(f"c1 must be a positive rate, got {self.c1!r}")
        if not (self.c2 > 0.0 and math.isfinite(self.c2)):
            raise ValueError(f"c2 must be a positive rate, got {self.c2!r}")

    @property
    def visibility_threshold(self) -> float:
        """Minimum fraction the general population can perceive: 1 - alpha."""
        return 1.0 - self.alpha

    @property
    def c_star(self) -> float:
        """Interior balance point c1 / (c1 + c2)."""
        return c_star(self.c1, self.c2)


def validate_fraction(r: float, name: str = "r") -> float:
    if not (0.0 <= r <= 1.0):
        raise ValueError(f"{name} must lie in [0,1], got {r!r}")
    return r


def visibility(r: float, alpha: float) -> int:
    """Growth switch: 1 iff r > 1 - alpha (strictly), else 0."""
    return 1 if r > 1.0 - alpha else 0


def policing(r: float, beta: float) -> int:
    """Decay switch: 1 iff r < beta (strictly), else 0."""
    return 1 if r < beta else 0


def rhs(r: float, params: ModelParams) -> float:
    """Rate of change of the protest fraction at r (1/month)."""
    grow = params.c1 * (1.0 - r) if r > 1.0 - params.alpha else 0.0
    decay = params.c2 * r if r < params.beta else 0.0
    return grow - decay


def c_star(c1: float, c2: float) -> float:
    """Balance point c1/(c1+c2) of the both-switches-on dynamics.

    Strictly inside (0, 1) for positive rates; the stable civil-unrest
    equilibrium whenever it falls between the two thresholds.
    """
    if c1 <= 0.0 or c2 <= 0.0:
        raise ValueError("c_star requires positive rates")
    return c1 / (c1 + c2)


def calibrate_c1(spread_fraction: float, horizon: float) -> float:
    """Enthusiasm rate such that, unpoliced and visible, the protest spreads
    to `spread_fraction` of the population within `horizon` months.

    Solves dr/dt = c1 (1 - r), r(0) = 0, r(horizon) = spread_fraction.
    """
    if not (0.0 < spread_fraction < 1.0):
        raise ValueError("spread_fraction must lie in (0,1)")
    if horizon <= 0.0:
        raise ValueError("horizon must be positive")
    return -math.log(1.0 - spread_fraction) / horizon


def calibrate_c2(clear_fraction: float, horizon: float) -> float:
    """Policing rate such that, invisible and policed, `clear_fraction` of
    protesters are cleared within `horizon` months.

    Solves dr/dt = -c2 r, r(horizon) = (1 - clear_fraction) r(0).
    """
    if not (0.0 < clear_fraction < 1.0):
        raise ValueError("clear_fraction must lie in (0,1)")
    if horizon <= 0.0:
        raise ValueError("horizon must be positive")
    return -math.log(1.0 - clear_fraction) / horizon


class RegionLabel(str, Enum):
    """Parameter-space regions of the (alpha, beta, c1, c2) model.

    KNIFE_EDGE is the measure-zero line alpha + beta = 1 and is reported only
    when the sum lands within the classification tolerance.
    """

    KNIFE_EDGE = "I"
    FAILED_STATE = "II"
    STABLE_POLICE_STATE = "III0"
    METASTABLE_POLICE_STATE = "IIIe"
    UNSTABLE_POLICE_STATE = "III1"

    def __str__(self) -> str:
        return self.value


#: Human-readable gloss per region label (used by the CLI).
REGION_GLOSS = {
    RegionLabel.KNIFE_EDGE: "knife-edge: thresholds coincide",
    RegionLabel.FAILED_STATE: "failed state",
    RegionLabel.STABLE_POLICE_STATE: "stable police state",
    RegionLabel.METASTABLE_POLICE_STATE: "meta-stable police state",
    RegionLabel.UNSTABLE_POLICE_STATE: "unstable police state",
}


class BoundaryTag(str, Enum):
    ALPHA_PLUS_BETA_EQ_1 = "alpha_plus_beta_eq_1"
    CSTAR_EQ_VISIBILITY_THRESHOLD = "cstar_eq_visibility_threshold"
    CSTAR_EQ_BETA = "cstar_eq_beta"


@dataclass(frozen=True)
class Region:
    label: RegionLabel
    on_boundary: frozenset[BoundaryTag] = field(default_factory=frozenset)

    def __str__(self) -> str:
        return self.label.value


def classify_region(params: ModelParams, tol: float = CLASSIFY_TOL) -> Region:
    """Classify parameters into the phase-line regions.

    |alpha+beta-1| <= tol is the knife-edge line; below it the two switch
    cells overlap nowhere (failed state); above it they overlap on
    (1-alpha, beta) and the sub-label is decided by where c* falls relative
    to that interval.  Ties at c* = 1-alpha resolve to the stable side and
    ties at c* = beta to the unstable side (the interior interval still flows
    to the respective endpoint attractor there); both ties carry boundary
    tags.
    """
    if tol < 0.0:
        raise ValueError("tol must be non-negative")
    gap = params.alpha + params.beta - 1.0
    if abs(gap) <= tol:
        return Region(RegionLabel.KNIFE_EDGE,
                      frozenset({BoundaryTag.ALPHA_PLUS_BETA_EQ_1}))
    if gap < 0.0:
        return Region(RegionLabel.FAILED_STATE)
    cs = params.c_star
    threshold = params.visibility_threshold
    tags = set()
    if abs(cs - threshold) <= tol:
        tags.add(BoundaryTag.CSTAR_EQ_VISIBILITY_THRESHOLD)
    if abs(cs - params.beta) <= tol:
        tags.add(BoundaryTag.CSTAR_EQ_BETA)
    if BoundaryTag.CSTAR_EQ_VISIBILITY_THRESHOLD in tags:
        label = RegionLabel.STABLE_POLICE_STATE
    elif BoundaryTag.CSTAR_EQ_BETA in tags:
        label = RegionLabel.UNSTABLE_POLICE_STATE
    elif cs < threshold:
        label = RegionLabel.STABLE_POLICE_STATE
    elif cs > params.beta:
        label = RegionLabel.UNSTABLE_POLICE_STATE
    else:
        label = RegionLabel.METASTABLE_POLICE_STATE
    return Region(label, frozenset(tags))


class Stability(str, Enum):
    ASYMPTOTICALLY_STABLE = "asymptotically_stable"
    UNSTABLE = "unstable"
    CONTINUUM_STABLE = "continuum_stable"


@dataclass(frozen=True)
class Interval:
    """Interval with explicit open/closed endpoints."""

    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty interval: hi {self.hi!r} < lo {self.lo!r}")

    def contains(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


@dataclass(frozen=True)
class Equilibrium:
    """A fixed point of the dynamics, or the failed-state continuum band.

    `value` is the fixed-point location; for the single continuum entry of a
    failed-state equilibrium set it is the whole band as an Interval (every
    point of the band is its own Lyapunov-stable fixed point).  `basin` is
    the attracting interval of an asymptotically stable point, the band
    itself for the continuum entry, and None for unstable points and for
    individual continuum members.
    """

    value: float | Interval
    stability: Stability
    basin: Interval | None = None

    def __str__(self) -> str:
        basin = f" basin {self.basin}" if self.basin is not None else ""
        if isinstance(self.value, Interval):
            return f"continuum {self.value} {self.stability.value}{basin}"
        return f"r={self.value:g} {self.stability.value}{basin}"


@dataclass(frozen=True)
class EquilibriumSet:
    params: ModelParams
    region: Region
    equilibria: tuple[Equilibrium, ...]

    @property
    def stable(self) -> tuple[Equilibrium, ...]:
        return tuple(e for e in self.equilibria
                     if e.stability is Stability.ASYMPTOTICALLY_STABLE)

    @property
    def stable_values(self) -> tuple[float, ...]:
        return tuple(e.value for e in self.stable)

    def at_value(self, value: float, tol: float = 0.0) -> Equilibrium | None:
        """The point equilibrium at `value` (within tol), if any."""
        for e in self.equilibria:
            if isinstance(e.value, float) and abs(e.value - value) <= tol:
                return e
        return None


def equilibria(params: ModelParams, tol: float = CLASSIFY_TOL) -> EquilibriumSet:
    """Equilibria, stability labels and basins for constant parameters.

    r = 0 and r = 1 are asymptotically stable in every region.  Basin
    endpoints follow the half-open convention fixed by the strict switch
    inequalities: above the knife-edge line, 1-alpha itself still decays to 0
    (closed endpoint) and beta itself already grows to 1 (closed endpoint).
    """
    region = classify_region(params, tol)
    threshold = params.visibility_threshold
    beta = params.beta
    stable = Stability.ASYMPTOTICALLY_STABLE
    label = region.label

    if label is RegionLabel.KNIFE_EDGE:
        eqs = (
            Equilibrium(0.0, stable, Interval(0.0, beta)),
            Equilibrium(beta, Stability.UNSTABLE),
            Equilibrium(1.0, stable, Interval(threshold, 1.0)),
        )
    elif label is RegionLabel.FAILED_STATE:
        band = Interval(beta, threshold)
        eqs = (
            Equilibrium(0.0, stable, Interval(0.0, beta)),
            Equilibrium(beta, Stability.UNSTABLE),
            Equilibrium(band, Stability.CONTINUUM_STABLE, band),
            Equilibrium(threshold, Stability.UNSTABLE),
            Equilibrium(1.0, stable, Interval(threshold, 1.0)),
        )
    elif label is RegionLabel.STABLE_POLICE_STATE:
        # (threshold, beta) flows down: basin of 0 reaches all the way to beta.
        eqs = (
            Equilibrium(0.0, stable, Interval(0.0, beta)),
            Equilibrium(1.0, stable, Interval(beta, 1.0, lo_closed=True)),
        )
    elif label is RegionLabel.METASTABLE_POLICE_STATE:
        cs = params.c_star
        eqs = (
            Equilibrium(0.0, stable, Interval(0.0, threshold, hi_closed=True)),
            Equilibrium(cs, stable, Interval(threshold, beta)),
            Equilibrium(1.0, stable, Interval(beta, 1.0, lo_closed=True)),
        )
    else:  # UNSTABLE_POLICE_STATE: (threshold, beta) flows up into [beta, 1).
        eqs = (
            Equilibrium(0.0, stable, Interval(0.0, threshold, hi_closed=True)),
            Equilibrium(1.0, stable, Interval(threshold, 1.0)),
        )
    return EquilibriumSet(params, region, eqs)


def predict_limit(r0: float, params: ModelParams,
                  tol: float = CLASSIFY_TOL) -> Equilibrium:
    """Long-run limit of a trajectory started at r0 under constant parameters.

    Returns the equilibrium whose basin contains r0.  An r0 sitting exactly
    on a fixed point (stable or unstable) returns that point; an r0 inside
    the failed-state band returns r0 itself as a continuum member.
    """
    validate_fraction(r0, "r0")
    eqset = equilibria(params, tol)
    for e in eqset.equilibria:
        if isinstance(e.value, float) and r0 == e.value:
            return e
    for e in eqset.equilibria:
        if e.basin is not None and e.basin.contains(r0):
            if e.stability is Stability.CONTINUUM_STABLE:
                return Equilibrium(r0, Stability.CONTINUUM_STABLE)
            return e
    raise AssertionError(f"no basin contains r0={r0!r}")  # pragma: no cover
