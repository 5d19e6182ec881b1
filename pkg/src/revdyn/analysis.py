"""Parameter-space cartography, escape-shock thresholds, rising-c* studies."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .model import (CLASSIFY_TOL, Equilibrium, EquilibriumSet, ModelParams,
                    Region, RegionLabel, Stability, c_star, classify_region,
                    equilibria)


def axis_cells(start: float, end: float, count: int) -> tuple[float, ...]:
    """Centers of `count` equal cells spanning (start, end)."""
    if count < 2:
        raise ValueError("resolution must be at least 2")
    if not end > start:
        raise ValueError("range end must exceed start")
    width = (end - start) / count
    return tuple(start + (k + 0.5) * width for k in range(count))


@dataclass(frozen=True)
class RegionGrid:
    """Region labels over a grid of (alpha, beta) cells at fixed rates.

    cells[i][j] is the label at (alpha_axis[i], beta_axis[j]).
    """

    alpha_axis: tuple[float, ...]
    beta_axis: tuple[float, ...]
    cells: tuple[tuple[RegionLabel, ...], ...]
    c1: float
    c2: float
    tol: float

    def label_at(self, i: int, j: int) -> RegionLabel:
        return self.cells[i][j]


def sweep_regions(alpha_range: tuple[float, float],
                  beta_range: tuple[float, float],
                  resolution: int | tuple[int, int],
                  c1: float, c2: float,
                  tol: float = 0.0,
                  workers: int | None = None) -> RegionGrid:
    """Classify every cell of an (alpha, beta) grid at fixed rates.

    Ranges are open intervals within (0, 1); the grid points are cell
    centers, so they stay strictly inside the ranges.  The default tol=0
    labels the knife-edge line only where alpha+beta lands on 1.0 exactly;
    symmetric ranges do produce such hits, and they sit precisely on the
    II/III boundary.

    Cells are independent; with `workers` the rows are classified
    concurrently and assembled by index, so the result does not depend on
    completion order.
    """
    if isinstance(resolution, int):
        n_alpha = n_beta = resolution
    else:
        n_alpha, n_beta = resolution
    lo_a, hi_a = alpha_range
    lo_b, hi_b = beta_range
    if not (0.0 < lo_a < hi_a < 1.0 and 0.0 < lo_b < hi_b < 1.0):
        raise ValueError("alpha and beta ranges must lie within (0,1)")
    alpha_axis = axis_cells(lo_a, hi_a, n_alpha)
    beta_axis = axis_cells(lo_b, hi_b, n_beta)
    cs = c_star(c1, c2)

    def classify_row(alpha: float) -> tuple[RegionLabel, ...]:
        threshold = 1.0 - alpha
        row = []
        for beta in beta_axis:
            gap = alpha + beta - 1.0
            if abs(gap) <= tol:
                row.append(RegionLabel.KNIFE_EDGE)
            elif gap < 0.0:
                row.append(RegionLabel.FAILED_STATE)
            elif abs(cs - threshold) <= tol or cs < threshold:
                row.append(RegionLabel.STABLE_POLICE_STATE)
            elif abs(cs - beta) <= tol or cs > beta:
                row.append(RegionLabel.UNSTABLE_POLICE_STATE)
            else:
                row.append(RegionLabel.METASTABLE_POLICE_STATE)
        return tuple(row)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = tuple(pool.map(classify_row, alpha_axis))
    else:
        cells = tuple(classify_row(a) for a in alpha_axis)
    return RegionGrid(alpha_axis, beta_axis, cells, c1, c2, tol)


class Attainment(str, Enum):
    """Whether landing exactly on the minimal shock already escapes."""

    OPEN = "open"      # strictly greater required
    CLOSED = "closed"  # equality suffices


@dataclass(frozen=True)
class EscapeReport:
    from_equilibrium: float
    minimal_shock: float
    attainment: Attainment
    destination: Equilibrium


def escape_shock(params: ModelParams, from_value: float,
                 tol: float = CLASSIFY_TOL) -> EscapeReport:
    """Smallest jump that permanently leaves the basin of `from_value`.

    `from_value` must be a stable equilibrium reachable from below: 0 in any
    region, or the interior point c* in the meta-stable police state.  The
    half-open basin endpoints decide attainment: landing exactly on beta
    already grows (closed), while landing exactly on 1-alpha still decays
    back (open, strictly greater required).
    """
    eqset = equilibria(params, tol)
    label = eqset.region.label
    threshold = params.visibility_threshold
    beta = params.beta
    cs = params.c_star

    def stable_at(value: float) -> Equilibrium:
        eq = eqset.at_value(value)
        assert eq is not None
        return eq

    if from_value == 0.0:
        if label in (RegionLabel.KNIFE_EDGE, RegionLabel.STABLE_POLICE_STATE):
            return EscapeReport(0.0, beta, Attainment.CLOSED, stable_at(1.0))
        if label is RegionLabel.FAILED_STATE:
            band = next(e for e in eqset.equilibria
                        if e.stability is Stability.CONTINUUM_STABLE)
            return EscapeReport(0.0, beta, Attainment.CLOSED, band)
        if label is RegionLabel.METASTABLE_POLICE_STATE:
            return EscapeReport(0.0, threshold, Attainment.OPEN, stable_at(cs))
        return EscapeReport(0.0, threshold, Attainment.OPEN, stable_at(1.0))

    if (label is RegionLabel.METASTABLE_POLICE_STATE
            and math.isclose(from_value, cs, rel_tol=0.0, abs_tol=1e-9)):
        return EscapeReport(cs, beta - cs, Attainment.CLOSED, stable_at(1.0))

    raise ValueError(
        f"from={from_value!r} is not an escapable stable equilibrium of "
        f"these parameters (expected 0, or c*={cs!r} in region IIIe)")


@dataclass(frozen=True)
class RisingRateStep:
    """One row of a rising-enthusiasm study."""

    c1: float
    c_star: float
    region: Region
    escape_from_cstar: EscapeReport | None


def rising_cstar_study(params_base: ModelParams,
                       c1_values) -> list[RisingRateStep]:
    """Effect of growing enthusiasm at fixed alpha, beta, c2.

    As c1 (and with it c*) rises the regime passes from the stable police
    state through the meta-stable one, where the escape shock from the
    civil-unrest equilibrium shrinks as beta - c*, and finally to the
    unstable police state once c* passes beta.
    """
    values = list(c1_values)
    if any(c <= 0.0 for c in values):
        raise ValueError("c1 values must be positive")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("c1 values must be ascending")
    steps = []
    for c1 in values:
        params = ModelParams(params_base.alpha, params_base.beta,
                             c1, params_base.c2)
        region = classify_region(params)
        escape = None
        if region.label is RegionLabel.METASTABLE_POLICE_STATE:
            escape = escape_shock(params, params.c_star)
        steps.append(RisingRateStep(c1, params.c_star, region, escape))
    return steps


#: Illustrative parameter placements for the case-study regimes.  The region
#: memberships are the substantive claim; the numbers are chosen only to
#: satisfy them and carry no empirical weight.
PRESETS: dict[str, tuple[ModelParams, str]] = {
    "iran": (ModelParams(alpha=0.85, beta=0.35, c1=1.5),
             "stable police state: large policing capacity and efficiency, "
             "modest visibility (III0)"),
    "china": (ModelParams(alpha=0.97, beta=0.10, c1=4.5),
              "meta-stable police state with rising enthusiasm: persistent "
              "civil unrest at c* (IIIe)"),
    "somalia": (ModelParams(alpha=0.30, beta=0.20, c1=1.5),
                "failed state: weak media and weak policing leave a "
                "continuum of standoffs (II)"),
}


def preset_params(name: str) -> ModelParams:
    try:
        return PRESETS[name][0]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; "
                         f"available: {', '.join(sorted(PRESETS))}") from None
