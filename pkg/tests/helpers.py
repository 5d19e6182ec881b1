"""Shared draw helpers for property and acceptance tests.

The stratified sampler keeps rates fast enough that two months of model time
reach every attractor to well inside the test tolerances (growth needs
c1 * t_end >> log(1/tol)), and slow enough that the default-ish step sizes
stay comfortably inside the RK4 stability region.
"""

import numpy as np

from revdyn import ModelParams, classify_region

REGION_LABELS = ("II", "III0", "IIIe", "III1")


def draw_params(rng: np.random.Generator, label: str) -> ModelParams:
    """Draw parameters inside the given region, away from its boundaries."""
    c1 = rng.uniform(6.0, 12.0)
    c2 = rng.uniform(25.0, 155.0)
    if label == "II":
        alpha = rng.uniform(0.1, 0.7)
        beta = rng.uniform(0.1, 0.97 - alpha)
    else:
        cs = c1 / (c1 + c2)
        if label == "III0":
            threshold = rng.uniform(cs + 0.01, min(cs + 0.25, 0.6))
            beta = rng.uniform(threshold + 0.01, min(threshold + 0.3, 0.95))
        elif label == "IIIe":
            threshold = rng.uniform(max(0.005, cs - 0.2), cs - 0.005)
            beta = rng.uniform(cs + 0.005, min(cs + 0.3, 0.95))
        else:  # III1
            threshold = rng.uniform(0.005, cs - 0.012)
            beta = rng.uniform(threshold + 0.005, cs - 0.005)
        alpha = 1.0 - threshold
    params = ModelParams(alpha, beta, c1, c2)
    assert classify_region(params).label.value == label
    return params


def interior_points(rng: np.random.Generator, lo: float, hi: float,
                    count: int, margin: float = 1e-3) -> list[float]:
    """Points sampled at least `margin` inside (lo, hi)."""
    a, b = lo + margin, hi - margin
    assert b > a, (lo, hi)
    return [float(x) for x in rng.uniform(a, b, size=count)]


def draw_oracle_case(rng: np.random.Generator):
    """A constant-parameter start whose trajectory never leaves its switch
    cell, so the closed-form advance is exact over the whole horizon.

    Returns (params, r0, a, b, horizon) with a = c1*v, b = c2*p frozen.
    """
    c1 = rng.uniform(1.0, 8.0)
    c2 = rng.uniform(10.0, 200.0)
    kind = rng.choice(["quiet", "surge", "tug", "standoff"])
    if kind == "tug":
        # both switches on, relaxing to c* inside (1-alpha, beta); place c*
        # by choosing c2 so the geometry always has room
        cs = rng.uniform(0.02, 0.3)
        c2 = c1 * (1.0 - cs) / cs
        threshold = rng.uniform(max(0.004, cs - 0.2), cs - 0.003)
        alpha = 1.0 - threshold
        beta = rng.uniform(cs + 0.003, min(0.95, cs + 0.3))
        r0 = rng.uniform(threshold + 1e-3, beta - 1e-3)
        v, p = 1, 1
    elif kind == "standoff":
        alpha = rng.uniform(0.1, 0.6)
        beta = rng.uniform(0.05, 0.9 - alpha)
        r0 = rng.uniform(beta + 1e-3, 1.0 - alpha - 1e-3)
        v, p = 0, 0
    elif kind == "quiet":
        alpha = rng.uniform(0.05, 0.9)
        beta = rng.uniform(0.05, 0.95)
        r0 = rng.uniform(1e-3, min(1.0 - alpha, beta) - 1e-3)
        v, p = 0, 1
    else:  # surge: visible and unpoliced, growing toward 1
        alpha = rng.uniform(0.05, 0.95)
        beta = rng.uniform(0.05, 0.95)
        r0 = rng.uniform(max(1.0 - alpha, beta) + 1e-3, 1.0 - 1e-3)
        v, p = 1, 0
    params = ModelParams(alpha, beta, c1, c2)
    a = c1 if v else 0.0
    b = c2 if p else 0.0
    return params, float(r0), a, b, float(rng.uniform(0.05, 1.0))
