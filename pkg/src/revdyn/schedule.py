"""Time-varying parameter tracks and instantaneous protest-fraction shocks.

Tracks are piecewise-linear in time with constant extrapolation beyond both
ends, so evaluation is continuous everywhere: step-like parameter changes are
authored as short linear ramps (the built-in schedules use one-day ramps).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .model import ModelParams


@dataclass(frozen=True)
class Track:
    """Piecewise-linear time track of one parameter.

    `breakpoints` is an ordered tuple of (time, value) pairs with strictly
    increasing times.  Between breakpoints the value interpolates linearly;
    outside the span it holds the first/last value.
    """

    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.breakpoints:
            raise ValueError("track needs at least one breakpoint")
        object.__setattr__(self, "breakpoints",
                           tuple((float(t), float(v)) for t, v in self.breakpoints))
        times = [t for t, _ in self.breakpoints]
        for a, b in zip(times, times[1:]):
            if not b > a:
                raise ValueError(f"breakpoint times must strictly increase, got {a!r} then {b!r}")

    @classmethod
    def constant(cls, value: float) -> "Track":
        return cls(((0.0, value),))

    @property
    def is_constant(self) -> bool:
        values = {v for _, v in self.breakpoints}
        return len(values) == 1

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.breakpoints)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.breakpoints)

    def value(self, t: float) -> float:
        """Interpolated value at time t (constant beyond both ends)."""
        pts = self.breakpoints
        if t <= pts[0][0]:
            return pts[0][1]
        if t >= pts[-1][0]:
            return pts[-1][1]
        i = bisect.bisect_right(self.times, t)
        t0, v0 = pts[i - 1]
        t1, v1 = pts[i]
        w = (t - t0) / (t1 - t0)
        return v0 + w * (v1 - v0)

    def linear_piece(self, t0: float, t1: float) -> tuple[float, float]:
        """Slope and intercept (m, q) with value(t) = m*t + q on [t0, t1].

        Valid only when no breakpoint lies strictly inside (t0, t1); the
        integrator guarantees that by splitting segments at breakpoints.
        """
        v0 = self.value(t0)
        v1 = self.value(t1)
        if v1 == v0 or t1 == t0:
            return 0.0, v0
        m = (v1 - v0) / (t1 - t0)
        return m, v0 - m * t0


@dataclass(frozen=True)
class Schedule:
    """The four parameter tracks evaluated together.

    Construction checks that the parameters are valid at every breakpoint of
    every track; by linearity that makes them valid at all times.
    """

    alpha: Track
    beta: Track
    c1: Track
    c2: Track

    def __post_init__(self):
        for track in (self.alpha, self.beta, self.c1, self.c2):
            for t, _ in track.breakpoints:
                self.params_at(t)

    @classmethod
    def constant(cls, params: ModelParams) -> "Schedule":
        return cls(Track.constant(params.alpha), Track.constant(params.beta),
                   Track.constant(params.c1), Track.constant(params.c2))

    @property
    def is_constant(self) -> bool:
        return all(tr.is_constant
                   for tr in (self.alpha, self.beta, self.c1, self.c2))

    def params_at(self, t: float) -> ModelParams:
        return ModelParams(self.alpha.value(t), self.beta.value(t),
                           self.c1.value(t), self.c2.value(t))

    def breakpoint_times(self) -> tuple[float, ...]:
        times = set()
        for track in (self.alpha, self.beta, self.c1, self.c2):
            times.update(track.times)
        return tuple(sorted(times))


@dataclass(frozen=True)
class Shock:
    """Instantaneous exogenous jump of the protest fraction at `time`."""

    time: float
    delta_r: float

    def __post_init__(self):
        if self.time < 0.0:
            raise ValueError(f"shock time must be non-negative, got {self.time!r}")
        if not self.delta_r > 0.0:
            raise ValueError(f"shock delta_r must be positive, got {self.delta_r!r}")


def apply_shock(r: float, shock: Shock) -> float:
    """Post-shock fraction min(r + delta_r, 1)."""
    if not (0.0 <= r <= 1.0):
        raise ValueError(f"r must lie in [0,1], got {r!r}")
    return min(r + shock.delta_r, 1.0)


def normalize_shocks(shocks) -> tuple[Shock, ...]:
    """Sort by time and merge simultaneous shocks by summing their jumps."""
    merged: list[Shock] = []
    for s in sorted(shocks, key=lambda s: s.time):
        if merged and merged[-1].time == s.time:
            merged[-1] = Shock(s.time, merged[-1].delta_r + s.delta_r)
        else:
            merged.append(s)
    return tuple(merged)


def egypt_schedule() -> Schedule:
    """Parameter tracks for the 2011 Egypt scenario (t=0 is January 14).

    Visibility rises over the Jan 25-28 protest build-up, dips for one day
    when the Internet is cut, holds low through the shutdown and recovers
    over Feb 1-2; enthusiasm rises with the build-up and stays; policing
    capacity and efficiency drop over Feb 1-2 when the army sides with the
    protesters.  Rates use the rounded display values (2.30, 69.1) rather
    than the exact one-month/one-day calibrations, so the track endpoints
    read exactly as documented.
    """
    day = 1.0 / 30.0
    alpha = Track((
        (0.0, 0.96),
        (11 * day, 0.96),
        (14 * day, 0.98),
        (15 * day, 0.96),
        (18 * day, 0.96),
        (19 * day, 0.98),
    ))
    c1 = Track((
        (0.0, 2.30),
        (11 * day, 2.30),
        (14 * day, 3.26),
    ))
    beta = Track((
        (0.0, 0.06),
        (18 * day, 0.06),
        (19 * day, 0.04),
    ))
    c2 = Track((
        (0.0, 69.1),
        (18 * day, 69.1),
        (19 * day, 50.0),
    ))
    return Schedule(alpha, beta, c1, c2)
