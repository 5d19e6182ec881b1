"""Trajectory computation with exact handling of the switching thresholds.

The right-hand side is smooth in time while both switch indicators hold
their values, so integration proceeds segment by segment: parameter-track
breakpoints and shock instants force step boundaries, and within a segment
the frozen-switch dynamics are advanced with explicit 4th-order (RK4) steps.
After each step the strict-inequality switch states are re-evaluated against
the (possibly moving) thresholds 1-alpha(t) and beta(t); a state change
means the trajectory crossed a threshold inside the step, and the crossing
is localized by bisection in time to within the crossing tolerance.
Integration restarts at the crossing with the post-crossing switch values.

On segments where all four tracks are constant the RK4 update collapses to
a fixed affine map r -> A + B*r (B is the degree-4 Taylor polynomial of the
decay exponential), which this module uses as a fast path; it is the same
scheme, just factored.  The closed-form solution of the frozen dynamics is
exposed separately as `step_exact` and serves as an independent oracle in
the tests, never as part of the integration path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .model import CLASSIFY_TOL, classify_region, validate_fraction
from .schedule import Schedule, Shock, normalize_shocks


class SolverError(RuntimeError):
    """Numerical failure: non-finite state or an event cascade."""


@dataclass(frozen=True)
class SolverConfig:
    """Fixed-step solver settings.

    step: RK4 step size in months.  Must resolve the fastest rate in the
        schedule (c1+c2 per month); the default 1e-4 is ~4.3 minutes of model
        time, far below the one-day policing timescale.
    crossing_tolerance: localization tolerance for threshold crossings, in
        units of r.
    sample_interval: output decimation; samples are recorded at the first
        step boundary past each multiple of this interval (events and shocks
        are always recorded).
    """

    step: float = 1e-4
    crossing_tolerance: float = 1e-10
    sample_interval: float = 1.0 / 300.0

    def __post_init__(self):
        if not self.step > 0.0:
            raise ValueError("step must be positive")
        if not self.crossing_tolerance > 0.0:
            raise ValueError("crossing_tolerance must be positive")
        if not self.sample_interval > 0.0:
            raise ValueError("sample_interval must be positive")


class Sample(NamedTuple):
    t: float
    r: float
    alpha: float
    beta: float
    c1: float
    c2: float
    v: int
    p: int
    region: str


@dataclass(frozen=True)
class Event:
    t: float
    kind: str  # shock | threshold_crossing | region_change
    detail: str


@dataclass
class Trajectory:
    samples: list[Sample] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)

    @property
    def final(self) -> Sample:
        return self.samples[-1]

    @property
    def final_r(self) -> float:
        return self.samples[-1].r

    def r_at(self, t: float) -> float:
        """Linearly interpolated r at time t (post-shock branch at a shock)."""
        samples = self.samples
        if t <= samples[0].t:
            return samples[0].r
        if t >= samples[-1].t:
            return samples[-1].r
        lo, hi = 0, len(samples) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if samples[mid].t <= t:
                lo = mid
            else:
                hi = mid
        s0, s1 = samples[lo], samples[hi]
        if s1.t == s0.t:
            return s1.r
        w = (t - s0.t) / (s1.t - s0.t)
        return s0.r + w * (s1.r - s0.r)

    def window(self, t0: float, t1: float) -> list[Sample]:
        return [s for s in self.samples if t0 <= s.t <= t1]


def step_exact(r0: float, a: float, b: float, dt: float) -> float:
    """Closed-form advance of dr/dt = a(1-r) - b*r over dt (frozen switches).

    With s = a + b > 0 the solution relaxes to a/s at rate s; with both
    switch terms off it is constant.  Used as the integration oracle.
    """
    if a < 0.0 or b < 0.0:
        raise ValueError("rates must be non-negative")
    if dt < 0.0:
        raise ValueError("dt must be non-negative")
    s = a + b
    if s == 0.0:
        return r0
    r_inf = a / s
    return r_inf + (r0 - r_inf) * math.exp(-s * dt)


_MAX_EVENTS = 100_000


class _Engine:
    """Single-trajectory integration state machine."""

    def __init__(self, r0, schedule, t_end, shocks, config):
        self.schedule = schedule
        self.cfg = config
        self.t_end = t_end
        self.t = 0.0
        self.r = float(r0)
        params = schedule.params_at(0.0)
        self.v = 1 if self.r > 1.0 - params.alpha else 0
        self.p = 1 if self.r < params.beta else 0
        self.region = classify_region(params, CLASSIFY_TOL).label.value
        self.samples: list[Sample] = []
        self.events: list[Event] = []
        self.next_due = 0.0
        self.shock_at = {s.time: s.delta_r for s in shocks}

    # -- output ------------------------------------------------------------

    def emit(self, force: bool = False) -> None:
        if self.samples and self.samples[-1].t == self.t and not force:
            return
        prm = self.schedule.params_at(self.t)
        self.samples.append(Sample(self.t, self.r, prm.alpha, prm.beta,
                                   prm.c1, prm.c2, self.v, self.p, self.region))

    def note(self, kind: str, detail: str) -> None:
        self.events.append(Event(self.t, kind, detail))
        if len(self.events) > _MAX_EVENTS:
            raise SolverError(f"event cascade: more than {_MAX_EVENTS} events")

    def emit_due(self) -> None:
        if self.t >= self.next_due - 1e-15:
            self.emit()
            step = self.cfg.sample_interval
            self.next_due = (math.floor(self.t / step + 1e-9) + 1) * step

    def check_region(self, alpha: float, beta: float, c1: float, c2: float) -> None:
        # mirrors model.classify_region, inlined for the per-step hot path
        gap = alpha + beta - 1.0
        if abs(gap) <= CLASSIFY_TOL:
            label = "I"
        elif gap < 0.0:
            label = "II"
        else:
            cs = c1 / (c1 + c2)
            threshold = 1.0 - alpha
            if abs(cs - threshold) <= CLASSIFY_TOL:
                label = "III0"
            elif abs(cs - beta) <= CLASSIFY_TOL:
                label = "III1"
            elif cs < threshold:
                label = "III0"
            elif cs > beta:
                label = "III1"
            else:
                label = "IIIe"
        if label != self.region:
            self.note("region_change", f"{self.region}->{label}")
            self.region = label

    # -- dynamics ----------------------------------------------------------

    def guard(self, r_new: float) -> float:
        if 0.0 <= r_new <= 1.0:
            return r_new
        if not (abs(r_new) <= 2.0):  # also catches NaN
            raise SolverError(f"state blew up at t={self.t!r}: r={r_new!r}")
        if r_new < -1e-9 or r_new > 1.0 + 1e-9:
            raise SolverError(f"state left [0,1] at t={self.t!r}: r={r_new!r}")
        return 0.0 if r_new < 0.0 else 1.0

    def apply_shock(self, delta: float) -> None:
        self.emit()
        self.r = min(self.r + delta, 1.0)
        self.note("shock", f"delta_r={delta!r}")
        prm = self.schedule.params_at(self.t)
        self.v = 1 if self.r > 1.0 - prm.alpha else 0
        self.p = 1 if self.r < prm.beta else 0
        self.emit(force=True)

    def crossing(self, t_star: float, r_star: float,
                 theta_v: float, theta_b: float) -> None:
        """Land on a localized crossing and flip to the post-crossing state."""
        self.t = t_star
        self.r = self.guard(r_star)
        v_new = 1 if self.r > theta_v else 0
        p_new = 1 if self.r < theta_b else 0
        if v_new != self.v:
            self.note("threshold_crossing", f"visibility->{v_new}")
        if p_new != self.p:
            self.note("threshold_crossing", f"policing->{p_new}")
        self.v, self.p = v_new, p_new
        self.emit()

    def run_segment(self, t1: float) -> None:
        """Advance from self.t to t1; tracks are single linear pieces here."""
        sch = self.schedule
        t0 = self.t
        ma, qa = sch.alpha.linear_piece(t0, t1)
        mb, qb = sch.beta.linear_piece(t0, t1)
        m1, q1 = sch.c1.linear_piece(t0, t1)
        m2, q2 = sch.c2.linear_piece(t0, t1)
        varying = ma != 0.0 or mb != 0.0 or m1 != 0.0 or m2 != 0.0
        # rate bound for crossing localization
        c1_hi = max(m1 * t0 + q1, m1 * t1 + q1)
        c2_hi = max(m2 * t0 + q2, m2 * t1 + q2)
        rate_bound = c1_hi + c2_hi + abs(ma) + abs(mb) + 1.0

        while self.t < t1 - 1e-15:
            remaining = t1 - self.t
            n = max(1, math.ceil(remaining / self.cfg.step - 1e-9))
            h = remaining / n
            if varying:
                done = self._steps_varying(t1, h, n, ma, qa, mb, qb,
                                           m1, q1, m2, q2, rate_bound)
            else:
                done = self._steps_constant(t1, h, n, qa, qb, q1, q2, rate_bound)
            if done:
                break
        self.t = t1  # land exactly on the boundary for shock/sample stamps

    def _steps_constant(self, t1, h, n, alpha, beta, c1, c2, rate_bound) -> bool:
        """Uniform RK4 steps with constant coefficients: r -> A + B*r."""
        a = c1 if self.v else 0.0
        b = c2 if self.p else 0.0
        theta_v = 1.0 - alpha
        theta_b = beta
        v_on = self.v == 1
        p_on = self.p == 1
        t_base = self.t
        r = self.r
        due = self.next_due - 1e-15
        z = -(a + b) * h
        poly = h * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)))
        big_a = poly * a
        big_b = 1.0 + poly * (-(a + b))
        for i in range(1, n + 1):
            r_new = big_a + big_b * r
            t_new = t1 if i == n else t_base + i * h
            if (r_new > theta_v) != v_on or (r_new < theta_b) != p_on:
                self.t = t_base + (i - 1) * h
                self.r = r

                def value_at(tau, _r=r, _a=a, _b=b):
                    zz = -(_a + _b) * tau
                    pp = tau * (1.0 + zz * (0.5 + zz * (1.0 / 6.0 + zz / 24.0)))
                    return (pp * _a) + (1.0 + pp * (-(_a + _b))) * _r

                tau = self._bisect(value_at, lambda tau: theta_v,
                                   lambda tau: theta_b, v_on, p_on,
                                   h, rate_bound)
                self.crossing(self.t + tau, value_at(tau), theta_v, theta_b)
                self.emit_due()
                return False
            r = r_new
            if t_new >= due:
                self.t = t_new
                self.r = self.guard(r)
                r = self.r
                self.emit_due()
                due = self.next_due - 1e-15
        self.t = t1
        self.r = self.guard(r)
        self.emit_due()
        return True

    def _steps_varying(self, t1, h, n, ma, qa, mb, qb, m1, q1, m2, q2,
                       rate_bound) -> bool:
        """Staged RK4 steps with linearly varying coefficients."""
        v_on = self.v == 1
        p_on = self.p == 1
        use_a = 1.0 if v_on else 0.0
        use_b = 1.0 if p_on else 0.0
        t_base = self.t
        r = self.r

        def rate(tt, rr):
            a = use_a * (m1 * tt + q1)
            b = use_b * (m2 * tt + q2)
            return a * (1.0 - rr) - b * rr

        def rk4(tt, rr, step):
            hh = 0.5 * step
            k1 = rate(tt, rr)
            k2 = rate(tt + hh, rr + hh * k1)
            k3 = rate(tt + hh, rr + hh * k2)
            k4 = rate(tt + step, rr + step * k3)
            return rr + step / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)

        for i in range(1, n + 1):
            t_cur = t_base + (i - 1) * h
            r_new = rk4(t_cur, r, h)
            t_new = t1 if i == n else t_base + i * h
            theta_v = 1.0 - (ma * t_new + qa)
            theta_b = mb * t_new + qb
            if (r_new > theta_v) != v_on or (r_new < theta_b) != p_on:
                self.t = t_cur
                self.r = r
                tau = self._bisect(
                    lambda tau: rk4(t_cur, r, tau),
                    lambda tau: 1.0 - (ma * (t_cur + tau) + qa),
                    lambda tau: mb * (t_cur + tau) + qb,
                    v_on, p_on, h, rate_bound)
                t_star = t_cur + tau
                self.crossing(t_star, rk4(t_cur, r, tau),
                              1.0 - (ma * t_star + qa), mb * t_star + qb)
                self.emit_due()
                return False
            r = r_new
            self.t = t_new
            self.r = self.guard(r)
            r = self.r
            self.check_region(ma * t_new + qa, mb * t_new + qb,
                              m1 * t_new + q1, m2 * t_new + q2)
            self.emit_due()
        self.t = t1
        self.r = r
        return True

    def _bisect(self, value_at, theta_v_at, theta_b_at, v_on, p_on,
                h, rate_bound) -> float:
        """Earliest switch-state change in (0, h], to within the tolerance.

        Keeps the invariant state(lo) == old, state(hi) == new and returns
        hi, so the landing point sits on the post-crossing side.
        """
        tol = self.cfg.crossing_tolerance
        lo, hi = 0.0, h
        for _ in range(200):
            if (hi - lo) * rate_bound <= tol or hi - lo <= 1e-18:
                break
            mid = 0.5 * (lo + hi)
            rm = value_at(mid)
            changed = ((rm > theta_v_at(mid)) != v_on
                       or (rm < theta_b_at(mid)) != p_on)
            if changed:
                hi = mid
            else:
                lo = mid
        return hi


def simulate(r0: float, schedule: Schedule, t_end: float,
             shocks=(), config: SolverConfig | None = None) -> Trajectory:
    """Integrate the switched dynamics from r0 over [0, t_end].

    Shocks are sorted and simultaneous ones merged; shocks after t_end are
    ignored.  Shock instants and track breakpoints force step boundaries, so
    no step straddles a discontinuity in time; threshold crossings in r are
    localized by bisection.  Both the pre- and post-shock states are
    recorded, duplicated sample times occur only there.
    """
    validate_fraction(r0, "r0")
    if not (t_end > 0.0 and math.isfinite(t_end)):
        raise ValueError(f"t_end must be a positive finite time, got {t_end!r}")
    cfg = config or SolverConfig()
    # positivity bound of the RK4 update for the fastest relaxation rate
    max_rate = max(schedule.c1.values) + max(schedule.c2.values)
    if cfg.step * max_rate > 2.0:
        raise ValueError(
            f"step {cfg.step!r} cannot resolve rates up to {max_rate:g}/month; "
            f"need step <= {2.0 / max_rate:g}")
    shocks = tuple(s for s in normalize_shocks(shocks) if s.time <= t_end)
    eng = _Engine(r0, schedule, t_end, shocks, cfg)

    eng.emit_due()
    if 0.0 in eng.shock_at:
        eng.apply_shock(eng.shock_at.pop(0.0))

    bounds = {bp for bp in schedule.breakpoint_times() if 0.0 < bp < t_end}
    bounds.update(eng.shock_at)
    bounds.add(t_end)
    prev = 0.0
    for b in sorted(bounds):
        if b > prev:
            eng.run_segment(b)
        if b in eng.shock_at:
            eng.apply_shock(eng.shock_at[b])
        prev = b
    eng.emit()
    return Trajectory(samples=eng.samples, events=eng.events)
