"""Scenario files: a JSON schema for runs, plus the built-in case studies.

A scenario is a JSON object with these fields (and no others):

    name      string, non-empty
    r0        initial protest fraction, in [0, 1]
    t_end     run length in months, > 0
    params    {"alpha": a, "beta": b, "c1": r, "c2": s}
    schedule  {"alpha": [[t, v], ...], "beta": ..., "c1": ..., "c2": ...}
    shocks    optional list of {"time": t, "delta_r": d}
    solver    optional subset of {"step", "crossing_tolerance",
              "sample_interval"}

Exactly one of `params` (constant parameters) or `schedule` (piecewise-
linear tracks, one [time, value] breakpoint list per parameter) must be
present.  Unknown fields are rejected by name; invariant violations are
reported with the offending field.  Serialization round-trips losslessly:
floats are written in shortest-exact form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .integrate import SolverConfig, Trajectory, simulate
from .model import DEFAULT_C1, DEFAULT_C2, ModelParams
from .schedule import Schedule, Shock, Track, egypt_schedule


class ScenarioError(ValueError):
    """Malformed or invalid scenario text."""


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    r0: float
    t_end: float
    params: ModelParams | None = None
    schedule: Schedule | None = None
    shocks: tuple[Shock, ...] = ()
    solver: SolverConfig | None = None

    def __post_init__(self):
        if not self.name:
            raise ScenarioError("name must be a non-empty string")
        if not (0.0 <= self.r0 <= 1.0):
            raise ScenarioError(f"r0 must lie in [0,1], got {self.r0!r}")
        if not self.t_end > 0.0:
            raise ScenarioError(f"t_end must be positive, got {self.t_end!r}")
        if (self.params is None) == (self.schedule is None):
            raise ScenarioError(
                "exactly one of 'params' or 'schedule' must be given")
        for shock in self.shocks:
            if shock.time > self.t_end:
                raise ScenarioError(
                    f"shock at time {shock.time!r} lies beyond t_end {self.t_end!r}")

    def effective_schedule(self) -> Schedule:
        if self.schedule is not None:
            return self.schedule
        return Schedule.constant(self.params)

    def run(self, config: SolverConfig | None = None) -> Trajectory:
        cfg = config or self.solver or SolverConfig()
        return simulate(self.r0, self.effective_schedule(), self.t_end,
                        self.shocks, cfg)


# -- parsing ----------------------------------------------------------------

_TOP_FIELDS = ("name", "r0", "t_end", "params", "schedule", "shocks", "solver")
_PARAM_FIELDS = ("alpha", "beta", "c1", "c2")
_SHOCK_FIELDS = ("time", "delta_r")
_SOLVER_FIELDS = ("step", "crossing_tolerance", "sample_interval")


def _reject_unknown(obj: dict, allowed, where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ScenarioError(f"unknown field '{where}{key}'")


def _number(obj: dict, key: str, where: str) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"field '{where}{key}' must be a number, "
                            f"got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(f"field '{where}{key}' must be finite, "
                            f"got {value!r}")
    return float(value)


def _require(obj: dict, key: str, where: str = "") -> None:
    if key not in obj:
        raise ScenarioError(f"missing field '{where}{key}'")


def _track_from_obj(value, where: str) -> Track:
    if not isinstance(value, list) or not value:
        raise ScenarioError(f"field '{where}' must be a non-empty list of "
                            f"[time, value] pairs")
    points = []
    for i, pair in enumerate(value):
        if (not isinstance(pair, list) or len(pair) != 2
                or any(isinstance(x, bool) or not isinstance(x, (int, float))
                       or not math.isfinite(x) for x in pair)):
            raise ScenarioError(f"field '{where}[{i}]' must be a "
                                f"[time, value] finite-number pair, got {pair!r}")
        points.append((float(pair[0]), float(pair[1])))
    try:
        return Track(tuple(points))
    except ValueError as exc:
        raise ScenarioError(f"field '{where}': {exc}") from None


def scenario_from_obj(obj) -> ScenarioSpec:
    if not isinstance(obj, dict):
        raise ScenarioError(f"scenario must be a JSON object, got {type(obj).__name__}")
    _reject_unknown(obj, _TOP_FIELDS, "")
    for key in ("name", "r0", "t_end"):
        _require(obj, key)
    name = obj["name"]
    if not isinstance(name, str):
        raise ScenarioError(f"field 'name' must be a string, got {name!r}")
    r0 = _number(obj, "r0", "")
    t_end = _number(obj, "t_end", "")

    params = None
    if "params" in obj:
        sub = obj["params"]
        if not isinstance(sub, dict):
            raise ScenarioError("field 'params' must be an object")
        _reject_unknown(sub, _PARAM_FIELDS, "params.")
        for key in _PARAM_FIELDS:
            _require(sub, key, "params.")
        try:
            params = ModelParams(*(_number(sub, k, "params.") for k in _PARAM_FIELDS))
        except ValueError as exc:
            raise ScenarioError(f"field 'params': {exc}") from None

    schedule = None
    if "schedule" in obj:
        sub = obj["schedule"]
        if not isinstance(sub, dict):
            raise ScenarioError("field 'schedule' must be an object")
        _reject_unknown(sub, _PARAM_FIELDS, "schedule.")
        for key in _PARAM_FIELDS:
            _require(sub, key, "schedule.")
        tracks = {k: _track_from_obj(sub[k], f"schedule.{k}") for k in _PARAM_FIELDS}
        try:
            schedule = Schedule(**tracks)
        except ValueError as exc:
            raise ScenarioError(f"field 'schedule': {exc}") from None

    shocks = []
    if "shocks" in obj:
        sub = obj["shocks"]
        if not isinstance(sub, list):
            raise ScenarioError("field 'shocks' must be a list")
        for i, entry in enumerate(sub):
            where = f"shocks[{i}]."
            if not isinstance(entry, dict):
                raise ScenarioError(f"field 'shocks[{i}]' must be an object")
            _reject_unknown(entry, _SHOCK_FIELDS, where)
            for key in _SHOCK_FIELDS:
                _require(entry, key, where)
            try:
                shocks.append(Shock(_number(entry, "time", where),
                                    _number(entry, "delta_r", where)))
            except ValueError as exc:
                raise ScenarioError(f"field 'shocks[{i}]': {exc}") from None

    solver = None
    if "solver" in obj:
        sub = obj["solver"]
        if not isinstance(sub, dict):
            raise ScenarioError("field 'solver' must be an object")
        _reject_unknown(sub, _SOLVER_FIELDS, "solver.")
        kwargs = {k: _number(sub, k, "solver.") for k in sub}
        try:
            solver = SolverConfig(**kwargs)
        except ValueError as exc:
            raise ScenarioError(f"field 'solver': {exc}") from None

    return ScenarioSpec(name=name, r0=r0, t_end=t_end, params=params,
                        schedule=schedule, shocks=tuple(shocks), solver=solver)


def parse_scenario(text: str) -> ScenarioSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"parse error at line {exc.lineno}, "
                            f"column {exc.colno}: {exc.msg}") from None
    return scenario_from_obj(obj)


def scenario_to_obj(spec: ScenarioSpec) -> dict:
    obj: dict = {"name": spec.name, "r0": spec.r0, "t_end": spec.t_end}
    if spec.params is not None:
        obj["params"] = {k: getattr(spec.params, k) for k in _PARAM_FIELDS}
    if spec.schedule is not None:
        obj["schedule"] = {
            k: [[t, v] for t, v in getattr(spec.schedule, k).breakpoints]
            for k in _PARAM_FIELDS}
    if spec.shocks:
        obj["shocks"] = [{"time": s.time, "delta_r": s.delta_r}
                         for s in spec.shocks]
    if spec.solver is not None:
        obj["solver"] = {k: getattr(spec.solver, k) for k in _SOLVER_FIELDS}
    return obj


def serialize_scenario(spec: ScenarioSpec) -> str:
    return json.dumps(scenario_to_obj(spec), indent=2) + "\n"


# -- built-in scenarios -------------------------------------------------------

_DAY = 1.0 / 30.0


def _tunisia_alpha_variants() -> list[ScenarioSpec]:
    shocks = (Shock(1 * _DAY, 0.021), Shock(20 * _DAY, 0.021))
    specs = []
    for alpha in (0.96, 0.98):
        for beta in (0.05, 0.06):
            specs.append(ScenarioSpec(
                name=f"tunisia-alpha-{alpha}-beta-{beta}",
                r0=0.0, t_end=2.0,
                params=ModelParams(alpha, beta, DEFAULT_C1, DEFAULT_C2),
                shocks=shocks))
    return specs


def _tunisia_c1_variants() -> list[ScenarioSpec]:
    shocks = (Shock(1 * _DAY, 0.041), Shock(20 * _DAY, 0.01))
    specs = []
    for label, c1 in (("2.30", DEFAULT_C1), ("3.26", 3.26),
                      ("4.02", 4.02), ("4.80", 4.80)):
        specs.append(ScenarioSpec(
            name=f"tunisia-c1-{label}",
            r0=0.0, t_end=2.0,
            params=ModelParams(0.96, 0.06, c1, DEFAULT_C2),
            shocks=shocks))
    return specs


def _egypt() -> ScenarioSpec:
    return ScenarioSpec(name="egypt", r0=0.0, t_end=2.0,
                        schedule=egypt_schedule(),
                        shocks=(Shock(11 * _DAY, 0.05),))


def _china_rising_c1() -> ScenarioSpec:
    # enthusiasm rises until c* overtakes beta and the unrest plateau escapes
    schedule = Schedule(
        alpha=Track.constant(0.97),
        beta=Track.constant(0.10),
        c1=Track(((0.0, 2.9), (12.0, 9.4))),
        c2=Track.constant(DEFAULT_C2),
    )
    return ScenarioSpec(name="china-rising-c1", r0=0.05, t_end=12.0,
                        schedule=schedule)


#: One-line description per built-in scenario name (CLI listing/help).
BUILTIN_INFO: dict[str, str] = {
    "tunisia-alpha-0.96-beta-0.05":
        "fixed params, low visibility: both shocks fizzle, state control holds",
    "tunisia-alpha-0.96-beta-0.06":
        "fixed params, low visibility, stronger policing: shocks fizzle",
    "tunisia-alpha-0.98-beta-0.05":
        "higher visibility: unrest plateau after shock 1, revolution after shock 2",
    "tunisia-alpha-0.98-beta-0.06":
        "higher visibility but stronger policing: unrest plateau survives both shocks",
    "tunisia-c1-2.30": "baseline enthusiasm: shocks fizzle back to state control",
    "tunisia-c1-3.26": "raised enthusiasm: unrest plateau holds against both shocks",
    "tunisia-c1-4.02": "high enthusiasm: small second shock tips the plateau over",
    "tunisia-c1-4.80": "highest enthusiasm: first shock alone starts the revolution",
    "egypt": "time-varying tracks (protest build-up, Internet cut, army siding "
             "with protesters) and one initial shock",
    "china-rising-c1": "slowly rising enthusiasm walks the unrest plateau up "
                       "until it escapes",
}


def builtin_scenarios() -> tuple[ScenarioSpec, ...]:
    """All built-in scenarios, in listing order."""
    specs = (*_tunisia_alpha_variants(), *_tunisia_c1_variants(),
             _egypt(), _china_rising_c1())
    assert {s.name for s in specs} == set(BUILTIN_INFO)
    return specs


def builtin_scenario(name: str) -> ScenarioSpec:
    for spec in builtin_scenarios():
        if spec.name == name:
            return spec
    known = ", ".join(sorted(BUILTIN_INFO))
    raise ScenarioError(f"unknown scenario {name!r}; available: {known}")
