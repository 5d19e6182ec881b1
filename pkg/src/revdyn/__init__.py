"""Protest-fraction dynamics toolkit.

A single switched scalar ODE drives everything here: the protest fraction
grows while visible and decays while containable, with strict-threshold
indicators for both.  The package provides the analytic layer (region
classification, equilibria and basins, escape-shock sizes), an event-aware
fixed-step integrator for time-varying parameter schedules and shocks,
parameter-plane sweeps, a JSON scenario format with built-in case studies,
and CSV/figure reporting behind a CLI.
"""

from .analysis import (Attainment, EscapeReport, RegionGrid, RisingRateStep,
                       escape_shock, preset_params, rising_cstar_study,
                       sweep_regions)
from .integrate import (Event, Sample, SolverConfig, SolverError, Trajectory,
                        simulate, step_exact)
from .model import (CLASSIFY_TOL, DEFAULT_C1, DEFAULT_C2, LN10, BoundaryTag,
                    Equilibrium, EquilibriumSet, Interval, ModelParams,
                    Region, RegionLabel, Stability, c_star, calibrate_c1,
                    calibrate_c2, classify_region, equilibria, policing,
                    predict_limit, rhs, visibility)
from .scenario import (BUILTIN_INFO, ScenarioError, ScenarioSpec,
                       builtin_scenario, builtin_scenarios, parse_scenario,
                       serialize_scenario)
from .schedule import (Schedule, Shock, Track, apply_shock, egypt_schedule,
                       normalize_shocks)

__version__ = "0.1.0"

__all__ = [
    "Attainment", "BoundaryTag", "BUILTIN_INFO", "CLASSIFY_TOL", "DEFAULT_C1",
    "DEFAULT_C2", "Equilibrium", "EquilibriumSet", "EscapeReport", "Event",
    "Interval", "LN10", "ModelParams", "Region", "RegionGrid", "RegionLabel",
    "RisingRateStep", "Sample", "ScenarioError", "ScenarioSpec", "Schedule",
    "Shock", "SolverConfig", "SolverError", "Stability", "Track",
    "Trajectory", "apply_shock", "builtin_scenario", "builtin_scenarios",
    "c_star", "calibrate_c1", "calibrate_c2", "classify_region",
    "egypt_schedule", "equilibria", "escape_shock", "normalize_shocks",
    "parse_scenario", "policing", "predict_limit", "preset_params", "rhs",
    "rising_cstar_study", "serialize_scenario", "simulate", "step_exact",
    "sweep_regions", "visibility",
]
