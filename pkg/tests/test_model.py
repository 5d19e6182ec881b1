import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import REGION_LABELS, draw_params, interior_points
from revdyn import (DEFAULT_C1, DEFAULT_C2, LN10, Interval, ModelParams,
                    RegionLabel, Schedule, SolverConfig, Stability, c_star,
                    calibrate_c1, calibrate_c2, classify_region, equilibria,
                    policing, predict_limit, rhs, simulate, visibility)

# rounded rates as printed in the case studies; used where the expected
# values below were derived with them
C1_ROUNDED = 2.302585
C2_ROUNDED = 69.0776


def params(alpha, beta, c1=DEFAULT_C1, c2=DEFAULT_C2):
    return ModelParams(alpha, beta, c1, c2)


class TestSwitches:
    def test_visibility_above_threshold(self):
        assert visibility(0.05, 0.96) == 1

    def test_visibility_at_threshold_is_off(self):
        assert visibility(0.04, 0.96) == 0
        assert visibility(1.0 - 0.96, 0.96) == 0

    def test_visibility_at_zero(self):
        for alpha in (0.1, 0.5, 0.99):
            assert visibility(0.0, alpha) == 0

    def test_policing_below_capacity(self):
        assert policing(0.05, 0.06) == 1

    def test_policing_at_capacity_is_off(self):
        assert policing(0.06, 0.06) == 0

    def test_policing_at_one(self):
        for beta in (0.05, 0.5, 0.99):
            assert policing(1.0, beta) == 0

    def test_indicators_monotone_in_r(self):
        rs = np.linspace(0.0, 1.0, 1001)
        for alpha, beta in [(0.96, 0.06), (0.3, 0.3), (0.5, 0.7)]:
            vs = [visibility(r, alpha) for r in rs]
            ps = [policing(r, beta) for r in rs]
            assert vs == sorted(vs)
            assert ps == sorted(ps, reverse=True)


class TestRhs:
    def test_zero_at_endpoints(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            p = params(rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99),
                       rng.uniform(0.1, 100), rng.uniform(0.1, 100))
            assert rhs(0.0, p) == 0.0
            assert rhs(1.0, p) == 0.0

    def test_both_switches_on(self):
        p = params(0.96, 0.06, C1_ROUNDED, C2_ROUNDED)
        assert rhs(0.05, p) == pytest.approx(-1.26643, abs=1e-5)

    def test_growth_only(self):
        p = params(0.96, 0.06, C1_ROUNDED, C2_ROUNDED)
        assert rhs(0.07, p) == pytest.approx(2.14140, abs=1e-5)

    def test_decay_only(self):
        p = params(0.96, 0.06)
        assert rhs(0.02, p) == pytest.approx(-DEFAULT_C2 * 0.02, rel=1e-15)


class TestCStar:
    def test_calibrated_rates(self):
        assert c_star(LN10, 30 * LN10) == pytest.approx(1.0 / 31.0, abs=1e-15)

    def test_raised_enthusiasm(self):
        assert c_star(3.26, C2_ROUNDED) == pytest.approx(0.04506, abs=1e-4)

    def test_symmetry(self):
        assert c_star(3.7, 3.7) == 0.5

    @given(st.floats(0.01, 1e3), st.floats(0.01, 1e3), st.floats(1e-3, 1e3))
    def test_scale_invariant(self, c1, c2, k):
        assert c_star(k * c1, k * c2) == pytest.approx(c_star(c1, c2),
                                                       rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            c_star(0.0, 1.0)


class TestCalibration:
    def test_one_month_spread(self):
        assert calibrate_c1(0.9, 1.0) == pytest.approx(LN10, abs=1e-12)

    def test_two_month_strong_spread(self):
        assert calibrate_c1(0.99, 2.0) == pytest.approx(LN10, abs=1e-12)

    def test_linearity_in_inverse_horizon(self):
        assert calibrate_c1(0.9, 2.0) == pytest.approx(LN10 / 2.0, abs=1e-12)

    def test_one_day_clearing(self):
        assert calibrate_c2(0.9, 1.0 / 30.0) == pytest.approx(30 * LN10,
                                                              abs=1e-12)

    def test_c2_shape_matches_c1(self):
        assert calibrate_c2(0.9, 1.0) == pytest.approx(LN10, abs=1e-12)

    def test_half_clearing(self):
        assert calibrate_c2(0.5, 1.0 / 30.0) == pytest.approx(30 * math.log(2),
                                                              abs=1e-9)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5])
    def test_rejects_bad_fraction(self, bad):
        with pytest.raises(ValueError):
            calibrate_c1(bad, 1.0)
        with pytest.raises(ValueError):
            calibrate_c2(bad, 1.0)


class TestModelParams:
    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.2])
    def test_rejects_alpha_outside_open_interval(self, alpha):
        with pytest.raises(ValueError, match="alpha"):
            ModelParams(alpha, 0.5)

    @pytest.mark.parametrize("beta", [0.0, 1.0, 2.0])
    def test_rejects_beta_outside_open_interval(self, beta):
        with pytest.raises(ValueError, match="beta"):
            ModelParams(0.5, beta)

    @pytest.mark.parametrize("rate", [0.0, -1.0, float("nan")])
    def test_rejects_bad_rates(self, rate):
        with pytest.raises(ValueError):
            ModelParams(0.5, 0.4, c1=rate)
        with pytest.raises(ValueError):
            ModelParams(0.5, 0.4, c2=rate)


class TestClassifyRegion:
    def test_stable_police_state(self):
        region = classify_region(params(0.96, 0.06, C1_ROUNDED, C2_ROUNDED))
        assert region.label is RegionLabel.STABLE_POLICE_STATE

    def test_metastable_police_state(self):
        region = classify_region(params(0.98, 0.05, C1_ROUNDED, C2_ROUNDED))
        assert region.label is RegionLabel.METASTABLE_POLICE_STATE

    def test_unstable_police_state(self):
        region = classify_region(params(0.96, 0.06, 4.80, C2_ROUNDED))
        assert region.label is RegionLabel.UNSTABLE_POLICE_STATE

    def test_failed_state(self):
        for c1, c2 in [(1.0, 1.0), (0.2, 80.0)]:
            region = classify_region(params(0.3, 0.3, c1, c2))
            assert region.label is RegionLabel.FAILED_STATE

    def test_knife_edge_tagged(self):
        region = classify_region(params(0.7, 0.3))
        assert region.label is RegionLabel.KNIFE_EDGE
        assert len(region.on_boundary) == 1

    def test_tie_at_visibility_threshold_goes_stable(self):
        # c* = 0.04 exactly equals 1 - alpha
        p = ModelParams(0.96, 0.06, c1=0.04, c2=0.96)
        region = classify_region(p)
        assert region.label is RegionLabel.STABLE_POLICE_STATE
        assert region.on_boundary

    def test_tie_at_beta_goes_unstable(self):
        p = ModelParams(0.96, 0.0625, c1=1.0, c2=15.0)  # c* = 1/16 = beta
        region = classify_region(p)
        assert region.label is RegionLabel.UNSTABLE_POLICE_STATE
        assert region.on_boundary


def region_structure(eqset):
    """(stability, has_basin) signature of an equilibrium set."""
    return tuple((e.stability.value, e.basin is not None)
                 for e in eqset.equilibria)


EXPECTED_STRUCTURE = {
    RegionLabel.KNIFE_EDGE: (
        ("asymptotically_stable", True), ("unstable", False),
        ("asymptotically_stable", True)),
    RegionLabel.FAILED_STATE: (
        ("asymptotically_stable", True), ("unstable", False),
        ("continuum_stable", True), ("unstable", False),
        ("asymptotically_stable", True)),
    RegionLabel.STABLE_POLICE_STATE: (
        ("asymptotically_stable", True), ("asymptotically_stable", True)),
    RegionLabel.METASTABLE_POLICE_STATE: (
        ("asymptotically_stable", True), ("asymptotically_stable", True),
        ("asymptotically_stable", True)),
    RegionLabel.UNSTABLE_POLICE_STATE: (
        ("asymptotically_stable", True), ("asymptotically_stable", True)),
}


class TestEquilibria:
    def test_failed_state_continuum(self):
        eqset = equilibria(params(0.3, 0.3))
        band = [e for e in eqset.equilibria
                if e.stability is Stability.CONTINUUM_STABLE]
        assert len(band) == 1
        assert band[0].value == Interval(0.3, 0.7)
        unstable = sorted(e.value for e in eqset.equilibria
                          if e.stability is Stability.UNSTABLE)
        assert unstable == [0.3, 0.7]
        assert eqset.stable_values == (0.0, 1.0)

    def test_metastable_three_attractors(self):
        eqset = equilibria(params(0.98, 0.05, C1_ROUNDED, C2_ROUNDED))
        assert len(eqset.stable_values) == 3
        assert eqset.stable_values[1] == pytest.approx(0.032258, abs=1e-6)

    def test_unstable_police_state_basins(self):
        eqset = equilibria(params(0.96, 0.06, 4.80, C2_ROUNDED))
        assert eqset.stable_values == (0.0, 1.0)
        basin_of_one = eqset.at_value(1.0).basin
        assert basin_of_one.lo == pytest.approx(0.04, abs=1e-12)
        assert not basin_of_one.lo_closed

    def test_half_open_endpoints_above_knife_edge(self):
        # 1-alpha decays back (closed in basin of 0), beta already grows
        # (closed in basin of 1)
        eqset = equilibria(params(0.98, 0.05, C1_ROUNDED, C2_ROUNDED))
        zero, cstar, one = eqset.equilibria
        assert zero.basin.hi == pytest.approx(0.02, abs=1e-12)
        assert zero.basin.hi_closed
        assert one.basin.lo == 0.05
        assert one.basin.lo_closed
        assert not cstar.basin.lo_closed and not cstar.basin.hi_closed

    def test_stable_police_state_basin_of_zero_spans_to_beta(self):
        eqset = equilibria(params(0.96, 0.06))
        zero = eqset.at_value(0.0)
        assert zero.basin == Interval(0.0, 0.06)

    def test_endpoints_always_stable(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            alpha = rng.uniform(0.01, 0.99)
            beta = rng.uniform(0.01, 0.99)
            eqset = equilibria(params(alpha, beta, rng.uniform(0.1, 50),
                                      rng.uniform(0.1, 200)))
            assert 0.0 in eqset.stable_values
            assert 1.0 in eqset.stable_values

    def test_structure_matches_region_over_many_draws(self):
        rng = np.random.default_rng(11)
        for _ in range(10_000):
            p = params(rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98),
                       float(10 ** rng.uniform(-1, 2.3)),
                       float(10 ** rng.uniform(-1, 2.5)))
            eqset = equilibria(p)
            assert region_structure(eqset) == EXPECTED_STRUCTURE[eqset.region.label]
            assert eqset.region.label == classify_region(p).label

    def test_stable_basins_disjoint(self):
        rng = np.random.default_rng(23)
        for _ in range(500):
            p = params(rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98),
                       rng.uniform(0.5, 20), rng.uniform(1, 150))
            basins = [e.basin for e in equilibria(p).stable]
            for i in range(len(basins)):
                for j in range(i + 1, len(basins)):
                    a, b = sorted((basins[i], basins[j]), key=lambda x: x.lo)
                    assert a.hi <= b.lo
                    if a.hi == b.lo:
                        assert not (a.hi_closed and b.lo_closed)

    def test_basin_endpoints_from_threshold_set(self):
        rng = np.random.default_rng(29)
        for _ in range(500):
            p = params(rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98),
                       rng.uniform(0.5, 20), rng.uniform(1, 150))
            eqset = equilibria(p)
            allowed = {0.0, 1.0, p.beta, 1.0 - p.alpha, p.c_star}
            for e in eqset.equilibria:
                if e.basin is not None:
                    assert e.basin.lo in allowed
                    assert e.basin.hi in allowed


class TestPredictLimit:
    def test_stable_police_state_small_start_dies(self):
        eq = predict_limit(0.03, params(0.96, 0.06, C1_ROUNDED, C2_ROUNDED))
        assert eq.value == 0.0

    def test_metastable_catches_interior_start(self):
        p = params(0.98, 0.06, C1_ROUNDED, C2_ROUNDED)
        eq = predict_limit(0.041, p)
        assert eq.value == pytest.approx(0.032258, abs=1e-5)
        # confirm by dense-step numerical integration
        tr = simulate(0.041, Schedule.constant(p), 2.0,
                      config=SolverConfig(step=5e-5, sample_interval=0.5))
        assert tr.final_r == pytest.approx(eq.value, abs=1e-6)

    def test_continuum_point_returns_itself(self):
        eq = predict_limit(0.5, params(0.3, 0.3))
        assert eq.value == 0.5
        assert eq.stability is Stability.CONTINUUM_STABLE

    def test_exact_unstable_point_stays(self):
        p = params(0.3, 0.3)
        eq = predict_limit(0.3, p)
        assert eq.stability is Stability.UNSTABLE
        assert eq.value == 0.3

    def test_fixed_endpoints_return_themselves(self):
        p = params(0.96, 0.06)
        assert predict_limit(0.0, p).value == 0.0
        assert predict_limit(1.0, p).value == 1.0

    def test_closed_basin_endpoints_route_correctly(self):
        p = params(0.98, 0.05, C1_ROUNDED, C2_ROUNDED)  # IIIe
        assert predict_limit(1.0 - 0.98, p).value == 0.0
        assert predict_limit(0.05, p).value == 1.0

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            predict_limit(1.5, params(0.5, 0.4))

    def test_rhs_sign_points_toward_attractor(self):
        rng = np.random.default_rng(37)
        for _ in range(500):
            p = params(rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98),
                       rng.uniform(0.5, 20), rng.uniform(1, 150))
            for e in equilibria(p).stable:
                lo, hi = e.basin.lo, e.basin.hi
                for r0 in rng.uniform(lo + 1e-6, hi - 1e-6, size=3):
                    drift = rhs(float(r0), p)
                    if drift != 0.0:
                        assert math.copysign(1.0, drift) == math.copysign(
                            1.0, e.value - r0)

    def test_trajectories_converge_to_prediction(self):
        rng = np.random.default_rng(41)
        cfg = SolverConfig(step=2e-3, sample_interval=0.5)
        for label in REGION_LABELS:
            for _ in range(10):
                p = draw_params(rng, label)
                for e in equilibria(p).stable:
                    for r0 in interior_points(rng, e.basin.lo, e.basin.hi, 2):
                        predicted = predict_limit(r0, p)
                        assert predicted.value == e.value
                        tr = simulate(r0, Schedule.constant(p), 2.0, config=cfg)
                        assert tr.final_r == pytest.approx(e.value, abs=1e-4)
