import math

import pytest
from hypothesis import given, strategies as st

from aebsim.world import (
    Phase,
    Scene,
    VehicleState,
    build_scene,
    initial_state,
    kmh_to_ms,
    ms_to_kmh,
)


class TestUnits:
    def test_kmh_to_ms_exact(self):
        assert kmh_to_ms(85.0) == 85.0 / 3.6

    def test_kmh_to_ms_reference_value(self):
        assert kmh_to_ms(85.0) == pytest.approx(23.6111, abs=1e-4)

    def test_zero(self):
        assert kmh_to_ms(0.0) == 0.0
        assert ms_to_kmh(0.0) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            kmh_to_ms(-1.0)
        with pytest.raises(ValueError):
            ms_to_kmh(-0.5)

    @given(st.floats(min_value=0.0, max_value=400.0, allow_nan=False))
    def test_round_trip(self, speed):
        assert kmh_to_ms(ms_to_kmh(speed)) == pytest.approx(speed, rel=1e-12, abs=1e-12)


class TestScene:
    def test_defaults_valid(self):
        scene = Scene()
        assert scene.s_sign > scene.s_start
        assert scene.stop_line == scene.s_sign

    def test_short_approach_valid(self):
        # a 120 m approach is a legal scene even if too short for fast runs
        scene = build_scene(s_sign=120.0)
        assert scene.s_sign == 120.0

    def test_sign_behind_start_rejected(self):
        with pytest.raises(ValueError, match="s_sign"):
            build_scene(s_sign=-5.0)
        with pytest.raises(ValueError):
            build_scene(s_start=10.0, s_sign=10.0)

    def test_bad_parameters_rejected(self):
        with pytest.raises(ValueError):
            build_scene(lateral_offset=-1.0)
        with pytest.raises(ValueError):
            build_scene(sign_height=0.0)
        with pytest.raises(ValueError):
            build_scene(stop_line_offset=-0.1)

    def test_sign_distance_is_euclidean(self):
        scene = build_scene(s_sign=100.0, lateral_offset=3.0)
        assert scene.sign_distance(96.0) == pytest.approx(5.0, abs=1e-12)
        assert scene.sign_ahead(96.0) == pytest.approx(4.0)
        assert scene.sign_ahead(104.0) == pytest.approx(-4.0)

    def test_stop_line_offset(self):
        scene = build_scene(s_sign=100.0, stop_line_offset=2.5)
        assert scene.stop_line == 97.5

    @given(
        s_start=st.floats(-100.0, 100.0),
        gap=st.floats(1.0, 1000.0),
        lateral=st.floats(0.0, 10.0),
        height=st.floats(0.1, 3.0),
        line=st.floats(0.0, 5.0),
    )
    def test_valid_scenes_hold_invariants(self, s_start, gap, lateral, height, line):
        scene = build_scene(s_start=s_start, s_sign=s_start + gap,
                            lateral_offset=lateral, sign_height=height,
                            stop_line_offset=line)
        assert scene.stop_line <= scene.s_sign
        assert scene.sign_distance(s_start) >= abs(scene.sign_ahead(s_start))


class TestVehicleState:
    def test_initial_state(self):
        state = initial_state(Scene())
        assert (state.t, state.s, state.v, state.b) == (0.0, 0.0, 0.0, 0.0)
        assert state.phase is Phase.ACCELERATING

    def test_negative_speed_rejected(self):
        with pytest.raises(ValueError):
            VehicleState(t=0.0, s=0.0, v=-0.1, b=0.0, phase=Phase.CRUISING)

    def test_brake_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            VehicleState(t=0.0, s=0.0, v=1.0, b=1.5, phase=Phase.BRAKING)
        with pytest.raises(ValueError):
            VehicleState(t=0.0, s=0.0, v=1.0, b=-0.1, phase=Phase.BRAKING)
