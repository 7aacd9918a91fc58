"""Brake controllers that turn camera observations into a brake message.

All controllers emit a normalized brake message b in [0, 1].  Three policies
are provided: a constant-brake baseline that latches on first detection, a
distance-adjusted policy that sizes the brake to the deceleration actually
required, and a fusion wrapper that adds a side camera as an independent
full-brake trigger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

from .perception import CameraSpec, Observation, estimate_distance
from .world import VehicleState

GRAVITY_DECEL = 9.81


def required_deceleration(v: float, d_stop: float) -> float:
    """Constant deceleration needed to stop from speed v within d_stop meters.

    Returns ``inf`` when d_stop is not positive: the stop point has been
    reached or passed and only a saturated brake is meaningful.
    """
    if v < 0.0:
        raise ValueError(f"speed must be non-negative, got {v}")
    if d_stop <= 0.0:
        return math.inf
    return v * v / (2.0 * d_stop)


def brake_message(a: float, a_max: float = GRAVITY_DECEL, multiplier: float = 1.0) -> float:
    """Normalize a required deceleration into a brake message in [0, 1]."""
    if a < 0.0:
        raise ValueError(f"required deceleration must be non-negative, got {a}")
    if a_max <= 0.0:
        raise ValueError(f"a_max must be > 0, got {a_max}")
    if not 0.0 < multiplier <= 1.0:
        raise ValueError(f"multiplier must be in (0, 1], got {multiplier}")
    return min(a / a_max * multiplier, 1.0)


def cruise_throttle(v: float, v_target: float, k_p: float = 2.0,
                    max_accel: float = 3.0) -> float:
    """Proportional throttle acceleration toward the target speed, clamped.

    The scenario loop zeroes this whenever any brake command is active.
    """
    if k_p <= 0.0:
        raise ValueError(f"k_p must be > 0, got {k_p}")
    if max_accel <= 0.0:
        raise ValueError(f"max_accel must be > 0, got {max_accel}")
    return min(max(k_p * (v_target - v), 0.0), max_accel)


@dataclass(frozen=True)
class ThresholdConstant:
    """Baseline policy: latch a fixed brake on the first front detection."""

    b_const: float = 0.67

    def __post_init__(self) -> None:
        if not 0.0 < self.b_const <= 1.0:
            raise ValueError(f"b_const must be in (0, 1], got {self.b_const}")


@dataclass(frozen=True)
class AdjustedBraking:
    """Distance-adjusted policy: brake as hard as the remaining gap demands.

    On each detected frame the controller estimates the sign distance from
    the bbox height, subtracts a standoff, and converts the required
    deceleration into a brake message.  Braking engages once the required
    deceleration first reaches ``engage_decel``; before that the vehicle
    keeps cruising even though the sign is already in view.  Between
    detections the last commanded brake is held.
    """

    a_max: float = GRAVITY_DECEL
    multiplier: float = 1.0
    standoff: float = 5.0
    engage_decel: float = 8.0

    def __post_init__(self) -> None:
        if self.a_max <= 0.0:
            raise ValueError(f"a_max must be > 0, got {self.a_max}")
        if not 0.6 <= self.multiplier <= 1.0:
            raise ValueError(f"multiplier must be in [0.6, 1.0], got {self.multiplier}")
        if self.standoff < 0.0:
            raise ValueError(f"standoff must be >= 0, got {self.standoff}")
        if self.engage_decel < 0.0:
            raise ValueError(f"engage_decel must be >= 0, got {self.engage_decel}")


@dataclass(frozen=True)
class SideCameraFusion:
    """Fusion wrapper: inner policy plus a side camera full-brake trigger."""

    inner: Union[ThresholdConstant, AdjustedBraking]

    def __post_init__(self) -> None:
        if isinstance(self.inner, SideCameraFusion):
            raise ValueError("fusion controllers do not nest")


ControllerKind = Union[ThresholdConstant, AdjustedBraking, SideCameraFusion]


@dataclass(frozen=True)
class ControllerState:
    """Controller memory carried between steps.

    ``brake_latched`` means the policy has committed to braking (constant
    baseline: first detection seen; adjusted: engagement threshold crossed).
    ``held_b`` is the last commanded brake, reused on frames without a
    detection.  Onset fields record the first step with b > 0.
    """

    brake_latched: bool = False
    held_b: float = 0.0
    brake_onset_t: Optional[float] = None
    brake_onset_distance: Optional[float] = None


def _step_inner(
    kind: Union[ThresholdConstant, AdjustedBraking],
    state: ControllerState,
    front: Observation,
    vehicle: VehicleState,
    camera: CameraSpec,
    sign_height: float,
) -> tuple[float, ControllerState]:
    if isinstance(kind, ThresholdConstant):
        if state.brake_latched or front.detected:
            return kind.b_const, replace(state, brake_latched=True, held_b=kind.b_const)
        return 0.0, state

    if not front.detected:
        return state.held_b, state
    d_est = estimate_distance(camera, front.h_bbox, sign_height)
    a = required_deceleration(vehicle.v, d_est - kind.standoff)
    if not state.brake_latched and a < kind.engage_decel:
        return 0.0, state
    b = brake_message(a, kind.a_max, kind.multiplier)
    return b, replace(state, brake_latched=True, held_b=b)


def step_controller(
    kind: ControllerKind,
    state: ControllerState,
    front: Observation,
    side: Optional[Observation],
    vehicle: VehicleState,
    camera: CameraSpec,
    sign_height: float,
) -> tuple[float, ControllerState]:
    """Advance the controller one frame; returns (b, next_state)."""
    if isinstance(kind, SideCameraFusion):
        inner_b, state = _step_inner(kind.inner, state, front, vehicle, camera, sign_height)
        side_b = 1.0 if side is not None and side.detected else 0.0
        b = max(inner_b, side_b)
    else:
        b, state = _step_inner(kind, state, front, vehicle, camera, sign_height)

    if b > 0.0 and state.brake_onset_t is None:
        d_onset: Optional[float] = None
        if front.detected and front.h_bbox is not None:
            d_onset = estimate_distance(camera, front.h_bbox, sign_height)
        state = replace(state, brake_onset_t=front.t, brake_onset_distance=d_onset)
    return b, state
