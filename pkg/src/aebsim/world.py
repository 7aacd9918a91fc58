"""Road geometry, unit conversions, and vehicle state for straight-road stop tests.

The world is a 1-D road: the ego vehicle travels along +s from ``s_start``
toward a stop sign at ``s_sign``.  Lateral placement of the sign only affects
what the cameras see, so it is carried here as a scene parameter rather than a
second motion axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

MS_PER_KMH = 1.0 / 3.6


def kmh_to_ms(speed_kmh: float) -> float:
    """Convert km/h to m/s. Raises ValueError for negative speeds."""
    if speed_kmh < 0.0:
        raise ValueError(f"speed must be non-negative, got {speed_kmh} km/h")
    return speed_kmh * MS_PER_KMH


def ms_to_kmh(speed_ms: float) -> float:
    """Convert m/s to km/h. Raises ValueError for negative speeds."""
    if speed_ms < 0.0:
        raise ValueError(f"speed must be non-negative, got {speed_ms} m/s")
    return speed_ms / MS_PER_KMH


class Phase(Enum):
    """Longitudinal maneuver phase of the ego vehicle."""

    ACCELERATING = "accelerating"
    CRUISING = "cruising"
    BRAKING = "braking"
    STOPPED = "stopped"


@dataclass(frozen=True)
class Scene:
    """Static description of one straight-road stop-sign approach.

    Parameters
    ----------
    s_start : float
        Ego start position along the road, meters.
    s_sign : float
        Stop sign position along the road, meters.  Must be ahead of
        ``s_start``.
    lateral_offset : float
        Perpendicular distance from the camera axis to the sign face, meters.
        Affects perception only; the vehicle never steers.
    sign_height : float
        Physical height of the sign face, meters.  Used by the pinhole
        projection and by the controller's distance estimate.
    stop_line_offset : float
        Distance from the stop line back to the sign, meters.  Zero means the
        line is at the sign itself.
    """

    s_start: float = 0.0
    s_sign: float = 220.0
    lateral_offset: float = 2.0
    sign_height: float = 0.75
    stop_line_offset: float = 0.0

    def __post_init__(self) -> None:
        if not self.s_sign > self.s_start:
            raise ValueError(
                f"s_sign ({self.s_sign}) must be ahead of s_start ({self.s_start})"
            )
        if self.lateral_offset < 0.0:
            raise ValueError(f"lateral_offset must be >= 0, got {self.lateral_offset}")
        if self.sign_height <= 0.0:
            raise ValueError(f"sign_height must be > 0, got {self.sign_height}")
        if self.stop_line_offset < 0.0:
            raise ValueError(
                f"stop_line_offset must be >= 0, got {self.stop_line_offset}"
            )

    @property
    def stop_line(self) -> float:
        """Road position of the stop line, meters."""
        return self.s_sign - self.stop_line_offset

    def sign_distance(self, s: float) -> float:
        """Straight-line camera-to-sign-face distance from road position s."""
        return math.hypot(self.s_sign - s, self.lateral_offset)

    def sign_ahead(self, s: float) -> float:
        """Along-road distance to the sign from s; negative once passed."""
        return self.s_sign - s


def build_scene(
    s_start: float = 0.0,
    s_sign: float = 220.0,
    lateral_offset: float = 2.0,
    sign_height: float = 0.75,
    stop_line_offset: float = 0.0,
) -> Scene:
    """Validate scene parameters and return a Scene.

    Same checks as the Scene constructor; exists so config loading has a
    single keyword entry point.
    """
    return Scene(
        s_start=s_start,
        s_sign=s_sign,
        lateral_offset=lateral_offset,
        sign_height=sign_height,
        stop_line_offset=stop_line_offset,
    )


@dataclass(frozen=True)
class VehicleState:
    """Instantaneous longitudinal state of the ego vehicle."""

    t: float
    s: float
    v: float
    b: float
    phase: Phase

    def __post_init__(self) -> None:
        if self.v < 0.0:
            raise ValueError(f"speed must be non-negative, got {self.v}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"brake command must be in [0, 1], got {self.b}")


def initial_state(scene: Scene) -> VehicleState:
    """Vehicle at rest at the start of the scene."""
    return VehicleState(t=0.0, s=scene.s_start, v=0.0, b=0.0, phase=Phase.ACCELERATING)
