"""Closed-loop braking simulator for camera-based stop-sign detection.

A straight-road ego vehicle cruises toward a stop sign, a pinhole-camera
detector (optionally degraded by a camouflage profile) reports the sign, and
a brake controller turns observations into stop maneuvers.  The package
provides the building blocks, scenario presets, batch sweeps, attack
calibration, and a CLI that emits traces and stopping-distance tables.
"""

from .calibrate import CalibrationError, calibrate_attack_profile
from .config import ConfigError, echo_config, load_config, parse_config, parse_speed
from .control import (
    AdjustedBraking,
    ControllerKind,
    ControllerState,
    SideCameraFusion,
    ThresholdConstant,
    brake_message,
    cruise_throttle,
    required_deceleration,
    step_controller,
)
from .dynamics import DynamicsConfig, analytic_braking_distance, step_dynamics
from .perception import (
    ATTACK_PROFILES,
    CONFIDENCE_MAX,
    CONFIDENCE_REF_DISTANCE,
    DETECTION_THRESHOLD,
    AttackProfile,
    CameraSpec,
    DetectionMode,
    Facing,
    Observation,
    attack_profile,
    confidence_at,
    estimate_distance,
    focal_length,
    observe_front,
    observe_side,
    project_bbox_height,
    sample_detection,
)
from .scenario import (
    PRESETS,
    PlacementPreset,
    ScenarioConfig,
    ScenarioResult,
    SweepRow,
    TraceSample,
    make_controller,
    metrics_from_trace,
    placement_preset,
    preset_config,
    run_scenario,
    run_sweep,
)
from .world import (
    Phase,
    Scene,
    VehicleState,
    build_scene,
    initial_state,
    kmh_to_ms,
    ms_to_kmh,
)

__version__ = "0.1.0"

__all__ = [
    "ATTACK_PROFILES",
    "CONFIDENCE_MAX",
    "CONFIDENCE_REF_DISTANCE",
    "DETECTION_THRESHOLD",
    "AdjustedBraking",
    "AttackProfile",
    "CalibrationError",
    "CameraSpec",
    "ConfigError",
    "ControllerKind",
    "ControllerState",
    "DetectionMode",
    "DynamicsConfig",
    "Facing",
    "Observation",
    "PRESETS",
    "Phase",
    "PlacementPreset",
    "Scene",
    "ScenarioConfig",
    "ScenarioResult",
    "SideCameraFusion",
    "SweepRow",
    "ThresholdConstant",
    "TraceSample",
    "VehicleState",
    "analytic_braking_distance",
    "attack_profile",
    "brake_message",
    "build_scene",
    "calibrate_attack_profile",
    "confidence_at",
    "cruise_throttle",
    "echo_config",
    "estimate_distance",
    "focal_length",
    "initial_state",
    "kmh_to_ms",
    "load_config",
    "make_controller",
    "metrics_from_trace",
    "ms_to_kmh",
    "observe_front",
    "observe_side",
    "parse_config",
    "parse_speed",
    "placement_preset",
    "preset_config",
    "project_bbox_height",
    "required_deceleration",
    "run_scenario",
    "run_sweep",
    "sample_detection",
    "step_controller",
    "step_dynamics",
]
