"""Closed-loop scenario runs: approach, detect, brake, stop; plus sweeps.

A scenario wires the pieces together at a fixed timestep: synthesize camera
observations from the true geometry, feed them to the controller, apply the
commanded brake (or cruise throttle) to the dynamics, and record a trace.
Placement presets bundle the standard sign positions and visibility levels.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .control import (
    AdjustedBraking,
    ControllerKind,
    ControllerState,
    SideCameraFusion,
    ThresholdConstant,
    cruise_throttle,
    step_controller,
)
from .dynamics import DynamicsConfig, step_dynamics
from .perception import (
    AttackProfile,
    CameraSpec,
    DetectionMode,
    Facing,
    attack_profile,
    estimate_distance,
    observe_front,
    observe_side,
    CONFIDENCE_MAX,
    CONFIDENCE_REF_DISTANCE,
    DETECTION_THRESHOLD,
)
from .world import Phase, Scene, VehicleState, initial_state, kmh_to_ms

DEFAULT_V_TARGET = kmh_to_ms(85.0)
DEFAULT_MAX_SIM_TIME = 60.0
DEFAULT_SEED = 42
DEFAULT_FRONT_MAX_RANGE = 60.0


@dataclass(frozen=True)
class PlacementPreset:
    """Named sign placement: lateral offset plus a visibility scale on range."""

    name: str
    lateral_offset: float
    visibility_modifier: float


PRESETS: dict[str, PlacementPreset] = {
    "town07_standard": PlacementPreset("Town07_Standard", 2.0, 1.0),
    "town03_far": PlacementPreset("Town03_Far", 4.0, 0.9),
    "town03_near": PlacementPreset("Town03_Near", 1.0, 1.05),
    "town10_far": PlacementPreset("Town10_Far", 4.0, 0.9),
    "town10_near": PlacementPreset("Town10_Near", 1.0, 1.05),
}

CONTROLLER_NAMES = ("constant", "adjusted", "fusion-constant", "fusion-adjusted")


def placement_preset(name: str) -> PlacementPreset:
    """Look up a placement preset, case-insensitively."""
    key = name.strip().lower()
    if key not in PRESETS:
        known = ", ".join(p.name for p in PRESETS.values())
        raise ValueError(f"unknown preset {name!r} (known: {known})")
    return PRESETS[key]


def make_controller(name: str) -> ControllerKind:
    """Build a controller with default parameters from its CLI/config name."""
    key = name.strip().lower()
    if key == "constant":
        return ThresholdConstant()
    if key == "adjusted":
        return AdjustedBraking()
    if key == "fusion-constant":
        return SideCameraFusion(ThresholdConstant())
    if key == "fusion-adjusted":
        return SideCameraFusion(AdjustedBraking())
    known = ", ".join(CONTROLLER_NAMES)
    raise ValueError(f"unknown controller {name!r} (known: {known})")


def controller_name(kind: ControllerKind) -> str:
    """Inverse of make_controller for reporting."""
    if isinstance(kind, ThresholdConstant):
        return "constant"
    if isinstance(kind, AdjustedBraking):
        return "adjusted"
    if isinstance(kind.inner, ThresholdConstant):
        return "fusion-constant"
    return "fusion-adjusted"


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete, validated description of one closed-loop run."""

    scene: Scene = field(default_factory=Scene)
    front_camera: CameraSpec = field(default_factory=CameraSpec)
    side_camera: Optional[CameraSpec] = field(
        default_factory=lambda: CameraSpec(facing=Facing.SIDE)
    )
    attack: AttackProfile = field(default_factory=lambda: attack_profile("none"))
    controller: ControllerKind = field(default_factory=ThresholdConstant)
    dynamics: DynamicsConfig = field(default_factory=DynamicsConfig)
    v_target: float = DEFAULT_V_TARGET
    detection_mode: DetectionMode = DetectionMode.DETERMINISTIC
    threshold: float = DETECTION_THRESHOLD
    confidence_max: float = CONFIDENCE_MAX
    confidence_ref_distance: float = CONFIDENCE_REF_DISTANCE
    quantize_bbox: bool = False
    cruise_k_p: float = 2.0
    max_throttle_accel: float = 3.0
    seed: int = DEFAULT_SEED
    max_sim_time: float = DEFAULT_MAX_SIM_TIME
    preset_name: str = ""

    def __post_init__(self) -> None:
        if self.v_target <= 0.0:
            raise ValueError(f"v_target must be > 0, got {self.v_target}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {self.threshold}")
        if not 0.0 < self.confidence_max <= 1.0:
            raise ValueError(
                f"confidence_max must be in (0, 1], got {self.confidence_max}"
            )
        if self.confidence_ref_distance <= 0.0:
            raise ValueError(
                f"confidence_ref_distance must be > 0, got {self.confidence_ref_distance}"
            )
        if isinstance(self.controller, SideCameraFusion) and self.side_camera is None:
            raise ValueError("fusion controllers require a side camera")
        approach = self.scene.s_sign - self.scene.s_start
        min_time = 2.0 * approach / self.v_target
        if self.max_sim_time < min_time:
            raise ValueError(
                f"max_sim_time {self.max_sim_time} too short for the approach; "
                f"need at least {min_time:.1f} s"
            )
        if self.scene.sign_distance(self.scene.s_start) <= self.front_camera.max_range:
            raise ValueError(
                "sign must start outside the front camera's detection range"
            )


@dataclass(frozen=True)
class TraceSample:
    """One simulation frame as recorded in the trace."""

    t: float
    s: float
    v: float
    b: float
    detected_front: bool
    detected_side: bool
    confidence: float
    est_distance: Optional[float]


@dataclass(frozen=True)
class TraceMetrics:
    """Stop metrics reduced from a trace."""

    stopped: bool
    stop_position: float
    overshoot: Optional[float]
    margin: Optional[float]
    brake_onset_t: Optional[float]
    time_to_complete_stop: Optional[float]
    distance_at_brake: Optional[float]


@dataclass(frozen=True)
class ScenarioResult:
    """Outcome of one run: metrics plus the full trace."""

    config: ScenarioConfig
    stopped: bool
    stop_position: float
    overshoot: Optional[float]
    margin: Optional[float]
    brake_onset_t: Optional[float]
    time_to_complete_stop: Optional[float]
    distance_at_brake: Optional[float]
    trace: tuple[TraceSample, ...]


def metrics_from_trace(trace: Sequence[TraceSample], scene: Scene) -> TraceMetrics:
    """Reduce a trace to stop metrics.

    Brake onset is the first sample with b > 0; a run counts as stopped when
    it ends at v = 0 after onset.  Overshoot and margin are measured against
    the stop line and are mutually exclusive.  Onset-dependent fields are
    None when no brake was ever commanded.
    """
    if not trace:
        raise ValueError("trace is empty")
    stop_position = trace[-1].s
    past_line = stop_position - scene.stop_line
    overshoot = past_line if past_line > 0.0 else None
    margin = -past_line if past_line <= 0.0 else None

    onset = next((sample for sample in trace if sample.b > 0.0), None)
    if onset is None:
        return TraceMetrics(False, stop_position, overshoot, margin, None, None, None)

    distance_at_brake = scene.sign_distance(onset.s)
    stop_sample = next(
        (sample for sample in trace if sample.t >= onset.t and sample.v == 0.0), None
    )
    stopped = stop_sample is not None
    time_to_stop = stop_sample.t - onset.t if stop_sample is not None else None
    return TraceMetrics(
        stopped, stop_position, overshoot, margin, onset.t, time_to_stop, distance_at_brake
    )


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Run one closed-loop scenario to a stop or to the time limit."""
    rng_front = np.random.default_rng([config.seed, 0])
    rng_side = np.random.default_rng([config.seed, 1])

    state = initial_state(config.scene)
    controller_state = ControllerState()
    trace: list[TraceSample] = []

    while True:
        front = observe_front(
            config.front_camera, config.scene, config.attack,
            state.t, state.s, config.detection_mode, config.threshold, rng_front,
            confidence_max=config.confidence_max,
            ref_distance=config.confidence_ref_distance,
            quantize_bbox=config.quantize_bbox,
        )
        side = None
        if config.side_camera is not None:
            side = observe_side(
                config.side_camera, config.scene, config.attack,
                state.t, state.s, config.detection_mode, config.threshold, rng_side,
            )
        b, controller_state = step_controller(
            config.controller, controller_state, front, side, state,
            config.front_camera, config.scene.sign_height,
        )
        est = None
        if front.detected and front.h_bbox is not None:
            est = estimate_distance(
                config.front_camera, front.h_bbox, config.scene.sign_height
            )
        trace.append(TraceSample(
            t=state.t, s=state.s, v=state.v, b=b,
            detected_front=front.detected,
            detected_side=bool(side is not None and side.detected),
            confidence=front.confidence,
            est_distance=est,
        ))

        if state.v == 0.0 and controller_state.brake_onset_t is not None:
            break
        if state.t + config.dynamics.dt > config.max_sim_time + 1e-9:
            break

        if b > 0.0 or controller_state.brake_onset_t is not None:
            throttle = 0.0
        else:
            throttle = cruise_throttle(
                state.v, config.v_target, config.cruise_k_p, config.max_throttle_accel
            )
        state = step_dynamics(state, b, throttle, config.dynamics)
        if state.phase is Phase.ACCELERATING and state.v >= 0.995 * config.v_target:
            state = replace(state, phase=Phase.CRUISING)

    metrics = metrics_from_trace(trace, config.scene)
    return ScenarioResult(
        config=config,
        stopped=metrics.stopped,
        stop_position=metrics.stop_position,
        overshoot=metrics.overshoot,
        margin=metrics.margin,
        brake_onset_t=metrics.brake_onset_t,
        time_to_complete_stop=metrics.time_to_complete_stop,
        distance_at_brake=metrics.distance_at_brake,
        trace=tuple(trace),
    )


def preset_config(
    preset: Union[str, PlacementPreset] = "Town07_Standard",
    attack: Union[str, AttackProfile] = "none",
    controller: Union[str, ControllerKind] = "constant",
    seed: int = DEFAULT_SEED,
    detection_mode: DetectionMode = DetectionMode.DETERMINISTIC,
    dt: Optional[float] = None,
) -> ScenarioConfig:
    """Build a default scenario for a placement preset.

    The preset's lateral offset goes into the scene and its visibility
    modifier scales the front camera's detection range.
    """
    if isinstance(preset, str):
        preset = placement_preset(preset)
    if isinstance(attack, str):
        attack = attack_profile(attack)
    if isinstance(controller, str):
        controller = make_controller(controller)
    dynamics = DynamicsConfig() if dt is None else DynamicsConfig(dt=dt)
    return ScenarioConfig(
        scene=Scene(lateral_offset=preset.lateral_offset),
        front_camera=CameraSpec(
            max_range=DEFAULT_FRONT_MAX_RANGE * preset.visibility_modifier
        ),
        side_camera=CameraSpec(facing=Facing.SIDE),
        attack=attack,
        controller=controller,
        dynamics=dynamics,
        seed=seed,
        detection_mode=detection_mode,
        preset_name=preset.name,
    )


@dataclass(frozen=True)
class SweepRow:
    """One sweep entry: its config and either a result or an error message."""

    config: ScenarioConfig
    result: Optional[ScenarioResult]
    error: Optional[str]


def _run_row(config: ScenarioConfig) -> SweepRow:
    try:
        return SweepRow(config, run_scenario(config), None)
    except Exception as exc:  # per-row isolation: one bad row must not kill the sweep
        label = (f"{config.preset_name}/{config.attack.name}/"
                 f"{controller_name(config.controller)}")
        return SweepRow(config, None, f"{label}: {exc}")


def run_sweep(configs: Sequence[ScenarioConfig], jobs: int = 1) -> list[SweepRow]:
    """Run a batch of scenarios, optionally in parallel.

    Row order follows the input order and results are identical for any
    number of jobs; rows that fail report their error without aborting the
    rest.
    """
    if not configs:
        raise ValueError("sweep grid is empty")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1 or len(configs) == 1:
        return [_run_row(config) for config in configs]
    with ProcessPoolExecutor(max_workers=min(jobs, len(configs))) as pool:
        return list(pool.map(_run_row, configs))
