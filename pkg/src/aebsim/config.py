"""Plain-text run configuration: named sections of key = value pairs.

Every parameter of a scenario can be set from a config file; anything not
mentioned falls back to the preset and built-in defaults.  Unknown sections
or keys are hard errors that name the file and line, so typos never silently
run a different experiment.  Speed values accept a unit suffix ("85 kmh",
"23.6 m/s"); bare numbers are m/s.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import replace
from pathlib import Path
from typing import Callable, Optional, Union

from .control import AdjustedBraking, SideCameraFusion, ThresholdConstant
from .dynamics import DynamicsConfig
from .perception import AttackProfile, CameraSpec, DetectionMode, Facing, attack_profile
from .scenario import (
    DEFAULT_FRONT_MAX_RANGE,
    ScenarioConfig,
    controller_name,
    make_controller,
    placement_preset,
)
from .world import Scene


class ConfigError(ValueError):
    """Configuration problem, annotated with its source location when known."""

    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


_SPEED_SUFFIXES = {
    "kmh": 1.0 / 3.6,
    "km/h": 1.0 / 3.6,
    "mps": 1.0,
    "m/s": 1.0,
}


def parse_speed(text: str) -> float:
    """Parse a speed with optional unit suffix into m/s."""
    match = re.fullmatch(r"\s*([-+0-9.eE]+)\s*([a-zA-Z/]*)\s*", text)
    if not match:
        raise ValueError(f"cannot parse speed {text!r}")
    value, unit = match.groups()
    try:
        speed = float(value)
    except ValueError:
        raise ValueError(f"cannot parse speed {text!r}") from None
    if unit and unit.lower() not in _SPEED_SUFFIXES:
        raise ValueError(f"unknown speed unit {unit!r} in {text!r}")
    if speed < 0.0:
        raise ValueError(f"speed must be non-negative, got {text!r}")
    return speed * (_SPEED_SUFFIXES[unit.lower()] if unit else 1.0)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"cannot parse boolean {text!r}")


def _parse_mode(text: str) -> DetectionMode:
    try:
        return DetectionMode(text.strip().lower())
    except ValueError:
        raise ValueError(
            f"detection_mode must be 'deterministic' or 'stochastic', got {text!r}"
        ) from None


# section -> key -> value parser.  This is the whole config surface.
_SCHEMA: dict[str, dict[str, Callable[[str], object]]] = {
    "scenario": {
        "preset": str,
        "attack": str,
        "controller": str,
        "target_speed": parse_speed,
        "detection_mode": _parse_mode,
        "threshold": float,
        "seed": int,
        "max_sim_time": float,
        "quantize_bbox": _parse_bool,
    },
    "scene": {
        "s_start": float,
        "s_sign": float,
        "lateral_offset": float,
        "sign_height": float,
        "stop_line_offset": float,
    },
    "front_camera": {
        "image_height_px": int,
        "image_width_px": int,
        "fov_deg": float,
        "max_range": float,
    },
    "side_camera": {
        "enabled": _parse_bool,
        "image_height_px": int,
        "image_width_px": int,
        "fov_deg": float,
        "trigger_range": float,
    },
    "attack": {
        "confidence_scale": float,
        "range_scale": float,
    },
    "controller": {
        "b_const": float,
        "a_max": float,
        "multiplier": float,
        "standoff": float,
        "engage_decel": float,
    },
    "perception": {
        "confidence_max": float,
        "ref_distance": float,
    },
    "cruise": {
        "k_p": float,
        "max_accel": float,
    },
    "dynamics": {
        "dt": float,
        "brake_decel": float,
        "stop_epsilon": float,
    },
}


def _find_line(raw_lines: list[str], section: str, key: Optional[str]) -> Optional[int]:
    """Best-effort line lookup for error messages."""
    header = re.compile(r"\s*\[\s*" + re.escape(section) + r"\s*\]", re.IGNORECASE)
    in_section = False
    for lineno, line in enumerate(raw_lines, start=1):
        if re.match(r"\s*\[", line):
            if in_section and key is not None:
                break
            in_section = bool(header.match(line))
            if in_section and key is None:
                return lineno
            continue
        if in_section and key is not None:
            if re.match(r"\s*" + re.escape(key) + r"\s*[=:]", line, re.IGNORECASE):
                return lineno
    return None


def parse_config(path: Union[str, Path]) -> dict[str, dict[str, object]]:
    """Read and validate a config file into {section: {key: parsed value}}."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", str(path)) from exc
    raw_lines = text.splitlines()

    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ConfigError(f"malformed config: {exc.message}", str(path), line) from exc

    values: dict[str, dict[str, object]] = {}
    for section in parser.sections():
        canon = section.strip().lower()
        if canon not in _SCHEMA:
            raise ConfigError(
                f"unknown section [{section}]",
                str(path), _find_line(raw_lines, section, None),
            )
        values[canon] = {}
        for key, raw in parser.items(section):
            if key not in _SCHEMA[canon]:
                raise ConfigError(
                    f"unknown key {key!r} in [{canon}]",
                    str(path), _find_line(raw_lines, section, key),
                )
            try:
                values[canon][key] = _SCHEMA[canon][key](raw)
            except ValueError as exc:
                raise ConfigError(
                    f"bad value for {key!r} in [{canon}]: {exc}",
                    str(path), _find_line(raw_lines, section, key),
                ) from exc
    return values


def build_config(
    values: Optional[dict[str, dict[str, object]]] = None,
    preset: Optional[str] = None,
    attack: Optional[str] = None,
    controller: Optional[str] = None,
    seed: Optional[int] = None,
    source: Optional[str] = None,
) -> ScenarioConfig:
    """Assemble a ScenarioConfig from parsed file values plus flag overrides.

    Precedence, lowest to highest: built-in defaults, placement preset,
    config file sections, explicit flags.
    """
    values = values or {}
    scn = values.get("scenario", {})

    try:
        preset_obj = placement_preset(preset or scn.get("preset", "Town07_Standard"))
        attack_name = str(attack or scn.get("attack", "none")).strip().lower()
        if attack_name == "custom":
            sect = values.get("attack", {})
            if "confidence_scale" not in sect or "range_scale" not in sect:
                raise ConfigError(
                    "custom attack requires confidence_scale and range_scale "
                    "in an [attack] section",
                    source,
                )
            profile = AttackProfile("custom", **sect)
        else:
            profile = attack_profile(attack_name)
            if "attack" in values:
                profile = replace(profile, **values["attack"])

        kind = make_controller(controller or scn.get("controller", "constant"))
        kind = _apply_controller_params(kind, values.get("controller", {}))

        scene_kwargs: dict[str, object] = {"lateral_offset": preset_obj.lateral_offset}
        scene_kwargs.update(values.get("scene", {}))
        scene = Scene(**scene_kwargs)

        front_kwargs = dict(values.get("front_camera", {}))
        front_kwargs.setdefault(
            "max_range", DEFAULT_FRONT_MAX_RANGE * preset_obj.visibility_modifier
        )
        front = CameraSpec(facing=Facing.FRONT, **front_kwargs)

        side_kwargs = dict(values.get("side_camera", {}))
        side_enabled = side_kwargs.pop("enabled", True)
        side = CameraSpec(facing=Facing.SIDE, **side_kwargs) if side_enabled else None

        dynamics = DynamicsConfig(**values.get("dynamics", {}))
        perception = values.get("perception", {})
        cruise = values.get("cruise", {})

        kwargs: dict[str, object] = {}
        if "target_speed" in scn:
            kwargs["v_target"] = scn["target_speed"]
        if "detection_mode" in scn:
            kwargs["detection_mode"] = scn["detection_mode"]
        if "threshold" in scn:
            kwargs["threshold"] = scn["threshold"]
        if "max_sim_time" in scn:
            kwargs["max_sim_time"] = scn["max_sim_time"]
        if "quantize_bbox" in scn:
            kwargs["quantize_bbox"] = scn["quantize_bbox"]
        if "confidence_max" in perception:
            kwargs["confidence_max"] = perception["confidence_max"]
        if "ref_distance" in perception:
            kwargs["confidence_ref_distance"] = perception["ref_distance"]
        if "k_p" in cruise:
            kwargs["cruise_k_p"] = cruise["k_p"]
        if "max_accel" in cruise:
            kwargs["max_throttle_accel"] = cruise["max_accel"]

        return ScenarioConfig(
            scene=scene,
            front_camera=front,
            side_camera=side,
            attack=profile,
            controller=kind,
            dynamics=dynamics,
            seed=seed if seed is not None else scn.get("seed", ScenarioConfig.seed),
            preset_name=preset_obj.name,
            **kwargs,
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), source) from exc


def _apply_controller_params(kind, params: dict[str, object]):
    """Apply [controller] keys to whichever controller uses them."""
    if isinstance(kind, SideCameraFusion):
        return SideCameraFusion(_apply_controller_params(kind.inner, params))
    if isinstance(kind, ThresholdConstant):
        used = {k: v for k, v in params.items() if k == "b_const"}
    else:
        used = {k: v for k, v in params.items()
                if k in ("a_max", "multiplier", "standoff", "engage_decel")}
    return replace(kind, **used) if used else kind


def load_config(
    path: Optional[Union[str, Path]] = None,
    preset: Optional[str] = None,
    attack: Optional[str] = None,
    controller: Optional[str] = None,
    seed: Optional[int] = None,
) -> ScenarioConfig:
    """Parse an optional config file and apply flag overrides."""
    values = parse_config(path) if path is not None else None
    return build_config(
        values, preset=preset, attack=attack, controller=controller, seed=seed,
        source=str(path) if path is not None else None,
    )


def echo_config(config: ScenarioConfig) -> str:
    """Render a config back to full, explicit file text.

    The echo lists every resolved parameter, so re-running from it
    reproduces the scenario bit for bit even if package defaults change.
    """
    inner = config.controller
    lines = [
        "[scenario]",
        f"preset = {config.preset_name or 'Town07_Standard'}",
        f"attack = {config.attack.name}",
        f"controller = {controller_name(config.controller)}",
        f"target_speed = {config.v_target!r} m/s",
        f"detection_mode = {config.detection_mode.value}",
        f"threshold = {config.threshold!r}",
        f"seed = {config.seed}",
        f"max_sim_time = {config.max_sim_time!r}",
        f"quantize_bbox = {str(config.quantize_bbox).lower()}",
        "",
        "[scene]",
        f"s_start = {config.scene.s_start!r}",
        f"s_sign = {config.scene.s_sign!r}",
        f"lateral_offset = {config.scene.lateral_offset!r}",
        f"sign_height = {config.scene.sign_height!r}",
        f"stop_line_offset = {config.scene.stop_line_offset!r}",
        "",
        "[front_camera]",
        f"image_height_px = {config.front_camera.image_height_px}",
        f"image_width_px = {config.front_camera.image_width_px}",
        f"fov_deg = {config.front_camera.fov_deg!r}",
        f"max_range = {config.front_camera.max_range!r}",
        "",
        "[side_camera]",
        f"enabled = {str(config.side_camera is not None).lower()}",
    ]
    if config.side_camera is not None:
        lines += [
            f"image_height_px = {config.side_camera.image_height_px}",
            f"image_width_px = {config.side_camera.image_width_px}",
            f"fov_deg = {config.side_camera.fov_deg!r}",
            f"trigger_range = {config.side_camera.trigger_range!r}",
        ]
    lines += [
        "",
        "[attack]",
        f"confidence_scale = {config.attack.confidence_scale!r}",
        f"range_scale = {config.attack.range_scale!r}",
        "",
        "[controller]",
    ]
    if isinstance(inner, SideCameraFusion):
        inner = inner.inner
    if isinstance(inner, ThresholdConstant):
        lines.append(f"b_const = {inner.b_const!r}")
    else:
        lines += [
            f"a_max = {inner.a_max!r}",
            f"multiplier = {inner.multiplier!r}",
            f"standoff = {inner.standoff!r}",
            f"engage_decel = {inner.engage_decel!r}",
        ]
    lines += [
        "",
        "[perception]",
        f"confidence_max = {config.confidence_max!r}",
        f"ref_distance = {config.confidence_ref_distance!r}",
        "",
        "[cruise]",
        f"k_p = {config.cruise_k_p!r}",
        f"max_accel = {config.max_throttle_accel!r}",
        "",
        "[dynamics]",
        f"dt = {config.dynamics.dt!r}",
        f"brake_decel = {config.dynamics.brake_decel!r}",
        f"stop_epsilon = {config.dynamics.stop_epsilon!r}",
        "",
    ]
    return "\n".join(lines)
