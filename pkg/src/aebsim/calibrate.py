"""Fit a degradation profile's range scale to a target overshoot.

The attacked baseline overshoots because detection happens closer to the
sign while the braking distance stays the same.  Overshoot is therefore a
nonincreasing step function of range_scale, and bisection over (0, 1] finds
the scale whose simulated overshoot lands nearest the target.
"""

from __future__ import annotations

from dataclasses import replace

from .control import ThresholdConstant
from .scenario import ScenarioConfig, run_scenario


class CalibrationError(RuntimeError):
    """Target overshoot is outside the achievable interval."""

    def __init__(self, target: float, low: float, high: float):
        self.target = target
        self.achievable = (low, high)
        super().__init__(
            f"target overshoot {target:.3f} m unreachable; achievable "
            f"interval is [{low:.3f}, {high:.3f}] m"
        )


def _overshoot_at(baseline: ScenarioConfig, range_scale: float) -> float:
    config = replace(baseline, attack=replace(baseline.attack, range_scale=range_scale))
    overshoot = run_scenario(config).overshoot
    return overshoot if overshoot is not None else 0.0


def calibrate_attack_profile(
    target_overshoot: float,
    baseline: ScenarioConfig,
    tolerance: float = 0.5,
    max_iter: int = 60,
):
    """Return baseline.attack with range_scale fitted to the target overshoot.

    The baseline must be the undefended constant-brake configuration; its
    attack profile supplies the confidence scale, and only range_scale is
    fitted.  Raises CalibrationError when no scale in (0, 1] can reach the
    target within tolerance of the achievable envelope.
    """
    if target_overshoot < 0.0:
        raise ValueError(f"target overshoot must be >= 0, got {target_overshoot}")
    if not isinstance(baseline.controller, ThresholdConstant):
        raise ValueError("calibration baseline must use the constant-brake controller")

    lo, hi = 1e-3, 1.0
    over_hi = _overshoot_at(baseline, hi)
    if abs(over_hi - target_overshoot) <= tolerance:
        # Full range already lands on target; prefer the unshrunk scale.
        return replace(baseline.attack, range_scale=hi)
    over_lo = _overshoot_at(baseline, lo)
    if not over_hi <= target_overshoot <= over_lo:
        raise CalibrationError(target_overshoot, over_hi, over_lo)

    for _ in range(max_iter):
        if hi - lo < 1e-5:
            break
        mid = 0.5 * (lo + hi)
        if _overshoot_at(baseline, mid) > target_overshoot:
            lo = mid
        else:
            hi = mid

    candidates = [(abs(_overshoot_at(baseline, x) - target_overshoot), x) for x in (lo, hi)]
    err, best = min(candidates)
    if err > tolerance:
        raise CalibrationError(target_overshoot, over_hi, over_lo)
    return replace(baseline.attack, range_scale=best)
