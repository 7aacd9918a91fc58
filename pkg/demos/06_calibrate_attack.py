"""Fitting a camouflage to produce a chosen overshoot.

Given a target overshoot for the undefended baseline, calibration bisects
the attack's detectable-range scale until the simulated run lands on the
target.  This is how the packaged luv2 profile got its range_scale.
"""

from dataclasses import replace

from aebsim import (
    CalibrationError,
    calibrate_attack_profile,
    preset_config,
    run_scenario,
)

baseline = preset_config(attack="luv2", controller="constant")
print(f"shipped luv2 range_scale: {baseline.attack.range_scale}")
print()

for target in (8.5, 10.3, 14.0):
    profile = calibrate_attack_profile(target, baseline, tolerance=0.5)
    achieved = run_scenario(replace(baseline, attack=profile)).overshoot
    print(f"target {target:5.1f} m -> range_scale {profile.range_scale:.6f}, "
          f"achieved {achieved:.2f} m")
print()

# targets outside the achievable envelope raise with the feasible interval
try:
    calibrate_attack_profile(2.0, baseline)
except CalibrationError as err:
    low, high = err.achievable
    print(f"target 2.0 m is unreachable: this profile can only produce "
          f"overshoots in [{low:.2f}, {high:.2f}] m")
    print("(the confidence degradation alone already delays detection that much)")
