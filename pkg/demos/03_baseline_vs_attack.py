"""Closed-loop effect of the camouflage: a clean stop versus an overshoot.

The baseline controller latches a constant brake on first detection.  With
an undisturbed sign that is early enough; the camouflage delays detection
until the remaining distance no longer suffices.
"""

from aebsim import preset_config, run_scenario

for attack in ("none", "luv2"):
    result = run_scenario(preset_config(attack=attack, controller="constant"))
    sign = result.config.scene.s_sign
    print(f"attack={attack}")
    print(f"  detected and braked {result.distance_at_brake:6.2f} m before the sign")
    print(f"  stopped at s={result.stop_position:7.2f} m (sign at {sign:.1f} m)")
    if result.margin is not None:
        print(f"  margin: stopped {result.margin:.2f} m short of the line")
    else:
        print(f"  OVERSHOOT: ran {result.overshoot:.2f} m past the line")
    print(f"  time from brake onset to standstill: {result.time_to_complete_stop:.2f} s")
    print()

# the trace shows the moment perception first fires
result = run_scenario(preset_config(attack="luv2", controller="constant"))
first = next(s for s in result.trace if s.detected_front)
print(f"luv2 trace: first detection at t={first.t:.2f} s, "
      f"v={first.v:.2f} m/s, estimated range {first.est_distance:.2f} m")
