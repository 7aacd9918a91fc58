"""Both defenses recover a safe stop under the strongest camouflage.

Defense 1 sizes the brake to the estimated distance instead of panicking at
first sight.  Defense 2 adds a side camera the frontal camouflage cannot
fool.  Either one turns the overshoot back into a margin.
"""

from aebsim import preset_config, run_scenario

print("controller comparison under the luv2 camouflage:")
print(f"{'controller':<18} {'stopped':<8} {'result':<30} {'brake from':>10}")
for controller in ("constant", "adjusted", "fusion-constant", "fusion-adjusted"):
    result = run_scenario(preset_config(attack="luv2", controller=controller))
    if result.margin is not None:
        outcome = f"{result.margin:.2f} m short of the line"
    else:
        outcome = f"{result.overshoot:.2f} m PAST the line"
    print(f"{controller:<18} {str(result.stopped):<8} {outcome:<30} "
          f"{result.distance_at_brake:8.2f} m")
print()

# the side camera fires at close range regardless of the frontal camouflage
result = run_scenario(preset_config(attack="luv2", controller="fusion-constant"))
side_first = next(s for s in result.trace if s.detected_side)
print(f"fusion-constant: side camera fired at t={side_first.t:.2f} s "
      f"with the vehicle {result.config.scene.s_sign - side_first.s:.2f} m out")

# and the defenses never hurt the clean case
print()
print("same controllers with no attack:")
for controller in ("constant", "adjusted", "fusion-constant", "fusion-adjusted"):
    result = run_scenario(preset_config(attack="none", controller=controller))
    print(f"{controller:<18} margin {result.margin:.2f} m")
