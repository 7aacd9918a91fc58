"""Batch evaluation across every sign placement, with and without attack.

The combined defense (distance-adjusted braking plus the side camera) is
run on all five placement presets.  Stops land in a tight band everywhere,
which is the whole point of a defense: placement and camouflage stop
mattering.
"""

from aebsim import PRESETS, preset_config, run_scenario, run_sweep

grid = [
    preset_config(preset=key, attack=attack, controller="fusion-adjusted")
    for key in PRESETS
    for attack in ("none", "luv2")
]
rows = run_sweep(grid, jobs=2)

print(f"{'preset':<18} {'attack':<6} {'t_stop':>7} {'brake from':>11} {'margin':>8}")
for row in rows:
    r = row.result
    print(f"{row.config.preset_name:<18} {row.config.attack.name:<6} "
          f"{r.time_to_complete_stop:6.2f}s {r.distance_at_brake:9.2f} m "
          f"{r.margin:6.2f} m")
print()

times = [row.result.time_to_complete_stop for row in rows]
dists = [row.result.distance_at_brake for row in rows]
print(f"time to stop spans [{min(times):.2f}, {max(times):.2f}] s")
print(f"braking starts between {min(dists):.2f} and {max(dists):.2f} m out")

# contrast: the undefended baseline's spread across the same grid
print()
baseline = run_sweep([preset_config(preset=key, attack="luv2")
                      for key in PRESETS])
print("undefended baseline under attack:")
for row in baseline:
    r = row.result
    outcome = (f"margin {r.margin:.2f} m" if r.margin is not None
               else f"overshoot {r.overshoot:.2f} m")
    print(f"  {row.config.preset_name:<18} {outcome}")
