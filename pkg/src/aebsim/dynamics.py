"""Fixed-step longitudinal vehicle dynamics.

Integration is semi-implicit Euler: acceleration updates speed first, then
the new speed moves the vehicle.  With pure braking this never oscillates
around zero, and a small stop epsilon snaps the final crawl to a clean stop
so stopping positions are well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .world import Phase, VehicleState


@dataclass(frozen=True)
class DynamicsConfig:
    """Integrator settings.

    Parameters
    ----------
    dt : float
        Fixed timestep, seconds.
    brake_decel : float
        Deceleration at a full brake message (b = 1), m/s^2.
    stop_epsilon : float
        Speed below which a braking vehicle snaps to rest, m/s.
    """

    dt: float = 0.01
    brake_decel: float = 9.0
    stop_epsilon: float = 0.05

    def __post_init__(self) -> None:
        if self.dt <= 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.brake_decel <= 0.0:
            raise ValueError(f"brake_decel must be > 0, got {self.brake_decel}")
        if self.stop_epsilon < 0.0:
            raise ValueError(f"stop_epsilon must be >= 0, got {self.stop_epsilon}")


def step_dynamics(
    state: VehicleState,
    b: float,
    throttle_accel: float,
    config: DynamicsConfig,
) -> VehicleState:
    """Advance the vehicle one timestep under a brake message and throttle.

    Parameters
    ----------
    state : VehicleState
        State at the start of the step.
    b : float
        Brake message in [0, 1]; scales ``config.brake_decel``.
    throttle_accel : float
        Commanded forward acceleration, m/s^2; must be 0 while braking.

    Returns
    -------
    VehicleState
        State at the end of the step.  Speed never goes negative, and a
        braking vehicle below the stop epsilon comes fully to rest.
    """
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"brake message must be in [0, 1], got {b}")
    if throttle_accel < 0.0:
        raise ValueError(f"throttle_accel must be >= 0, got {throttle_accel}")
    if b > 0.0 and throttle_accel > 0.0:
        raise ValueError("throttle and brake must not be applied together")

    a_net = throttle_accel - b * config.brake_decel
    v_next = max(state.v + a_net * config.dt, 0.0)
    if b > 0.0 and v_next < config.stop_epsilon:
        v_next = 0.0
    s_next = state.s + v_next * config.dt

    braking_now = b > 0.0 or state.phase in (Phase.BRAKING, Phase.STOPPED)
    if braking_now:
        phase = Phase.STOPPED if v_next == 0.0 else Phase.BRAKING
    else:
        phase = state.phase
    return replace(state, t=state.t + config.dt, s=s_next, v=v_next, b=b, phase=phase)


def analytic_braking_distance(v0: float, a: float) -> float:
    """Closed-form stopping distance v0^2 / (2 a) for constant deceleration a."""
    if v0 < 0.0:
        raise ValueError(f"initial speed must be non-negative, got {v0}")
    if a <= 0.0:
        raise ValueError(f"deceleration must be > 0, got {a}")
    return v0 * v0 / (2.0 * a)
