"""Scenario definition and the closed-loop propagation driver."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

from . import _backend
from . import _pykernel as laws
from .control import ControllerKind, ControllerSpec, Stage, next_stage
from .dynamics import MU_EARTH, RigidBodyState
from .errors import DetumbleError, ValidationError
from .mathcore import Quaternion, Vec3, quat_norm
from .spacecraft import SpacecraftConfig, preset
from .telemetry import SimResult, TelemetryRecord

INITIAL_RADIUS = 6871393.0  # m, 500 km above a 6371393 m Earth
INITIAL_SPEED = 7616.18  # m/s
INITIAL_RATE = 0.2  # rad/s on each axis

DEFAULT_DT = 0.01
SHORT_DURATION = 10.0
TWO_STAGE_DURATION = 20.0

_LAW_CODES = {
    ControllerKind.NONE: laws.LAW_NONE,
    ControllerKind.PROPORTIONAL: laws.LAW_PROPORTIONAL,
    ControllerKind.FEEDBACK_LINEARIZED: laws.LAW_FEEDBACK_LINEARIZED,
    ControllerKind.TWO_STAGE: laws.LAW_TWO_STAGE,
}


def default_initial_state() -> RigidBodyState:
    """Deployment state: circular equatorial orbit, identity attitude, 0.2 rad/s tumble."""
    return RigidBodyState(
        position_eci=Vec3(INITIAL_RADIUS, 0.0, 0.0),
        velocity_eci=Vec3(0.0, INITIAL_SPEED, 0.0),
        attitude=Quaternion(1.0, 0.0, 0.0, 0.0),
        omega_body=Vec3(INITIAL_RATE, INITIAL_RATE, INITIAL_RATE),
    )


def default_duration(kind: ControllerKind) -> float:
    return TWO_STAGE_DURATION if kind == ControllerKind.TWO_STAGE else SHORT_DURATION


@dataclass(frozen=True)
class ScenarioConfig:
    initial_state: RigidBodyState = field(default_factory=default_initial_state)
    spacecraft: SpacecraftConfig = field(default_factory=lambda: preset("1u"))
    controller: ControllerSpec = field(default_factory=ControllerSpec)
    dt: float = DEFAULT_DT
    duration: Optional[float] = None  # None: picked from the controller kind
    mu: float = MU_EARTH
    output_decimation: int = 1

    def __post_init__(self):
        if self.duration is None:
            object.__setattr__(self, "duration", default_duration(self.controller.kind))
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValidationError(f"dt must be > 0, got {self.dt!r}")
        if not (math.isfinite(self.duration) and self.duration >= self.dt):
            raise ValidationError(f"duration must be >= dt, got {self.duration!r}")
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise ValidationError(f"mu must be > 0, got {self.mu!r}")
        if not (isinstance(self.output_decimation, int) and self.output_decimation >= 1):
            raise ValidationError(f"output_decimation must be an integer >= 1, got {self.output_decimation!r}")
        s = self.initial_state
        if abs(quat_norm(s.attitude) - 1.0) > 1e-9:
            raise ValidationError("initial quaternion must be unit norm within 1e-9")
        if not math.sqrt(sum(x * x for x in s.position_eci)) > 1.0:
            raise ValidationError("initial position must be away from the Earth's center")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    def with_changes(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)


def build_plant(scenario: ScenarioConfig, backend: Optional[str] = None):
    """Kernel plant for a scenario. ``backend`` is ``"cython"``, ``"python"`` or None."""
    sc = scenario.spacecraft
    ctrl = scenario.controller
    inertia = tuple(sc.inertia)
    gains = ctrl.resolved_gains(inertia) or (0.0, 0.0, 0.0)
    ts = ctrl.two_stage
    cls = _backend.plant_class(backend)
    return cls(
        inertia,
        scenario.mu,
        _LAW_CODES[ctrl.kind],
        tuple(gains),
        tuple(ctrl.rate_command),
        ts.p_command,
        ts.q_command_limit,
        ts.denominator_floor,
        sc.actuation.flags,
        sc.moment_limit if sc.moment_limit is not None else 0.0,
    )


def _record(t, y, moment, stage) -> TelemetryRecord:
    return TelemetryRecord(
        t=t,
        position_eci=Vec3(*y[0:3]),
        quaternion=Quaternion(*y[6:10]),
        velocity_eci=Vec3(*y[3:6]),
        omega_body=Vec3(*y[10:13]),
        moment_applied=Vec3(*moment),
        stage=stage,
    )


def propagate(scenario: ScenarioConfig, backend: Optional[str] = None, label: str = "") -> SimResult:
    """Fly the scenario and collect telemetry.

    Every step: the two-stage mode is frozen for the step, the plant
    integrates one RK4 step with the control law evaluated at each RK
    stage, and the mode transition is evaluated from the pre-step rates.
    Records land every ``output_decimation`` steps, plus the final state.

    A non-finite state stops the run; the records so far are kept and the
    result carries the error text.
    """
    plant = build_plant(scenario, backend)
    dt = scenario.dt
    n_steps = scenario.n_steps
    dec = scenario.output_decimation
    two_stage = scenario.controller.kind == ControllerKind.TWO_STAGE
    params = scenario.controller.two_stage

    stage = scenario.controller.initial_stage()
    y = scenario.initial_state.to_flat()
    result = SimResult(label=label)
    records = result.records
    step = plant.step
    for k in range(n_steps + 1):
        omega = y[10:13]
        if k % dec == 0 or k == n_steps:
            records.append(_record(k * dt, y, plant.moment(omega, stage), stage))
        if k == n_steps:
            break
        nxt = int(next_stage(omega, params, Stage(stage))) if two_stage else stage
        try:
            y = step(y, dt, stage)
        except DetumbleError as exc:
            result.error = f"t={k * dt:.6g}: {exc}"
            return result
        if not all(map(math.isfinite, y)):
            result.error = f"t={(k + 1) * dt:.6g}: non-finite state"
            return result
        stage = nxt
    return result
