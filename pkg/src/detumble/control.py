"""Angular-rate controllers for detumbling.

Three laws are provided:

* proportional: ``M = K (w - w_c)``
* feedback linearized: ``M = I gamma + S(w) I w`` with ``gamma = K (w - w_c)``,
  so the closed loop is exactly ``w_dot = K (w - w_c)``
* two-stage, for a vehicle with no yaw torque. Stage 1 holds a nonzero
  roll rate and steers pitch rate so that the gyroscopic coupling drains
  yaw rate. Stage 2 then brings roll and pitch to rest.

The gain sign convention makes stabilising gains negative.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple

from .errors import ValidationError
from .mathcore import Vec3
from .dynamics import principal_moments


class GainMatrix(NamedTuple):
    """Diagonal of the gain matrix K."""

    k_pp: float
    k_pq: float
    k_pr: float

    def validate(self) -> "GainMatrix":
        if not all(math.isfinite(k) and k < 0.0 for k in self):
            raise ValidationError(f"gains must all be finite and < 0, got {tuple(self)!r}")
        return self


class RateCommand(NamedTuple):
    p_c: float = 0.0
    q_c: float = 0.0
    r_c: float = 0.0


class PseudoControl(NamedTuple):
    gamma_p: float
    gamma_q: float
    gamma_r: float


class Stage(enum.IntEnum):
    STAGE1 = 1
    STAGE2 = 2


# The FSM state of the two-stage law is just the current stage.
TwoStageState = Stage


@dataclass(frozen=True)
class TwoStageParams:
    p_command: float = 0.5
    epsilon: float = 0.01
    q_command_limit: float = 1.0
    denominator_floor: float = 1e-6

    def __post_init__(self):
        if not (math.isfinite(self.p_command) and abs(self.p_command) > 0.0):
            raise ValidationError("p_command must be nonzero")
        if not self.epsilon > 0.0:
            raise ValidationError("epsilon must be > 0")
        if not self.q_command_limit > 0.0:
            raise ValidationError("q_command_limit must be > 0")
        if not self.denominator_floor > 0.0:
            raise ValidationError("denominator_floor must be > 0")


def pseudo_control(omega, omega_cmd, gains) -> PseudoControl:
    return PseudoControl(
        gains[0] * (omega[0] - omega_cmd[0]),
        gains[1] * (omega[1] - omega_cmd[1]),
        gains[2] * (omega[2] - omega_cmd[2]),
    )


def proportional_command(omega, omega_cmd, gains) -> Vec3:
    return Vec3(*pseudo_control(omega, omega_cmd, gains))


def feedback_linearized_command(omega, omega_cmd, gains, inertia) -> Vec3:
    ix, iy, iz = principal_moments(inertia)
    p, q, r = omega
    gp, gq, gr = pseudo_control(omega, omega_cmd, gains)
    # S(w) I w = w x (I w), written out for diagonal I.
    return Vec3(
        ix * gp + (iz - iy) * q * r,
        iy * gq + (ix - iz) * r * p,
        iz * gr + (iy - ix) * p * q,
    )


def two_stage_q_command(p, r, gains, inertia, params: TwoStageParams) -> float:
    """Pitch-rate command that makes the yaw coupling act as ``r_dot = K_pr r``.

    The ``p (Ix - Iy)`` denominator is floored away from zero, keeping its
    sign (zero counts as positive), and the result is clamped to
    ``+/- q_command_limit``.
    """
    ix, iy, iz = principal_moments(inertia)
    gamma_r = gains[2] * (r - 0.0)
    den = p * (ix - iy)
    floor = params.denominator_floor
    if abs(den) < floor:
        den = -floor if den < 0.0 else floor
    q_c = iz * gamma_r / den
    lim = params.q_command_limit
    return min(lim, max(-lim, q_c))


def two_stage_moment(omega, gains, inertia, params: TwoStageParams, stage: Stage) -> Vec3:
    """Roll and pitch moment for the given stage. Yaw moment is always 0."""
    ix, iy, iz = principal_moments(inertia)
    p, q, r = omega
    if stage == Stage.STAGE1:
        p_c = params.p_command
        q_c = two_stage_q_command(p, r, gains, inertia, params)
    else:
        p_c = 0.0
        q_c = 0.0
    gamma_p = gains[0] * (p - p_c)
    gamma_q = gains[1] * (q - q_c)
    l = ix * gamma_p - q * r * (iy - iz)
    # Pitch coupling from Euler's equations is (Iz - Ix) r p.
    m = iy * gamma_q - p * r * (iz - ix)
    return Vec3(l, m, 0.0)


def next_stage(omega, params: TwoStageParams, stage: Stage) -> Stage:
    p, q, r = omega
    eps = params.epsilon
    if stage == Stage.STAGE1:
        if abs(r) < eps:
            return Stage.STAGE2
    elif abs(p) < eps and abs(q) < eps and abs(r) > eps:
        return Stage.STAGE1
    return Stage(stage)


def two_stage_command(omega, gains, inertia, params: TwoStageParams, fsm: Stage) -> Tuple[Vec3, Stage]:
    """Moment for the current stage plus the stage to use next.

    The moment is computed first, from the current state and stage; the
    transition is then checked against the same state.
    """
    moment = two_stage_moment(omega, gains, inertia, params, fsm)
    return moment, next_stage(omega, params, fsm)


class ControllerKind(str, enum.Enum):
    NONE = "none"
    PROPORTIONAL = "proportional"
    FEEDBACK_LINEARIZED = "feedback-linearized"
    TWO_STAGE = "two-stage"

    @classmethod
    def parse(cls, text: str) -> "ControllerKind":
        key = text.strip().lower().replace("_", "-")
        aliases = {
            "p": cls.PROPORTIONAL,
            "prop": cls.PROPORTIONAL,
            "fl": cls.FEEDBACK_LINEARIZED,
            "fbl": cls.FEEDBACK_LINEARIZED,
            "feedback": cls.FEEDBACK_LINEARIZED,
            "two": cls.TWO_STAGE,
            "twostage": cls.TWO_STAGE,
            "ts": cls.TWO_STAGE,
            "off": cls.NONE,
            "torque-free": cls.NONE,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValidationError(f"unknown controller {text!r}") from None

    @property
    def short(self) -> str:
        return {"none": "none", "proportional": "prop", "feedback-linearized": "fl", "two-stage": "two-stage"}[self.value]


DEFAULT_PSEUDO_GAIN = -2.0  # 1/s
# Slower yaw pseudo-gain lets roll settle on its command before the stage switch.
DEFAULT_TWO_STAGE_GAINS = GainMatrix(-2.0, -2.0, -0.5)


def default_gains(kind: ControllerKind, inertia) -> Optional[GainMatrix]:
    """Gains used when a scenario does not give any.

    Proportional gains are a moment per unit rate, so they are scaled by the
    principal inertia to give the same 0.5 s time constant as the other laws.
    """
    if kind == ControllerKind.PROPORTIONAL:
        return GainMatrix(*(DEFAULT_PSEUDO_GAIN * i for i in inertia))
    if kind == ControllerKind.FEEDBACK_LINEARIZED:
        return GainMatrix(DEFAULT_PSEUDO_GAIN, DEFAULT_PSEUDO_GAIN, DEFAULT_PSEUDO_GAIN)
    if kind == ControllerKind.TWO_STAGE:
        return DEFAULT_TWO_STAGE_GAINS
    return None


@dataclass(frozen=True)
class ControllerSpec:
    kind: ControllerKind = ControllerKind.PROPORTIONAL
    gains: Optional[GainMatrix] = None
    rate_command: RateCommand = RateCommand()
    two_stage: TwoStageParams = field(default_factory=TwoStageParams)

    def __post_init__(self):
        if self.gains is not None:
            object.__setattr__(self, "gains", GainMatrix(*self.gains).validate())

    def resolved_gains(self, inertia) -> Optional[GainMatrix]:
        if self.kind == ControllerKind.NONE:
            return None
        return self.gains if self.gains is not None else default_gains(self.kind, inertia)

    def initial_stage(self) -> int:
        return int(Stage.STAGE1) if self.kind == ControllerKind.TWO_STAGE else 0


def command(spec: ControllerSpec, omega, inertia, stage: int, gains: Optional[GainMatrix] = None) -> Vec3:
    """Commanded moment for any controller kind (before actuation limits)."""
    if spec.kind == ControllerKind.NONE:
        return Vec3()
    if gains is None:
        gains = spec.resolved_gains(inertia)
    if spec.kind == ControllerKind.PROPORTIONAL:
        return proportional_command(omega, spec.rate_command, gains)
    if spec.kind == ControllerKind.FEEDBACK_LINEARIZED:
        return feedback_linearized_command(omega, spec.rate_command, gains, inertia)
    return two_stage_moment(omega, gains, inertia, spec.two_stage, Stage(stage))
