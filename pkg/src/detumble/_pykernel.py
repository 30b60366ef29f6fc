"""Pure-Python closed-loop plant. Fallback for the compiled ``_ckernel``.

The control laws are taken straight from :mod:`detumble.control` so this
backend doubles as the reference the compiled one is checked against.
"""

from __future__ import annotations

import math

from . import control
from .control import ControllerKind, ControllerSpec
from .errors import DegenerateQuaternion

LAW_NONE = 0
LAW_PROPORTIONAL = 1
LAW_FEEDBACK_LINEARIZED = 2
LAW_TWO_STAGE = 3

_LAW_KINDS = {
    LAW_NONE: ControllerKind.NONE,
    LAW_PROPORTIONAL: ControllerKind.PROPORTIONAL,
    LAW_FEEDBACK_LINEARIZED: ControllerKind.FEEDBACK_LINEARIZED,
    LAW_TWO_STAGE: ControllerKind.TWO_STAGE,
}


class Plant:
    """Spacecraft plus controller plus actuators, on flat 13-float states.

    State layout: ``(x, y, z, vx, vy, vz, q0, q1, q2, q3, p, q, r)``.
    ``limit <= 0`` means no saturation.
    """

    backend = "python"

    def __init__(self, inertia, mu, law, gains, rate_cmd, p_command, q_limit, den_floor, mask, limit):
        self.inertia = tuple(float(i) for i in inertia)
        self.mu = float(mu)
        self.law = int(law)
        self.gains = control.GainMatrix(*(float(g) for g in gains))
        self.mask = tuple(bool(m) for m in mask)
        self.limit = float(limit)
        self._spec = ControllerSpec(
            kind=_LAW_KINDS[self.law],
            gains=self.gains if self.law != LAW_NONE else None,
            rate_command=control.RateCommand(*rate_cmd),
            two_stage=control.TwoStageParams(p_command, 1.0, q_limit, den_floor),
        )

    def moment(self, omega, stage):
        """Applied moment: control law, then mask, then saturation."""
        m = control.command(self._spec, omega, self.inertia, stage, self.gains)
        lim = self.limit
        out = []
        for v, on in zip(m, self.mask):
            if not on:
                v = 0.0
            elif lim > 0.0:
                v = min(lim, max(-lim, v))
            out.append(v)
        return tuple(out)

    def derivative(self, y, stage):
        x, yy, z, vx, vy, vz, q0, q1, q2, q3, p, q, r = y
        ix, iy, iz = self.inertia
        l, m, n = self.moment((p, q, r), stage)
        rad = math.sqrt(x * x + yy * yy + z * z)
        k = -self.mu / (rad * rad * rad)
        return (
            vx, vy, vz,
            k * x, k * yy, k * z,
            0.5 * (-q1 * p - q2 * q - q3 * r),
            0.5 * (q0 * p + q2 * r - q3 * q),
            0.5 * (q0 * q - q1 * r + q3 * p),
            0.5 * (q0 * r + q1 * q - q2 * p),
            ((iy - iz) * q * r + l) / ix,
            ((iz - ix) * r * p + m) / iy,
            ((ix - iy) * p * q + n) / iz,
        )

    def step(self, y, dt, stage):
        """One RK4 step with the control law re-evaluated at every stage."""
        f = self.derivative
        h = 0.5 * dt
        k1 = f(y, stage)
        k2 = f(tuple(a + h * b for a, b in zip(y, k1)), stage)
        k3 = f(tuple(a + h * b for a, b in zip(y, k2)), stage)
        k4 = f(tuple(a + dt * b for a, b in zip(y, k3)), stage)
        h6 = dt / 6.0
        out = [a + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]
        nq = math.sqrt(out[6] * out[6] + out[7] * out[7] + out[8] * out[8] + out[9] * out[9])
        if not nq > 1e-9:
            raise DegenerateQuaternion(f"quaternion norm collapsed to {nq!r}")
        for i in range(6, 10):
            out[i] /= nq
        return tuple(out)
