"""Six degree of freedom rigid-body equations of motion.

Rotation follows Euler's equations for a diagonal inertia tensor,

    I w_dot = M - w x (I w),

attitude follows scalar-first quaternion kinematics, and translation is a
point mass in a point-mass Earth gravity field, all in ECI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import mathcore as mc
from .errors import NonFiniteState, OriginSingularity, SingularInertia
from .mathcore import Quaternion, Vec3

MU_EARTH = 3.986004418e14  # m^3/s^2
EARTH_RADIUS = 6371393.0  # m

STATE_SIZE = 13


@dataclass(frozen=True)
class GravityModel:
    mu: float = MU_EARTH

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise ValueError(f"mu must be > 0, got {self.mu!r}")


@dataclass(frozen=True)
class RigidBodyState:
    position_eci: Vec3 = Vec3()
    velocity_eci: Vec3 = Vec3()
    attitude: Quaternion = Quaternion()
    omega_body: Vec3 = Vec3()

    def to_flat(self) -> tuple:
        """Pack into 13 floats: position, velocity, quaternion, rates."""
        return (*self.position_eci, *self.velocity_eci, *self.attitude, *self.omega_body)

    @classmethod
    def from_flat(cls, y) -> "RigidBodyState":
        return cls(Vec3(*y[0:3]), Vec3(*y[3:6]), Quaternion(*y[6:10]), Vec3(*y[10:13]))


@dataclass(frozen=True)
class StateDerivative:
    position_rate: Vec3
    velocity_rate: Vec3
    attitude_rate: Quaternion
    omega_rate: Vec3

    def to_flat(self) -> tuple:
        return (*self.position_rate, *self.velocity_rate, *self.attitude_rate, *self.omega_rate)


def principal_moments(inertia):
    ix, iy, iz = inertia
    if not (ix > 0.0 and iy > 0.0 and iz > 0.0):
        raise SingularInertia(f"principal moments must be > 0, got {(ix, iy, iz)!r}")
    return ix, iy, iz


def rotational_acceleration(omega_body, inertia, moment_body) -> Vec3:
    """Body angular acceleration ``I^-1 (M - S(w) I w)`` for diagonal ``I``.

    ``inertia`` is anything iterable as ``(Ix, Iy, Iz)``.
    """
    ix, iy, iz = principal_moments(inertia)
    p, q, r = omega_body
    l, m, n = moment_body
    return Vec3(
        ((iy - iz) * q * r + l) / ix,
        ((iz - ix) * r * p + m) / iy,
        ((ix - iy) * p * q + n) / iz,
    )


def gravitational_acceleration(position_eci, g: GravityModel = GravityModel()) -> Vec3:
    r = mc.norm(position_eci)
    if not r > 1.0:
        raise OriginSingularity(f"|r| = {r!r} m is too close to the origin")
    k = -g.mu / (r * r * r)
    return mc.scale(k, position_eci)


def state_derivative(state: RigidBodyState, config, moment_body, g: GravityModel = GravityModel()) -> StateDerivative:
    """Full 13-state derivative for a spacecraft under body moment ``moment_body``.

    ``config`` is a SpacecraftConfig (only its inertia is used).
    """
    return StateDerivative(
        position_rate=Vec3(*state.velocity_eci),
        velocity_rate=gravitational_acceleration(state.position_eci, g),
        attitude_rate=mc.quat_derivative(state.attitude, state.omega_body),
        omega_rate=rotational_acceleration(state.omega_body, config.inertia, moment_body),
    )


def _axpy(y, h, k):
    return tuple(a + h * b for a, b in zip(y, k))


def rk4_step(
    state: RigidBodyState,
    dt: float,
    derivative: Callable[[RigidBodyState], StateDerivative],
) -> RigidBodyState:
    """Advance ``state`` by one classic Runge-Kutta step and renormalise the attitude.

    ``derivative`` is evaluated at the four RK stages. Whatever it closes
    over (a held moment, a control law) decides how the input behaves
    inside the step.
    """
    if not dt > 0.0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    y = state.to_flat()
    f = lambda flat: derivative(RigidBodyState.from_flat(flat)).to_flat()  # noqa: E731
    k1 = f(y)
    k2 = f(_axpy(y, 0.5 * dt, k1))
    k3 = f(_axpy(y, 0.5 * dt, k2))
    k4 = f(_axpy(y, dt, k3))
    h6 = dt / 6.0
    out = tuple(a + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4))
    if not mc.is_finite(out):
        raise NonFiniteState("RK4 step produced a non-finite state")
    new = RigidBodyState.from_flat(out)
    return RigidBodyState(new.position_eci, new.velocity_eci, mc.quat_normalize(new.attitude), new.omega_body)


def held_moment_derivative(config, moment_body, g: GravityModel = GravityModel()):
    """Derivative evaluator with a constant (zero-order hold) body moment."""
    return lambda s: state_derivative(s, config, moment_body, g)


def angular_momentum_eci(state: RigidBodyState, inertia) -> Vec3:
    h_body = mc.hadamard(tuple(inertia), state.omega_body)
    return mc.matvec(mc.quat_to_dcm(state.attitude), h_body)


def rotational_energy(omega_body, inertia) -> float:
    return 0.5 * mc.dot(mc.hadamard(tuple(inertia), omega_body), omega_body)
