"""Small fixed-size vector, matrix and quaternion arithmetic.

Everything here works on plain float tuples. For 3- and 4-element
quantities this is considerably faster than going through numpy, and
the values stay immutable.

Quaternions are scalar-first ``(q0, q1, q2, q3)`` Hamilton quaternions
describing the body-to-ECI rotation, so a body vector ``v_b`` maps to
ECI as ``q ⊗ (0, v_b) ⊗ q*`` and the kinematics are
``q_dot = 0.5 * q ⊗ (0, w_body)``.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Tuple

from .errors import DegenerateQuaternion

NORM_FLOOR = 1e-9


class Vec3(NamedTuple):
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0


class Quaternion(NamedTuple):
    q0: float = 1.0
    q1: float = 0.0
    q2: float = 0.0
    q3: float = 0.0


# Row-major 3x3 matrix: three row vectors.
Mat3 = Tuple[Vec3, Vec3, Vec3]

IDENTITY3: Mat3 = (Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, 1.0))


def add(a, b) -> Vec3:
    return Vec3(a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub(a, b) -> Vec3:
    return Vec3(a[0] - b[0], a[1] - b[1], a[2] - b[2])


def scale(s: float, a) -> Vec3:
    return Vec3(s * a[0], s * a[1], s * a[2])


def hadamard(a, b) -> Vec3:
    """Componentwise product, i.e. ``diag(a) @ b``."""
    return Vec3(a[0] * b[0], a[1] * b[1], a[2] * b[2])


def dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a, b) -> Vec3:
    return Vec3(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm(a) -> float:
    return math.sqrt(dot(a, a))


def is_finite(values) -> bool:
    return all(math.isfinite(v) for v in values)


def skew(w) -> Mat3:
    """Cross-product matrix: ``matvec(skew(w), v) == cross(w, v)``."""
    x, y, z = w
    return (
        Vec3(0.0, -z, y),
        Vec3(z, 0.0, -x),
        Vec3(-y, x, 0.0),
    )


def matvec(m: Mat3, v) -> Vec3:
    return Vec3(dot(m[0], v), dot(m[1], v), dot(m[2], v))


def transpose(m: Mat3) -> Mat3:
    return (
        Vec3(m[0][0], m[1][0], m[2][0]),
        Vec3(m[0][1], m[1][1], m[2][1]),
        Vec3(m[0][2], m[1][2], m[2][2]),
    )


def matmul(a: Mat3, b: Mat3) -> Mat3:
    bt = transpose(b)
    return tuple(Vec3(dot(row, bt[0]), dot(row, bt[1]), dot(row, bt[2])) for row in a)


def det(m: Mat3) -> float:
    return dot(m[0], cross(m[1], m[2]))


def diag(d) -> Mat3:
    return (Vec3(d[0], 0.0, 0.0), Vec3(0.0, d[1], 0.0), Vec3(0.0, 0.0, d[2]))


def quat_norm(q) -> float:
    return math.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3])


def quat_normalize(q) -> Quaternion:
    n = quat_norm(q)
    if not n > NORM_FLOOR:
        raise DegenerateQuaternion(f"quaternion norm {n!r} is not above {NORM_FLOOR}")
    return Quaternion(q[0] / n, q[1] / n, q[2] / n, q[3] / n)


def quat_multiply(a, b) -> Quaternion:
    """Hamilton product ``a ⊗ b``."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def quat_conjugate(q) -> Quaternion:
    return Quaternion(q[0], -q[1], -q[2], -q[3])


def quat_to_dcm(q) -> Mat3:
    """Rotation matrix taking body-frame vectors into ECI.

    Raises DegenerateQuaternion unless ``q`` is unit-norm within 1e-9.
    """
    n = quat_norm(q)
    if abs(n - 1.0) > 1e-9:
        raise DegenerateQuaternion(f"quaternion is not unit norm (|q| = {n!r})")
    q0, q1, q2, q3 = q
    return (
        Vec3(q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2.0 * (q1 * q2 - q0 * q3), 2.0 * (q1 * q3 + q0 * q2)),
        Vec3(2.0 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3, 2.0 * (q2 * q3 - q0 * q1)),
        Vec3(2.0 * (q1 * q3 - q0 * q2), 2.0 * (q2 * q3 + q0 * q1), q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3),
    )


def quat_derivative(q, w_body) -> Quaternion:
    """Attitude rate ``0.5 * q ⊗ (0, w_body)``."""
    q0, q1, q2, q3 = q
    wx, wy, wz = w_body
    return Quaternion(
        0.5 * (-q1 * wx - q2 * wy - q3 * wz),
        0.5 * (q0 * wx + q2 * wz - q3 * wy),
        0.5 * (q0 * wy - q1 * wz + q3 * wx),
        0.5 * (q0 * wz + q1 * wy - q2 * wx),
    )
