import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from detumble import mathcore as mc
from detumble.errors import DegenerateQuaternion
from detumble.mathcore import Quaternion

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
vec3s = st.tuples(finite, finite, finite)
quats = st.tuples(finite, finite, finite, finite).filter(lambda q: math.sqrt(sum(x * x for x in q)) > 1e-3)


def test_skew_zero():
    assert mc.skew((0.0, 0.0, 0.0)) == ((0.0,) * 3,) * 3


def test_skew_unit_cross():
    assert mc.matvec(mc.skew((1.0, 0.0, 0.0)), (0.0, 1.0, 0.0)) == (0.0, 0.0, 1.0)


def test_skew_hand_expanded():
    # a x b = (ay bz - az by, az bx - ax bz, ax by - ay bx)
    out = mc.matvec(mc.skew((0.2, 0.2, 0.2)), (0.1, 0.3, 0.5))
    assert out == pytest.approx((0.04, -0.08, 0.04), abs=1e-15)


@given(vec3s)
def test_skew_antisymmetric(w):
    s = mc.skew(w)
    st_ = mc.transpose(s)
    assert all(s[i][j] + st_[i][j] == 0.0 for i in range(3) for j in range(3))


@given(vec3s)
def test_skew_annihilates_own_axis(w):
    assert max(abs(c) for c in mc.matvec(mc.skew(w), w)) <= 1e-15 * max(1.0, mc.dot(w, w))


@given(vec3s, vec3s)
def test_skew_matches_numpy_cross(a, b):
    np.testing.assert_allclose(mc.matvec(mc.skew(a), b), np.cross(a, b), atol=1e-12)


@pytest.mark.parametrize(
    "q, expected",
    [
        ((1.0, 0.0, 0.0, 0.0), (1.0, 0.0, 0.0, 0.0)),
        ((2.0, 0.0, 0.0, 0.0), (1.0, 0.0, 0.0, 0.0)),
        ((1.0, 1.0, 1.0, 1.0), (0.5, 0.5, 0.5, 0.5)),
    ],
)
def test_quat_normalize_examples(q, expected):
    assert mc.quat_normalize(q) == expected


def test_quat_normalize_degenerate():
    with pytest.raises(DegenerateQuaternion):
        mc.quat_normalize((1e-10, 0.0, 0.0, 0.0))


@given(quats)
def test_quat_normalize_unit_and_direction(q):
    u = mc.quat_normalize(q)
    assert abs(mc.quat_norm(u) - 1.0) <= 1e-12
    n = mc.quat_norm(q)
    np.testing.assert_allclose(np.array(u) * n, q, atol=1e-12 * max(1.0, n))


def test_dcm_identity():
    assert mc.quat_to_dcm(Quaternion()) == mc.IDENTITY3


def test_dcm_quarter_turn_about_x():
    h = math.sqrt(0.5)
    r = mc.quat_to_dcm((h, h, 0.0, 0.0))
    np.testing.assert_allclose(mc.matvec(r, (0.0, 1.0, 0.0)), (0.0, 0.0, 1.0), atol=1e-15)


def test_dcm_rejects_non_unit():
    with pytest.raises(DegenerateQuaternion):
        mc.quat_to_dcm((2.0, 0.0, 0.0, 0.0))


@given(quats)
def test_dcm_proper_orthogonal(q):
    r = np.array(mc.quat_to_dcm(mc.quat_normalize(q)))
    np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-12)
    assert abs(np.linalg.det(r) - 1.0) <= 1e-12


@given(quats, vec3s)
def test_dcm_agrees_with_sandwich_product(q, v):
    # Independent route: q (0, v) q*
    u = mc.quat_normalize(q)
    rotated = mc.quat_multiply(mc.quat_multiply(u, (0.0, *v)), mc.quat_conjugate(u))
    np.testing.assert_allclose(mc.matvec(mc.quat_to_dcm(u), v), rotated[1:], atol=1e-12 * max(1.0, mc.norm(v)))


@pytest.mark.parametrize(
    "w, expected",
    [
        ((0.0, 0.0, 0.0), (0.0, 0.0, 0.0, 0.0)),
        ((0.2, 0.0, 0.0), (0.0, 0.1, 0.0, 0.0)),
        ((0.2, 0.2, 0.2), (0.0, 0.1, 0.1, 0.1)),
    ],
)
def test_quat_derivative_at_identity(w, expected):
    assert mc.quat_derivative(Quaternion(), w) == pytest.approx(expected, abs=1e-16)


@given(quats, vec3s)
def test_quat_derivative_orthogonal_to_q(q, w):
    u = mc.quat_normalize(q)
    qd = mc.quat_derivative(u, w)
    assert abs(sum(a * b for a, b in zip(u, qd))) <= 1e-12 * max(1.0, mc.norm(w))


@given(quats, vec3s)
def test_quat_derivative_is_half_hamilton_product(q, w):
    u = mc.quat_normalize(q)
    ref = mc.quat_multiply(u, (0.0, *w))
    np.testing.assert_allclose(mc.quat_derivative(u, w), 0.5 * np.array(ref), atol=1e-14)
