import pytest
from hypothesis import given
from hypothesis import strategies as st

from detumble.errors import SingularInertia, UnknownPreset, ValidationError
from detumble.spacecraft import (
    FULL,
    UNDER,
    ActuationMask,
    InertiaTensor,
    SpacecraftConfig,
    apply_actuation,
    preset,
)

# Printed reference values: mass, Ix, Iy, Iz
TABLE = {
    "1u": (2, 0.0033, 0.0033, 0.0033),
    "2u-upright": (4, 0.0167, 0.0167, 0.0067),
    "2u-sideways": (4, 0.0067, 0.0167, 0.0167),
    "6u": (12, 0.13, 0.10, 0.05),
}


@pytest.mark.parametrize("name", sorted(TABLE))
def test_presets_match_table(name):
    sc = preset(name)
    assert (sc.mass, sc.inertia.i_x, sc.inertia.i_y, sc.inertia.i_z) == TABLE[name]
    assert sc.name == name


@pytest.mark.parametrize("alias, name", [("1U", "1u"), ("2U-Sideways", "2u-sideways"), (" 6U ", "6u"), ("2u_upright", "2u-upright")])
def test_preset_names_case_insensitive(alias, name):
    assert preset(alias).name == name


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        preset("3u")


def test_inertia_validation():
    with pytest.raises(SingularInertia):
        InertiaTensor(0.0, 1.0, 1.0)
    with pytest.raises(ValidationError):
        InertiaTensor(1.0, 1.0, 3.0)


def test_mask_needs_an_axis():
    with pytest.raises(ValidationError):
        ActuationMask(False, False, False)


def test_underactuated_zeroes_yaw():
    sc = preset("1u", UNDER)
    assert apply_actuation((-0.4, -0.4, -0.4), sc) == (-0.4, -0.4, 0.0)


def test_fully_actuated_unlimited_is_identity():
    assert apply_actuation((-0.4, -0.4, -0.4), preset("1u", FULL)) == (-0.4, -0.4, -0.4)


def test_saturation():
    sc = preset("1u", FULL, moment_limit=0.1)
    assert apply_actuation((5.0, -5.0, 0.0), sc) == (0.1, -0.1, 0.0)


def test_bad_limit_and_mass():
    with pytest.raises(ValidationError):
        preset("1u", moment_limit=0.0)
    with pytest.raises(ValidationError):
        SpacecraftConfig("x", -1.0, InertiaTensor(1, 1, 1))


moments = st.tuples(*[st.floats(-10, 10, allow_nan=False)] * 3)
masks = st.tuples(st.booleans(), st.booleans(), st.booleans()).filter(any)
limits = st.one_of(st.none(), st.floats(1e-3, 5.0))


@given(moments, masks, limits)
def test_apply_actuation_idempotent(m, mask, limit):
    sc = SpacecraftConfig("t", 1.0, InertiaTensor(1, 1, 1), ActuationMask(*mask), limit)
    once = apply_actuation(m, sc)
    assert apply_actuation(once, sc) == once
    for value, on in zip(once, mask):
        if not on:
            assert value == 0.0
        elif limit is not None:
            assert abs(value) <= limit
