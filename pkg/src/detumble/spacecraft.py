"""CubeSat physical configuration: inertia presets, actuation mask, saturation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import SingularInertia, UnknownPreset, ValidationError
from .mathcore import Vec3


@dataclass(frozen=True)
class InertiaTensor:
    """Diagonal principal inertia in kg*m^2."""

    i_x: float
    i_y: float
    i_z: float

    def __post_init__(self):
        for name in ("i_x", "i_y", "i_z"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise SingularInertia(f"{name} must be finite and > 0, got {value!r}")
        a, b, c = self.i_x, self.i_y, self.i_z
        if a + b < c or b + c < a or c + a < b:
            raise ValidationError(f"inertia ({a}, {b}, {c}) violates the triangle inequality")

    def as_vec(self) -> Vec3:
        return Vec3(self.i_x, self.i_y, self.i_z)

    def __iter__(self):
        return iter((self.i_x, self.i_y, self.i_z))


@dataclass(frozen=True)
class ActuationMask:
    roll_enabled: bool = True
    pitch_enabled: bool = True
    yaw_enabled: bool = True

    def __post_init__(self):
        if not (self.roll_enabled or self.pitch_enabled or self.yaw_enabled):
            raise ValidationError("at least one axis must be actuated")

    @property
    def flags(self):
        return (self.roll_enabled, self.pitch_enabled, self.yaw_enabled)

    @property
    def rank(self) -> int:
        return sum(self.flags)


FULL = ActuationMask(True, True, True)
# Underactuated always means no yaw torque.
UNDER = ActuationMask(True, True, False)

ACTUATIONS = {"full": FULL, "under": UNDER}


def actuation_name(mask: ActuationMask) -> str:
    for name, value in ACTUATIONS.items():
        if value == mask:
            return name
    return "".join(axis if on else "-" for axis, on in zip("xyz", mask.flags))


def parse_actuation(name: str) -> ActuationMask:
    key = name.strip().lower()
    aliases = {"fully": "full", "fully-actuated": "full", "underactuated": "under"}
    key = aliases.get(key, key)
    try:
        return ACTUATIONS[key]
    except KeyError:
        raise ValidationError(f"unknown actuation {name!r}; expected 'full' or 'under'") from None


@dataclass(frozen=True)
class SpacecraftConfig:
    name: str
    mass: float
    inertia: InertiaTensor
    actuation: ActuationMask = FULL
    moment_limit: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass > 0.0):
            raise ValidationError(f"mass must be > 0, got {self.mass!r}")
        if self.moment_limit is not None and not self.moment_limit > 0.0:
            raise ValidationError(f"moment_limit must be > 0, got {self.moment_limit!r}")


# name -> (mass kg, Ix, Iy, Iz kg*m^2)
PRESETS = {
    "1u": (2.0, 0.0033, 0.0033, 0.0033),
    "2u-upright": (4.0, 0.0167, 0.0167, 0.0067),
    "2u-sideways": (4.0, 0.0067, 0.0167, 0.0167),
    "6u": (12.0, 0.13, 0.10, 0.05),
}

PRESET_NAMES = tuple(PRESETS)


def canonical_preset(name: str) -> str:
    key = name.strip().lower().replace("_", "-").replace(" ", "")
    key = key.replace(",", "-")
    if key not in PRESETS:
        raise UnknownPreset(f"unknown cubesat preset {name!r}; expected one of {', '.join(PRESET_NAMES)}")
    return key


def preset(name: str, actuation: ActuationMask = FULL, moment_limit: Optional[float] = None) -> SpacecraftConfig:
    key = canonical_preset(name)
    mass, ix, iy, iz = PRESETS[key]
    return SpacecraftConfig(key, mass, InertiaTensor(ix, iy, iz), actuation, moment_limit)


def apply_actuation(commanded, config: SpacecraftConfig) -> Vec3:
    """Zero the disabled axes, then clamp survivors to +/- moment_limit."""
    limit = config.moment_limit
    out = []
    for value, enabled in zip(commanded, config.actuation.flags):
        if not enabled:
            value = 0.0
        elif limit is not None:
            value = min(limit, max(-limit, value))
        out.append(value)
    return Vec3(*out)
