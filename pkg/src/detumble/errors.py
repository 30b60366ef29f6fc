"""Exception types raised across the package."""


class DetumbleError(Exception):
    """Base class for all package errors."""


class DegenerateQuaternion(DetumbleError, ValueError):
    """Quaternion too close to zero (or too far from unit norm) to use."""


class SingularInertia(DetumbleError, ValueError):
    """A principal moment of inertia is not strictly positive."""


class OriginSingularity(DetumbleError, ValueError):
    """Gravity evaluated at (or within 1 m of) the Earth's center."""


class NonFiniteState(DetumbleError, ArithmeticError):
    """Integration produced NaN or Inf."""


class UnknownPreset(DetumbleError, KeyError):
    """Spacecraft preset name not recognised."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown preset"


class ValidationError(DetumbleError, ValueError):
    """A configuration value violates its invariant."""


class ParseError(DetumbleError, ValueError):
    """Malformed scenario text.

    Carries the 1-based line number and the offending key (if any).
    """

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
