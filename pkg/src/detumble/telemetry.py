"""Run telemetry and the detumble verdict computed from it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .mathcore import Quaternion, Vec3

DEFAULT_SUCCESS_THRESHOLD = 0.01  # rad/s
DEFAULT_WINDOW_FRACTION = 0.1


@dataclass(frozen=True)
class TelemetryRecord:
    t: float
    position_eci: Vec3
    quaternion: Quaternion
    velocity_eci: Vec3
    omega_body: Vec3
    moment_applied: Vec3
    stage: int = 0  # 0 when the controller is not two-stage

    @property
    def max_rate(self) -> float:
        return max(abs(w) for w in self.omega_body)


@dataclass
class SimResult:
    records: List[TelemetryRecord] = field(default_factory=list)
    error: Optional[str] = None
    label: str = ""

    def __len__(self):
        return len(self.records)

    @property
    def ok(self) -> bool:
        return self.error is None

    def times(self) -> List[float]:
        return [rec.t for rec in self.records]

    def verdict(self, success_threshold=DEFAULT_SUCCESS_THRESHOLD, window_fraction=DEFAULT_WINDOW_FRACTION):
        return detumble_verdict(self, success_threshold, window_fraction)


@dataclass(frozen=True)
class DetumbleVerdict:
    success: bool
    final_max_rate: float
    time_to_converge: Optional[float] = None
    stage_switch_times: Tuple[float, ...] = ()
    error: Optional[str] = None

    @property
    def first_stage_switch(self) -> Optional[float]:
        return self.stage_switch_times[0] if self.stage_switch_times else None


def detumble_verdict(
    result: SimResult,
    success_threshold: float = DEFAULT_SUCCESS_THRESHOLD,
    window_fraction: float = DEFAULT_WINDOW_FRACTION,
) -> DetumbleVerdict:
    """Judge whether a run detumbled.

    Success means every body rate stays below ``success_threshold`` over the
    final ``window_fraction`` of the records. A run that aborted with an
    error never succeeds.
    """
    records = result.records
    if not records:
        raise ValueError("cannot judge an empty result")
    if not 0.0 < window_fraction <= 1.0:
        raise ValueError(f"window_fraction must be in (0, 1], got {window_fraction!r}")

    n = len(records)
    start = n - max(1, math.ceil(window_fraction * n))
    rates = [rec.max_rate for rec in records]
    final_max_rate = max(rates[start:])

    time_to_converge = None
    for i in range(n - 1, -1, -1):
        if not rates[i] < success_threshold:
            break
        time_to_converge = records[i].t

    switches = tuple(
        cur.t for prev, cur in zip(records, records[1:]) if cur.stage != prev.stage and prev.stage != 0
    )
    success = result.error is None and final_max_rate < success_threshold
    return DetumbleVerdict(success, final_max_rate, time_to_converge, switches, result.error)
