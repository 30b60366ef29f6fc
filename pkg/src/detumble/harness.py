"""Controller-versus-configuration verdict matrix."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, TextIO, Tuple

from .control import ControllerKind
from .scenario_io import parse_scenario
from .simulation import ScenarioConfig, propagate
from .spacecraft import PRESET_NAMES
from .telemetry import (
    DEFAULT_SUCCESS_THRESHOLD,
    DEFAULT_WINDOW_FRACTION,
    DetumbleVerdict,
    SimResult,
    detumble_verdict,
)

__all__ = [
    "Cell",
    "EXPECTED_PATTERN",
    "MATRIX_CELLS",
    "VerdictMatrix",
    "DetumbleVerdict",
    "detumble_verdict",
    "run_cell",
    "run_matrix",
]

Cell = Tuple[str, str, str]  # (cubesat, controller, actuation)

_P = ControllerKind.PROPORTIONAL.value
_FL = ControllerKind.FEEDBACK_LINEARIZED.value
_TS = ControllerKind.TWO_STAGE.value

# Two-stage was never flown fully actuated, so those cells do not exist.
MATRIX_CELLS: Tuple[Cell, ...] = tuple(
    [(name, ctrl, "full") for name in PRESET_NAMES for ctrl in (_P, _FL)]
    + [(name, ctrl, "under") for name in PRESET_NAMES for ctrl in (_P, _FL, _TS)]
)

EXPECTED_PATTERN: Dict[Cell, bool] = {cell: cell[2] == "full" for cell in MATRIX_CELLS}
EXPECTED_PATTERN[("2u-sideways", _TS, "under")] = True
EXPECTED_PATTERN[("6u", _TS, "under")] = True

MATRIX_CSV_HEADER = "cubesat,controller,actuation,success,final_max_rate,time_to_converge,first_stage_switch"


def cell_scenario(cell: Cell, overrides: Optional[Mapping[str, object]] = None) -> ScenarioConfig:
    """Scenario for one cell: the default deployment state plus ``overrides``.

    ``overrides`` uses scenario-file keys; the cell's own keys win.
    """
    cubesat, controller, actuation = cell
    values = dict(overrides or {})
    values.update(cubesat=cubesat, controller=controller, actuation=actuation)
    text = "\n".join(f"{k} = {v}" for k, v in values.items())
    return parse_scenario(text)


def run_cell(cell: Cell, overrides=None, backend: Optional[str] = None) -> SimResult:
    return propagate(cell_scenario(cell, overrides), backend=backend, label="/".join(cell))


def _judge(args) -> Tuple[Cell, DetumbleVerdict]:
    cell, overrides, backend, threshold, window = args
    return cell, detumble_verdict(run_cell(cell, overrides, backend), threshold, window)


@dataclass
class VerdictMatrix:
    cells: Dict[Cell, DetumbleVerdict] = field(default_factory=dict)

    def __getitem__(self, cell: Cell) -> DetumbleVerdict:
        return self.cells[cell]

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    def pattern(self) -> Dict[Cell, bool]:
        return {cell: v.success for cell, v in self.cells.items()}

    def mismatches(self, expected: Mapping[Cell, bool] = EXPECTED_PATTERN):
        got = self.pattern()
        return sorted(cell for cell in set(got) | set(expected) if got.get(cell) != expected.get(cell))

    def to_csv(self, sink: TextIO) -> None:
        def opt(x):
            return "" if x is None else format(x, ".17g")

        lines = [MATRIX_CSV_HEADER]
        for (cubesat, controller, actuation), v in self.cells.items():
            lines.append(
                f"{cubesat},{controller},{actuation},{str(v.success).lower()},"
                f"{format(v.final_max_rate, '.17g')},{opt(v.time_to_converge)},{opt(v.first_stage_switch)}"
            )
        sink.write("\n".join(lines) + "\n")


def run_matrix(
    overrides: Optional[Mapping[str, object]] = None,
    backend: Optional[str] = None,
    success_threshold: float = DEFAULT_SUCCESS_THRESHOLD,
    window_fraction: float = DEFAULT_WINDOW_FRACTION,
    jobs: int = 1,
) -> VerdictMatrix:
    """Fly every populated cell and judge it.

    Cells are independent; with ``jobs > 1`` they run in worker processes.
    The result is the same either way.
    """
    tasks = [(cell, dict(overrides or {}), backend, success_threshold, window_fraction) for cell in MATRIX_CELLS]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            judged = list(pool.map(_judge, tasks))
    else:
        judged = [_judge(task) for task in tasks]
    return VerdictMatrix(dict(judged))
