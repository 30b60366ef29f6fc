"""CubeSat detumbling: rigid-body attitude dynamics and rate controllers."""

__version__ = "0.1.0"

from ._backend import BACKEND, available_backends
from .control import (
    ControllerKind,
    ControllerSpec,
    GainMatrix,
    RateCommand,
    Stage,
    TwoStageParams,
    feedback_linearized_command,
    proportional_command,
    two_stage_command,
    two_stage_q_command,
)
from .dynamics import GravityModel, RigidBodyState, rk4_step, rotational_acceleration
from .harness import VerdictMatrix, run_matrix
from .scenario_io import emit_plot, parse_scenario, read_csv, render_scenario, write_csv
from .simulation import ScenarioConfig, propagate
from .spacecraft import FULL, UNDER, SpacecraftConfig, apply_actuation, preset
from .telemetry import DetumbleVerdict, SimResult, detumble_verdict
