"""The compiled and pure-Python plant kernels must agree."""

import os
import subprocess
import sys

import pytest

from detumble import _backend
from detumble.control import ControllerKind, ControllerSpec, GainMatrix, RateCommand
from detumble.harness import MATRIX_CELLS, run_cell
from detumble.simulation import ScenarioConfig, build_plant
from detumble.spacecraft import FULL, UNDER, preset

needs_cython = pytest.mark.skipif("cython" not in _backend.available_backends(), reason="extension not built")


@needs_cython
def test_default_backend_is_compiled():
    assert _backend.BACKEND == "cython"


def test_env_var_forces_fallback():
    code = "import detumble; print(detumble.BACKEND)"
    env = dict(os.environ, DETUMBLE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.plant_class("fortran")


@needs_cython
@pytest.mark.parametrize("cell", MATRIX_CELLS, ids=lambda c: "/".join(c))
def test_matrix_cells_identical(cell):
    a = run_cell(cell, backend="cython")
    b = run_cell(cell, backend="python")
    assert len(a.records) == len(b.records)
    for ra, rb in zip(a.records, b.records):
        assert ra.stage == rb.stage
        for x, y in zip(ra.omega_body + ra.moment_applied + ra.quaternion, rb.omega_body + rb.moment_applied + rb.quaternion):
            assert x == pytest.approx(y, rel=1e-13, abs=1e-15)


@needs_cython
@pytest.mark.parametrize("limit", [None, 1e-4])
@pytest.mark.parametrize("stage", [0, 1, 2])
def test_moment_and_derivative_agree(limit, stage):
    spec = ControllerSpec(ControllerKind.FEEDBACK_LINEARIZED, GainMatrix(-1.0, -2.0, -3.0), RateCommand(0.1, -0.1, 0.05))
    if stage:
        spec = ControllerSpec(ControllerKind.TWO_STAGE)
    scenario = ScenarioConfig(spacecraft=preset("6u", UNDER if stage else FULL, limit), controller=spec)
    py = build_plant(scenario, "python")
    cy = build_plant(scenario, "cython")
    y = scenario.initial_state.to_flat()
    for w in [(0.2, 0.2, 0.2), (-0.3, 0.1, 0.0), (0.0, 0.0, 0.0)]:
        assert py.moment(w, stage) == pytest.approx(cy.moment(w, stage), rel=1e-14, abs=1e-18)
    assert py.derivative(y, stage) == pytest.approx(cy.derivative(y, stage), rel=1e-14, abs=1e-18)
    assert py.step(y, 0.01, stage) == pytest.approx(cy.step(y, 0.01, stage), rel=1e-14, abs=1e-18)
