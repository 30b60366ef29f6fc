import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from detumble.harness import EXPECTED_PATTERN, MATRIX_CELLS, MATRIX_CSV_HEADER, cell_scenario, run_cell, run_matrix
from detumble.mathcore import Quaternion, Vec3
from detumble.scenario_io import write_csv
from detumble.telemetry import SimResult, TelemetryRecord, detumble_verdict


def _rec(t, w, stage=0):
    return TelemetryRecord(t, Vec3(), Quaternion(), Vec3(), Vec3(*w), Vec3(), stage)


def test_verdict_all_zero():
    v = detumble_verdict(SimResult([_rec(0.1 * k, (0, 0, 0)) for k in range(20)]))
    assert v.success and v.final_max_rate == 0.0 and v.time_to_converge == 0.0


def test_verdict_time_to_converge_and_switches():
    recs = [_rec(k * 1.0, (0.5 if k < 4 else 0.001, 0, 0), 1 if k < 3 else 2) for k in range(10)]
    recs[6] = _rec(6.0, (0.02, 0, 0), 1)
    v = detumble_verdict(SimResult(recs))
    assert v.success
    assert v.time_to_converge == 7.0
    assert v.stage_switch_times == (3.0, 6.0, 7.0)
    assert v.first_stage_switch == 3.0


def test_verdict_error_never_succeeds():
    v = detumble_verdict(SimResult([_rec(0, (0, 0, 0))], error="boom"))
    assert not v.success and v.error == "boom"


def test_verdict_argument_checks():
    with pytest.raises(ValueError):
        detumble_verdict(SimResult())
    with pytest.raises(ValueError):
        detumble_verdict(SimResult([_rec(0, (0, 0, 0))]), window_fraction=0.0)


def test_verdict_underactuated_proportional_1u():
    v = detumble_verdict(run_cell(("1u", "proportional", "under")))
    assert not v.success
    assert v.final_max_rate == pytest.approx(0.2, abs=1e-9)


def test_verdict_two_stage_sideways():
    v = detumble_verdict(run_cell(("2u-sideways", "two-stage", "under")))
    assert v.success
    assert v.first_stage_switch < 5.0


rates = st.lists(st.floats(0, 0.5), min_size=2, max_size=40)


@given(rates, st.floats(1e-4, 0.5), st.floats(1e-4, 0.5), st.floats(0.05, 1.0))
def test_verdict_monotone_in_threshold(values, a, b, window):
    lo, hi = sorted((a, b))
    res = SimResult([_rec(0.1 * k, (v, 0, 0)) for k, v in enumerate(values)])
    if detumble_verdict(res, lo, window).success:
        assert detumble_verdict(res, hi, window).success


def test_matrix_cells_shape():
    assert len(MATRIX_CELLS) == 20
    assert sum(1 for c in MATRIX_CELLS if c[2] == "full") == 8
    assert not any(c[1] == "two-stage" and c[2] == "full" for c in MATRIX_CELLS)
    assert sum(EXPECTED_PATTERN.values()) == 10


def test_cell_scenario_overrides():
    cfg = cell_scenario(("6u", "two-stage", "under"), {"dt": 0.02, "cubesat": "1u"})
    assert cfg.dt == 0.02 and cfg.spacecraft.name == "6u" and cfg.duration == 20.0


@pytest.fixture(scope="module")
def matrix():
    return run_matrix()


def test_matrix_pattern(matrix):
    assert matrix.mismatches() == []
    assert len(matrix) == 20


def test_matrix_deterministic(matrix):
    again = run_matrix(jobs=2)
    assert again.cells == matrix.cells
    for cell in [("6u", "two-stage", "under"), ("2u-upright", "proportional", "full")]:
        a, b = io.StringIO(), io.StringIO()
        write_csv(run_cell(cell), a)
        write_csv(run_cell(cell), b)
        assert a.getvalue() == b.getvalue()


def test_matrix_csv(matrix):
    buf = io.StringIO()
    matrix.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == MATRIX_CSV_HEADER
    assert len(lines) == 21
    row = dict(zip(MATRIX_CSV_HEADER.split(","), lines[1].split(",")))
    assert row["success"] in ("true", "false")
    two_stage = [ln for ln in lines if ",two-stage," in ln and "2u-sideways" in ln][0].split(",")
    assert float(two_stage[-1]) < 5.0
