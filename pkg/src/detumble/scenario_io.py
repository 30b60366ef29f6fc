"""Scenario text files, telemetry CSV and SVG plots.

Scenario format
---------------
UTF-8, one ``key = value`` per line, ``#`` starts a comment, keys are
case-insensitive. Anything omitted takes its default.

=====================  ==========================================  ===============
key                    meaning                                     default
=====================  ==========================================  ===============
x0, y0, z0             initial ECI position (m)                    6871393, 0, 0
q0, q1, q2, q3         initial body-to-ECI quaternion              1, 0, 0, 0
u0, v0, w0             initial velocity (m/s), taken as ECI         0, 7616.18, 0
wx0, wy0, wz0          initial body rates p, q, r (rad/s)          0.2, 0.2, 0.2
cubesat                1u | 2u-upright | 2u-sideways | 6u          1u
mass, ix, iy, iz       override preset mass / principal inertia
actuation              full | under                                full
moment_limit           per-axis saturation (N*m), ``none`` = off    none
controller             proportional | fl | two-stage | none         proportional
k_pp, k_pq, k_pr       gain diagonal (all three or none)           per controller
wx_cmd, wy_cmd, wz_cmd rate command for proportional / FL          0, 0, 0
p_command              two-stage roll-rate command (rad/s)         0.5
epsilon                two-stage switch threshold (rad/s)          0.01
q_command_limit        two-stage pitch-command clamp (rad/s)       1.0
denominator_floor      two-stage q_C denominator guard             1e-6
dt                     integration step (s)                        0.01
duration               run length (s)                              10, or 20 for two-stage
mu                     gravitational parameter (m^3/s^2)           3.986004418e14
decimation             record every Nth step                       1
=====================  ==========================================  ===============

``u0, v0, w0`` are the deployment velocities. With the default identity
attitude body and ECI axes coincide, so they are used as ECI velocity
unchanged, whatever the quaternion.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Dict, List, TextIO, Tuple

from .control import ControllerKind, ControllerSpec, GainMatrix, RateCommand, TwoStageParams
from .dynamics import EARTH_RADIUS, MU_EARTH, RigidBodyState
from .errors import DetumbleError, ParseError, ValidationError
from .mathcore import Quaternion, Vec3
from .simulation import ScenarioConfig, default_initial_state
from .spacecraft import InertiaTensor, SpacecraftConfig, actuation_name, parse_actuation, preset
from .telemetry import SimResult, TelemetryRecord

_STATE_KEYS = ("x0", "y0", "z0", "u0", "v0", "w0", "q0", "q1", "q2", "q3", "wx0", "wy0", "wz0")
_FLOAT_KEYS = set(_STATE_KEYS) | {
    "mass", "ix", "iy", "iz", "k_pp", "k_pq", "k_pr", "wx_cmd", "wy_cmd", "wz_cmd",
    "p_command", "epsilon", "q_command_limit", "denominator_floor", "dt", "duration", "mu",
}
_TEXT_KEYS = {"cubesat", "actuation", "controller", "moment_limit", "decimation"}
KNOWN_KEYS = frozenset(_FLOAT_KEYS | _TEXT_KEYS)


def _tokenize(text: str) -> Dict[str, Tuple[str, int]]:
    values: Dict[str, Tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in KNOWN_KEYS:
            raise ParseError("unknown key", line=lineno, key=key)
        if not value:
            raise ParseError("missing value", line=lineno, key=key)
        if key in values:
            raise ParseError("duplicate key", line=lineno, key=key)
        values[key] = (value, lineno)
    return values


def scenario_values(text: str) -> Dict[str, str]:
    """Raw ``key -> value`` strings of a scenario, in file order, unvalidated."""
    return {key: value for key, (value, _) in _tokenize(text).items()}


def parse_scenario(text) -> ScenarioConfig:
    """Parse scenario text (a string or a readable stream)."""
    if not isinstance(text, str):
        text = text.read()
    raw = _tokenize(text)
    nums: Dict[str, float] = {}
    for key, (value, lineno) in raw.items():
        if key in _FLOAT_KEYS:
            try:
                nums[key] = float(value)
            except ValueError:
                raise ParseError(f"not a number: {value!r}", line=lineno, key=key) from None
            if not math.isfinite(nums[key]):
                raise ParseError(f"not finite: {value!r}", line=lineno, key=key)

    def text_value(key, default):
        return raw[key][0] if key in raw else default

    def fail(key, exc):
        line = raw[key][1] if key in raw else None
        return ParseError(str(exc), line=line, key=key)

    base = default_initial_state()
    flat = dict(zip(("x0", "y0", "z0", "u0", "v0", "w0", "q0", "q1", "q2", "q3", "wx0", "wy0", "wz0"), base.to_flat()))
    flat.update({k: nums[k] for k in _STATE_KEYS if k in nums})
    state = RigidBodyState(
        Vec3(flat["x0"], flat["y0"], flat["z0"]),
        Vec3(flat["u0"], flat["v0"], flat["w0"]),
        Quaternion(flat["q0"], flat["q1"], flat["q2"], flat["q3"]),
        Vec3(flat["wx0"], flat["wy0"], flat["wz0"]),
    )

    try:
        actuation = parse_actuation(text_value("actuation", "full"))
    except ValidationError as exc:
        raise fail("actuation", exc) from None
    limit_text = text_value("moment_limit", "none")
    if limit_text.lower() in ("none", "off", ""):
        limit = None
    else:
        try:
            limit = float(limit_text)
        except ValueError:
            raise fail("moment_limit", f"not a number: {limit_text!r}") from None
    try:
        base_sc = preset(text_value("cubesat", "1u"), actuation)
    except DetumbleError as exc:
        raise fail("cubesat", exc) from None
    inertia = (
        nums.get("ix", base_sc.inertia.i_x),
        nums.get("iy", base_sc.inertia.i_y),
        nums.get("iz", base_sc.inertia.i_z),
    )

    try:
        kind = ControllerKind.parse(text_value("controller", "proportional"))
    except ValidationError as exc:
        raise fail("controller", exc) from None
    gain_keys = [k for k in ("k_pp", "k_pq", "k_pr") if k in nums]
    if gain_keys and len(gain_keys) != 3:
        missing = sorted({"k_pp", "k_pq", "k_pr"} - set(gain_keys))
        raise fail(gain_keys[0], f"gains must be given together; missing {', '.join(missing)}")
    gains = GainMatrix(nums["k_pp"], nums["k_pq"], nums["k_pr"]) if gain_keys else None

    decimation_text = text_value("decimation", "1")
    try:
        decimation = int(decimation_text)
    except ValueError:
        raise fail("decimation", f"not an integer: {decimation_text!r}") from None

    ts_defaults = TwoStageParams()
    try:
        spacecraft = SpacecraftConfig(
            base_sc.name, nums.get("mass", base_sc.mass), InertiaTensor(*inertia), actuation, limit
        )
        controller = ControllerSpec(
            kind=kind,
            gains=gains,
            rate_command=RateCommand(nums.get("wx_cmd", 0.0), nums.get("wy_cmd", 0.0), nums.get("wz_cmd", 0.0)),
            two_stage=TwoStageParams(
                nums.get("p_command", ts_defaults.p_command),
                nums.get("epsilon", ts_defaults.epsilon),
                nums.get("q_command_limit", ts_defaults.q_command_limit),
                nums.get("denominator_floor", ts_defaults.denominator_floor),
            ),
        )
        return ScenarioConfig(
            initial_state=state,
            spacecraft=spacecraft,
            controller=controller,
            dt=nums.get("dt", 0.01),
            duration=nums.get("duration"),
            mu=nums.get("mu", MU_EARTH),
            output_decimation=decimation,
        )
    except ValidationError:
        raise
    except DetumbleError as exc:
        raise ValidationError(str(exc)) from exc


def load_scenario(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def render_scenario(config: ScenarioConfig) -> str:
    """Scenario text that parses back to ``config`` exactly."""
    s = config.initial_state
    sc = config.spacecraft
    ctrl = config.controller
    ts = ctrl.two_stage
    lines = ["# detumble scenario"]
    flat = s.to_flat()
    order = ("x0", "y0", "z0", "u0", "v0", "w0", "q0", "q1", "q2", "q3", "wx0", "wy0", "wz0")
    lines += [f"{key} = {value!r}" for key, value in zip(order, flat)]
    lines += [
        f"cubesat = {sc.name}",
        f"mass = {sc.mass!r}",
        f"ix = {sc.inertia.i_x!r}",
        f"iy = {sc.inertia.i_y!r}",
        f"iz = {sc.inertia.i_z!r}",
        f"actuation = {actuation_name(sc.actuation)}",
        f"moment_limit = {'none' if sc.moment_limit is None else repr(sc.moment_limit)}",
        f"controller = {ctrl.kind.value}",
    ]
    if ctrl.gains is not None:
        lines += [f"{k} = {v!r}" for k, v in zip(("k_pp", "k_pq", "k_pr"), ctrl.gains)]
    lines += [f"{k} = {v!r}" for k, v in zip(("wx_cmd", "wy_cmd", "wz_cmd"), ctrl.rate_command)]
    lines += [
        f"p_command = {ts.p_command!r}",
        f"epsilon = {ts.epsilon!r}",
        f"q_command_limit = {ts.q_command_limit!r}",
        f"denominator_floor = {ts.denominator_floor!r}",
        f"dt = {config.dt!r}",
        f"duration = {config.duration!r}",
        f"mu = {config.mu!r}",
        f"decimation = {config.output_decimation}",
    ]
    return "\n".join(lines) + "\n"


CSV_HEADER = "t,px,py,pz,q0,q1,q2,q3,vx,vy,vz,p,q,r,L,M,N,stage"
CSV_COLUMNS = tuple(CSV_HEADER.split(","))


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_csv(result: SimResult, sink: TextIO) -> None:
    """Telemetry as CSV: fixed header, 17 significant digits, ``\\n`` line ends."""
    if not result.records:
        raise ValueError("no telemetry to write")
    out = [CSV_HEADER]
    for rec in result.records:
        values = (rec.t, *rec.position_eci, *rec.quaternion, *rec.velocity_eci, *rec.omega_body, *rec.moment_applied)
        out.append(",".join(_fmt(v) for v in values) + f",{int(rec.stage)}")
    sink.write("\n".join(out) + "\n")


def read_csv(source) -> SimResult:
    """Inverse of :func:`write_csv`. ``source`` is a stream or a string."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != CSV_COLUMNS:
        raise ParseError("telemetry CSV header does not match", line=1)
    result = SimResult()
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise ParseError(f"expected {len(CSV_COLUMNS)} columns, got {len(row)}", line=lineno)
        try:
            v = [float(x) for x in row[:-1]]
            stage = int(row[-1])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        result.records.append(
            TelemetryRecord(v[0], Vec3(*v[1:4]), Quaternion(*v[4:8]), Vec3(*v[8:11]), Vec3(*v[11:14]), Vec3(*v[14:17]), stage)
        )
    return result


def circular_orbit_speed(altitude: float, mu: float = MU_EARTH, earth_radius: float = EARTH_RADIUS) -> float:
    if not altitude > 0.0:
        raise ValueError(f"altitude must be > 0, got {altitude!r}")
    return math.sqrt(mu / (earth_radius + altitude))


# --- SVG ---------------------------------------------------------------------

_CHANNELS = {
    "rates": ("Angular Velocity Components", "rate (rad/s)", ("p", "q", "r"), "omega_body"),
    "moments": ("Control Moment Components", "moment (N*m)", ("L", "M", "N"), "moment_applied"),
}
_COLORS = ("#1f77b4", "#d62728", "#2ca02c")
_W, _H = 640, 400
_LEFT, _RIGHT, _TOP, _BOTTOM = 80, 110, 40, 50


def _nice_ticks(lo: float, hi: float, count: int = 5) -> List[float]:
    span = hi - lo
    raw = span / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1.0, 2.0, 2.5, 5.0, 10.0) if m * mag >= raw), default=10.0 * mag)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def emit_plot(result: SimResult, channels: str, sink: TextIO) -> None:
    """Write a standalone SVG line chart of rates or moments against time."""
    if channels not in _CHANNELS:
        raise ValueError(f"channels must be one of {sorted(_CHANNELS)}, got {channels!r}")
    records = result.records
    if len(records) < 2:
        raise ValueError("need at least two records to plot")
    title, ylabel, names, attr = _CHANNELS[channels]
    t = [rec.t for rec in records]
    series = [[getattr(rec, attr)[i] for rec in records] for i in range(3)]

    t0, t1 = t[0], t[-1]
    if t1 <= t0:
        t1 = t0 + 1.0
    lo = min(0.0, *(min(s) for s in series))
    hi = max(0.0, *(max(s) for s in series))
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    pw = _W - _LEFT - _RIGHT
    ph = _H - _TOP - _BOTTOM

    def sx(v):
        return _LEFT + (v - t0) / (t1 - t0) * pw

    def sy(v):
        return _TOP + (hi - v) / (hi - lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_LEFT + pw / 2:.2f}" y="24" text-anchor="middle" font-size="15">{title}</text>',
    ]
    for tick in _nice_ticks(lo, hi):
        y = sy(tick)
        out.append(f'<line x1="{_LEFT}" y1="{y:.2f}" x2="{_LEFT + pw}" y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{_LEFT - 6}" y="{y + 4:.2f}" text-anchor="end">{tick:.4g}</text>')
    for tick in _nice_ticks(t0, t1):
        x = sx(tick)
        out.append(f'<line x1="{x:.2f}" y1="{_TOP}" x2="{x:.2f}" y2="{_TOP + ph}" stroke="#eeeeee"/>')
        out.append(f'<text x="{x:.2f}" y="{_TOP + ph + 16}" text-anchor="middle">{tick:.4g}</text>')
    out.append(f'<rect x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    if lo < 0.0 < hi:
        out.append(f'<line x1="{_LEFT}" y1="{sy(0.0):.2f}" x2="{_LEFT + pw}" y2="{sy(0.0):.2f}" stroke="black" stroke-dasharray="4 3"/>')
    out.append(f'<text x="{_LEFT + pw / 2:.2f}" y="{_H - 10}" text-anchor="middle">t (s)</text>')
    cy = _TOP + ph / 2
    out.append(f'<text x="18" y="{cy:.2f}" text-anchor="middle" transform="rotate(-90 18 {cy:.2f})">{ylabel}</text>')

    for i, (name, values) in enumerate(zip(names, series)):
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(t, values))
        out.append(f'<polyline id="{name}" fill="none" stroke="{_COLORS[i]}" stroke-width="1.5" points="{pts}"/>')
        ly = _TOP + 10 + 20 * i
        lx = _LEFT + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{_COLORS[i]}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}">{name}</text>')
    out.append("</svg>")
    sink.write("\n".join(out) + "\n")
