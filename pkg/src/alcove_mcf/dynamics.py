"""Integral curves of ``X`` (the reduced mean curvature flow) and zeros of ``X``.

Integration runs in two phases.  Away from the walls an adaptive
Dormand-Prince 5(4) scheme advances in time; a step is rejected when any stage
point leaves the alcove.  Once the distance ``s`` to the nearest wall drops
below ``switch_slack`` the distance itself becomes the independent variable:

    dz/ds = X / s',   dt/ds = 1 / s',   s' = <grad s, X>,

which is smooth up to the wall because ``s'`` behaves like ``-c/s``.  The
curve is followed down to ``s = eps_wall`` and closed off by the quadratic
tail ``t(s) ~ T - a s^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .alcove import ON_STRATUM, Alcove, StratumSpec, alcove_of
from .flowfield import full_system, stratum_system
from .kernels import FieldSystem
from .rootdata import ActionData

__all__ = [
    "FlowError",
    "FlowOptions",
    "FlowResult",
    "ZeroReport",
    "BasinEntry",
    "WALL_HIT",
    "FIXED_POINT",
    "BUDGET",
    "integrate",
    "integrate_on_stratum",
    "find_minimal",
    "find_minimal_on_stratum",
    "basin_map",
    "grid_seeds",
    "stratum_to_dict",
]

WALL_HIT = "WallHit"
FIXED_POINT = "FixedPoint"
BUDGET = "Budget"

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


class FlowError(ValueError):
    """Bad input (start point not interior, bad options)."""


class NumericalFailure(RuntimeError):
    """The integrator could not make progress away from the walls."""


@dataclass(frozen=True)
class FlowOptions:
    eps_wall: float = 1e-9
    rtol: float = 1e-10
    atol: float = 1e-12
    max_time: float = 100.0
    max_steps: int = 200_000
    switch_slack: float = 2.0**-5
    fixed_tol: float = 1e-12
    slack_marks: tuple[float, ...] = ()
    keep_samples: bool = True

    def __post_init__(self):
        for name in ("eps_wall", "rtol", "atol", "max_time", "switch_slack", "fixed_tol"):
            if not getattr(self, name) > 0:
                raise FlowError(f"{name} must be positive")
        if self.eps_wall >= self.switch_slack:
            raise FlowError("eps_wall must be below switch_slack")


@dataclass
class FlowResult:
    status: str
    samples: list[tuple[float, np.ndarray]]
    terminal: np.ndarray
    terminal_stratum: StratumSpec | None
    hit_time: float | None
    # (slack, time since the switch to the slack variable, point)
    marks: list[tuple[float, float, np.ndarray]] = field(default_factory=list)
    wall: int | None = None
    tail_time: float = 0.0
    steps: int = 0
    t_switch: float = 0.0

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    @property
    def points(self) -> np.ndarray:
        return np.array([x for _, x in self.samples])

    def to_dict(self, alcove: Alcove) -> dict[str, Any]:
        return {
            "status": self.status,
            "hit_time": self.hit_time,
            "tail_time": self.tail_time,
            "terminal": [float(c) for c in self.terminal],
            "stratum": stratum_to_dict(alcove, self.terminal_stratum),
            "steps": self.steps,
            "samples": [[float(t), *(float(c) for c in x)] for t, x in self.samples],
        }


@dataclass
class ZeroReport:
    point: np.ndarray
    residual: float
    jacobian_divergence: float
    context: StratumSpec | None = None

    def to_dict(self, alcove: Alcove) -> dict[str, Any]:
        return {
            "point": [float(c) for c in self.point],
            "residual": self.residual,
            "divergence": self.jacobian_divergence,
            "context": stratum_to_dict(alcove, self.context),
        }


@dataclass
class BasinEntry:
    seed: np.ndarray
    status: str
    terminal: np.ndarray
    stratum: StratumSpec | None
    hit_time: float | None


def stratum_to_dict(alcove: Alcove, sigma: StratumSpec | None) -> dict[str, Any]:
    if sigma is None:
        return {"interior": True}
    return {
        "walls": [{"root_label": w.label, "level": w.level, "kind": w.kind}
                  for w in sigma.walls(alcove)],
        "dim": sigma.dim,
        "representative": [float(c) for c in sigma.representative],
    }


# -- integration core ----------------------------------------------------------


def _initial_step(sys_: FieldSystem, z, k) -> float:
    speed = float(np.linalg.norm(k))
    return min(1e-2, 0.05 * sys_.min_slack(z) / max(speed, 1e-300))


def _slack_rhs(sys_: FieldSystem, i: int, Y: np.ndarray):
    """Right-hand side in the slack variable; ``None`` when not approaching wall ``i``."""
    z = Y[:-1]
    X = sys_.field(z)
    sdot = float(sys_.G[i] @ X)
    if not sdot < 0.0 or not np.isfinite(sdot):
        return None
    out = np.empty_like(Y)
    out[:-1] = X / sdot
    out[-1] = 1.0 / sdot
    return out


def _slack_step(sys_: FieldSystem, i: int, Y, h, k1, rtol, atol):
    ks = [k1]
    for st in range(1, 6):
        Yi = Y + h * sum(a * k for a, k in zip(_A[st], ks))
        if sys_.min_slack(Yi[:-1]) <= 0.0:
            return None
        ki = _slack_rhs(sys_, i, Yi)
        if ki is None:
            return None
        ks.append(ki)
    Yn = Y + h * sum(b * k for b, k in zip(_B, ks))
    if sys_.min_slack(Yn[:-1]) <= 0.0:
        return None
    k7 = _slack_rhs(sys_, i, Yn)
    if k7 is None:
        return None
    ks.append(k7)
    err = h * sum(e * k for e, k in zip(_E, ks))
    scale = atol + rtol * np.maximum(np.abs(Y), np.abs(Yn))
    # time increments are tiny near the wall; control them relative to the step's own size,
    # no tighter than the rounding noise of s' (root values lose digits as s -> 0)
    s_now = max(float(sys_.slacks(Y[:-1])[i]), 1e-300)
    noise = 64 * np.finfo(float).eps * (1.0 + float(np.max(np.abs(Y[:-1])))) / s_now
    scale[-1] = 1e-300 + max(rtol, noise) * abs(h * k1[-1])
    err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
    return Yn, k7, err_norm


class _Run:
    def __init__(self, sys_: FieldSystem, opts: FlowOptions):
        self.sys = sys_
        self.o = opts
        self.samples: list[tuple[float, np.ndarray]] = []
        self.marks: list[tuple[float, float, np.ndarray]] = []
        self.steps = 0
        self.t_switch = 0.0

    def record(self, t, z):
        if self.o.keep_samples:
            self.samples.append((t, self.sys.lift(z)))

    def run(self, z0):
        sys_, o = self.sys, self.o
        z = np.array(z0, dtype=float)
        t = 0.0
        k = sys_.field(z)
        self.record(t, z)
        if np.linalg.norm(k) <= o.fixed_tol:
            return FIXED_POINT, z, t, None, 0.0
        h = _initial_step(sys_, z, k)
        while sys_.min_slack(z) >= o.switch_slack:
            if self.steps >= o.max_steps or t >= o.max_time:
                return BUDGET, z, t, None, 0.0
            zn, kn, err, smin = sys_.step(z, h, k, o.rtol, o.atol)
            if smin <= 0.0 or not err <= 1.0:
                h *= 0.25 if not np.isfinite(err) else max(0.1, 0.9 * err**-0.2)
                if h < 1e-15 * max(1.0, t):
                    raise NumericalFailure("step size underflow away from the walls")
                continue
            self.steps += 1
            t += h
            z, k = zn, kn
            self.record(t, z)
            if np.linalg.norm(k) <= o.fixed_tol:
                return FIXED_POINT, z, t, None, 0.0
            h *= min(5.0, 0.9 * max(err, 1e-10) ** -0.2)
        return self.slack_phase(z, t)

    def slack_phase(self, z, t0):
        sys_, o = self.sys, self.o
        slacks = sys_.slacks(z)
        i = int(np.argmin(slacks))
        s = float(slacks[i])
        Y = np.append(z, 0.0)
        k = _slack_rhs(sys_, i, Y)
        retries = 0
        while k is None:
            # not yet moving toward the nearest wall: take short time steps first
            retries += 1
            if retries > 1000:
                raise NumericalFailure("trajectory stalls near a wall")
            kz = sys_.field(z)
            h = 0.1 * s / max(float(np.linalg.norm(kz)), 1e-300)
            zn, _, err, smin = sys_.step(z, h, kz, o.rtol, o.atol)
            if smin <= 0.0:
                continue
            t0 += h
            z = zn
            self.record(t0, z)
            slacks = sys_.slacks(z)
            i = int(np.argmin(slacks))
            s = float(slacks[i])
            Y = np.append(z, 0.0)
            k = _slack_rhs(sys_, i, Y)
        self.t_switch = t0
        h = s / 8
        marks = sorted((m for m in o.slack_marks if o.eps_wall < m < s), reverse=True)
        while True:
            if self.steps >= o.max_steps:
                return BUDGET, Y[:-1], t0 + Y[-1], None, 0.0
            target = marks[0] if marks else o.eps_wall
            ds = min(h, s - target)
            res = _slack_step(sys_, i, Y, -ds, k, o.rtol, o.atol)
            if res is None or not res[2] <= 1.0:
                h = ds * (0.25 if res is None else max(0.1, 0.9 * res[2] ** -0.2))
                if h < 1e-16 * s:
                    raise NumericalFailure("step size underflow in the wall approach")
                continue
            Yn, kn, err = res
            self.steps += 1
            s_new = s - ds if ds < s - target else target
            Y, k = Yn, kn
            s = s_new
            h = max(h, ds) * min(5.0, 0.9 * max(err, 1e-10) ** -0.2)
            if marks and s <= marks[0] * (1 + 1e-12):
                self.marks.append((marks.pop(0), float(Y[-1]), sys_.lift(Y[:-1])))
            if s <= o.eps_wall * (1 + 1e-12):
                break
            self.record(t0 + Y[-1], Y[:-1])
            slacks = sys_.slacks(Y[:-1])
            j = int(np.argmin(slacks))
            if j != i and slacks[j] < s * (1 - 1e-9):
                kj = _slack_rhs(sys_, j, Y)
                if kj is not None:
                    i, s, k = j, float(slacks[j]), kj
                    Y = Y.copy()
                    marks = [m for m in marks if m < s]
        # close off: linear extrapolation of z, quadratic time tail
        z_end = Y[:-1] - s * k[:-1]
        tail = -0.5 * s * k[-1]
        return WALL_HIT, z_end, t0 + Y[-1], i, tail


def _finish(A: Alcove, sys_: FieldSystem, run: _Run, out) -> FlowResult:
    status, z, t, wall, tail = out
    x = sys_.lift(z)
    stratum = None
    hit = None
    if status == WALL_HIT:
        loc = A.classify(x)
        if loc.kind != ON_STRATUM:
            # extrapolation may undershoot by rounding; snap onto the dominant wall
            loc = A.classify(x, tol=max(1e-9, 10 * run.o.eps_wall))
        if loc.kind != ON_STRATUM:
            raise NumericalFailure("terminal point did not land on the alcove boundary")
        stratum = loc.stratum
        hit = t + tail
    return FlowResult(status, run.samples, x, stratum, hit, run.marks,
                      None if wall is None else sys_.wall_ids[wall], tail, run.steps, run.t_switch)


def integrate(data: ActionData, x0: Sequence[float], opts: FlowOptions | None = None) -> FlowResult:
    """Integrate ``xi' = X`` from an interior point until a wall, a zero, or the budget."""
    opts = opts or FlowOptions()
    A = alcove_of(data)
    if not A.classify(x0).interior:
        raise FlowError("start point not in alcove interior")
    sys_ = full_system(data)
    run = _Run(sys_, opts)
    return _finish(A, sys_, run, run.run(sys_.project(x0)))


def integrate_on_stratum(data: ActionData, sigma: StratumSpec, x0: Sequence[float],
                         opts: FlowOptions | None = None) -> FlowResult:
    """Integrate ``xi' = X^sigma`` inside ``sigma`` until it reaches the boundary of ``sigma``."""
    opts = opts or FlowOptions()
    A = alcove_of(data)
    loc = A.classify(x0)
    if loc.kind != ON_STRATUM or loc.stratum.active != sigma.active:
        raise FlowError("start point not in the relative interior of the stratum")
    sys_ = stratum_system(data, sigma)
    run = _Run(sys_, opts)
    return _finish(A, sys_, run, run.run(sys_.project(x0)))


# -- zeros ---------------------------------------------------------------------


def _newton(sys_: FieldSystem, z0, tol: float, max_iter: int = 50):
    z = np.array(z0, dtype=float)
    F = sys_.field(z)
    nF = float(np.linalg.norm(F))
    for _ in range(max_iter):
        if nF <= tol:
            break
        try:
            dz = np.linalg.solve(sys_.jacobian(z), -F)
        except np.linalg.LinAlgError:
            return None
        alpha = 1.0
        while True:
            zn = z + alpha * dz
            if sys_.min_slack(zn) > 0.0:
                Fn = sys_.field(zn)
                nFn = float(np.linalg.norm(Fn))
                if nFn < (1.0 - 1e-4 * alpha) * nF:
                    break
            alpha *= 0.5
            if alpha < 1e-12:
                return None
        z, F, nF = zn, Fn, nFn
    if nF > tol:
        return None
    for _ in range(2):
        try:
            zn = z + np.linalg.solve(sys_.jacobian(z), -F)
        except np.linalg.LinAlgError:
            break
        if sys_.min_slack(zn) <= 0.0:
            break
        Fn = sys_.field(zn)
        if not np.linalg.norm(Fn) < nF:
            break
        z, F, nF = zn, Fn, float(np.linalg.norm(Fn))
    return z, nF


def grid_seeds(lo: np.ndarray, hi: np.ndarray, n: int, shrink_to: np.ndarray | None = None,
               shrink: float = 0.0) -> np.ndarray:
    """Cell centres of an ``n^d`` grid on a box, optionally pulled toward a point."""
    d = len(lo)
    axes = [lo[i] + (np.arange(n) + 0.5) * (hi[i] - lo[i]) / n for i in range(d)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    if shrink_to is not None and shrink:
        pts = shrink_to + (1.0 - shrink) * (pts - shrink_to)
    return pts


def _zeros(sys_: FieldSystem, seeds: np.ndarray, tol: float, A: Alcove,
           context: StratumSpec | None) -> list[ZeroReport]:
    found: list[ZeroReport] = []
    for z0 in seeds:
        if sys_.min_slack(z0) <= 0.0:
            continue
        res = _newton(sys_, z0, tol)
        if res is None:
            continue
        z, nF = res
        x = sys_.lift(z)
        if any(np.linalg.norm(x - r.point) < 1e-6 for r in found):
            continue
        found.append(ZeroReport(x, nF, sys_.divergence(z), context))
    return found


def find_minimal(data: ActionData, grid_n: int = 8, tol: float = 1e-10) -> list[ZeroReport]:
    """Interior zeros of ``X`` by damped Newton from a shrunken interior grid."""
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    A = alcove_of(data)
    V = A.vertices_frame
    seeds = grid_seeds(V.min(axis=0), V.max(axis=0), grid_n, V.mean(axis=0), 0.05)
    return _zeros(full_system(data), seeds, tol, A, None)


def find_minimal_on_stratum(data: ActionData, sigma: StratumSpec, tol: float = 1e-10,
                            grid_n: int = 16) -> list[ZeroReport]:
    """Zeros of ``X^sigma`` in the relative interior of ``sigma``."""
    if sigma.dim == 0:
        raise ValueError("zero-dimensional strata carry no field")
    A = alcove_of(data)
    sys_ = stratum_system(data, sigma)
    Vz = np.array([sys_.project(A.to_ambient(v)) for v in A.stratum_vertices(sigma)])
    seeds = grid_seeds(Vz.min(axis=0), Vz.max(axis=0), grid_n, Vz.mean(axis=0), 0.05)
    return _zeros(sys_, seeds, tol, A, sigma)


def basin_map(data: ActionData, grid_n: int = 16, opts: FlowOptions | None = None) -> list[BasinEntry]:
    """Flow every interior cell centre of a ``grid_n^rank`` grid to its terminal stratum."""
    opts = opts or FlowOptions(keep_samples=False)
    A = alcove_of(data)
    V = A.vertices_frame
    out = []
    for y in grid_seeds(V.min(axis=0), V.max(axis=0), grid_n):
        x = A.to_ambient(y)
        if not A.classify(x).interior:
            continue
        r = integrate(data, x, opts)
        out.append(BasinEntry(x, r.status, r.terminal, r.terminal_stratum, r.hit_time))
    return out
