from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from alcove_mcf import (BUDGET, FIXED_POINT, WALL_HIT, FlowError, FlowOptions, alcove_of,
                        basin_map, find_minimal, find_minimal_on_stratum, integrate,
                        integrate_on_stratum, preset)
from alcove_mcf.dynamics import grid_seeds
from alcove_mcf.flowfield import full_system

from conftest import PI, stratum_on


def _axis_hit_time(x0: float) -> float:
    # on the symmetric axis x1' = -4 (cot x1 + cot 2 x1)
    val, _ = quad(lambda x: -1.0 / (4.0 * (1 / math.tan(x) + 1 / math.tan(2 * x))), x0, PI / 2,
                  epsabs=1e-14, epsrel=1e-13)
    return val


def test_axis_flow_hits_upper_wall():
    d = preset("sp-isotropy", n=3)
    x0 = PI / 3 + 0.1
    res = integrate(d, [x0, 0, -x0])
    assert res.status == WALL_HIT
    assert np.allclose(res.terminal, [PI / 2, 0, -PI / 2], atol=1e-8)
    assert res.terminal_stratum.describe(alcove_of(d)) == "b13 < pi"
    assert res.hit_time == pytest.approx(_axis_hit_time(x0), rel=1e-8)
    assert res.hit_time == pytest.approx(0.070405074, rel=1e-7)


def test_axis_flow_below_fixed_point_heads_to_vertex():
    d = preset("sp-isotropy", n=3)
    x0 = PI / 3 - 0.1
    res = integrate(d, [x0, 0, -x0])
    assert res.status == WALL_HIT
    # the symmetric approach to the corner is unstable; the curve lands next to it
    assert np.linalg.norm(res.terminal) < 1e-4
    assert res.hit_time > 0


def test_fixed_point_start():
    d = preset("sp-isotropy", n=3)
    res = integrate(d, [PI / 3, 0, -PI / 3])
    assert res.status == FIXED_POINT
    assert res.terminal_stratum is None and res.hit_time is None


def test_outside_start_rejected():
    with pytest.raises(FlowError, match="start point not in alcove interior"):
        integrate(preset("sp-isotropy", n=3), [2.0, 0, -2.0])


def test_budget_status():
    res = integrate(preset("sp-isotropy", n=3), [1.2, 0, -1.2], FlowOptions(max_steps=3))
    assert res.status == BUDGET


def test_options_validated():
    with pytest.raises(FlowError):
        FlowOptions(eps_wall=0)
    with pytest.raises(FlowError):
        FlowOptions(eps_wall=0.5)


def test_samples_monotone_and_serializable():
    d = preset("supq-isotropy", p=2, q=5)
    res = integrate(d, [1.0, 0.3])
    t = res.times
    assert np.all(np.diff(t) > 0) and t[-1] <= res.hit_time
    doc = res.to_dict(alcove_of(d))
    assert doc["status"] == WALL_HIT and len(doc["samples"][0]) == 3


def test_slack_eventually_decreasing(case, rng):
    data, A = case
    sys_ = full_system(data)
    for x0 in A.sample_interior(rng, 5, margin=0.02):
        res = integrate(data, x0)
        if res.status != WALL_HIT:
            continue
        s = np.array([sys_.min_slack(sys_.project(x)) for x in res.points])
        below = np.nonzero(s < 0.1)[0]
        if len(below) == 0:
            continue
        tail = s[below[0]:]
        # once below 0.1 the distance keeps falling (allow rounding noise)
        first_low = np.argmax(tail < 0.1)
        assert np.all(np.diff(tail[first_low:]) < 1e-12)


def test_stratum_flow_sp_isotropy():
    d = preset("sp-isotropy", n=3)
    A = alcove_of(d)
    s = stratum_on(A, "b12 > 0")
    x = PI / 8
    res = integrate_on_stratum(d, s, [x, x, -2 * x])
    assert res.status == WALL_HIT
    assert np.linalg.norm(res.terminal) < 1e-8
    # dx/dt = -4 cot 3x integrates to t = -log(cos 3x) / 12
    assert res.hit_time == pytest.approx(-math.log(math.cos(3 * x)) / 12, rel=1e-8)


def test_stratum_flow_supq_isotropy():
    d = preset("supq-isotropy", p=2, q=5)
    A = alcove_of(d)
    s = stratum_on(A, "b2 > 0", "2b2 > 0")
    res = integrate_on_stratum(d, s, [1.0, 0.0])
    assert res.status == WALL_HIT
    assert res.terminal_stratum.dim == 0
    val, _ = quad(lambda x: 1.0 / (2 * (5 / math.tan(x) + 1 / math.tan(2 * x))), 0, 1.0,
                  epsabs=1e-14, epsrel=1e-13)
    assert res.hit_time == pytest.approx(val, rel=1e-8)


def test_stratum_flow_fixed_point():
    d = preset("sp-isotropy", n=3)
    s = stratum_on(alcove_of(d), "b12 > 0")
    res = integrate_on_stratum(d, s, [PI / 6, PI / 6, -PI / 3])
    assert res.status == FIXED_POINT


def test_stratum_flow_needs_stratum_point():
    d = preset("sp-isotropy", n=3)
    s = stratum_on(alcove_of(d), "b12 > 0")
    with pytest.raises(FlowError):
        integrate_on_stratum(d, s, [PI / 3, 0, -PI / 3])


@pytest.mark.parametrize("name,params,want", [
    ("sp-isotropy", {"n": 3}, [PI / 3, 0, -PI / 3]),
    ("so2n-on-su2n", {"n": 3}, [PI / 6, 0, -PI / 6]),
    ("so2p-hermann", {"p": 2}, [0.5 * math.atan(math.sqrt(2)), 0]),
    ("supp-isotropy", {"p": 2}, [3 * PI / 8, PI / 8]),
])
def test_find_minimal_closed_forms(name, params, want):
    zeros = find_minimal(preset(name, params), tol=1e-10)
    assert len(zeros) == 1
    assert np.max(np.abs(zeros[0].point - want)) < 1e-10
    assert zeros[0].residual < 1e-10 and zeros[0].jacobian_divergence > 0


def test_find_minimal_higher_rank():
    # the regular simplex centre of the A-type alcove
    n = 5
    zeros = find_minimal(preset("sp-isotropy", n=n), grid_n=4)
    assert len(zeros) == 1
    x = zeros[0].point
    gaps = -np.diff(x)
    assert np.allclose(gaps, PI / n, atol=1e-9)


def test_find_minimal_on_strata():
    d = preset("supp-isotropy", p=2)
    A = alcove_of(d)
    z = find_minimal_on_stratum(d, stratum_on(A, "2b2 > 0"))
    assert len(z) == 1 and np.allclose(z[0].point, [math.atan(math.sqrt(5)), 0], atol=1e-10)
    d = preset("sopq-hermann", p=2, q=4)
    A = alcove_of(d)
    z = find_minimal_on_stratum(d, stratum_on(A, "b1-b2 > 0"))
    a = 0.5 * math.atan(math.sqrt(5 / 3))
    assert len(z) == 1 and np.allclose(z[0].point, [a, a], atol=1e-10)
    with pytest.raises(ValueError):
        find_minimal_on_stratum(d, A.strata(0)[0])


def test_grid_seeds_shape():
    pts = grid_seeds(np.zeros(2), np.ones(2), 4)
    assert pts.shape == (16, 2) and np.allclose(pts.min(axis=0), 0.125)
    shrunk = grid_seeds(np.zeros(2), np.ones(2), 4, np.full(2, 0.5), 0.5)
    assert np.allclose(shrunk.min(axis=0), 0.3125)


def test_basin_axis_seeds():
    d = preset("sp-isotropy", n=3)
    A = alcove_of(d)
    for x1 in np.linspace(PI / 3 + 0.02, PI / 2 - 0.02, 6):
        res = integrate(d, [x1, 0, -x1], FlowOptions(keep_samples=False))
        assert res.terminal_stratum.describe(A) == "b13 < pi"


def test_basin_map_small_grid():
    d = preset("so2p-hermann", p=2)
    entries = basin_map(d, 6)
    assert entries and all(e.status == WALL_HIT and e.hit_time > 0 for e in entries)


@settings(max_examples=8, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_backends_agree_on_hit_time(a, b):
    from alcove_mcf.dynamics import _finish, _Run
    from alcove_mcf.kernels import available_backends
    d = preset("supq-isotropy", p=2, q=5)
    A = alcove_of(d)
    V = A.vertices_frame
    lam = np.array([a * b, a * (1 - b), 1 - a])
    x0 = A.to_ambient((0.8 * lam + 0.2 / 3) @ V)
    times = []
    for backend in available_backends():
        sys_ = full_system(d, backend)
        run = _Run(sys_, FlowOptions(keep_samples=False))
        r = _finish(A, sys_, run, run.run(sys_.project(x0)))
        times.append(r.hit_time)
    if None in times:
        assert all(t is None for t in times)
    else:
        assert max(times) - min(times) <= 1e-8 * max(times)
