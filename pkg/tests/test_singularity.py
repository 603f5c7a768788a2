from __future__ import annotations

import numpy as np
import pytest

from alcove_mcf import SingularityError, preset, type_I_estimate

from conftest import PI


@pytest.fixture(scope="module")
def sp_report():
    return type_I_estimate(preset("sp-isotropy", n=3), [1.15, 0, -1.15])


def test_sp_isotropy_limit(sp_report):
    r = sp_report
    assert r.dominant_label == "b13" and r.m_e_dominant == 4
    assert r.predicted_limit == 0.125
    assert r.relative_error < 1e-6


def test_report_invariants(sp_report):
    r = sp_report
    t = np.array([s[0] for s in r.samples])
    Q = np.array([s[1] for s in r.samples])
    assert np.all(np.diff(t) > 0) and t[-1] < r.hit_time
    assert np.all(Q <= 2 * r.predicted_limit)
    err = np.abs(Q - r.predicted_limit)[-5:]
    assert np.all(np.diff(err) < 0)
    assert min(r.alignment[-5:]) > 1 - 1e-9
    assert abs(r.T_est - r.hit_time) < 1e-9
    assert r.sensitivity < 1e-4
    doc = r.to_dict()
    assert doc["predicted_limit"] == 0.125 and len(doc["samples"]) == len(r.samples)


def test_so2n_on_su2n_limit():
    r = type_I_estimate(preset("so2n-on-su2n", n=3), [0.65, 0, -0.65])
    assert r.m_e_dominant == 2 and r.predicted_limit == 0.25
    assert r.relative_error < 1e-6


@pytest.mark.parametrize("name,params,x0,limit", [
    # parallel collapsing families add their multiplicities: 6 + 1
    ("supq-isotropy", {"p": 2, "q": 5}, [1.0, 0.1], 1 / 14),
    ("so2p-hermann", {"p": 2}, [0.6, 0.05], 1 / 2),
    ("sopq-hermann", {"p": 2, "q": 4}, [0.45, 0.05], 1 / 4),
])
def test_other_limits(name, params, x0, limit):
    r = type_I_estimate(preset(name, params), x0)
    assert r.predicted_limit == pytest.approx(limit)
    assert r.relative_error < 1e-4


def test_fixed_point_rejected():
    with pytest.raises(SingularityError, match="fixed point"):
        type_I_estimate(preset("sp-isotropy", n=3), [PI / 3, 0, -PI / 3])


def test_bad_k_range():
    with pytest.raises(ValueError):
        type_I_estimate(preset("sp-isotropy", n=3), [1.15, 0, -1.15], k_range=(6, 8))
