from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alcove_mcf import RootDataError, alcove_of, load_custom, preset
from alcove_mcf.rootdata import PRESETS, dominance_violations, dumps, to_document

from conftest import CASES, LARGE_CASES


def _mults(data):
    return {r.label: (r.m_V, r.m_H) for r in data.roots}


def test_sp_isotropy_roots():
    d = preset("sp-isotropy", n=3)
    assert d.rank == 2
    assert len(d.roots) == 3
    assert all((r.m_V, r.m_H) == (4, 0) for r in d.roots)
    assert np.allclose(d.highest.sharp, [1, 0, -1])
    assert d.delta_factor == 1


def test_so2n_on_su2n_roots():
    d = preset("so2n-on-su2n", n=3)
    assert np.allclose(d.root_matrix, preset("sp-isotropy", n=3).root_matrix)
    assert all((r.m_V, r.m_H) == (2, 2) for r in d.roots)


def test_supq_isotropy_multiplicities():
    m = _mults(preset("supq-isotropy", p=2, q=5))
    assert m == {"b1-b2": (2, 0), "b1+b2": (2, 0), "b1": (6, 0), "b2": (6, 0),
                 "2b1": (1, 0), "2b2": (1, 0)}


def test_sopq_hermann_multiplicities():
    m = _mults(preset("sopq-hermann", p=2, q=4))
    assert m == {"b1-b2": (1, 1), "b1+b2": (1, 1), "b1": (2, 2), "b2": (2, 2),
                 "2b1": (0, 1), "2b2": (0, 1)}


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_a_type_root_count(n):
    assert len(preset("sp-isotropy", n=n).roots) == n * (n - 1) // 2
    assert preset("sp-isotropy", n=n).rank == n - 1


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 4), (4, 7)])
def test_bc_type_root_count(p, q):
    # p(p-1) pair roots, p short roots, p long roots
    assert len(preset("supq-isotropy", p=p, q=q).roots) == p * p + p
    assert len(preset("supp-isotropy", p=p).roots) == p * p


@pytest.mark.parametrize("name,params", [
    ("nope", {"n": 3}),
    ("supq-isotropy", {"p": 3, "q": 3}),
    ("sopq-hermann", {"p": 4, "q": 2}),
    ("sp-isotropy", {"n": 1}),
    ("so2p-hermann", {"p": 1}),
    ("sp-isotropy", {}),
])
def test_bad_presets_rejected(name, params):
    with pytest.raises(RootDataError):
        preset(name, params)


@pytest.mark.parametrize("name,params", CASES + LARGE_CASES)
def test_roots_are_nonnegative_integer_combinations(name, params):
    d = preset(name, params)
    coef = d.simple_coefficients()
    assert np.all(coef > -1e-9)
    assert np.allclose(coef, np.round(coef), atol=1e-9)


@pytest.mark.parametrize("name,params", CASES + LARGE_CASES)
def test_serialize_roundtrip(name, params):
    d = preset(name, params)
    assert load_custom(dumps(d)) == d
    assert load_custom(to_document(d)) == d


def test_custom_zero_multiplicity_rejected():
    doc = to_document(preset("sp-isotropy", n=3))
    doc["roots"][1]["mV"] = 0
    with pytest.raises(RootDataError, match="root with zero total multiplicity"):
        load_custom(doc)


def test_custom_zero_root_rejected():
    doc = to_document(preset("sp-isotropy", n=3))
    doc["roots"][2]["coeffs"] = [0, 0, 0]
    with pytest.raises(RootDataError, match="zero root"):
        load_custom(doc)


def test_custom_non_spanning_simple_set():
    doc = to_document(preset("sp-isotropy", n=3))
    doc["simple"] = [0, 0]
    with pytest.raises(RootDataError):
        load_custom(doc)
    doc["simple"] = [0]
    with pytest.raises(RootDataError, match="non-spanning simple set"):
        load_custom(doc)


def test_custom_parse_failure():
    with pytest.raises(RootDataError, match="parse failure"):
        load_custom("{not json")
    with pytest.raises(RootDataError, match="parse failure"):
        load_custom(json.dumps({"name": "x"}))


def test_custom_rank_one_horizontal_root():
    doc = {"name": "interval", "rank": 1, "ambient_dim": 1,
           "roots": [{"coeffs": [2.0], "mV": 0, "mH": 1, "label": "2b1"}],
           "simple": [0], "highest": 0, "delta_factor": "1/2"}
    d = load_custom(doc)
    assert d.roots[0].kind == "H"
    V = np.sort(alcove_of(d).vertices[:, 0])
    assert np.allclose(V, [-np.pi / 4, np.pi / 4])


def test_custom_delta_factor_checked():
    doc = to_document(preset("sp-isotropy", n=3))
    doc["delta_factor"] = "1/2"
    with pytest.raises(RootDataError, match="delta_factor"):
        load_custom(doc)


def test_catalog_has_six_entries():
    assert len(PRESETS) == 6


def test_dominance_is_informational():
    # stored highest roots dominate for the A-type presets
    assert dominance_violations(preset("sp-isotropy", n=4)) == []
    assert isinstance(dominance_violations(preset("supq-isotropy", p=2, q=5)), list)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.integers(0, 4))
def test_supq_roundtrip_property(p, extra):
    d = preset("supq-isotropy", p=p, q=p + 1 + extra)
    assert load_custom(dumps(d)) == d
    assert all(r.m_V + r.m_H >= 1 for r in d.roots)
