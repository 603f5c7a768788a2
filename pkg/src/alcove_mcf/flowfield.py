"""The mean curvature vector field ``X`` on the alcove and its stratum restrictions.

Per positive root the field carries the term ``f(beta(w)) beta_sharp`` with

* ``f = -m_V cot(s)``                                     (V only),
* ``f = m_H tan(s)``                                      (H only),
* ``f = -[(m_V+m_H) cot(2s) + (m_V-m_H) csc(2s)]``        (both).

The stratum field ``X^sigma`` drops every root whose wall contains ``sigma``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .alcove import ON_STRATUM, StratumSpec, alcove_of
from .curvature import families_at, mean_curvature_vector
from .kernels import FieldSystem
from .rootdata import ActionData

__all__ = [
    "FieldError",
    "full_system",
    "stratum_system",
    "field_X",
    "field_X_sigma",
    "field_X_via_families",
    "div_X",
    "div_X_sigma",
    "jacobian_X",
]

_CLASS = {"V": 0, "H": 1, "VH": 2}


class FieldError(ValueError):
    pass


def _root_arrays(data: ActionData):
    cls = np.array([_CLASS[r.kind] for r in data.roots], dtype=np.int32)
    mv = np.array([r.m_V for r in data.roots], dtype=float)
    mh = np.array([r.m_H for r in data.roots], dtype=float)
    return cls, mv, mh


def full_system(data: ActionData, backend: str | None = None) -> FieldSystem:
    """Field system on the whole alcove in frame coordinates."""
    key = f"_system_{backend}"
    cached = data.__dict__.get(key)
    if cached is not None:
        return cached
    A = alcove_of(data)
    cls, mv, mh = _root_arrays(data)
    K = len(data.roots)
    sys_ = FieldSystem(A.roots_frame, np.zeros(K), cls, mv, mh, np.ones(K, dtype=np.uint8),
                       A.G, A.g, np.zeros(data.ambient_dim), A.frame, range(len(A.g)),
                       backend=backend)
    object.__setattr__(data, key, sys_)
    return sys_


def stratum_system(data: ActionData, sigma: StratumSpec, backend: str | None = None) -> FieldSystem:
    """Field system of ``X^sigma`` on the affine hull of ``sigma``."""
    if sigma.dim == 0:
        raise FieldError("zero-dimensional stratum carries no field")
    A = alcove_of(data)
    p0, T = A.stratum_frame(sigma)
    cls, mv, mh = _root_arrays(data)
    dropped = sigma.root_indices(A)
    inc = np.array([k not in dropped for k in range(len(data.roots))], dtype=np.uint8)
    R = A.roots_frame @ T
    c = A.roots_frame @ p0
    G, g, ids = [], [], []
    for i in range(len(A.g)):
        if i in sigma.active:
            continue
        gi = A.G[i] @ T
        nrm = float(np.linalg.norm(gi))
        if nrm < 1e-12:
            continue
        G.append(gi / nrm)
        g.append((A.G[i] @ p0 + A.g[i]) / nrm)
        ids.append(i)
    return FieldSystem(R, c, cls, mv, mh, inc, np.array(G).reshape(-1, sigma.dim), np.array(g),
                       A.frame @ p0, A.frame @ T, ids, backend=backend)


def _interior_frame(data: ActionData, w: Sequence[float]) -> np.ndarray:
    A = alcove_of(data)
    if not A.classify(w).interior:
        raise FieldError("point is not in the alcove interior")
    return A.to_frame(w)


def _on_sigma(data: ActionData, sigma: StratumSpec, w: Sequence[float]) -> None:
    loc = alcove_of(data).classify(w)
    if loc.kind != ON_STRATUM or loc.stratum.active != sigma.active:
        raise FieldError("point does not lie in the relative interior of the stratum")


def field_X(data: ActionData, w: Sequence[float]) -> np.ndarray:
    y = _interior_frame(data, w)
    return alcove_of(data).to_ambient(full_system(data).field(y))


def jacobian_X(data: ActionData, w: Sequence[float]) -> np.ndarray:
    """Jacobian of ``X`` in ambient coordinates (symmetric positive semidefinite)."""
    y = _interior_frame(data, w)
    E = alcove_of(data).frame
    return E @ full_system(data).jacobian(y) @ E.T


def div_X(data: ActionData, w: Sequence[float]) -> float:
    y = _interior_frame(data, w)
    return full_system(data).divergence(y)


def field_X_sigma(data: ActionData, sigma: StratumSpec, w: Sequence[float]) -> np.ndarray:
    _on_sigma(data, sigma, w)
    sys_ = stratum_system(data, sigma)
    return sys_.basis @ sys_.field(sys_.project(w))


def div_X_sigma(data: ActionData, sigma: StratumSpec, w: Sequence[float]) -> float:
    _on_sigma(data, sigma, w)
    sys_ = stratum_system(data, sigma)
    return sys_.divergence(sys_.project(w))


def field_X_via_families(data: ActionData, base: Sequence[float], w: Sequence[float]) -> np.ndarray:
    """``X`` at ``w`` from the curvature families built at ``base``."""
    _interior_frame(data, w)
    fams = families_at(data, base)
    return mean_curvature_vector(fams, np.asarray(w, dtype=float) - np.asarray(base, dtype=float))
