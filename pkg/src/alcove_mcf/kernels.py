"""Backend selection for the hot kernels and the packed field system.

The compiled extension is used when it imports; setting ``ALCOVE_MCF_PURE=1``
forces the numpy fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _pykernels

__all__ = ["BACKEND", "available_backends", "get_backend", "FieldSystem"]


def _load_compiled() -> ModuleType | None:
    try:
        from . import _ckernels  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()
_BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

if os.environ.get("ALCOVE_MCF_PURE", "") not in ("", "0") or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str | None = None) -> ModuleType:
    name = name or BACKEND
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; have {available_backends()}") from None


class FieldSystem:
    """The field ``X`` restricted to an affine slice ``x = origin + basis @ z``.

    ``R @ z + c`` gives every root value, ``G @ z + g`` every wall distance
    measured inside the slice.  ``wall_ids`` maps rows of ``G`` back to alcove
    wall indices.
    """

    def __init__(self, R, c, cls, mv, mh, inc, G, g, origin, basis, wall_ids, backend=None):
        self.R = np.ascontiguousarray(R, dtype=np.float64)
        self.c = np.ascontiguousarray(c, dtype=np.float64)
        self.cls = np.ascontiguousarray(cls, dtype=np.int32)
        self.mv = np.ascontiguousarray(mv, dtype=np.float64)
        self.mh = np.ascontiguousarray(mh, dtype=np.float64)
        self.inc = np.ascontiguousarray(inc, dtype=np.uint8)
        self.G = np.ascontiguousarray(G, dtype=np.float64).reshape(-1, self.R.shape[1])
        self.g = np.ascontiguousarray(g, dtype=np.float64)
        self.origin = np.asarray(origin, dtype=np.float64)
        self.basis = np.asarray(basis, dtype=np.float64)
        self.wall_ids = tuple(wall_ids)
        self.backend_name = backend or BACKEND
        self._k = get_backend(self.backend_name)

    @property
    def dim(self) -> int:
        return self.R.shape[1]

    def with_backend(self, name: str) -> "FieldSystem":
        return FieldSystem(self.R, self.c, self.cls, self.mv, self.mh, self.inc, self.G, self.g,
                           self.origin, self.basis, self.wall_ids, backend=name)

    def _args(self):
        return self.R, self.c, self.cls, self.mv, self.mh, self.inc

    def lift(self, z) -> np.ndarray:
        return self.origin + self.basis @ np.asarray(z, dtype=float)

    def project(self, x) -> np.ndarray:
        return self.basis.T @ (np.asarray(x, dtype=float) - self.origin)

    def field(self, z) -> np.ndarray:
        return self._k.field(*self._args(), np.ascontiguousarray(z, dtype=np.float64))

    def field_many(self, Z) -> np.ndarray:
        Z = np.ascontiguousarray(Z, dtype=np.float64).reshape(-1, self.dim)
        return self._k.field_many(*self._args(), Z)

    def jacobian(self, z) -> np.ndarray:
        return self._k.jacobian(*self._args(), np.ascontiguousarray(z, dtype=np.float64))

    def divergence(self, z) -> float:
        return float(self._k.divergence(*self._args(), np.ascontiguousarray(z, dtype=np.float64)))

    def slacks(self, z) -> np.ndarray:
        return self.G @ np.asarray(z, dtype=float) + self.g

    def min_slack(self, z) -> float:
        if self.G.shape[0] == 0:
            return np.inf
        return float(self._k.min_slack(self.G, self.g, np.ascontiguousarray(z, dtype=np.float64)))

    def step(self, z, h, k1, rtol, atol):
        return self._k.dopri_step(*self._args(), self.G, self.g,
                                  np.ascontiguousarray(z, dtype=np.float64), float(h),
                                  np.ascontiguousarray(k1, dtype=np.float64),
                                  float(rtol), float(atol))
