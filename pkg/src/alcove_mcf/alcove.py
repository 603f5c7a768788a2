"""The fundamental alcove and its boundary strata.

The alcove is cut out by one constraint family per positive root:

* ``0 < beta < pi``            for roots in V only,
* ``-pi/2 < beta < pi/2``      for roots in H only,
* ``0 < beta < pi/2``          for roots in both V and H.

The full (redundant) system is kept; a linear-programming pass marks which
constraints actually carry a facet.  All geometry is done in an orthonormal
frame of the root span and converted back to ambient coordinates at the
surface of the API.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog

from .rootdata import ActionData

__all__ = [
    "AlcoveError",
    "WallConstraint",
    "StratumSpec",
    "Location",
    "Alcove",
    "build_alcove",
    "alcove_of",
    "classify",
    "enumerate_strata",
    "reflect",
    "INTERIOR",
    "ON_STRATUM",
    "OUTSIDE",
]

INTERIOR = "interior"
ON_STRATUM = "stratum"
OUTSIDE = "outside"

DEFAULT_TOL = 1e-9
_GEOM_TOL = 1e-9

LOWER_V = "lower-V"
UPPER_V_ONLY = "upper-V\\H"
BAND_H = "band-H\\V"
UPPER_VH = "upper-V&H"


class AlcoveError(ValueError):
    """The constraint system does not describe a full-dimensional alcove."""


@dataclass(frozen=True)
class WallConstraint:
    """One half-space ``beta(x) < level`` (``upper``) or ``beta(x) > level``."""

    root_index: int
    kind: str
    level: float
    upper: bool
    label: str = ""
    facet: bool = False

    def slack(self, beta_value: float) -> float:
        return self.level - beta_value if self.upper else beta_value - self.level

    def describe(self) -> str:
        op = "<" if self.upper else ">"
        return f"{self.label} {op} {_fmt_level(self.level)}"


def _fmt_level(level: float) -> str:
    for num, txt in ((0.0, "0"), (math.pi, "pi"), (math.pi / 2, "pi/2"), (-math.pi / 2, "-pi/2")):
        if abs(level - num) < 1e-15:
            return txt
    return repr(level)


@dataclass(frozen=True)
class StratumSpec:
    """A face of the alcove closure, identified by the walls it lies on.

    ``active`` holds indices into :attr:`Alcove.walls`.  ``representative``
    is an ambient point of the face's relative interior and takes no part in
    equality.
    """

    active: frozenset[int]
    dim: int
    representative: tuple[float, ...] = field(default=(), compare=False)

    def root_indices(self, alcove: "Alcove") -> frozenset[int]:
        return frozenset(alcove.walls[i].root_index for i in self.active)

    def walls(self, alcove: "Alcove") -> list[WallConstraint]:
        return [alcove.walls[i] for i in sorted(self.active)]

    def describe(self, alcove: "Alcove") -> str:
        return ", ".join(w.describe() for w in self.walls(alcove))


class Location(NamedTuple):
    kind: str
    stratum: StratumSpec | None = None

    @property
    def interior(self) -> bool:
        return self.kind == INTERIOR


def _frame(data: ActionData) -> np.ndarray:
    """Orthonormal basis (columns) of the root span.

    When the roots span the whole ambient space the standard basis is used, so
    frame and ambient coordinates coincide; otherwise Gram-Schmidt on the
    simple roots (for A-type this gives ``(e1-e2)/sqrt2, (e1+e2-2e3)/sqrt6``).
    """
    m = data.ambient_dim
    if data.rank == m:
        return np.eye(m)
    basis: list[np.ndarray] = []
    for r in data.simple_roots:
        v = r.sharp.copy()
        for b in basis:
            v -= np.dot(v, b) * b
        basis.append(v / np.linalg.norm(v))
    return np.array(basis).T


def _wall_constraints(data: ActionData) -> list[WallConstraint]:
    walls = []
    for k, r in enumerate(data.roots):
        lab = data.label(k)
        if r.kind == "V":
            walls.append(WallConstraint(k, LOWER_V, 0.0, False, lab))
            walls.append(WallConstraint(k, UPPER_V_ONLY, math.pi, True, lab))
        elif r.kind == "H":
            walls.append(WallConstraint(k, BAND_H, -math.pi / 2, False, lab))
            walls.append(WallConstraint(k, BAND_H, math.pi / 2, True, lab))
        else:
            walls.append(WallConstraint(k, LOWER_V, 0.0, False, lab))
            walls.append(WallConstraint(k, UPPER_VH, math.pi / 2, True, lab))
    return walls


class Alcove:
    """Facet-reduced alcove of one :class:`ActionData`.

    Constraint ``i`` reads ``G[i] @ y + g[i] > 0`` in frame coordinates ``y``,
    with unit-norm rows so that ``G @ y + g`` is the Euclidean distance to
    each wall hyperplane.
    """

    def __init__(self, data: ActionData):
        self.data = data
        self.rank = data.rank
        self.frame = _frame(data)
        self.roots_frame = data.root_matrix @ self.frame
        walls = _wall_constraints(data)

        G, g = [], []
        for w in walls:
            a = self.roots_frame[w.root_index]
            sign = -1.0 if w.upper else 1.0
            norm = np.linalg.norm(a)
            G.append(sign * a / norm)
            g.append(-sign * w.level / norm)
        self.G = np.array(G)
        self.g = np.array(g)

        self._groups = self._hyperplane_groups()
        self.center, self.inradius = self._chebyshev_center()
        if self.inradius <= _GEOM_TOL:
            raise AlcoveError("empty interior: constraint system is infeasible or degenerate")
        facet_groups = [grp for grp in self._groups if self._is_facet(grp)]
        facet_ids = {i for grp in facet_groups for i in grp}
        self.walls = tuple(
            WallConstraint(w.root_index, w.kind, w.level, w.upper, w.label, i in facet_ids)
            for i, w in enumerate(walls)
        )
        self.facet_groups = [tuple(grp) for grp in facet_groups]
        self.vertices_frame = self._vertices()
        self._strata_cache: dict[int, list[StratumSpec]] = {}

    # -- coordinates -------------------------------------------------------

    def to_frame(self, x: Sequence[float]) -> np.ndarray:
        return self.frame.T @ np.asarray(x, dtype=float)

    def to_ambient(self, y: Sequence[float]) -> np.ndarray:
        return self.frame @ np.asarray(y, dtype=float)

    @property
    def facets(self) -> list[WallConstraint]:
        return [w for w in self.walls if w.facet]

    @property
    def vertices(self) -> np.ndarray:
        return self.vertices_frame @ self.frame.T

    def distances(self, x: Sequence[float]) -> np.ndarray:
        """Signed distances from an ambient point to every wall (positive inside)."""
        return self.G @ self.to_frame(x) + self.g

    def off_span(self, x: Sequence[float]) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.to_ambient(self.to_frame(x))))

    # -- construction helpers ---------------------------------------------

    def _hyperplane_groups(self) -> list[list[int]]:
        groups: list[list[int]] = []
        for i in range(len(self.g)):
            for grp in groups:
                j = grp[0]
                if np.allclose(self.G[i], self.G[j], atol=1e-12) and abs(self.g[i] - self.g[j]) < 1e-12:
                    grp.append(i)
                    break
            else:
                groups.append([i])
        return groups

    def _chebyshev_center(self) -> tuple[np.ndarray, float]:
        r = self.rank
        # maximise t subject to G y + g >= t
        c = np.zeros(r + 1)
        c[-1] = -1.0
        A = np.hstack([-self.G, np.ones((len(self.g), 1))])
        res = linprog(c, A_ub=A, b_ub=self.g, bounds=[(None, None)] * r + [(None, 10.0)],
                      method="highs")
        if res.status != 0:
            raise AlcoveError(f"empty interior: LP failed ({res.message})")
        return res.x[:r], float(res.x[-1])

    def _is_facet(self, grp: Sequence[int]) -> bool:
        r = self.rank
        i0 = grp[0]
        others = [j for j in range(len(self.g)) if j not in grp]
        c = np.zeros(r + 1)
        c[-1] = -1.0
        A_ub = np.hstack([-self.G[others], np.ones((len(others), 1))])
        A_eq = np.hstack([self.G[i0][None, :], np.zeros((1, 1))])
        res = linprog(c, A_ub=A_ub, b_ub=self.g[others], A_eq=A_eq, b_eq=[-self.g[i0]],
                      bounds=[(None, None)] * r + [(None, 1.0)], method="highs")
        return res.status == 0 and res.x[-1] > _GEOM_TOL

    def _vertices(self) -> np.ndarray:
        reps = [grp[0] for grp in self.facet_groups]
        verts: list[np.ndarray] = []
        for combo in itertools.combinations(reps, self.rank):
            A = self.G[list(combo)]
            if abs(np.linalg.det(A)) < 1e-12:
                continue
            y = np.linalg.solve(A, -self.g[list(combo)])
            if np.min(self.G @ y + self.g) < -_GEOM_TOL:
                continue
            if not any(np.linalg.norm(y - v) < 1e-9 for v in verts):
                verts.append(y)
        return np.array(verts)

    # -- queries -----------------------------------------------------------

    def classify(self, x: Sequence[float], tol: float = DEFAULT_TOL) -> Location:
        if tol <= 0:
            raise ValueError("tol must be positive")
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)) or self.off_span(x) > max(tol, 1e-12):
            return Location(OUTSIDE)
        d = self.G @ self.to_frame(x) + self.g
        if np.min(d) < -tol:
            return Location(OUTSIDE)
        binding = frozenset(int(i) for i in np.nonzero(d <= tol)[0])
        if not binding:
            return Location(INTERIOR)
        return Location(ON_STRATUM, StratumSpec(binding, self._face_dim(binding), tuple(x)))

    def _face_dim(self, active: frozenset[int]) -> int:
        if not active:
            return self.rank
        return self.rank - int(np.linalg.matrix_rank(self.G[sorted(active)], tol=1e-9))

    def strata(self, dim: int) -> list[StratumSpec]:
        """All faces of the closure of the given dimension (``0 <= dim < rank``)."""
        if not 0 <= dim < self.rank:
            raise ValueError(f"dim must be in [0, {self.rank})")
        if dim in self._strata_cache:
            return self._strata_cache[dim]
        V = self.vertices_frame
        on = np.abs(V @ self.G.T + self.g) <= 1e-9  # (vertex, constraint)
        reps = [grp[0] for grp in self.facet_groups]
        seen: dict[frozenset[int], StratumSpec] = {}
        for combo in itertools.combinations(reps, self.rank - dim):
            vmask = np.all(on[:, list(combo)], axis=1)
            if not vmask.any():
                continue
            pts = V[vmask]
            aff = np.linalg.matrix_rank(pts[1:] - pts[0], tol=1e-9) if len(pts) > 1 else 0
            if aff != dim:
                continue
            active = frozenset(int(i) for i in np.nonzero(np.all(on[vmask], axis=0))[0])
            if active in seen:
                continue
            rep = self.to_ambient(pts.mean(axis=0))
            seen[active] = StratumSpec(active, dim, tuple(float(c) for c in rep))
        out = sorted(seen.values(), key=lambda s: sorted(s.active))
        self._strata_cache[dim] = out
        return out

    def stratum_vertices(self, sigma: StratumSpec) -> np.ndarray:
        """Frame coordinates of the alcove vertices lying on ``sigma``'s closure."""
        V = self.vertices_frame
        act = sorted(sigma.active)
        mask = np.all(np.abs(V @ self.G[act].T + self.g[act]) <= 1e-9, axis=1)
        return V[mask]

    def stratum_frame(self, sigma: StratumSpec) -> tuple[np.ndarray, np.ndarray]:
        """Point and orthonormal tangent basis (frame coordinates) of ``sigma``'s hull."""
        act = sorted(sigma.active)
        N = self.G[act]
        _, s, vt = np.linalg.svd(N)
        k = int(np.sum(s > 1e-9))
        T = vt[k:].T
        if sigma.representative:
            p0 = self.to_frame(sigma.representative)
        else:
            p0 = self.stratum_vertices(sigma).mean(axis=0)
        return p0, T

    def reflect(self, wall: WallConstraint, x: Sequence[float]) -> np.ndarray:
        beta = self.data.roots[wall.root_index].sharp
        x = np.asarray(x, dtype=float)
        return x - (np.dot(beta, x) - wall.level) * 2.0 * beta / np.dot(beta, beta)

    def sample_interior(self, rng: np.random.Generator, n: int, margin: float = 0.0) -> np.ndarray:
        """Uniform samples (ambient coordinates) with wall distance above ``margin``."""
        lo = self.vertices_frame.min(axis=0)
        hi = self.vertices_frame.max(axis=0)
        out: list[np.ndarray] = []
        while len(out) < n:
            Y = rng.uniform(lo, hi, size=(max(64, 4 * n), self.rank))
            ok = np.min(Y @ self.G.T + self.g, axis=1) > margin
            out.extend(Y[ok])
        return np.array(out[:n]) @ self.frame.T

    def sample_boundary(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Random points on facets (ambient coordinates)."""
        pts = []
        facets = self.strata(self.rank - 1)
        while len(pts) < n:
            sigma = facets[rng.integers(len(facets))]
            V = self.stratum_vertices(sigma)
            w = rng.dirichlet(np.ones(len(V)))
            pts.append(self.to_ambient(w @ V))
        return np.array(pts)


def build_alcove(data: ActionData) -> Alcove:
    """Construct the alcove from the three-case constraint display and facet-reduce it."""
    return Alcove(data)


def alcove_of(data: ActionData) -> Alcove:
    """Cached :func:`build_alcove` (one alcove per ``ActionData`` instance)."""
    cached = data.__dict__.get("_alcove")
    if cached is None:
        cached = Alcove(data)
        object.__setattr__(data, "_alcove", cached)
    return cached


def classify(data: ActionData, x: Sequence[float], tol: float = DEFAULT_TOL) -> Location:
    return alcove_of(data).classify(x, tol)


def enumerate_strata(data: ActionData, dim: int) -> list[StratumSpec]:
    return alcove_of(data).strata(dim)


def reflect(data: ActionData, wall: WallConstraint, x: Sequence[float]) -> np.ndarray:
    return alcove_of(data).reflect(wall, x)
