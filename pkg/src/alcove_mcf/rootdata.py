"""Restricted root systems with vertical/horizontal multiplicities.

A Hermann action is described, for the purposes of this package, entirely by
its positive restricted roots ``beta`` (given through their dual vectors
``beta#`` in an orthonormal ambient frame ``e_1, ..., e_m``) and the two
multiplicities ``m_V = dim(p_beta & q)`` and ``m_H = dim(p_beta & h)``.
Six catalog presets are provided; anything else can be supplied as a JSON
document (see :func:`load_custom`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

__all__ = [
    "RootDataError",
    "RestrictedRoot",
    "ActionData",
    "PRESETS",
    "preset",
    "load_custom",
    "to_document",
    "dumps",
    "dominance_violations",
]

COEFF_TOL = 1e-9


class RootDataError(ValueError):
    """Invalid preset request or custom root-system document."""


@dataclass(frozen=True)
class RestrictedRoot:
    vector: tuple[float, ...]
    m_V: int
    m_H: int
    label: str = ""

    @property
    def in_V(self) -> bool:
        return self.m_V > 0

    @property
    def in_H(self) -> bool:
        return self.m_H > 0

    @property
    def kind(self) -> str:
        """``'V'`` for V\\H, ``'H'`` for H\\V and ``'VH'`` for V&H."""
        if self.in_V and self.in_H:
            return "VH"
        return "V" if self.in_V else "H"

    def __call__(self, x: Sequence[float]) -> float:
        return float(np.dot(self.vector, x))

    @property
    def sharp(self) -> np.ndarray:
        return np.asarray(self.vector, dtype=float)


@dataclass(frozen=True)
class ActionData:
    """One Hermann action reduced to its restricted-root data."""

    name: str
    rank: int
    roots: tuple[RestrictedRoot, ...]
    simple_indices: tuple[int, ...]
    highest_index: int
    delta_factor: Fraction
    params: Mapping[str, int] = field(default_factory=dict, compare=True, hash=False)
    type_label: str = ""

    def __hash__(self) -> int:
        return hash((self.name, self.roots, self.simple_indices, self.highest_index,
                     tuple(sorted(self.params.items()))))

    @property
    def ambient_dim(self) -> int:
        return len(self.roots[0].vector)

    @property
    def root_matrix(self) -> np.ndarray:
        """Rows are the dual vectors ``beta#`` in ambient coordinates."""
        return np.array([r.vector for r in self.roots], dtype=float)

    @property
    def simple_roots(self) -> list[RestrictedRoot]:
        return [self.roots[i] for i in self.simple_indices]

    @property
    def highest(self) -> RestrictedRoot:
        return self.roots[self.highest_index]

    def label(self, index: int) -> str:
        return self.roots[index].label or f"root{index}"

    def simple_coefficients(self) -> np.ndarray:
        """Coefficients of each root in the simple-root basis (one row per root)."""
        S = np.array([r.vector for r in self.simple_roots], dtype=float)
        coef, *_ = np.linalg.lstsq(S.T, self.root_matrix.T, rcond=None)
        return coef.T


# ---------------------------------------------------------------------------
# catalog


def _unit(m: int, i: int) -> np.ndarray:
    v = np.zeros(m)
    v[i] = 1.0
    return v


def _a_type(n: int, mV: int, mH: int) -> tuple[list[RestrictedRoot], list[int], int]:
    roots: list[RestrictedRoot] = []
    index = {}
    for i in range(n):
        for j in range(i + 1, n):
            vec = _unit(n, i) - _unit(n, j)
            index[(i, j)] = len(roots)
            roots.append(RestrictedRoot(tuple(vec), mV, mH, f"b{i + 1}{j + 1}"))
    simple = [index[(i, i + 1)] for i in range(n - 1)]
    return roots, simple, index[(0, n - 1)]


def _bc_type(p: int, pair: tuple[int, int], axis: tuple[int, int] | None,
             double: tuple[int, int]) -> tuple[list[RestrictedRoot], dict]:
    """Roots b_i-b_j, b_i+b_j, (b_i), 2b_i with the given (m_V, m_H) per class."""
    roots: list[RestrictedRoot] = []
    index: dict = {}
    for i in range(p):
        for j in range(i + 1, p):
            index[("-", i, j)] = len(roots)
            roots.append(RestrictedRoot(tuple(_unit(p, i) - _unit(p, j)), *pair,
                                        f"b{i + 1}-b{j + 1}"))
    for i in range(p):
        for j in range(i + 1, p):
            index[("+", i, j)] = len(roots)
            roots.append(RestrictedRoot(tuple(_unit(p, i) + _unit(p, j)), *pair,
                                        f"b{i + 1}+b{j + 1}"))
    if axis is not None:
        for i in range(p):
            index[("1", i)] = len(roots)
            roots.append(RestrictedRoot(tuple(_unit(p, i)), *axis, f"b{i + 1}"))
    for i in range(p):
        index[("2", i)] = len(roots)
        roots.append(RestrictedRoot(tuple(2.0 * _unit(p, i)), *double, f"2b{i + 1}"))
    return roots, index


def _require(params: Mapping[str, int], *names: str) -> list[int]:
    out = []
    for name in names:
        if name not in params:
            raise RootDataError(f"missing parameter {name!r}")
        value = params[name]
        if int(value) != value:
            raise RootDataError(f"parameter {name!r} must be an integer")
        out.append(int(value))
    return out


def _sp_isotropy(params):
    (n,) = _require(params, "n")
    if n < 2:
        raise RootDataError("sp-isotropy needs n >= 2")
    roots, simple, hi = _a_type(n, 4, 0)
    return ActionData("sp-isotropy", n - 1, tuple(roots), tuple(simple), hi,
                      Fraction(1), {"n": n}, "A")


def _so2n_on_su2n(params):
    (n,) = _require(params, "n")
    if n < 2:
        raise RootDataError("so2n-on-su2n needs n >= 2")
    roots, simple, hi = _a_type(n, 2, 2)
    return ActionData("so2n-on-su2n", n - 1, tuple(roots), tuple(simple), hi,
                      Fraction(1, 2), {"n": n}, "A")


def _check_pq(name, params):
    p, q = _require(params, "p", "q")
    if p < 2:
        raise RootDataError(f"{name} needs p >= 2")
    if p >= q:
        raise RootDataError(f"{name} needs p < q (got p={p}, q={q})")
    return p, q


def _supq_isotropy(params):
    p, q = _check_pq("supq-isotropy", params)
    roots, idx = _bc_type(p, (2, 0), (2 * (q - p), 0), (1, 0))
    simple = [idx[("-", i, i + 1)] for i in range(p - 1)] + [idx[("1", p - 1)]]
    return ActionData("supq-isotropy", p, tuple(roots), tuple(simple), idx[("+", 0, 1)],
                      Fraction(1), {"p": p, "q": q}, "BC")


def _supp_isotropy(params):
    (p,) = _require(params, "p")
    if p < 2:
        raise RootDataError("supp-isotropy needs p >= 2")
    roots, idx = _bc_type(p, (2, 0), None, (1, 0))
    simple = [idx[("-", i, i + 1)] for i in range(p - 1)] + [idx[("2", p - 1)]]
    return ActionData("supp-isotropy", p, tuple(roots), tuple(simple), idx[("2", 0)],
                      Fraction(1), {"p": p}, "C")


def _sopq_hermann(params):
    p, q = _check_pq("sopq-hermann", params)
    roots, idx = _bc_type(p, (1, 1), (q - p, q - p), (0, 1))
    simple = [idx[("-", i, i + 1)] for i in range(p - 1)] + [idx[("1", p - 1)]]
    return ActionData("sopq-hermann", p, tuple(roots), tuple(simple), idx[("+", 0, 1)],
                      Fraction(1, 2), {"p": p, "q": q}, "BC")


def _so2p_hermann(params):
    (p,) = _require(params, "p")
    if p < 2:
        raise RootDataError("so2p-hermann needs p >= 2")
    roots, idx = _bc_type(p, (1, 1), None, (0, 1))
    simple = [idx[("-", i, i + 1)] for i in range(p - 1)] + [idx[("2", p - 1)]]
    return ActionData("so2p-hermann", p, tuple(roots), tuple(simple), idx[("2", 0)],
                      Fraction(1, 2), {"p": p}, "C")


# name -> (builder, description, parameter names, rank formula)
PRESETS: dict[str, tuple[Any, str, tuple[str, ...], str]] = {
    "sp-isotropy": (_sp_isotropy, "Sp(n) on SU(2n)/Sp(n)", ("n",), "n-1"),
    "so2n-on-su2n": (_so2n_on_su2n, "SO(2n) on SU(2n)/Sp(n)", ("n",), "n-1"),
    "supq-isotropy": (_supq_isotropy, "S(U(p)xU(q)) on SU(p+q)/S(U(p)xU(q))", ("p", "q"), "p"),
    "supp-isotropy": (_supp_isotropy, "S(U(p)xU(p)) on SU(2p)/S(U(p)xU(p))", ("p",), "p"),
    "sopq-hermann": (_sopq_hermann, "SO(p+q) on SU(p+q)/S(U(p)xU(q))", ("p", "q"), "p"),
    "so2p-hermann": (_so2p_hermann, "SO(2p) on SU(2p)/S(U(p)xU(p))", ("p",), "p"),
}


def preset(name: str, params: Mapping[str, int] | None = None, **kwargs: int) -> ActionData:
    """Build one of the six catalog actions.

    >>> len(preset("sp-isotropy", n=3).roots)
    3
    """
    merged = dict(params or {})
    merged.update(kwargs)
    try:
        builder = PRESETS[name][0]
    except KeyError:
        raise RootDataError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    data = builder(merged)
    validate(data)
    return data


# ---------------------------------------------------------------------------
# validation


def validate(data: ActionData) -> None:
    """Raise :class:`RootDataError` naming the first violated invariant."""
    if not data.roots:
        raise RootDataError("root list is empty")
    m = data.ambient_dim
    for k, r in enumerate(data.roots):
        if len(r.vector) != m:
            raise RootDataError(f"root {k} has length {len(r.vector)}, expected {m}")
        vec = np.asarray(r.vector, dtype=float)
        if not np.all(np.isfinite(vec)):
            raise RootDataError(f"root {k} has non-finite coefficients")
        if np.linalg.norm(vec) == 0.0:
            raise RootDataError(f"zero root (index {k})")
        if r.m_V < 0 or r.m_H < 0:
            raise RootDataError(f"negative multiplicity on root {k}")
        if r.m_V + r.m_H < 1:
            raise RootDataError(f"root with zero total multiplicity (index {k})")
    n = len(data.roots)
    for i in list(data.simple_indices) + [data.highest_index]:
        if not 0 <= i < n:
            raise RootDataError(f"root index {i} out of range")
    if len(set(data.simple_indices)) != len(data.simple_indices):
        raise RootDataError("duplicate simple root index")
    R = data.root_matrix
    span_rank = np.linalg.matrix_rank(R, tol=1e-9)
    if span_rank != data.rank:
        raise RootDataError(f"rank {data.rank} does not match root span dimension {span_rank}")
    S = R[list(data.simple_indices)]
    if len(data.simple_indices) != data.rank or np.linalg.matrix_rank(S, tol=1e-9) != data.rank:
        raise RootDataError("non-spanning simple set")
    coef = data.simple_coefficients()
    if not np.allclose(coef @ S, R, atol=COEFF_TOL):
        raise RootDataError("a root lies outside the span of the simple roots")
    if np.any(coef < -COEFF_TOL) or np.any(np.abs(coef - np.round(coef)) > COEFF_TOL):
        bad = int(np.argmax(np.any(coef < -COEFF_TOL, axis=1)
                            | np.any(np.abs(coef - np.round(coef)) > COEFF_TOL, axis=1)))
        raise RootDataError(
            f"root {data.label(bad)} is not a nonnegative integer combination of simple roots")
    hi = data.highest
    expected = Fraction(1) if (hi.in_V and not hi.in_H) else Fraction(1, 2)
    if data.delta_factor != expected:
        raise RootDataError(
            f"delta_factor must be {expected} for a highest root of class {hi.kind}")


def dominance_violations(data: ActionData) -> list[str]:
    """Labels of roots in V or 2H that the stored highest root fails to dominate.

    Purely informational: two presets store a highest root that does not
    dominate ``2 b_1``; nothing downstream relies on dominance.
    """
    S = np.array([r.vector for r in data.simple_roots]).T
    hi = data.highest.sharp
    out = []
    for r in data.roots:
        cands = []
        if r.in_V:
            cands.append((r.label, r.sharp))
        if r.in_H:
            cands.append(("2(" + r.label + ")", 2.0 * r.sharp))
        for label, vec in cands:
            coef, *_ = np.linalg.lstsq(S, hi - vec, rcond=None)
            if np.any(coef < -COEFF_TOL):
                out.append(label)
    return out


# ---------------------------------------------------------------------------
# custom documents


def _parse_fraction(value: Any) -> Fraction:
    try:
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value).limit_denominator(1000)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise RootDataError(f"bad delta_factor {value!r}") from exc


def load_custom(document: str | bytes | Mapping[str, Any]) -> ActionData:
    """Parse and validate a JSON root-system document.

    Fields: ``name``, ``rank``, ``ambient_dim``, ``roots`` (list of
    ``{coeffs, mV, mH, label}``), ``simple``, ``highest``, ``delta_factor``
    and optionally ``params``.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise RootDataError(f"parse failure: {exc}") from exc
    else:
        doc = dict(document)
    if not isinstance(doc, dict):
        raise RootDataError("parse failure: top level must be an object")
    try:
        ambient = int(doc["ambient_dim"])
        roots = []
        for k, item in enumerate(doc["roots"]):
            coeffs = tuple(float(c) for c in item["coeffs"])
            if len(coeffs) != ambient:
                raise RootDataError(f"root {k}: coeffs length {len(coeffs)} != ambient_dim {ambient}")
            roots.append(RestrictedRoot(coeffs, int(item.get("mV", 0)), int(item.get("mH", 0)),
                                        str(item.get("label", f"root{k}"))))
        data = ActionData(
            name=str(doc["name"]),
            rank=int(doc["rank"]),
            roots=tuple(roots),
            simple_indices=tuple(int(i) for i in doc["simple"]),
            highest_index=int(doc["highest"]),
            delta_factor=_parse_fraction(doc["delta_factor"]),
            params={str(k): int(v) for k, v in dict(doc.get("params", {})).items()},
            type_label=str(doc.get("type", "")),
        )
    except KeyError as exc:
        raise RootDataError(f"parse failure: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, RootDataError):
            raise
        raise RootDataError(f"parse failure: {exc}") from exc
    validate(data)
    return data


def to_document(data: ActionData) -> dict[str, Any]:
    return {
        "name": data.name,
        "rank": data.rank,
        "ambient_dim": data.ambient_dim,
        "type": data.type_label,
        "roots": [
            {"coeffs": list(r.vector), "mV": r.m_V, "mH": r.m_H, "label": r.label}
            for r in data.roots
        ],
        "simple": list(data.simple_indices),
        "highest": data.highest_index,
        "delta_factor": str(data.delta_factor),
        "params": dict(data.params),
    }


def dumps(data: ActionData, **kwargs: Any) -> str:
    return json.dumps(to_document(data), **kwargs)
