"""Principal curvature families of the lifted submanifold and the regularized trace.

A family ``(lambda_a, b_a, m_e, m_o)`` stands for the arithmetic progression of
principal curvatures ``lambda_a / (1 + b_a j)``, ``j`` in Z, with multiplicity
``m_e`` for even ``j`` and ``m_o`` for odd ``j``.  On the parallel submanifold
through the offset ``w`` the shape operator in direction ``v`` has eigenvalues

    lambda_a(v) / (1 + b_a j - lambda_a(w)).

The trace is only conditionally convergent; it is summed in ``(j, -j)`` pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import polygamma

from .alcove import alcove_of
from .rootdata import ActionData

__all__ = [
    "CurvatureError",
    "CurvatureFamily",
    "families_at",
    "spectrum_parallel",
    "trace_closed",
    "trace_oracle",
    "mean_curvature_vector",
    "sup_norm_shape",
    "max_sup_norm",
    "focal_distance",
    "cot_identity_closed",
    "cot_identity_partial",
    "cot_identity_tail",
]

POLE_GUARD = 1e-12


class CurvatureError(ValueError):
    pass


@dataclass(frozen=True)
class CurvatureFamily:
    lambda_vec: tuple[float, ...]
    b: float
    m_e: int
    m_o: int
    source_root: int | None = None

    @property
    def normal(self) -> np.ndarray:
        return np.asarray(self.lambda_vec, dtype=float)

    def __call__(self, v: Sequence[float]) -> float:
        return float(np.dot(self.lambda_vec, v))

    def multiplicity(self, j: int) -> int:
        return self.m_e if j % 2 == 0 else self.m_o

    def denominator(self, w: Sequence[float], j: int) -> float:
        return 1.0 + self.b * j - self(w)


def families_at(data: ActionData, Y0: Sequence[float]) -> list[CurvatureFamily]:
    """One curvature family per positive root, built at the interior base point ``Y0``."""
    Y0 = np.asarray(Y0, dtype=float)
    if not alcove_of(data).classify(Y0).interior:
        raise CurvatureError("families undefined at boundary (base point not interior)")
    out = []
    for k, r in enumerate(data.roots):
        beta = r.sharp
        s = float(beta @ Y0)
        if r.kind == "V":
            scale, b, me, mo = s, math.pi / s, r.m_V, r.m_V
        elif r.kind == "H":
            scale = s + math.pi / 2
            b, me, mo = math.pi / scale, r.m_H, r.m_H
        else:
            scale, b, me, mo = s, math.pi / (2 * s), r.m_V, r.m_H
        lam = tuple(float(c) for c in -beta / scale)
        out.append(CurvatureFamily(lam, b, me, mo, k))
    return out


def _check_nonfocal(fam: CurvatureFamily, a: int, w, j: int) -> float:
    den = fam.denominator(w, j)
    if abs(den) < POLE_GUARD:
        raise CurvatureError(f"focal configuration: family {a}, j={j}")
    return den


def spectrum_parallel(families: Sequence[CurvatureFamily], v: Sequence[float],
                      w: Sequence[float], jmax: int = 50) -> list[tuple[float, int, int, int]]:
    """Truncated spectrum as ``(eigenvalue, multiplicity, family, j)`` tuples."""
    out = []
    for a, fam in enumerate(families):
        lv = fam(v)
        for j in range(-jmax, jmax + 1):
            m = fam.multiplicity(j)
            if m == 0:
                continue
            den = _check_nonfocal(fam, a, w, j)
            out.append((lv / den, m, a, j))
    return out


def _angle(fam: CurvatureFamily, w) -> float:
    theta = math.pi * (1.0 - fam(w)) / fam.b
    if abs(math.sin(theta)) < POLE_GUARD:
        raise CurvatureError("focal configuration")
    return theta


def _coefficient(fam: CurvatureFamily, w) -> float:
    theta = _angle(fam, w)
    val = (fam.m_e + fam.m_o) / math.tan(theta)
    if fam.m_e != fam.m_o:
        val += (fam.m_e - fam.m_o) / math.sin(theta)
    return val * math.pi / (2.0 * fam.b)


def mean_curvature_vector(families: Sequence[CurvatureFamily], w: Sequence[float]) -> np.ndarray:
    """Vector ``H`` with ``trace_closed(v, w) = <H, v>`` for every ``v``."""
    out = np.zeros(len(families[0].lambda_vec))
    for fam in families:
        out += _coefficient(fam, w) * fam.normal
    return out


def trace_closed(families: Sequence[CurvatureFamily], v: Sequence[float],
                 w: Sequence[float]) -> float:
    return float(sum(_coefficient(fam, w) * fam(v) for fam in families))


def _paired_sum(c: float, b: float, m_e: int, m_o: int, N: int) -> float:
    j = np.arange(1, N + 1, dtype=float)
    m = np.where(np.arange(1, N + 1) % 2 == 0, m_e, m_o).astype(float)
    # 1/(c+bj) + 1/(c-bj)
    pair = 2.0 * c / (c * c - (b * j) ** 2)
    return m_e / c + float(np.sum((m * pair)[::-1]))


def _paired_tail(c: float, b: float, m_e: int, m_o: int, N: int) -> float:
    """Asymptotic value of the pairs ``N < j < inf`` dropped by the truncation."""
    s2 = float(polygamma(1, N + 1))
    s4 = float(polygamma(3, N + 1)) / 6.0
    # sum_{j>N} (-1)^j / j^2
    alt = (-1) ** (N + 1) * 0.25 * float(polygamma(1, (N + 1) / 2) - polygamma(1, (N + 2) / 2))
    mbar = 0.5 * (m_e + m_o)
    half_diff = 0.5 * (m_e - m_o)
    k = c / b
    return -2.0 * c / b**2 * (mbar * (s2 + k * k * s4) + half_diff * alt)


def trace_oracle(families: Sequence[CurvatureFamily], v: Sequence[float], w: Sequence[float],
                 N: int, tail_correction: bool = False) -> float:
    """Direct paired summation of the spectrum over ``|j| <= N``."""
    total = 0.0
    for a, fam in enumerate(families):
        lv = fam(v)
        if lv == 0.0:
            continue
        c = 1.0 - fam(w)
        for j in (0, 1, -1):
            _check_nonfocal(fam, a, w, j)
        nearest = round((fam(w) - 1.0) / fam.b)
        if abs(nearest) <= N:
            _check_nonfocal(fam, a, w, nearest)
        s = _paired_sum(c, fam.b, fam.m_e, fam.m_o, N)
        if tail_correction:
            s += _paired_tail(c, fam.b, fam.m_e, fam.m_o, N)
        total += lv * s
    return total


def _nearest_denominator(fam: CurvatureFamily, a: int, w) -> tuple[float, int]:
    x = (fam(w) - 1.0) / fam.b
    best, best_j = math.inf, 0
    for j in (math.floor(x), math.ceil(x)):
        if fam.multiplicity(j) == 0:
            # a zero-multiplicity member carries no eigenvalue; look one step further out
            continue
        den = abs(_check_nonfocal(fam, a, w, j))
        if den < best:
            best, best_j = den, j
    if best == math.inf:
        for j in (math.floor(x) - 1, math.ceil(x) + 1):
            den = abs(_check_nonfocal(fam, a, w, j))
            if den < best:
                best, best_j = den, j
    return best, best_j


def sup_norm_shape(families: Sequence[CurvatureFamily], v: Sequence[float],
                   w: Sequence[float]) -> float:
    """Largest ``|eigenvalue|`` of the shape operator of the parallel submanifold."""
    out = 0.0
    for a, fam in enumerate(families):
        den, _ = _nearest_denominator(fam, a, w)
        out = max(out, abs(fam(v)) / den)
    return out


def max_sup_norm(families: Sequence[CurvatureFamily],
                 w: Sequence[float]) -> tuple[float, np.ndarray, int, int]:
    """Maximum of :func:`sup_norm_shape` over unit ``v``.

    For a fixed family the maximum of ``|lambda_a(v)|`` over the unit sphere is
    ``|n_a|``, reached at ``v = n_a/|n_a|``, so the maximum is exact.
    Returns ``(value, maximizing v, family index, j)``.
    """
    best = (-1.0, None, -1, 0)
    for a, fam in enumerate(families):
        den, j = _nearest_denominator(fam, a, w)
        n = fam.normal
        val = float(np.linalg.norm(n)) / den
        if val > best[0]:
            best = (val, n / np.linalg.norm(n), a, j)
    return best


def focal_distance(families: Sequence[CurvatureFamily], v: Sequence[float]) -> float:
    """Signed Euclidean distance from ``v`` to the boundary of ``{lambda_aj(v) < 1}``.

    Only ``j = 0`` and ``j = -1`` can bind because every ``b_a > 1``.
    """
    out = math.inf
    for fam in families:
        lv = fam(v)
        norm = float(np.linalg.norm(fam.normal))
        out = min(out, (1.0 - lv) / norm, (lv - 1.0 + fam.b) / norm)
    return out


# -- the cotangent identity ----------------------------------------------------


def cot_identity_closed(theta: float) -> float:
    return (math.cos(theta) + 1.0) / math.sin(theta)


def cot_identity_partial(theta: float, N: int) -> float:
    """``sum_{|j|<=N} 2/(theta + 2 j pi)`` accumulated in symmetric pairs."""
    j = np.arange(1, N + 1, dtype=float)
    pairs = 4.0 * theta / (theta * theta - (2.0 * math.pi * j) ** 2)
    return 2.0 / theta + float(np.sum(pairs[::-1]))


def cot_identity_tail(theta: float, N: int) -> float:
    """Asymptotic value of the pairs with ``j > N``."""
    s2 = float(polygamma(1, N + 1))
    s4 = float(polygamma(3, N + 1)) / 6.0
    s6 = float(polygamma(5, N + 1)) / 120.0
    u = theta * theta / (4.0 * math.pi**2)
    return -theta / math.pi**2 * (s2 + u * s4 + u * u * s6)
