"""Hand-reduced per-preset formulas, kept independent of the generic field code.

These are the explicit minimality systems and stratum fields of the six
catalog actions, written out coordinate by coordinate.  Tests compare them
with the generic machinery; nothing else in the package depends on them.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "cot",
    "minimality_system",
    "a_type_stratum_field",
    "rank2_stratum_field",
    "singular_minima",
    "principal_minimum",
    "identity_q_minus_one",
    "identity_two_q_plus_one",
]


def cot(x: float) -> float:
    return math.cos(x) / math.sin(x)


def _a_type_sums(x, scale: float, excluded: Iterable[tuple[int, int]] = ()) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = len(x)
    skip = {tuple(sorted(p)) for p in excluded}
    out = np.zeros(n)
    for i, j in combinations(range(n), 2):
        if (i, j) in skip:
            continue
        v = cot(scale * (x[i] - x[j]))
        out[i] += v
        out[j] -= v
    return out


def minimality_system(preset: str, x: Sequence[float], q: int | None = None) -> np.ndarray:
    """Left-hand sides of the interior minimality equations (zero at a minimal orbit)."""
    x = np.asarray(x, dtype=float)
    if preset == "sp-isotropy":
        return _a_type_sums(x, 1.0)
    if preset == "so2n-on-su2n":
        return _a_type_sums(x, 2.0)
    x1, x2 = x
    if preset == "supq-isotropy":
        return np.array([
            cot(x1 - x2) + cot(x1 + x2) + (q - 2) * cot(x1) + cot(2 * x1),
            cot(x2 - x1) + cot(x1 + x2) + (q - 2) * cot(x2) + cot(2 * x2),
        ])
    if preset == "supp-isotropy":
        return np.array([
            cot(x1 - x2) + cot(x1 + x2) + cot(2 * x1),
            cot(x2 - x1) + cot(x1 + x2) + cot(2 * x2),
        ])
    if preset == "sopq-hermann":
        t = math.tan
        return np.array([
            t(2 * x1) - (q - 2) * cot(2 * x1) - cot(2 * (x1 - x2)) - cot(2 * (x1 + x2)),
            t(2 * x2) - (q - 2) * cot(2 * x2) - cot(2 * (x2 - x1)) - cot(2 * (x1 + x2)),
        ])
    if preset == "so2p-hermann":
        t = math.tan
        return np.array([
            cot(2 * (x1 - x2)) + cot(2 * (x1 + x2)) - t(2 * x1),
            cot(2 * (x2 - x1)) + cot(2 * (x1 + x2)) - t(2 * x2),
        ])
    raise KeyError(preset)


def a_type_stratum_field(preset: str, x: Sequence[float],
                         excluded: Iterable[tuple[int, int]]) -> np.ndarray:
    """``-4 sum_i (sum_j cot(k(x_i - x_j))) e_i`` with the wall pairs removed (0-based)."""
    scale = 1.0 if preset == "sp-isotropy" else 2.0
    return -4.0 * _a_type_sums(x, scale, excluded)


def rank2_stratum_field(preset: str, sigma: int, x: Sequence[float],
                        q: int | None = None) -> np.ndarray:
    """The explicitly displayed ``X^sigma`` for the rank-2 presets, ``sigma`` in 1..3."""
    x1, x2 = (float(c) for c in x)
    e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    t = math.tan
    if preset == "supq-isotropy":
        if sigma == 1:
            return -2 * (2 * cot(2 * x1) + (q - 2) * cot(x1)) * (e1 + e2)
        if sigma == 2:
            return -2 * (q * cot(x1) + cot(2 * x1)) * e1
        return -2 * (2 * cot(2 * x1) + (q - 2) * cot(x1)) * (e1 - e2)
    if preset == "supp-isotropy":
        if sigma == 1:
            return -4 * cot(2 * x1) * (e1 + e2)
        if sigma == 2:
            return -2 * (2 * cot(x1) + cot(2 * x1)) * e1
        return -2 * cot(2 * x2) * e2
    if preset == "sopq-hermann":
        if sigma == 1:
            return 2 * (t(2 * x1) - (q - 2) * cot(2 * x1) - cot(4 * x1)) * (e1 + e2)
        if sigma == 2:
            return 2 * (t(2 * x1) - q * cot(2 * x1)) * e1
        return 2 * (t(2 * x1) - (q - 2) * cot(2 * x1) - cot(4 * x1)) * (e1 - e2)
    if preset == "so2p-hermann":
        if sigma == 1:
            return (-2 * (cot(2 * (x1 + x2)) - t(2 * x1)) * e1
                    - 2 * (cot(2 * (x1 + x2)) - t(2 * x2)) * e2)
        if sigma == 2:
            return (-2 * (cot(2 * (x1 - x2)) - t(2 * x1)) * e1
                    - 2 * (cot(2 * (x2 - x1)) - t(2 * x2)) * e2)
        return (-2 * (cot(2 * (x1 - x2)) + cot(2 * (x1 + x2))) * e1
                - 2 * (cot(2 * (x2 - x1)) + cot(2 * (x1 + x2)) - t(2 * x2)) * e2)
    raise KeyError(preset)


def principal_minimum(preset: str) -> np.ndarray | None:
    """Interior minimal orbit when it is known in closed form (closed-form presets)."""
    p = math.pi
    table = {
        "sp-isotropy": (p / 3, 0.0, -p / 3),
        "so2n-on-su2n": (p / 6, 0.0, -p / 6),
        "so2p-hermann": (0.5 * math.atan(math.sqrt(2)), 0.0),
    }
    v = table.get(preset)
    return None if v is None else np.array(v)


def singular_minima(preset: str, q: int | None = None) -> dict[int | tuple[int, int], np.ndarray]:
    """Minimal singular orbits on the one-dimensional strata, keyed by stratum.

    A-type keys are the 0-based wall pairs; rank-2 keys are 1, 2, 3.
    """
    p = math.pi
    if preset == "sp-isotropy":
        return {(0, 1): p / 6 * np.array([1, 1, -2.0]), (1, 2): p / 6 * np.array([2, -1, -1.0]),
                (0, 2): p / 2 * np.array([1, 0, -1.0])}
    if preset == "so2n-on-su2n":
        return {(0, 1): p / 12 * np.array([1, 1, -2.0]), (1, 2): p / 12 * np.array([2, -1, -1.0]),
                (0, 2): p / 4 * np.array([1, 0, -1.0])}
    if preset == "supq-isotropy":
        a = math.atan(math.sqrt(q - 1))
        return {1: np.array([a, a]), 2: np.array([math.atan(math.sqrt(2 * q + 1)), 0.0]),
                3: np.array([a, p - a])}
    if preset == "supp-isotropy":
        return {1: np.array([p / 4, p / 4]), 2: np.array([math.atan(math.sqrt(5)), 0.0]),
                3: np.array([p / 2, p / 4])}
    if preset == "sopq-hermann":
        a = 0.5 * math.atan(math.sqrt(2 * q / 3 - 1))
        return {1: np.array([a, a]), 2: np.array([0.5 * math.atan(math.sqrt(q)), 0.0]),
                3: np.array([p / 2 - a, a])}
    if preset == "so2p-hermann":
        return {1: np.array([p / 12, p / 12]), 2: np.array([p / 12, -p / 12]),
                3: np.array([p / 4, 0.0])}
    raise KeyError(preset)


def identity_q_minus_one(x: float, q: float) -> float:
    """Residual of ``2 cot 2x + (q-2) cot x``; vanishes iff ``tan^2 x = q - 1``."""
    return 2 * cot(2 * x) + (q - 2) * cot(x)


def identity_two_q_plus_one(x: float, q: float) -> float:
    """Residual of ``q cot x + cot 2x``; vanishes iff ``tan^2 x = 2q + 1``."""
    return q * cot(x) + cot(2 * x)
