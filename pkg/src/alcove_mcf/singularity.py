"""Type-I blow-up rate of the shape operator along a flow that hits a wall.

Along an integral curve ending on a facet at time ``T`` the quantity

    Q(t) = max_{|v| = 1} ||A_v(t)||_inf^2 (T - t)

tends to ``1 / (2 m)``, where ``m`` is the multiplicity of the collapsing
curvature sphere.  When several families collapse on the same hyperplane
(supq-isotropy: ``b2`` and ``2b2`` on ``x_2 = 0``) their eigenvalues coincide
and ``m`` is the sum of their multiplicities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .alcove import alcove_of
from .curvature import families_at, max_sup_norm
from .dynamics import FIXED_POINT, WALL_HIT, FlowOptions, integrate
from .rootdata import ActionData

__all__ = ["SingularityError", "SingularityReport", "type_I_estimate"]


class SingularityError(ValueError):
    pass


@dataclass
class SingularityReport:
    dominant_family: tuple[int, ...]
    dominant_label: str
    m_e_dominant: int
    predicted_limit: float
    estimated_limit: float
    relative_error: float
    samples: list[tuple[float, float]]
    slacks: list[float]
    T_est: float
    hit_time: float
    sensitivity: float
    richardson: list[float] = field(default_factory=list)
    alignment: list[float] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "dominant_family": list(self.dominant_family),
            "dominant_label": self.dominant_label,
            "m_e_dominant": self.m_e_dominant,
            "predicted_limit": self.predicted_limit,
            "estimated_limit": self.estimated_limit,
            "relative_error": self.relative_error,
            "T_est": self.T_est,
            "hit_time": self.hit_time,
            "sensitivity": self.sensitivity,
            "richardson": self.richardson,
            "samples": [[t, q, s] for (t, q), s in zip(self.samples, self.slacks)],
        }


def _fit_T(s: np.ndarray, tau: np.ndarray) -> tuple[float, float]:
    """Blow-up time from ``tau(s) = T + a2 s^2 + a3 s^3 + a4 s^4`` through four points."""
    x = s / s[0]
    M = np.vstack([np.ones_like(x), x**2, x**3, x**4]).T
    coef = np.linalg.solve(M, tau - tau[0])
    return tau[0] + coef[0], coef[1] / s[0] ** 2


def type_I_estimate(data: ActionData, x0: Sequence[float], k_range: tuple[int, int] = (6, 16),
                    opts: FlowOptions | None = None) -> SingularityReport:
    """Integrate from ``x0`` and extrapolate ``Q`` at wall distances ``2^-k``."""
    k_lo, k_hi = k_range
    if k_hi - k_lo < 4:
        raise ValueError("k_range must span at least five slacks")
    x0 = np.asarray(x0, dtype=float)
    marks = tuple(2.0**-k for k in range(k_lo, k_hi + 1))
    base = opts or FlowOptions()
    opts = FlowOptions(eps_wall=base.eps_wall, rtol=base.rtol, atol=base.atol,
                       max_time=base.max_time, max_steps=base.max_steps,
                       switch_slack=max(base.switch_slack, 2.0 * marks[0]),
                       fixed_tol=base.fixed_tol, slack_marks=marks, keep_samples=False)
    if marks[-1] <= opts.eps_wall:
        raise ValueError("smallest slack mark must exceed eps_wall")
    res = integrate(data, x0, opts)
    if res.status == FIXED_POINT:
        raise SingularityError("trajectory reaches the fixed point; no singularity")
    if res.status != WALL_HIT:
        raise SingularityError(f"flow did not reach a wall (status {res.status})")
    A = alcove_of(data)
    sigma = res.terminal_stratum
    if sigma.dim != A.rank - 1 or len(res.marks) != len(marks):
        raise SingularityError("non-generic terminal stratum; restart from perturbed x0")

    fams = families_at(data, x0)
    w_end = res.terminal - x0
    roots = sorted(sigma.root_indices(A))
    m_total = 0
    for k in roots:
        fam = fams[k]
        j = int(round((fam(w_end) - 1.0) / fam.b))
        m_total += fam.multiplicity(j)
    if m_total == 0:
        raise SingularityError("collapsing family has zero multiplicity")
    predicted = 1.0 / (2.0 * m_total)

    s = np.array([m[0] for m in res.marks])
    tau = np.array([m[1] for m in res.marks])
    T_est, a2 = _fit_T(s[-4:], tau[-4:])
    dirn = np.mean([fams[k].normal / np.linalg.norm(fams[k].normal) for k in roots], axis=0)
    dirn /= np.linalg.norm(dirn)

    def q_values(T):
        out, align = [], []
        for _, tk, xk in res.marks:
            val, v, _, _ = max_sup_norm(fams, xk - x0)
            out.append(val**2 * (T - tk))
            align.append(abs(float(v @ dirn)))
        return np.array(out), align

    Q, align = q_values(T_est)
    R = list((4.0 * Q[1:] - Q[:-1]) / 3.0)
    estimate = float(np.mean(R[-3:]))
    delta_T = abs(a2) * (10.0 * opts.eps_wall) ** 2
    Qp, _ = q_values(T_est + delta_T)
    Qm, _ = q_values(T_est - delta_T)
    sens = float(max(abs(np.mean(((4 * Qp[1:] - Qp[:-1]) / 3)[-3:]) - estimate),
                     abs(np.mean(((4 * Qm[1:] - Qm[:-1]) / 3)[-3:]) - estimate)))
    label = " = ".join(data.label(k) for k in roots)
    t_abs = res.t_switch + tau
    return SingularityReport(
        dominant_family=tuple(roots),
        dominant_label=label,
        m_e_dominant=m_total,
        predicted_limit=predicted,
        estimated_limit=estimate,
        relative_error=abs(estimate - predicted) / predicted,
        samples=[(float(t), float(q)) for t, q in zip(t_abs, Q)],
        slacks=[float(v) for v in s],
        T_est=float(res.t_switch + T_est),
        hit_time=float(res.hit_time),
        sensitivity=sens,
        richardson=[float(r) for r in R],
        alignment=align,
    )
