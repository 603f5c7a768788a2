"""Pure numpy implementation of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
A system is given by affine root values ``beta_k(z) = R[k] @ z + c[k]``, a
class code per root (0: V only, 1: H only, 2: both), multiplicities, an
inclusion mask, and unit-normal wall constraints ``G @ z + g > 0``.
"""

from __future__ import annotations

import numpy as np

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def _coeffs_of(s, cls, mv, mh, inc):
    # s holds root values along the last axis
    inc = np.asarray(inc, dtype=bool)
    f = np.zeros_like(s)
    fp = np.zeros_like(s)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = (cls == 0) & inc
        sn = np.sin(s[..., v])
        f[..., v] = -mv[v] * np.cos(s[..., v]) / sn
        fp[..., v] = mv[v] / (sn * sn)
        h = (cls == 1) & inc
        cs = np.cos(s[..., h])
        f[..., h] = mh[h] * np.sin(s[..., h]) / cs
        fp[..., h] = mh[h] / (cs * cs)
        b = (cls == 2) & inc
        u = 2.0 * s[..., b]
        A = mv[b] + mh[b]
        B = mv[b] - mh[b]
        su = np.sin(u)
        cu = np.cos(u)
        f[..., b] = -(A * cu + B) / su
        fp[..., b] = 2.0 * (A + B * cu) / (su * su)
    return f, fp


def _coeffs(R, c, cls, mv, mh, inc, z):
    return _coeffs_of(R @ z + c, cls, mv, mh, inc)


def field(R, c, cls, mv, mh, inc, z):
    f, _ = _coeffs(R, c, cls, mv, mh, inc, z)
    return f @ R


def field_many(R, c, cls, mv, mh, inc, Z):
    Z = np.asarray(Z, dtype=float).reshape(-1, R.shape[1])
    f, _ = _coeffs_of(Z @ R.T + c, cls, mv, mh, inc)
    return f @ R


def jacobian(R, c, cls, mv, mh, inc, z):
    _, fp = _coeffs(R, c, cls, mv, mh, inc, z)
    return (R * fp[:, None]).T @ R


def divergence(R, c, cls, mv, mh, inc, z):
    _, fp = _coeffs(R, c, cls, mv, mh, inc, z)
    return float(fp @ np.einsum("ij,ij->i", R, R))


def min_slack(G, g, z):
    if G.shape[0] == 0:
        return np.inf
    return float(np.min(G @ z + g))


def dopri_step(R, c, cls, mv, mh, inc, G, g, z, h, k1, rtol, atol):
    """One Dormand-Prince step from ``z`` with ``k1 = X(z)``.

    Returns ``(z_new, k_new, err_norm, smin)`` where ``smin`` is the smallest
    wall slack over all stage points.  When ``smin <= 0`` the step left the
    domain and the other outputs are meaningless.
    """
    z = np.asarray(z, dtype=float)
    ks = [np.asarray(k1, dtype=float)]
    smin = np.inf
    for i in range(1, 6):
        zi = z + h * sum(a * k for a, k in zip(_A[i], ks))
        si = min_slack(G, g, zi)
        smin = min(smin, si)
        if si <= 0.0:
            return z, ks[0], np.inf, smin
        ks.append(field(R, c, cls, mv, mh, inc, zi))
    z_new = z + h * sum(b * k for b, k in zip(_B, ks))
    s_new = min_slack(G, g, z_new)
    smin = min(smin, s_new)
    if s_new <= 0.0:
        return z, ks[0], np.inf, smin
    k7 = field(R, c, cls, mv, mh, inc, z_new)
    ks.append(k7)
    err = h * sum(e * k for e, k in zip(_E, ks))
    scale = atol + rtol * np.maximum(np.abs(z), np.abs(z_new))
    err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
    if not np.isfinite(err_norm):
        err_norm = np.inf
    return z_new, k7, err_norm, smin
