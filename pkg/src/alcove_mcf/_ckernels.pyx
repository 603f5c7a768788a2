# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt, fabs, INFINITY, isfinite

cnp.import_array()

cdef double[6] _C = [0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0]
cdef double[6][5] _A = [
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40, 9.0 / 40, 0.0, 0.0, 0.0],
    [44.0 / 45, -56.0 / 15, 32.0 / 9, 0.0, 0.0],
    [19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0.0],
    [9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656],
]
cdef double[6] _B = [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84]
cdef double[7] _E = [71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200,
                     22.0 / 525, -1.0 / 40]


cdef inline void _coef(int cl, double s, double mv, double mh, double* f, double* fp) noexcept nogil:
    cdef double sn, cs, u, su, cu, A, B
    if cl == 0:
        sn = sin(s)
        f[0] = -mv * cos(s) / sn
        fp[0] = mv / (sn * sn)
    elif cl == 1:
        cs = cos(s)
        f[0] = mh * sin(s) / cs
        fp[0] = mh / (cs * cs)
    else:
        u = 2.0 * s
        A = mv + mh
        B = mv - mh
        su = sin(u)
        cu = cos(u)
        f[0] = -(A * cu + B) / su
        fp[0] = 2.0 * (A + B * cu) / (su * su)


cdef void _field(const double[:, ::1] R, const double[::1] c, const int[::1] cls,
                 const double[::1] mv, const double[::1] mh, const unsigned char[::1] inc,
                 const double* z, double* out) noexcept nogil:
    cdef Py_ssize_t K = R.shape[0], d = R.shape[1], k, i
    cdef double s, f, fp
    for i in range(d):
        out[i] = 0.0
    for k in range(K):
        if not inc[k]:
            continue
        s = c[k]
        for i in range(d):
            s += R[k, i] * z[i]
        _coef(cls[k], s, mv[k], mh[k], &f, &fp)
        for i in range(d):
            out[i] += f * R[k, i]


cdef double _min_slack(const double[:, ::1] G, const double[::1] g, const double* z) noexcept nogil:
    cdef Py_ssize_t C = G.shape[0], d = G.shape[1], j, i
    cdef double best = INFINITY, s
    for j in range(C):
        s = g[j]
        for i in range(d):
            s += G[j, i] * z[i]
        if s < best:
            best = s
    return best


def field(const double[:, ::1] R, const double[::1] c, const int[::1] cls,
          const double[::1] mv, const double[::1] mh, const unsigned char[::1] inc,
          const double[::1] z):
    out = np.empty(R.shape[1])
    cdef double[::1] o = out
    _field(R, c, cls, mv, mh, inc, &z[0], &o[0])
    return out


def field_many(const double[:, ::1] R, const double[::1] c, const int[::1] cls,
               const double[::1] mv, const double[::1] mh, const unsigned char[::1] inc,
               const double[:, ::1] Z):
    out = np.empty((Z.shape[0], R.shape[1]))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t n
    with nogil:
        for n in range(Z.shape[0]):
            _field(R, c, cls, mv, mh, inc, &Z[n, 0], &o[n, 0])
    return out


def jacobian(const double[:, ::1] R, const double[::1] c, const int[::1] cls,
             const double[::1] mv, const double[::1] mh, const unsigned char[::1] inc,
             const double[::1] z):
    cdef Py_ssize_t K = R.shape[0], d = R.shape[1], k, i, j
    out = np.zeros((d, d))
    cdef double[:, ::1] J = out
    cdef double s, f, fp
    for k in range(K):
        if not inc[k]:
            continue
        s = c[k]
        for i in range(d):
            s += R[k, i] * z[i]
        _coef(cls[k], s, mv[k], mh[k], &f, &fp)
        for i in range(d):
            for j in range(d):
                J[i, j] += fp * R[k, i] * R[k, j]
    return out


def divergence(const double[:, ::1] R, const double[::1] c, const int[::1] cls,
               const double[::1] mv, const double[::1] mh, const unsigned char[::1] inc,
               const double[::1] z):
    cdef Py_ssize_t K = R.shape[0], d = R.shape[1], k, i
    cdef double s, f, fp, nrm, total = 0.0
    for k in range(K):
        if not inc[k]:
            continue
        s = c[k]
        nrm = 0.0
        for i in range(d):
            s += R[k, i] * z[i]
            nrm += R[k, i] * R[k, i]
        _coef(cls[k], s, mv[k], mh[k], &f, &fp)
        total += fp * nrm
    return total


def min_slack(const double[:, ::1] G, const double[::1] g, const double[::1] z):
    return _min_slack(G, g, &z[0])


def dopri_step(const double[:, ::1] R, const double[::1] c, const int[::1] cls,
               const double[::1] mv, const double[::1] mh, const unsigned char[::1] inc,
               const double[:, ::1] G, const double[::1] g,
               const double[::1] z, double h, const double[::1] k1, double rtol, double atol):
    cdef Py_ssize_t d = R.shape[1], i, st, q
    ks_arr = np.empty((7, d))
    cdef double[:, ::1] ks = ks_arr
    tmp_arr = np.empty(d)
    cdef double[::1] tmp = tmp_arr
    znew_arr = np.empty(d)
    cdef double[::1] zn = znew_arr
    cdef double smin = INFINITY, s, acc, e, sc, err = 0.0
    for i in range(d):
        ks[0, i] = k1[i]
    for st in range(1, 6):
        for i in range(d):
            acc = 0.0
            for q in range(st):
                acc += _A[st][q] * ks[q, i]
            tmp[i] = z[i] + h * acc
        s = _min_slack(G, g, &tmp[0])
        if s < smin:
            smin = s
        if s <= 0.0:
            return np.asarray(z).copy(), np.asarray(k1).copy(), INFINITY, smin
        _field(R, c, cls, mv, mh, inc, &tmp[0], &ks[st, 0])
    for i in range(d):
        acc = 0.0
        for q in range(6):
            acc += _B[q] * ks[q, i]
        zn[i] = z[i] + h * acc
    s = _min_slack(G, g, &zn[0])
    if s < smin:
        smin = s
    if s <= 0.0:
        return np.asarray(z).copy(), np.asarray(k1).copy(), INFINITY, smin
    _field(R, c, cls, mv, mh, inc, &zn[0], &ks[6, 0])
    for i in range(d):
        acc = 0.0
        for q in range(7):
            acc += _E[q] * ks[q, i]
        e = h * acc
        sc = atol + rtol * max(fabs(z[i]), fabs(zn[i]))
        err += (e / sc) * (e / sc)
    err = sqrt(err / d)
    if not isfinite(err):
        err = INFINITY
    return znew_arr, ks_arr[6].copy(), err, smin
