# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels.py`` for the reference semantics."""

import numpy as np

from libc.math cimport cos, cosh, fabs, log, sin, sinh, sqrt, M_PI

cdef double HALF_LOG_2PI = 0.91893853320467274178
cdef int STIRLING_THRESHOLD = 10
cdef double LOG_FACT_SMALL[10]
cdef double STIRLING[9]

LOG_FACT_SMALL[:] = [0.0, 0.0, 0.6931471805599453, 1.791759469228055,
                     3.1780538303479458, 4.787491742782046, 6.579251212010101,
                     8.525161361065415, 10.60460290274525, 12.801827480081469]
STIRLING[:] = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0,
               1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0,
               -3617.0 / 122400.0, 43867.0 / 244188.0]


cdef inline void _neumaier(double v, double* total, double* comp) nogil:
    cdef double t = total[0] + v
    if fabs(total[0]) >= fabs(v):
        comp[0] += (total[0] - t) + v
    else:
        comp[0] += (v - t) + total[0]
    total[0] = t


cdef inline double _lgamma_int(long m) nogil:
    cdef double x, inv, inv2, acc
    cdef int i
    if m < STIRLING_THRESHOLD:
        return LOG_FACT_SMALL[m - 1]
    x = <double>m
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for i in range(8, -1, -1):
        acc = acc * inv2 + STIRLING[i]
    return (x - 0.5) * log(x) - x + HALF_LOG_2PI + acc * inv


def log_sin_weighted_sum(long n):
    cdef double total = 0.0, comp = 0.0
    cdef long j
    cdef double scale = M_PI / (2.0 * n)
    with nogil:
        for j in range(1, n):
            _neumaier((n - j) * log(sin(j * scale)), &total, &comp)
    return total + comp


def log_factorial_ratio(long n):
    cdef double total = 0.0, comp = 0.0
    cdef long k
    with nogil:
        for k in range(n):
            _neumaier(_lgamma_int(k + 1) - _lgamma_int(n + k + 1), &total, &comp)
    return total + comp


def shoot_dirichlet(qmid, double h, lambdas):
    cdef double[::1] q = np.ascontiguousarray(qmid, dtype=np.float64)
    lam_arr = np.ascontiguousarray(lambdas, dtype=np.float64)
    cdef double[::1] lam = lam_arr
    out = np.empty_like(lam_arr)
    cdef double[::1] res = out
    cdef Py_ssize_t i, k, nsteps = q.shape[0], m = lam.shape[0]
    cdef double y, yp, v, w, c, s, sw, ynew
    with nogil:
        for k in range(m):
            y = 0.0
            yp = 1.0
            for i in range(nsteps):
                v = q[i] - lam[k]
                if v < 0.0:
                    w = sqrt(-v)
                    c = cos(w * h)
                    s = sin(w * h)
                    ynew = c * y + (s / w) * yp
                    yp = -w * s * y + c * yp
                elif v > 0.0:
                    w = sqrt(v)
                    c = cosh(w * h)
                    s = sinh(w * h)
                    ynew = c * y + (s / w) * yp
                    yp = w * s * y + c * yp
                else:
                    ynew = y + h * yp
                y = ynew
                if fabs(y) + fabs(yp) > 1e150:
                    y *= 1e-150
                    yp *= 1e-150
            res[k] = y
    return out
