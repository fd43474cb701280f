# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Fock-basis Wigner kernel and Hermite functions.

Both mirror ``_kernels_py`` line for line; only the loop order differs
(per point here, per basis index there).
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport exp, log, sqrt, cos, sin, atan2, lgamma, M_PI

cnp.import_array()

BACKEND = "cython"


cdef double _wigner_one(const double[::1] rre, const double[::1] rim, const double[::1] ca,
                        const double[::1] cb, const Py_ssize_t[::1] off, const double[::1] half_lgam,
                        int M, double x, double p) noexcept nogil:
    cdef double y = 2.0 * (x * x + p * p)
    cdef double logy = log(y) if y > 0.0 else 0.0
    cdef double phi = atan2(p, x)
    cdef double c1 = cos(phi), s1 = sin(phi)
    cdef double cd = 1.0, sd = 0.0, tmp
    cdef double W = 0.0, f, lm, lprev, lnext, sr, si
    cdef int d, m
    cdef Py_ssize_t k
    for d in range(M):
        if y > 0.0:
            f = exp(-0.5 * y + 0.5 * d * logy - half_lgam[d])
        elif d == 0:
            f = 1.0
        else:
            f = 0.0
        if f != 0.0:
            lm = f
            lprev = 0.0
            sr = 0.0
            si = 0.0
            k = off[d]
            for m in range(M - d):
                sr = sr + lm * rre[k]
                si = si + lm * rim[k]
                lnext = (2 * m + 1 + d - y) * ca[k] * lm - cb[k] * lprev
                lprev = lm
                lm = lnext
                k = k + 1
            if d == 0:
                W = W + sr
            else:
                W = W + 2.0 * (sr * cd - si * sd)
        tmp = cd * c1 - sd * s1
        sd = sd * c1 + cd * s1
        cd = tmp
    return W / M_PI


def _tables(rho):
    """Per-offset diagonals of rho with the (-1)^m sign folded in, plus recurrence coefficients."""
    M = rho.shape[0]
    sq = np.sqrt(np.arange(2 * M + 2, dtype=np.float64))
    diags, ca, cb = [], [], []
    off = np.zeros(M, dtype=np.intp)
    pos = 0
    for d in range(M):
        m = np.arange(M - d)
        diags.append(np.diagonal(rho, d) * np.where(m % 2 == 0, 1.0, -1.0))
        a = 1.0 / (sq[m + 1] * sq[m + 1 + d])
        ca.append(a)
        cb.append(sq[m] * sq[m + d] * a)
        off[d] = pos
        pos += M - d
    diag = np.concatenate(diags)
    return (np.ascontiguousarray(diag.real), np.ascontiguousarray(diag.imag),
            np.concatenate(ca), np.concatenate(cb), off)


def wigner_points(rho, x, p, int num_threads=1):
    """W(x_i, p_i) of the density matrix ``rho`` at paired coordinates."""
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64).ravel()
    cdef int M = rho.shape[0]
    cdef Py_ssize_t npts = xv.shape[0], i
    if pv.shape[0] != npts:
        raise ValueError("x and p must have the same number of points")
    rre_a, rim_a, ca_a, cb_a, off_a = _tables(rho)
    cdef const double[::1] rre = rre_a
    cdef const double[::1] rim = rim_a
    cdef const double[::1] ca = ca_a
    cdef const double[::1] cb = cb_a
    cdef const Py_ssize_t[::1] off = off_a
    cdef double[::1] hl = np.array([0.5 * lgamma(k + 1.0) for k in range(M + 1)], dtype=np.float64)
    out = np.empty(npts, dtype=np.float64)
    cdef double[::1] ov = out
    if num_threads < 1:
        num_threads = 1
    for i in prange(npts, nogil=True, num_threads=num_threads, schedule="static"):
        ov[i] = _wigner_one(rre, rim, ca, cb, off, hl, M, xv[i], pv[i])
    return out


def hermite_functions(int nmax, x):
    """Rows ``F_0..F_nmax`` of normalized oscillator eigenfunctions at ``x``."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t npts = xv.shape[0], i
    cdef int n
    out = np.empty((nmax + 1, npts), dtype=np.float64)
    cdef double[:, ::1] F = out
    cdef double norm0 = M_PI ** -0.25
    cdef double xi
    with nogil:
        for i in range(npts):
            xi = xv[i]
            F[0, i] = norm0 * exp(-0.5 * xi * xi)
            if nmax >= 1:
                F[1, i] = sqrt(2.0) * xi * F[0, i]
            for n in range(1, nmax):
                F[n + 1, i] = sqrt(2.0 / (n + 1)) * xi * F[n, i] - sqrt(n / (n + 1.0)) * F[n - 1, i]
    return out
