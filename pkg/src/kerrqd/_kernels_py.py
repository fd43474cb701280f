"""Numpy implementation of the hot kernels, used when the extension is absent."""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.special import gammaln

BACKEND = "numpy"


def _wigner_chunk(rho, x, p):
    M = rho.shape[0]
    y = 2.0 * (x * x + p * p)
    phi = np.arctan2(p, x)
    with np.errstate(divide="ignore"):
        logy = np.where(y > 0, np.log(np.where(y > 0, y, 1.0)), 0.0)
    sq = np.sqrt(np.arange(2 * M + 2, dtype=float))
    W = np.zeros_like(x)
    rot = np.exp(1j * phi)
    phase = np.ones_like(x, dtype=complex)
    for d in range(M):
        f = np.exp(-0.5 * y + 0.5 * d * logy - 0.5 * gammaln(d + 1.0))
        if d > 0:
            f = np.where(y > 0, f, 0.0)
        lm = f
        lprev = np.zeros_like(x)
        acc = np.zeros_like(x, dtype=complex)
        sign = 1.0
        for m in range(M - d):
            acc += sign * rho[m, m + d] * lm
            lnext = ((2 * m + 1 + d - y) * lm - sq[m] * sq[m + d] * lprev) / (sq[m + 1] * sq[m + 1 + d])
            lprev, lm = lm, lnext
            sign = -sign
        W += (1.0 if d == 0 else 2.0) * np.real(acc * phase)
        phase = phase * rot
    return W / np.pi


def wigner_points(rho, x, p, num_threads=1):
    """W(x_i, p_i) of the density matrix ``rho`` at paired coordinates."""
    rho = np.ascontiguousarray(rho, dtype=complex)
    x = np.ascontiguousarray(x, dtype=float).ravel()
    p = np.ascontiguousarray(p, dtype=float).ravel()
    if x.shape != p.shape:
        raise ValueError("x and p must have the same number of points")
    if num_threads <= 1 or x.size < 2 * num_threads:
        return _wigner_chunk(rho, x, p)
    bounds = np.linspace(0, x.size, num_threads + 1).astype(int)
    with ThreadPoolExecutor(num_threads) as pool:
        parts = pool.map(lambda ab: _wigner_chunk(rho, x[ab[0]:ab[1]], p[ab[0]:ab[1]]),
                         zip(bounds[:-1], bounds[1:]))
        return np.concatenate(list(parts))


def hermite_functions(nmax, x):
    """Rows ``F_0..F_nmax`` of normalized oscillator eigenfunctions at ``x``."""
    x = np.ascontiguousarray(x, dtype=float).ravel()
    F = np.empty((nmax + 1, x.size))
    F[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        F[1] = np.sqrt(2.0) * x * F[0]
    for n in range(1, nmax):
        F[n + 1] = np.sqrt(2.0 / (n + 1)) * x * F[n] - np.sqrt(n / (n + 1.0)) * F[n - 1]
    return F
