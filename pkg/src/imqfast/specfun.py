"""Associated Legendre functions and the coefficient tables of the Laplace expansion.

Pairs ``(n, m)`` with ``0 <= m <= n <= M`` are stored in a flat array of length
``K = (M + 1)(M + 2) / 2`` at position ``k = n(n + 1)/2 + m``.

The associated Legendre functions carry the Condon-Shortley phase, matching
``scipy.special.lpmv``.
"""
import math

import numba
import numpy as np

__all__ = [
    "n_coeffs",
    "flat_index",
    "unflat_index",
    "neumann",
    "coeff_d",
    "coeff_table",
    "assoc_legendre",
    "assoc_legendre_table",
    "legendre",
    "plm_fill",
]


def n_coeffs(M):
    """Number of (n, m) pairs retained by truncation index ``M``."""
    if M < 0:
        raise ValueError(f"truncation index must be >= 0, got {M}")
    return (M + 1) * (M + 2) // 2


def flat_index(n, m, M=None):
    """Zero-based flat position of the pair (n, m)."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    if M is not None and n > M:
        raise ValueError(f"degree {n} exceeds truncation index {M}")
    return n * (n + 1) // 2 + m


def unflat_index(k):
    """Inverse of :func:`flat_index`."""
    if k < 0:
        raise ValueError(f"flat index must be >= 0, got {k}")
    n = (math.isqrt(8 * k + 1) - 1) // 2
    return n, k - n * (n + 1) // 2


def neumann(m):
    return 1.0 if m == 0 else 2.0


def coeff_d(n, m):
    """``eps_m (n - m)! / (n + m)!`` accumulated as a product of reciprocals."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    d = neumann(m)
    for k in range(n - m + 1, n + m + 1):
        d /= k
    return d


def coeff_table(M):
    K = n_coeffs(M)
    d = np.empty(K)
    for n in range(M + 1):
        for m in range(n + 1):
            d[flat_index(n, m)] = coeff_d(n, m)
    return d


def _check_x(x, s=None):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("argument must satisfy |x| <= 1")
    if s is None:
        s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    else:
        s = np.broadcast_to(np.asarray(s, dtype=float), x.shape)
    return x, s


def assoc_legendre_table(M, x, s=None):
    """All ``P_n^m(x)`` for ``0 <= m <= n <= M``.

    Returns an array of shape ``(K,) + x.shape`` in flat (n, m) order. Pass
    ``s = sin(theta)`` when ``x = cos(theta)`` is close to +-1 and the sine is
    known more accurately than ``sqrt(1 - x^2)``.
    """
    x, s = _check_x(x, s)
    out = np.empty((n_coeffs(M),) + x.shape)
    pmm = np.ones_like(x)
    for m in range(M + 1):
        if m > 0:
            pmm = -(2 * m - 1) * s * pmm
        out[flat_index(m, m)] = pmm
        if m == M:
            break
        p0 = pmm
        p1 = (2 * m + 1) * x * pmm
        out[flat_index(m + 1, m)] = p1
        for n in range(m + 2, M + 1):
            p0, p1 = p1, ((2 * n - 1) * x * p1 - (n + m - 1) * p0) / (n - m)
            out[flat_index(n, m)] = p1
    return out


def assoc_legendre(n, m, x, s=None):
    """``P_n^m(x)`` by upward recurrence in n starting from ``P_m^m``.

    ``s`` optionally supplies ``sqrt(1 - x^2)``.
    """
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    x, s = _check_x(x, s)
    pmm = np.ones_like(x)
    for k in range(1, m + 1):
        pmm = -(2 * k - 1) * s * pmm
    if n == m:
        return pmm[()]
    p0, p1 = pmm, (2 * m + 1) * x * pmm
    for k in range(m + 2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k + m - 1) * p0) / (k - m)
    return p1[()]


def legendre(n, x):
    """Legendre polynomial ``P_n(x)`` by the three-term recurrence."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    x, _ = _check_x(x)
    p0 = np.ones_like(x)
    if n == 0:
        return p0[()]
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    return p1[()]


@numba.njit(cache=True)
def plm_fill(M, x, s, out):
    # s = sqrt(1 - x^2) supplied by the caller, which usually has it for free.
    pmm = 1.0
    for m in range(M + 1):
        if m > 0:
            pmm = -(2 * m - 1) * s * pmm
        k = m * (m + 1) // 2 + m
        out[k] = pmm
        if m == M:
            break
        p0 = pmm
        p1 = (2 * m + 1) * x * pmm
        out[k + m + 1] = p1
        for n in range(m + 2, M + 1):
            p2 = ((2 * n - 1) * x * p1 - (n + m - 1) * p0) / (n - m)
            out[n * (n + 1) // 2 + m] = p2
            p0 = p1
            p1 = p2
