"""IMQ kernel, the Laplace Green's function and its truncated spherical expansion.

The truncated expansion of ``1/|X - Y|`` in spherical coordinates is

    sum_{n<=M} sum_{m<=n} d_{n,m} P_n^m(cos th_y) P_n^m(cos th_x) cos(m (om_x - om_y)) rho_<^n / rho_>^(n+1)

with ``d_{n,m} = eps_m (n-m)!/(n+m)!``. Translating both arguments by a block
center ``Z`` splits each term into a target factor ``h`` and a source factor
``j``, which is what the fast operator exploits.
"""
from typing import NamedTuple

import numpy as np

from .geometry import _check_t, lift_center, lift_pair, to_spherical
from .specfun import assoc_legendre, assoc_legendre_table, coeff_table, n_coeffs, unflat_index

__all__ = [
    "FactorPair",
    "phi_imq",
    "green_exact",
    "green_truncated",
    "truncation_error_bound",
    "factor_pair",
    "translated_kernel_approx",
]


class FactorPair(NamedTuple):
    h: float
    j: float


def _nm(M):
    nm = np.array([unflat_index(k) for k in range(n_coeffs(M))])
    return nm[:, 0], nm[:, 1]


def _expand(a, ndim):
    return a.reshape(a.shape + (1,) * ndim)


def _polar(v, rho):
    """``(cos theta, sin theta)`` of ``v``, with ``(0, 1)`` at the origin."""
    safe = np.where(rho > 0, rho, 1.0)
    ct = np.where(rho > 0, v[..., 2] / safe, 0.0)
    st = np.where(rho > 0, np.hypot(v[..., 0], v[..., 1]) / safe, 1.0)
    return ct, st


def phi_imq(x, y, t):
    """``1 / sqrt(t^2 + |x - y|^2)``."""
    _check_t(t)
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return (1.0 / np.sqrt(t * t + np.sum(diff * diff, axis=-1)))[()]


def green_exact(X, Y):
    dist = np.linalg.norm(np.asarray(X, dtype=float) - np.asarray(Y, dtype=float), axis=-1)
    if np.any(dist == 0):
        raise ValueError("Green's function is singular at X == Y")
    return (1.0 / dist)[()]


def green_truncated(X, Y, M):
    """Partial sum of the spherical expansion of ``1/|X - Y|`` up to degree ``M``.

    Symmetric in ``X`` and ``Y``; the radii must differ.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    sx, sy = to_spherical(X), to_spherical(Y)
    rx, ry = np.asarray(sx.rho), np.asarray(sy.rho)
    if np.any(rx == ry):
        raise ValueError("expansion is undefined when |X| == |Y|")
    r_minor = np.minimum(rx, ry)
    r_major = np.maximum(rx, ry)
    ratio = r_minor / r_major

    n, m = _nm(M)
    nd = ratio.ndim
    px = assoc_legendre_table(M, *_polar(X, rx))
    py = assoc_legendre_table(M, *_polar(Y, ry))
    dw = np.asarray(sx.omega) - np.asarray(sy.omega)
    terms = (
        _expand(coeff_table(M), nd)
        * px
        * py
        * np.cos(_expand(m, nd) * dw)
        * ratio ** _expand(n, nd)
    )
    return (terms.sum(axis=0) / r_major)[()]


def truncation_error_bound(rho_major, r, M):
    """Bound ``r^(M+1) / (rho_major (1 - r))`` on the expansion's truncation error.

    ``rho_major`` is the larger radius and ``r`` the ratio of smaller to larger.
    """
    if not rho_major > 0:
        raise ValueError(f"rho_major must be positive, got {rho_major}")
    if not 0 <= r < 1:
        raise ValueError(f"radius ratio must lie in [0, 1), got {r}")
    if r == 0:
        return 0.0
    return r ** (M + 1) / (rho_major * (1.0 - r))


def factor_pair(n, m, X_rel, Y_rel):
    """Target factor ``h_{n,m}(X_rel)`` and source factor ``j_{n,m}(Y_rel)``.

    ``j`` is extended by continuity to ``Y_rel = 0``.
    """
    X_rel = np.asarray(X_rel, dtype=float)
    Y_rel = np.asarray(Y_rel, dtype=float)
    rx = np.linalg.norm(X_rel)
    if rx == 0:
        raise ValueError("target factor h is singular at the expansion center")
    h = assoc_legendre(n, m, *_polar(X_rel, rx)) / rx ** (n + 1)
    ry = np.linalg.norm(Y_rel)
    if ry == 0:
        j = 1.0 if n == 0 else 0.0
    else:
        j = assoc_legendre(n, m, *_polar(Y_rel, ry)) * ry**n
    return FactorPair(float(h), float(j))


def translated_kernel_approx(x, y, z, t, M, form="split"):
    """Degenerate-kernel approximation of ``phi(|x - y|)`` about the center ``z``.

    ``form="split"`` evaluates the separated cosine/sine sums used by the fast
    operator; ``form="difference"`` uses ``cos(m (om_x - om_y))`` directly.
    Requires the lifted source radius to be strictly below the target radius.
    """
    if form not in ("split", "difference"):
        raise ValueError(f"unknown form {form!r}")
    X, Y = lift_pair(x, y, t)
    Z = lift_center(z, t)
    xr, yr = X - Z, Y - Z
    sx, sy = to_spherical(xr), to_spherical(yr)
    rx, ry = np.asarray(sx.rho), np.asarray(sy.rho)
    if np.any(ry >= rx):
        raise ValueError("translated expansion needs |Y - Z| < |X - Z| strictly")

    n, m = _nm(M)
    nd = rx.ndim
    nn, mm = _expand(n, nd), _expand(m, nd)
    h = assoc_legendre_table(M, *_polar(xr, rx)) / rx ** (nn + 1)
    ry_safe = np.where(ry > 0, ry, 1.0)
    j = assoc_legendre_table(M, *_polar(yr, ry)) * np.where(ry > 0, ry_safe**nn, (nn == 0) * 1.0)
    d = _expand(coeff_table(M), nd)
    ox, oy = np.asarray(sx.omega), np.asarray(sy.omega)
    if form == "split":
        ang = np.cos(mm * ox) * np.cos(mm * oy) + np.sin(mm * ox) * np.sin(mm * oy)
    else:
        ang = np.cos(mm * (ox - oy))
    return (d * h * j * ang).sum(axis=0)[()]
