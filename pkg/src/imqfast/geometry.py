"""Lifting planar kernel arguments to 3D Green's-function arguments.

For the IMQ kernel with shape parameter ``t``, a target ``x`` is lifted to
``(x1, x2, t/2)`` and a source ``y`` (or block center ``z``) to
``(y1, y2, -t/2)``. Then ``|X - Y|^2 = |x - y|^2 + t^2`` and
``1/|X - Y|`` equals the IMQ kernel.

All functions broadcast over leading axes: planar points have shape ``(..., 2)``,
lifted points ``(..., 3)``.
"""
from typing import NamedTuple

import numpy as np

__all__ = ["SphericalCoord", "lift_pair", "lift_center", "to_spherical", "to_cartesian"]


class SphericalCoord(NamedTuple):
    rho: np.ndarray
    theta: np.ndarray
    omega: np.ndarray


def _check_t(t):
    if not (np.isfinite(t) and t > 0):
        raise ValueError(f"shape parameter must be positive and finite, got {t}")


def _planar(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1:] != (2,):
        raise ValueError(f"expected planar points with trailing dimension 2, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def _append(p, c):
    return np.concatenate([p, np.full(p.shape[:-1] + (1,), c)], axis=-1)


def lift_pair(x, y, t):
    """Lift target ``x`` to height ``t/2`` and source ``y`` to ``-t/2``."""
    _check_t(t)
    return _append(_planar(x), 0.5 * t), _append(_planar(y), -0.5 * t)


def lift_center(z, t):
    """Lift an expansion center into the source plane ``X3 = -t/2``."""
    _check_t(t)
    return _append(_planar(z), -0.5 * t)


def to_spherical(v):
    """Cartesian to ``(rho, theta, omega)`` with ``omega`` in ``[0, 2 pi)``.

    The origin maps to ``(0, pi/2, 0)``.
    """
    v = np.asarray(v, dtype=float)
    # hypot avoids squaring tiny components into the subnormal range
    planar = np.hypot(v[..., 0], v[..., 1])
    rho = np.hypot(planar, v[..., 2])
    theta = np.where(rho > 0, np.arctan2(planar, v[..., 2]), 0.5 * np.pi)
    omega = np.arctan2(v[..., 1], v[..., 0])
    omega = np.where(omega < 0, omega + 2 * np.pi, omega)
    # a tiny negative angle plus 2*pi can round up to exactly 2*pi
    omega = np.where(omega >= 2 * np.pi, 0.0, omega)
    omega = np.where(rho > 0, omega, 0.0)
    return SphericalCoord(rho[()], theta[()], omega[()])


def to_cartesian(s):
    rho, theta, omega = (np.asarray(a, dtype=float) for a in s)
    st = np.sin(theta)
    return np.stack([rho * st * np.cos(omega), rho * st * np.sin(omega), rho * np.cos(theta)], axis=-1)
