"""
Truncation error of the Green's function expansion
==================================================

The inverse multiquadric becomes ``1/|X - Y|`` after lifting the plane into
3D, and ``1/|X - Y|`` has a spherical-harmonic expansion. This script shows
how fast that expansion converges as the target moves away from the source.
"""

import numpy as np

from imqfast import green_exact, green_truncated, to_cartesian, truncation_error_bound

# Put the source on the unit sphere and move the target outwards along a ray.
rho_x = np.array([1.1, 1.5, 2.0, 4.0, 8.0, 16.0])
angles = np.full_like(rho_x, np.pi / 3)
X = to_cartesian((rho_x, angles, angles))
Y = np.broadcast_to(to_cartesian((1.0, np.pi / 3, np.pi / 3)), X.shape)

exact = green_exact(X, Y)

print(f"{'rho_x':>6} {'M':>3} {'error':>10} {'bound':>10}")
for M in (5, 10, 20):
    err = np.abs(exact - green_truncated(X, Y, M))
    for r, e in zip(rho_x, err):
        print(f"{r:6.1f} {M:3d} {e:10.2e} {truncation_error_bound(r, 1 / r, M):10.2e}")

# Here the two points are collinear with the origin, which is the worst case:
# the error equals the bound r^(M+1) / (rho_x (1 - r)) until it reaches
# double-precision roundoff, around 1e-16. The same curves come
# out of ``imqfast --mode errtrend``.
