"""Dense reference computations and experiment inputs."""
import warnings

import numpy as np
import scipy.linalg
from scipy.stats import qmc

from . import _kernels
from .geometry import _check_t

__all__ = [
    "DENSE_CAP",
    "SingularMatrixError",
    "imq_sum",
    "dense_matvec",
    "assemble_dense",
    "dense_solve",
    "rel_err_inf",
    "halton2d",
    "random_vector",
    "read_points",
    "write_points",
]

DENSE_CAP = 5000


class SingularMatrixError(np.linalg.LinAlgError):
    pass


def _points(p):
    p = np.asarray(p, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def imq_sum(targets, sources, weights, t):
    """``sum_j w_j phi(|x_i - y_j|)`` for every target, without forming the matrix."""
    _check_t(t)
    tg, src = _points(targets), _points(sources)
    w = np.ascontiguousarray(weights, dtype=float)
    if w.shape != (src.shape[0],):
        raise ValueError(f"{w.size} weights for {src.shape[0]} sources")
    return _kernels.imq_sum(
        np.ascontiguousarray(tg[:, 0]), np.ascontiguousarray(tg[:, 1]),
        np.ascontiguousarray(src[:, 0]), np.ascontiguousarray(src[:, 1]), w, float(t),
    )


def dense_matvec(points, t, u):
    """Row-by-row ``A u`` with ``a_ij = phi(|x_i - x_j|)``."""
    return imq_sum(points, points, u, t)


def assemble_dense(points, t, cap=DENSE_CAP):
    _check_t(t)
    p = _points(points)
    if p.shape[0] > cap:
        raise MemoryError(f"refusing to assemble a {p.shape[0]}x{p.shape[0]} matrix (cap {cap})")
    diff = p[:, None, :] - p[None, :, :]
    A = 1.0 / np.sqrt(t * t + np.einsum("ijk,ijk->ij", diff, diff))
    # evaluate each pair once so the matrix is exactly symmetric
    iu = np.triu_indices(p.shape[0], 1)
    A[(iu[1], iu[0])] = A[iu]
    return A


def dense_solve(A, f):
    """Solve ``A c = f`` by pivoted LU.

    Raises :class:`SingularMatrixError` when a pivot vanishes or the solution
    is not finite.
    """
    A = np.asarray(A, dtype=float)
    f = np.asarray(f, dtype=float)
    if f.shape != (A.shape[0],):
        raise ValueError(f"right-hand side has shape {f.shape}, matrix is {A.shape}")
    try:
        with warnings.catch_warnings():
            # an exactly singular factor is reported below as an exception
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    if np.any(np.diag(lu) == 0):
        raise SingularMatrixError("zero pivot in LU factorization")
    c = scipy.linalg.lu_solve((lu, piv), f)
    if not np.all(np.isfinite(c)):
        raise SingularMatrixError("solution is not finite")
    return c


def rel_err_inf(b_test, b_ref):
    b_test = np.asarray(b_test, dtype=float)
    b_ref = np.asarray(b_ref, dtype=float)
    if b_test.shape != b_ref.shape:
        raise ValueError(f"shape mismatch {b_test.shape} vs {b_ref.shape}")
    scale = np.max(np.abs(b_ref))
    if scale == 0:
        raise ValueError("reference vector is identically zero")
    return float(np.max(np.abs(b_test - b_ref)) / scale)


def halton2d(N):
    """First ``N`` Halton points in bases (2, 3), skipping the origin at index 0."""
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    return qmc.Halton(d=2, scramble=False).random(N + 1)[1:]


def random_vector(N, seed):
    """``N`` values uniform on ``[-1, 1]`` from numpy's PCG64 generator."""
    return np.random.default_rng(seed).uniform(-1.0, 1.0, N)


def read_points(path):
    """Whitespace-separated ``x y`` per line; ``#`` starts a comment."""
    pts = np.loadtxt(path, comments="#", ndmin=2)
    if pts.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns, found {pts.shape[1]}")
    return _points(pts)


def write_points(path, points, header=""):
    np.savetxt(path, _points(points), fmt="%.17g", header=header)
