"""Fast product with the IMQ interpolation matrix.

At every level each block gathers sine and cosine moments of its sources
about its center. The moments are evaluated at the targets in its interaction
list through the translated expansion. Pairs left over at the finest level
are summed directly. For roughly uniform points the cost is
``O(K N L + N^2 / 4^L)``. Choosing ``L ~ log4(N)`` makes it ``O(N log N)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import _check_t
from .partition import bounding_square, build_tree
from .specfun import coeff_table, n_coeffs

__all__ = [
    "SourceTables",
    "FastOperator",
    "build_operator",
    "compute_moments",
    "apply_far",
    "apply_near",
    "fast_matvec",
    "cost_upper_bound",
    "auto_level",
]


@dataclass(frozen=True, eq=False)
class SourceTables:
    """Lifted spherical data of every point relative to its block center, per level.

    Arrays have shape ``(L, N)``. ``scale[l]`` is the block half-diagonal used to
    keep ``rho^n`` in range.
    """

    rho: np.ndarray
    cos_theta: np.ndarray
    cos_omega: np.ndarray
    sin_omega: np.ndarray
    scale: np.ndarray
    d: np.ndarray
    x: np.ndarray
    y: np.ndarray
    near_x: np.ndarray
    near_y: np.ndarray


@dataclass(frozen=True, eq=False)
class FastOperator:
    points: np.ndarray
    t: float
    M: int
    tree: object
    tables: SourceTables

    @property
    def N(self):
        return self.points.shape[0]

    @property
    def K(self):
        return n_coeffs(self.M)

    @property
    def L(self):
        return self.tree.L

    @property
    def shape(self):
        return (self.N, self.N)

    @property
    def dtype(self):
        return np.dtype(float)

    def matvec(self, u):
        return fast_matvec(self, u)

    def __matmul__(self, u):
        return self.matvec(u)

    def operation_count(self):
        """Multiplications of one product, by the accounting of the cost model.

        Trigonometric, Legendre and ``d`` factors are treated as precomputed.
        Returns a dict with ``moments``, ``far`` and ``near`` entries.
        """
        K = self.K
        moments = far = 0
        for lev in self.tree.levels:
            counts = np.diff(lev.starts)
            moments += 4 * K * int(counts.sum())
            for b in range(lev.n_blocks):
                # one expansion evaluation per (target, nonempty source block)
                far += 4 * K * int(counts[b]) * int(np.count_nonzero(counts[lev.interactions(b)]))
        fin = self.tree.levels[-1]
        counts = np.diff(fin.starts)
        near = sum(int(counts[b]) * int(counts[self.tree.near(b)].sum()) for b in range(fin.n_blocks))
        return {"moments": moments, "far": far, "near": near}


def cost_upper_bound(N, M, L):
    """``N (109 K L + 9 N / 4^(L+1))``, the multiplication count bound for uniform points."""
    K = n_coeffs(M)
    return N * (109 * K * L + 9 * N / 4 ** (L + 1))


def max_level(N):
    """Deepest level that still leaves at least one point per finest block on average."""
    return max(1, int(math.floor(math.log(max(N, 1), 4))) - 1)


def auto_level(N, M):
    """Number of levels from the minimizer of ``g(L) = a L + b 4^-L``.

    ``a = 109 K``, ``b = 9 N / 4``. The continuous minimizer is
    ``log4(b ln 4 / a)``; the deepest whole level not beyond it is used,
    clamped to ``[1, max_level(N)]``.
    """
    alpha = 109.0 * n_coeffs(M)
    beta = 9.0 * N / 4.0
    lam = math.log(beta * math.log(4.0) / alpha, 4.0)
    return int(min(max(math.floor(lam), 1), max_level(N)))


def build_operator(points, t, M=10, L="auto", square=None):
    """Assemble the tree and all vector-independent tables."""
    _check_t(t)
    if M < 0:
        raise ValueError(f"truncation index must be >= 0, got {M}")
    pts = np.ascontiguousarray(np.asarray(points, dtype=float).reshape(-1, 2))
    if pts.shape[0] < 1:
        raise ValueError("need at least one point")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point coordinates must be finite")
    if L == "auto" or L is None:
        L = auto_level(pts.shape[0], M)
    L = int(L)
    if square is None:
        square = bounding_square(pts)
    tree = build_tree(pts, square, L)

    N = pts.shape[0]
    rho = np.empty((L, N))
    cos_th = np.empty((L, N))
    cos_om = np.empty((L, N))
    sin_om = np.empty((L, N))
    scale = np.empty(L)
    for a, lev in enumerate(tree.levels):
        # sources and center share the plane X3 = -t/2, so the lifted offset is planar
        rel = pts - lev.centers[lev.block_of]
        r = np.hypot(rel[:, 0], rel[:, 1])
        safe = np.where(r > 0, r, 1.0)
        rho[a] = r
        cos_th[a] = 0.0
        cos_om[a] = np.where(r > 0, rel[:, 0] / safe, 1.0)
        sin_om[a] = np.where(r > 0, rel[:, 1] / safe, 0.0)
        scale[a] = 0.5 * np.sqrt(2.0) * lev.side
    fin = tree.levels[-1]
    tables = SourceTables(
        rho,
        cos_th,
        cos_om,
        sin_om,
        scale,
        coeff_table(M),
        np.ascontiguousarray(pts[:, 0]),
        np.ascontiguousarray(pts[:, 1]),
        np.ascontiguousarray(pts[fin.order, 0]),
        np.ascontiguousarray(pts[fin.order, 1]),
    )
    return FastOperator(pts, float(t), int(M), tree, tables)


def compute_moments(op, l, u):
    """Sine and cosine moments of every block at level ``l``, each of shape ``(n_blocks, K)``."""
    lev = op.tree.level(l)
    tab = op.tables
    a = l - 1
    v = np.empty((lev.n_blocks, op.K))
    w = np.empty((lev.n_blocks, op.K))
    _kernels.block_moments(
        op.M, lev.order, lev.starts, tab.rho[a], tab.cos_theta[a], tab.cos_omega[a], tab.sin_omega[a],
        tab.scale[a], np.ascontiguousarray(u, dtype=float), v, w,
    )
    return v, w


def apply_far(op, l, moments, b):
    """Add level ``l`` expansion contributions to ``b`` in place."""
    lev = op.tree.level(l)
    v, w = moments
    _kernels.far_field(
        op.M, op.t, op.tables.x, op.tables.y, lev.order, lev.starts, lev.centers,
        lev.inter_starts, lev.inter_list, op.tables.scale[l - 1], op.tables.d, v, w, b,
    )


def apply_near(op, u, b):
    """Add the direct finest-level neighbour sums to ``b`` in place."""
    fin = op.tree.levels[-1]
    out = np.empty(op.N)
    _kernels.near_field(
        op.t, op.tables.near_x, op.tables.near_y, np.ascontiguousarray(u[fin.order], dtype=float),
        fin.starts, op.tree.near_starts, op.tree.near_list, out,
    )
    b[fin.order] += out


def fast_matvec(op, u):
    u = np.asarray(u, dtype=float)
    if u.shape != (op.N,):
        raise ValueError(f"vector has shape {u.shape}, operator expects ({op.N},)")
    b = np.zeros(op.N)
    for l in range(1, op.L + 1):
        apply_far(op, l, compute_moments(op, l, u), b)
    apply_near(op, u, b)
    return b
