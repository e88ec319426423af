"""Multilevel block partition of the bounding square.

Level ``l`` (``1 <= l <= L``) splits the square into ``2^(l+1) x 2^(l+1)``
blocks. Block ``(i, j)`` has flat id ``i * n + j`` where ``i`` indexes the
first coordinate. Cells are half-open, so a point on an interior edge belongs
to the cell with the higher index.

Interaction lists follow the usual quadtree rule. At level 1 they hold every
block at Chebyshev index distance >= 2. At deeper levels they hold the
children of the parent's 3x3 neighbourhood that are not neighbours of the
block itself. At the finest level, each block's near list is its own 3x3
neighbourhood. Together these cover each ordered pair of points exactly once.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Square",
    "BlockRef",
    "Level",
    "BlockTree",
    "SeparationReport",
    "bounding_square",
    "build_tree",
    "interaction_list",
    "near_list",
    "verify_separation",
    "coverage_counts",
]

_MIN_SIDE = 1e-9
_INFLATE = 1e-9


class Square(NamedTuple):
    origin: np.ndarray
    side: float


class BlockRef(NamedTuple):
    level: int
    i: int
    j: int


@dataclass(frozen=True, eq=False)
class Level:
    """Bucketing of the points at one level, in CSR layout.

    ``order[starts[b]:starts[b + 1]]`` are the indices of the points in block
    ``b``; ``inter_list[inter_starts[b]:inter_starts[b + 1]]`` are the ids of
    the blocks well separated from ``b`` at this level.
    """

    level: int
    n: int
    side: float
    centers: np.ndarray
    block_of: np.ndarray
    order: np.ndarray
    starts: np.ndarray
    inter_starts: np.ndarray
    inter_list: np.ndarray

    @property
    def n_blocks(self):
        return self.n * self.n

    def bucket(self, b):
        return self.order[self.starts[b] : self.starts[b + 1]]

    def interactions(self, b):
        return self.inter_list[self.inter_starts[b] : self.inter_starts[b + 1]]


@dataclass(frozen=True, eq=False)
class BlockTree:
    square: Square
    levels: tuple
    near_starts: np.ndarray
    near_list: np.ndarray

    @property
    def L(self):
        return len(self.levels)

    @property
    def n_points(self):
        return self.levels[0].block_of.size

    def level(self, l):
        if not 1 <= l <= self.L:
            raise ValueError(f"level {l} outside [1, {self.L}]")
        return self.levels[l - 1]

    def block_id(self, p):
        lev = self.level(p.level)
        if not (0 <= p.i < lev.n and 0 <= p.j < lev.n):
            raise ValueError(f"block {p} outside the {lev.n}x{lev.n} grid")
        return p.i * lev.n + p.j

    def near(self, b):
        return self.near_list[self.near_starts[b] : self.near_starts[b + 1]]


def bounding_square(points):
    """Smallest square holding ``points``, shorter axis centred, side slightly inflated."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise ValueError("cannot bound an empty point set")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point coordinates must be finite")
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    extent = float((hi - lo).max())
    side = max(extent * (1.0 + _INFLATE), _MIN_SIDE)
    origin = 0.5 * (lo + hi) - 0.5 * extent
    # keep the minimum corner on the square's lower edge along the long axis
    origin = np.minimum(origin, lo)
    return Square(origin, side)


def _cell_index(coord, origin, side, n):
    idx = np.floor((coord - origin) * (n / side)).astype(np.int64)
    return np.clip(idx, 0, n - 1)


def _csr(groups, n_groups):
    counts = np.array([len(g) for g in groups], dtype=np.int64)
    starts = np.zeros(n_groups + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    flat = np.concatenate([np.asarray(g, dtype=np.int64) for g in groups]) if n_groups else np.empty(0, np.int64)
    return starts, flat


def _interaction_ids(l, n):
    """Per-block interaction lists at level ``l`` as lists of flat ids."""
    lists = []
    for i in range(n):
        for j in range(n):
            if l == 1:
                cand = [(a, b) for a in range(n) for b in range(n)]
            else:
                pi, pj = i // 2, j // 2
                npar = n // 2
                cand = [
                    (2 * a + da, 2 * b + db)
                    for a in range(max(pi - 1, 0), min(pi + 2, npar))
                    for b in range(max(pj - 1, 0), min(pj + 2, npar))
                    for da in (0, 1)
                    for db in (0, 1)
                ]
            lists.append(sorted(a * n + b for a, b in cand if max(abs(a - i), abs(b - j)) >= 2))
    return lists


def _near_ids(n):
    return [
        [a * n + b for a in range(max(i - 1, 0), min(i + 2, n)) for b in range(max(j - 1, 0), min(j + 2, n))]
        for i in range(n)
        for j in range(n)
    ]


def build_tree(points, square, L):
    """Bucket ``points`` into every level ``1..L`` and build the block lists."""
    if L < 1:
        raise ValueError(f"number of levels must be >= 1, got {L}")
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    origin = np.asarray(square.origin, dtype=float)
    levels = []
    for l in range(1, L + 1):
        n = 2 ** (l + 1)
        h = square.side / n
        ix = _cell_index(pts[:, 0], origin[0], square.side, n)
        iy = _cell_index(pts[:, 1], origin[1], square.side, n)
        block_of = ix * n + iy
        order = np.argsort(block_of, kind="stable")
        starts = np.searchsorted(block_of[order], np.arange(n * n + 1)).astype(np.int64)
        g = (np.arange(n) + 0.5) * h
        centers = np.stack(np.meshgrid(origin[0] + g, origin[1] + g, indexing="ij"), axis=-1).reshape(-1, 2)
        inter_starts, inter_list = _csr(_interaction_ids(l, n), n * n)
        levels.append(Level(l, n, h, centers, block_of, order, starts, inter_starts, inter_list))
    n = levels[-1].n
    near_starts, near_flat = _csr(_near_ids(n), n * n)
    return BlockTree(Square(origin, float(square.side)), tuple(levels), near_starts, near_flat)


def _refs(level, n, ids):
    return [BlockRef(level, int(b) // n, int(b) % n) for b in ids]


def interaction_list(tree, p):
    lev = tree.level(p.level)
    return _refs(p.level, lev.n, lev.interactions(tree.block_id(p)))


def near_list(tree, p):
    if p.level != tree.L:
        raise ValueError(f"near lists exist only at the finest level {tree.L}, got level {p.level}")
    return _refs(p.level, tree.levels[-1].n, tree.near(tree.block_id(p)))


@dataclass(frozen=True)
class SeparationReport:
    """Worst lifted radius ratio ``rho_{y-z} / rho_{x-z}`` per level."""

    level_max: tuple
    max_ratio: float

    @property
    def valid(self):
        return self.max_ratio < 0.5


def verify_separation(tree, t):
    """Largest ratio over all interacting block pairs, at extremal positions.

    The source radius is maximal at a corner of the source block; the target
    radius is minimal at the point of the target block nearest the source
    block's center. ``t = 0`` gives the planar limit.
    """
    if t < 0:
        raise ValueError(f"shape parameter must be >= 0, got {t}")
    level_max = []
    for lev in tree.levels:
        half = 0.5 * lev.side
        src = half * np.sqrt(2.0)
        worst = 0.0
        for b in range(lev.n_blocks):
            q = lev.interactions(b)
            if q.size == 0:
                continue
            gap = np.maximum(np.abs(lev.centers[q] - lev.centers[b]) - half, 0.0)
            tgt = np.sqrt(np.sum(gap * gap, axis=1) + t * t)
            worst = max(worst, float(src / tgt.min()))
        level_max.append(worst)
    return SeparationReport(tuple(level_max), max(level_max))


def coverage_counts(tree):
    """Count, for every ordered point pair ``(i, j)``, how often the lists cover it.

    Pair ``(i, j)`` is covered at level ``l`` when the block of target ``i``
    lies in the interaction list of the block of source ``j``, and at the
    finest level when it lies in the near list. Exact cover means every count
    is one. Memory is ``O(N^2)``; meant for small point sets.
    """
    counts = np.zeros((tree.n_points, tree.n_points), dtype=np.int64)
    for lev in tree.levels:
        adj = np.zeros((lev.n_blocks, lev.n_blocks), dtype=np.int64)
        for b in range(lev.n_blocks):
            adj[lev.interactions(b), b] = 1
        counts += adj[np.ix_(lev.block_of, lev.block_of)]
    fin = tree.levels[-1]
    adj = np.zeros((fin.n_blocks, fin.n_blocks), dtype=np.int64)
    for b in range(fin.n_blocks):
        adj[tree.near(b), b] = 1
    counts += adj[np.ix_(fin.block_of, fin.block_of)]
    return counts
