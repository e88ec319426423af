"""Compiled inner loops for the fast and the dense IMQ products.

Every loop writes each output entry from a single iteration with a fixed
summation order, so results do not depend on the thread count.
"""
import numba
import numpy as np

from .specfun import plm_fill


@numba.njit(cache=True, inline="always")
def _trig_fill(M, c1, s1, cm, sm):
    cm[0] = 1.0
    sm[0] = 0.0
    for m in range(1, M + 1):
        cm[m] = cm[m - 1] * c1 - sm[m - 1] * s1
        sm[m] = sm[m - 1] * c1 + cm[m - 1] * s1


@numba.njit(cache=True, parallel=True)
def block_moments(M, order, starts, rho, cos_th, cos_om, sin_om, scale, u, v, w):
    """Sine moments ``v`` and cosine moments ``w`` of every block.

    ``rho``, ``cos_th``, ``cos_om``, ``sin_om`` are the lifted spherical data of
    each source relative to its own block center. Source factors are scaled
    by ``scale^-n``; the target factors carry the matching ``scale^n``.
    """
    nb = starts.size - 1
    K = (M + 1) * (M + 2) // 2
    for b in numba.prange(nb):
        P = np.empty(K)
        cm = np.empty(M + 1)
        sm = np.empty(M + 1)
        for k in range(K):
            v[b, k] = 0.0
            w[b, k] = 0.0
        for idx in range(starts[b], starts[b + 1]):
            jp = order[idx]
            uj = u[jp]
            ct = cos_th[jp]
            plm_fill(M, ct, np.sqrt(max(0.0, 1.0 - ct * ct)), P)
            _trig_fill(M, cos_om[jp], sin_om[jp], cm, sm)
            rr = rho[jp] / scale
            pw = uj
            for n in range(M + 1):
                base = n * (n + 1) // 2
                for m in range(n + 1):
                    val = P[base + m] * pw
                    v[b, base + m] += val * sm[m]
                    w[b, base + m] += val * cm[m]
                pw *= rr


@numba.njit(cache=True, parallel=True)
def far_field(M, t, xs, ys, order, starts, centers, inter_starts, inter_list, scale, dcoef, v, w, out):
    """Add the expansion contribution of every interacting block to ``out``."""
    nb = starts.size - 1
    K = (M + 1) * (M + 2) // 2
    t2 = t * t
    for tb in numba.prange(nb):
        if starts[tb] == starts[tb + 1]:
            continue
        P = np.empty(K)
        cm = np.empty(M + 1)
        sm = np.empty(M + 1)
        for idx in range(starts[tb], starts[tb + 1]):
            i = order[idx]
            acc = 0.0
            for qq in range(inter_starts[tb], inter_starts[tb + 1]):
                q = inter_list[qq]
                if starts[q] == starts[q + 1]:
                    continue
                dx = xs[i] - centers[q, 0]
                dy = ys[i] - centers[q, 1]
                pl = np.sqrt(dx * dx + dy * dy)
                rho = np.sqrt(pl * pl + t2)
                if pl > 0.0:
                    c1 = dx / pl
                    s1 = dy / pl
                else:
                    c1 = 1.0
                    s1 = 0.0
                plm_fill(M, t / rho, pl / rho, P)
                _trig_fill(M, c1, s1, cm, sm)
                fac = 1.0 / rho
                step = scale / rho
                for n in range(M + 1):
                    base = n * (n + 1) // 2
                    for m in range(n + 1):
                        k = base + m
                        acc += dcoef[k] * P[k] * fac * (sm[m] * v[q, k] + cm[m] * w[q, k])
                    fac *= step
            out[i] += acc


@numba.njit(cache=True, parallel=True, fastmath=True)
def near_field(t, xs, ys, u, starts, near_starts, near_list, out):
    """Direct kernel sums over neighbouring finest blocks.

    Inputs are in block-sorted order; ``out`` receives sorted-order results.
    """
    nb = starts.size - 1
    t2 = t * t
    for tb in numba.prange(nb):
        for idx in range(starts[tb], starts[tb + 1]):
            xi = xs[idx]
            yi = ys[idx]
            acc = 0.0
            for qq in range(near_starts[tb], near_starts[tb + 1]):
                q = near_list[qq]
                for jdx in range(starts[q], starts[q + 1]):
                    dx = xi - xs[jdx]
                    dy = yi - ys[jdx]
                    acc += u[jdx] / np.sqrt(t2 + dx * dx + dy * dy)
            out[idx] = acc


@numba.njit(cache=True, parallel=True, fastmath=True)
def imq_sum(tx, ty, sx, sy, c, t):
    """``out_i = sum_j c_j / sqrt(t^2 + |target_i - source_j|^2)``."""
    out = np.empty(tx.size)
    t2 = t * t
    for i in numba.prange(tx.size):
        acc = 0.0
        xi = tx[i]
        yi = ty[i]
        for j in range(sx.size):
            dx = xi - sx[j]
            dy = yi - sy[j]
            acc += c[j] / np.sqrt(t2 + dx * dx + dy * dy)
        out[i] = acc
    return out
