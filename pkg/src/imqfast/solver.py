"""Matrix-free solution of the interpolation system and interpolant evaluation."""
from dataclasses import dataclass, field

import numpy as np

from .geometry import _check_t
from .reference import imq_sum

__all__ = ["SolveReport", "Interpolant", "iterative_solve", "evaluate_interpolant"]


@dataclass
class SolveReport:
    c: np.ndarray
    iterations: int
    final_relative_residual: float
    converged: bool
    # true relative residual at the start and after every restart cycle
    residual_history: list = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class Interpolant:
    centers: np.ndarray
    coefficients: np.ndarray
    t: float

    def __call__(self, x):
        return evaluate_interpolant(self, x)


def iterative_solve(op, f, tol=1e-8, max_iter=500, restart=60):
    """Restarted GMRES on ``A c = f`` using only ``op.matvec``.

    Starts from zero and stops once ``|f - A c|_2 <= tol |f|_2`` (checked on the
    true residual at the end of each cycle) or after ``max_iter`` operator
    applications inside Arnoldi cycles.
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    f = np.asarray(f, dtype=float)
    N = op.shape[0]
    if f.shape != (N,):
        raise ValueError(f"right-hand side has shape {f.shape}, operator expects ({N},)")
    c = np.zeros(N)
    fnorm = np.linalg.norm(f)
    if fnorm == 0:
        return SolveReport(c, 0, 0.0, True, [0.0])

    r = f.copy()
    res = 1.0
    history = [res]
    it = 0
    while res > tol and it < max_iter:
        m = min(restart, max_iter - it, N)
        beta = np.linalg.norm(r)
        V = np.zeros((m + 1, N))
        H = np.zeros((m + 1, m))
        cs = np.zeros(m)
        sn = np.zeros(m)
        g = np.zeros(m + 1)
        g[0] = beta
        V[0] = r / beta
        k = 0
        while k < m:
            wv = op.matvec(V[k])
            it += 1
            if not np.all(np.isfinite(wv)):
                raise FloatingPointError(f"non-finite operator output at iteration {it}")
            # Gram-Schmidt twice; the IMQ matrix is badly conditioned
            for _ in range(2):
                coef = V[: k + 1] @ wv
                wv -= coef @ V[: k + 1]
                H[: k + 1, k] += coef
            H[k + 1, k] = np.linalg.norm(wv)
            for i in range(k):
                H[i, k], H[i + 1, k] = cs[i] * H[i, k] + sn[i] * H[i + 1, k], -sn[i] * H[i, k] + cs[i] * H[i + 1, k]
            denom = np.hypot(H[k, k], H[k + 1, k])
            breakdown = H[k + 1, k] <= 1e-14 * denom
            if not breakdown:
                V[k + 1] = wv / H[k + 1, k]
            cs[k], sn[k] = H[k, k] / denom, H[k + 1, k] / denom
            H[k, k], H[k + 1, k] = denom, 0.0
            g[k], g[k + 1] = cs[k] * g[k], -sn[k] * g[k]
            k += 1
            if breakdown or abs(g[k]) <= tol * fnorm:
                break
        y = np.linalg.solve(np.triu(H[:k, :k]), g[:k]) if k else np.zeros(0)
        c += y @ V[:k]
        r = f - op.matvec(c)
        if not np.all(np.isfinite(r)):
            raise FloatingPointError(f"non-finite residual after iteration {it}")
        res = float(np.linalg.norm(r) / fnorm)
        history.append(res)
        if breakdown and res > tol and k < m:
            # exact breakdown without convergence: the Krylov space is exhausted
            break
    return SolveReport(c, it, res, res <= tol, history)


def evaluate_interpolant(interp, x):
    """``sum_j c_j phi(|x - y_j|)`` at one point (shape ``(2,)``) or many (``(n, 2)``)."""
    _check_t(interp.t)
    x = np.asarray(x, dtype=float)
    vals = imq_sum(x.reshape(-1, 2), interp.centers, interp.coefficients, interp.t)
    return float(vals[0]) if x.ndim == 1 else vals
