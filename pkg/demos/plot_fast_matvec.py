"""
Fast versus dense matrix-vector products
========================================

Compare the hierarchical product with the direct O(N^2) sum on Halton
points. Expect the fast product to win by a growing margin from a few tens
of thousands of points on, at an error of a few 1e-10.
"""

import time

from imqfast import auto_level, build_operator, dense_matvec, halton2d, random_vector, rel_err_inf

t, M = 1.0, 10

for N in (5000, 20000, 40000):
    points = halton2d(N)
    u = random_vector(N, seed=42)

    op = build_operator(points, t, M)  # L is picked from the cost model
    op.matvec(u)  # first call compiles the kernels

    start = time.perf_counter()
    b_fast = op.matvec(u)
    fast = time.perf_counter() - start

    start = time.perf_counter()
    b_dense = dense_matvec(points, t, u)
    dense = time.perf_counter() - start

    print(
        f"N={N:6d}  L={op.L} (auto {auto_level(N, M)})  fast {fast:.3f}s  dense {dense:.3f}s  "
        f"error {rel_err_inf(b_fast, b_dense):.2e}"
    )

# For the full sweep with medians of repeated runs, use
#   imqfast --mode bench --n 20000,40000,60000,80000,100000 --levels 1,2,3
