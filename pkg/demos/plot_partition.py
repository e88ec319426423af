"""
Blocks, interaction lists and the near field
============================================

The fast product splits the unit square into a 4x4 grid at level 1, 8x8 at
level 2, and so on. Each block talks to the distant blocks in its interaction
list through moments; its immediate neighbours at the finest level are summed
directly.
"""

import numpy as np

from imqfast import BlockRef, Square, build_tree, coverage_counts, halton2d, interaction_list, near_list, verify_separation

points = halton2d(400)
tree = build_tree(points, Square(np.zeros(2), 1.0), L=2)

# Level 1: every block that is not a neighbour.
corner = interaction_list(tree, BlockRef(1, 0, 0))
print("level-1 partners of (0, 0):", sorted((b.i, b.j) for b in corner))

# Level 2 only adds children of the parent's neighbours, so lists stay short.
print("level-2 partners of (3, 4):", len(interaction_list(tree, BlockRef(2, 3, 4))))
print("finest-level neighbours of (3, 4):", len(near_list(tree, BlockRef(2, 3, 4))))

# Each pair of points is handled exactly once, by one level or by the near field.
counts = coverage_counts(tree)
print("every pair covered once:", bool(np.all(counts == 1)))

# The lifted radius ratio stays far below 1/2, which keeps the expansion accurate.
report = verify_separation(tree, t=1.0)
print("worst ratio per level:", np.round(report.level_max, 4))
