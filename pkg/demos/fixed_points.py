"""
Fixed points of maps on a tree
==============================

A continuous self-map of a finite metric tree always fixes some point.
For a map that is linear along each edge, the fixed points are found
exactly.  For a map we can only evaluate (plus a Lipschitz bound), we get a
point that moves less than any chosen tolerance.
"""

from fractions import Fraction

from treekkm import (
    BlackBoxMap,
    MetricTree,
    PLMap,
    TreePoint,
    discrete_fixed_point,
    epsilon_fixed_point,
    eval_pl,
    fixed_point_pl,
    fixed_point_set,
)

# a star with three arms of different lengths; centre is vertex 0
star = MetricTree(4, [(0, 1, 1), (0, 2, 2), (0, 3, "1/2")])

# send each tip to the next arm's tip and drop the centre halfway down arm 1
m = PLMap((
    star.point_between(0, 1, "1/2"),
    TreePoint(vertex=2),
    TreePoint(vertex=3),
    TreePoint(vertex=1),
))

z = fixed_point_pl(star, m)
print("exact fixed point:", z, "-> image", eval_pl(star, m, z))
print("all fixed points:", fixed_point_set(star, m))

# the same map seen only through evaluations
k = m.lipschitz(star)
print("Lipschitz constant:", k)
box = BlackBoxMap.lipschitz(lambda x: eval_pl(star, m, x), k)
for eps in (Fraction(1, 4), Fraction(1, 16), Fraction(1, 64)):
    r = epsilon_fixed_point(star, box, eps)
    print(f"eps={eps}: y={r.point} moves {r.displacement} "
          f"(grid step {r.delta}, {r.vertices} grid points)")

# vertex maps either fix a vertex or squeeze an edge between its images
rotate = {0: 1, 1: 2, 2: 3, 3: 1}
print("vertex rotation:", discrete_fixed_point(star, rotate))
