"""
Approval voting on a circular spectrum
======================================

Four voters sit at the corners of a square-shaped spectrum of opinion.
Each approves the closed arc from one neighbouring corner to the other.
Any two voters can find a common platform along one of the two arcs
between them, so some platform wins a strict majority; here it is 3 of 4.

When two voters' approvals leave gaps on both arcs between them, the
society fails the requirement and the pair is reported.
"""

import random
from fractions import Fraction

from treekkm import (
    CircularSociety,
    MetricCycle,
    NotSuperAgreeableError,
    TreePoint,
    majority_point,
    super_agreeable_majority,
)
from treekkm.random_instances import random_cycle, random_cycle_cover

square = MetricCycle([1, 1, 1, 1])
corners = ("north", "east", "south", "west")
society = CircularSociety(
    square,
    tuple(square.set_from_arcs([((i - 1) % 4, (i + 1) % 4)]) for i in range(4)),
    tuple(TreePoint(vertex=i) for i in range(4)),
    corners,
)
res = super_agreeable_majority(society)
print(f"platform {res.point} approved by {len(res.approving)} of {res.voters}: {res.approving}")

split = CircularSociety(
    square,
    (square.set_from_arcs([(0, Fraction(1, 2))]), square.set_from_arcs([(2, Fraction(5, 2))])),
    (TreePoint(vertex=0), TreePoint(vertex=2)),
    ("left", "right"),
)
try:
    super_agreeable_majority(split)
except NotSuperAgreeableError as err:
    print("rejected:", err)

# a larger random cover: the deepest point always clears the majority bar
rng = random.Random(7)
ring = random_cycle(rng, 40)
cover = random_cycle_cover(rng, ring)
best = majority_point(ring, cover)
print(f"40 sets on a ring: depth {best.depth}, bound {best.bound}")
