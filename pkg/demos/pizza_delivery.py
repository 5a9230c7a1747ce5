"""
Three pizzerias, one street map
===============================

A small street network around Grand Central is a tree of one-way-free
streets with exact lengths (in miles).  Every pizzeria delivers to a
connected stretch of the network around its shop, every two delivery zones
overlap, and together they reach every corner of the map.

On a tree that is enough to guarantee an address all three of them serve.
This script finds it twice: once with exact interval intersection, once
with the labelling walk on ever finer subdivisions of the streets.
"""

from fractions import Fraction

from treekkm import (
    ClosedSet,
    MetricTree,
    TreePoint,
    cover_from_connected_sets,
    intersect_all,
    kkm_point_via_sperner,
    validate_kkm_cover,
)

STOPS = ["Grand Central", "Bryant Park", "Times Square", "Harlem",
         "Union Square", "Chelsea", "Village"]

streets = MetricTree(7, [
    (0, 1, 1),   # Grand Central - Bryant Park
    (0, 2, 1),   # Grand Central - Times Square
    (2, 3, 3),   # Times Square - Harlem
    (0, 4, 2),   # Grand Central - Union Square
    (4, 5, 1),   # Union Square - Chelsea
    (4, 6, 1),   # Union Square - Village
])


def at(v):
    return TreePoint(vertex=v)


def toward(u, v, miles):
    return streets.point_between(u, v, Fraction(miles))


def describe(p):
    if p.vertex is not None:
        return STOPS[p.vertex]
    e = streets.edges[p.edge]
    return f"{p.offset} mi from {STOPS[e.u]} towards {STOPS[e.v]}"


def zone(*routes):
    pieces = []
    for a, b in routes:
        pieces += streets.pieces(a, b)
    return ClosedSet.from_pieces(streets, pieces)


# Harlem pizzeria: everything down to Grand Central and half a mile past it
harlem = zone((at(3), at(0)), (at(0), toward(0, 4, "1/2")))
# Bryant Park slice shop: its own block, plus a mile towards Union Square
bryant = zone((at(1), at(0)), (at(0), toward(0, 4, 1)))
# Chelsea: the whole southern end, up to half a mile short of Grand Central
chelsea = zone((at(5), at(4)), (at(4), at(6)), (at(4), toward(0, 4, "1/2")))

cover = cover_from_connected_sets(streets, [harlem, bryant, chelsea])
print("zones anchored at:", [describe(a) for a in cover.anchors])
print("cover check:", bool(validate_kkm_cover(streets, cover)))

common = intersect_all(streets, cover)
print("addresses served by all three:", common)
print("  ->", describe(common.smallest_point()))

# The constructive route: subdivide, label each stop by the zones that reach
# it, walk to a fully labelled street segment.
found = kkm_point_via_sperner(streets, cover, delta0=Fraction(1, 4))
print("walk found:", describe(found.point), f"after {found.halvings} halvings")
for step in found.trace:
    print(f"  delta={step.delta}: {step.vertices} stops, segment "
          f"{describe(step.edge[0])} .. {describe(step.edge[1])}")
