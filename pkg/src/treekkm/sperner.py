"""
Proper labellings of trees and the successor walk to a fully-labelled edge.

A labelling assigns each vertex a subset of a finite label universe ``A``
drawn from the vertex set.  It is proper when every label labels itself and
the labels a vertex misses all sit in one component of the tree with that
vertex removed.  Walking from a leaf towards the missing labels ends on an
edge whose two endpoints together carry every label.

The same machinery gives the discrete fixed point statement for vertex maps
and its converse construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .metric_tree import MetricTree, TreeError


class ImproperLabellingError(ValueError):
    """The labelling violates the proper-labelling conditions."""


@dataclass(frozen=True)
class Labelling:
    universe: frozenset[int]
    labels: Mapping[int, frozenset[int]]

    @classmethod
    def make(cls, universe: Iterable[int], labels: Mapping[int, Iterable[int]]) -> "Labelling":
        A = frozenset(int(a) for a in universe)
        lab = {int(v): frozenset(int(a) for a in ls) for v, ls in labels.items()}
        for v, ls in lab.items():
            extra = ls - A
            if extra:
                raise ImproperLabellingError(
                    f"vertex {v} carries labels {sorted(extra)} outside the universe"
                )
        return cls(A, lab)

    def __getitem__(self, v: int) -> frozenset[int]:
        return self.labels.get(v, frozenset())

    def missing(self, v: int) -> frozenset[int]:
        return self.universe - self[v]

    def is_full(self, v: int) -> bool:
        return self[v] >= self.universe


@dataclass(frozen=True)
class FullyLabelledWitness:
    edge: tuple[int, int]
    trace: tuple[int, ...] = ()
    via_full_vertex: Optional[int] = None


@dataclass(frozen=True)
class FixedVertex:
    vertex: int


@dataclass(frozen=True)
class SpanningEdge:
    edge: tuple[int, int]


DiscreteFPWitness = Union[FixedVertex, SpanningEdge]


@dataclass(frozen=True)
class ProperCheck:
    ok: bool
    vertex: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_labels(t: MetricTree, lab: Labelling) -> None:
    if not lab.universe:
        raise ImproperLabellingError("label universe is empty")
    for a in lab.universe:
        if not 0 <= a < t.n:
            raise ImproperLabellingError(f"label {a} is not a vertex of the tree")
    for v, ls in lab.labels.items():
        if not 0 <= v < t.n:
            raise ImproperLabellingError(f"labelled vertex {v} is not in the tree")
        if not ls <= lab.universe:
            raise ImproperLabellingError(f"vertex {v} carries labels outside the universe")


def is_proper(t: MetricTree, lab: Labelling) -> ProperCheck:
    """Check both proper-labelling conditions; the diagnostic names a violating vertex."""
    _check_labels(t, lab)
    for a in sorted(lab.universe):
        if a not in lab[a]:
            return ProperCheck(False, a, f"label {a} does not label its own vertex")
    for v in range(t.n):
        miss = lab.missing(v)
        if not miss:
            continue
        if v in miss:
            return ProperCheck(False, v, f"vertex {v} misses its own label")
        hop = t.next_hop(v, next(iter(miss)))
        if not miss <= t.component_vertices(v, hop):
            return ProperCheck(
                False, v, f"vertex {v} misses labels lying in more than one component"
            )
    return ProperCheck(True)


def successor(t: MetricTree, lab: Labelling, v: int) -> int:
    """Neighbour of ``v`` towards the component holding its missing labels."""
    miss = lab.missing(v)
    if not miss:
        raise ImproperLabellingError(f"vertex {v} carries every label; successor undefined")
    return t.next_hop(v, min(miss))


def find_fully_labelled_edge(t: MetricTree, lab: Labelling, check: bool = True) -> FullyLabelledWitness:
    """Locate a fully-labelled edge by the successor walk.

    The search is confined to the subtree spanned by the labels.  A vertex
    carrying every label short-circuits the walk (smallest such id, with its
    smallest neighbour inside the span).  Otherwise the walk starts at the
    smallest leaf of the span and stops at the first pair ``S(x) = y``,
    ``S(y) = x``.
    """
    if check:
        res = is_proper(t, lab)
        if not res:
            raise ImproperLabellingError(res.reason)
    span = t.subtree_spanned(lab.universe)
    for v in sorted(span.vertices):
        if lab.is_full(v):
            inside = [w for w in t.neighbours(v) if w in span.vertices]
            w = min(inside) if inside else min(t.neighbours(v))
            return FullyLabelledWitness(_ordered(v, w), (v,), via_full_vertex=v)

    leaves = span.leaves()
    x = leaves[0]
    trace = [x]
    y = successor(t, lab, x)
    limit = 2 * t.n
    while True:
        trace.append(y)
        z = successor(t, lab, y)
        if z == x:
            return FullyLabelledWitness(_ordered(x, y), tuple(trace))
        x, y = y, z
        if len(trace) > limit:  # pragma: no cover - impossible for proper labellings
            raise ImproperLabellingError("successor walk did not settle")


def _ordered(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def is_fully_labelled(lab: Labelling, edge: tuple[int, int]) -> bool:
    x, y = edge
    return (lab[x] | lab[y]) >= lab.universe


# -- vertex maps ---------------------------------------------------------------


def _as_vertex_map(t: MetricTree, f: Mapping[int, int]) -> list[int]:
    out = []
    for v in range(t.n):
        if v not in f:
            raise TreeError(f"vertex map is not total: {v} has no image")
        w = int(f[v])
        if not 0 <= w < t.n:
            raise TreeError(f"image {w} of {v} is not a vertex")
        out.append(w)
    return out


def labelling_from_vertex_map(t: MetricTree, f: Mapping[int, int]) -> Labelling:
    """Label ``v`` by itself and every vertex outside the component of ``T - v`` holding ``f(v)``."""
    img = _as_vertex_map(t, f)
    universe = frozenset(range(t.n))
    labels = {}
    for v, w in enumerate(img):
        if w == v:
            raise TreeError(f"vertex {v} is fixed; report it directly")
        labels[v] = universe - t.component_vertices(v, t.next_hop(v, w))
    return Labelling(universe, labels)


def discrete_fixed_point(t: MetricTree, f: Mapping[int, int]) -> DiscreteFPWitness:
    """A fixed vertex of ``f``, or an edge lying on the path between the images of its ends."""
    img = _as_vertex_map(t, f)
    for v, w in enumerate(img):
        if v == w:
            return FixedVertex(v)
    lab = labelling_from_vertex_map(t, f)
    x, y = find_fully_labelled_edge(t, lab, check=False).edge
    e = t.edge_id(x, y)
    if not t.edge_separates(e, t.vertex_point(img[x]), t.vertex_point(img[y])):
        raise AssertionError(f"edge {(x, y)} does not separate f({x}) from f({y})")
    return SpanningEdge((x, y))


@dataclass(frozen=True)
class ReverseConstruction:
    """Outcome of turning a proper labelling into a fixed-point-free vertex map."""

    full_vertex: Optional[int] = None
    vertex_map: dict = field(default_factory=dict)

    def edge(self, t: MetricTree) -> tuple[int, int]:
        w = discrete_fixed_point(t, self.vertex_map)
        return w.edge


def vertex_map_from_labelling(t: MetricTree, lab: Labelling) -> ReverseConstruction:
    """Send each vertex to its smallest missing label (or report a fully-labelled vertex)."""
    res = is_proper(t, lab)
    if not res:
        raise ImproperLabellingError(res.reason)
    for v in range(t.n):
        if lab.is_full(v):
            return ReverseConstruction(full_vertex=v)
    return ReverseConstruction(vertex_map={v: min(lab.missing(v)) for v in range(t.n)})
