"""
Fixed points of self-maps of metric trees.

Piecewise-linear maps are given by vertex images and extended along each
edge at constant speed over the geodesic between the images.  For them the
move-away cover ``D_a = {x : d(x, a) <= d(f(x), a)}`` is computed exactly and
its common intersection is precisely the fixed point set.  Opaque maps with a
modulus of continuity get an epsilon-fixed point from the successor walk on a
fine segmentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .closed_set import ClosedSet
from .kkm import KKMCover, intersect_all
from .metric_tree import MetricTree, Rational, TreeError, TreePoint, as_fraction
from .sperner import (
    FixedVertex,
    Labelling,
    SpanningEdge,
    find_fully_labelled_edge,
    is_fully_labelled,
)

MoveAwayCover = KKMCover


class BadModulusError(ValueError):
    """The supplied modulus of continuity is contradicted by evaluations."""


@dataclass(frozen=True)
class PLMap:
    """Self-map fixed by the images of the vertices, linear along each edge."""

    images: tuple[TreePoint, ...]

    @classmethod
    def from_mapping(cls, t: MetricTree, images: Mapping[int, TreePoint]) -> "PLMap":
        pts = []
        for v in range(t.n):
            if v not in images:
                raise TreeError(f"vertex {v} has no image")
            t.check_point(images[v])
            pts.append(images[v])
        return cls(tuple(pts))

    @classmethod
    def from_vertex_map(cls, f: Sequence[int]) -> "PLMap":
        return cls(tuple(TreePoint(vertex=int(w)) for w in f))

    def lipschitz(self, t: MetricTree) -> Fraction:
        """Exact Lipschitz constant: the largest stretch factor over the edges."""
        return max(
            t.distance(self.images[e.u], self.images[e.v]) / e.length for e in t.edges
        )


def eval_pl(t: MetricTree, m: PLMap, x: TreePoint) -> TreePoint:
    if x.vertex is not None:
        return m.images[x.vertex]
    e = t.edges[x.edge]
    fu, fv = m.images[e.u], m.images[e.v]
    if fu == fv:
        return fu
    span = t.distance(fu, fv)
    return t.point_along(fu, fv, span * x.offset / e.length)


@dataclass(frozen=True)
class BlackBoxMap:
    """An evaluable map with a modulus: ``d(x, y) < modulus(eps)`` implies ``d(fx, fy) < eps``.

    ``modulus`` may return None to mean "any distance will do".
    """

    evaluator: Callable[[TreePoint], TreePoint]
    modulus: Callable[[Fraction], Optional[Fraction]]

    def __call__(self, x: TreePoint) -> TreePoint:
        return self.evaluator(x)

    @classmethod
    def lipschitz(cls, evaluator: Callable[[TreePoint], TreePoint], constant: Rational) -> "BlackBoxMap":
        k = as_fraction(constant)
        if k < 0:
            raise ValueError("Lipschitz constant must be non-negative")
        return cls(evaluator, lambda eps: None if k == 0 else eps / k)

    @classmethod
    def from_pl(cls, t: MetricTree, m: PLMap, constant: Optional[Rational] = None) -> "BlackBoxMap":
        k = m.lipschitz(t) if constant is None else constant
        return cls.lipschitz(lambda x: eval_pl(t, m, x), k)


# -- move-away cover -----------------------------------------------------------


def _gate(d1: Fraction, d2: Fraction, span: Fraction) -> tuple[Fraction, Fraction]:
    """Arc position along a geodesic of length ``span`` closest to a point, and the gap.

    ``d1``/``d2`` are the point's distances to the two ends of the geodesic.
    """
    return (d1 + span - d2) / 2, (d1 + d2 - span) / 2


def _image_spans(t: MetricTree, m: PLMap) -> list[Fraction]:
    return [t.distance(m.images[e.u], m.images[e.v]) for e in t.edges]


def move_away_set(t: MetricTree, m: PLMap, a: TreePoint,
                  spans: Optional[Sequence[Fraction]] = None) -> ClosedSet:
    """Exact ``{x : d(x, a) <= d(f(x), a)}`` as a closed set."""
    t.check_point(a)
    if spans is None:
        spans = _image_spans(t, m)
    to_a = [t.distance(TreePoint(vertex=v), a) for v in range(t.n)]
    image_to_a = [t.distance(p, a) for p in m.images]
    pieces = []
    verts = []
    for eid, e in enumerate(t.edges):
        L = e.length
        own_pos, own_gap = _gate(to_a[e.u], to_a[e.v], L)
        span = spans[eid]
        img_pos, img_gap = _gate(image_to_a[e.u], image_to_a[e.v], span)

        def g(x: Fraction) -> Fraction:
            return abs(x * span / L - img_pos) + img_gap - abs(x - own_pos) - own_gap

        knots = {Fraction(0), L}
        if 0 < own_pos < L:
            knots.add(own_pos)
        if span:
            k = img_pos * L / span
            if 0 < k < L:
                knots.add(k)
        xs = sorted(knots)
        # at the ends g is just the difference of the two distances to a
        gs = [image_to_a[e.u] - to_a[e.u]] + [g(x) for x in xs[1:-1]] + [image_to_a[e.v] - to_a[e.v]]
        if gs[0] >= 0:
            verts.append(e.u)
        if gs[-1] >= 0:
            verts.append(e.v)
        for (x0, x1), (g0, g1) in zip(zip(xs, xs[1:]), zip(gs, gs[1:])):
            if g0 >= 0 and g1 >= 0:
                pieces.append((eid, x0, x1))
            elif g0 >= 0:
                pieces.append((eid, x0, x0 + g0 * (x1 - x0) / (g0 - g1)))
            elif g1 >= 0:
                pieces.append((eid, x0 + g0 * (x1 - x0) / (g0 - g1), x1))
    return ClosedSet(t, pieces, verts)


def move_away_cover(t: MetricTree, m: PLMap, anchors: Optional[Iterable[TreePoint]] = None) -> MoveAwayCover:
    """The move-away family for ``m``; anchors default to all vertices."""
    if anchors is None:
        anchors = [TreePoint(vertex=v) for v in range(t.n)]
    anchors = tuple(anchors)
    if not anchors:
        raise ValueError("at least one anchor is required")
    spans = _image_spans(t, m)
    return KKMCover(anchors, tuple(move_away_set(t, m, a, spans) for a in anchors))


def fixed_point_set(t: MetricTree, m: PLMap) -> ClosedSet:
    """All fixed points of ``m``: the common intersection of its move-away cover."""
    return intersect_all(t, move_away_cover(t, m), check=False)


def fixed_point_pl(t: MetricTree, m: PLMap) -> TreePoint:
    """Lexicographically smallest exact fixed point of a piecewise-linear map."""
    z = fixed_point_set(t, m).smallest_point()
    if eval_pl(t, m, z) != z:
        raise AssertionError(f"{z!r} is in every move-away set but is not fixed")
    return z


def discrete_fp_via_linear_extension(t: MetricTree, f: Sequence[int]):
    """Discrete fixed point witness obtained from the fixed point of the linear extension.

    The tree is rebuilt with unit edges and ``f`` is extended linearly; a fixed
    vertex is reported as such, an interior fixed point yields its edge.
    """
    unit = MetricTree(t.n, [(e.u, e.v, 1) for e in t.edges])
    z = fixed_point_pl(unit, PLMap.from_vertex_map(f))
    if z.vertex is not None:
        return FixedVertex(z.vertex)
    e = unit.edges[z.edge]
    return SpanningEdge((min(e.u, e.v), max(e.u, e.v)))


# -- approximate fixed points ----------------------------------------------------


def _vertex_distances(t: MetricTree, p: TreePoint) -> list[Fraction]:
    """Distances from ``p`` to every vertex; each vertex is reached through the nearer cell end."""
    ends = t.ends(p)
    if len(ends) == 1:
        return [t.vertex_distance(ends[0][0], v) for v in range(t.n)]
    (a, da), (b, db) = ends
    out = []
    for v in range(t.n):
        dav, dbv = t.vertex_distance(a, v), t.vertex_distance(b, v)
        out.append(da + dav if dav < dbv else db + dbv)
    return out


def move_away_labels(t: MetricTree, p: TreePoint, fp: TreePoint) -> frozenset[int]:
    """Original vertices ``v`` with ``d(p, v) <= d(f(p), v)``."""
    if p == fp:
        return frozenset(range(t.n))
    here, there = _vertex_distances(t, p), _vertex_distances(t, fp)
    return frozenset(v for v in range(t.n) if here[v] <= there[v])


@dataclass(frozen=True)
class EpsilonFixedPoint:
    point: TreePoint
    partner: TreePoint
    displacement: Fraction
    delta: Fraction
    vertices: int
    trace: tuple[int, ...]


def epsilon_fixed_point(t: MetricTree, f: BlackBoxMap, eps: Rational) -> EpsilonFixedPoint:
    """A point moved by less than ``eps``.

    Segments the tree below ``min(modulus(eps/2), eps/2)``, labels each
    segmentation vertex by the original vertices it does not approach, and
    walks to a fully-labelled edge; the endpoint that moves least is returned.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    half = eps / 2
    d1 = f.modulus(half)
    delta = half if d1 is None else min(as_fraction(d1), half)
    if delta <= 0:
        raise BadModulusError("modulus returned a non-positive distance")
    seg = t.segment(delta)
    images = [f(p) for p in seg.points]
    for img in images:
        t.check_point(img)
    labels = {i: move_away_labels(t, p, fp) for i, (p, fp) in enumerate(zip(seg.points, images))}
    lab = Labelling(frozenset(range(t.n)), labels)
    w = find_fully_labelled_edge(seg.refined, lab, check=False)
    x, y = w.edge
    moves = sorted(
        ((t.distance(seg.points[i], images[i]), i) for i in (x, y)),
        key=lambda pair: pair[0],
    )
    disp, best = moves[0]
    other = y if best == x else x
    if disp >= eps:
        raise BadModulusError(
            f"fully-labelled edge endpoint moves by {disp} >= {eps}; modulus is wrong"
        )
    return EpsilonFixedPoint(seg.points[best], seg.points[other], disp, delta, seg.refined.n, w.trace)


@dataclass(frozen=True)
class IntersectAudit:
    """Which alternative holds for a fully-labelled segment ``[y, z]``."""

    meets_image: bool
    image_gap_bound: bool

    @property
    def holds(self) -> bool:
        return self.meets_image or self.image_gap_bound


def segments_meet(t: MetricTree, y: TreePoint, z: TreePoint, p: TreePoint, q: TreePoint) -> bool:
    """Whether geodesics ``[y, z]`` and ``[p, q]`` share a point (four-point test)."""
    d = t.distance
    s1 = d(y, z) + d(p, q)
    s2 = d(y, p) + d(z, q)
    s3 = d(y, q) + d(z, p)
    return s1 >= min(s2, s3)


def lemma_intersect_check(t: MetricTree, m: PLMap, y: TreePoint, z: TreePoint) -> IntersectAudit:
    """Audit a fully-labelled segment: either it meets its image or ``d(y, f z) <= d(f y, f z)``.

    ``y`` and ``z`` must lie on one closed edge of ``t`` so that the image of
    the segment is the geodesic between their images.
    """
    shared = {eid for eid, _ in t.representations(y)} & {eid for eid, _ in t.representations(z)}
    if not shared:
        raise TreeError("segment endpoints are not on a common edge")
    fy, fz = eval_pl(t, m, y), eval_pl(t, m, z)
    lab = Labelling(
        frozenset(range(t.n)),
        {0: move_away_labels(t, y, fy), 1: move_away_labels(t, z, fz)},
    )
    if not is_fully_labelled(lab, (0, 1)):
        raise ValueError("segment is not fully labelled under the move-away labelling")
    return IntersectAudit(
        meets_image=segments_meet(t, y, z, fy, fz),
        image_gap_bound=t.distance(y, fz) <= t.distance(fy, fz),
    )
