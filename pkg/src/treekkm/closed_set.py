"""
Closed subsets of metric graphs as finite unions of closed edge intervals.

The canonical form keeps, for every edge, a sorted tuple of pairwise disjoint
and non-touching closed intervals ``(lo, hi)`` with ``0 <= lo <= hi <= L``,
plus the set of member vertices.  Degenerate intervals are kept only at
interior offsets; a lone vertex is carried by the vertex set alone.  Any
interval reaching an edge end forces that end vertex into the vertex set, so
the represented point set is closed by construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .metric_tree import MetricGraph, Rational, TreeError, TreePoint, as_fraction

Interval = tuple[Fraction, Fraction]


def merge_intervals(intervals: Iterable[Sequence]) -> list[Interval]:
    """Sort and merge closed intervals; touching intervals are joined.

    >>> merge_intervals([(Fraction(1, 2), 1), (0, Fraction(1, 2))])
    [(Fraction(0, 1), Fraction(1, 1))]
    """
    out: list[list[Fraction]] = []
    for lo, hi in sorted((Fraction(a), Fraction(b)) for a, b in intervals):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1][1] = hi
        else:
            out.append([lo, hi])
    return [(a, b) for a, b in out]


def intersect_intervals(xs: Sequence[Interval], ys: Sequence[Interval]) -> list[Interval]:
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def covers_interval(intervals: Sequence[Interval], lo: Fraction, hi: Fraction) -> bool:
    """True if merged ``intervals`` contain ``[lo, hi]``."""
    i = _last_starting_at_or_before(intervals, lo)
    return i >= 0 and intervals[i][1] >= hi


def _last_starting_at_or_before(intervals: Sequence[Interval], x: Fraction) -> int:
    lo, hi = 0, len(intervals)
    while lo < hi:
        mid = (lo + hi) // 2
        if intervals[mid][0] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo - 1


def first_gap(intervals: Sequence[Interval], lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    """An offset in ``[lo, hi]`` not covered by merged ``intervals``, or None."""
    x = lo
    i = _last_starting_at_or_before(intervals, x)
    if i < 0 or intervals[i][1] < x:
        return x
    while True:
        end = intervals[i][1]
        if end >= hi:
            return None
        nxt = intervals[i + 1][0] if i + 1 < len(intervals) else None
        if nxt is None or nxt > end:
            upper = hi if nxt is None else min(nxt, hi)
            return (end + upper) / 2
        i += 1


def union_gap(sa: "ClosedSet", sb: "ClosedSet", edge: int,
              lo: Fraction, hi: Fraction) -> Optional[TreePoint]:
    """A point of the piece ``[lo, hi]`` of ``edge`` outside ``sa | sb``, or None."""
    e = sa.graph.edges[edge]
    ivs = list(sa.edge_intervals(edge)) + list(sb.edge_intervals(edge))
    for v, end in ((e.u, Fraction(0)), (e.v, e.length)):
        if v in sa.vertices or v in sb.vertices:
            ivs.append((end, end))
    off = first_gap(merge_intervals(ivs), lo, hi)
    return None if off is None else sa.graph.edge_point(edge, off)


class ClosedSet:
    """Closed point set of a :class:`MetricGraph` (tree or cycle)."""

    __slots__ = ("graph", "intervals", "vertices")

    def __init__(
        self,
        graph: MetricGraph,
        intervals: Iterable[Sequence] = (),
        vertices: Iterable[int] = (),
    ):
        self.graph = graph
        raw: dict[int, list] = {}
        verts = set()
        for v in vertices:
            v = int(v)
            if not 0 <= v < graph.n:
                raise TreeError(f"vertex {v} not in graph")
            verts.add(v)
        for item in intervals:
            edge, lo, hi = item
            edge = int(edge)
            lo, hi = as_fraction(lo), as_fraction(hi)
            if not 0 <= edge < len(graph.edges):
                raise TreeError(f"edge {edge} not in graph")
            length = graph.edges[edge].length
            if not 0 <= lo <= hi <= length:
                raise TreeError(f"interval [{lo}, {hi}] not inside edge {edge} of length {length}")
            raw.setdefault(edge, []).append((lo, hi))
        self.intervals: dict[int, tuple[Interval, ...]] = {}
        self._absorb(raw, verts)
        self.vertices = frozenset(verts)

    def _absorb(self, raw: dict[int, list], verts: set) -> None:
        for edge, ivs in raw.items():
            e = self.graph.edges[edge]
            kept = []
            for lo, hi in merge_intervals(ivs):
                if lo == 0:
                    verts.add(e.u)
                if hi == e.length:
                    verts.add(e.v)
                if lo == hi and (lo == 0 or lo == e.length):
                    continue
                kept.append((lo, hi))
            if kept:
                self.intervals[edge] = tuple(kept)

    @classmethod
    def _raw(cls, graph, intervals: dict, vertices: frozenset) -> "ClosedSet":
        obj = cls.__new__(cls)
        obj.graph = graph
        obj.intervals = intervals
        obj.vertices = vertices
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def empty(cls, graph: MetricGraph) -> "ClosedSet":
        return cls(graph)

    @classmethod
    def full(cls, graph: MetricGraph) -> "ClosedSet":
        return cls(graph, [(i, 0, e.length) for i, e in enumerate(graph.edges)], range(graph.n))

    @classmethod
    def from_points(cls, graph: MetricGraph, points: Iterable[TreePoint]) -> "ClosedSet":
        ivs, verts = [], []
        for p in points:
            graph.check_point(p)
            if p.vertex is not None:
                verts.append(p.vertex)
            else:
                ivs.append((p.edge, p.offset, p.offset))
        return cls(graph, ivs, verts)

    @classmethod
    def from_pieces(cls, graph: MetricGraph, pieces: Iterable[Sequence]) -> "ClosedSet":
        return cls(graph, pieces)

    # -- queries ------------------------------------------------------------

    def __repr__(self) -> str:
        ivs = {k: [(str(a), str(b)) for a, b in v] for k, v in sorted(self.intervals.items())}
        return f"ClosedSet(intervals={ivs}, vertices={sorted(self.vertices)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClosedSet):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.intervals == other.intervals
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((frozenset(self.intervals.items()), self.vertices))

    def is_empty(self) -> bool:
        return not self.intervals and not self.vertices

    def __bool__(self) -> bool:
        return not self.is_empty()

    def contains(self, p: TreePoint) -> bool:
        if p.vertex is not None:
            return p.vertex in self.vertices
        ivs = self.intervals.get(p.edge)
        if not ivs:
            return False
        i = _last_starting_at_or_before(ivs, p.offset)
        return i >= 0 and ivs[i][1] >= p.offset

    __contains__ = contains

    def edge_intervals(self, edge: int) -> tuple[Interval, ...]:
        return self.intervals.get(edge, ())

    def covers_edge(self, edge: int) -> bool:
        ivs = self.intervals.get(edge)
        return bool(ivs) and ivs[0] == (0, self.graph.edges[edge].length)

    def covers_piece(self, edge: int, lo: Fraction, hi: Fraction) -> bool:
        """True if the closed piece ``[lo, hi]`` of ``edge`` lies in the set."""
        if lo == hi:
            return self.contains(self.graph.edge_point(edge, lo))
        return covers_interval(self.intervals.get(edge, ()), lo, hi)

    def full_edge_mask(self) -> int:
        mask = 0
        for edge in self.intervals:
            if self.covers_edge(edge):
                mask |= 1 << edge
        return mask

    def _check_same(self, other: "ClosedSet") -> None:
        if self.graph is not other.graph and self.graph != other.graph:
            raise TreeError("closed sets live on different graphs")

    def union(self, other: "ClosedSet") -> "ClosedSet":
        self._check_same(other)
        raw: dict[int, list] = {}
        for src in (self.intervals, other.intervals):
            for edge, ivs in src.items():
                raw.setdefault(edge, []).extend(ivs)
        out = ClosedSet._raw(self.graph, {}, frozenset())
        verts = set(self.vertices | other.vertices)
        out._absorb(raw, verts)
        out.vertices = frozenset(verts)
        return out

    def intersection(self, other: "ClosedSet") -> "ClosedSet":
        self._check_same(other)
        a, b = self.intervals, other.intervals
        if len(b) < len(a):
            a, b = b, a
        ivs = {}
        for edge, xs in a.items():
            ys = b.get(edge)
            if not ys:
                continue
            length = self.graph.edges[edge].length
            kept = [
                (lo, hi)
                for lo, hi in intersect_intervals(xs, ys)
                if not (lo == hi and (lo == 0 or lo == length))
            ]
            if kept:
                ivs[edge] = tuple(kept)
        return ClosedSet._raw(self.graph, ivs, self.vertices & other.vertices)

    __or__ = union
    __and__ = intersection

    def minus_open(self, edge: int, lo: Rational, hi: Rational) -> "ClosedSet":
        """Remove the open piece ``(lo, hi)`` of ``edge``; the result stays closed."""
        lo, hi = as_fraction(lo), as_fraction(hi)
        e = self.graph.edges[edge]
        if lo < 0 or hi > e.length or lo >= hi:
            raise TreeError(f"open piece ({lo}, {hi}) not inside edge {edge}")
        pieces = []
        for a, b in self.intervals.get(edge, ()):
            if b <= lo or a >= hi:
                pieces.append((a, b))
                continue
            if a <= lo:
                pieces.append((a, lo))
            if b >= hi:
                pieces.append((hi, b))
        ivs = dict(self.intervals)
        ivs.pop(edge, None)
        verts = set(self.vertices)
        out = ClosedSet._raw(self.graph, ivs, frozenset())
        out._absorb({edge: pieces} if pieces else {}, verts)
        out.vertices = frozenset(verts)
        return out

    def clip(self, edge: int, lo: Fraction, hi: Fraction) -> "ClosedSet":
        """Intersection with the closed piece ``[lo, hi]`` of ``edge``."""
        return self & ClosedSet(self.graph, [(edge, lo, hi)])

    def boundary_candidates(self) -> list[TreePoint]:
        """Interval endpoints and member vertices, in lexicographic order."""
        pts = {TreePoint(vertex=v) for v in self.vertices}
        for edge, ivs in self.intervals.items():
            for lo, hi in ivs:
                pts.add(self.graph.edge_point(edge, lo))
                pts.add(self.graph.edge_point(edge, hi))
        return sorted(pts, key=self.graph.point_key)

    def smallest_point(self) -> TreePoint:
        """Lexicographically smallest point (smallest edge id, then offset)."""
        best = None
        for v in self.vertices:
            k = self.graph.point_key(TreePoint(vertex=v))
            if best is None or k < best:
                best = k
        for edge, ivs in self.intervals.items():
            k = (edge, ivs[0][0])
            if best is None or k < best:
                best = k
        if best is None:
            raise ValueError("empty set has no smallest point")
        return self.graph.edge_point(*best)

    def components(self) -> int:
        """Number of connected components."""
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def join(x, y):
            parent[find(x)] = find(y)

        for v in self.vertices:
            parent[("v", v)] = ("v", v)
        for edge, ivs in self.intervals.items():
            e = self.graph.edges[edge]
            for k, (lo, hi) in enumerate(ivs):
                node = ("i", edge, k)
                parent[node] = node
                if lo == 0:
                    join(node, ("v", e.u))
                if hi == e.length:
                    join(node, ("v", e.v))
        return len({find(x) for x in parent})

    def is_connected(self) -> bool:
        return not self.is_empty() and self.components() == 1

    def measure(self) -> Fraction:
        return sum((hi - lo for ivs in self.intervals.values() for lo, hi in ivs), Fraction(0))

    def to_json(self) -> dict:
        return {
            "intervals": [
                [edge, str(lo), str(hi)]
                for edge in sorted(self.intervals)
                for lo, hi in self.intervals[edge]
            ],
            "vertices": sorted(self.vertices),
        }
