"""
KKM covers of metric cycles and circular approval voting.

On a cycle the path-covering rule weakens to "at least one of the two arcs
between two anchors lies in the union of their sets".  Such covers always
have a point lying in a strict majority of the sets; :func:`majority_point`
finds the deepest point by sweeping arc endpoints.
"""

from __future__ import annotations

import heapq
import warnings
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from .closed_set import ClosedSet, merge_intervals
from .kkm import CoverCheck, KKMCover, intersect_all, validate_kkm_cover
from .metric_tree import MetricGraph, MetricTree, Rational, TreeError, TreePoint, as_fraction

CycleClosedSet = ClosedSet


class NotSuperAgreeableError(ValueError):
    def __init__(self, message: str, pair: tuple[int, int]):
        super().__init__(message)
        self.pair = pair


class ReductionNotApplicable(ValueError):
    """No point lies in at most ``floor(k/2) - 1`` sets, so the tree reduction has nothing to do."""


class MetricCycle(MetricGraph):
    """Vertices ``0..n-1`` in cyclic order; edge ``i`` joins ``i`` to ``i+1 mod n``."""

    def __init__(self, lengths: Iterable[Rational]):
        ls = [as_fraction(x) for x in lengths]
        if len(ls) < 3:
            raise TreeError("a metric cycle needs at least three vertices")
        n = len(ls)
        super().__init__(n, [(i, (i + 1) % n, ls[i]) for i in range(n)])
        self.starts: list[Fraction] = []
        acc = Fraction(0)
        for x in ls:
            self.starts.append(acc)
            acc += x
        self._ends = self.starts[1:] + [acc]
        self.circumference = acc
        self._arc_cache: dict[int, tuple[ClosedSet, list]] = {}

    def position(self, p: TreePoint) -> Fraction:
        """Arc length from vertex 0 going forward, in ``[0, circumference)``."""
        self.check_point(p)
        if p.vertex is not None:
            return self.starts[p.vertex]
        return self.starts[p.edge] + p.offset

    def point_at(self, x: Rational) -> TreePoint:
        x = as_fraction(x) % self.circumference
        i = bisect_right(self.starts, x) - 1
        return self.edge_point(i, x - self.starts[i])

    def distance(self, p: TreePoint, q: TreePoint) -> Fraction:
        d = abs(self.position(p) - self.position(q))
        return min(d, self.circumference - d)

    def arc_pieces(self, p: TreePoint, q: TreePoint) -> list[tuple[int, Fraction, Fraction]]:
        """Cells ``(edge, lo, hi)`` of the forward arc from ``p`` to ``q``."""
        x, y = self.position(p), self.position(q)
        if x == y:
            return []
        if y < x:
            y += self.circumference
        out = []
        C = self.circumference
        for lap in (0, 1):
            for i, s in enumerate(self.starts):
                a, b = s + lap * C, s + lap * C + self.edges[i].length
                lo, hi = max(a, x), min(b, y)
                if lo < hi:
                    out.append((i, lo - a, hi - a))
        return out

    def arcs(self, s: ClosedSet) -> list[tuple[Fraction, Fraction]]:
        """The set as merged closed position intervals inside ``[0, circumference]``."""
        hit = self._arc_cache.get(id(s))
        if hit is not None and hit[0] is s:
            return hit[1]
        out: list[list[Fraction]] = []

        def push(a: Fraction, b: Fraction) -> None:
            if out and a <= out[-1][1]:
                if b > out[-1][1]:
                    out[-1][1] = b
            else:
                out.append([a, b])

        full = s.full_edge_mask()
        reach = -1  # the last arc is known to end exactly at vertex ``reach``
        for i, base in enumerate(self.starts):
            if full >> i & 1:
                if reach == i:
                    out[-1][1] = self._ends[i]
                else:
                    push(base, self._ends[i])
                reach = i + 1
                continue
            if i in s.vertices and reach != i:
                push(base, base)
            for lo, hi in s.intervals.get(i, ()):
                push(base + lo, base + hi)
            reach = -1
        arcs = [(a, b) for a, b in out]
        self._arc_cache[id(s)] = (s, arcs)
        return arcs

    def set_from_arcs(self, arcs: Iterable[tuple[Rational, Rational]]) -> ClosedSet:
        """Closed set from forward position arcs ``(start, end)`` in ``[0, C]``; ``end < start`` wraps."""
        C = self.circumference
        spans = []
        for s, e in arcs:
            s, e = as_fraction(s), as_fraction(e)
            if not (0 <= s <= C and 0 <= e <= C):
                raise TreeError(f"arc ({s}, {e}) leaves [0, {C}]")
            spans += [(s, e)] if s <= e else [(s, C), (Fraction(0), e)]
        merged = merge_intervals(spans)
        zero = Fraction(0)
        intervals: dict[int, list] = {}
        verts = set()
        for a, b in merged:
            # edges strictly between the end cells are covered whole
            first = min(bisect_right(self.starts, a) - 1, self.n - 1)
            last = min(bisect_right(self.starts, b) - 1, self.n - 1)
            for i in range(first, last + 1):
                L = self.edges[i].length
                lo = a - self.starts[i] if i == first else zero
                hi = b - self.starts[i] if i == last else L
                if lo == 0:
                    verts.add(i)
                if hi == L:
                    verts.add((i + 1) % self.n)
                if lo < hi or 0 < lo < L:
                    intervals.setdefault(i, []).append((lo, hi))
        return ClosedSet._raw(self, {e: tuple(v) for e, v in intervals.items()}, frozenset(verts))


@dataclass(frozen=True)
class CycleKKMCover:
    sets: tuple[ClosedSet, ...]
    anchors: tuple[TreePoint, ...] = ()

    def __post_init__(self):
        if not self.anchors:
            graph = self.sets[0].graph
            object.__setattr__(self, "anchors", tuple(TreePoint(vertex=v) for v in range(graph.n)))
        if len(self.anchors) != len(self.sets):
            raise ValueError("one closed set per anchor is required")

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def bound(self) -> int:
        return len(self.sets) // 2 + 1


def _scaled_arcs(c: MetricCycle, cover: CycleKKMCover) -> tuple[int, list[list[tuple[int, int]]], list[int]]:
    """Arcs of every set and anchor positions, all multiplied by one common denominator."""
    arcs = [c.arcs(s) for s in cover.sets]
    anchors = [c.position(a) for a in cover.anchors]
    dens = [c.circumference.denominator] + [x.denominator for x in anchors]
    dens += [x.denominator for al in arcs for ab in al for x in ab]
    scale = lcm(*dens)
    scaled = [[(int(a * scale), int(b * scale)) for a, b in al] for al in arcs]
    return scale, scaled, [int(x * scale) for x in anchors]


def _two_laps(arcs: list[tuple[int, int]], Q: int) -> list[tuple[int, int]]:
    return arcs + [(a + Q, b + Q) for a, b in arcs]


def _union_spans(xs: list[tuple[int, int]], ys: list[tuple[int, int]]) -> list[list[int]]:
    out: list[list[int]] = []
    for a, b in heapq.merge(xs, ys):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return out


def _first_gap(spans: list[list[int]], x: int, y: int) -> Optional[Fraction]:
    """A position of ``[x, y]`` outside the merged spans, or None when covered."""
    k = bisect_right(spans, [x, float("inf")]) - 1
    if k < 0 or spans[k][1] < x:
        return Fraction(x)
    end = spans[k][1]
    if end >= y:
        return None
    nxt = spans[k + 1][0] if k + 1 < len(spans) else y
    return Fraction(end + min(nxt, y), 2)


def validate_cycle_cover(c: MetricCycle, cover: CycleKKMCover) -> CoverCheck:
    """Containment plus the two-arc covering rule, checked exactly for every pair."""
    for i, (a, s) in enumerate(zip(cover.anchors, cover.sets)):
        c.check_point(a)
        if s.graph != c:
            return CoverCheck(False, "closed", (i,), message=f"set {i} lives on another graph")
        if a not in s:
            return CoverCheck(False, "containment", (i,), a, f"anchor {i} is not in its set")
    scale, arcs, pos = _scaled_arcs(c, cover)
    Q = int(c.circumference * scale)
    laps = [_two_laps(al, Q) for al in arcs]
    k = len(cover)
    for i in range(k):
        for j in range(i + 1, k):
            x, y = pos[i], pos[j]
            if x == y:
                continue
            if y < x:
                x, y = y, x
            spans = _union_spans(laps[i], laps[j])
            g1 = _first_gap(spans, x, y)
            if g1 is None:
                continue
            g2 = _first_gap(spans, y, x + Q)
            if g2 is None:
                continue
            p1, p2 = c.point_at(g1 / scale), c.point_at(g2 / scale)
            return CoverCheck(
                False, "path-covering", (i, j), p1,
                f"both arcs between anchors {i} and {j} leave the union (at {p1!r} and {p2!r})",
            )
    return CoverCheck(True)


# -- the sweep -----------------------------------------------------------------


@dataclass(frozen=True)
class DepthProfile:
    """Coverage depth at each critical position and on each open gap after it."""

    positions: tuple[Fraction, ...]
    point_depth: tuple[int, ...]
    gap_depth: tuple[int, ...]
    circumference: Fraction

    def candidates(self):
        """``(position, depth)`` in sweep order: point, following gap, next point..."""
        P = self.positions + (self.circumference,)
        for k, x in enumerate(self.positions):
            yield x, self.point_depth[k]
            yield (x + P[k + 1]) / 2, self.gap_depth[k]

    @property
    def resolution(self) -> Fraction:
        P = self.positions + (self.circumference,)
        return min(b - a for a, b in zip(P, P[1:]))


def depth_profile(c: MetricCycle, sets: Sequence[ClosedSet]) -> DepthProfile:
    C = c.circumference
    arcs = [c.arcs(s) for s in sets]
    pos = {Fraction(0)}
    for al in arcs:
        for s, e in al:
            pos.add(s)
            if e < C:
                pos.add(e)
    P = sorted(pos)
    index = {x: k for k, x in enumerate(P)}
    K = len(P)
    dpt = [0] * (K + 1)
    dgap = [0] * (K + 1)
    for al in arcs:
        for s, e in al:
            i = index[s]
            j = K if e == C else index[e]
            dpt[i] += 1
            dpt[min(j, K - 1) + 1] -= 1
            if j > i:
                dgap[i] += 1
                dgap[j] -= 1
    point_depth, gap_depth = [], []
    run_p = run_g = 0
    for k in range(K):
        run_p += dpt[k]
        run_g += dgap[k]
        point_depth.append(run_p)
        gap_depth.append(run_g)
    return DepthProfile(tuple(P), tuple(point_depth), tuple(gap_depth), C)


@dataclass(frozen=True)
class MajorityPoint:
    point: TreePoint
    members: tuple[int, ...]
    bound: int

    @property
    def depth(self) -> int:
        return len(self.members)


def majority_point(c: MetricCycle, cover: CycleKKMCover, check: bool = True) -> MajorityPoint:
    """Deepest point of the cover, earliest in the sweep from vertex 0."""
    if check:
        res = validate_cycle_cover(c, cover)
        if not res:
            warnings.warn(f"cover is not a cycle KKM cover ({res.message}); "
                          "the majority bound is not guaranteed", stacklevel=2)
    prof = depth_profile(c, cover.sets)
    best_x, best_d = None, -1
    for x, d in prof.candidates():
        if d > best_d:
            best_x, best_d = x, d
    p = c.point_at(best_x)
    members = tuple(i for i, s in enumerate(cover.sets) if p in s)
    if len(members) != best_d:
        raise AssertionError("sweep depth disagrees with direct membership")
    return MajorityPoint(p, members, cover.bound)


# -- reduction to a tree ---------------------------------------------------------


def refine_cycle(c: MetricCycle, points: Iterable[TreePoint]) -> MetricCycle:
    """Same circle with extra vertices at ``points``; vertex 0 stays at position 0."""
    marks = sorted(set(c.starts) | {c.position(p) for p in points})
    C = c.circumference
    return MetricCycle([b - a for a, b in zip(marks, marks[1:] + [C])])


def transfer_set(src: MetricCycle, dst: MetricCycle, s: ClosedSet) -> ClosedSet:
    """Re-express a closed set on a cycle with the same circle but other vertices."""
    return dst.set_from_arcs(src.arcs(s))


def cut_open(c: MetricCycle, x: TreePoint) -> tuple[MetricTree, list[int], dict[int, int]]:
    """The tree left after deleting ``x`` with the open edges touching it.

    Returns the tree, the cycle vertex of each tree vertex, and the map from
    retained cycle edges to tree edges.
    """
    n = c.n
    if x.vertex is not None:
        first = (x.vertex + 1) % n
        order = [(first + k) % n for k in range(n - 1)]
    else:
        first = (x.edge + 1) % n
        order = [(first + k) % n for k in range(n)]
    edges, emap = [], {}
    for j in range(len(order) - 1):
        eid = order[j]  # edge i joins i and i+1
        emap[eid] = j
        edges.append((j, j + 1, c.edges[eid].length))
    return MetricTree(len(order), edges), order, emap


@dataclass(frozen=True)
class ReductionResult:
    point: TreePoint
    members: tuple[int, ...]
    removed: TreePoint
    family: tuple[int, ...]
    bound: int

    @property
    def depth(self) -> int:
        return len(self.members)


def tree_reduction_majority(c: MetricCycle, cover: CycleKKMCover) -> ReductionResult:
    """Majority point found by cutting the cycle open at a shallow point and intersecting on the tree."""
    res = validate_cycle_cover(c, cover)
    if not res:
        raise ValueError(f"not a cycle KKM cover: {res.message}")
    work, sets = c, list(cover.sets)
    if any(a.vertex is None for a in cover.anchors):
        work = refine_cycle(c, cover.anchors)
        sets = [transfer_set(c, work, s) for s in sets]
    anchors = [work.point_at(c.position(a)) for a in cover.anchors]
    prof = depth_profile(work, sets)
    limit = cover.bound - 2
    x = next((p for p, d in prof.candidates() if d <= limit), None)
    if x is None:
        raise ReductionNotApplicable(
            f"every point lies in more than {limit} sets; the sweep already certifies the bound"
        )
    xp = work.point_at(x)
    family = [i for i, s in enumerate(sets) if xp not in s]
    tree, order, emap = cut_open(work, xp)
    where = {v: j for j, v in enumerate(order)}
    tree_sets = []
    for i in family:
        s = sets[i]
        ivs = [(emap[e], lo, hi) for e, iv in s.intervals.items() if e in emap for lo, hi in iv]
        tree_sets.append(ClosedSet(tree, ivs, [where[v] for v in s.vertices if v in where]))
    tcover = KKMCover(tuple(TreePoint(vertex=where[anchors[i].vertex]) for i in family), tuple(tree_sets))
    check = validate_kkm_cover(tree, tcover)
    if not check:
        raise AssertionError(f"restricted family is not a tree KKM cover: {check.message}")
    z = intersect_all(tree, tcover, check=False).smallest_point()
    if z.vertex is not None:
        pos = work.starts[order[z.vertex]]
    else:
        e = tree.edges[z.edge]
        pos = work.starts[order[e.u]] + z.offset
    p = c.point_at(pos)
    members = tuple(i for i, s in enumerate(cover.sets) if p in s)
    return ReductionResult(p, members, c.point_at(x), tuple(family), cover.bound)


# -- voting ----------------------------------------------------------------------


@dataclass(frozen=True)
class CircularSociety:
    spectrum: MetricCycle
    approvals: tuple[ClosedSet, ...]
    positions: tuple[TreePoint, ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.positions:
            object.__setattr__(self, "positions", tuple(s.smallest_point() for s in self.approvals))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"voter {i}" for i in range(len(self.approvals))))
        if not len(self.approvals) == len(self.positions) == len(self.names):
            raise ValueError("approval sets, positions and names must align")


@dataclass(frozen=True)
class VoteResult:
    point: TreePoint
    approving: tuple[str, ...]
    voters: int

    @property
    def bound(self) -> int:
        return self.voters // 2 + 1


def super_agreeable_majority(s: CircularSociety) -> VoteResult:
    """An option approved by a strict majority of a super-agreeable society."""
    for i, (p, a) in enumerate(zip(s.positions, s.approvals)):
        if p not in a:
            raise ValueError(f"{s.names[i]} does not approve their own position {p!r}")
    cover = CycleKKMCover(tuple(s.approvals), tuple(s.positions))
    res = validate_cycle_cover(s.spectrum, cover)
    if not res:
        i, j = res.pair
        raise NotSuperAgreeableError(
            f"{s.names[i]} and {s.names[j]} cover neither arc between them", (i, j)
        )
    mp = majority_point(s.spectrum, cover, check=False)
    if mp.depth < mp.bound:
        raise AssertionError("super-agreeable society without a strict majority")
    return VoteResult(mp.point, tuple(s.names[i] for i in mp.members), len(s.approvals))
