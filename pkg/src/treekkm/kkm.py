"""
KKM covers of metric trees.

A KKM cover relative to anchor points ``a_1..a_k`` is a family of closed sets
``D_i`` with ``a_i`` in ``D_i`` and every anchor-to-anchor path covered by the
two corresponding sets.  Such a family always has a common point; this module
computes the common intersection exactly and also finds a common point the
constructive way, through segmentation and the successor walk.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .closed_set import ClosedSet, union_gap
from .metric_tree import MetricTree, Rational, TreeError, TreePoint, as_fraction
from .sperner import Labelling, find_fully_labelled_edge

MAX_HALVINGS = 64


class InvalidCoverError(ValueError):
    """A family of sets fails one of the KKM conditions."""

    def __init__(self, message: str, check: Optional["CoverCheck"] = None):
        super().__init__(message)
        self.check = check


@dataclass(frozen=True)
class KKMCover:
    anchors: tuple[TreePoint, ...]
    sets: tuple[ClosedSet, ...]

    def __post_init__(self):
        if len(self.anchors) != len(self.sets):
            raise ValueError("one closed set per anchor is required")
        if not self.anchors:
            raise ValueError("a cover needs at least one anchor")

    def __len__(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    condition: str = ""
    pair: tuple[int, ...] = ()
    witness: Optional[TreePoint] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _root_masks(t: MetricTree) -> list[int]:
    masks = [0] * t.n
    for v in t.order[1:]:
        masks[v] = masks[t.parent[v]] | (1 << t.parent_edge[v])
    return masks


def uncovered_on_path(t: MetricTree, sa: ClosedSet, sb: ClosedSet,
                      a: TreePoint, b: TreePoint) -> Optional[TreePoint]:
    """A point of ``path(a, b)`` outside ``sa | sb``, or None if the path is covered."""
    if a == b:
        return None if (a in sa or a in sb) else a
    for edge, lo, hi in t.pieces(a, b):
        gap = union_gap(sa, sb, edge, lo, hi)
        if gap is not None:
            return gap
    return None


def validate_kkm_cover(t: MetricTree, cover: KKMCover) -> CoverCheck:
    """Check closedness, anchor containment and the path-covering property exactly."""
    for i, (a, s) in enumerate(zip(cover.anchors, cover.sets)):
        t.check_point(a)
        if s.graph != t:
            return CoverCheck(False, "closed", (i,), message=f"set {i} lives on another graph")
        if a not in s:
            return CoverCheck(False, "containment", (i,), a, f"anchor {i} is not in its set")
    masks = _root_masks(t)
    full = [s.full_edge_mask() for s in cover.sets]
    k = len(cover)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = cover.anchors[i], cover.anchors[j]
            sa, sb = cover.sets[i], cover.sets[j]
            if a.vertex is not None and b.vertex is not None:
                rest = (masks[a.vertex] ^ masks[b.vertex]) & ~(full[i] | full[j])
                gap = None
                while rest:
                    low = rest & -rest
                    edge = low.bit_length() - 1
                    rest ^= low
                    gap = union_gap(sa, sb, edge, Fraction(0), t.edges[edge].length)
                    if gap is not None:
                        break
            else:
                gap = uncovered_on_path(t, sa, sb, a, b)
            if gap is not None:
                return CoverCheck(
                    False, "path-covering", (i, j), gap,
                    f"path between anchors {i} and {j} leaves both sets at {gap!r}",
                )
    return CoverCheck(True)


def _anchor_groups(cover: KKMCover) -> dict[TreePoint, ClosedSet]:
    """Sets sharing an anchor are merged by intersection (still a KKM cover)."""
    groups: dict[TreePoint, ClosedSet] = {}
    for a, s in zip(cover.anchors, cover.sets):
        groups[a] = groups[a] & s if a in groups else s
    return groups


def membership_labelling(t: MetricTree, cover: KKMCover) -> Labelling:
    """Label each vertex by the anchors whose sets contain it (anchors must be vertices)."""
    for a in cover.anchors:
        if a.vertex is None:
            raise TreeError(f"anchor {a!r} is not a vertex; segment the tree first")
    groups = _anchor_groups(cover)
    labels = {
        v: frozenset(a.vertex for a, s in groups.items() if v in s.vertices)
        for v in range(t.n)
    }
    return Labelling(frozenset(a.vertex for a in groups), labels)


def intersect_all(t: MetricTree, cover: KKMCover, check: bool = True) -> ClosedSet:
    """Exact common intersection of all sets of the cover."""
    if check:
        res = validate_kkm_cover(t, cover)
        if not res:
            raise InvalidCoverError(res.message, res)
    out = cover.sets[0]
    for s in cover.sets[1:]:
        out = out & s
    if out.is_empty() and not check:
        res = validate_kkm_cover(t, cover)
        raise InvalidCoverError(f"empty intersection: {res.message or 'cover invalid'}", res)
    return out


@dataclass(frozen=True)
class RefinementStep:
    delta: Fraction
    vertices: int
    edge: tuple[TreePoint, TreePoint]
    found: Optional[TreePoint]
    via_edge: bool = False


@dataclass(frozen=True)
class KKMPoint:
    point: TreePoint
    trace: tuple[RefinementStep, ...]

    @property
    def halvings(self) -> int:
        return len(self.trace) - 1


def _members_along(ivs: Sequence, offsets: Sequence[Fraction]) -> list[bool]:
    out = []
    i = 0
    for x in offsets:
        while i < len(ivs) and ivs[i][1] < x:
            i += 1
        out.append(i < len(ivs) and ivs[i][0] <= x)
    return out


def _segmented_labelling(seg, groups: dict[TreePoint, ClosedSet]) -> Labelling:
    refined = seg.refined
    anchor_id = {a: seg.vertex_of(a) for a in groups}
    labels: list[set] = [set() for _ in range(refined.n)]
    for a, s in groups.items():
        lab = anchor_id[a]
        for v in s.vertices:
            labels[v].add(lab)
        for edge, ivs in s.intervals.items():
            inner = seg.chain[edge][1:-1]
            for v, hit in zip(inner, _members_along(ivs, seg.cuts[edge][1:-1])):
                if hit:
                    labels[v].add(lab)
    return Labelling(
        frozenset(anchor_id.values()),
        {v: frozenset(ls) for v, ls in enumerate(labels)},
    )


def kkm_point_via_sperner(
    t: MetricTree,
    cover: KKMCover,
    delta0: Optional[Rational] = None,
    max_halvings: int = MAX_HALVINGS,
    check: bool = True,
    exact_edge: bool = True,
) -> KKMPoint:
    """Find a common point by segmentation, membership labelling and the successor walk.

    Each round segments the tree below ``delta`` (anchors forced to be
    vertices), walks to a fully-labelled edge and tests the closed edge
    exactly: an endpoint in every set is returned first, otherwise any point
    of the edge common to all sets.  Failing that, ``delta`` is halved.

    With ``exact_edge=False`` only the endpoints are tested.  That loop need
    not stop when the intersection misses every segmentation vertex.
    """
    if check:
        res = validate_kkm_cover(t, cover)
        if not res:
            raise InvalidCoverError(res.message, res)
    delta = as_fraction(delta0) if delta0 is not None else max(e.length for e in t.edges)
    if delta <= 0:
        raise ValueError("delta0 must be positive")
    groups = _anchor_groups(cover)
    sets = list(groups.values())
    trace = []
    for _ in range(max_halvings + 1):
        seg = t.segment(delta, groups)
        lab = _segmented_labelling(seg, groups)
        x, y = find_fully_labelled_edge(seg.refined, lab, check=False).edge
        px, py = seg.points[x], seg.points[y]
        found, via_edge = None, False
        for p in (px, py):
            if all(p in s for s in sets):
                found = p
                break
        if found is None and exact_edge:
            edge = seg.original_edge(seg.refined.edge_id(x, y))
            lo, hi = sorted((t.representation_on(px, edge), t.representation_on(py, edge)))
            local = ClosedSet(t, [(edge, lo, hi)])
            for s in sets:
                local = local & s
                if local.is_empty():
                    break
            if not local.is_empty():
                found, via_edge = local.smallest_point(), True
        trace.append(RefinementStep(delta, seg.refined.n, (px, py), found, via_edge))
        if found is not None:
            return KKMPoint(found, tuple(trace))
        delta /= 2
    raise InvalidCoverError(f"no common point after {max_halvings} halvings; cover is likely invalid")


def cover_from_connected_sets(t: MetricTree, sets: Sequence[ClosedSet]) -> KKMCover:
    """Anchor pairwise-intersecting closed connected sets that cover the tree."""
    if not sets:
        raise InvalidCoverError("no sets given")
    for i, s in enumerate(sets):
        if s.graph != t:
            raise InvalidCoverError(f"set {i} lives on another graph")
        if s.is_empty():
            raise InvalidCoverError(f"set {i} is empty")
        if not s.is_connected():
            raise InvalidCoverError(f"set {i} is not connected")
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if (sets[i] & sets[j]).is_empty():
                raise InvalidCoverError(f"sets {i} and {j} are disjoint",
                                        CoverCheck(False, "pairwise", (i, j)))
    union = sets[0]
    for s in sets[1:]:
        union = union | s
    if union != ClosedSet.full(t):
        raise InvalidCoverError("sets do not cover the tree")
    anchors = tuple(s.smallest_point() for s in sets)
    return KKMCover(anchors, tuple(sets))

