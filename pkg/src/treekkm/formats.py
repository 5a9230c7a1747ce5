"""
JSON documents for trees, cycles, labellings, maps, covers and societies.

Rationals are written as ``"p/q"`` strings (integers are also accepted on
input, floats are not).  Documents that need an underlying space may embed
it under a ``"tree"`` or ``"cycle"`` key so that a single file is a complete
instance.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .closed_set import ClosedSet
from .cycle import CircularSociety, CycleKKMCover, MetricCycle
from .fixedpoint import PLMap
from .kkm import KKMCover
from .metric_tree import MetricGraph, MetricTree, TreeError, TreePoint, as_fraction
from .sperner import Labelling


class FormatError(ValueError):
    """A document is not shaped like the format it claims to be."""


def rat(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(x: Any) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise FormatError(f"expected a rational as 'p/q' or an integer, got {x!r}")
    try:
        return as_fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {x!r}") from exc


def _need(doc: Any, key: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"missing key {key!r}")
    return doc[key]


# -- spaces ---------------------------------------------------------------------


def tree_to_json(t: MetricTree) -> dict:
    return {"vertices": t.n, "edges": [[e.u, e.v, rat(e.length)] for e in t.edges]}


def tree_from_json(doc: Any) -> MetricTree:
    n = _need(doc, "vertices")
    edges = _need(doc, "edges")
    if not isinstance(n, int) or not isinstance(edges, list):
        raise FormatError("tree needs an integer 'vertices' and a list 'edges'")
    rows = []
    for item in edges:
        if not isinstance(item, list) or len(item) != 3:
            raise FormatError(f"edge entry {item!r} is not [u, v, length]")
        u, v, length = item
        if not isinstance(u, int) or not isinstance(v, int):
            raise FormatError(f"edge entry {item!r} has non-integer endpoints")
        rows.append((u, v, parse_rat(length)))
    return MetricTree(n, rows)


def cycle_to_json(c: MetricCycle) -> dict:
    return {"n": c.n, "edge_lengths": [rat(e.length) for e in c.edges]}


def cycle_from_json(doc: Any) -> MetricCycle:
    n = _need(doc, "n")
    lengths = _need(doc, "edge_lengths")
    if not isinstance(lengths, list) or n != len(lengths):
        raise FormatError("'edge_lengths' must list exactly n lengths")
    return MetricCycle([parse_rat(x) for x in lengths])


def space_of(doc: Any, default: MetricGraph = None) -> MetricGraph:
    if isinstance(doc, dict) and "tree" in doc:
        return tree_from_json(doc["tree"])
    if isinstance(doc, dict) and "cycle" in doc:
        return cycle_from_json(doc["cycle"])
    if default is None:
        raise FormatError("no tree or cycle given (pass it as a file or embed it)")
    return default


# -- points and sets ------------------------------------------------------------


def point_to_json(g: MetricGraph, p: TreePoint) -> dict:
    if p.vertex is not None:
        return {"vertex": p.vertex}
    e = g.edges[p.edge]
    return {"edge": [e.u, e.v], "offset": rat(p.offset)}


def point_from_json(g: MetricGraph, doc: Any) -> TreePoint:
    if isinstance(doc, dict) and "vertex" in doc:
        v = doc["vertex"]
        if not isinstance(v, int):
            raise FormatError(f"vertex id {v!r} is not an integer")
        return g.vertex_point(v)
    pair = _need(doc, "edge")
    if not isinstance(pair, list) or len(pair) != 2:
        raise FormatError(f"point edge {pair!r} is not [u, v]")
    return g.point_between(pair[0], pair[1], parse_rat(_need(doc, "offset")))


def set_from_json(g: MetricGraph, doc: Any) -> ClosedSet:
    ivs = doc.get("intervals", []) if isinstance(doc, dict) else None
    verts = doc.get("vertices", []) if isinstance(doc, dict) else None
    if not isinstance(ivs, list) or not isinstance(verts, list):
        raise FormatError("a set needs list-valued 'intervals' and 'vertices'")
    rows = []
    for item in ivs:
        if not isinstance(item, list) or len(item) != 3 or not isinstance(item[0], int):
            raise FormatError(f"interval {item!r} is not [edge, lo, hi]")
        rows.append((item[0], parse_rat(item[1]), parse_rat(item[2])))
    return ClosedSet(g, rows, verts)


def set_to_json(s: ClosedSet) -> dict:
    return s.to_json()


# -- labellings and maps ----------------------------------------------------------


def labelling_from_json(doc: Any) -> Labelling:
    A = _need(doc, "A")
    labels = _need(doc, "labels")
    if not isinstance(A, list) or not isinstance(labels, dict):
        raise FormatError("labelling needs a list 'A' and an object 'labels'")
    try:
        return Labelling.make(A, {int(v): ls for v, ls in labels.items()})
    except (TypeError, ValueError) as exc:
        if isinstance(exc, TreeError):
            raise
        raise FormatError(f"bad labelling: {exc}") from exc


def labelling_to_json(lab: Labelling) -> dict:
    return {
        "A": sorted(lab.universe),
        "labels": {str(v): sorted(lab.labels[v]) for v in sorted(lab.labels)},
    }


def vertex_map_from_json(doc: Any) -> dict[int, int]:
    f = _need(doc, "map")
    if not isinstance(f, dict):
        raise FormatError("'map' must be an object")
    try:
        return {int(v): int(w) for v, w in f.items()}
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad vertex map: {exc}") from exc


def vertex_map_to_json(f) -> dict:
    return {"map": {str(v): int(f[v]) for v in sorted(f)}}


def plmap_from_json(t: MetricTree, doc: Any) -> PLMap:
    images = _need(doc, "images")
    if not isinstance(images, dict):
        raise FormatError("'images' must be an object")
    try:
        pts = {int(v): point_from_json(t, p) for v, p in images.items()}
    except ValueError as exc:
        if isinstance(exc, (FormatError, TreeError)):
            raise
        raise FormatError(f"bad image table: {exc}") from exc
    return PLMap.from_mapping(t, pts)


def plmap_to_json(t: MetricTree, m: PLMap) -> dict:
    return {"images": {str(v): point_to_json(t, p) for v, p in enumerate(m.images)}}


# -- covers and societies -----------------------------------------------------------


def _sets_in_order(g: MetricGraph, doc: Any, count: int) -> list[ClosedSet]:
    raw = _need(doc, "sets")
    if not isinstance(raw, list) or len(raw) != count:
        raise FormatError(f"expected {count} sets, found {len(raw) if isinstance(raw, list) else raw!r}")
    out: list = [None] * count
    for k, item in enumerate(raw):
        i = item.get("anchor", k) if isinstance(item, dict) else k
        if not isinstance(i, int) or not 0 <= i < count or out[i] is not None:
            raise FormatError(f"set {k} has a bad or repeated anchor index {i!r}")
        out[i] = set_from_json(g, item)
    return out


def cover_from_json(t: MetricTree, doc: Any) -> KKMCover:
    anchors = _need(doc, "anchors")
    if not isinstance(anchors, list):
        raise FormatError("'anchors' must be a list")
    pts = tuple(point_from_json(t, a) for a in anchors)
    return KKMCover(pts, tuple(_sets_in_order(t, doc, len(pts))))


def cover_to_json(t: MetricTree, c: KKMCover) -> dict:
    return {
        "anchors": [point_to_json(t, a) for a in c.anchors],
        "sets": [{"anchor": i, **set_to_json(s)} for i, s in enumerate(c.sets)],
    }


def cycle_cover_from_json(c: MetricCycle, doc: Any) -> CycleKKMCover:
    if isinstance(doc, dict) and "anchors" in doc:
        pts = tuple(point_from_json(c, a) for a in doc["anchors"])
    else:
        pts = tuple(TreePoint(vertex=v) for v in range(c.n))
    return CycleKKMCover(tuple(_sets_in_order(c, doc, len(pts))), pts)


def cycle_cover_to_json(c: MetricCycle, cover: CycleKKMCover) -> dict:
    return {
        "anchors": [point_to_json(c, a) for a in cover.anchors],
        "sets": [{"anchor": i, **set_to_json(s)} for i, s in enumerate(cover.sets)],
    }


def society_from_json(c: MetricCycle, doc: Any) -> CircularSociety:
    voters = _need(doc, "voters")
    if not isinstance(voters, list) or not voters:
        raise FormatError("'voters' must be a nonempty list")
    names, approvals, positions = [], [], []
    for k, v in enumerate(voters):
        if not isinstance(v, dict):
            raise FormatError(f"voter {k} is not an object")
        names.append(str(v.get("name", f"voter {k}")))
        approvals.append(set_from_json(c, v))
        if "position" in v:
            positions.append(point_from_json(c, v["position"]))
    if positions and len(positions) != len(approvals):
        raise FormatError("give a position for every voter or for none")
    return CircularSociety(c, tuple(approvals), tuple(positions), tuple(names))


def society_to_json(s: CircularSociety) -> dict:
    return {
        "cycle": cycle_to_json(s.spectrum),
        "voters": [
            {"name": name, "position": point_to_json(s.spectrum, p), **set_to_json(a)}
            for name, p, a in zip(s.names, s.positions, s.approvals)
        ],
    }


# -- files ----------------------------------------------------------------------------


def load(path: Union[str, Path]) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


def dump(doc: Any, path: Union[str, Path]) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def digest(doc: Any) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
