"""
Command line front end.

Every subcommand reads JSON instances, runs one operation and prints a short
report.  ``--output`` writes a self-contained witness report (the instance is
embedded) which ``verify`` re-checks with the brute-force oracles.

Exit status: 0 verified, 1 validation failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import formats as fmt
from .cycle import (
    MetricCycle,
    NotSuperAgreeableError,
    majority_point,
    super_agreeable_majority,
    validate_cycle_cover,
)
from .fixedpoint import BadModulusError, BlackBoxMap, epsilon_fixed_point, eval_pl, fixed_point_pl
from .kkm import InvalidCoverError, intersect_all, kkm_point_via_sperner, validate_kkm_cover
from .metric_tree import MetricTree, TreeError
from .oracles import PointDistance, exhaustive_discrete_fp, pl_image, scan_fully_labelled
from .sperner import (
    FixedVertex,
    ImproperLabellingError,
    SpanningEdge,
    discrete_fixed_point,
    find_fully_labelled_edge,
    is_proper,
)

OK, FAILED, MALFORMED = 0, 1, 2


class ValidationFailure(Exception):
    """The input parses but the operation's hypothesis does not hold."""


@dataclass
class Report:
    operation: str
    instance: dict
    witness: dict
    params: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    summary: list = field(default_factory=list)
    verified: bool = False

    def to_json(self) -> dict:
        return {
            "operation": self.operation,
            "digest": fmt.digest(self.instance),
            "instance": self.instance,
            "params": self.params,
            "witness": self.witness,
            "verified": self.verified,
            "trace": self.trace,
        }


# -- loading --------------------------------------------------------------------


def _instance(files: list[str], space_key: str) -> dict:
    """Merge ``[space.json] object.json`` into one document with the space embedded."""
    if not 1 <= len(files) <= 2:
        raise fmt.FormatError("expected one or two input files")
    doc = fmt.load(files[-1])
    if not isinstance(doc, dict):
        raise fmt.FormatError(f"{files[-1]}: top level must be an object")
    doc = dict(doc)
    if len(files) == 2:
        doc[space_key] = fmt.load(files[0])
    if space_key not in doc:
        raise fmt.FormatError(f"no {space_key} given (pass it as a file or embed it as {space_key!r})")
    return doc


def _tree(doc: dict) -> MetricTree:
    return fmt.tree_from_json(doc["tree"])


def _cycle(doc: dict) -> MetricCycle:
    return fmt.cycle_from_json(doc["cycle"])


# -- operations ---------------------------------------------------------------------


def op_validate_labelling(args) -> Report:
    doc = _instance(args.files, "tree")
    t, lab = _tree(doc), fmt.labelling_from_json(doc)
    res = is_proper(t, lab)
    w = {"proper": res.ok, "vertex": res.vertex, "reason": res.reason}
    r = Report("validate-labelling", doc, w)
    r.summary.append("labelling is proper" if res else f"labelling is not proper: {res.reason}")
    if not res:
        raise ValidationFailure(r)
    return r


def op_find_edge(args) -> Report:
    doc = _instance(args.files, "tree")
    t, lab = _tree(doc), fmt.labelling_from_json(doc)
    w = find_fully_labelled_edge(t, lab)
    r = Report("find-edge", doc, {"edge": list(w.edge), "via_full_vertex": w.via_full_vertex},
               trace=list(w.trace))
    r.summary.append(f"fully-labelled edge {w.edge}")
    return r


def op_discrete_fp(args) -> Report:
    doc = _instance(args.files, "tree")
    t, f = _tree(doc), fmt.vertex_map_from_json(doc)
    w = discrete_fixed_point(t, f)
    if isinstance(w, FixedVertex):
        r = Report("discrete-fp", doc, {"fixed_vertex": w.vertex})
        r.summary.append(f"vertex {w.vertex} is fixed")
    else:
        r = Report("discrete-fp", doc, {"edge": list(w.edge)})
        r.summary.append(f"edge {w.edge} lies on the path between the images of its ends")
    return r


def op_validate_cover(args) -> Report:
    doc = _instance(args.files, "tree")
    t = _tree(doc)
    cover = fmt.cover_from_json(t, doc)
    res = validate_kkm_cover(t, cover)
    r = Report("validate-cover", doc, _check_json(t, res))
    r.summary.append("valid KKM cover" if res else f"not a KKM cover: {res.message}")
    if not res:
        raise ValidationFailure(r)
    return r


def _check_json(g, res) -> dict:
    return {
        "valid": res.ok,
        "condition": res.condition,
        "pair": list(res.pair),
        "point": None if res.witness is None else fmt.point_to_json(g, res.witness),
    }


def op_kkm_intersect(args) -> Report:
    doc = _instance(args.files, "tree")
    t = _tree(doc)
    cover = fmt.cover_from_json(t, doc)
    if args.method == "exact":
        s = intersect_all(t, cover)
        p = s.smallest_point()
        r = Report("kkm-intersect", doc, {"point": fmt.point_to_json(t, p), "intersection": s.to_json()},
                   params={"method": "exact"})
        r.summary.append(f"common intersection {s!r}")
    else:
        delta0 = fmt.parse_rat(args.delta0) if args.delta0 is not None else None
        k = kkm_point_via_sperner(t, cover, delta0)
        p = k.point
        r = Report("kkm-intersect", doc, {"point": fmt.point_to_json(t, p)},
                   params={"method": "sperner", "delta0": args.delta0})
        r.trace = [
            {"delta": fmt.rat(s.delta), "vertices": s.vertices,
             "edge": [fmt.point_to_json(t, q) for q in s.edge],
             "found": None if s.found is None else fmt.point_to_json(t, s.found)}
            for s in k.trace
        ]
    r.summary.append(f"point {_show(t, p)} lies in every set")
    return r


def op_fixed_point(args) -> Report:
    doc = _instance(args.files, "tree")
    t = _tree(doc)
    m = fmt.plmap_from_json(t, doc)
    z = fixed_point_pl(t, m)
    r = Report("fixed-point", doc, {"point": fmt.point_to_json(t, z)})
    r.summary.append(f"fixed point {_show(t, z)}")
    return r


def op_eps_fixed_point(args) -> Report:
    doc = _instance(args.files, "tree")
    t = _tree(doc)
    m = fmt.plmap_from_json(t, doc)
    eps = fmt.parse_rat(args.epsilon)
    K = fmt.parse_rat(args.lipschitz) if args.lipschitz is not None else m.lipschitz(t)
    box = BlackBoxMap.lipschitz(lambda x: eval_pl(t, m, x), K)
    res = epsilon_fixed_point(t, box, eps)
    r = Report(
        "eps-fixed-point", doc,
        {"point": fmt.point_to_json(t, res.point), "displacement": fmt.rat(res.displacement)},
        params={"epsilon": fmt.rat(eps), "lipschitz": fmt.rat(K)},
        trace=list(res.trace),
    )
    r.summary.append(
        f"{_show(t, res.point)} moves by {res.displacement} < {eps} "
        f"(segmentation of {res.vertices} vertices, delta {res.delta})"
    )
    return r


def op_validate_cycle_cover(args) -> Report:
    doc = _instance(args.files, "cycle")
    c = _cycle(doc)
    cover = fmt.cycle_cover_from_json(c, doc)
    res = validate_cycle_cover(c, cover)
    r = Report("validate-cycle-cover", doc, _check_json(c, res))
    r.summary.append("valid cycle KKM cover" if res else f"not a cycle KKM cover: {res.message}")
    if not res:
        raise ValidationFailure(r)
    return r


def op_cycle_majority(args) -> Report:
    doc = _instance(args.files, "cycle")
    c = _cycle(doc)
    cover = fmt.cycle_cover_from_json(c, doc)
    res = validate_cycle_cover(c, cover)
    if not res:
        r = Report("cycle-majority", doc, _check_json(c, res))
        r.summary.append(f"not a cycle KKM cover: {res.message}")
        raise ValidationFailure(r)
    mp = majority_point(c, cover, check=False)
    r = Report("cycle-majority", doc, {
        "point": fmt.point_to_json(c, mp.point), "members": list(mp.members),
        "depth": mp.depth, "bound": mp.bound,
    })
    r.summary.append(f"point {_show(c, mp.point)} lies in {mp.depth} of {len(cover)} sets "
                     f"(bound {mp.bound}): {list(mp.members)}")
    return r


def op_vote(args) -> Report:
    doc = _instance(args.files, "cycle")
    c = _cycle(doc)
    society = fmt.society_from_json(c, doc)
    try:
        res = super_agreeable_majority(society)
    except NotSuperAgreeableError as exc:
        i, j = exc.pair
        r = Report("vote", doc, {"super_agreeable": False, "pair": [society.names[i], society.names[j]]})
        r.summary.append(str(exc))
        raise ValidationFailure(r) from exc
    r = Report("vote", doc, {
        "point": fmt.point_to_json(c, res.point), "approving": list(res.approving),
        "voters": res.voters,
    })
    r.summary.append(f"option {_show(c, res.point)} approved by {len(res.approving)} of {res.voters}: "
                     + ", ".join(res.approving))
    return r


def _show(g, p) -> str:
    return json.dumps(fmt.point_to_json(g, p))


# -- verification -------------------------------------------------------------------


def _verify_find_edge(doc, w, params) -> bool:
    t, lab = _tree(doc), fmt.labelling_from_json(doc)
    return tuple(w["edge"]) in scan_fully_labelled(t, lab)


def _verify_discrete_fp(doc, w, params) -> bool:
    t, f = _tree(doc), fmt.vertex_map_from_json(doc)
    found = exhaustive_discrete_fp(t, f)
    if "fixed_vertex" in w:
        return FixedVertex(w["fixed_vertex"]) in found
    return SpanningEdge(tuple(w["edge"])) in found


def _verify_validation(kind):
    def check(doc, w, params) -> bool:
        if kind == "labelling":
            return bool(is_proper(_tree(doc), fmt.labelling_from_json(doc))) == w["proper"]
        if kind == "cover":
            t = _tree(doc)
            return bool(validate_kkm_cover(t, fmt.cover_from_json(t, doc))) == w["valid"]
        c = _cycle(doc)
        return bool(validate_cycle_cover(c, fmt.cycle_cover_from_json(c, doc))) == w["valid"]
    return check


def _verify_kkm(doc, w, params) -> bool:
    t = _tree(doc)
    cover = fmt.cover_from_json(t, doc)
    p = fmt.point_from_json(t, w["point"])
    return all(p in s for s in cover.sets)


def _verify_fixed(doc, w, params) -> bool:
    t = _tree(doc)
    m = fmt.plmap_from_json(t, doc)
    p = fmt.point_from_json(t, w["point"])
    return pl_image(t, m.images, p) == p


def _verify_eps(doc, w, params) -> bool:
    t = _tree(doc)
    m = fmt.plmap_from_json(t, doc)
    p = fmt.point_from_json(t, w["point"])
    moved = PointDistance(t)(p, pl_image(t, m.images, p))
    return moved == fmt.parse_rat(w["displacement"]) and moved < fmt.parse_rat(params["epsilon"])


def _verify_majority(doc, w, params) -> bool:
    c = _cycle(doc)
    cover = fmt.cycle_cover_from_json(c, doc)
    if "valid" in w:
        return bool(validate_cycle_cover(c, cover)) == w["valid"]
    p = fmt.point_from_json(c, w["point"])
    members = [i for i, s in enumerate(cover.sets) if p in s]
    return members == w["members"] and len(members) >= len(cover) // 2 + 1


def _verify_vote(doc, w, params) -> bool:
    c = _cycle(doc)
    s = fmt.society_from_json(c, doc)
    if w.get("super_agreeable") is False:
        try:
            super_agreeable_majority(s)
        except NotSuperAgreeableError as exc:
            return [s.names[k] for k in exc.pair] == w["pair"]
        return False
    p = fmt.point_from_json(c, w["point"])
    approving = [name for name, a in zip(s.names, s.approvals) if p in a]
    return approving == w["approving"] and 2 * len(approving) > len(s.approvals)


VERIFIERS: dict[str, Callable[[dict, dict, dict], bool]] = {
    "validate-labelling": _verify_validation("labelling"),
    "find-edge": _verify_find_edge,
    "discrete-fp": _verify_discrete_fp,
    "validate-cover": _verify_validation("cover"),
    "kkm-intersect": _verify_kkm,
    "fixed-point": _verify_fixed,
    "eps-fixed-point": _verify_eps,
    "validate-cycle-cover": _verify_validation("cycle"),
    "cycle-majority": _verify_majority,
    "vote": _verify_vote,
}


def verify_report(report: dict) -> bool:
    """Re-check a witness report against its embedded instance."""
    if not isinstance(report, dict):
        raise fmt.FormatError("a report must be an object")
    op = report.get("operation")
    if op not in VERIFIERS:
        raise fmt.FormatError(f"unknown operation {op!r}")
    doc = report.get("instance")
    if fmt.digest(doc) != report.get("digest"):
        return False
    try:
        return bool(VERIFIERS[op](doc, report["witness"], report.get("params", {})))
    except KeyError as exc:
        raise fmt.FormatError(f"report witness lacks {exc}") from exc


def op_verify(args) -> Report:
    report = fmt.load(args.report)
    ok = verify_report(report)
    r = Report("verify", report.get("instance", {}), {"operation": report["operation"], "ok": ok})
    r.summary.append(f"{report['operation']} witness " + ("re-verified" if ok else "FAILED verification"))
    r.verified = ok
    if not ok:
        raise ValidationFailure(r)
    return r


# -- parser ----------------------------------------------------------------------------

OPERATIONS = {
    "validate-labelling": (op_validate_labelling, "check that a labelling is proper"),
    "find-edge": (op_find_edge, "find a fully-labelled edge by the successor walk"),
    "discrete-fp": (op_discrete_fp, "fixed vertex or spanning edge of a vertex map"),
    "validate-cover": (op_validate_cover, "check the KKM conditions of a tree cover"),
    "kkm-intersect": (op_kkm_intersect, "a point common to every set of a tree KKM cover"),
    "fixed-point": (op_fixed_point, "exact fixed point of a piecewise-linear map"),
    "eps-fixed-point": (op_eps_fixed_point, "epsilon-fixed point of a map treated as a black box"),
    "validate-cycle-cover": (op_validate_cycle_cover, "check the two-arc KKM conditions on a cycle"),
    "cycle-majority": (op_cycle_majority, "point lying in a strict majority of a cycle cover"),
    "vote": (op_vote, "option approved by a strict majority of a circular society"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trace", action="store_true", default=argparse.SUPPRESS,
                        help="print the walk or refinement trace")
    common.add_argument("--output", metavar="FILE", default=argparse.SUPPRESS,
                        help="write the witness report as JSON")
    parser = argparse.ArgumentParser(prog="treekkm", description=__doc__.strip().splitlines()[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in OPERATIONS.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.add_argument("files", nargs="+", metavar="FILE",
                       help="optional space file (tree or cycle) followed by the instance file")
        if name == "kkm-intersect":
            p.add_argument("--method", choices=("exact", "sperner"), default="exact")
            p.add_argument("--delta0", metavar="P/Q")
        if name == "eps-fixed-point":
            p.add_argument("--epsilon", metavar="P/Q", required=True)
            p.add_argument("--lipschitz", metavar="P/Q",
                           help="Lipschitz constant of the map (default: computed exactly)")
    p = sub.add_parser("verify", help="re-check a witness report with the oracles", parents=[common])
    p.add_argument("report", metavar="REPORT")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    trace = getattr(args, "trace", False)
    output = getattr(args, "output", None)
    status = OK
    try:
        if args.command == "verify":
            report = op_verify(args)
        else:
            report = OPERATIONS[args.command][0](args)
            report.verified = verify_report(report.to_json())
            if not report.verified:
                report.summary.append("witness did not re-verify; nothing written")
                _emit(report, trace, None)
                return FAILED
    except ValidationFailure as exc:
        report = exc.args[0]
        status = FAILED
        if report.operation != "verify":
            report.verified = verify_report(report.to_json())
    except (ImproperLabellingError, InvalidCoverError, NotSuperAgreeableError, BadModulusError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return FAILED
    except (fmt.FormatError, TreeError, OSError, KeyError, TypeError) as exc:
        print(f"{args.command}: malformed input: {exc}", file=sys.stderr)
        return MALFORMED
    except ValueError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return FAILED
    _emit(report, trace, output)
    return status


def _emit(report: Report, trace: bool, output: Optional[str]) -> None:
    for line in report.summary:
        print(f"{report.operation}: {line}")
    if report.operation != "verify":
        print(f"{report.operation}: verified: {'yes' if report.verified else 'no'}")
    if trace and report.trace:
        for step in report.trace:
            print(f"  trace: {json.dumps(step) if isinstance(step, dict) else step}")
    if output:
        fmt.dump(report.to_json(), output)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
