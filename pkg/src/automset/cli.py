"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 unparsable document, 4 an
internal bound or invariant was violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from math import log2

from . import oracle as orc
from .errors import (
    AutomsetError,
    BudgetExceeded,
    IndexBoundExceeded,
    InternalInvariantError,
    ParseError,
    ValidationError,
)
from .formats import ResultDoc, instance_from_marked, make_result, parse_instance, render_result
from .intervalpq import build_pq_tree, interval_automorphism_group
from .markedreduction import autom_marked_int_result, reduce
from .setfamily import autom_set

log = logging.getLogger("automset")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _oracle_block(pipeline_group, brute_fn) -> dict:
    try:
        brute = brute_fn()
    except BudgetExceeded as exc:
        return {"skipped": str(exc)}
    return {"order": str(brute.order()), "match": orc.group_equal(pipeline_group, brute)}


def cmd_autoset(args) -> int:
    doc = parse_instance(_read(args.instance))
    if doc.edges is not None:
        raise ValidationError("autoset expects a pure set family; found an 'edges' section")
    family = doc.to_family()
    group, trace = autom_set(family)
    res = make_result("autoset", doc, family.domain(), group, trace if args.trace else None)
    if args.oracle:
        res.oracle = _oracle_block(group, lambda: orc.brute_autom_set(family))
    _emit(render_result(res), args.output)
    return 0


def cmd_automarked(args) -> int:
    doc = parse_instance(_read(args.instance))
    marked = doc.to_marked()
    out = autom_marked_int_result(marked)
    res = make_result("automarked", doc, marked.domain(), out.group, out.trace if args.trace else None)
    res.warnings.extend(out.notes)
    for note in out.notes:
        print(f"warning: {note}", file=sys.stderr)
    if args.oracle:
        res.oracle = _oracle_block(out.group, lambda: orc.brute_autom_marked(marked))
    _emit(render_result(res), args.output)
    return 0


def cmd_pqtree(args) -> int:
    doc = parse_instance(_read(args.instance))
    tree = build_pq_tree(doc.graph())
    if args.dot:
        _emit(tree.to_dot(), args.output)
    else:
        _emit(tree.describe() + "\n", args.output)
    return 0


def cmd_oracle(args) -> int:
    doc = parse_instance(_read(args.instance))
    budget = orc.OracleBudget(max_ground=args.max_ground)
    if args.problem == "autoset":
        family = doc.to_family()
        brute = orc.brute_autom_set(family, budget)
        domain = family.domain()
    elif args.problem == "automarked":
        marked = doc.to_marked()
        marked.check_cliques()
        brute = orc.brute_autom_marked(marked, budget)
        domain = marked.domain()
    else:
        g = doc.graph()
        bg = orc.brute_graph_autom(g, budget)
        _emit(json.dumps({"kind": "oracle-graph", "order": str(bg.order())}, indent=2, sort_keys=True) + "\n", args.output)
        return 0
    names = doc.color_names()
    res = ResultDoc(
        kind=f"oracle-{args.problem}",
        domain=[{"color": names[c], "set": [doc.name(v) for v in s], "copy": k} for c, s, k in domain],
        generators=[{"images": list(p.images), "cycles": p.cycle_notation()} for p in brute.generators()],
        order=str(brute.order()),
    )
    _emit(render_result(res), args.output)
    return 0


@dataclass
class VerifyReport:
    seed: int
    count: int
    checked: int = 0
    skipped: int = 0
    mismatches: list[dict] = field(default_factory=list)
    bound_violations: list[dict] = field(default_factory=list)
    antichain_violations: list[dict] = field(default_factory=list)
    max_h: int = 0
    max_h_ratio: float = 0.0
    max_index_ratio: float = 0.0
    seconds: float = 0.0


def _check_trace(report: VerifyReport, trace, label: dict) -> None:
    report.max_h = max(report.max_h, trace.h)
    if trace.initial_order > 1:
        report.max_h_ratio = max(report.max_h_ratio, trace.h / log2(trace.initial_order))
    for r in trace.index_ratios():
        report.max_index_ratio = max(report.max_index_ratio, r / trace.index_bound())
    if not trace.within_bounds():
        report.bound_violations.append(label)


def run_verify(seed: int, count: int, max_n: int, kind: str = "both") -> VerifyReport:
    report = VerifyReport(seed, count)
    start = time.perf_counter()
    rng = random.Random(seed)
    for i in range(count):
        inst_seed = rng.randrange(2**32)
        do_sets = kind == "sets" or (kind == "both" and i % 2 == 0)
        label = {"index": i, "seed": inst_seed, "kind": "sets" if do_sets else "marked"}
        try:
            if do_sets:
                family = orc.gen_set_family(inst_seed, max_ground=max_n)
                group, trace = autom_set(family)
                brute = orc.brute_autom_set(family)
                _check_trace(report, trace, label)
            else:
                r = random.Random(inst_seed)
                marked = orc.gen_interval_instance(inst_seed, r.randint(1, max_n), r.randint(1, 6), r.randint(1, 3))
                out = autom_marked_int_result(marked)
                group = out.group
                brute = orc.brute_autom_marked(marked)
                if out.trace is not None:
                    _check_trace(report, out.trace, label)
                    red = reduce(marked)
                    a_sets = [e.members for e in marked.entries]
                    if orc.max_antichain(a_sets + [sorted(c) for c in red.c_family()]) != orc.max_antichain(a_sets):
                        report.antichain_violations.append(label)
        except BudgetExceeded as exc:
            report.skipped += 1
            log.info("skipped instance %s: %s", label, exc)
            continue
        report.checked += 1
        if not orc.group_equal(group, brute):
            report.mismatches.append({**label, "pipeline": str(group.order()), "oracle": str(brute.order())})
    report.seconds = round(time.perf_counter() - start, 3)
    return report


def cmd_verify(args) -> int:
    report = run_verify(args.seed, args.count, args.max_n, args.kind)
    data = asdict(report)
    data.pop("seconds")
    if args.timing:
        data["seconds"] = report.seconds
    _emit(json.dumps(data, indent=2, sort_keys=True) + "\n", args.output)
    return 1 if report.mismatches or report.bound_violations or report.antichain_violations else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="automset", description="Automorphism groups of colored set families and marked interval graphs.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("instance", help="instance JSON file, or - for stdin")
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")

    sp = sub.add_parser("autoset", help="automorphism group of a colored set family")
    common(sp)
    sp.add_argument("--trace", action="store_true", help="include the tower trace")
    sp.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    sp.set_defaults(func=cmd_autoset)

    sp = sub.add_parser("automarked", help="marking-preserving automorphisms of an interval graph")
    common(sp)
    sp.add_argument("--trace", action="store_true", help="include the tower trace")
    sp.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    sp.set_defaults(func=cmd_automarked)

    sp = sub.add_parser("pqtree", help="print the PQ-tree of an interval graph")
    common(sp)
    sp.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    sp.set_defaults(func=cmd_pqtree)

    sp = sub.add_parser("verify", help="seeded comparison of the pipeline against brute force")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--max-n", type=int, default=7)
    sp.add_argument("--kind", choices=["sets", "marked", "both"], default="both")
    sp.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("oracle", help="brute-force answers for small instances")
    sp.add_argument("problem", choices=["autoset", "automarked", "graph"])
    common(sp)
    sp.add_argument("--max-ground", type=int, default=8)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except (IndexBoundExceeded, InternalInvariantError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except (ValidationError, BudgetExceeded) as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except AutomsetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
