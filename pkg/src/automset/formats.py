"""JSON instance and result documents.

Instance document::

    {
      "vertices": 4,                      # or {"count": 4, "labels": ["a", ...]}
      "edges": [[0, 1], ["a", "c"]],      # optional; indices or labels
      "families": [
        {"color": "red", "sets": [[0, 1], [2, 3]], "multiplicities": [2, 1]}
      ]
    }

Colors are numbered by first appearance.  Result documents are rendered with
sorted keys and fixed indentation so equal inputs give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .errors import InvalidFamily, ParseError
from .intervalpq import Graph
from .markedreduction import MarkedInstance
from .permgroup import Permutation, PermGroup
from .setfamily import ColoredSetFamily, TowerTrace


@dataclass
class FamilySpec:
    color: Any
    sets: list[list[int]]
    multiplicities: list[int]


@dataclass
class InstanceDoc:
    n: int
    labels: list[str] | None = None
    edges: list[tuple[int, int]] | None = None
    families: list[FamilySpec] = field(default_factory=list)

    def name(self, v: int) -> str | int:
        return self.labels[v] if self.labels is not None else v

    def color_ids(self) -> dict[Any, int]:
        ids: dict[Any, int] = {}
        for f in self.families:
            key = json.dumps(f.color)
            ids.setdefault(key, len(ids))
        return ids

    def color_names(self) -> list[Any]:
        names: dict[str, Any] = {}
        for f in self.families:
            names.setdefault(json.dumps(f.color), f.color)
        return list(names.values())

    def _raw_entries(self) -> list[tuple[list[int], int, int]]:
        ids = self.color_ids()
        return [
            (s, ids[json.dumps(f.color)], m)
            for f in self.families
            for s, m in zip(f.sets, f.multiplicities)
        ]

    def to_family(self) -> ColoredSetFamily:
        return ColoredSetFamily.build(self.n, self._raw_entries())

    def graph(self) -> Graph:
        labels = tuple(self.labels) if self.labels is not None else None
        return Graph.from_edges(self.n, self.edges or [], labels)

    def to_marked(self) -> MarkedInstance:
        return MarkedInstance.build(self.graph(), self._raw_entries())


def _where(text: str, needle: str) -> str:
    idx = text.find(needle)
    if idx < 0:
        return ""
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return f" (near line {line}, column {col})"


def parse_instance(text: str) -> InstanceDoc:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError("line 1, column 1: instance must be a JSON object")
    if "vertices" not in data:
        raise ParseError("missing 'vertices' section")
    verts = data["vertices"]
    labels = None
    if isinstance(verts, bool):
        raise ParseError("'vertices' must be a count or an object" + _where(text, '"vertices"'))
    if isinstance(verts, int):
        n = verts
    elif isinstance(verts, dict) and isinstance(verts.get("count"), int):
        n = verts["count"]
        if "labels" in verts:
            labels = verts["labels"]
            if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
                raise ParseError("'labels' must be a list of strings" + _where(text, '"labels"'))
            if len(labels) != n or len(set(labels)) != n:
                raise InvalidFamily("labels must be distinct and one per vertex")
    else:
        raise ParseError("'vertices' must be a count or an object with 'count'" + _where(text, '"vertices"'))
    if n < 0:
        raise InvalidFamily("vertex count must be non-negative")
    index = {lab: i for i, lab in enumerate(labels)} if labels else {}

    def vertex(x: Any, ctx: str) -> int:
        if isinstance(x, bool):
            raise ParseError(f"bad vertex {x!r} in {ctx}")
        if isinstance(x, int):
            if not 0 <= x < n:
                raise InvalidFamily(f"vertex {x} out of range in {ctx}")
            return x
        if isinstance(x, str):
            if x not in index:
                raise InvalidFamily(f"unknown vertex label {x!r} in {ctx}")
            return index[x]
        raise ParseError(f"bad vertex {x!r} in {ctx}" + _where(text, json.dumps(x)))

    edges = None
    if "edges" in data:
        if not isinstance(data["edges"], list):
            raise ParseError("'edges' must be a list of pairs" + _where(text, '"edges"'))
        edges = []
        for e in data["edges"]:
            if not isinstance(e, list) or len(e) != 2:
                raise ParseError(f"edge {e!r} is not a pair" + _where(text, '"edges"'))
            u, v = vertex(e[0], "edges"), vertex(e[1], "edges")
            if u == v:
                raise InvalidFamily(f"self-loop at vertex {e[0]!r}")
            edges.append((u, v))
    fams = data.get("families", [])
    if not isinstance(fams, list):
        raise ParseError("'families' must be a list" + _where(text, '"families"'))
    families = []
    for k, f in enumerate(fams):
        ctx = f"families[{k}]"
        if not isinstance(f, dict) or "sets" not in f or not isinstance(f["sets"], list):
            raise ParseError(f"{ctx} must be an object with a 'sets' list" + _where(text, '"families"'))
        color = f.get("color", k)
        if not isinstance(color, (str, int)) or isinstance(color, bool):
            raise ParseError(f"{ctx}: color must be a string or integer")
        sets = []
        for s in f["sets"]:
            if not isinstance(s, list):
                raise ParseError(f"{ctx}: set {s!r} is not a list")
            if not s:
                raise InvalidFamily(f"{ctx}: sets must be nonempty")
            members = [vertex(x, ctx) for x in s]
            if len(set(members)) != len(members):
                raise InvalidFamily(f"{ctx}: set {s!r} repeats an element")
            sets.append(sorted(members))
        mults = f.get("multiplicities", [1] * len(sets))
        if not isinstance(mults, list) or len(mults) != len(sets):
            raise ParseError(f"{ctx}: 'multiplicities' must match 'sets' in length")
        for m in mults:
            if isinstance(m, bool) or not isinstance(m, int):
                raise ParseError(f"{ctx}: multiplicity {m!r} is not an integer")
            if m < 1:
                raise InvalidFamily(f"{ctx}: multiplicities must be positive")
        families.append(FamilySpec(color, sets, list(mults)))
    return InstanceDoc(n, labels, edges, families)


def render_instance(doc: InstanceDoc) -> str:
    data: dict[str, Any] = {}
    data["vertices"] = {"count": doc.n, "labels": doc.labels} if doc.labels is not None else doc.n
    if doc.edges is not None:
        data["edges"] = [[doc.name(u), doc.name(v)] for u, v in doc.edges]
    data["families"] = [
        {"color": f.color, "sets": [[doc.name(v) for v in s] for s in f.sets], "multiplicities": f.multiplicities}
        for f in doc.families
    ]
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def instance_from_family(family: ColoredSetFamily) -> InstanceDoc:
    by_color: dict[int, FamilySpec] = {}
    for e in sorted(family.entries, key=lambda e: (e.color, len(e.members), e.members)):
        spec = by_color.setdefault(e.color, FamilySpec(e.color, [], []))
        spec.sets.append(list(e.members))
        spec.multiplicities.append(e.multiplicity)
    return InstanceDoc(family.ground_size, None, None, [by_color[c] for c in sorted(by_color)])


def instance_from_marked(marked: MarkedInstance) -> InstanceDoc:
    g = marked.graph
    doc = instance_from_family(ColoredSetFamily(g.n, marked.entries))
    doc.labels = list(g.labels) if g.labels is not None else None
    doc.edges = sorted(g.edges)
    return doc


@dataclass
class ResultDoc:
    kind: str
    domain: list[dict]
    generators: list[dict]
    order: str
    trace: dict | None = None
    warnings: list[str] = field(default_factory=list)
    oracle: dict | None = None

    def to_json(self) -> dict:
        data: dict[str, Any] = {
            "kind": self.kind,
            "domain": self.domain,
            "generators": self.generators,
            "order": self.order,
            "warnings": self.warnings,
        }
        if self.trace is not None:
            data["trace"] = self.trace
        if self.oracle is not None:
            data["oracle"] = self.oracle
        return data


def trace_json(trace: TowerTrace) -> dict:
    return {
        "h": trace.h,
        "antichain": trace.antichain,
        "initial_order": str(trace.initial_order),
        "index_bound": str(trace.index_bound()),
        "steps": [{"step": s.index, "parts": list(s.parts), "order": str(s.order)} for s in trace.steps],
    }


def make_result(
    kind: str,
    doc: InstanceDoc,
    domain: list[tuple[int, tuple[int, ...], int]],
    group: PermGroup,
    trace: TowerTrace | None = None,
) -> ResultDoc:
    names = doc.color_names()
    dom = [{"color": names[c], "set": [doc.name(v) for v in s], "copy": k} for c, s, k in domain]
    gens = []
    for g in group.generators:
        gens.append({"images": list(g.images), "cycles": g.cycle_notation()})
    return ResultDoc(kind, dom, gens, str(group.order()), trace_json(trace) if trace is not None else None)


def render_result(res: ResultDoc) -> str:
    return json.dumps(res.to_json(), indent=2, sort_keys=True) + "\n"


def parse_result(text: str) -> ResultDoc:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        res = ResultDoc(
            kind=data["kind"],
            domain=data["domain"],
            generators=data["generators"],
            order=data["order"],
            trace=data.get("trace"),
            warnings=data.get("warnings", []),
            oracle=data.get("oracle"),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed result document: {exc}") from None
    for g in res.generators:
        try:
            p = Permutation(g["images"])
        except (ValueError, TypeError, KeyError) as exc:
            raise ParseError(f"bad generator {g!r}: {exc}") from None
        if p.cycle_notation() != g["cycles"]:
            raise ParseError(f"generator cycles {g['cycles']} disagree with its images")
    return res
