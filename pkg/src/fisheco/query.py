"""Injective subgraph pattern matching and the named ecosystem analyses."""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass, field

from .errors import FishecoError, PatternError
from .graph import ScenarioGraph, Tense
from .schema import FACT_CHECK_VERB, REGULATE_VERB

Binding = dict[str, str]

BACKER_CODES = ("O", "RCL")
INSTRUMENT_CODES = ("L", "RL")
DEFAULT_DEPTH = 4


@dataclass(frozen=True)
class NodeVar:
    name: str
    type_code: str | None = None
    attrs: tuple[tuple[str, bool | str], ...] = ()


@dataclass(frozen=True)
class EdgeConstraint:
    src: str
    verb: str | None  # None matches any verb
    dst: str
    tense: Tense | None = None


@dataclass(frozen=True)
class Pattern:
    nodes: tuple[NodeVar, ...]
    edges: tuple[EdgeConstraint, ...] = ()

    @property
    def var_names(self) -> list[str]:
        return [n.name for n in self.nodes]


def check_pattern(g: ScenarioGraph, p: Pattern) -> None:
    names = p.var_names
    if len(set(names)) != len(names):
        raise PatternError(f"duplicate variable names in {names}")
    for node in p.nodes:
        if node.type_code is not None:
            et = g.schema.entity_type(node.type_code)
            if et is None:
                raise PatternError(f"unknown type {node.type_code!r} for variable {node.name}")
            for attr, _ in node.attrs:
                if et.attribute(attr) is None:
                    raise PatternError(f"type {node.type_code} has no attribute {attr!r}")
    for edge in p.edges:
        for var in (edge.src, edge.dst):
            if var not in names:
                raise PatternError(f"edge references undeclared variable {var!r}")
        if edge.verb is not None and not g.schema.has_verb(edge.verb):
            raise PatternError(f"unknown verb {edge.verb!r}")
        if edge.tense not in (None, "past", "ongoing"):
            raise PatternError(f"unknown tense {edge.tense!r}")


def _node_ok(g: ScenarioGraph, node: NodeVar, entity_id: str) -> bool:
    ent = g.entities[entity_id]
    if node.type_code is not None and ent.type_code != node.type_code:
        return False
    return all(g.attr(entity_id, k) == v for k, v in node.attrs)


def has_edge(g: ScenarioGraph, src: str, verb: str | None, dst: str, tense: str | None = None) -> bool:
    return any(
        r.target_id == dst and (tense is None or r.tense == tense)
        for r in g.outgoing(src, verb)
    )


def match_pattern(g: ScenarioGraph, p: Pattern) -> list[Binding]:
    """All injective bindings of the pattern's variables, sorted by bound ids."""
    check_pattern(g, p)
    names = p.var_names
    candidates = [
        [eid for eid in sorted(g.entities) if _node_ok(g, node, eid)] for node in p.nodes
    ]
    # edges become checkable once both endpoints are bound
    pos = {n: i for i, n in enumerate(names)}
    ready: list[list[EdgeConstraint]] = [[] for _ in names]
    for edge in p.edges:
        ready[max(pos[edge.src], pos[edge.dst])].append(edge)

    results: list[Binding] = []
    assigned: list[str] = []
    used: set[str] = set()

    def extend(i: int) -> None:
        if i == len(names):
            results.append(dict(zip(names, assigned)))
            return
        for eid in candidates[i]:
            if eid in used:
                continue
            assigned.append(eid)
            bound = dict(zip(names, assigned))
            if all(has_edge(g, bound[e.src], e.verb, bound[e.dst], e.tense) for e in ready[i]):
                used.add(eid)
                extend(i + 1)
                used.discard(eid)
            assigned.pop()

    extend(0)
    results.sort(key=lambda b: [b[n] for n in names])
    return results


_NODE_RE = re.compile(r"\s*([a-z][a-z0-9_]*)\s*(?::\s*([A-Z][A-Z_]*))?\s*(?:\{(.*)\})?\s*$")
_EDGE_RE = re.compile(
    r"\s*([a-z][a-z0-9_]*)\s*-\s*(\*|[a-z][a-z_]*)\s*(?:/\s*(past|ongoing)\s*)?->\s*([a-z][a-z0-9_]*)\s*$"
)


def parse_pattern(text: str) -> Pattern:
    """Parse the inline pattern syntax used by the CLI.

    ``x:FO, y:N; x -fact_checked-> y`` binds an outlet and a news item joined
    by a fact-check edge. Node constraints take ``{attr=true, ...}``; edges
    accept ``*`` as verb and an optional tense as ``-regulates/past->``.
    """
    node_part, _, edge_part = text.partition(";")
    nodes = []
    for chunk in _split_top(node_part):
        m = _NODE_RE.match(chunk)
        if not m:
            raise PatternError(f"bad node declaration {chunk.strip()!r}")
        attrs = []
        if m.group(3) is not None and m.group(3).strip():
            for item in m.group(3).split(","):
                key, eq, raw = item.partition("=")
                raw = raw.strip()
                if not eq or not key.strip():
                    raise PatternError(f"bad attribute constraint {item.strip()!r}")
                if raw in ("true", "false"):
                    value: bool | str = raw == "true"
                elif len(raw) >= 2 and raw[0] == raw[-1] == '"':
                    value = raw[1:-1]
                else:
                    raise PatternError(f"attribute value must be true, false or a quoted string: {raw!r}")
                attrs.append((key.strip(), value))
        nodes.append(NodeVar(m.group(1), m.group(2), tuple(attrs)))
    edges = []
    for chunk in edge_part.split(","):
        if not chunk.strip():
            continue
        m = _EDGE_RE.match(chunk)
        if not m:
            raise PatternError(f"bad edge constraint {chunk.strip()!r}")
        verb = None if m.group(2) == "*" else m.group(2)
        edges.append(EdgeConstraint(m.group(1), verb, m.group(4), m.group(3)))
    if not nodes:
        raise PatternError("pattern declares no variables")
    return Pattern(tuple(nodes), tuple(edges))


def _split_top(text: str) -> list[str]:
    """Split on commas outside braces."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p.strip()]


# -- named analyses ----------------------------------------------------------


@dataclass(frozen=True)
class FactCheckEvent:
    checker_id: str
    checker_type: str
    tense: Tense
    date: dt.date | None = None
    report_id: str | None = None


@dataclass(frozen=True)
class SharedBacker:
    backer: str
    path_a: tuple[str, ...]
    path_b: tuple[str, ...]


@dataclass(frozen=True)
class RegulationLink:
    regulator: str
    tense: Tense
    instruments: tuple[str, ...] = field(default=())
    date: dt.date | None = None


def _require(g: ScenarioGraph, entity_id: str) -> None:
    g.entity(entity_id)


def _pair_pattern(verb: str, src_type: str | None = None, dst_type: str | None = None) -> Pattern:
    return Pattern((NodeVar("src", src_type), NodeVar("dst", dst_type)), (EdgeConstraint("src", verb, "dst"),))


def _matching_report(g: ScenarioGraph, checker_id: str, target_id: str) -> str | None:
    affiliations = {checker_id} | {r.target_id for r in g.outgoing(checker_id, "belongs_to")}
    own, affiliated = [], []
    for rel in g.incoming(target_id, "reports_on"):
        report = rel.source_id
        publishers = {r.source_id for r in g.incoming(report, "published")}
        if checker_id in publishers:
            own.append(report)
        elif publishers & affiliations:
            affiliated.append(report)
    found = sorted(own) or sorted(affiliated)
    return found[0] if found else None


def fact_check_events(g: ScenarioGraph, target_id: str) -> list[FactCheckEvent]:
    """One row per incoming fact-check edge, dated rows first."""
    _require(g, target_id)
    target_type = g.entities[target_id].type_code
    checkers = {
        b["src"] for b in match_pattern(g, _pair_pattern(FACT_CHECK_VERB, dst_type=target_type))
        if b["dst"] == target_id
    }
    rows = []
    for checker in sorted(checkers):
        report = _matching_report(g, checker, target_id)
        for rel in g.outgoing(checker, FACT_CHECK_VERB):
            if rel.target_id == target_id:
                rows.append(
                    FactCheckEvent(checker, g.entities[checker].type_code, rel.tense, rel.date, report)
                )
    rows.sort(key=lambda e: (e.date is None, e.date or dt.date.min, e.checker_id))
    return rows


def co_fact_checkers(g: ScenarioGraph, target_id: str) -> set[str]:
    return {e.checker_id for e in fact_check_events(g, target_id)}


def uncovered_items(g: ScenarioGraph) -> list[str]:
    """News and user content nobody has fact-checked, sorted by id."""
    out = []
    for code in ("N", "UGC"):
        if g.schema.entity_type(code) is None:
            continue
        items = {b["x"] for b in match_pattern(g, Pattern((NodeVar("x", code),)))}
        covered = {b["dst"] for b in match_pattern(g, _pair_pattern(FACT_CHECK_VERB, dst_type=code))}
        out.extend(items - covered)
    return sorted(out)


def backer_paths(g: ScenarioGraph, start: str, max_depth: int) -> list[tuple[str, ...]]:
    """Simple ``belongs_to`` paths of 1..max_depth hops ending at an O or RCL."""
    edges = match_pattern(g, _pair_pattern("belongs_to"))
    succ: dict[str, list[str]] = {}
    for b in edges:
        succ.setdefault(b["src"], []).append(b["dst"])
    found: list[tuple[str, ...]] = []

    def walk(path: list[str]) -> None:
        if len(path) > 1 and g.entities[path[-1]].type_code in BACKER_CODES:
            found.append(tuple(path))
        if len(path) - 1 == max_depth:
            return
        for nxt in succ.get(path[-1], ()):
            if nxt not in path:
                path.append(nxt)
                walk(path)
                path.pop()

    walk([start])
    return sorted(found)


def shared_backer(g: ScenarioGraph, a_id: str, b_id: str, max_depth: int = DEFAULT_DEPTH) -> list[SharedBacker]:
    """Common O/RCL backers of two entities with the funding paths reaching them."""
    _require(g, a_id)
    _require(g, b_id)
    if max_depth < 1:
        raise FishecoError(f"max_depth must be >= 1, got {max_depth}", "usage")
    from_a = backer_paths(g, a_id, max_depth)
    from_b = backer_paths(g, b_id, max_depth)
    out = [
        SharedBacker(pa[-1], pa, pb)
        for pa in from_a
        for pb in from_b
        if pa[-1] == pb[-1]
    ]
    out.sort(key=lambda s: (s.backer, s.path_a, s.path_b))
    return out


def regulation_chain(g: ScenarioGraph, entity_id: str) -> list[RegulationLink]:
    _require(g, entity_id)
    regulators = {
        b["src"] for b in match_pattern(g, _pair_pattern(REGULATE_VERB, "R", g.entities[entity_id].type_code))
        if b["dst"] == entity_id
    }
    out = []
    for reg in sorted(regulators):
        instruments = tuple(
            sorted(
                {
                    r.target_id
                    for r in g.outgoing(reg, "implements")
                    if g.entities[r.target_id].type_code in INSTRUMENT_CODES
                }
            )
        )
        for rel in g.outgoing(reg, REGULATE_VERB):
            if rel.target_id == entity_id:
                out.append(RegulationLink(reg, rel.tense, instruments, rel.date))
    out.sort(key=lambda x: (x.regulator, x.tense, x.date or dt.date.min))
    return out
