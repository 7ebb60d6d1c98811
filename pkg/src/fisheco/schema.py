"""Typed vocabulary for ecosystem graphs: entity types, attributes, relations.

Two canonical schemas are embedded: model ``A`` (traditional media outlets
and news) and model ``B`` (user-generated content). ``merged`` joins them on
the six shared anchor types.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Literal

from .errors import MergeConflictError, NotFoundError, SchemaError

ColourClass = Literal["information", "document_resource", "anchor", "plain"]
AttrKind = Literal["boolean", "string"]
EdgeClass = Literal["fact_check", "regulate", "plain"]

CODE_RE = re.compile(r"[A-Z][A-Z_]*")
IDENT_RE = re.compile(r"[a-z][a-z_]*")

INFORMATION_CODES = frozenset({"N", "ND", "C", "FCR", "UGC"})
DOCUMENT_CODES = frozenset({"L", "RL", "STD", "SR"})
ANCHOR_CODES = frozenset({"RCL", "R", "O", "P", "FO", "FA"})

SCHEMA_IDS = ("A", "B", "merged", "custom")

FACT_CHECK_VERB = "fact_checked"
REGULATE_VERB = "regulates"


@dataclass(frozen=True)
class AttributeDef:
    name: str
    kind: AttrKind = "boolean"
    default: bool | str | None = None

    def default_value(self) -> bool | str | None:
        if self.default is not None:
            return self.default
        return False if self.kind == "boolean" else None


@dataclass(frozen=True)
class EntityTypeDef:
    code: str
    name: str
    colour_class: ColourClass = "plain"
    attributes: tuple[AttributeDef, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "attributes", tuple(sorted(self.attributes, key=lambda a: (a.name, a.kind)))
        )

    def attribute(self, name: str) -> AttributeDef | None:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        return None


@dataclass(frozen=True)
class RelationTypeDef:
    verb: str
    source_type: str
    target_type: str
    guard: str | None = None

    @property
    def edge_class(self) -> EdgeClass:
        if self.verb == FACT_CHECK_VERB:
            return "fact_check"
        if self.verb == REGULATE_VERB:
            return "regulate"
        return "plain"

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.verb, self.source_type, self.target_type)


@dataclass(frozen=True)
class Violation:
    severity: Literal["error", "warning"]
    code: str
    message: str
    location: str | None = None

    def __str__(self) -> str:
        where = f" [{self.location}]" if self.location else ""
        return f"{self.severity}: {self.code}: {self.message}{where}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "error"]

    @property
    def warnings(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "warning"]

    def error(self, code: str, message: str, location: str | None = None) -> None:
        self.violations.append(Violation("error", code, message, location))

    def warn(self, code: str, message: str, location: str | None = None) -> None:
        self.violations.append(Violation("warning", code, message, location))

    def __str__(self) -> str:
        if not self.violations:
            return "valid: 0 violations"
        lines = [str(v) for v in self.violations]
        lines.append(f"{len(self.errors)} error(s), {len(self.warnings)} warning(s)")
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class Schema:
    """Immutable schema value. Equality compares entity and relation sets only."""

    id: str
    entity_types: frozenset[EntityTypeDef]
    relation_types: frozenset[RelationTypeDef]
    _by_code: dict = field(init=False, repr=False, compare=False, hash=False)
    _by_triple: dict = field(init=False, repr=False, compare=False, hash=False)
    _by_verb: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(
        self,
        id: str,
        entity_types: Iterable[EntityTypeDef],
        relation_types: Iterable[RelationTypeDef],
    ) -> None:
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "entity_types", frozenset(entity_types))
        object.__setattr__(self, "relation_types", frozenset(relation_types))
        by_code: dict[str, EntityTypeDef] = {}
        for et in sorted(self.entity_types, key=lambda e: (e.code, e.name)):
            by_code.setdefault(et.code, et)
        by_triple: dict[tuple[str, str, str], RelationTypeDef] = {}
        by_verb: dict[str, list[RelationTypeDef]] = {}
        for rt in sorted(self.relation_types, key=lambda r: (r.triple, r.guard or "")):
            by_triple.setdefault(rt.triple, rt)
            by_verb.setdefault(rt.verb, []).append(rt)
        object.__setattr__(self, "_by_code", by_code)
        object.__setattr__(self, "_by_triple", by_triple)
        object.__setattr__(self, "_by_verb", by_verb)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Schema):
            return NotImplemented
        return self.entity_types == other.entity_types and self.relation_types == other.relation_types

    def __hash__(self) -> int:
        return hash((self.entity_types, self.relation_types))

    @property
    def codes(self) -> list[str]:
        return sorted(self._by_code)

    @property
    def verbs(self) -> list[str]:
        return sorted(self._by_verb)

    def entity_type(self, code: str) -> EntityTypeDef | None:
        return self._by_code.get(code)

    def has_verb(self, verb: str) -> bool:
        return verb in self._by_verb

    def relations_with_verb(self, verb: str) -> list[RelationTypeDef]:
        return list(self._by_verb.get(verb, ()))

    def find_relation(self, verb: str, src: str, dst: str) -> RelationTypeDef | None:
        return self._by_triple.get((verb, src, dst))

    def sorted_entity_types(self) -> list[EntityTypeDef]:
        return sorted(self.entity_types, key=lambda e: (e.code, e.name))

    def sorted_relation_types(self) -> list[RelationTypeDef]:
        return sorted(self.relation_types, key=lambda r: (r.triple, r.guard or ""))


def _et(code: str, name: str, *attrs: str) -> EntityTypeDef:
    if code in INFORMATION_CODES:
        colour: ColourClass = "information"
    elif code in DOCUMENT_CODES:
        colour = "document_resource"
    elif code in ANCHOR_CODES:
        colour = "anchor"
    else:
        colour = "plain"
    return EntityTypeDef(code, name, colour, tuple(AttributeDef(a) for a in attrs))


def _rels(verb: str, pairs: str, guards: dict[str, str] | None = None) -> list[RelationTypeDef]:
    """Expand ``"P>N MO>N"`` into relation defs; ``guards`` maps ``"P>N"`` to an attribute."""
    guards = guards or {}
    out = []
    for pair in pairs.split():
        src, dst = pair.split(">")
        out.append(RelationTypeDef(verb, src, dst, guards.get(pair)))
    return out


_A_ENTITIES = [
    _et("L", "Law"),
    _et("RL", "Regulation"),
    _et("C", "Comments"),
    _et("FCR", "Fact-check report"),
    _et("P", "Person", "is_journalist", "fact_checking"),
    _et("JA", "Journalist association"),
    _et("ND", "News draft"),
    _et("N", "News"),
    _et("MO", "Media outlet"),
    _et("MOA", "Media outlet association"),
    _et("FO", "Fact-checking outlet"),
    _et("FA", "Fact-checking association"),
    _et("O", "Organisation", "news_reporting"),
    _et("RCL", "Region/Country/Local"),
    _et("R", "Regulator", "fact_checking"),
    _et("STD", "Standards/Guidelines"),
    _et("SR", "Services & Resources"),
]

_A_RELATIONS = [
    *_rels(
        "belongs_to",
        "P>JA P>FO P>FA FO>FA MO>MOA JA>O JA>RCL FO>O FO>RCL MO>O MO>RCL"
        # needed by the shipped scenarios: regulator funding, ownership chains,
        # staff reporters, association membership
        " R>O O>O P>MO JA>FA",
    ),
    *_rels("created", "P>ND JA>STD FA>STD MOA>STD O>STD R>STD FA>SR FO>SR R>SR MO>STD JA>SR"),
    *_rels("reviewed", "MO>ND"),
    *_rels("published", "MO>N P>N O>N P>C P>FCR FO>FCR", {"O>N": "news_reporting"}),
    *_rels("revised", "MO>N P>N"),
    *_rels("consumed", "P>N P>C P>SR MO>SR FO>SR FA>SR P>FCR"),
    *_rels("follows", "P>STD JA>STD MO>STD FO>STD FA>STD MOA>STD O>STD"),
    *_rels("fact_checked", "P>N FO>N MO>N R>N", {"P>N": "fact_checking", "R>N": "fact_checking"}),
    *_rels("reports_on", "FCR>N"),
    *_rels("about", "C>N"),
    *_rels("implements", "R>RL R>L RL>L R>STD"),
    *_rels("regulates", "R>MOA R>MO R>O R>FO R>JA"),
]

_B_ENTITIES = [
    _et("RCL", "Region/Country/Local"),
    _et("R", "Regulator"),
    _et("O", "Organisation"),
    _et("P", "Person", "fact_checking"),
    _et("FO", "Fact-checking outlet"),
    _et("FA", "Fact-checking association"),
    _et("UGC", "User generated content"),
    _et("AC", "Account", "fact_checking", "is_false"),
    _et("S", "Service"),
    _et("SP", "Service provider"),
    _et("SOC", "Social group"),
    _et("OG", "Online group"),
]

_B_RELATIONS = [
    *_rels("owns", "P>AC"),
    *_rels("uses", "P>AC"),
    *_rels("created", "AC>UGC AC>OG"),
    *_rels("manages", "AC>OG"),
    *_rels("belongs_to", "AC>S AC>OG P>SOC P>O FO>RCL FO>O"),
    *_rels("consumed", "AC>UGC"),
    *_rels("comments", "AC>UGC"),
    *_rels("provides", "SP>S"),
    *_rels(
        "fact_checked",
        "AC>UGC P>UGC FO>UGC",
        {"AC>UGC": "fact_checking", "P>UGC": "fact_checking"},
    ),
    *_rels("regulates", "R>SP R>O R>FO"),
]

# Edges that need entity types from both models, so they exist only once the
# models are joined: fact-check reports on user content, regulators' legal
# instruments, platform policies and account suspension.
_MERGE_BRIDGES = [
    *_rels("published", "FO>FCR"),
    *_rels("reports_on", "FCR>UGC"),
    *_rels("implements", "R>RL R>L RL>L"),
    *_rels("suspended", "SP>AC"),
    *_rels("created", "SP>STD"),
]


def builtin_schema(model_id: str) -> Schema:
    """Return the canonical schema for ``"A"``, ``"B"`` or ``"merged"``."""
    if model_id == "A":
        return Schema("A", _A_ENTITIES, _A_RELATIONS)
    if model_id == "B":
        return Schema("B", _B_ENTITIES, _B_RELATIONS)
    if model_id == "merged":
        base = merge_schemas(builtin_schema("A"), builtin_schema("B"))
        return Schema("merged", base.entity_types, base.relation_types | frozenset(_MERGE_BRIDGES))
    raise SchemaError(f"unknown model id {model_id!r}; expected A, B or merged", "usage")


def _merge_entity(x: EntityTypeDef, y: EntityTypeDef) -> EntityTypeDef:
    if x.name != y.name or x.colour_class != y.colour_class:
        raise MergeConflictError(
            f"entity type {x.code}: name/colour differ ({x.name!r}/{x.colour_class} vs "
            f"{y.name!r}/{y.colour_class})"
        )
    attrs = {a.name: a for a in x.attributes}
    for a in y.attributes:
        prev = attrs.get(a.name)
        if prev is None:
            attrs[a.name] = a
        elif prev != a:
            raise MergeConflictError(
                f"entity type {x.code}: attribute {a.name!r} declared as {prev.kind} and {a.kind}"
            )
    return EntityTypeDef(x.code, x.name, x.colour_class, tuple(attrs.values()))


def merge_schemas(a: Schema, b: Schema) -> Schema:
    """Union two schemas, identifying entity types that share a code."""
    entities: dict[str, EntityTypeDef] = {}
    for et in [*a.sorted_entity_types(), *b.sorted_entity_types()]:
        prev = entities.get(et.code)
        entities[et.code] = et if prev is None else _merge_entity(prev, et)
    relations: dict[tuple[str, str, str], RelationTypeDef] = {}
    for rt in [*a.sorted_relation_types(), *b.sorted_relation_types()]:
        prev = relations.get(rt.triple)
        if prev is not None and prev != rt:
            raise MergeConflictError(
                f"relation {rt.verb}: {rt.source_type}->{rt.target_type} has guards "
                f"{prev.guard!r} and {rt.guard!r}"
            )
        relations[rt.triple] = rt
    return Schema("merged", entities.values(), relations.values())


def validate_schema(s: Schema) -> ValidationReport:
    report = ValidationReport()
    if s.id not in SCHEMA_IDS:
        report.error("bad-schema-id", f"schema id {s.id!r} not one of {', '.join(SCHEMA_IDS)}")

    seen: dict[str, EntityTypeDef] = {}
    for et in s.sorted_entity_types():
        loc = f"entity type {et.code}"
        if et.code in seen:
            report.error("duplicate code", f"entity code {et.code!r} declared more than once", loc)
            continue
        seen[et.code] = et
        if not CODE_RE.fullmatch(et.code):
            report.error("bad-code", f"entity code {et.code!r} must match [A-Z][A-Z_]*", loc)
        names = [a.name for a in et.attributes]
        for name in sorted({n for n in names if names.count(n) > 1}):
            report.error("duplicate attribute", f"attribute {name!r} declared twice", loc)
        for attr in et.attributes:
            if not IDENT_RE.fullmatch(attr.name):
                report.error("bad-attribute-name", f"attribute {attr.name!r} must match [a-z][a-z_]*", loc)
            if attr.kind not in ("boolean", "string"):
                report.error("bad-attribute-kind", f"attribute {attr.name!r} has kind {attr.kind!r}", loc)
        allowed = {
            "information": INFORMATION_CODES,
            "document_resource": DOCUMENT_CODES,
            "anchor": ANCHOR_CODES,
        }.get(et.colour_class)
        if et.colour_class not in ("information", "document_resource", "anchor", "plain"):
            report.error("bad-colour-class", f"unknown colour class {et.colour_class!r}", loc)
        elif allowed is not None and et.code not in allowed:
            report.error(
                "colour-class", f"colour class {et.colour_class} not allowed for {et.code}", loc
            )

    triples: dict[tuple[str, str, str], RelationTypeDef] = {}
    for rt in s.sorted_relation_types():
        loc = f"relation {rt.verb}: {rt.source_type}->{rt.target_type}"
        if rt.triple in triples:
            report.error("duplicate relation", "relation triple declared more than once", loc)
            continue
        triples[rt.triple] = rt
        if not IDENT_RE.fullmatch(rt.verb):
            report.error("bad-verb", f"verb {rt.verb!r} must match [a-z][a-z_]*", loc)
        for end in (rt.source_type, rt.target_type):
            if end not in seen:
                report.error("dangling endpoint", f"endpoint {end!r} is not a declared entity type", loc)
        if rt.guard is not None:
            src = seen.get(rt.source_type)
            attr = src.attribute(rt.guard) if src else None
            if src is None:
                pass
            elif attr is None:
                report.error("undeclared guard", f"guard {rt.guard!r} not declared on {rt.source_type}", loc)
            elif attr.kind != "boolean":
                report.error("guard must be boolean", f"guard {rt.guard!r} is a {attr.kind} attribute", loc)
    return report


def lookup_relation(s: Schema, verb: str, src: str, dst: str) -> RelationTypeDef:
    found = s.find_relation(verb, src, dst)
    if found is not None:
        return found
    raise NotFoundError(
        f"no relation {verb}: {src}->{dst} in schema {s.id}" + near_miss_hint(s, verb, src, dst)
    )


def near_miss_hint(s: Schema, verb: str, src: str, dst: str) -> str:
    """Describe declared triples sharing ``verb``, closest endpoints first."""
    same_verb = s.relations_with_verb(verb)
    if not same_verb:
        return f"; unknown verb {verb!r}"
    ranked = sorted(
        same_verb,
        key=lambda r: (
            -((r.source_type == src) + (r.target_type == dst) + 2 * ({r.source_type, r.target_type} == {src, dst})),
            r.triple,
        ),
    )
    shown = ", ".join(f"({r.source_type}, {r.target_type})" for r in ranked[:6])
    more = f" and {len(ranked) - 6} more" if len(ranked) > 6 else ""
    return f"; did you mean {verb} with {shown}{more}?"


def format_schema_table(s: Schema) -> str:
    """Plain-text catalog: entity types then relation triples, sorted."""
    lines = [f"# schema {s.id}: {len(s.entity_types)} entity types, {len(s.relation_types)} relation types"]
    lines.append("# code\tname\tcolour_class\tattributes")
    for et in s.sorted_entity_types():
        attrs = ",".join(f"{a.name}:{a.kind}" for a in et.attributes) or "-"
        lines.append(f"{et.code}\t{et.name}\t{et.colour_class}\t{attrs}")
    lines.append("# verb\tsource\ttarget\tedge_class\tguard")
    for rt in s.sorted_relation_types():
        lines.append(f"{rt.verb}\t{rt.source_type}\t{rt.target_type}\t{rt.edge_class}\t{rt.guard or '-'}")
    return "\n".join(lines) + "\n"
