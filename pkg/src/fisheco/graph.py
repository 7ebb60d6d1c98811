"""Scenario graphs: concrete entities and dated, tensed relations over a schema."""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from typing import Iterator, Literal

from .errors import GraphError
from .schema import (
    FACT_CHECK_VERB,
    Schema,
    ValidationReport,
    builtin_schema,
    near_miss_hint,
    validate_schema,
)

Tense = Literal["past", "ongoing"]
TENSES = ("past", "ongoing")
FORMAT_TAG = "fisheco-graph/1"

AttrValue = bool | str


@dataclass
class Entity:
    id: str
    type_code: str
    attrs: dict[str, AttrValue] = field(default_factory=dict)


@dataclass(frozen=True)
class Relation:
    source_id: str
    verb: str
    target_id: str
    tense: Tense = "ongoing"
    date: dt.date | None = None

    @property
    def key(self) -> tuple:
        return (self.source_id, self.verb, self.target_id, self.tense, self.date)

    def describe(self) -> str:
        when = f" at {self.date.isoformat()}" if self.date else ""
        return f"{self.source_id!r} {self.verb} {self.target_id!r} ({self.tense}{when})"


class ScenarioGraph:
    """Mutable instance graph. Single writer; mutations are all-or-nothing."""

    def __init__(self, name: str, schema: Schema, as_of: dt.date | None = None) -> None:
        self.name = name
        self.schema = schema
        self.as_of = as_of
        self.entities: dict[str, Entity] = {}
        self.relations: list[Relation] = []
        self._keys: set[tuple] = set()
        self._out: dict[str, list[Relation]] = {}
        self._in: dict[str, list[Relation]] = {}

    def __repr__(self) -> str:
        return (
            f"ScenarioGraph({self.name!r}, schema={self.schema.id}, "
            f"{len(self.entities)} entities, {len(self.relations)} relations)"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScenarioGraph):
            return NotImplemented
        return (
            self.name == other.name
            and self.schema == other.schema
            and self.as_of == other.as_of
            and self.entities == other.entities
            and self.relations == other.relations
        )

    __hash__ = None  # type: ignore[assignment]

    # -- read access --------------------------------------------------------

    def entity(self, entity_id: str) -> Entity:
        try:
            return self.entities[entity_id]
        except KeyError:
            raise GraphError(f"unknown entity {entity_id!r}", "unknown-entity") from None

    def attr(self, entity_id: str, name: str) -> AttrValue | None:
        """Attribute value with the schema default filled in."""
        ent = self.entity(entity_id)
        if name in ent.attrs:
            return ent.attrs[name]
        et = self.schema.entity_type(ent.type_code)
        adef = et.attribute(name) if et else None
        return adef.default_value() if adef else None

    def outgoing(self, entity_id: str, verb: str | None = None) -> list[Relation]:
        rels = self._out.get(entity_id, [])
        return [r for r in rels if verb is None or r.verb == verb]

    def incoming(self, entity_id: str, verb: str | None = None) -> list[Relation]:
        rels = self._in.get(entity_id, [])
        return [r for r in rels if verb is None or r.verb == verb]

    def entities_of_type(self, *codes: str) -> list[Entity]:
        return sorted((e for e in self.entities.values() if e.type_code in codes), key=lambda e: e.id)

    def sorted_entities(self) -> list[Entity]:
        return sorted(self.entities.values(), key=lambda e: e.id)

    def __iter__(self) -> Iterator[Entity]:
        return iter(self.sorted_entities())

    # -- mutation -----------------------------------------------------------

    def add_entity(self, type_code: str, entity_id: str, attrs: dict[str, AttrValue] | None = None) -> Entity:
        attrs = dict(attrs or {})
        if not isinstance(entity_id, str) or not entity_id:
            raise GraphError("entity id must be a non-empty string", "malformed-document")
        if entity_id in self.entities:
            raise GraphError(f"duplicate entity id {entity_id!r}", "duplicate-id")
        et = self.schema.entity_type(type_code)
        if et is None:
            raise GraphError(
                f"unknown entity type {type_code!r} in schema {self.schema.id}", "unknown-type"
            )
        for name, value in attrs.items():
            adef = et.attribute(name)
            if adef is None:
                declared = ", ".join(a.name for a in et.attributes) or "none"
                raise GraphError(
                    f"unknown attribute {name!r} for {type_code} (declared: {declared})",
                    "unknown-attribute",
                )
            if not _kind_ok(adef.kind, value):
                raise GraphError(
                    f"attribute {name!r} of {type_code} expects {adef.kind}, got {value!r}",
                    "attribute-kind-mismatch",
                )
        ent = Entity(entity_id, type_code, attrs)
        self.entities[entity_id] = ent
        return ent

    def add_relation(
        self,
        source_id: str,
        verb: str,
        target_id: str,
        tense: Tense | None = None,
        date: dt.date | None = None,
    ) -> Relation:
        if tense is None:
            tense = "ongoing"
        rel = Relation(source_id, verb, target_id, tense, date)
        problem = self._relation_problem(rel)
        if problem is not None:
            kind, message = problem
            raise GraphError(message, kind)
        self._insert_relation(rel)
        return rel

    def _relation_problem(self, rel: Relation, check_duplicate: bool = True) -> tuple[str, str] | None:
        if rel.tense not in TENSES:
            return "tense-date", f"tense must be past or ongoing, got {rel.tense!r}"
        for end in (rel.source_id, rel.target_id):
            if end not in self.entities:
                return "unknown-entity", f"unknown entity {end!r} in {rel.describe()}"
        src = self.entities[rel.source_id]
        dst = self.entities[rel.target_id]
        rdef = self.schema.find_relation(rel.verb, src.type_code, dst.type_code)
        if rdef is None:
            hint = near_miss_hint(self.schema, rel.verb, src.type_code, dst.type_code)
            return (
                "unknown-relation-triple",
                f"no relation {rel.verb}: {src.type_code}->{dst.type_code} in schema {self.schema.id}{hint}",
            )
        if rdef.guard is not None and self.attr(src.id, rdef.guard) is not True:
            return (
                "guard-violation",
                f"{rel.verb} from {src.type_code} {src.id!r} requires attribute {rdef.guard}=true",
            )
        if rel.date is not None and rel.tense == "ongoing" and self.as_of is not None and rel.date > self.as_of:
            return (
                "tense-date",
                f"ongoing relation dated {rel.date.isoformat()} is after as-of date {self.as_of.isoformat()}",
            )
        if check_duplicate and rel.key in self._keys:
            return "duplicate-relation", f"duplicate relation {rel.describe()}"
        return None

    def _insert_entity(self, ent: Entity) -> None:
        self.entities[ent.id] = ent

    def _insert_relation(self, rel: Relation) -> None:
        self.relations.append(rel)
        self._keys.add(rel.key)
        self._out.setdefault(rel.source_id, []).append(rel)
        self._in.setdefault(rel.target_id, []).append(rel)


def _kind_ok(kind: str, value: object) -> bool:
    if kind == "boolean":
        return isinstance(value, bool)
    return isinstance(value, str)


def new_graph(name: str, schema: Schema, as_of: dt.date | None = None) -> ScenarioGraph:
    report = validate_schema(schema)
    if report.errors:
        raise GraphError(f"schema {schema.id} is invalid:\n{report}", "invalid-schema")
    return ScenarioGraph(name, schema, as_of)


def add_entity(g: ScenarioGraph, type_code: str, entity_id: str, attrs: dict | None = None) -> Entity:
    return g.add_entity(type_code, entity_id, attrs)


def add_relation(
    g: ScenarioGraph,
    source_id: str,
    verb: str,
    target_id: str,
    tense: Tense | None = None,
    date: dt.date | None = None,
) -> Relation:
    return g.add_relation(source_id, verb, target_id, tense, date)


def validate_graph(g: ScenarioGraph) -> ValidationReport:
    """Re-check every instance invariant and flag ecosystem smells as warnings."""
    report = ValidationReport()
    for ent in g.sorted_entities():
        loc = f"entity {ent.id!r}"
        et = g.schema.entity_type(ent.type_code)
        if et is None:
            report.error("unknown-type", f"type {ent.type_code!r} not in schema {g.schema.id}", loc)
            continue
        for name, value in sorted(ent.attrs.items()):
            adef = et.attribute(name)
            if adef is None:
                report.error("unknown-attribute", f"attribute {name!r} not declared on {ent.type_code}", loc)
            elif not _kind_ok(adef.kind, value):
                report.error("attribute-kind-mismatch", f"attribute {name!r} expects {adef.kind}", loc)

    seen: set[tuple] = set()
    for idx, rel in enumerate(g.relations):
        loc = f"relation #{idx + 1} {rel.describe()}"
        if rel.source_id in g.entities and rel.target_id in g.entities:
            if g.schema.entity_type(g.entities[rel.source_id].type_code) is None:
                continue
            if g.schema.entity_type(g.entities[rel.target_id].type_code) is None:
                continue
        problem = g._relation_problem(rel, check_duplicate=False)
        if problem is not None:
            report.error(problem[0], problem[1], loc)
        if rel.key in seen:
            report.error("duplicate-relation", "relation repeated", loc)
        seen.add(rel.key)

    for ent in g.entities_of_type("N", "UGC"):
        if not g.incoming(ent.id, FACT_CHECK_VERB):
            report.warn("uncovered item", f"{ent.type_code} {ent.id!r} has no incoming fact_checked edge", f"entity {ent.id!r}")
    for ent in g.entities_of_type("AC"):
        if g.attr(ent.id, "is_false") is True:
            made = sorted(
                r.target_id
                for r in g.outgoing(ent.id, "created")
                if r.target_id in g.entities and g.entities[r.target_id].type_code == "UGC"
            )
            if made:
                report.warn(
                    "fake-account content",
                    f"account {ent.id!r} flagged is_false created {', '.join(repr(m) for m in made)}",
                    f"entity {ent.id!r}",
                )
    return report


# -- JSON document format ---------------------------------------------------


def to_json(g: ScenarioGraph) -> str:
    """Deterministic document: entities by id, relations in insertion order."""
    doc: dict = {"format": FORMAT_TAG, "name": g.name, "schema": g.schema.id}
    if g.as_of is not None:
        doc["as_of"] = g.as_of.isoformat()
    doc["entities"] = [
        {"id": e.id, "type": e.type_code, "attrs": {k: e.attrs[k] for k in sorted(e.attrs)}}
        for e in g.sorted_entities()
    ]
    rels = []
    for r in g.relations:
        item = {"src": r.source_id, "verb": r.verb, "dst": r.target_id, "tense": r.tense}
        if r.date is not None:
            item["date"] = r.date.isoformat()
        rels.append(item)
    doc["relations"] = rels
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _parse_date(value: object, where: str) -> dt.date:
    if not isinstance(value, str):
        raise GraphError(f"{where}: date must be a YYYY-MM-DD string", "malformed-document")
    try:
        if len(value) != 10:
            raise ValueError
        return dt.date.fromisoformat(value)
    except ValueError:
        raise GraphError(f"{where}: invalid date {value!r}", "malformed-document") from None


def from_json(text: str, schema: Schema | None = None) -> ScenarioGraph:
    """Load a graph document.

    Only structural problems and unknown vocabulary are rejected here;
    catalog, guard and attribute rules are left for :func:`validate_graph`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON: {exc}", "malformed-document") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise GraphError(f"not a {FORMAT_TAG} document", "malformed-document")
    schema_id = doc.get("schema")
    if schema is None:
        try:
            schema = builtin_schema(schema_id)
        except Exception:
            raise GraphError(f"unknown schema {schema_id!r}", "schema-mismatch") from None
    elif schema_id != schema.id:
        raise GraphError(f"document schema {schema_id!r} does not match {schema.id!r}", "schema-mismatch")
    name = doc.get("name")
    entities = doc.get("entities")
    relations = doc.get("relations")
    if not isinstance(name, str) or not isinstance(entities, list) or not isinstance(relations, list):
        raise GraphError("document needs string 'name' and lists 'entities', 'relations'", "malformed-document")
    as_of = _parse_date(doc["as_of"], "as_of") if doc.get("as_of") is not None else None

    g = ScenarioGraph(name, schema, as_of)
    for i, item in enumerate(entities):
        where = f"entities[{i}]"
        if not isinstance(item, dict):
            raise GraphError(f"{where}: expected an object", "malformed-document")
        eid, code, attrs = item.get("id"), item.get("type"), item.get("attrs", {})
        if not isinstance(eid, str) or not eid or not isinstance(code, str) or not isinstance(attrs, dict):
            raise GraphError(f"{where}: needs string 'id', 'type' and object 'attrs'", "malformed-document")
        if eid in g.entities:
            raise GraphError(f"{where}: duplicate entity id {eid!r}", "duplicate-id")
        if schema.entity_type(code) is None:
            raise GraphError(f"{where}: unknown entity type {code!r}", "schema-mismatch")
        for k, v in attrs.items():
            if not isinstance(v, (bool, str)):
                raise GraphError(f"{where}: attribute {k!r} must be boolean or string", "malformed-document")
        g._insert_entity(Entity(eid, code, dict(attrs)))
    for i, item in enumerate(relations):
        where = f"relations[{i}]"
        if not isinstance(item, dict):
            raise GraphError(f"{where}: expected an object", "malformed-document")
        src, verb, dst, tense = item.get("src"), item.get("verb"), item.get("dst"), item.get("tense", "ongoing")
        if not all(isinstance(x, str) for x in (src, verb, dst, tense)):
            raise GraphError(f"{where}: needs string 'src', 'verb', 'dst', 'tense'", "malformed-document")
        if not schema.has_verb(verb):
            raise GraphError(f"{where}: unknown verb {verb!r}", "unknown-verb")
        if tense not in TENSES:
            raise GraphError(f"{where}: tense must be past or ongoing", "malformed-document")
        for end in (src, dst):
            if end not in g.entities:
                raise GraphError(f"{where}: unknown entity {end!r}", "malformed-document")
        date = _parse_date(item["date"], where) if item.get("date") is not None else None
        g._insert_relation(Relation(src, verb, dst, tense, date))
    return g
