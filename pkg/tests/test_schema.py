import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fisheco.errors import MergeConflictError, NotFoundError, SchemaError
from fisheco.schema import (
    ANCHOR_CODES,
    AttributeDef,
    EntityTypeDef,
    RelationTypeDef,
    Schema,
    builtin_schema,
    format_schema_table,
    lookup_relation,
    merge_schemas,
    validate_schema,
)

A_CODES = {"L", "RL", "C", "FCR", "P", "JA", "ND", "N", "MO", "MOA", "FO", "FA", "O", "RCL", "R", "STD", "SR"}
B_CODES = {"RCL", "R", "O", "P", "FO", "FA", "UGC", "AC", "S", "SP", "SOC", "OG"}


def test_builtin_cardinalities():
    a, b = builtin_schema("A"), builtin_schema("B")
    assert len(a.entity_types) == 17
    assert len(b.entity_types) == 12
    assert set(a.codes) == A_CODES
    assert set(b.codes) == B_CODES
    assert set(a.codes) & set(b.codes) == ANCHOR_CODES
    # 17 + 12 - 6 shared anchors
    assert len(merge_schemas(a, b).entity_types) == 23
    assert len(builtin_schema("merged").entity_types) == 23


@pytest.mark.parametrize("model", ["A", "B", "merged"])
def test_builtins_validate_clean(model):
    report = validate_schema(builtin_schema(model))
    assert report.valid, str(report)


def test_unknown_model_is_usage_error():
    with pytest.raises(SchemaError) as exc:
        builtin_schema("Z")
    assert exc.value.kind == "usage"


def test_mo_fact_checks_news():
    rdef = lookup_relation(builtin_schema("A"), "fact_checked", "MO", "N")
    assert rdef.edge_class == "fact_check"
    assert rdef.guard is None


def test_person_fact_check_is_guarded():
    rdef = lookup_relation(builtin_schema("A"), "fact_checked", "P", "N")
    assert rdef.guard == "fact_checking"


def test_regulates_edge_class():
    assert lookup_relation(builtin_schema("A"), "regulates", "R", "MO").edge_class == "regulate"


def test_direction_matters_with_hint():
    with pytest.raises(NotFoundError) as exc:
        lookup_relation(builtin_schema("A"), "regulates", "MO", "R")
    assert "(R, MO)" in exc.value.message


def test_edge_classes_map_to_two_verbs():
    for model in ("A", "B", "merged"):
        s = builtin_schema(model)
        special = {(r.edge_class, r.verb) for r in s.relation_types if r.edge_class != "plain"}
        assert special == {("fact_check", "fact_checked"), ("regulate", "regulates")}


def test_merge_person_attributes_once():
    merged = merge_schemas(builtin_schema("A"), builtin_schema("B"))
    p = merged.entity_type("P")
    assert [a.name for a in p.attributes] == ["fact_checking", "is_journalist"]


def test_merge_idempotent_and_commutative():
    a, b = builtin_schema("A"), builtin_schema("B")
    assert merge_schemas(a, a) == a
    assert merge_schemas(a, b) == merge_schemas(b, a)


def test_merge_conflicting_attribute_kind():
    x = Schema("custom", [EntityTypeDef("P", "Person", "anchor", (AttributeDef("flag"),))], [])
    y = Schema("custom", [EntityTypeDef("P", "Person", "anchor", (AttributeDef("flag", "string"),))], [])
    with pytest.raises(MergeConflictError, match="P"):
        merge_schemas(x, y)


def test_dangling_endpoint_reported():
    s = Schema("custom", [EntityTypeDef("X", "X")], [RelationTypeDef("links", "X", "Y")])
    report = validate_schema(s)
    assert [v.code for v in report.errors] == ["dangling endpoint"]


def test_string_guard_reported():
    s = Schema(
        "custom",
        [EntityTypeDef("X", "X", attributes=(AttributeDef("label", "string"),))],
        [RelationTypeDef("links", "X", "X", guard="label")],
    )
    report = validate_schema(s)
    assert [v.code for v in report.errors] == ["guard must be boolean"]


def test_duplicate_code_and_bad_colour():
    s = Schema("custom", [EntityTypeDef("X", "One"), EntityTypeDef("X", "Two"), EntityTypeDef("Q", "Q", "information")], [])
    codes = sorted(v.code for v in validate_schema(s).errors)
    assert codes == ["colour-class", "duplicate code"]


def test_schema_table_sorted_and_deterministic():
    text = format_schema_table(builtin_schema("merged"))
    assert text == format_schema_table(builtin_schema("merged"))
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    entity_rows = rows[:23]
    assert [r.split("\t")[0] for r in entity_rows] == sorted(r.split("\t")[0] for r in entity_rows)
    rel_rows = [tuple(r.split("\t")[:3]) for r in rows[23:]]
    assert rel_rows == sorted(rel_rows)


# -- properties over small custom schemas ----------------------------------

CODES = ["AA", "BB", "CC", "DD", "EE"]


@st.composite
def small_schemas(draw):
    codes = draw(st.sets(st.sampled_from(CODES), min_size=1, max_size=5))
    ets = []
    for code in sorted(codes):
        # attribute kinds are fixed per name so independently drawn schemas merge cleanly
        names = draw(st.sets(st.sampled_from(["flag", "tag", "seen"]), max_size=3))
        attrs = tuple(AttributeDef(n, "string" if n == "tag" else "boolean") for n in sorted(names))
        ets.append(EntityTypeDef(code, f"type {code}", "plain", attrs))
    rels = set()
    for _ in range(draw(st.integers(0, 6))):
        src = draw(st.sampled_from(sorted(codes)))
        dst = draw(st.sampled_from(sorted(codes)))
        rels.add(RelationTypeDef(draw(st.sampled_from(["links", "feeds"])), src, dst))
    return Schema("custom", ets, rels)


@settings(max_examples=100, deadline=None)
@given(small_schemas(), small_schemas())
def test_merge_laws(x, y):
    xy = merge_schemas(x, y)
    yx = merge_schemas(y, x)
    assert xy.entity_types == yx.entity_types
    assert xy.relation_types == yx.relation_types
    assert merge_schemas(x, x) == x
    shared = set(x.codes) & set(y.codes)
    assert len(xy.entity_types) == len(x.entity_types) + len(y.entity_types) - len(shared)
    assert not validate_schema(xy).errors
