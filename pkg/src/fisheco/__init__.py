"""Typed ecosystem graphs for false information and fact checking."""

from .dsl import FIXTURE_NAMES, ParseError, load_fixture, parse, serialize
from .errors import FishecoError, GraphError, MergeConflictError, NotFoundError, PatternError, SchemaError
from .export import StyleMap, to_dot, to_graphml
from .graph import Entity, Relation, ScenarioGraph, from_json, new_graph, to_json, validate_graph
from .query import (
    EdgeConstraint,
    NodeVar,
    Pattern,
    co_fact_checkers,
    fact_check_events,
    match_pattern,
    parse_pattern,
    regulation_chain,
    shared_backer,
    uncovered_items,
)
from .schema import (
    AttributeDef,
    EntityTypeDef,
    RelationTypeDef,
    Schema,
    ValidationReport,
    builtin_schema,
    lookup_relation,
    merge_schemas,
    validate_schema,
)
from .spread import SpreadParams, Trajectory, build_exposure_network, simulate

__version__ = "0.1.0"
