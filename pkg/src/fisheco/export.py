"""DOT and GraphML rendering with the ecosystem colour conventions."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

from .graph import Relation, ScenarioGraph

YELLOW = "#FFF2CC"
GREEN = "#D5E8D4"
LIGHT_GREEN = "#E2F0D9"
LIGHT_BLUE = "#DAE8FC"
WHITE = "#FFFFFF"


@dataclass(frozen=True)
class StyleMap:
    fills: dict[str, str] = field(
        default_factory=lambda: {
            "information": YELLOW,
            "document_resource": GREEN,
            "anchor": LIGHT_GREEN,
            "plain": WHITE,
        }
    )
    edge_colours: dict[str, str] = field(
        default_factory=lambda: {"fact_check": "blue", "regulate": "red", "plain": "black"}
    )
    attrs_as_nodes: bool = False
    attr_fill: str = LIGHT_BLUE


def _dot_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def edge_label(rel: Relation) -> str:
    label = rel.verb
    if rel.tense == "past":
        label += " (past)"
    if rel.date is not None:
        label += f" [{rel.date.isoformat()}]"
    return label


def _colour_class(g: ScenarioGraph, type_code: str) -> str:
    et = g.schema.entity_type(type_code)
    return et.colour_class if et else "plain"


def _edge_class(g: ScenarioGraph, rel: Relation) -> str:
    src = g.entities[rel.source_id].type_code
    dst = g.entities[rel.target_id].type_code
    rdef = g.schema.find_relation(rel.verb, src, dst)
    return rdef.edge_class if rdef else "plain"


def _true_attrs(g: ScenarioGraph, entity_id: str) -> list[str]:
    return sorted(k for k, v in g.entities[entity_id].attrs.items() if v is True)


def to_dot(g: ScenarioGraph, style: StyleMap | None = None) -> str:
    style = style or StyleMap()
    lines = [
        f"digraph {_dot_str(g.name)} {{",
        "  node [shape=box, style=\"rounded,filled\", fontname=\"Helvetica\"];",
        "  edge [fontname=\"Helvetica\"];",
    ]
    attr_lines: list[str] = []
    for ent in g.sorted_entities():
        fill = style.fills[_colour_class(g, ent.type_code)]
        suffix = "" if style.attrs_as_nodes else _attr_suffix(ent.attrs)
        lines.append(
            f"  {_dot_str(ent.id)} [label=\"{_escape_label(ent.id)}\\n[{ent.type_code}]{suffix}\", "
            f"fillcolor=\"{fill}\"];"
        )
        if style.attrs_as_nodes:
            for attr in _true_attrs(g, ent.id):
                node_id = f"{ent.id}::{attr}"
                attr_lines.append(
                    f"  {_dot_str(node_id)} [label={_dot_str(attr)}, shape=ellipse, "
                    f"style=filled, fillcolor=\"{style.attr_fill}\"];"
                )
                attr_lines.append(f"  {_dot_str(ent.id)} -> {_dot_str(node_id)} [style=dashed, arrowhead=none];")
    for rel in g.relations:
        colour = style.edge_colours[_edge_class(g, rel)]
        dashed = ", style=dashed" if rel.tense == "past" else ""
        lines.append(
            f"  {_dot_str(rel.source_id)} -> {_dot_str(rel.target_id)} "
            f"[label={_dot_str(edge_label(rel))}, color=\"{colour}\", fontcolor=\"{colour}\"{dashed}];"
        )
    lines.extend(attr_lines)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _escape_label(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def _attr_suffix(attrs: dict) -> str:
    if not attrs:
        return ""
    shown = ", ".join(
        f"{k}={str(v).lower() if isinstance(v, bool) else v}" for k, v in sorted(attrs.items())
    )
    return "\\n" + _escape_label(shown)


def _flatten_attrs(attrs: dict) -> str:
    return "".join(
        f"{k}={str(v).lower() if isinstance(v, bool) else v};" for k, v in sorted(attrs.items())
    )


def to_graphml(g: ScenarioGraph) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns" '
        'xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" '
        'xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns '
        'http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">',
        '  <key id="type" for="node" attr.name="type" attr.type="string"/>',
        '  <key id="attrs" for="node" attr.name="attrs" attr.type="string"/>',
        '  <key id="colour" for="node" attr.name="colour" attr.type="string"/>',
        '  <key id="verb" for="edge" attr.name="verb" attr.type="string"/>',
        '  <key id="tense" for="edge" attr.name="tense" attr.type="string"/>',
        '  <key id="date" for="edge" attr.name="date" attr.type="string"/>',
        '  <key id="ecolour" for="edge" attr.name="colour" attr.type="string"/>',
        f"  <graph id={quoteattr(g.name)} edgedefault=\"directed\">",
    ]
    style = StyleMap()
    for ent in g.sorted_entities():
        out.append(f"    <node id={quoteattr(ent.id)}>")
        out.append(f'      <data key="type">{escape(ent.type_code)}</data>')
        out.append(f'      <data key="attrs">{escape(_flatten_attrs(ent.attrs))}</data>')
        out.append(f'      <data key="colour">{style.fills[_colour_class(g, ent.type_code)]}</data>')
        out.append("    </node>")
    for i, rel in enumerate(g.relations):
        out.append(
            f'    <edge id="e{i}" source={quoteattr(rel.source_id)} target={quoteattr(rel.target_id)}>'
        )
        out.append(f'      <data key="verb">{escape(rel.verb)}</data>')
        out.append(f'      <data key="tense">{rel.tense}</data>')
        if rel.date is not None:
            out.append(f'      <data key="date">{rel.date.isoformat()}</data>')
        out.append(f'      <data key="ecolour">{style.edge_colours[_edge_class(g, rel)]}</data>')
        out.append("    </edge>")
    out.append("  </graph>")
    out.append("</graphml>")
    return "\n".join(out) + "\n"
