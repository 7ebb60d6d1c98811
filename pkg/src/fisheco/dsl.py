"""Line-oriented scenario format (``.fis``).

::

    # comment
    scenario "UK regulators"
    model A
    entity R "IPSO"
    entity P "Sarah Turnidge" { is_journalist = true, fact_checking = true }
    rel "IPSO" regulates "Telegraph"
    rel "PCC" regulates "Telegraph" tense past
    rel "Sarah Turnidge" fact_checked "BBC Breakfast broadcast" at 2022-02-25

One statement per line. A relation without ``tense`` is ``ongoing`` unless it
carries a date, in which case it defaults to ``past``. An optional
``asof YYYY-MM-DD`` line may follow the model line.
"""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass
from importlib import resources

from .errors import FishecoError, GraphError
from .graph import ScenarioGraph, new_graph
from .schema import builtin_schema

FIXTURE_NAMES = (
    "bbc_breakfast",
    "services_resources",
    "uk_regulators",
    "journalist_types",
    "trump_suspension",
)
MODELS = ("A", "B", "merged")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<comment>\#.*)
  | (?P<string>")
  | (?P<date>\d{4}-\d{2}-\d{2})
  | (?P<code>[A-Z][A-Z_]*)
  | (?P<ident>[a-z][a-z_]*)
  | (?P<punct>[{},=])
    """,
    re.VERBOSE,
)


class ParseError(FishecoError):
    kind = "parse-error"

    def __init__(self, line: int, column: int, message: str, snippet: str) -> None:
        super().__init__(message)
        self.line = line
        self.column = column
        self.snippet = snippet

    def __str__(self) -> str:
        pointer = " " * (self.column - 1) + "^"
        return f"line {self.line}, column {self.column}: {self.message}\n  {self.snippet}\n  {pointer}"

    @property
    def message(self) -> str:
        return str(self.args[0])


@dataclass
class _Tok:
    kind: str
    value: str
    col: int


def _tokenize(text: str, lineno: int) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(lineno, pos + 1, f"unexpected character {text[pos]!r}", text)
        kind = m.lastgroup
        if kind == "comment":
            break
        if kind == "string":
            value, pos = _read_string(text, pos, lineno)
            toks.append(_Tok("string", value, m.start() + 1))
            continue
        end = m.end()
        # identifiers glued to digits or mixed case ("Abc", "x1") are not tokens
        if kind in ("code", "ident", "date") and end < len(text) and re.match(r"[A-Za-z0-9_-]", text[end]):
            raise ParseError(lineno, pos + 1, f"malformed token starting {text[pos:end + 1]!r}", text)
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos + 1))
        pos = end
    return toks


def _read_string(text: str, start: int, lineno: int) -> tuple[str, int]:
    out = []
    pos = start + 1
    while pos < len(text):
        ch = text[pos]
        if ch == '"':
            return "".join(out), pos + 1
        if ch == "\\":
            nxt = text[pos + 1] if pos + 1 < len(text) else ""
            if nxt not in ('"', "\\"):
                raise ParseError(lineno, pos + 1, f"unknown escape \\{nxt}", text)
            out.append(nxt)
            pos += 2
            continue
        out.append(ch)
        pos += 1
    raise ParseError(lineno, start + 1, "unterminated string", text)


class _Line:
    def __init__(self, lineno: int, text: str, toks: list[_Tok]) -> None:
        self.lineno = lineno
        self.text = text
        self.toks = toks
        self.i = 0

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        if tok is None:
            tok = self.toks[self.i] if self.i < len(self.toks) else None
        col = tok.col if tok else len(self.text.rstrip()) + 1
        return ParseError(self.lineno, max(1, min(col, len(self.text) + 1)), message, self.text)

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind: str, value: str | None = None, what: str | None = None) -> _Tok:
        tok = self.peek()
        if tok is None or tok.kind != kind or (value is not None and tok.value != value):
            want = what or (repr(value) if value else kind)
            got = "end of line" if tok is None else repr(tok.value)
            raise self.error(f"expected {want}, got {got}", tok)
        self.i += 1
        return tok

    def accept(self, kind: str, value: str | None = None) -> _Tok | None:
        tok = self.peek()
        if tok is not None and tok.kind == kind and (value is None or tok.value == value):
            self.i += 1
            return tok
        return None

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected {tok.value!r} after statement", tok)


def _date(line: _Line) -> dt.date:
    tok = line.take("date", what="date YYYY-MM-DD")
    try:
        return dt.date.fromisoformat(tok.value)
    except ValueError:
        raise line.error(f"invalid date {tok.value}", tok) from None


def _lines(text: str) -> list[_Line]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize(raw, lineno)
        if toks:
            out.append(_Line(lineno, raw, toks))
    return out


def parse(text: str) -> ScenarioGraph:
    """Build a graph from ``.fis`` text; the first fault raises :class:`ParseError`."""
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = _lines(text)
    if not lines:
        raise ParseError(1, 1, "expected 'scenario \"name\"' header", text.splitlines()[0] if text.splitlines() else "")

    head = lines[0]
    head.take("ident", "scenario", "'scenario'")
    name = head.take("string", what="scenario name string").value
    head.done()
    if len(lines) < 2:
        raise head.error("expected 'model A|B|merged' line after scenario header")
    mline = lines[1]
    mline.take("ident", "model", "'model'")
    mtok = mline.peek()
    if mtok is None or mtok.value not in MODELS:
        raise mline.error("expected model A, B or merged", mtok)
    mline.i += 1
    mline.done()

    body = lines[2:]
    as_of = None
    if body and body[0].toks[0].value == "asof":
        aline = body.pop(0)
        aline.i = 1
        as_of = _date(aline)
        aline.done()

    g = new_graph(name, builtin_schema(mtok.value), as_of)
    for line in body:
        first = line.peek()
        if first.kind == "ident" and first.value == "entity":
            _entity(line, g)
        elif first.kind == "ident" and first.value == "rel":
            _rel(line, g)
        else:
            raise line.error(f"expected 'entity' or 'rel', got {first.value!r}", first)
    return g


def _semantic(line: _Line, exc: GraphError, tok: _Tok) -> ParseError:
    return line.error(f"{exc.kind}: {exc.message}", tok)


def _entity(line: _Line, g: ScenarioGraph) -> None:
    kw = line.take("ident", "entity")
    code_tok = line.take("code", what="entity type code")
    eid = line.take("string", what="entity id string").value
    attrs: dict[str, bool | str] = {}
    attr_toks: dict[str, _Tok] = {}
    if line.accept("punct", "{"):
        while True:
            name_tok = line.take("ident", what="attribute name")
            line.take("punct", "=")
            vtok = line.peek()
            if vtok is not None and vtok.kind == "ident" and vtok.value in ("true", "false"):
                value: bool | str = vtok.value == "true"
            elif vtok is not None and vtok.kind == "string":
                value = vtok.value
            else:
                raise line.error("expected true, false or a string value", vtok)
            line.i += 1
            if name_tok.value in attrs:
                raise line.error(f"attribute {name_tok.value!r} given twice", name_tok)
            attrs[name_tok.value] = value
            attr_toks[name_tok.value] = name_tok
            if line.accept("punct", "}"):
                break
            line.take("punct", ",", "',' or '}'")
    line.done()
    try:
        g.add_entity(code_tok.value, eid, attrs)
    except GraphError as exc:
        tok = kw
        if exc.kind == "unknown-type":
            tok = code_tok
        elif exc.kind in ("unknown-attribute", "attribute-kind-mismatch"):
            tok = next((t for n, t in attr_toks.items() if repr(n) in exc.message), kw)
        raise _semantic(line, exc, tok) from None


def _rel(line: _Line, g: ScenarioGraph) -> None:
    kw = line.take("ident", "rel")
    src = line.take("string", what="source entity string").value
    verb_tok = line.take("ident", what="relation verb")
    dst = line.take("string", what="target entity string").value
    tense = None
    date = None
    if line.accept("ident", "tense"):
        ttok = line.peek()
        if ttok is None or ttok.value not in ("past", "ongoing"):
            raise line.error("expected past or ongoing", ttok)
        tense = ttok.value
        line.i += 1
    if line.accept("ident", "at"):
        date = _date(line)
    line.done()
    if tense is None:
        tense = "past" if date is not None else "ongoing"
    try:
        g.add_relation(src, verb_tok.value, dst, tense, date)
    except GraphError as exc:
        raise _semantic(line, exc, verb_tok if exc.kind == "unknown-relation-triple" else kw) from None


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _value(v: bool | str) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return _quote(v)


def serialize(g: ScenarioGraph) -> str:
    """Canonical text: header, entities by (type, id), relations in order."""
    out = [f"scenario {_quote(g.name)}", f"model {g.schema.id}"]
    if g.as_of is not None:
        out.append(f"asof {g.as_of.isoformat()}")
    ents = sorted(g.entities.values(), key=lambda e: (e.type_code, e.id))
    if ents:
        out.append("")
    for e in ents:
        line = f"entity {e.type_code} {_quote(e.id)}"
        if e.attrs:
            line += " { " + ", ".join(f"{k} = {_value(e.attrs[k])}" for k in sorted(e.attrs)) + " }"
        out.append(line)
    if g.relations:
        out.append("")
    for r in g.relations:
        line = f"rel {_quote(r.source_id)} {r.verb} {_quote(r.target_id)}"
        implied = "past" if r.date is not None else "ongoing"
        if r.tense != implied:
            line += f" tense {r.tense}"
        if r.date is not None:
            line += f" at {r.date.isoformat()}"
        out.append(line)
    return "\n".join(out) + "\n"


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise FishecoError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}", "usage")
    return resources.files("fisheco.scenarios").joinpath(f"{name}.fis").read_text(encoding="utf-8")


def load_fixture(name: str) -> ScenarioGraph:
    return parse(fixture_text(name))
