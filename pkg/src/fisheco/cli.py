"""Command-line entry point.

Exit status: 0 success, 1 validation errors found, 2 usage or parse error,
3 I/O error. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dsl, export, graph, query, schema, spread
from .errors import FishecoError

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

QUERY_NAMES = (
    "fact-check-events",
    "co-fact-checkers",
    "uncovered",
    "shared-backer",
    "regulation-chain",
    "match",
    "exposure-network",
)
QUERY_ARITY = {
    "fact-check-events": 1,
    "co-fact-checkers": 1,
    "uncovered": 0,
    "shared-backer": 2,
    "regulation-chain": 1,
    "match": 1,
    "exposure-network": 0,
}

QUERY_HELP = """\
query names and arguments:
  fact-check-events ID      incoming fact-check events on an item
  co-fact-checkers ID       distinct checkers of an item
  uncovered                 N/UGC entities nobody fact-checked
  shared-backer A B         common O/RCL backers via belongs_to (--depth, default 4)
  regulation-chain ID       regulators of an entity with their L/RL instruments
  match PATTERN             inline pattern, e.g.
                              'x:FO, y:N; x -fact_checked-> y'
                              'p:P{fact_checking=true}, n; p -*-> n'
                              'r:R, m:MO; r -regulates/past-> m'
  exposure-network          agent adjacency used by simulate
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fisheco", description="False-information and fact-checking ecosystem graphs.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    sp = sub.add_parser("schema", help="inspect builtin schemas")
    ssub = sp.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    ssub.required = True
    show = ssub.add_parser("show", help="print the catalog table")
    show.add_argument("model", choices=["A", "B", "merged"])
    check = ssub.add_parser("check", help="validate a builtin schema")
    check.add_argument("model", choices=["A", "B", "merged"])
    look = ssub.add_parser("lookup", help="find a relation type")
    look.add_argument("model", choices=["A", "B", "merged"])
    look.add_argument("verb")
    look.add_argument("src")
    look.add_argument("dst")

    vp = sub.add_parser("validate", help="parse and validate a scenario")
    vp.add_argument("file")

    qp = sub.add_parser(
        "query", help="run an ecosystem query", epilog=QUERY_HELP, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    qp.add_argument("file")
    qp.add_argument("name", choices=QUERY_NAMES)
    qp.add_argument("args", nargs="*")
    qp.add_argument("--json", action="store_true", help="emit a JSON array instead of TSV rows")
    qp.add_argument("--depth", type=int, default=query.DEFAULT_DEPTH, help="max belongs_to hops for shared-backer (default 4)")

    ep = sub.add_parser("export", help="render a scenario")
    ep.add_argument("file")
    ep.add_argument("--format", required=True, choices=["dot", "graphml", "json", "fis"])
    ep.add_argument("--attrs-as-nodes", action="store_true", help="draw true boolean attributes as ellipses (dot)")
    ep.add_argument("-o", "--output", help="write to this path instead of stdout")

    mp = sub.add_parser("simulate", help="seeded cascade of an item over the exposure network")
    mp.add_argument("file")
    mp.add_argument("--item", required=True)
    mp.add_argument("--p", type=float, required=True, dest="p_share")
    mp.add_argument("--damp", type=float, default=0.0)
    mp.add_argument("--steps", type=int, default=10)
    mp.add_argument("--seed", type=int, default=0)
    mp.add_argument("--seeds", help="batch range a..b (inclusive); overrides --seed")

    fp = sub.add_parser("fixtures", help="list or print the shipped scenarios")
    fsub = fp.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    fsub.required = True
    fsub.add_parser("list")
    dump = fsub.add_parser("dump")
    dump.add_argument("name", choices=dsl.FIXTURE_NAMES)
    return p


def load_graph(path: str) -> graph.ScenarioGraph:
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        return graph.from_json(text)
    return dsl.parse(text)


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, (list, tuple)):
        return ",".join(v) if v else "-"
    if hasattr(v, "isoformat"):
        return v.isoformat()
    return str(v)


def _emit(rows: list[dict], as_json: bool, out) -> None:
    if as_json:
        def default(o):
            return o.isoformat() if hasattr(o, "isoformat") else list(o)

        out.write(json.dumps(rows, indent=2, ensure_ascii=False, default=default) + "\n")
        return
    for row in rows:
        out.write("\t".join(_cell(v) for v in row.values()) + "\n")


def _query_rows(g: graph.ScenarioGraph, args) -> list[dict]:
    name, rest = args.name, args.args
    if len(rest) != QUERY_ARITY[name]:
        raise UsageError(f"query {name} takes {QUERY_ARITY[name]} argument(s), got {len(rest)}")
    if name == "fact-check-events":
        return [
            {"checker": e.checker_id, "type": e.checker_type, "tense": e.tense, "date": e.date, "report": e.report_id}
            for e in query.fact_check_events(g, rest[0])
        ]
    if name == "co-fact-checkers":
        return [{"checker": c} for c in sorted(query.co_fact_checkers(g, rest[0]))]
    if name == "uncovered":
        return [{"id": i} for i in query.uncovered_items(g)]
    if name == "shared-backer":
        return [
            {"backer": s.backer, "path_a": " > ".join(s.path_a), "path_b": " > ".join(s.path_b)}
            for s in query.shared_backer(g, rest[0], rest[1], args.depth)
        ]
    if name == "regulation-chain":
        return [
            {"regulator": r.regulator, "tense": r.tense, "instruments": list(r.instruments)}
            for r in query.regulation_chain(g, rest[0])
        ]
    if name == "match":
        pattern = query.parse_pattern(rest[0])
        return query.match_pattern(g, pattern)
    net = spread.build_exposure_network(g)
    return [{"agent": a, "neighbours": nbrs} for a, nbrs in net.items()]


def _seed_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"--seeds expects a..b, got {text!r}") from None
    if not sep or b < a:
        raise UsageError(f"--seeds expects a..b with a <= b, got {text!r}")
    return list(range(a, b + 1))


def _run(args, out) -> int:
    if args.command == "schema":
        s = schema.builtin_schema(args.model)
        if args.action == "show":
            out.write(schema.format_schema_table(s))
            return EXIT_OK
        if args.action == "check":
            report = schema.validate_schema(s)
            out.write(str(report) + "\n")
            return EXIT_INVALID if report.errors else EXIT_OK
        rdef = schema.lookup_relation(s, args.verb, args.src, args.dst)
        out.write(f"{rdef.verb}\t{rdef.source_type}\t{rdef.target_type}\t{rdef.edge_class}\t{rdef.guard or '-'}\n")
        return EXIT_OK

    if args.command == "fixtures":
        if args.action == "list":
            out.write("".join(f"{n}\n" for n in dsl.FIXTURE_NAMES))
        else:
            out.write(dsl.fixture_text(args.name))
        return EXIT_OK

    g = load_graph(args.file)
    if args.command == "validate":
        report = graph.validate_graph(g)
        out.write(str(report) + "\n")
        return EXIT_INVALID if report.errors else EXIT_OK

    if args.command == "query":
        _emit(_query_rows(g, args), args.json, out)
        return EXIT_OK

    if args.command == "export":
        if args.format == "dot":
            text = export.to_dot(g, export.StyleMap(attrs_as_nodes=args.attrs_as_nodes))
        elif args.format == "graphml":
            text = export.to_graphml(g)
        elif args.format == "json":
            text = graph.to_json(g)
        else:
            text = dsl.serialize(g)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            out.write(text)
        return EXIT_OK

    seeds = _seed_range(args.seeds) if args.seeds else [args.seed]
    runs = []
    for seed in seeds:
        params = spread.SpreadParams(args.p_share, args.damp, args.steps, seed)
        runs.append((seed, spread.simulate(g, args.item, params)))
    meta = spread.run_metadata(args.item, spread.SpreadParams(args.p_share, args.damp, args.steps, seeds[0]))
    if len(seeds) == 1:
        out.write(json.dumps(meta, sort_keys=True) + "\n")
        out.write(runs[0][1].csv())
    else:
        meta["params"].pop("seed")
        meta["seeds"] = [seeds[0], seeds[-1]]
        out.write(json.dumps(meta, sort_keys=True) + "\n")
        out.write("seed,step,exposed\n")
        for seed, traj in runs:
            out.write("".join(f"{seed},{t},{n}\n" for t, n in enumerate(traj.exposed_per_step)))
    return EXIT_OK


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except dsl.ParseError as exc:
        where = getattr(args, "file", "<input>")
        print(f"{where}:{exc.line}:{exc.column}: {exc.message}", file=sys.stderr)
        if exc.snippet:
            print(f"  {exc.snippet}\n  {' ' * (exc.column - 1)}^", file=sys.stderr)
        return EXIT_USAGE
    except FishecoError as exc:
        print(f"error: {exc.kind}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
