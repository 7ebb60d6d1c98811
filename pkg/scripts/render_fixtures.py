"""Render every shipped scenario to DOT, GraphML and JSON.

    python scripts/render_fixtures.py --out renders [--attrs-as-nodes]

If graphviz's ``dot`` is on PATH, pass ``--png`` to rasterise the DOT files too.
"""

from __future__ import annotations

import argparse
import shutil
import subprocess
from pathlib import Path

from fisheco.dsl import FIXTURE_NAMES, load_fixture
from fisheco.export import StyleMap, to_dot, to_graphml
from fisheco.graph import to_json


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="renders")
    ap.add_argument("--attrs-as-nodes", action="store_true")
    ap.add_argument("--png", action="store_true")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    style = StyleMap(attrs_as_nodes=args.attrs_as_nodes)
    dot_bin = shutil.which("dot") if args.png else None
    for name in FIXTURE_NAMES:
        g = load_fixture(name)
        (out / f"{name}.dot").write_text(to_dot(g, style), encoding="utf-8")
        (out / f"{name}.graphml").write_text(to_graphml(g), encoding="utf-8")
        (out / f"{name}.json").write_text(to_json(g), encoding="utf-8")
        if dot_bin:
            subprocess.run([dot_bin, "-Tpng", "-o", str(out / f"{name}.png"), str(out / f"{name}.dot")], check=True)
        print(f"{name}: {len(g.entities)} entities, {len(g.relations)} relations -> {out}/{name}.*")
    if args.png and not dot_bin:
        print("graphviz 'dot' not found; skipped PNG output")


if __name__ == "__main__":
    main()
