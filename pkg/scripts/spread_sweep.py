"""Sweep share probability and fact-check damping for the cascade model.

Prints a CSV of mean final exposure over a block of seeds for each
(p_share, damp) cell. By default the graph is a seeded random agent graph
in which roughly half the agents read a fact-check report on the item;
``--fixture NAME --item ID`` sweeps a shipped scenario instead.

    python scripts/spread_sweep.py --seeds 200 --steps 10
"""

from __future__ import annotations

import argparse
import random
import statistics
from dataclasses import dataclass

from fisheco.dsl import load_fixture
from fisheco.graph import ScenarioGraph, new_graph
from fisheco.schema import builtin_schema
from fisheco.spread import SpreadParams, build_exposure_network, simulate


@dataclass
class SweepConfig:
    agents: int = 40
    avg_reads: float = 3.0
    aware_share: float = 0.5
    graph_seed: int = 1
    steps: int = 10
    seeds: int = 100
    p_values: tuple[float, ...] = (0.1, 0.2, 0.3, 0.5, 0.8)
    damp_values: tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)


def demo_graph(cfg: SweepConfig) -> tuple[ScenarioGraph, str]:
    """Each person publishes one article; readers pick articles at random."""
    rng = random.Random(cfg.graph_seed)
    g = new_graph("sweep", builtin_schema("merged"))
    people = [f"p{i:03d}" for i in range(cfg.agents)]
    for pid in people:
        g.add_entity("P", pid)
        g.add_entity("N", f"{pid}/article")
        g.add_relation(pid, "published", f"{pid}/article")
    reads = int(cfg.avg_reads * cfg.agents)
    seen = set()
    for _ in range(reads):
        reader, author = rng.sample(people, 2)
        if (reader, author) not in seen:
            seen.add((reader, author))
            g.add_relation(reader, "consumed", f"{author}/article")
    item = f"{people[0]}/article"
    g.add_entity("FCR", "debunk")
    g.add_relation("debunk", "reports_on", item)
    for pid in people:
        if rng.random() < cfg.aware_share:
            g.add_relation(pid, "consumed", "debunk")
    return g, item


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--fixture")
    ap.add_argument("--item")
    ap.add_argument("--agents", type=int, default=SweepConfig.agents)
    ap.add_argument("--graph-seed", type=int, default=SweepConfig.graph_seed)
    ap.add_argument("--steps", type=int, default=SweepConfig.steps)
    ap.add_argument("--seeds", type=int, default=SweepConfig.seeds)
    args = ap.parse_args()

    cfg = SweepConfig(agents=args.agents, graph_seed=args.graph_seed, steps=args.steps, seeds=args.seeds)
    if args.fixture:
        if not args.item:
            ap.error("--fixture needs --item")
        g, item = load_fixture(args.fixture), args.item
    else:
        g, item = demo_graph(cfg)

    n_agents = len(build_exposure_network(g))
    print(f"# item={item} agents={n_agents} steps={cfg.steps} seeds=0..{cfg.seeds - 1}")
    print("p_share,damp,mean_final,stdev_final")
    for p in cfg.p_values:
        for damp in cfg.damp_values:
            finals = [
                simulate(g, item, SpreadParams(p, damp, cfg.steps, seed)).exposed_per_step[-1]
                for seed in range(cfg.seeds)
            ]
            print(f"{p},{damp},{statistics.fmean(finals):.3f},{statistics.pstdev(finals):.3f}")


if __name__ == "__main__":
    main()
