"""Seeded cascade of a false item over the agent exposure network.

Agents are the P and AC entities. An exposed agent ``u`` exposes an
out-neighbour with probability ``p_share * (1 - damp * aware(u))`` per step,
where ``aware(u)`` is 1 when ``u`` consumed a fact-check report about the item.

The uniform schedule is outcome-independent: every step draws one number for
every directed network edge, agents ascending then neighbours ascending, and
a draw is only *used* when its source is exposed and its target is not. With
the seed fixed, a larger ``damp`` therefore never exposes an extra agent.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from .errors import SimulationError
from .graph import ScenarioGraph

AGENT_CODES = ("P", "AC")
GROUP_CODES = ("OG", "SOC")
ITEM_CODES = ("N", "UGC")
PUBLISH_VERBS = ("published", "created")
PRNG_NAME = "MT19937 (Python random.Random, integer seed)"


@dataclass(frozen=True)
class SpreadParams:
    p_share: float
    damp: float = 0.0
    steps: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_share <= 1.0:
            raise SimulationError(f"p_share must lie in [0, 1], got {self.p_share}", "usage")
        if not 0.0 <= self.damp <= 1.0:
            raise SimulationError(f"damp must lie in [0, 1], got {self.damp}", "usage")
        if self.steps < 1:
            raise SimulationError(f"steps must be positive, got {self.steps}", "usage")
        if not 0 <= self.seed < 2**64:
            raise SimulationError(f"seed must be a 64-bit unsigned int, got {self.seed}", "usage")


@dataclass
class Trajectory:
    exposed_per_step: list[int]
    final_exposed: frozenset[str]
    history: list[frozenset[str]] = field(default_factory=list, repr=False)

    def csv(self) -> str:
        rows = ["step,exposed"] + [f"{t},{n}" for t, n in enumerate(self.exposed_per_step)]
        return "\n".join(rows) + "\n"


def build_exposure_network(g: ScenarioGraph) -> dict[str, list[str]]:
    """Directed agent adjacency, keys and neighbour lists sorted by id."""
    agents = [e.id for e in g.entities_of_type(*AGENT_CODES)]
    agent_set = set(agents)
    succ: dict[str, set[str]] = {a: set() for a in agents}

    producers: dict[str, set[str]] = {}
    for rel in g.relations:
        if rel.verb in PUBLISH_VERBS and rel.source_id in agent_set:
            producers.setdefault(rel.target_id, set()).add(rel.source_id)
    for rel in g.relations:
        if rel.verb == "consumed" and rel.source_id in agent_set:
            for u in producers.get(rel.target_id, ()):
                if u != rel.source_id:
                    succ[u].add(rel.source_id)

    for group in g.entities_of_type(*GROUP_CODES):
        members = sorted(
            {r.source_id for r in g.incoming(group.id, "belongs_to") if r.source_id in agent_set}
        )
        for u in members:
            succ[u].update(m for m in members if m != u)
    return {a: sorted(succ[a]) for a in agents}


def item_sources(g: ScenarioGraph, item_id: str) -> list[str]:
    agents = {e.id for e in g.entities_of_type(*AGENT_CODES)}
    return sorted(
        {r.source_id for r in g.incoming(item_id) if r.verb in PUBLISH_VERBS and r.source_id in agents}
    )


def aware_agents(g: ScenarioGraph, item_id: str) -> set[str]:
    reports = {
        r.source_id
        for r in g.incoming(item_id, "reports_on")
        if g.entities[r.source_id].type_code == "FCR"
    }
    return {
        r.source_id
        for rep in reports
        for r in g.incoming(rep, "consumed")
        if g.entities[r.source_id].type_code in AGENT_CODES
    }


def simulate(g: ScenarioGraph, item_id: str, params: SpreadParams) -> Trajectory:
    if item_id not in g.entities:
        raise SimulationError(f"unknown item {item_id!r}", "unknown-item")
    if g.entities[item_id].type_code not in ITEM_CODES:
        raise SimulationError(f"{item_id!r} is not an N or UGC item", "unknown-item")
    sources = item_sources(g, item_id)
    if not sources:
        raise SimulationError(f"item {item_id!r} has no publisher or creator among P/AC agents", "no-publisher")

    network = build_exposure_network(g)
    aware = aware_agents(g, item_id)
    p_eff = {u: params.p_share * (1.0 - params.damp * (1.0 if u in aware else 0.0)) for u in network}
    schedule = [(u, v) for u in network for v in network[u]]
    rng = random.Random(params.seed)

    exposed = set(sources)
    history = [frozenset(exposed)]
    for _ in range(params.steps):
        newly = set()
        for u, v in schedule:
            draw = rng.random()
            if u in exposed and v not in exposed and draw < p_eff[u]:
                newly.add(v)
        exposed |= newly
        history.append(frozenset(exposed))
    return Trajectory([len(s) for s in history], frozenset(exposed), history)


def run_metadata(item_id: str, params: SpreadParams) -> dict:
    return {"item": item_id, "params": asdict(params), "prng": PRNG_NAME}
