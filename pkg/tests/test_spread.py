import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fisheco.dsl import load_fixture
from fisheco.errors import SimulationError
from fisheco.graph import new_graph
from fisheco.schema import builtin_schema
from fisheco.spread import SpreadParams, build_exposure_network, simulate

from generators import random_spread_graph


def reachable(network, sources):
    seen, frontier = set(sources), list(sources)
    while frontier:
        u = frontier.pop()
        for v in network[u]:
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return seen


def chain_graph(n=4, aware=()):
    """P0 publishes N0; Pi publishes Ni and P(i+1) consumes it; all loop back to P0."""
    g = new_graph("chain", builtin_schema("merged"))
    for i in range(n):
        g.add_entity("P", f"P{i}")
        g.add_entity("N", f"N{i}")
        g.add_relation(f"P{i}", "published", f"N{i}")
    for i in range(n):
        g.add_relation(f"P{(i + 1) % n}", "consumed", f"N{i}")
    if aware:
        g.add_entity("FCR", "report")
        g.add_relation("report", "reports_on", "N0")
        for pid in aware:
            g.add_relation(pid, "consumed", "report")
    return g


def test_rule_a_publisher_to_consumer():
    g = new_graph("t", builtin_schema("A"))
    g.add_entity("P", "P1")
    g.add_entity("P", "P2")
    g.add_entity("N", "n")
    g.add_relation("P1", "published", "n")
    g.add_relation("P2", "consumed", "n")
    assert build_exposure_network(g) == {"P1": ["P2"], "P2": []}


def test_rule_b_group_both_ways():
    g = new_graph("t", builtin_schema("B"))
    for a in ("a1", "a2"):
        g.add_entity("AC", a)
    g.add_entity("OG", "group")
    g.add_relation("a1", "belongs_to", "group")
    g.add_relation("a2", "belongs_to", "group")
    assert build_exposure_network(g) == {"a1": ["a2"], "a2": ["a1"]}


def test_no_agents():
    assert build_exposure_network(load_fixture("uk_regulators")) == {}


def test_p_zero_constant():
    traj = simulate(chain_graph(), "N0", SpreadParams(0.0, 0.0, 5, 7))
    assert traj.exposed_per_step == [1] * 6


def test_full_share_is_bfs():
    g = chain_graph(5)
    traj = simulate(g, "N0", SpreadParams(1.0, 0.0, 4, 3))
    # the ring P0 -> P1 -> ... -> P4 exposes one agent per step
    assert traj.exposed_per_step == [1, 2, 3, 4, 5]
    assert traj.final_exposed == {f"P{i}" for i in range(5)}


def test_aware_publisher_full_damp_stays_alone():
    g = chain_graph(4, aware=["P0"])
    traj = simulate(g, "N0", SpreadParams(1.0, 1.0, 6, 11))
    assert traj.exposed_per_step == [1] * 7
    assert traj.final_exposed == {"P0"}
    # without damping the same seed reaches every agent
    assert simulate(g, "N0", SpreadParams(1.0, 0.0, 6, 11)).final_exposed == {"P0", "P1", "P2", "P3"}


def test_deterministic():
    g, item = random_spread_graph(random.Random(5))
    params = SpreadParams(0.6, 0.3, 8, 2**63 + 17)
    assert simulate(g, item, params) == simulate(g, item, params)


def test_errors():
    g = chain_graph()
    with pytest.raises(SimulationError):
        simulate(g, "nope", SpreadParams(0.5))
    with pytest.raises(SimulationError):
        simulate(g, "P0", SpreadParams(0.5))
    g.add_entity("N", "orphan")
    with pytest.raises(SimulationError) as exc:
        simulate(g, "orphan", SpreadParams(0.5))
    assert exc.value.kind == "no-publisher"


@pytest.mark.parametrize(
    "kwargs",
    [dict(p_share=1.5), dict(p_share=0.5, damp=-0.1), dict(p_share=0.5, steps=0), dict(p_share=0.5, seed=2**64)],
)
def test_param_ranges(kwargs):
    with pytest.raises(SimulationError):
        SpreadParams(**kwargs)


def test_csv_layout():
    traj = simulate(chain_graph(3), "N0", SpreadParams(1.0, 0.0, 2, 0))
    assert traj.csv() == "step,exposed\n0,1\n1,2\n2,3\n"


params_st = st.builds(
    SpreadParams,
    p_share=st.floats(0, 1),
    damp=st.floats(0, 1),
    steps=st.integers(1, 12),
    seed=st.integers(0, 2**64 - 1),
)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), params_st, st.floats(0, 1))
def test_simulation_invariants(gseed, params, damp2):
    g, item = random_spread_graph(random.Random(gseed))
    traj = simulate(g, item, params)
    net = build_exposure_network(g)
    assert len(traj.exposed_per_step) == params.steps + 1
    assert traj.exposed_per_step[0] >= 1
    assert all(a <= b for a, b in zip(traj.exposed_per_step, traj.exposed_per_step[1:]))
    assert all(a <= b for a, b in zip(traj.history, traj.history[1:]))
    assert traj.final_exposed <= reachable(net, traj.history[0])
    assert traj.exposed_per_step[-1] <= len(net)

    lo, hi = sorted((params.damp, damp2))
    low = simulate(g, item, SpreadParams(params.p_share, lo, params.steps, params.seed))
    high = simulate(g, item, SpreadParams(params.p_share, hi, params.steps, params.seed))
    assert all(h <= l for h, l in zip(high.history, low.history))
