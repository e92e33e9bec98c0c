"""Graph core: parsing, update application, views, bounded Dijkstra."""

import io
import random
from math import inf

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decrsp.graph import (
    ArtificialSourceView,
    DynamicGraph,
    GraphFormatError,
    InducedSubgraphView,
    QueryProbe,
    UpdateError,
    UpdateEvent,
    dijkstra_bounded,
    induced_subgraph,
    load_graph,
    parse_update_stream,
)
from decrsp.oracle import bellman_ford, dijkstra


def graph_from_edges(n, w_max, edges):
    g = DynamicGraph(n, w_max)
    for u, v, w in edges:
        g.add_edge(u, v, w)
    return g


def random_graph(n, m, w_max, seed):
    rng = random.Random(seed)
    pairs = rng.sample([(u, v) for u in range(n) for v in range(u + 1, n)], m)
    return graph_from_edges(n, w_max, [(u, v, rng.randint(1, w_max)) for u, v in pairs])


# -- parsing -----------------------------------------------------------------


def test_load_graph_basic():
    text = "# a comment\n3 2 10\n0 1 4\n\n1 2 7  # trailing comment\n"
    g = load_graph(io.StringIO(text))
    assert (g.n, g.edge_count, g.max_weight) == (3, 2, 10)
    assert g.weight(0, 1) == 4 and g.weight(2, 1) == 7
    assert list(g.edges()) == [(0, 1, 4), (1, 2, 7)]


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "empty"),
        ("3 1 5\n0 1 9", "weight"),
        ("3 1 5\n0 0 2", "self-loop"),
        ("3 2 5\n0 1 2\n1 0 3", "duplicate"),
        ("3 2 5\n0 1 2", "announced"),
        ("3 1 5\n0 7 2", "outside"),
        ("x y z\n", "non-integer"),
    ],
)
def test_load_graph_errors(text, fragment):
    with pytest.raises(GraphFormatError) as exc:
        load_graph(io.StringIO(text))
    assert fragment in str(exc.value)


def test_parse_update_stream():
    text = "D 0 1\nI 2 3 9\n# note\nQ 4 5\n"
    events = parse_update_stream(io.StringIO(text))
    assert events == [
        UpdateEvent("delete", 0, 1),
        UpdateEvent("increase", 2, 3, 9),
        QueryProbe(4, 5),
    ]
    with pytest.raises(GraphFormatError):
        parse_update_stream(io.StringIO("D 0\n"))
    with pytest.raises(GraphFormatError):
        parse_update_stream(io.StringIO("I 0 1\n"))


# -- updates -----------------------------------------------------------------


def test_apply_update_contract():
    g = graph_from_edges(4, 10, [(0, 1, 3), (1, 2, 5)])
    rec = g.apply_update(UpdateEvent("increase", 0, 1, 7))
    assert (rec.kind, rec.old_weight, rec.new_weight) == ("increase", 3, 7)
    assert g.weight(1, 0) == 7
    rec = g.apply_update(UpdateEvent("delete", 2, 1))
    assert (rec.kind, rec.old_weight, rec.new_weight) == ("delete", 5, None)
    assert not g.has_edge(1, 2) and g.edge_count == 1
    assert rec.version == 2

    with pytest.raises(UpdateError):
        g.apply_update(UpdateEvent("delete", 1, 2))  # already gone
    with pytest.raises(UpdateError):
        g.apply_update(UpdateEvent("increase", 0, 1, 7))  # not strictly larger
    with pytest.raises(UpdateError):
        g.apply_update(UpdateEvent("increase", 0, 1, 99))  # above weight bound


def test_edge_multiset_replay():
    # Replaying the record stream on a copy reproduces the final edge set.
    g = random_graph(12, 30, 8, seed=5)
    twin = graph_from_edges(12, 8, list(g.edges()))
    rng = random.Random(99)
    records = []
    for _ in range(25):
        edges = list(g.edges())
        if not edges:
            break
        u, v, w = rng.choice(edges)
        if w < 8 and rng.random() < 0.4:
            records.append(g.apply_update(UpdateEvent("increase", u, v, rng.randint(w + 1, 8))))
        else:
            records.append(g.apply_update(UpdateEvent("delete", u, v)))
    for rec in records:
        twin.apply_update(UpdateEvent(rec.kind, rec.u, rec.v, rec.new_weight))
    assert sorted(g.edges()) == sorted(twin.edges())


# -- views -------------------------------------------------------------------


def test_induced_subgraph_view():
    g = graph_from_edges(5, 9, [(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 4, 5), (0, 4, 1)])
    sub = induced_subgraph(g, {0, 1, 2})
    assert isinstance(sub, InducedSubgraphView)
    assert list(sub.edges()) == [(0, 1, 2), (1, 2, 3)]
    assert sub.has_edge(0, 1) and not sub.has_edge(0, 4)
    # Parent mutations show through the view.
    rec = g.apply_update(UpdateEvent("increase", 0, 1, 8))
    assert sub.weight(0, 1) == 8
    assert sub.filter_record(rec) is rec
    rec2 = g.apply_update(UpdateEvent("delete", 3, 4))
    assert sub.filter_record(rec2) is None


def test_induced_distances_never_shorter():
    g = random_graph(14, 35, 6, seed=3)
    sub = induced_subgraph(g, range(9))
    full = dijkstra(g, 0)
    restricted = dijkstra(sub, 0)
    for v, d in restricted.items():
        assert d >= full.get(v, inf) or full.get(v, inf) == inf
        assert d >= full[v]


def test_artificial_source_view():
    g = graph_from_edges(4, 9, [(0, 1, 2), (1, 2, 3), (2, 3, 4)])
    view = ArtificialSourceView(g, attach={1, 3})
    s = view.source_id
    assert s == 4
    assert sorted(view.node_ids()) == [0, 1, 2, 3, 4]
    assert view.weight(s, 1) == 0 and view.has_edge(3, s)
    got = dijkstra(view, s)
    # Distance from the virtual source equals distance to the attachment set.
    assert got == {s: 0, 1: 0, 3: 0, 0: 2, 2: 3}


# -- bounded Dijkstra ----------------------------------------------------------


def test_dijkstra_bounded_examples():
    g = graph_from_edges(6, 9, [(0, 1, 2), (1, 2, 2), (2, 3, 2), (3, 4, 2), (0, 5, 7)])
    assert dijkstra_bounded(g, 0, 4) == {0: 0, 1: 2, 2: 4}
    assert dijkstra_bounded(g, 0, inf) == dijkstra(g, 0)
    assert dijkstra_bounded(g, 0, 0) == {0: 0}
    # Virtual multi-source form: zero-weight start at a node set.
    assert dijkstra_bounded(g, ("set", [2, 5]), 2) == {2: 0, 5: 0, 1: 2, 3: 2}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 25))
def test_dijkstra_bounded_matches_oracle(seed, bound):
    rng = random.Random(seed)
    n = rng.randint(2, 16)
    m = rng.randint(1, n * (n - 1) // 2)
    g = random_graph(n, m, 7, seed)
    got = dijkstra_bounded(g, 0, bound)
    full = dijkstra(g, 0)
    assert got == {v: d for v, d in full.items() if d <= bound}


def test_oracle_routes_agree():
    for seed in range(12):
        g = random_graph(15, 40, 9, seed)
        for s in (0, 7):
            assert dijkstra(g, s) == bellman_ford(g, s)
