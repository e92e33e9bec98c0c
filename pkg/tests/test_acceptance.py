"""Acceptance gate: one test per release criterion, at stated scale and tolerance.

Each test prints a single PASS line with its measured evidence; pytest -v
shows one pass/fail line per criterion.  Scales, tolerances, and frozen
regression constants are fixed here and must not be loosened to make a run
green.
"""

import random
import sys
from fractions import Fraction
from math import ceil, inf

sys.path.insert(0, "tests")

from decrsp.apsp import ApspState
from decrsp.balls import balls_init
from decrsp.es_tree import EsTree
from decrsp.graph import DynamicGraph, UpdateEvent
from decrsp.harness import RunConfig, generate_instance, run_with_oracle, static_hopset_check
from decrsp.hopset import derive_params
from decrsp.layered import FullRangeSssp, LayerStack
from decrsp.oracle import dijkstra
from decrsp.sampling import sample_priorities

from test_balls import InvariantChecker, apply as apply_ball_update
from test_graph_core import random_graph

# Frozen work-model constants (criterion 8).  A >25% regression on the fixed
# seeds below pushes a ratio past its constant and fails the suite.
ES_WORK_CONSTANT = 0.45
MONOTONE_WORK_CONSTANT = 0.50


def drain(graph, seed):
    """Full-deletion schedule: every edge once, in seeded random order."""
    rng = random.Random(seed)
    edges = list(graph.edges())
    rng.shuffle(edges)
    for u, v, _ in edges:
        yield graph.apply_update(UpdateEvent("delete", u, v))


def test_criterion_1_es_tree_exactness_on_50_instances():
    instances = 0
    checks = 0
    for seed in range(50):
        n = min(200, 20 + (seed % 10) * 20)
        m = min(n * (n - 1) // 2, n * (2 + seed % 3))
        w_max = (4, 8, 16, 32)[seed % 4]
        if seed == 49:  # pin one instance at the stated maxima
            n, m, w_max = 200, 1500, 32
        graph = random_graph(n, m, w_max, seed=seed)
        tree = EsTree(graph, 0, inf)
        for record in drain(graph, seed * 7 + 1):
            tree.process_update(record)
            exact = dijkstra(graph, 0)
            for v in graph.node_ids():
                assert tree.estimate(v) == exact.get(v, inf), (
                    "instance %d: node %d diverged" % (seed, v)
                )
            checks += 1
        instances += 1
    assert instances == 50
    print("PASS criterion 1: 50 instances, %d per-update exact comparisons" % checks)


def test_criterion_2_monotone_observation_suite_under_ball_joins():
    schedules = 0
    inserted = 0
    for seed in range(20):
        n = 20 + seed
        graph = random_graph(n, 2 * n, 4, seed=seed + 300)
        # debug=True re-checks the full observation suite (level monotonicity,
        # stretch only from insertions, pinned levels under persistent
        # stretches, parent inequality, residual consistency, exactness floor)
        # after every batch; any violation raises immediately.
        stack = LayerStack(graph, 0, 4 * n, Fraction(1, 2),
                           p=4, q=3, c=0.3, seed=seed, debug=True)
        for record in drain(graph, seed):
            stack.process_update(record)
        assembly = stack.top
        assert assembly.k == 1
        if assembly.sg.tree._ever_inserted:
            inserted += 1
        schedules += 1
    assert schedules == 20
    assert inserted == 20, "every schedule must exercise join-driven insertions"
    print("PASS criterion 2: 20 schedules, join-driven insertions in all 20")


def test_criterion_3_parameter_series_identities_for_200_draws():
    rng = random.Random(2024)
    draws = 0
    while draws < 200:
        p = rng.choice((2, 2, 3))
        a = 1 + Fraction(rng.randint(0, 4), 4)
        alpha = 1 + (a - 1) * Fraction(rng.randint(0, 4), 4)
        eps = Fraction(rng.randint(2, 4), 4)
        b = Fraction(rng.randint(0, 3))
        beta = b * Fraction(rng.randint(0, 4), 4)
        delta = rng.randint(max(1, ceil(b)), 12)
        depth = delta * rng.randint(1, 40)
        base = 4 * a**3 / eps
        floor_n = ceil(base ** (p * p))
        n = floor_n * rng.randint(1, 3) + rng.randint(0, 100)
        params = derive_params(alpha, beta, a, b, eps, p, delta, depth, n)
        assert params.admissible

        coef = alpha + 1 + eps
        acc = Fraction(0)
        wsum = Fraction(0)
        for i in range(p):
            # Coupled recurrences, exact in rational arithmetic.
            expect_r = Fraction(delta) if i == 0 else (coef * acc + beta) / eps
            assert params.r[i] == expect_r
            assert params.s[i] == a * params.r[i] + b
            assert params.w[i] == alpha * params.s[i] + beta
            acc += params.w[i]
            wsum += params.w[i]
            if i >= 1:
                # Radius/error correspondence against the gamma chain.
                assert eps * params.r[i] == params.gamma[0] - params.gamma[i] + beta
                # Closed-form radius bound, exactly, per i.
                assert params.r[i] <= (
                    3 * 4 ** (i - 1) * a ** (3 * i) * delta
                    + (9 * 4 ** (i - 1) - 2) * a ** (3 * i - 1) * b
                ) / eps**i
            # Closed-form weight-sum bound, exactly, per i.
            assert wsum <= (
                4**i * a ** (3 * i + 2) * delta
                + (3 * 4**i - 1) * a ** (3 * i + 1) * b
            ) / eps**i
        assert params.gamma[p - 1] == beta
        for i in range(p - 1):
            assert params.gamma[i] == params.gamma[i + 1] + coef * params.w[i]
        assert params.gamma_total == params.gamma[0] + 2 * eps * delta
        # Consequences of the priority-count precondition, root-free.
        assert ((a * params.gamma_total + b) / (eps * delta)) ** p <= n
        assert ((a * params.r[p - 1] + b) / delta) ** p <= n
        draws += 1
    print("PASS criterion 3: 200 in-precondition draws, all identities exact")


def test_criterion_4_ball_properties_exhaustive_at_n60():
    total_checks = 0
    for seed, depth in ((5, 24), (9, 30)):
        n, m = 60, 120
        graph = random_graph(n, m, 4, seed=seed)
        system = balls_init(graph, 3, 0.4, depth, 1, 0, EsTree, seed=seed * 3 + 1)
        checker = InvariantChecker(graph, system, 1, 0, depth)
        checker.check()  # exhaustive: sandwich, containment, witnesses, rebuilds
        rng = random.Random(seed + 40)
        for _ in range(22):
            edges = list(graph.edges())
            if not edges:
                break
            u, v, w = edges[rng.randrange(len(edges))]
            if w < graph.max_weight and rng.random() < 0.3:
                event = UpdateEvent("increase", u, v, rng.randint(w + 1, graph.max_weight))
            else:
                event = UpdateEvent("delete", u, v)
            apply_ball_update(graph, system, event)
            checker.check()
            total_checks += 1
    print("PASS criterion 4: %d exhaustive per-update property sweeps at n=60"
          % total_checks)


def test_criterion_5_full_range_sssp_20_schedules():
    worst = Fraction(0)
    schedules = 0
    for i in range(20):
        n = 100 if i >= 18 else 20 + 4 * i
        w_max = (4, 8, 16, 32)[i % 4] if i < 18 else 32
        graph = random_graph(n, 2 * n, w_max, seed=i + 700)
        sssp = FullRangeSssp(graph, 0, Fraction(1, 2), p=4, q=3, seed=i)
        for record in drain(graph, i + 13):
            sssp.process_update(record)
            exact = dijkstra(graph, 0)
            for v in graph.node_ids():
                before = sssp.heap_reads
                est = sssp.query(v)
                assert sssp.heap_reads == before + 1  # constant-time query
                d = exact.get(v, inf)
                assert d <= est, "underestimate at node %d" % v
                if d == inf:
                    assert est == inf
                elif d > 0:
                    assert est <= Fraction(3, 2) * d, "stretch blown at node %d" % v
                    worst = max(worst, Fraction(est) / d)
        assert all(sssp.query(v) == inf for v in graph.node_ids() if v != 0)
        schedules += 1
    assert schedules == 20
    print("PASS criterion 5: 20 schedules, worst stretch %s <= 3/2, "
          "1 heap read per query" % worst)


def test_criterion_6_apsp_stretch_and_expansion_budget():
    bound = Fraction(21, 4)  # (2 + 1/2)^2 - 1
    worst = Fraction(0)
    checked = 0
    for seed, n in ((3, 40), (8, 60)):
        graph = random_graph(n, 2 * n, 4, seed=seed + 900)
        state = ApspState(graph, 2, Fraction(1, 2), seed, c=0.25)
        level1 = len(state.assignment.level_sets[1])
        assert 0 < level1 < n  # a real priority hierarchy, not a degenerate one
        step = 0
        rng = random.Random(seed)
        edges = list(graph.edges())
        rng.shuffle(edges)
        for u, v, _ in edges:
            state.process_update(UpdateEvent("delete", u, v))
            step += 1
            if step % 3:
                continue
            for x in graph.node_ids():
                exact = dijkstra(graph, x)
                for y in graph.node_ids():
                    est = state.query(x, y)
                    assert state.last_query_expansions <= 4  # k^k with k=2
                    d = exact.get(y, inf)
                    assert d <= est
                    if d == inf:
                        assert est == inf
                    elif d > 0:
                        assert est <= bound * d
                        worst = max(worst, Fraction(est) / d)
                    checked += 1
    print("PASS criterion 6: %d queries, worst stretch %s <= 21/4, "
          "expansions <= 4" % (checked, worst))


def test_criterion_7_static_shortcut_trade_off_on_path_and_grid():
    path = DynamicGraph(100, 1)
    for i in range(99):
        path.add_edge(i, i + 1, 1)
    report_path = static_hopset_check(path, 3, 2, Fraction(1, 2), seed=2, c=0.3)
    assert report_path["covered_pairs"] > 0
    assert report_path["worst_needed_hops"] <= report_path["max_hop_budget"]

    grid = DynamicGraph(100, 1)
    for idx in range(100):
        r, c = divmod(idx, 10)
        if c + 1 < 10:
            grid.add_edge(idx, idx + 1, 1)
        if r + 1 < 10:
            grid.add_edge(idx, idx + 10, 1)
    report_grid = static_hopset_check(grid, 3, 1, Fraction(1, 1), seed=2, c=0.3)
    assert report_grid["covered_pairs"] > 0
    assert report_grid["worst_needed_hops"] <= report_grid["max_hop_budget"]
    print("PASS criterion 7: path covered pairs %d, grid covered pairs %d, "
          "all within budget" % (report_path["covered_pairs"],
                                 report_grid["covered_pairs"]))


def test_criterion_8_work_model_regression():
    # Exact tree: edge scans against m * depth on fixed seeds.
    worst_es = 0.0
    for seed, (n, m, w_max, depth) in enumerate(
        [(60, 200, 8, 40), (100, 400, 16, 60), (150, 700, 32, 100), (200, 1500, 32, 150)]
    ):
        graph = random_graph(n, m, w_max, seed=seed)
        tree = EsTree(graph, 0, depth)
        for record in drain(graph, seed):
            tree.process_update(record)
        ratio = tree.work_counter / (m * depth)
        assert ratio <= ES_WORK_CONSTANT, "es work ratio %.3f regressed" % ratio
        worst_es = max(worst_es, ratio)

    # Monotone tree under join traffic: heap ops against
    # (edges ever present) * (level cap) + (edge operations).
    worst_mono = 0.0
    for seed in range(3):
        n = 24 + 4 * seed
        graph = random_graph(n, 2 * n, 4, seed=seed + 300)
        stack = LayerStack(graph, 0, 4 * n, Fraction(1, 2),
                           p=4, q=3, c=0.3, seed=seed)
        for record in drain(graph, seed):
            stack.process_update(record)
        sg = stack.top.sg
        budget = sg.edges_ever * sg.tree.cap + sg.update_ops
        ratio = sg.tree.work_counter / budget
        assert ratio <= MONOTONE_WORK_CONSTANT, (
            "monotone work ratio %.3f regressed" % ratio
        )
        worst_mono = max(worst_mono, ratio)
    print("PASS criterion 8: es ratio <= %.2f (worst %.3f), monotone ratio "
          "<= %.2f (worst %.3f)" % (ES_WORK_CONSTANT, worst_es,
                                    MONOTONE_WORK_CONSTANT, worst_mono))


def test_criterion_9_reports_are_byte_identical():
    sched = generate_instance(30, 60, 8, "erdos-renyi", 1.0, seed=17,
                              increase_rate=0.2, query_rate=0.3)
    pairs = []
    for config in (
        RunConfig(mode="sssp", eps=Fraction(1, 2), seed=4, oracle_stride=3),
        RunConfig(mode="apsp", k=2, eps=Fraction(1, 2), seed=4, c=0.3,
                  oracle_stride=5),
    ):
        first = run_with_oracle(sched, config).render().encode()
        second = run_with_oracle(sched, config).render().encode()
        assert first == second
        pairs.append(len(first))
    print("PASS criterion 9: sssp and apsp reports byte-identical "
          "(%d and %d bytes)" % tuple(pairs))
