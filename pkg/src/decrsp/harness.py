"""Instance generation, oracle-validated runs, and machine-readable reports.

A Schedule couples a start graph with an ordered stream of updates and
interleaved query probes, all derived deterministically from a seed.
``run_with_oracle`` replays a schedule through one of the maintained
structures (exact tree, full-range single-source, all-pairs) and, at a
configurable stride, recomputes exact distances with two independent
shortest-path implementations, recording stretch, underestimates, and any
invariant failure into a ValidationReport whose rendering is byte-stable
under a fixed seed.

``static_hopset_check`` is the one-shot verification oracle for the
shortcut-edge idea itself: it builds distance-weighted ball edges over a
frozen priority sampling, runs hop-limited Bellman-Ford on the augmented
graph, and asserts the hop/weight trade-off pair by pair.  It lives here,
in the validation path, not in the maintained-structure path.
"""

from __future__ import annotations

import hashlib
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, inf

from .apsp import ApspState
from .es_tree import EsTree
from .graph import DynamicGraph, QueryProbe, UpdateEvent, dijkstra_bounded
from .layered import FullRangeSssp
from .oracle import cross_checked_distances
from .sampling import sample_priorities


class ScheduleError(ValueError):
    """Raised for infeasible instance-generation requests."""


# -- schedules ----------------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    """A start graph plus an ordered update/query stream, seed-deterministic."""

    n: int
    w_max: int
    edges: tuple  # (u, v, w) triples
    items: tuple  # UpdateEvent | QueryProbe, in replay order
    seed: int
    model: str

    def build_graph(self):
        g = DynamicGraph(self.n, self.w_max)
        for u, v, w in self.edges:
            g.add_edge(u, v, w)
        return g

    def updates(self):
        return [x for x in self.items if isinstance(x, UpdateEvent)]

    def dump_graph(self):
        lines = ["%d %d %d" % (self.n, len(self.edges), self.w_max)]
        lines += ["%d %d %d" % e for e in self.edges]
        return "\n".join(lines) + "\n"

    def dump_updates(self):
        lines = []
        for item in self.items:
            if isinstance(item, QueryProbe):
                lines.append("Q %d %d" % (item.u, item.v))
            elif item.kind == "delete":
                lines.append("D %d %d" % (item.u, item.v))
            else:
                lines.append("I %d %d %d" % (item.u, item.v, item.new_weight))
        return "\n".join(lines) + ("\n" if lines else "")


def _unrank_pair(index, n):
    """The index-th pair (u, v) with u < v in lexicographic order."""
    u = 0
    remaining = index
    row = n - 1
    while remaining >= row:
        remaining -= row
        u += 1
        row -= 1
    return u, u + 1 + remaining


def _edge_topology(n, m, model, rng):
    if model == "erdos-renyi":
        total = n * (n - 1) // 2
        if m > total:
            raise ScheduleError("m=%d exceeds %d possible edges for n=%d" % (m, total, n))
        picks = rng.sample(range(total), m)
        return sorted(_unrank_pair(i, n) for i in picks)
    if model == "path":
        return [(i, i + 1) for i in range(n - 1)]
    if model == "grid":
        side = max(1, int(n**0.5))
        pairs = []
        for idx in range(n):
            r, c = divmod(idx, side)
            if c + 1 < side and idx + 1 < n:
                pairs.append((idx, idx + 1))
            if idx + side < n:
                pairs.append((idx, idx + side))
        return pairs
    if model == "power-law":
        if n < 3:
            raise ScheduleError("power-law model needs n >= 3")
        pairs = {(0, 1), (0, 2), (1, 2)}
        stubs = [0, 1, 2, 0, 1, 2]  # degree-proportional attachment pool
        for v in range(3, n):
            t = stubs[rng.randrange(len(stubs))]
            pairs.add((min(t, v), max(t, v)))
            stubs += [t, v]
        extra = sorted(set(range(n * (n - 1) // 2)))
        while len(pairs) < min(m, n * (n - 1) // 2):
            u, v = _unrank_pair(rng.choice(extra), n)
            if u != v:
                pairs.add((u, v))
        return sorted(pairs)
    raise ScheduleError("unknown model %r" % (model,))


def generate_instance(
    n,
    m,
    w_max,
    model,
    deletion_fraction,
    seed,
    *,
    increase_rate=0.0,
    query_rate=0.0,
):
    """Deterministic schedule: topology, weights, then a shuffled deletion set.

    Weight increases and query probes are sprinkled in front of deletions at
    the given rates; every event is valid at its position by construction
    (generation simulates the live weight table).
    """
    import random

    if not (0 <= deletion_fraction <= 1):
        raise ScheduleError("deletion fraction %r outside [0, 1]" % (deletion_fraction,))
    rng = random.Random(seed)
    pairs = _edge_topology(n, m, model, rng)
    edges = tuple((u, v, rng.randint(1, w_max)) for u, v in pairs)
    doomed = rng.sample(range(len(edges)), round(deletion_fraction * len(edges)))
    live = {(u, v): w for u, v, w in edges}
    items = []
    for index in doomed:
        u, v, _ = edges[index]
        if query_rate and rng.random() < query_rate:
            items.append(QueryProbe(rng.randrange(n), rng.randrange(n)))
        if increase_rate and rng.random() < increase_rate:
            grow = [e for e, w in live.items() if w < w_max]
            if grow:
                eu, ev = grow[rng.randrange(len(grow))]
                new_w = rng.randint(live[(eu, ev)] + 1, w_max)
                live[(eu, ev)] = new_w
                items.append(UpdateEvent("increase", eu, ev, new_w))
        del live[(u, v)]
        items.append(UpdateEvent("delete", u, v))
    return Schedule(
        n=n,
        w_max=w_max,
        edges=edges,
        items=tuple(items),
        seed=seed,
        model=model,
    )


# -- oracle-validated runs -----------------------------------------------------


@dataclass
class RunConfig:
    mode: str = "sssp"  # "es" | "sssp" | "apsp"
    source: int = 0
    eps: Fraction = Fraction(1, 2)
    k: int = 2
    p: int | None = None
    q: int | None = None
    c: float = 2.0
    seed: int = 0
    oracle_check: bool = True
    oracle_stride: int = 1
    debug: bool = False
    measure_time: bool = False
    # (update_index, node, forged_value): replaces the reported estimate for
    # one node at one oracle step, to prove the harness catches lies.
    fault_injection: tuple | None = None


@dataclass
class ValidationReport:
    """Line-oriented key=value run summary with a stable field order."""

    fields: list = field(default_factory=list)

    def add(self, key, value):
        self.fields.append((key, value))

    def get(self, key):
        for k, v in self.fields:
            if k == key:
                return v
        raise KeyError(key)

    def render(self):
        return "".join("%s=%s\n" % (k, v) for k, v in self.fields)

    def write_to(self, path):
        with open(path, "w") as fh:
            fh.write(self.render())


def _fraction_str(x):
    if x == inf:
        return "inf"
    return str(Fraction(x))


def run_with_oracle(schedule, config):
    """Replay a schedule through the configured structure with exact checks.

    Every oracle step recomputes distances with two independent exact
    implementations (which must agree), then records the worst stretch and
    every underestimate with its update index and witness pair.
    """
    graph = schedule.build_graph()
    eps = Fraction(config.eps)
    started = time.monotonic() if config.measure_time else None
    digest = hashlib.sha256()

    if config.mode == "es":
        structure = EsTree(graph, config.source, inf)
        bound = Fraction(1)
    elif config.mode == "sssp":
        structure = FullRangeSssp(
            graph,
            config.source,
            eps,
            p=config.p,
            q=config.q,
            c=config.c,
            seed=config.seed,
            debug=config.debug,
        )
        bound = 1 + eps
    elif config.mode == "apsp":
        structure = ApspState(
            graph, config.k, eps, config.seed, c=config.c, debug=config.debug
        )
        bound = (2 + eps) ** config.k - 1
    else:
        raise ValueError("unknown mode %r" % (config.mode,))

    max_stretch = Fraction(0)
    underestimates = []
    invariant_failures = []
    oracle_checks = 0
    update_index = 0
    query_answers = 0

    def estimates_for_oracle():
        if config.mode == "apsp":
            return {v: structure.query(config.source, v) for v in graph.node_ids()}
        return {v: structure.estimate(v) for v in graph.node_ids()}

    def oracle_step():
        nonlocal max_stretch, oracle_checks
        oracle_checks += 1
        dist = cross_checked_distances(graph, config.source)
        reported = estimates_for_oracle()
        fault = config.fault_injection
        if fault is not None and fault[0] == update_index:
            reported[fault[1]] = fault[2]
        for v in graph.node_ids():
            d = dist.get(v, inf)
            est = reported[v]
            if est < d:
                underestimates.append("index=%d node=%d est=%s dist=%s"
                                      % (update_index, v, _fraction_str(est), _fraction_str(d)))
                continue
            if d == inf:
                if est != inf:
                    invariant_failures.append(
                        "index=%d node=%d finite_estimate_for_unreachable" % (update_index, v)
                    )
                continue
            if d > 0:
                stretch = Fraction(est) / d
                if stretch > bound:
                    invariant_failures.append(
                        "index=%d node=%d stretch=%s" % (update_index, v, _fraction_str(stretch))
                    )
                max_stretch = max(max_stretch, stretch)

    def answer_probe(probe):
        nonlocal query_answers, max_stretch
        query_answers += 1
        if config.mode == "apsp":
            est = structure.query(probe.u, probe.v)
            d = dijkstra_bounded(graph, probe.u, inf).get(probe.v, inf)
        else:
            if probe.u != config.source:
                return  # single-source structure cannot answer this pair
            est = structure.estimate(probe.v)
            d = dijkstra_bounded(graph, config.source, inf).get(probe.v, inf)
        digest.update(("Q %s %s %s\n" % (probe.u, probe.v, _fraction_str(est))).encode())
        if est < d:
            underestimates.append(
                "index=%d pair=%d,%d est=%s dist=%s"
                % (update_index, probe.u, probe.v, _fraction_str(est), _fraction_str(d))
            )
        elif d not in (0, inf) and Fraction(est) / d > bound:
            invariant_failures.append(
                "index=%d pair=%d,%d stretch=%s"
                % (update_index, probe.u, probe.v, _fraction_str(Fraction(est) / d))
            )

    if config.oracle_check:
        oracle_step()

    for item in schedule.items:
        if isinstance(item, QueryProbe):
            answer_probe(item)
            continue
        update_index += 1
        try:
            if config.mode == "es":
                record = graph.apply_update(item)
                changed = structure.process_update(record)
            elif config.mode == "sssp":
                changed = structure.apply_event(item)
            else:
                structure.process_update(item)
                changed = ()
        except AssertionError as exc:
            invariant_failures.append("index=%d assert=%s" % (update_index, exc))
            break
        for node, value in changed:
            digest.update(("U %d %d %s\n" % (update_index, node, _fraction_str(value))).encode())
        if config.oracle_check and update_index % config.oracle_stride == 0:
            oracle_step()

    report = ValidationReport()
    report.add("mode", config.mode)
    report.add("model", schedule.model)
    report.add("n", schedule.n)
    report.add("m", len(schedule.edges))
    report.add("w_max", schedule.w_max)
    report.add("schedule_seed", schedule.seed)
    report.add("algorithm_seed", config.seed)
    report.add("eps", _fraction_str(eps))
    report.add("stretch_bound", _fraction_str(bound))
    report.add("updates_processed", update_index)
    report.add("oracle_checks", oracle_checks)
    report.add("query_answers", query_answers)
    report.add("max_stretch", _fraction_str(max_stretch))
    report.add("underestimate_violations", len(underestimates))
    for entry in underestimates:
        report.add("underestimate", entry)
    report.add("invariant_failures", len(invariant_failures))
    for entry in invariant_failures:
        report.add("invariant_failure", entry)
    for key, value in sorted(collect_work_counters(config.mode, structure).items()):
        report.add("work_%s" % key, value)
    report.add("emissions_sha256", digest.hexdigest())
    if config.measure_time:
        report.add("wall_time_ms", int((time.monotonic() - started) * 1000))
    return report


def collect_work_counters(mode, structure):
    """Event-count totals per structural component (no timers)."""
    if mode == "es":
        return {"es_edge_scans": structure.work_counter}
    if mode == "sssp":
        return _full_range_work(structure)
    counters = {"apsp_heap_pairs": len(structure._keys)}
    for key, value in _ball_system_work(structure.balls).items():
        counters[key] = value
    return counters


def _stack_work(stack):
    es_work = 0
    monotone_work = 0
    if stack.mode == "exact":
        return {"es": stack.top.work_counter, "monotone": 0}
    assembly = stack.top
    while assembly.k > 0:
        monotone_work += assembly.sg.tree.work_counter
        assembly = assembly.lower
    es_work += assembly._exact.work_counter
    return {"es": es_work, "monotone": monotone_work}

def _full_range_work(full):
    es_work = 0
    monotone_work = 0
    for stack in full.stacks:
        work = _stack_work(stack)
        es_work += work["es"]
        monotone_work += work["monotone"]
    return {
        "es_edge_scans": es_work,
        "monotone_heap_ops": monotone_work,
        "query_heap_reads": full.heap_reads,
    }


def _ball_system_work(balls):
    rebuilds = sum(balls.rebuild_counts.values())
    return {"ball_rebuilds": rebuilds}


# -- static shortcut-edge verification ------------------------------------------


def _bounded_hop_distances(size, indexed_edges, source_index, rounds):
    """Weights of cheapest <= h-edge paths for h = 0..rounds, per node index.

    Returns a list of per-round weight arrays (round h at position h); plain
    dynamic programming, exact by construction.  Once a round changes nothing
    the remaining rounds are identical, so the last array stands for them.
    """
    cur = [inf] * size
    cur[source_index] = 0
    table = [cur]
    for _ in range(rounds):
        new = list(cur)
        for x, v, w in indexed_edges:
            cand = cur[x] + w
            if cand < new[v]:
                new[v] = cand
        if new == cur:
            break
        cur = new
        table.append(cur)
    return table


def static_hopset_check(graph, p, delta, eps, seed, *, c=2.0, force_empty=False):
    """One-shot verification of the shortcut-edge hop/weight trade-off.

    Builds exact balls over a frozen priority sampling, adds one
    distance-weighted edge per (owner, member) pair, and verifies by
    hop-limited Bellman-Ford that every connected pair (u, v) reaches
    weight <= (1+eps)*dist + 2*(2 + 2/eps)^(p-2)*delta within
    p*ceil(dist/delta) hops -- and hence weight <= (1+2*eps)*dist for pairs
    far enough that the additive term is dominated.  Returns a stable-order
    report dict; raises AssertionError on any violated pair.
    """
    eps = Fraction(eps)
    assert 0 < eps <= 1 and p >= 2 and delta >= 1
    nodes = sorted(graph.node_ids())
    dist = {u: cross_checked_distances(graph, u) for u in nodes}
    assignment = sample_priorities(graph, p, c, seed)

    shortcut_edges = {}
    max_ball_size = 0
    if not force_empty:
        for u in nodes:
            i = assignment.priority_of(u)
            above = assignment.level_sets[i + 1]
            horizon = min((dist[u].get(a, inf) for a in above), default=inf)
            ball = {v for v, d in dist[u].items() if d < horizon}
            max_ball_size = max(max_ball_size, len(ball))
            for v in ball:
                if v != u:
                    # distance weights are symmetric, so (u, v) and (v, u)
                    # collapse to one undirected shortcut
                    shortcut_edges[(min(u, v), max(u, v))] = dist[u][v]

    index_of = {v: i for i, v in enumerate(nodes)}
    directed = []
    for u, v, w in graph.edges():
        directed.append((index_of[u], index_of[v], w))
        directed.append((index_of[v], index_of[u], w))
    for (u, v), w in shortcut_edges.items():
        directed.append((index_of[u], index_of[v], w))
        directed.append((index_of[v], index_of[u], w))

    additive = 2 * (2 + 2 / eps) ** (p - 2) * delta
    covered_floor = additive / eps  # beyond this the additive term is dominated
    max_hop_budget = 0
    finite_pairs = 0
    covered_pairs = 0
    worst_needed_hops = 0
    for u in nodes:
        finite = {v: d for v, d in dist[u].items() if v != u and d != inf}
        if not finite:
            continue
        if force_empty:
            # No shortcuts: the first hop count at which each node becomes
            # reachable must equal its exact minimum-edge path length in G.
            hops = _hop_distances(graph, u)
            table = _bounded_hop_distances(
                len(nodes), directed, index_of[u], max(hops.values())
            )
            for v in finite:
                finite_pairs += 1
                vi = index_of[v]
                first = next(h for h, row in enumerate(table) if row[vi] != inf)
                assert first == hops[v], (
                    "pair (%d, %d): first reachable at %d hops, exact is %d"
                    % (u, v, first, hops[v])
                )
            continue
        budgets = {v: p * ceil(Fraction(d) / delta) for v, d in finite.items()}
        rounds = max(budgets.values())
        max_hop_budget = max(max_hop_budget, rounds)
        table = _bounded_hop_distances(len(nodes), directed, index_of[u], rounds)
        for v, budget in budgets.items():
            d = finite[v]
            finite_pairs += 1
            vi = index_of[v]
            curve = [row[vi] for row in table]
            at_budget = curve[min(budget, len(curve) - 1)]
            assert at_budget <= (1 + eps) * d + additive, (
                "pair (%d, %d): weight %s at %d hops exceeds additive allowance"
                % (u, v, at_budget, budget)
            )
            if d >= covered_floor:
                covered_pairs += 1
                target = (1 + 2 * eps) * d
                assert at_budget <= target, (
                    "pair (%d, %d): weight %s at %d hops exceeds (1+2eps)*dist=%s"
                    % (u, v, at_budget, budget, target)
                )
                needed = next(h for h, w in enumerate(curve) if w <= target)
                worst_needed_hops = max(worst_needed_hops, needed)

    return {
        "n": len(nodes),
        "p": p,
        "delta": delta,
        "eps": str(eps),
        "shortcut_edges": len(shortcut_edges),
        "max_ball_size": max_ball_size,
        "finite_pairs": finite_pairs,
        "covered_pairs": covered_pairs,
        "additive_allowance": str(additive),
        "max_hop_budget": max_hop_budget,
        "worst_needed_hops": worst_needed_hops,
    }


def _hop_distances(view, source):
    """Minimum edge counts from ``source`` by breadth-first search."""
    hops = {source: 0}
    frontier = deque([source])
    while frontier:
        x = frontier.popleft()
        for y, _ in view.neighbors(x):
            if y not in hops:
                hops[y] = hops[x] + 1
                frontier.append(y)
    return hops
