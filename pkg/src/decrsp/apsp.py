"""All-pairs approximate distances under deletions and weight increases.

A priority-sampled ball system, driven by the full-range single-source
contract, stores a distance estimate for every (owner, member) pair whose
ball relation holds.  On top of that, every node ``v`` keeps one min-heap
per priority class ``j`` holding the owners of priority ``j`` whose ball
contains ``v``, keyed by the journaled estimate; the heap minimum is the
cheapest priority-j witness reachable from ``v``.

A pair query walks the priority ladder: if the target sits in the queried
node's ball, its stored estimate answers directly; otherwise the query
recurses through the cheapest witness of each higher priority class and
takes the best witness-leg-plus-recursive-tail sum.  Priorities strictly
increase along the recursion, so a query expands at most k^k nodes; the
returned estimate never underestimates and stays within a
((2 + eps)^k - 1) stretch factor.  Every internal component runs at
eps/7, which absorbs the error compounding of the witness chain.
"""

from __future__ import annotations

import heapq
import itertools
from fractions import Fraction
from math import inf

from .balls import EST, JOIN, LEAVE, BallSystem
from .layered import FullRangeSssp
from .sampling import sample_priorities


class ApspState:
    """Ball system plus per-(node, priority) witness heaps."""

    def __init__(self, graph, k, eps, seed, *, c=2.0, debug=False):
        eps = Fraction(eps)
        if not (0 < eps <= 1):
            raise ValueError("need 0 < eps <= 1, got %s" % (eps,))
        self.graph = graph
        self.k = k
        self.eps = eps
        # Every internal component runs at a seventh of the requested
        # error; three compounding (1 + eps/7) factors per witness hop
        # stay within the advertised (2 + eps)^k - 1 stretch.
        self.eps_run = eps / 7
        self.debug = debug
        self.assignment = sample_priorities(graph, k, c, seed)
        counter = itertools.count(seed * 1_000_003 + 1)

        def factory(view, root, depth):
            return FullRangeSssp(view, root, self.eps_run, seed=next(counter))

        horizon = graph.node_count() * graph.max_weight
        self.balls = BallSystem(
            graph,
            self.assignment,
            factory,
            alpha=1 + self.eps_run,
            beta=0,
            depth=horizon,
            bucket_eps=self.eps_run,
        )
        self._keys = {}  # (owner, member) -> journaled estimate
        self._heaps = {v: [[] for _ in range(k)] for v in graph.node_ids()}
        self.last_query_expansions = 0
        for owner, table in self.balls.initial_membership().items():
            j = self.assignment.priority_of(owner)
            for member, est in table.items():
                self._keys[(owner, member)] = est
                heapq.heappush(self._heaps[member][j], (est, owner))

    # -- witness heaps --------------------------------------------------------

    def _clean(self, v, j):
        heap = self._heaps[v][j]
        while heap and self._keys.get((heap[0][1], v)) != heap[0][0]:
            heapq.heappop(heap)

    def witness(self, v, j):
        """Cheapest priority-j owner whose ball contains v: (owner, estimate).

        Returns None when no such owner exists.  Ties in the estimate are
        broken by the smaller owner id.  Heap tops are kept fresh at update
        time, so this is read-only.
        """
        heap = self._heaps[v][j]
        if not heap:
            return None
        est, owner = heap[0]
        assert self._keys.get((owner, v)) == est, "stale witness heap top"
        return owner, est

    def _ingest(self, events):
        touched = set()
        for event in events:
            owner, member = event.owner, event.member
            j = self.assignment.priority_of(owner)
            if event.kind == LEAVE:
                self._keys.pop((owner, member), None)
            else:  # JOIN and EST both (re)key the pair
                self._keys[(owner, member)] = event.estimate
                heapq.heappush(self._heaps[member][j], (event.estimate, owner))
            touched.add((member, j))
        for v, j in touched:
            self._clean(v, j)
        if self.debug:
            self.check_heaps_against_journal()

    def check_heaps_against_journal(self):
        """Heap minima must equal brute-force minima over the journaled keys."""
        best = {}
        for (owner, member), est in self._keys.items():
            j = self.assignment.priority_of(owner)
            cur = best.get((member, j))
            if cur is None or (est, owner) < cur:
                best[(member, j)] = (est, owner)
        for v in self.graph.node_ids():
            for j in range(self.k):
                top = self.witness(v, j)
                want = best.get((v, j))
                assert top == (None if want is None else (want[1], want[0])), (
                    v,
                    j,
                    top,
                    want,
                )

    # -- updates ----------------------------------------------------------------

    def process_update(self, event):
        """Advance the graph, the balls, and the witness heaps by one change."""
        record = self.graph.apply_update(event)
        changes = self.balls.process_update(record)
        self._ingest(changes.events)

    # -- queries ----------------------------------------------------------------

    def query(self, u, v):
        """Approximate distance between u and v; inf when no witness chain."""
        assert self.graph.has_node(u) and self.graph.has_node(v)
        self.last_query_expansions = 0
        memo = {}

        def estimate_from(x):
            if x in memo:
                return memo[x]
            self.last_query_expansions += 1
            direct = self.balls.estimate(x, v)
            if direct != inf:
                result = direct
            else:
                result = inf
                for j in range(self.assignment.priority_of(x) + 1, self.k):
                    top = self.witness(x, j)
                    if top is None:
                        continue
                    owner, leg = top
                    tail = estimate_from(owner)
                    if leg + tail < result:
                        result = leg + tail
            memo[x] = result
            return result

        return estimate_from(u)


def apsp_init(graph, k, eps, seed, **overrides):
    return ApspState(graph, k, eps, seed, **overrides)


def apsp_process_update(state, event):
    state.process_update(event)


def apsp_query(state, u, v):
    return state.query(u, v)
