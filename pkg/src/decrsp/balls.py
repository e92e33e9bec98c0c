"""Approximate balls around every node, maintained under decremental updates.

Each node ``u`` of priority ``i`` watches its estimated distance to the node
set one priority level up, through a single-source contract instance rooted
at a virtual source attached to that set.  The watched value is bucketed on a
(1 + eps) scale; the bucket determines a search radius ``r(u)``.  Whenever the
radius grows, the node's *scope* ``R(u)`` (all nodes within the radius, found
by bounded Dijkstra on the current graph) is frozen anew and a fresh contract
instance is started on the induced subgraph.  The ball ``B(u)`` consists of
the scope members whose clamped estimate stays under ``alpha * depth + beta``
(finiteness, when depth is unbounded).

Estimates reported for a pair (u, v) never decrease: rebuilds may produce
smaller raw values (larger scope, fresh instance), and those are clamped away
against the running maximum.  All membership changes are journaled as JOIN /
LEAVE / EST events, sorted by (owner, member, kind), so downstream shortcut
graphs can replay them deterministically.

The contract factory must return objects exposing ``estimate(node)`` and
``process_update(record) -> [(node, new_estimate)]`` whose estimates never
underestimate true distances in the supplied view and never decrease.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf

from .graph import ArtificialSourceView, InducedSubgraphView, dijkstra_bounded
from .sampling import sample_priorities

JOIN, LEAVE, EST = "join", "leave", "est"
_KIND_RANK = {JOIN: 0, LEAVE: 1, EST: 2}


@dataclass(frozen=True)
class BallEvent:
    kind: str
    owner: int
    member: int
    estimate: object = None  # int | Fraction | inf; None for LEAVE

    def sort_key(self):
        return (self.owner, self.member, _KIND_RANK[self.kind])

    def line(self):
        """Dump format: ``JOIN u v est`` / ``LEAVE u v`` / ``EST u v new_est``."""
        if self.kind == LEAVE:
            return "LEAVE %d %d" % (self.owner, self.member)
        return "%s %d %d %s" % (self.kind.upper(), self.owner, self.member, self.estimate)


@dataclass(frozen=True)
class BallChangeSet:
    events: tuple

    def __bool__(self):
        return bool(self.events)

    def joins(self):
        return [e for e in self.events if e.kind == JOIN]

    def leaves(self):
        return [e for e in self.events if e.kind == LEAVE]

    def estimate_increases(self):
        return [e for e in self.events if e.kind == EST]


EMPTY_CHANGESET = BallChangeSet(())


class BallSystem:
    def __init__(self, view, assignment, contract_factory, *, alpha, beta, depth,
                 bucket_eps):
        self.view = view
        self.assign = assignment
        self.factory = contract_factory
        self.alpha = Fraction(alpha)
        self.beta = Fraction(beta)
        self.depth = depth  # int | Fraction | inf
        self.eps = Fraction(bucket_eps)
        assert self.alpha >= 1 and self.beta >= 0 and self.eps > 0
        self._growth = 1 + self.eps
        self.threshold = inf if depth == inf else self.alpha * depth + self.beta
        self._nodes = sorted(view.node_ids())
        self._prev_reported = {}  # (owner, member) -> last journaled estimate
        p = assignment.p
        # Distance-to-set watchers for levels 1 .. p-1.
        self._set_inst = {}
        self._set_est = {}
        for i in range(1, p):
            members = assignment.level_sets[i]
            self._set_est[i] = {}
            if not members:
                continue
            art = ArtificialSourceView(view, members)
            inst = contract_factory(art, art.source_id, depth)
            self._set_inst[i] = inst
            table = self._set_est[i]
            for u in self._nodes:
                val = inst.estimate(u)
                if val != inf:
                    table[u] = val
        # Per-node ball state.
        self._bucket = {}  # node -> (j, (1+eps)^j) once the watched value >= 2
        self._radius = {}
        self._scope = {}
        self._inner = {}
        self._est = {}  # node -> {member: clamped estimate}; doubles as history
        self._members = {}
        self.ever_members = {}  # node -> every member the ball has ever held
        self.rebuild_counts = {}
        self._static_singleton = set()
        for u in self._nodes:
            self.rebuild_counts[u] = 0
            if view.degree(u) == 0:
                # Isolated at start: stays a singleton forever (decremental).
                # Its watched value is inf, so the radius formula gives the
                # full depth; the scope is still just {u}.
                self._static_singleton.add(u)
                self._radius[u] = self.depth
                self._scope[u] = frozenset((u,))
                self._inner[u] = None
                self._est[u] = {u: 0}
                self._members[u] = {u}
                self.ever_members[u] = {u}
                continue
            self._radius[u] = -1  # forces the initial build below
            self._est[u] = {}
            self._members[u] = set()
            self.ever_members[u] = set()
            r = self._current_radius(u)
            self._build_scope(u, r, record=None)
            self.rebuild_counts[u] = 0  # the initial build is not an increase

    # -- radius bookkeeping ---------------------------------------------------

    def _watched_value(self, u):
        i = self.assign.priority_of(u)
        if i + 1 >= self.assign.p:
            return inf
        return self._set_est[i + 1].get(u, inf)

    def _current_radius(self, u):
        """Radius from the bucketed watched value; monotone as the value grows."""
        val = self._watched_value(u)
        if val == inf:
            return self.depth
        if val <= 1:
            return 0
        x = val - 1
        state = self._bucket.get(u)
        if state is None:
            state = (0, Fraction(1))
        j, power = state
        while power * self._growth <= x:
            power *= self._growth
            j += 1
        self._bucket[u] = (j, power)
        r = (power - self.beta) / self.alpha
        if r < 0:
            r = 0
        return min(r, self.depth)

    def radius(self, u):
        return self._radius[u]

    def scope(self, u):
        return self._scope[u]

    def members(self, u):
        return self._members[u]

    def estimate(self, u, v):
        """Current clamped estimate for v as seen from u (inf outside the ball)."""
        if v in self._members[u]:
            return self._est[u][v]
        return inf

    def membership(self, u):
        return set(self._members[u]), {v: self._est[u][v] for v in self._members[u]}

    def initial_membership(self):
        """Snapshot for journal replay: every ball's members with estimates."""
        return {u: {v: self._est[u][v] for v in self._members[u]} for u in self._nodes}

    def _is_member_value(self, val):
        if self.threshold == inf:
            return val != inf
        return val <= self.threshold

    # -- scope (re)construction -------------------------------------------------

    def _build_scope(self, u, new_radius, record):
        """Freeze a new scope for u and start a fresh inner instance.

        Emits JOIN / LEAVE / EST diffs against the previous ball into
        ``record`` (a list) when given.
        """
        self._radius[u] = new_radius
        self.rebuild_counts[u] += 1
        scope = frozenset(dijkstra_bounded(self.view, u, new_radius))
        self._scope[u] = scope
        inner = None
        if len(scope) > 1:
            inner = self.factory(InducedSubgraphView(self.view, scope), u, self.depth)
        self._inner[u] = inner
        history = self._est[u]
        old_members = self._members[u]
        new_members = set()
        for v in sorted(scope):
            raw = 0 if v == u else inner.estimate(v)
            if v in old_members:
                # A surviving membership keeps its journaled monotonicity.
                val = max(raw, history[v])
            else:
                # A (re)join starts a fresh lifetime: an estimate left over
                # from an earlier stay (possibly inf after the old frozen
                # scope lost its internal path) must not clamp it, or the
                # node could never rejoin a grown ball.
                val = raw
            history[v] = val
            if self._is_member_value(val):
                new_members.add(v)
        # _prev_reported tracks the last journaled value per pair, so EST
        # events fire exactly on visible increases of surviving members.
        if record is not None:
            for v in sorted(old_members - new_members):
                record.append(BallEvent(LEAVE, u, v))
                self._prev_reported.pop((u, v), None)
            for v in sorted(new_members - old_members):
                self._prev_reported[(u, v)] = history[v]
                record.append(BallEvent(JOIN, u, v, history[v]))
            for v in sorted(new_members & old_members):
                if history[v] > self._prev_reported[(u, v)]:
                    self._prev_reported[(u, v)] = history[v]
                    record.append(BallEvent(EST, u, v, history[v]))
        else:
            for v in new_members:
                self._prev_reported[(u, v)] = history[v]
        self._members[u] = new_members
        self.ever_members[u] |= new_members

    # -- updates -----------------------------------------------------------------

    def process_update(self, rec):
        """Digest one graph change; returns the journaled membership changes.

        Order inside the batch: set watchers first, then radius-driven scope
        rebuilds, then propagation into surviving inner instances.
        """
        rec = self.view.filter_record(rec)
        if rec is None:
            return EMPTY_CHANGESET
        events = []
        for i in sorted(self._set_inst):
            inst = self._set_inst[i]
            table = self._set_est[i]
            for node, val in inst.process_update(rec):
                if node not in self._est:  # skip the virtual source
                    continue
                old = table.get(node, inf)
                if old == inf:
                    continue  # never finite, or saturated: clamped at inf
                table[node] = max(old, val)
        rebuilt = set()
        for u in self._nodes:
            if u in self._static_singleton:
                continue
            new_r = self._current_radius(u)
            if new_r > self._radius[u]:
                self._build_scope(u, new_r, record=events)
                rebuilt.add(u)
        for u in self._nodes:
            if u in rebuilt or self._inner[u] is None:
                continue
            scope = self._scope[u]
            if rec.u not in scope or rec.v not in scope:
                continue
            for node, val in self._inner[u].process_update(rec):
                self._fold_inner(u, node, val, events)
        events.sort(key=BallEvent.sort_key)
        return BallChangeSet(tuple(events))

    def _fold_inner(self, u, v, new_val, events):
        history = self._est[u]
        old = history.get(v, 0)
        val = max(new_val, old)
        if val == old:
            return
        history[v] = val
        if v not in self._members[u]:
            return
        if self._is_member_value(val):
            if val > self._prev_reported[(u, v)]:
                events.append(BallEvent(EST, u, v, val))
                self._prev_reported[(u, v)] = val
        else:
            self._members[u].discard(v)
            self._prev_reported.pop((u, v), None)
            events.append(BallEvent(LEAVE, u, v))

    # -- structural witness (test support; needs true distances) -----------------

    def structural_witness(self, u, v, dist_fn):
        """Classify the pair: ("in_ball",...), ("witness", node, priority), or
        ("none",...).  ``dist_fn(x, y)`` must return true current distances."""
        if v in self._members[u]:
            return ("in_ball", None, None)
        i = self.assign.priority_of(u)
        a = self._growth * self.alpha
        b = self._growth * self.beta + 1
        x = dist_fn(u, v)
        for v2 in self._nodes:
            j = self.assign.priority_of(v2)
            if j <= i or u not in self._members[v2]:
                continue
            if dist_fn(u, v2) <= witness_reach(a, b, x, j - i):
                return ("witness", v2, j)
        return ("none", None, None)

    def witness_proviso_holds(self, u, v, dist_fn):
        """True when the structural property is required to hold for (u, v)."""
        x = dist_fn(u, v)
        if x == inf:
            return False
        i = self.assign.priority_of(u)
        chain = self.assign.p - 1 - i
        if chain == 0:
            return x <= self.depth
        a = self._growth * self.alpha
        b = self._growth * self.beta + 1
        return witness_reach(a, b, x, chain) <= self.depth

    def max_rebuilds_allowed(self):
        """Radius increases per node: one per bucket crossing plus slack."""
        if self.depth == inf:
            return inf
        count, power = 0, Fraction(1)
        while power < self.depth:
            power *= self._growth
            count += 1
        return count + 2


def radius_from_watched(val, eps, alpha, beta, depth):
    """Pure form of the search radius for a watched set-distance estimate:

    min(((1+eps)^floor(log_{1+eps}(val-1)) - beta) / alpha, depth), with the
    conventions val <= 1 -> 0 and val = inf -> depth, floored at zero.
    """
    if val == inf:
        return depth
    if val <= 1:
        return 0
    growth = 1 + Fraction(eps)
    x = val - 1
    power = Fraction(1)
    while power * growth <= x:
        power *= growth
    r = (power - Fraction(beta)) / Fraction(alpha)
    if r < 0:
        r = 0
    return min(r, depth)


def witness_reach(a, b, x, l):
    """Distance within which a higher-priority witness must exist, per chain

    length l >= 1: a * (a+1)^(l-1) * x + ((a+1)^l - 1) * b / a."""
    assert l >= 1
    if x == inf:
        return inf
    grow = (a + 1) ** (l - 1)
    return a * grow * x + (grow * (a + 1) - 1) * b / a


# -- module-level operation aliases --------------------------------------------


def balls_init(graph, p, eps, depth, alpha, beta, sssp_contract, seed, *, c=2.0):
    if not 0 < eps <= 1:
        raise ValueError("bucket growth eps must lie in (0, 1], got %r" % (eps,))
    assignment = sample_priorities(graph, p, c, seed)
    return BallSystem(
        graph,
        assignment,
        sssp_contract,
        alpha=alpha,
        beta=beta,
        depth=depth,
        bucket_eps=eps,
    )


def balls_radius(system, u):
    return system.radius(u)


def balls_process_update(system, rec):
    return system.process_update(rec)


def balls_membership(system, u):
    return system.membership(u)


def balls_structural_witness(system, u, v, dist_fn):
    return system.structural_witness(u, v, dist_fn)
