"""Dynamic weighted undirected graph under edge deletions and weight increases.

The graph is the single source of truth for the current edge set.  All
update-driven structures in this package consume ``ChangeRecord`` objects
produced by :meth:`DynamicGraph.apply_update`; the graph is mutated first,
then the records are forwarded to whatever trees/balls/stacks are listening.

Two lightweight views are provided:

* :class:`InducedSubgraphView` restricts a graph to a node subset.  It holds
  no edge data of its own, so parent mutations show through immediately.
* :class:`ArtificialSourceView` adds one virtual node connected by zero-weight
  edges to a fixed attachment set (used to measure distance to a node set via
  a single-source structure).

Both views support the same read protocol as ``DynamicGraph`` (``node_ids``,
``neighbors``, ``edges``, ``weight``, ``filter_record``), which is all the
shortest-path code needs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import inf


class GraphFormatError(ValueError):
    """Raised for malformed graph or update input."""


class UpdateError(ValueError):
    """Raised for updates that violate the decremental contract."""


@dataclass(frozen=True)
class UpdateEvent:
    """A requested change: delete an edge, or raise its weight to an absolute value."""

    kind: str  # "delete" | "increase"
    u: int
    v: int
    new_weight: int | None = None

    def key(self):
        a, b = self.u, self.v
        return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class QueryProbe:
    """A distance query interleaved into an update stream (``Q u v`` lines)."""

    u: int
    v: int


@dataclass(frozen=True)
class ChangeRecord:
    """What actually happened to the graph, as consumed by downstream structures."""

    kind: str  # "delete" | "increase"
    u: int
    v: int
    old_weight: int
    new_weight: int | None  # None for deletions
    version: int


class DynamicGraph:
    """Undirected graph with integer weights in [1, max_weight], decremental only."""

    def __init__(self, n, max_weight=1):
        assert n >= 0 and max_weight >= 1
        self.n = n
        self.max_weight = max_weight
        self.version = 0
        self.edge_count = 0
        self._adj = {}  # node -> {neighbor: weight}; absent node means isolated

    # -- construction -----------------------------------------------------

    def add_edge(self, u, v, w):
        """Insert an edge at build time (the update stream never inserts)."""
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise GraphFormatError("self-loop (%d, %d)" % (u, v))
        if not (1 <= w <= self.max_weight):
            raise GraphFormatError(
                "weight %r outside [1, %d] on edge (%d, %d)" % (w, self.max_weight, u, v)
            )
        if v in self._adj.get(u, ()):
            raise GraphFormatError("duplicate edge (%d, %d)" % (u, v))
        self._adj.setdefault(u, {})[v] = w
        self._adj.setdefault(v, {})[u] = w
        self.edge_count += 1

    def _check_node(self, u):
        if not (isinstance(u, int) and 0 <= u < self.n):
            raise GraphFormatError("node id %r outside [0, %d)" % (u, self.n))

    # -- read protocol ----------------------------------------------------

    def node_ids(self):
        return range(self.n)

    def node_count(self):
        return self.n

    def has_node(self, u):
        return 0 <= u < self.n

    def has_edge(self, u, v):
        return v in self._adj.get(u, ())

    def weight(self, u, v):
        return self._adj[u][v]

    def neighbors(self, u):
        """Iterate (neighbor, weight) pairs.  Snapshot before mutating."""
        return self._adj.get(u, {}).items()

    def degree(self, u):
        return len(self._adj.get(u, ()))

    def edges(self):
        """Yield (u, v, w) with u < v, deterministically."""
        for u in sorted(self._adj):
            for v, w in self._adj[u].items():
                if u < v:
                    yield (u, v, w)

    def filter_record(self, rec):
        return rec

    # -- mutation ---------------------------------------------------------

    def apply_update(self, event):
        """Apply one UpdateEvent; returns the ChangeRecord describing it."""
        u, v = event.u, event.v
        self._check_node(u)
        self._check_node(v)
        if not self.has_edge(u, v):
            raise UpdateError("edge (%d, %d) not present" % (u, v))
        old = self._adj[u][v]
        self.version += 1
        if event.kind == "delete":
            del self._adj[u][v]
            del self._adj[v][u]
            self.edge_count -= 1
            return ChangeRecord("delete", u, v, old, None, self.version)
        if event.kind == "increase":
            w = event.new_weight
            if not isinstance(w, int) or w <= old:
                raise UpdateError(
                    "increase on (%d, %d) must exceed current weight %d, got %r"
                    % (u, v, old, w)
                )
            if w > self.max_weight:
                raise UpdateError(
                    "increase on (%d, %d) to %d exceeds weight bound %d"
                    % (u, v, w, self.max_weight)
                )
            self._adj[u][v] = w
            self._adj[v][u] = w
            return ChangeRecord("increase", u, v, old, w, self.version)
        raise UpdateError("unknown update kind %r" % (event.kind,))


# -- file formats ----------------------------------------------------------


def load_graph(stream):
    """Parse the text graph format: header ``n m W``, then ``u v w`` lines.

    Blank lines and ``#`` comments are ignored.  Raises GraphFormatError with
    the offending line number on malformed input.
    """
    header = None
    graph = None
    seen = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 3:
                raise GraphFormatError("line %d: header must be 'n m W'" % lineno)
            try:
                n, m, w_max = (int(p) for p in parts)
            except ValueError:
                raise GraphFormatError("line %d: non-integer header field" % lineno)
            if n < 0 or m < 0 or w_max < 1:
                raise GraphFormatError("line %d: invalid header values" % lineno)
            header = (n, m, w_max)
            graph = DynamicGraph(n, w_max)
            continue
        if len(parts) != 3:
            raise GraphFormatError("line %d: edge must be 'u v w'" % lineno)
        try:
            u, v, w = (int(p) for p in parts)
        except ValueError:
            raise GraphFormatError("line %d: non-integer edge field" % lineno)
        try:
            graph.add_edge(u, v, w)
        except GraphFormatError as exc:
            raise GraphFormatError("line %d: %s" % (lineno, exc))
        seen += 1
    if header is None:
        raise GraphFormatError("empty graph input")
    if seen != header[1]:
        raise GraphFormatError("header announced %d edges, found %d" % (header[1], seen))
    return graph


def parse_update_stream(stream):
    """Parse update lines: ``D u v``, ``I u v w``, and query probes ``Q u v``."""
    out = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "D" and len(parts) == 3:
                out.append(UpdateEvent("delete", int(parts[1]), int(parts[2])))
            elif parts[0] == "I" and len(parts) == 4:
                out.append(
                    UpdateEvent("increase", int(parts[1]), int(parts[2]), int(parts[3]))
                )
            elif parts[0] == "Q" and len(parts) == 3:
                out.append(QueryProbe(int(parts[1]), int(parts[2])))
            else:
                raise ValueError
        except ValueError:
            raise GraphFormatError("line %d: malformed update %r" % (lineno, line.strip()))
    return out


# -- views ------------------------------------------------------------------


class InducedSubgraphView:
    """Read-only induced subgraph over a fixed node subset of a parent view."""

    def __init__(self, parent, nodes):
        self.parent = parent
        self.node_set = frozenset(nodes)
        self._ids = tuple(sorted(self.node_set))

    @property
    def max_weight(self):
        return self.parent.max_weight

    def node_ids(self):
        return self._ids

    def node_count(self):
        return len(self._ids)

    def has_node(self, u):
        return u in self.node_set

    def has_edge(self, u, v):
        return u in self.node_set and v in self.node_set and self.parent.has_edge(u, v)

    def weight(self, u, v):
        assert self.has_edge(u, v)
        return self.parent.weight(u, v)

    def neighbors(self, u):
        if u not in self.node_set:
            return
        for v, w in self.parent.neighbors(u):
            if v in self.node_set:
                yield (v, w)

    def degree(self, u):
        return sum(1 for _ in self.neighbors(u))

    def edges(self):
        for u in self._ids:
            for v, w in self.neighbors(u):
                if u < v:
                    yield (u, v, w)

    def filter_record(self, rec):
        if rec is None:
            return None
        rec = self.parent.filter_record(rec)
        if rec is None:
            return None
        if rec.u in self.node_set and rec.v in self.node_set:
            return rec
        return None


class ArtificialSourceView:
    """Parent view plus one virtual node joined to ``attach`` by zero-weight edges.

    The virtual node id is one past the largest parent id, exposed as
    ``source_id``.  The attachment set is frozen at construction; update
    records pass through untouched (they can only concern parent edges).
    """

    def __init__(self, parent, attach):
        self.parent = parent
        self.attach = tuple(sorted(set(attach)))
        parent_ids = list(parent.node_ids())
        self.source_id = (max(parent_ids) + 1) if parent_ids else 0
        for a in self.attach:
            assert parent.has_node(a), "attachment %r outside parent view" % (a,)
        self._attach_set = frozenset(self.attach)

    @property
    def max_weight(self):
        return self.parent.max_weight

    def node_ids(self):
        for u in self.parent.node_ids():
            yield u
        yield self.source_id

    def node_count(self):
        return self.parent.node_count() + 1

    def has_node(self, u):
        return u == self.source_id or self.parent.has_node(u)

    def has_edge(self, u, v):
        if u == self.source_id:
            return v in self._attach_set
        if v == self.source_id:
            return u in self._attach_set
        return self.parent.has_edge(u, v)

    def weight(self, u, v):
        if u == self.source_id or v == self.source_id:
            assert self.has_edge(u, v)
            return 0
        return self.parent.weight(u, v)

    def neighbors(self, u):
        if u == self.source_id:
            for a in self.attach:
                yield (a, 0)
            return
        for v, w in self.parent.neighbors(u):
            yield (v, w)
        if u in self._attach_set:
            yield (self.source_id, 0)

    def degree(self, u):
        if u == self.source_id:
            return len(self.attach)
        return self.parent.degree(u) + (1 if u in self._attach_set else 0)

    def edges(self):
        for e in self.parent.edges():
            yield e
        for a in self.attach:
            yield (a, self.source_id, 0)

    def filter_record(self, rec):
        return self.parent.filter_record(rec)


def induced_subgraph(graph, nodes):
    """Convenience constructor for the induced-subgraph view."""
    return InducedSubgraphView(graph, nodes)


# -- bounded Dijkstra --------------------------------------------------------


def dijkstra_bounded(view, source, bound):
    """Exact distances from ``source`` (node id, or ("set", nodes) for a virtual

    zero-weight source over a node set) up to and including ``bound``.
    Returns {node: distance} containing only nodes whose distance is <= bound.
    Nodes are never enqueued with a tentative distance above the bound, so the
    cost is proportional to the explored region only.
    """
    dist = {}
    heap = []
    if isinstance(source, tuple) and len(source) == 2 and source[0] == "set":
        for s in sorted(set(source[1])):
            heapq.heappush(heap, (0, s))
    else:
        assert view.has_node(source), "source %r outside view" % (source,)
        heapq.heappush(heap, (0, source))
    if bound < 0:
        return dist
    while heap:
        d, u = heapq.heappop(heap)
        if u in dist:
            continue
        dist[u] = d
        for v, w in view.neighbors(u):
            if v in dist:
                continue
            nd = d + w
            if nd <= bound:
                heapq.heappush(heap, (nd, v))
    return dist
