"""Layered range-restricted SSSP and the full-range scaled assembly.

Range-restricted part: a stack of layers indexed k = 0..q-2 over a range
parameter R.  Layer 0 is an exact bounded-depth tree.  Layer k >= 1 runs a
ball system whose distance watchers are layer-(k-1) instances, feeds the
ball journal into a shortcut graph covering depth D_k, and keeps a running
per-node minimum with its own layer-(k-1) companion.  Layer scales grow
geometrically: delta_k is the k-th q-th-root power of R and D_k the
(k+2)-nd, so the top layer covers the whole range.  Each layer multiplies
the stretch by at most (1 + 2*eps'), and eps' = eps / (2(q-2)) keeps the
composed stretch within 1 + eps.

Full-range part: one rounded/scaled mirror of the base graph per distance
band [2^i, 2^(i+1)] up to n*W, each running its own layer stack with range
R = 4n/eps.  A query reads one per-node min-heap seeded with the scaled
estimates of all bands; heap entries carry version tokens and stale tops
are cleaned when updates land, so a query is a single heap read.

The default layer count formula collapses below three layers at any
realistic desk scale; the stack then falls back to a single exact tree
over the whole range (correct, slower), and the p/q overrides exist so the
multi-layer machinery can be exercised on small graphs anyway.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import inf

from .balls import BallSystem
from .es_tree import EsTree
from .graph import ChangeRecord
from .hopset import (
    ParamConfigError,
    build_shortcut_graph,
    derive_params,
    integer_root_ceil,
    shortcut_process_update,
)
from .sampling import sample_priorities


def default_layer_counts(n, eps, a=4):
    """Priority count p and layer count q from the asymptotic formulas.

    p = floor(sqrt(log n) / sqrt(log(8 a^3 log n / eps))), q = floor(sqrt(p)).
    Returns (p, q); q < 3 at any desk scale, which triggers the fallback.
    """
    if n < 4:
        return 0, 0
    log_n = math.log2(n)
    denom = math.log2(8 * a**3 * log_n / float(eps))
    if denom <= 0:
        return 0, 0
    p = int(math.sqrt(log_n) / math.sqrt(denom))
    q = int(math.sqrt(p)) if p >= 0 else 0
    return p, q


def fraction_root_ceil(value, q):
    """Smallest integer x >= 1 with x**q >= value (value a Fraction >= 0)."""
    value = Fraction(value)
    if value <= 1:
        return 1
    x = max(1, round(float(value) ** (1.0 / q)))
    while x**q >= value:
        x -= 1
    while x**q < value:
        x += 1
    return x


def layer_scales(range_bound, q):
    """Per-layer (delta_k, depth_k) for k = 0..q-2.

    delta_k is the smallest integer whose q-th power reaches R^k and
    depth_k the smallest reaching R^(k+2); the top depth is exactly the
    rounded-up range, so the stack covers it completely.
    """
    R = Fraction(range_bound)
    scales = []
    for k in range(q - 1):
        delta = fraction_root_ceil(R**k, q)
        depth = fraction_root_ceil(R ** (k + 2), q)
        scales.append((delta, depth))
    return scales


@dataclass
class StackConfig:
    """Shared knobs for every instance spawned inside one layer stack."""

    p: int
    q: int
    c: float
    eps_prime: Fraction
    alphas: tuple  # alphas[k] = 1 + 2k*eps_prime
    scales: tuple  # scales[k] = (delta_k, depth_k)
    n: int
    debug: bool = False
    _seed_counter: int = 0

    def next_seed(self):
        self._seed_counter += 1
        return self._seed_counter


class LayerAssembly:
    """One recursive range-restricted SSSP instance at layer ``k``.

    Satisfies the ball-system contract: ``estimate(node)`` plus
    ``process_update(record) -> [(node, new_estimate)]`` with estimates
    that never underestimate and never decrease.
    """

    def __init__(self, config, k, view, root, depth):
        self.config = config
        self.k = k
        self.view = view
        self.root = root
        self.depth = depth
        if k == 0:
            self._exact = EsTree(view, root, depth)
            return
        delta_k, depth_k = config.scales[k]
        lower_depth = min(depth, config.scales[k - 1][1])
        self.lower = LayerAssembly(config, k - 1, view, root, lower_depth)
        self.assignment = sample_priorities(view, config.p, config.c, config.next_seed())
        alpha_prev = config.alphas[k - 1]
        self.balls = BallSystem(
            view,
            self.assignment,
            _layer_factory(config, k - 1),
            alpha=alpha_prev,
            beta=0,
            depth=config.scales[k - 1][1],
            bucket_eps=1,
        )
        self.params = derive_params(
            alpha_prev,
            0,
            2 * alpha_prev,
            1,
            config.eps_prime,
            config.p,
            delta_k,
            min(depth, depth_k),
            config.n,
            enforce_bound=False,
        )
        self.sg = build_shortcut_graph(view, self.balls, self.params, root, debug=config.debug)
        self._est = {
            v: min(self.lower.estimate(v), self.sg.estimate(v)) for v in view.node_ids()
        }

    def estimate(self, node):
        if self.k == 0:
            return self._exact.estimate(node)
        return self._est.get(node, inf)

    def process_update(self, record):
        if self.k == 0:
            return self._exact.process_update(record)
        touched = set()
        for node, _ in self.lower.process_update(record):
            touched.add(node)
        change_set = self.balls.process_update(record)
        for node, _ in shortcut_process_update(self.sg, record, change_set):
            touched.add(node)
        out = []
        for node in sorted(touched):
            value = min(self.lower.estimate(node), self.sg.estimate(node))
            old = self._est[node]
            if value != old:
                assert value > old, "layer estimates must never decrease"
                self._est[node] = value
                out.append((node, value))
        return out


def _layer_factory(config, k):
    if k == 0:
        return EsTree
    return lambda view, root, depth: LayerAssembly(config, k, view, root, depth)


class LayerStack:
    """Range-restricted SSSP front end: layered when q >= 3, exact otherwise."""

    def __init__(
        self,
        view,
        source,
        range_bound,
        eps,
        *,
        p=None,
        q=None,
        c=2.0,
        seed=0,
        allow_fallback=True,
        debug=False,
    ):
        n = view.node_count()
        eps = Fraction(eps)
        if not (0 < eps <= 1):
            raise ParamConfigError("need 0 < eps <= 1, got %s" % (eps,))
        if Fraction(range_bound) < n:
            raise ParamConfigError(
                "range %s must be at least the node count %d" % (range_bound, n)
            )
        self.view = view
        self.source = source
        self.range_bound = Fraction(range_bound)
        self.eps = eps
        default_p, default_q = default_layer_counts(n, eps)
        self.p = default_p if p is None else p
        self.q = default_q if q is None else q
        if self.q < 3:
            if not allow_fallback:
                raise ParamConfigError(
                    "layer count q=%d is below 3 and fallback is disabled" % (self.q,)
                )
            self.mode = "exact"
            self.top = EsTree(view, source, math.ceil(self.range_bound))
            return
        if self.p < 2:
            raise ParamConfigError(
                "layered mode needs priority count p >= 2, got %d" % (self.p,)
            )
        self.mode = "layered"
        eps_prime = eps / (2 * (self.q - 2))
        alphas = tuple(1 + 2 * k * eps_prime for k in range(self.q - 1))
        scales = tuple(layer_scales(self.range_bound, self.q))
        root_bound = integer_root_ceil(n, self.p)
        for k in range(1, self.q - 1):
            if root_bound * scales[k][0] > scales[k - 1][1]:
                raise ParamConfigError(
                    "scale ladder too tight at layer %d: %d * %d > %d"
                    % (k, root_bound, scales[k][0], scales[k - 1][1])
                )
        self.config = StackConfig(
            p=self.p,
            q=self.q,
            c=c,
            eps_prime=eps_prime,
            alphas=alphas,
            scales=scales,
            n=n,
            debug=debug,
            _seed_counter=seed * 1_000_003,
        )
        self.top = LayerAssembly(self.config, self.q - 2, view, source, scales[-1][1])

    def estimate(self, node):
        return self.top.estimate(node)

    def process_update(self, record):
        return self.top.process_update(record)


def build_layer_stack(view, source, range_bound, eps, **overrides):
    return LayerStack(view, source, range_bound, eps, **overrides)


class MirrorGraph:
    """Dict-backed weighted graph used for scaled mirrors.

    Unlike the primary graph container this accepts arbitrary integer node
    ids (subgraph views keep their original labels) and zero weights (the
    virtual attachment edges of a distance-to-set view scale to zero), and
    only ever shrinks: edges are deleted or re-weighted upward.
    """

    def __init__(self, nodes, max_weight):
        self._nodes = sorted(nodes)
        self._node_set = frozenset(self._nodes)
        self.max_weight = max_weight
        self.version = 0
        self._adj = {}

    def add_edge(self, u, v, w):
        assert u in self._node_set and v in self._node_set and u != v and w >= 0
        assert v not in self._adj.get(u, ())
        self._adj.setdefault(u, {})[v] = w
        self._adj.setdefault(v, {})[u] = w

    def node_ids(self):
        return iter(self._nodes)

    def node_count(self):
        return len(self._nodes)

    def has_node(self, u):
        return u in self._node_set

    def has_edge(self, u, v):
        return v in self._adj.get(u, ())

    def weight(self, u, v):
        return self._adj[u][v]

    def neighbors(self, u):
        return self._adj.get(u, {}).items()

    def degree(self, u):
        return len(self._adj.get(u, ()))

    def edges(self):
        for u in sorted(self._adj):
            for v, w in self._adj[u].items():
                if u < v:
                    yield (u, v, w)

    def filter_record(self, rec):
        return rec

    def delete_edge(self, u, v):
        old = self._adj[u].pop(v)
        del self._adj[v][u]
        self.version += 1
        return ChangeRecord("delete", u, v, old, None, self.version)

    def increase_edge(self, u, v, w):
        old = self._adj[u][v]
        assert w > old, "mirror weight must strictly increase"
        self._adj[u][v] = w
        self._adj[v][u] = w
        self.version += 1
        return ChangeRecord("increase", u, v, old, w, self.version)


class ScaledMirror:
    """A rounded, scaled copy of a graph view for one distance band."""

    def __init__(self, view, phi):
        self.phi = Fraction(phi)
        self.graph = MirrorGraph(view.node_ids(), self._scale(view.max_weight))
        for u, v, w in view.edges():
            self.graph.add_edge(u, v, self._scale(w))

    def _scale(self, weight):
        return math.ceil(Fraction(weight) / self.phi)

    def translate(self, record):
        """Mirror one base change; returns the mirror record or None.

        A weight increase whose scaled value is unchanged is absorbed by
        the rounding and produces no mirror traffic.
        """
        if record.kind == "delete":
            return self.graph.delete_edge(record.u, record.v)
        scaled = self._scale(record.new_weight)
        if scaled == self.graph.weight(record.u, record.v):
            return None
        return self.graph.increase_edge(record.u, record.v, scaled)


class FullRangeSssp:
    """Single-source (1+eps)-approximate distances over the full range.

    One scaled mirror per distance band, each under its own layer stack at
    a third of the requested error (two rounding/stack factors compose to
    at most 1 + eps), and per-node min-heaps over the per-band estimates
    so that a query is exactly one heap read.

    Works on any read-protocol view; updates arrive as already-applied
    change records, so instances can also serve as the distance contract
    inside a ball system.
    """

    def __init__(self, view, source, eps, *, p=None, q=None, c=2.0, seed=0, debug=False):
        self.view = view
        self.source = source
        self.eps = Fraction(eps)
        if not (0 < self.eps <= 1):
            raise ParamConfigError("need 0 < eps <= 1, got %s" % (self.eps,))
        self.eps_inner = self.eps / 3
        n = view.node_count()
        self.range_bound = 4 * n / self.eps_inner
        band_count = max(1, (n * view.max_weight).bit_length())
        self.mirrors = []
        self.stacks = []
        for i in range(band_count):
            phi = self.eps_inner * 2**i / n
            mirror = ScaledMirror(view, phi)
            stack = LayerStack(
                mirror.graph,
                source,
                self.range_bound,
                self.eps_inner,
                p=p,
                q=q,
                c=c,
                seed=seed * 1_000_003 + i,
                debug=debug,
            )
            self.mirrors.append(mirror)
            self.stacks.append(stack)
        self.debug = debug
        self.heap_reads = 0
        self._tokens = {v: [0] * band_count for v in view.node_ids()}
        self._heaps = {}
        self._current = {}
        for v in view.node_ids():
            entries = [
                (self._band_value(i, v), i, 0) for i in range(band_count)
            ]
            heapq.heapify(entries)
            self._heaps[v] = entries
            self._current[v] = entries[0][0]

    def _band_value(self, i, node):
        est = self.stacks[i].estimate(node)
        return inf if est == inf else est * self.mirrors[i].phi

    def _refresh_top(self, node):
        heap = self._heaps[node]
        tokens = self._tokens[node]
        while heap and heap[0][2] != tokens[heap[0][1]]:
            heapq.heappop(heap)

    def query(self, node):
        """Current estimate; exactly one heap read."""
        self.heap_reads += 1
        return self._heaps[node][0][0]

    estimate = query

    def apply_event(self, event):
        """Apply an update to the owned base graph and digest it."""
        return self.process_update(self.view.apply_update(event))

    def process_update(self, record):
        """Digest one already-applied change; returns sorted changed (node, value)."""
        record = self.view.filter_record(record)
        if record is None:
            return []
        touched = set()
        for i, (mirror, stack) in enumerate(zip(self.mirrors, self.stacks)):
            mirror_record = mirror.translate(record)
            if mirror_record is None:
                continue
            phi = mirror.phi
            for node, value in stack.process_update(mirror_record):
                token = self._tokens[node][i] + 1
                self._tokens[node][i] = token
                entry = (inf if value == inf else value * phi, i, token)
                heapq.heappush(self._heaps[node], entry)
                touched.add(node)
        out = []
        for node in sorted(touched):
            self._refresh_top(node)
            if self.debug:
                band_count = len(self.stacks)
                fresh = min(self._band_value(i, node) for i in range(band_count))
                assert self._heaps[node][0][0] == fresh
            value = self._heaps[node][0][0]
            if value != self._current[node]:
                self._current[node] = value
                out.append((node, value))
        return out


def build_full_range(graph, source, eps, **overrides):
    return FullRangeSssp(graph, source, eps, **overrides)
