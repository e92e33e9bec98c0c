"""Shortcut-augmented single-source distances on a rounded, scaled multigraph.

Pipeline: a live ball system over the base graph contributes one shortcut
edge per (owner, member) pair, weighted by the owner's distance estimate.
Shortcuts are overlaid on the base edges as parallel multigraph edges (the
effective weight between two endpoints is then automatically the minimum
over live parallel keys).  Any edge heavier than the admission cap is left
out.  Every admitted weight is divided by the rounding grain ``phi`` and
rounded up to an integer, and a monotone single-source tree runs on the
result; distance estimates are tree levels multiplied back by ``phi``.

The parameter block precomputes the coupled series of radii ``r_i``, reach
bounds ``s_i``, weight budgets ``w_i`` and additive-error terms ``gamma_i``
in exact rational arithmetic, asserts their closed-form identities at
construction, and derives the level cap and weight cap.  Rounding trades a
``phi`` additive error per hop for a much smaller level cap; the hop budget
``hop_budget`` bounds how many hops the intended routes need, which keeps
the total rounding error below ``eps * dist + 2 * eps * delta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf

from .monotone_tree import MonotoneEsTree


class ParamConfigError(ValueError):
    """Raised when the parameter block violates its preconditions."""


def integer_root_ceil(n, p):
    """Smallest integer x >= 1 with x**p >= n."""
    assert n >= 1 and p >= 1
    if n == 1:
        return 1
    x = max(1, round(n ** (1.0 / p)))
    while x**p >= n:
        x -= 1
    while x**p < n:
        x += 1
    return x


@dataclass(frozen=True)
class ParamSeries:
    """Exact-rational parameter block for one shortcut-graph instance.

    ``alpha``/``beta`` bound the shortcut-edge weights against true
    distances, ``a``/``b`` bound the watcher estimates used for radius
    detection, ``eps`` is the error budget, ``p`` the number of priority
    levels, ``delta`` the base distance scale and ``depth`` the distance
    range this instance must cover.
    """

    alpha: Fraction
    beta: Fraction
    a: Fraction
    b: Fraction
    eps: Fraction
    p: int
    delta: int
    depth: int
    n: int
    admissible: bool  # whether the priority-count bound held
    phi: Fraction  # rounding grain eps*delta/(p+1)
    root_bound: int  # smallest integer x with x**p >= n
    weight_cap: int  # depth + root_bound*delta; heavier edges stay out
    level_cap: int  # monotone-tree cutoff
    r: tuple  # per-priority radii, r[0] = delta
    s: tuple  # per-priority reach bounds s_i = a*r_i + b
    w: tuple  # per-priority weight budgets w_i = alpha*s_i + beta
    gamma: tuple  # per-priority additive error terms, gamma[p-1] = beta
    gamma_total: Fraction  # gamma[0] + 2*eps*delta

    def round_weight(self, weight):
        """Scaled integer weight: smallest k with k*phi >= weight."""
        q = Fraction(weight) / self.phi
        return -((-q.numerator) // q.denominator)

    def hop_budget(self, dist, i):
        """Hop allowance for a node of priority i at the given distance.

        Equals (p+1) * ceil(max(dist - r_i, 0) / delta) + p + 1 - i; the
        root itself has budget 0.  ``dist`` may be inf (budget inf).
        """
        assert 0 <= i < self.p
        if dist == inf:
            return inf
        over = Fraction(dist) - self.r[i]
        blocks = 0
        if over > 0:
            blocks = -((-over.numerator) // (over.denominator * self.delta))
        return (self.p + 1) * blocks + self.p + 1 - i

    def rounding_budget_ok(self, dist, i):
        """Total rounding error stays below eps*dist + 2*eps*delta."""
        if dist == inf:
            return True
        return self.hop_budget(dist, i) * self.phi <= self.eps * dist + 2 * self.eps * self.delta


def max_admissible_priority_count(a, eps, n):
    """Largest p >= 2 satisfying the balancing bound, or None."""
    base = 4 * Fraction(a) ** 3 / Fraction(eps)
    if base**4 > n:
        return None
    p = 2
    while base ** ((p + 1) * (p + 1)) <= n:
        p += 1
    return p


def derive_params(alpha, beta, a, b, eps, p, delta, depth, n, *, enforce_bound=True):
    """Build the exact parameter series and assert its identities.

    Preconditions: 1 <= alpha <= a, 0 <= beta <= b, 0 < eps <= 1,
    b <= delta <= depth, p >= 2 an integer, and (unless ``enforce_bound``
    is off) the priority-count bound (4a^3/eps)^(p^2) <= n.  With the
    bound off, the level cap is raised to cover plain base-graph paths of
    weight up to ``depth`` so that estimates stay finite without the
    shortcut-density guarantee.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    a, b, eps = Fraction(a), Fraction(b), Fraction(eps)
    if not (1 <= alpha <= a):
        raise ParamConfigError("need 1 <= alpha <= a, got alpha=%s a=%s" % (alpha, a))
    if not (0 <= beta <= b):
        raise ParamConfigError("need 0 <= beta <= b, got beta=%s b=%s" % (beta, b))
    if not (0 < eps <= 1):
        raise ParamConfigError("need 0 < eps <= 1, got %s" % (eps,))
    if not (isinstance(p, int) and p >= 2):
        raise ParamConfigError("priority count p must be an integer >= 2, got %r" % (p,))
    if not (b <= delta):
        raise ParamConfigError("distance scale delta=%s must be >= b=%s" % (delta, b))
    if not (delta <= depth):
        raise ParamConfigError("depth=%s must be >= delta=%s" % (depth, delta))
    if n < 2:
        raise ParamConfigError("need at least two nodes, got n=%d" % (n,))

    base = 4 * a**3 / eps
    admissible = base ** (p * p) <= n
    if enforce_bound and not admissible:
        best = max_admissible_priority_count(a, eps, n)
        if best is None:
            hint = "no p >= 2 is admissible for n=%d" % (n,)
        else:
            hint = "maximum admissible p is %d" % (best,)
        raise ParamConfigError(
            "priority count p=%d violates (4a^3/eps)^(p^2) <= n; %s" % (p, hint)
        )

    coef = alpha + 1 + eps
    r, s, w = [], [], []
    acc = Fraction(0)  # running sum of w[j] for j < i
    for i in range(p):
        r.append(Fraction(delta) if i == 0 else (coef * acc + beta) / eps)
        s.append(a * r[i] + b)
        w.append(alpha * s[i] + beta)
        acc += w[i]
    gamma = [Fraction(0)] * p
    gamma[p - 1] = beta
    for i in range(p - 2, -1, -1):
        gamma[i] = gamma[i + 1] + coef * w[i]
    gamma_total = gamma[0] + 2 * eps * delta

    # Identities the rest of the construction leans on.  The radius/error
    # correspondence and the radius closed form are only claimed from the
    # first derived radius onwards; r[0] is pinned to delta by definition
    # and does not satisfy either in general.
    assert gamma[p - 1] == beta
    wsum = Fraction(0)
    for i in range(p):
        if i >= 1:
            assert eps * r[i] == gamma[0] - gamma[i] + beta
            bound_r = (
                3 * 4 ** (i - 1) * a ** (3 * i) * delta
                + (9 * 4 ** (i - 1) - 2) * a ** (3 * i - 1) * b
            ) / eps**i
            assert r[i] <= bound_r
        wsum += w[i]
        bound_w = (
            4**i * a ** (3 * i + 2) * delta + (3 * 4**i - 1) * a ** (3 * i + 1) * b
        ) / eps**i
        assert wsum <= bound_w
    if admissible:
        # Consequences of the priority-count bound, checked without real
        # roots by raising both sides to the p-th power.
        assert ((a * gamma_total + b) / (eps * delta)) ** p <= n
        assert ((a * r[p - 1] + b) / delta) ** p <= n

    root_bound = integer_root_ceil(n, p)
    phi = eps * delta / (p + 1)
    lvl_main = (alpha + 2 * eps) * depth / phi
    level_cap = -((-lvl_main.numerator) // lvl_main.denominator) + (p + 1) * root_bound
    if not admissible:
        plain = Fraction(depth) / phi
        level_cap = max(level_cap, -((-plain.numerator) // plain.denominator) + n + 1)
    weight_cap = depth + root_bound * delta

    return ParamSeries(
        alpha=alpha,
        beta=beta,
        a=a,
        b=b,
        eps=eps,
        p=p,
        delta=delta,
        depth=depth,
        n=n,
        admissible=admissible,
        phi=phi,
        root_bound=root_bound,
        weight_cap=weight_cap,
        level_cap=level_cap,
        r=tuple(r),
        s=tuple(s),
        w=tuple(w),
        gamma=tuple(gamma),
        gamma_total=gamma_total,
    )


class ShortcutGraph:
    """Base edges plus ball shortcuts, scaled, under a monotone tree.

    Parallel edges are kept under distinct keys: base edges as
    ``("G", u, v)`` with u < v, shortcut edges as ``("F", owner, member,
    generation)``.  The generation counter makes re-joins (a member that
    left an owner's ball and later rejoined) produce fresh keys, since the
    tree treats each key as one edge lifetime.

    ``edges_ever`` counts keys ever admitted to the tree and
    ``update_ops`` counts tree operations (insert/increase/delete);
    together they bound the tree's total work.
    """

    def __init__(self, view, balls, params, root, *, debug=False):
        self.view = view
        self.balls = balls
        self.params = params
        self.root = root
        self.debug = debug
        self._g_weight = {}  # (u, v) sorted -> live base weight
        self._f_weight = {}  # (owner, member) -> live shortcut weight
        self._f_gen = {}  # (owner, member) -> generation of current/last key
        self._admitted = {}  # tree key -> rounded weight currently in tree
        self.edges_ever = 0
        self.update_ops = 0
        self.increase_counts = {}  # tree key -> number of weight increases

        edges = []
        for u, v, weight in view.edges():
            pair = (u, v) if u < v else (v, u)
            self._g_weight[pair] = weight
            if weight <= params.weight_cap:
                key = ("G",) + pair
                rounded = params.round_weight(weight)
                edges.append((key, pair[0], pair[1], rounded))
                self._admitted[key] = rounded
        for owner, table in balls.initial_membership().items():
            for member, estimate in table.items():
                if member == owner:
                    continue
                self._f_weight[(owner, member)] = estimate
                self._f_gen[(owner, member)] = 0
                if estimate <= params.weight_cap:
                    key = ("F", owner, member, 0)
                    rounded = params.round_weight(estimate)
                    edges.append((key, owner, member, rounded))
                    self._admitted[key] = rounded
        self.edges_ever = len(edges)
        self.tree = MonotoneEsTree(root, params.level_cap, edges, debug=debug)

    # -- reads ----------------------------------------------------------------

    def estimate(self, node):
        level = self.tree.level_of(node)
        return inf if level == inf else level * self.params.phi

    def estimates(self):
        """Current finite estimates as a dict node -> value."""
        phi = self.params.phi
        return {u: lev * phi for u, lev in self.tree.level.items()}

    def dump_scaled_edges(self):
        """Live scaled edges in the graph file format (one line per edge)."""
        lines = ["p %d %d" % (len(set(self.view.node_ids())), len(self._admitted))]
        for key in sorted(self._admitted, key=repr):
            if key[0] == "G":
                _, u, v = key
            else:
                _, u, v, _gen = key
            lines.append("e %d %d %d" % (u, v, self._admitted[key]))
        return "\n".join(lines) + "\n"

    # -- internal edge traffic --------------------------------------------------

    def _tree_insert(self, key, u, v, weight):
        rounded = self.params.round_weight(weight)
        self.tree.insert_edge(key, u, v, rounded)
        self._admitted[key] = rounded
        self.edges_ever += 1
        self.update_ops += 1

    def _tree_delete(self, key, u):
        self.tree.delete_edge(key, u)
        del self._admitted[key]
        self.update_ops += 1

    def _tree_reweight(self, key, u, weight):
        """Feed a raw-weight change; rounding may absorb it entirely."""
        if weight > self.params.weight_cap:
            self._tree_delete(key, u)
            return
        rounded = self.params.round_weight(weight)
        if rounded > self._admitted[key]:
            self.tree.increase_edge(key, u, rounded)
            self._admitted[key] = rounded
            self.update_ops += 1
            self.increase_counts[key] = self.increase_counts.get(key, 0) + 1

    # -- debug checks -------------------------------------------------------------

    def check_sandwich(self):
        """Every admitted edge weight w satisfies w <= phi*scaled <= w + phi."""
        phi = self.params.phi
        for key, rounded in self._admitted.items():
            if key[0] == "G":
                raw = self._g_weight[(key[1], key[2])]
            else:
                raw = self._f_weight[(key[1], key[2])]
            assert raw <= self.params.weight_cap
            assert raw <= phi * rounded <= raw + phi, (key, raw, rounded)

    def check_shortcut_mirror(self):
        """Shortcut pairs coincide with live ball memberships."""
        expected = set()
        for owner in self.view.node_ids():
            members, _ = self.balls.membership(owner)
            expected |= {(owner, v) for v in members if v != owner}
        assert set(self._f_weight) == expected


def build_shortcut_graph(view, balls, params, root, *, debug=False):
    """Materialize the scaled shortcut graph and its monotone tree."""
    return ShortcutGraph(view, balls, params, root, debug=debug)


def shortcut_process_update(sg, record, ball_changes):
    """Feed one base-graph change plus its ball fallout; report new estimates.

    Tree traffic goes in one batch: shortcut insertions first, then the
    base-graph deletion/increase, then shortcut weight increases and
    removals.  Returns the sorted list of (node, estimate) pairs whose
    estimate changed (estimate may be inf).
    """
    params = sg.params
    tree = sg.tree
    tree.begin_batch()

    for ev in ball_changes.joins():
        if ev.member == ev.owner:
            continue
        pair = (ev.owner, ev.member)
        gen = sg._f_gen.get(pair, -1) + 1
        sg._f_gen[pair] = gen
        sg._f_weight[pair] = ev.estimate
        if ev.estimate <= params.weight_cap:
            sg._tree_insert(("F", ev.owner, ev.member, gen), ev.owner, ev.member, ev.estimate)

    rec = sg.view.filter_record(record) if record is not None else None
    if rec is not None:
        pair = (rec.u, rec.v) if rec.u < rec.v else (rec.v, rec.u)
        key = ("G",) + pair
        if rec.kind == "delete":
            del sg._g_weight[pair]
            if key in sg._admitted:
                sg._tree_delete(key, pair[0])
        else:
            sg._g_weight[pair] = rec.new_weight
            if key in sg._admitted:
                sg._tree_reweight(key, pair[0], rec.new_weight)

    for ev in ball_changes.estimate_increases():
        if ev.member == ev.owner:
            continue
        pair = (ev.owner, ev.member)
        sg._f_weight[pair] = ev.estimate
        key = ("F", ev.owner, ev.member, sg._f_gen[pair])
        if key in sg._admitted:
            sg._tree_reweight(key, pair[0], ev.estimate)

    for ev in ball_changes.leaves():
        if ev.member == ev.owner:
            continue
        pair = (ev.owner, ev.member)
        del sg._f_weight[pair]
        key = ("F", ev.owner, ev.member, sg._f_gen[pair])
        if key in sg._admitted:
            sg._tree_delete(key, pair[0])

    changes = tree.end_batch()
    if sg.debug:
        sg.check_sandwich()
        sg.check_shortcut_mirror()
    phi = params.phi
    return [(node, inf if lev == inf else lev * phi) for node, lev in changes]
