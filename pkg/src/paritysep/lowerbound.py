"""Lower-bound lab: universal trees extracted from separating automata.

Any accessible safety automaton that strongly separates even-graph words
from limsup-odd words carries a chain of linear quasi-orders on its
non-rejecting states (one per odd priority level, each refining the
next).  That chain reads as an ordered tree whose leaves inject into the
states, and the tree is universal, which bounds every such separator from
below.  This module extracts the chain constructively via resistance
counting, builds the induced tree, generates the adversarial even graphs
and highly repetitive words that drive the universality argument, and
wraps everything into validation and lower-bound reports.
"""

from __future__ import annotations

import json
import math
import random
from collections import deque
from dataclasses import dataclass, field

from .automata import REJECT, SafetyAutomaton, accepts_lasso
from .games import GameGraph, Lasso, is_even_graph, sample_even_lassos, tarjan_scc
from .trees import count_trees, g_value, is_universal, leaf_count, leaves, random_tree


@dataclass(frozen=True)
class OddCycleWitness:
    """A reject-free reachable cycle with odd maximum priority.

    Its lasso is accepted but limsup-odd, certifying that the automaton is
    not a strong separator for any n.
    """

    states: tuple
    period: tuple
    prefix: tuple = ()

    @property
    def lasso(self) -> Lasso:
        return Lasso(self.prefix, self.period)


@dataclass
class TreeDecomposition:
    """Ordered partitions of the non-rejecting states, one per odd level.

    ``levels[j]`` lists the equivalence classes of the j-th quasi-order in
    increasing order; each class at level j sits inside a unique class at
    level j+2 (``nesting``).  Reading priority p never increases any order
    above p, and odd p strictly decreases every order at or below p.
    """

    d: int
    levels: dict
    index: dict = field(repr=False)

    def nesting(self, j):
        """Class index at level j -> containing class index at level j+2."""
        up = self.index[j + 2]
        return tuple(up[cls[0]] for cls in self.levels[j])


def make_accessible(A: SafetyAutomaton) -> SafetyAutomaton:
    """Restrict to states reachable by reject-free runs from the initial state.

    States only reachable through the sink behave like the sink on every
    input, so redirecting them there preserves the language.
    """
    if A.initial == REJECT:
        return SafetyAutomaton.from_table(A.d, REJECT, {}, rejecting=())
    reached = {A.initial}
    queue = deque([A.initial])
    order = [A.initial]
    while queue:
        q = queue.popleft()
        for a in range(1, A.d + 1):
            for t in A.step(q, a):
                if t != REJECT and t not in reached:
                    reached.add(t)
                    order.append(t)
                    queue.append(t)
    table = {}
    for q in order:
        for a in range(1, A.d + 1):
            table[(q, a)] = tuple(t if t in reached else REJECT for t in A.step(q, a))
    return SafetyAutomaton.from_table(A.d, A.initial, table)


def _is_accessible(A: SafetyAutomaton) -> bool:
    reached = {A.initial} - {REJECT}
    queue = deque(reached)
    while queue:
        q = queue.popleft()
        for a in range(1, A.d + 1):
            for t in A.step(q, a):
                if t != REJECT and t not in reached:
                    reached.add(t)
                    queue.append(t)
    return reached == set(A.nonrejecting_states())


def resistance(A: SafetyAutomaton, class_states, p_odd: int):
    """Max count of priority-p_odd edges on paths inside a class, per state.

    Only transitions with both endpoints in ``class_states`` and letters
    at most ``p_odd`` participate.  If that sub-automaton contains any
    cycle with odd maximum letter the counts are unbounded and the cycle
    comes back as an OddCycleWitness instead.
    """
    states = list(class_states)
    pos = {q: i for i, q in enumerate(states)}
    edges = []
    for q in states:
        for a in range(1, p_odd + 1):
            for t in A.step(q, a):
                if t in pos:
                    edges.append((pos[q], a, pos[t]))

    for q_odd in range(p_odd, 0, -2):
        adj = [[] for _ in states]
        marked = []
        for u, a, v in edges:
            if a <= q_odd:
                adj[u].append(v)
                if a == q_odd:
                    marked.append((u, v))
        if not marked:
            continue
        comp_of = {}
        sizes = {}
        for ci, comp in enumerate(tarjan_scc(adj)):
            for v in comp:
                comp_of[v] = ci
            sizes[ci] = len(comp)
        for u, v in marked:
            if comp_of[u] == comp_of[v] and (sizes[comp_of[u]] > 1 or u == v):
                cycle_states, period = _extract_cycle(states, edges, q_odd, u, v, comp_of)
                return OddCycleWitness(tuple(cycle_states), tuple(period))

    adj = [[] for _ in states]
    for u, a, v in edges:
        adj[u].append(v)
    comps = tarjan_scc(adj)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    comp_succ = [set() for _ in comps]
    weight = {}
    for u, a, v in edges:
        cu, cv = comp_of[u], comp_of[v]
        if cu != cv:
            comp_succ[cu].add(cv)
            w = 1 if a == p_odd else 0
            weight[(cu, cv)] = max(weight.get((cu, cv), 0), w)
    value = [0] * len(comps)
    for ci in _topo_reverse(comp_succ):
        best = 0
        for cj in comp_succ[ci]:
            best = max(best, weight[(ci, cj)] + value[cj])
        value[ci] = best
    return {states[i]: value[comp_of[i]] for i in range(len(states))}


def _extract_cycle(states, edges, q_odd, u, v, comp_of):
    """Close the cycle: the (u, q_odd, v) edge plus a path v -> u inside the component."""
    if u == v:
        return [states[u]], [q_odd]
    target_comp = comp_of[u]
    parent = {v: None}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        if x == u:
            break
        for a2, y in ((a, y) for (x2, a, y) in edges if x2 == x and a <= q_odd):
            if comp_of[y] == target_comp and y not in parent:
                parent[y] = (x, a2)
                queue.append(y)
    path_letters = []
    path_states = [u]
    x = u
    while parent[x] is not None:
        px, a = parent[x]
        path_letters.append(a)
        path_states.append(px)
        x = px
    path_letters.reverse()
    path_states.reverse()
    return path_states, [q_odd] + path_letters


def _topo_reverse(comp_succ):
    n = len(comp_succ)
    indeg = [0] * n
    for targets in comp_succ:
        for t in targets:
            indeg[t] += 1
    queue = [i for i in range(n) if indeg[i] == 0]
    topo = []
    while queue:
        v = queue.pop()
        topo.append(v)
        for t in comp_succ[v]:
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    return reversed(topo)


def extract_decomposition(A: SafetyAutomaton, d=None):
    """Build the chain of quasi-orders, or return an odd-cycle witness.

    Levels are refined top-down: within each class of the level above,
    states are regrouped by resistance against the next odd priority,
    lower resistance first.  The three decomposition conditions are
    re-verified by a full transition scan before returning.
    """
    if d is None:
        d = A.d
    if not _is_accessible(A):
        raise ValueError("automaton not accessible; run make_accessible first")
    states = A.nonrejecting_states()
    levels = {d + 1: (tuple(states),)}
    for j in range(d - 1, 0, -2):
        new_level = []
        for cls in levels[j + 2]:
            res = resistance(A, cls, j)
            if isinstance(res, OddCycleWitness):
                return _with_access_prefix(A, res)
            buckets = {}
            for q in cls:
                buckets.setdefault(res[q], []).append(q)
            for value in sorted(buckets):
                new_level.append(tuple(buckets[value]))
        levels[j] = tuple(new_level)
    index = {
        j: {q: i for i, cls in enumerate(levels[j]) for q in cls} for j in levels
    }
    dec = TreeDecomposition(d=d, levels=levels, index=index)
    problem = check_decomposition(A, dec)
    if problem is not None:
        raise RuntimeError("extracted decomposition violates its own conditions: %s" % problem)
    return dec


def _with_access_prefix(A, witness: OddCycleWitness) -> OddCycleWitness:
    """Attach a reject-free access path from the initial state to the cycle."""
    target = witness.states[0]
    if A.initial == target:
        return witness
    parent = {A.initial: None}
    queue = deque([A.initial])
    while queue:
        q = queue.popleft()
        if q == target:
            break
        for a in range(1, A.d + 1):
            for t in A.step(q, a):
                if t != REJECT and t not in parent:
                    parent[t] = (q, a)
                    queue.append(t)
    letters = []
    q = target
    while parent[q] is not None:
        pq, a = parent[q]
        letters.append(a)
        q = pq
    letters.reverse()
    return OddCycleWitness(witness.states, witness.period, tuple(letters))


def check_decomposition(A: SafetyAutomaton, dec: TreeDecomposition):
    """Scan every transition against the decomposition conditions.

    Returns None when all hold, else a short description of the first
    violation.  Condition 1: no letter climbs an order above it;
    condition 2: an odd letter strictly descends every order at or below
    it; condition 3: the top level is a single class.
    """
    d = dec.d
    if len(dec.levels[d + 1]) != 1:
        return "top level is not a single class"
    odd_levels = list(range(1, d + 2, 2))
    for q in A.nonrejecting_states():
        for a in range(1, d + 1):
            for t in A.step(q, a):
                if t == REJECT:
                    continue
                for j in odd_levels:
                    qi, ti = dec.index[j][q], dec.index[j][t]
                    if j > a and qi < ti:
                        return "letter %d climbs level %d on (%r -> %r)" % (a, j, q, t)
                    if a % 2 and j <= a and qi <= ti:
                        return "odd letter %d fails to descend level %d on (%r -> %r)" % (
                            a,
                            j,
                            q,
                            t,
                        )
    return None


def d_tree(A: SafetyAutomaton, dec: TreeDecomposition):
    """Ordered tree of nested classes, with one representative state per leaf.

    Branching directions at level j are the classes of the j-th order
    nested inside the parent class, in order; leaves are the level-1
    classes and map injectively to states by picking each class's first
    state in the automaton's enumeration order.
    """
    d = dec.d
    state_pos = {q: i for i, q in enumerate(A.states())}

    def children_of(j, cls_idx):
        if j == 1:
            return None
        below = []
        for i, cls in enumerate(dec.levels[j - 2]):
            if dec.index[j][cls[0]] == cls_idx:
                below.append(i)
        return below

    def build(j, cls_idx, path):
        kids = children_of(j, cls_idx)
        if kids is None:
            cls = dec.levels[1][cls_idx]
            rep = min(cls, key=lambda q: state_pos[q])
            leaf_map[path] = rep
            return ()
        return tuple(build(j - 2, k, path + (pos,)) for pos, k in enumerate(kids))

    leaf_map = {}
    tree = build(d + 1, 0, ())
    return tree, leaf_map


def build_gt(t, d: int) -> GameGraph:
    """Even graph mirroring an ordered tree.

    One vertex per leaf (in leaf order).  Leaves meeting at truncation
    level p (always even) get a forward edge of priority p and a backward
    edge of priority p-1; every vertex carries self-loops of every even
    priority in 2..d.  All cycles are even by construction.
    """
    lvs = leaves(t)
    if any(len(leaf) != d // 2 for leaf in lvs):
        raise ValueError("tree leaves must all have depth d/2 = %d" % (d // 2,))
    n = len(lvs)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            common = 0
            for a, b in zip(lvs[i], lvs[j]):
                if a != b:
                    break
                common += 1
            p = d - 2 * common
            edges.append((i, j, p))
            edges.append((j, i, p - 1))
    for v in range(n):
        for p in range(2, d + 1, 2):
            edges.append((v, v, p))
    return GameGraph(n, edges, d)


@dataclass
class AdversarialFamily:
    """Streaming adversarial word for a tree, with its realizing path.

    The word interleaves the children's words with odd separators and
    repeats each block ``repetitions`` times before an even closer; the
    full stream ends in twos forever.  ``alpha_length`` counts the
    aperiodic part.
    """

    tree: tuple
    d: int
    repetitions: int
    graph: GameGraph = field(repr=False)
    alpha_length: int

    def letters(self):
        yield from _alpha_letters(self.tree, self.d // 2, self.repetitions)
        while True:
            yield 2

    @property
    def start_vertex(self):
        return leaf_count(self.tree) - 1

    def steps(self):
        """Yields (letter, vertex-after-letter), aligned with ``letters``."""
        n = leaf_count(self.tree)
        last = yield from _alpha_path(self.tree, self.d // 2, self.repetitions, 0, n)
        while True:
            yield (2, last)


def alpha_word(t, d: int, r: int) -> AdversarialFamily:
    """Adversarial family for a full-depth tree with repetition parameter r >= 1."""
    if r < 1:
        raise ValueError("repetition parameter must be >= 1")
    graph = build_gt(t, d)

    def alen(node):
        if not node:
            return 0
        return sum(blen(c) for c in node) + (len(node) - 1)

    def blen(node):
        if not node:
            return 0
        return r * (alen(node) + 1)

    return AdversarialFamily(t, d, r, graph, alen(t))


def _alpha_letters(node, k, r):
    for i in range(len(node) - 1, -1, -1):
        yield from _beta_letters(node[i], k - 1, r)
        if i:
            yield 2 * k - 1


def _beta_letters(node, k, r):
    if not node:
        return
    for _ in range(r):
        yield from _alpha_letters(node, k, r)
        yield 2 * k


def _alpha_path(node, k, r, lo, hi):
    """Yields (letter, vertex) along the alpha path; returns the final vertex."""
    if not node:
        return hi - 1
    spans = []
    acc = lo
    for ch in node:
        c = leaf_count(ch)
        spans.append((ch, acc, acc + c))
        acc += c
    cur = hi - 1
    for i in range(len(node) - 1, -1, -1):
        ch, clo, chi = spans[i]
        cur = yield from _beta_path(ch, k - 1, r, clo, chi)
        if i:
            nxt = spans[i - 1][2] - 1
            yield (2 * k - 1, nxt)
            cur = nxt
    return cur


def _beta_path(node, k, r, lo, hi):
    if not node:
        return hi - 1
    start = hi - 1
    for _ in range(r):
        yield from _alpha_path(node, k, r, lo, hi)
        yield (2 * k, start)
    return start


@dataclass
class Section:
    name: str
    status: str
    checked: int
    witness: object = None

    def to_dict(self):
        out = {"name": self.name, "status": self.status, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = _witness_dict(self.witness)
        return out


def _witness_dict(w):
    if isinstance(w, Lasso):
        return {"prefix": list(w.prefix), "period": list(w.period)}
    if isinstance(w, OddCycleWitness):
        return {"prefix": list(w.prefix), "period": list(w.period)}
    if isinstance(w, dict):
        return w
    return {"detail": str(w)}


@dataclass
class ValidationReport:
    verdict: str
    sections: list

    def to_dict(self):
        return {"verdict": self.verdict, "sections": [s.to_dict() for s in self.sections]}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def random_even_graph(n: int, d: int, rng) -> GameGraph:
    """Random even graph on n vertices: the graph of a random tree, thinned.

    Cross edges get dropped at random where out-degree allows; subgraphs
    of an even graph stay even.
    """
    g = build_gt(random_tree(n, d // 2, rng), d)
    keep = []
    out_deg = {v: 0 for v in range(g.n)}
    for src, dst, pri in g.edges:
        out_deg[src] += 1
    for src, dst, pri in g.edges:
        if src != dst and out_deg[src] > 1 and rng.random() < 0.3:
            out_deg[src] -= 1
            continue
        keep.append((src, dst, pri))
    return GameGraph(g.n, keep, d)


def validate_separator(
    A: SafetyAutomaton,
    n: int,
    d: int,
    budget: int = 10**6,
    lasso_count: int = 100,
    stream_trees: int = 3,
    seed: int = 0,
) -> ValidationReport:
    """Empirical three-part check of the strong (n, d)-separator contract.

    (a) lassos from closed walks of sampled even graphs and of graphs
    derived from random trees must be accepted; (b) adversarial word
    prefixes with the repetition parameter set to the automaton's size
    must stay reject-free within the letter budget; (c) every short
    odd-limsup period must be rejected.  PASS is evidence, never proof;
    any FAIL carries a concrete witness.
    """
    rng = random.Random(seed)
    sections = []

    # (a) closed-walk lassos from even graphs; the bushy graphs carry the
    # longest odd runs an n-vertex even graph can produce, so they get a
    # fixed share of the samples
    checked = 0
    witness = None
    bushy = build_gt(_bushy_tree(n, d // 2), d)
    weighted = [(bushy, max(1, lasso_count // 4))]
    if n > 1:
        loop_free = GameGraph(bushy.n, [e for e in bushy.edges if e[0] != e[1]], d)
        weighted.append((loop_free, max(1, lasso_count // 4)))
    rest = max(1, lasso_count - sum(c for _, c in weighted))
    randoms = [random_even_graph(n, d, rng) for _ in range(max(1, lasso_count // 20))]
    weighted += [(g, max(1, rest // len(randoms))) for g in randoms]
    for g, quota in weighted:
        for w in sample_even_lassos(g, quota, rng_seed=rng.randrange(2**30)):
            checked += 1
            if not accepts_lasso(A, w):
                witness = w
                break
        if witness:
            break
    sections.append(
        Section("even-lassos", "fail" if witness else "pass", checked, witness)
    )

    # (b) adversarial stream prefixes, r = |A|
    r = A.state_count
    status = "pass"
    witness = None
    consumed = 0
    family_trees = [_bushy_tree(n, d // 2)]
    while len(family_trees) < stream_trees:
        family_trees.append(random_tree(n, d // 2, rng))
    for t in family_trees:
        fam = alpha_word(t, d, r)
        current = {A.initial} - {REJECT}
        complete = True
        for a in fam.letters():
            if consumed >= budget:
                complete = False
                break
            consumed += 1
            current = {x for q in current for x in A.step(q, a) if x != REJECT}
            if not current:
                status = "fail"
                witness = {"tree_leaves": leaf_count(t), "rejected_after": consumed}
                break
            if consumed >= budget:
                complete = False
                break
        if status == "fail":
            break
        if not complete:
            status = "inconclusive"
            break
    sections.append(Section("alpha-streams", status, consumed, witness))

    # (c) short odd periods must be rejected
    checked = 0
    witness = None
    periods = []
    for length in (1, 2, 3):
        periods.extend(
            p
            for p in _all_words(d, length)
            if max(p) % 2 == 1
        )
    for _ in range(50):
        length = rng.randint(4, 8)
        p = tuple(rng.randint(1, d) for _ in range(length))
        if max(p) % 2 == 1:
            periods.append(p)
    for p in periods:
        w = Lasso((), p)
        checked += 1
        if accepts_lasso(A, w):
            witness = w
            break
    sections.append(Section("odd-lassos", "fail" if witness else "pass", checked, witness))

    verdict = "FAIL" if any(s.status == "fail" for s in sections) else "PASS"
    return ValidationReport(verdict, sections)


def _bushy_tree(n, h):
    """Root with n children, each a unary path: maximizes top-level odd runs."""
    path = ()
    for _ in range(h - 1):
        path = (path,)
    return (path,) * n if h >= 1 else ()


def _all_words(d, length):
    import itertools

    return itertools.product(range(1, d + 1), repeat=length)


@dataclass
class LowerBoundReport:
    verdict: str
    leaf_total: int = 0
    nonrejecting: int = 0
    binom_bound: int = 0
    g_bound: int = 0
    universal: object = None
    witness: object = None

    def to_dict(self):
        out = {
            "verdict": self.verdict,
            "counts": {
                "L": self.leaf_total,
                "Q": self.nonrejecting,
                "B": self.binom_bound,
                "g": self.g_bound,
            },
            "universal": self.universal,
        }
        if self.witness is not None:
            out["witness"] = _witness_dict(self.witness)
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def lower_bound_report(
    A: SafetyAutomaton, n: int, d: int, universality_cap: int = 3000
) -> LowerBoundReport:
    """Run the extraction pipeline and compare against the size bounds.

    Reports the extracted tree's leaf count L, the non-rejecting state
    count Q (always L <= Q), the binomial bound B and recurrence value g,
    and, at small parameters, whether the extracted tree is
    (n, d/2)-universal.  An odd-cycle witness short-circuits into a
    "not a strong separator" verdict.
    """
    acc = make_accessible(A)
    dec = extract_decomposition(acc, d)
    if isinstance(dec, OddCycleWitness):
        return LowerBoundReport(verdict="not-a-strong-separator", witness=dec)
    tree, leaf_map = d_tree(acc, dec)
    L = leaf_count(tree)
    Q = len(acc.nonrejecting_states())
    floor_lg = n.bit_length() - 1
    B = math.comb(floor_lg + d // 2 - 1, floor_lg)
    gval = g_value(n, d // 2)
    universal = None
    if count_trees(n, d // 2) <= universality_cap and L <= 100_000:
        universal = is_universal(tree, n, d // 2)
    verdict = "ok" if L <= Q and (universal is not False) else "violated"
    return LowerBoundReport(
        verdict=verdict,
        leaf_total=L,
        nonrejecting=Q,
        binom_bound=B,
        g_bound=gval,
        universal=universal,
    )
