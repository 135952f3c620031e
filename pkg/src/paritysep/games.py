"""Parity game graphs, play encodings, and even-graph analysis.

Games are played on finite directed graphs with *edge* priorities in
``1..d`` (``d`` even).  Player Even wins a play when the highest priority
seen infinitely often is even.  A graph is *even* when every cycle in it
has even maximum priority; words read off walks in small even graphs are
the positive instances every separating automaton in this package must
accept.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

EVEN = 0
ODD = 1


def _smallest_even_bound(max_priority: int) -> int:
    d = max(2, max_priority)
    return d if d % 2 == 0 else d + 1


class GameGraph:
    """Directed graph with edge priorities in ``1..d`` and no ownership.

    Vertices are ``0..n-1``.  Out-degree zero is representable (it shows
    up in restricted subgraphs); operations that need to extend a walk
    raise on dead ends instead of silently stopping.
    """

    def __init__(self, n, edges, d=None):
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        uniq = []
        for src, dst, pri in edges:
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError("edge (%s, %s, %s) out of vertex range" % (src, dst, pri))
            if pri < 1:
                raise ValueError("priority %s < 1 on edge (%s, %s)" % (pri, src, dst))
            e = (src, dst, pri)
            if e not in seen:
                seen.add(e)
                uniq.append(e)
        self.n = n
        self.edges = tuple(sorted(uniq))
        max_pri = max((p for _, _, p in self.edges), default=1)
        self.d = _smallest_even_bound(max_pri) if d is None else d
        if self.d % 2 != 0 or self.d < max_pri:
            raise ValueError("d=%s is not an even upper bound on priorities" % (self.d,))
        succ = [[] for _ in range(n)]
        for src, dst, pri in self.edges:
            succ[src].append((dst, pri))
        self.succ = tuple(tuple(s) for s in succ)

    def out_degree(self, v):
        return len(self.succ[v])

    def __repr__(self):
        return "%s(n=%d, d=%d, edges=%d)" % (type(self).__name__, self.n, self.d, len(self.edges))


class ParityGame(GameGraph):
    """Game graph plus per-vertex ownership (EVEN or ODD).

    Every vertex must have at least one outgoing edge.
    """

    def __init__(self, owner, edges, d=None):
        owner = tuple(owner)
        if any(o not in (EVEN, ODD) for o in owner):
            raise ValueError("owners must be EVEN (0) or ODD (1)")
        super().__init__(len(owner), edges, d)
        self.owner = owner
        for v in range(self.n):
            if not self.succ[v]:
                raise ValueError("vertex %d has no outgoing edge" % v)

    def vertices_of(self, player):
        return [v for v in range(self.n) if self.owner[v] == player]


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic word ``prefix . period^omega`` over ``1..d``."""

    prefix: tuple
    period: tuple

    def __post_init__(self):
        if not self.period:
            raise ValueError("lasso period must be nonempty")
        for a in self.prefix + self.period:
            if a < 1:
                raise ValueError("letters must be positive priorities")


def classify_lasso(w: Lasso) -> int:
    """Winner of ``w`` by limsup parity: EVEN iff max letter of the period is even."""
    return EVEN if max(w.period) % 2 == 0 else ODD


def parse_pgsolver(text: str) -> ParityGame:
    """Parse the vertex-priority PGSolver format into an edge-priority game.

    Each edge inherits the priority of its source vertex.  Priority 0 is
    not representable here, so if the input uses it every priority is
    shifted by +2, which preserves parity and order.
    """
    stmts = [s.strip() for s in text.split(";")]
    stmts = [s for s in stmts if s]
    if not stmts or not stmts[0].startswith("parity"):
        raise ValueError("missing 'parity N;' header")
    head = stmts[0].split()
    if len(head) != 2 or not head[1].isdigit():
        raise ValueError("malformed header: %r" % (stmts[0],))
    n = int(head[1])
    if n < 1:
        raise ValueError("game needs at least one vertex")

    prio = {}
    owner = {}
    succs = {}
    for stmt in stmts[1:]:
        parts = stmt.split(None, 4)
        if len(parts) < 3:
            raise ValueError("malformed line: %r" % (stmt,))
        try:
            vid, vprio, vowner = int(parts[0]), int(parts[1]), int(parts[2])
            targets = [int(t) for t in parts[3].split(",")] if len(parts) >= 4 else []
        except ValueError:
            raise ValueError("malformed line: %r" % (stmt,)) from None
        if len(parts) == 5 and not parts[4].startswith('"'):
            raise ValueError("malformed line: %r" % (stmt,))
        if not 0 <= vid < n:
            raise ValueError("vertex id %d outside 0..%d" % (vid, n - 1))
        if vid in prio:
            raise ValueError("vertex %d defined twice" % vid)
        if vprio < 0:
            raise ValueError("negative priority on vertex %d" % vid)
        if vowner not in (0, 1):
            raise ValueError("owner of vertex %d must be 0 or 1" % vid)
        prio[vid] = vprio
        owner[vid] = vowner
        succs[vid] = targets

    for v in range(n):
        if v not in prio:
            raise ValueError("vertex %d not defined" % v)
        if not succs[v]:
            raise ValueError("vertex %d has no outgoing edge" % v)
        for t in succs[v]:
            if t not in prio:
                raise ValueError("vertex %d has dangling successor %d" % (v, t))

    shift = 2 if any(p == 0 for p in prio.values()) else 0
    edges = [(v, t, prio[v] + shift) for v in range(n) for t in succs[v]]
    return ParityGame([owner[v] for v in range(n)], edges)


def game_to_json(g) -> str:
    """Serialize a game or graph to the JSON dump format."""
    obj = {
        "n": g.n,
        "d": g.d,
        "owner": list(g.owner) if isinstance(g, ParityGame) else None,
        "edges": [{"src": s, "dst": t, "pri": p} for s, t, p in g.edges],
    }
    return json.dumps(obj, sort_keys=True)


def game_from_json(text: str):
    obj = json.loads(text)
    edges = [(e["src"], e["dst"], e["pri"]) for e in obj["edges"]]
    if obj.get("owner") is None:
        return GameGraph(obj["n"], edges, obj["d"])
    return ParityGame(obj["owner"], edges, obj["d"])


def strategy_subgraph(game: ParityGame, sigma) -> GameGraph:
    """Subgraph keeping all Odd edges and exactly the sigma edge per Even vertex.

    ``sigma`` maps every Even vertex to one of its ``(target, priority)``
    out-edges.
    """
    kept = []
    for v in range(game.n):
        if game.owner[v] == ODD:
            kept.extend((v, u, p) for u, p in game.succ[v])
        else:
            if v not in sigma:
                raise ValueError("strategy missing Even vertex %d" % v)
            u, p = sigma[v]
            if (u, p) not in game.succ[v]:
                raise ValueError("strategy names non-edge (%d, %d, %d)" % (v, u, p))
            kept.append((v, u, p))
    for v in sigma:
        if game.owner[v] != EVEN:
            raise ValueError("strategy assigns non-Even vertex %d" % v)
    return GameGraph(game.n, kept, game.d)


def tarjan_scc(succ):
    """Strongly connected components of an adjacency structure.

    ``succ[v]`` is an iterable of successor vertices.  Returns a list of
    components (each a list of vertices) and leaves the component order
    unspecified.  Iterative, so safe on deep graphs.
    """
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                elif on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def is_even_graph(g: GameGraph) -> bool:
    """True iff no cycle of ``g`` has odd maximum priority.

    For each odd priority p, restrict to edges of priority <= p and look
    for a priority-p edge inside a strongly connected component.
    """
    for p in range(1, g.d + 1, 2):
        succ = [[] for _ in range(g.n)]
        p_edges = []
        for src, dst, pri in g.edges:
            if pri <= p:
                succ[src].append(dst)
                if pri == p:
                    p_edges.append((src, dst))
        if not p_edges:
            continue
        comp_of = {}
        for i, comp in enumerate(tarjan_scc(succ)):
            for v in comp:
                comp_of[v] = i
        comp_size = {}
        for v, c in comp_of.items():
            comp_size[c] = comp_size.get(c, 0) + 1
        for src, dst in p_edges:
            if comp_of[src] == comp_of[dst] and (comp_size[comp_of[src]] > 1 or src == dst):
                return False
    return True


def _random_walk(g: GameGraph, start, steps, rng):
    word = []
    path = [start]
    v = start
    for _ in range(steps):
        if not g.succ[v]:
            raise ValueError("walk reached dead-end vertex %d" % v)
        u, p = rng.choice(g.succ[v])
        word.append(p)
        path.append(u)
        v = u
    return word, path


def sample_even_path_words(g: GameGraph, count: int, length: int, rng_seed: int = 0):
    """Priority projections of random walks in an even graph.

    Deterministic for a fixed seed.  Raises if ``g`` is not even: the
    point of these words is that they extend to plays won decisively by
    Even.
    """
    if not is_even_graph(g):
        raise ValueError("graph is not even")
    rng = random.Random(rng_seed)
    out = []
    for _ in range(count):
        word, _ = _random_walk(g, rng.randrange(g.n), length, rng)
        out.append(tuple(word))
    return out


def sample_even_lassos(g: GameGraph, count: int, rng_seed: int = 0):
    """Lassos read off random closed walks of an even graph.

    Walk until a vertex repeats; the portion between the two visits is
    the period.  Every resulting lasso is a play in ``g``, hence a word
    any strong separator for ``g``'s parameters must accept.
    """
    if not is_even_graph(g):
        raise ValueError("graph is not even")
    rng = random.Random(rng_seed)
    out = []
    for _ in range(count):
        v = rng.randrange(g.n)
        seen = {v: 0}
        word = []
        path = [v]
        while True:
            if not g.succ[v]:
                raise ValueError("walk reached dead-end vertex %d" % v)
            u, p = rng.choice(g.succ[v])
            word.append(p)
            path.append(u)
            if u in seen:
                j = seen[u]
                out.append(Lasso(tuple(word[:j]), tuple(word[j:])))
                break
            seen[u] = len(path) - 1
            v = u
    return out


def random_game(n: int, max_priority: int, rng_seed: int = 0, max_out: int = 3) -> ParityGame:
    """Seeded random parity game with n vertices and priorities <= max_priority."""
    rng = random.Random(rng_seed)
    owner = [rng.choice((EVEN, ODD)) for _ in range(n)]
    edges = []
    for v in range(n):
        deg = rng.randint(1, max_out)
        targets = rng.sample(range(n), min(deg, n))
        for t in targets:
            edges.append((v, t, rng.randint(1, max_priority)))
    return ParityGame(owner, edges)
