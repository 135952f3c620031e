"""Parity game solvers: recursive oracle, safety-game reduction, lifting.

Three routes to the same winning sets, kept deliberately independent so
they can cross-check each other: a classical recursive solver, the
reduction through a chained product with a separating safety automaton,
and progress-measure lifting over a universal tree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automata import REJECT, ParityAutomaton, SafetyAutomaton
from .games import EVEN, ODD, GameGraph, ParityGame, strategy_subgraph, tarjan_scc
from .trees import CapExceeded, FullTreeIndex, LeafIndex, truncation_length


@dataclass
class SafetyGame:
    """Two-player safety game: the safety player loses on touching unsafe."""

    vertices: tuple
    owner: dict
    succ: dict
    unsafe: frozenset


@dataclass
class Solution:
    """Partition into winning sets with positional strategies on them."""

    even_wins: frozenset
    odd_wins: frozenset
    even_strategy: dict
    odd_strategy: dict


@dataclass
class SeparationSolution:
    """Result of solving through a separator product.

    Even's strategy is finite-memory: the memory is the automaton state,
    and ``even_product_strategy`` maps Even-owned product vertices to the
    chosen product successor.  Odd's positional strategy comes from the
    recursive oracle, since the product only certifies Even's side.
    """

    even_wins: frozenset
    odd_wins: frozenset
    even_product_strategy: dict
    odd_strategy: dict
    product_vertices: int
    automaton_states: int


TOP = "TOP"


@dataclass
class LiftResult:
    """Least-fixpoint labelling: vertices off TOP are Even's winning set."""

    even_wins: frozenset
    even_strategy: dict
    labelling: dict
    lift_count: int


def chained_product(game: ParityGame, A: SafetyAutomaton, reachable_from=None, cap=2_000_000):
    """Safety game running A on the priorities of the plays of ``game``.

    Deterministic A: vertices (v, q) stepping to (u, delta(q, p)).  A
    nondeterministic A inserts an Even-owned intermediate (u, q, p) per
    move so Even resolves the automaton's choices online.  With
    ``reachable_from`` set to an iterable of start vertices, only the
    product part reachable from (v, A.initial) is built; otherwise the
    full vertex set is materialized.
    """
    if A.d < game.d:
        raise ValueError("alphabet mismatch: automaton reads up to %d, game emits %d" % (A.d, game.d))

    succ = {}
    owner = {}
    unsafe = set()

    if reachable_from is None:
        if game.n * A.state_count > cap:
            raise CapExceeded(
                "full product needs %d vertices (cap %d); pass reachable_from"
                % (game.n * A.state_count, cap)
            )
        frontier = [(v, q) for v in range(game.n) for q in A.states()]
        explore_all = True
    else:
        frontier = [(v, A.initial) for v in reachable_from]
        explore_all = False

    seen = set(frontier)
    queue = deque(frontier)
    while queue:
        node = queue.popleft()
        if len(seen) > cap:
            raise CapExceeded("product exceeded %d vertices" % cap)
        if len(node) == 2:
            v, q = node
            owner[node] = game.owner[v]
            if q == REJECT:
                unsafe.add(node)
                succ[node] = (node,)
                continue
            targets = []
            for u, p in game.succ[v]:
                if A.deterministic:
                    targets.append((u, A.dstep(q, p)))
                else:
                    targets.append((u, q, p))
            succ[node] = tuple(targets)
        else:
            u, q, p = node
            owner[node] = EVEN
            succ[node] = tuple((u, t) for t in A.step(q, p))
        for t in succ[node]:
            if t not in seen:
                seen.add(t)
                queue.append(t)

    vertices = tuple(succ)
    return SafetyGame(vertices, owner, succ, frozenset(unsafe))


def solve_safety(sg: SafetyGame, safety_player=EVEN):
    """Winning set and positional strategy for the safety player.

    The opponent's attractor to the unsafe set is computed backwards with
    out-degree counters; the safety player wins everywhere else and any
    edge staying outside the attractor is a winning move.
    """
    pred = {v: [] for v in sg.vertices}
    degree = {}
    for v in sg.vertices:
        degree[v] = len(sg.succ[v])
        for t in sg.succ[v]:
            pred[t].append(v)

    reach = ODD if safety_player == EVEN else EVEN
    attr = set(sg.unsafe)
    queue = deque(sg.unsafe)
    while queue:
        t = queue.popleft()
        for v in pred[t]:
            if v in attr:
                continue
            if sg.owner[v] == reach:
                attr.add(v)
                queue.append(v)
            else:
                degree[v] -= 1
                if degree[v] == 0:
                    attr.add(v)
                    queue.append(v)

    winning = frozenset(v for v in sg.vertices if v not in attr)
    strategy = {}
    for v in winning:
        if sg.owner[v] == safety_player:
            for t in sg.succ[v]:
                if t not in attr:
                    strategy[v] = t
                    break
    return winning, strategy


def solve_by_separation(game: ParityGame, A: SafetyAutomaton, cap=2_000_000) -> SeparationSolution:
    """Winning sets of ``game`` via the chained-product safety game.

    Even wins from v exactly when the safety player wins from
    (v, A.initial); correct whenever A is a strong separator for the
    game's parameters (good-for-separation if nondeterministic).
    """
    sg = chained_product(game, A, reachable_from=range(game.n), cap=cap)
    safe, strategy = solve_safety(sg)
    even_wins = frozenset(v for v in range(game.n) if (v, A.initial) in safe)
    odd_wins = frozenset(range(game.n)) - even_wins
    oracle = zielonka(game)
    odd_strategy = {v: e for v, e in oracle.odd_strategy.items() if v in odd_wins}
    return SeparationSolution(
        even_wins=even_wins,
        odd_wins=odd_wins,
        even_product_strategy=strategy,
        odd_strategy=odd_strategy,
        product_vertices=len(sg.vertices),
        automaton_states=A.state_count,
    )


def _leaf_index_for(game, tree):
    index = tree if isinstance(tree, (LeafIndex, FullTreeIndex)) else LeafIndex(tree)
    if index.height != game.d // 2:
        raise ValueError("tree height %d does not match d/2 = %d" % (index.height, game.d // 2))
    return index


def lift_solve(game: ParityGame, tree, max_lifts=None) -> LiftResult:
    """Progress-measure lifting over the leaves of a universal tree.

    Labels start at the least leaf and only ever grow, so the work-list
    iteration reaches the least simultaneous fixpoint of the per-vertex
    lift operator.  For an edge of priority p the edge constraint asks
    for the least leaf whose p-truncation is >= (even p) or > (odd p) the
    successor label's truncation, TOP when the tree is exhausted; Even
    vertices take the cheapest edge, Odd vertices the dearest.  Vertices
    left below TOP form Even's winning set and the labelling restricted
    there is a progress measure for the returned strategy.
    """
    index = _leaf_index_for(game, tree)
    d = game.d
    out = []
    for v in range(game.n):
        edges = []
        for u, p in game.succ[v]:
            edges.append((u, p, truncation_length(p, d), p % 2 == 1))
        out.append(tuple(edges))
    preds = [[] for _ in range(game.n)]
    for v in range(game.n):
        for u, _, _, _ in out[v]:
            preds[u].append(v)
    preds = [tuple(dict.fromkeys(ps)) for ps in preds]

    bottom = index.min_leaf
    mu = [bottom] * game.n
    lifts = 0

    def edge_need(v, u, p, tlen, strict):
        lab = mu[u]
        if lab is TOP:
            return TOP
        ref = lab[:tlen]
        nxt = index.min_gt(p, ref) if strict else index.min_geq(p, ref)
        return TOP if nxt is None else nxt

    def lift_value(v):
        if game.owner[v] == EVEN:
            best = TOP
            for u, p, tlen, strict in out[v]:
                need = edge_need(v, u, p, tlen, strict)
                if need is TOP:
                    continue
                if best is TOP or need < best:
                    best = need
            return best
        worst = None
        for u, p, tlen, strict in out[v]:
            need = edge_need(v, u, p, tlen, strict)
            if need is TOP:
                return TOP
            if worst is None or need > worst:
                worst = need
        return worst

    in_queue = [True] * game.n
    queue = deque(range(game.n))
    has_self_loop = [v in preds[v] for v in range(game.n)]
    while queue:
        v = queue.popleft()
        in_queue[v] = False
        moved = False
        while mu[v] is not TOP:
            new = lift_value(v)
            if new is not TOP and new <= mu[v]:
                break
            mu[v] = new
            moved = True
            lifts += 1
            if max_lifts is not None and lifts > max_lifts:
                raise CapExceeded("lifting exceeded %d lifts" % max_lifts)
            if not has_self_loop[v]:
                break
        if moved:
            for w in preds[v]:
                if not in_queue[w] and mu[w] is not TOP:
                    in_queue[w] = True
                    queue.append(w)

    even_wins = frozenset(v for v in range(game.n) if mu[v] is not TOP)
    strategy = {}
    for v in even_wins:
        if game.owner[v] != EVEN:
            continue
        for u, p, tlen, strict in out[v]:
            need = edge_need(v, u, p, tlen, strict)
            if need is not TOP and need <= mu[v]:
                strategy[v] = (u, p)
                break
    labelling = {v: (TOP if mu[v] is TOP else mu[v]) for v in range(game.n)}
    return LiftResult(even_wins, strategy, labelling, lifts)


def check_progress_measure(game: ParityGame, sigma_even, mu) -> bool:
    """Whether ``mu`` satisfies the progress condition on Even's strategy subgraph.

    Every edge (v, u) of priority p there must satisfy
    mu(v)|_p >= mu(u)|_p, strictly when p is odd.
    """
    for v in range(game.n):
        lab = mu.get(v)
        if lab is None or lab is TOP:
            raise ValueError("labelling must map every vertex to a leaf")
    sub = strategy_subgraph(game, sigma_even)
    d = game.d
    for v, u, p in sub.edges:
        tlen = truncation_length(p, d)
        a, b = mu[v][:tlen], mu[u][:tlen]
        if p % 2 == 1:
            if not a > b:
                return False
        else:
            if not a >= b:
                return False
    return True


def _attractor(active, owner, succ_in, player, targets):
    """Attractor of ``targets`` for ``player`` inside ``active``.

    Returns the attractor set and, for player's vertices newly attracted,
    a witness successor edge (lowest successor first for determinism).
    """
    pred = {v: [] for v in active}
    degree = {}
    for v in active:
        outs = [t for t in succ_in[v] if t in active]
        degree[v] = len(outs)
        for t in outs:
            pred[t].append(v)
    attr = set(targets)
    strategy = {}
    queue = deque(sorted(targets))
    while queue:
        t = queue.popleft()
        for v in sorted(pred[t]):
            if v in attr:
                continue
            if owner[v] == player:
                attr.add(v)
                strategy[v] = t
                queue.append(v)
            else:
                degree[v] -= 1
                if degree[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strategy


def zielonka(game: ParityGame) -> Solution:
    """Classical recursive solver, used as the differential oracle.

    Internally the edge-priority game is subdivided: each edge gets a
    middle vertex carrying its priority, original vertices get priority
    0, and the limsup winner is unchanged because real priorities are
    positive.  Strategies project back through the middle vertices.
    """
    n = game.n
    total = n + len(game.edges)
    owner = [EVEN] * total
    prio = [0] * total
    succ = [[] for _ in range(total)]
    middle_edge = {}
    idx = n
    for v, u, p in game.edges:
        owner[idx] = EVEN
        prio[idx] = p
        succ[v].append(idx)
        succ[idx].append(u)
        middle_edge[idx] = (v, (u, p))
        idx += 1
    for v in range(n):
        owner[v] = game.owner[v]

    def solve(active):
        if not active:
            return {EVEN: set(), ODD: set()}, {EVEN: {}, ODD: {}}
        p = max(prio[v] for v in active)
        player = EVEN if p % 2 == 0 else ODD
        targets = {v for v in active if prio[v] == p}
        attr, tau = _attractor(active, owner, succ, player, targets)
        wins, strat = solve(active - attr)
        if not wins[1 - player]:
            full_strat = dict(strat[player])
            full_strat.update(tau)
            for v in sorted(targets):
                if owner[v] == player:
                    for t in sorted(succ[v]):
                        if t in active:
                            full_strat[v] = t
                            break
            return (
                {player: set(active), 1 - player: set()},
                {player: full_strat, 1 - player: {}},
            )
        battr, btau = _attractor(active, owner, succ, 1 - player, wins[1 - player])
        wins2, strat2 = solve(active - battr)
        loser_strat = dict(strat[1 - player])
        loser_strat.update(btau)
        loser_strat.update(strat2[1 - player])
        return (
            {player: wins2[player], 1 - player: wins2[1 - player] | battr},
            {player: strat2[player], 1 - player: loser_strat},
        )

    wins, strat = solve(set(range(total)))

    def project(player):
        out = {}
        for v in range(n):
            if v in wins[player] and game.owner[v] == player:
                mid = strat[player].get(v)
                if mid is not None:
                    out[v] = middle_edge[mid][1]
        return out

    even_wins = frozenset(v for v in range(n) if v in wins[EVEN])
    odd_wins = frozenset(range(n)) - even_wins
    return Solution(even_wins, odd_wins, project(EVEN), project(ODD))


def _all_cycles_odd(g: GameGraph) -> bool:
    """True iff every cycle's maximum priority is odd.

    Shifting priorities by one swaps parities, so this is the even-graph
    check on the shifted graph.
    """
    from .games import is_even_graph

    shifted = GameGraph(g.n, [(a, b, p + 1) for a, b, p in g.edges], g.d + 2)
    return is_even_graph(shifted)


def verify_solution(game: ParityGame, sol: Solution) -> bool:
    """Certify a solution from first principles.

    The sets must partition the vertices; each player's strategy subgraph
    restricted to their winning set must stay inside it; Even's restricted
    subgraph must have all cycles even, Odd's all cycles odd.
    """
    all_v = frozenset(range(game.n))
    if sol.even_wins | sol.odd_wins != all_v or sol.even_wins & sol.odd_wins:
        return False

    for player, wins, strategy in (
        (EVEN, sol.even_wins, sol.even_strategy),
        (ODD, sol.odd_wins, sol.odd_strategy),
    ):
        if not wins:
            continue
        edges = []
        for v in wins:
            if game.owner[v] == player:
                if v not in strategy:
                    return False
                u, p = strategy[v]
                if (u, p) not in game.succ[v]:
                    return False
                if u not in wins:
                    return False
                edges.append((v, u, p))
            else:
                for u, p in game.succ[v]:
                    if u not in wins:
                        return False
                    edges.append((v, u, p))
        remap = {v: i for i, v in enumerate(sorted(wins))}
        sub = GameGraph(len(wins), [(remap[a], remap[b], p) for a, b, p in edges], game.d)
        if player == EVEN:
            from .games import is_even_graph

            if not is_even_graph(sub):
                return False
        elif not _all_cycles_odd(sub):
            return False
    return True


def exhaustive_winners(game: ParityGame) -> frozenset:
    """Even's winning set by enumerating every positional strategy pair.

    Exponential; only for validating the oracle on tiny games.
    """
    import itertools

    from .games import classify_lasso

    even_vs = [v for v in range(game.n) if game.owner[v] == EVEN]
    odd_vs = [v for v in range(game.n) if game.owner[v] == ODD]

    def plays_winner(sigma, tau, start):
        choice = {}
        choice.update(sigma)
        choice.update(tau)
        seen = {}
        v = start
        word = []
        while v not in seen:
            seen[v] = len(word)
            u, p = choice[v]
            word.append(p)
            v = u
        j = seen[v]
        return EVEN if max(word[j:]) % 2 == 0 else ODD

    even_options = [game.succ[v] for v in even_vs]
    odd_options = [game.succ[v] for v in odd_vs]
    winners = set()
    for start in range(game.n):
        won = False
        for sig in itertools.product(*even_options):
            sigma = dict(zip(even_vs, sig))
            if all(
                plays_winner(sigma, dict(zip(odd_vs, tau)), start) == EVEN
                for tau in itertools.product(*odd_options)
            ):
                won = True
                break
        if won:
            winners.add(start)
    return frozenset(winners)
