"""Safety and parity automata over the priority alphabet 1..d.

The three separator constructions live here: the multi-counter automaton,
the universal-tree automaton, and the register automaton whose chained
product with a deterministic safety separator is again a safety
separator.  A strong (n, d)-separator accepts every word read off a walk
in an n-vertex even graph and rejects every word whose limsup is odd.

All safety automata use one absorbing sink named "reject" as their only
rejecting state; transition functions may be backed by tables or computed
on demand, so quasi-polynomial state spaces are only materialized when a
caller actually enumerates them.
"""

from __future__ import annotations

import itertools
import json
import math

from .games import Lasso, tarjan_scc
from .trees import CapExceeded, FullTreeIndex, LeafIndex, truncate

REJECT = "reject"


class SafetyAutomaton:
    """Total safety automaton with a single absorbing rejecting sink.

    ``step(state, letter)`` returns the tuple of successors (always length
    one when deterministic).  ``states()`` enumerates the full state set,
    lazily materialized for the generated separators.
    """

    def __init__(
        self, d, initial, step, *, deterministic, states=None, state_count=None, enumerator=None
    ):
        if d < 2 or d % 2:
            raise ValueError("alphabet bound d must be even and >= 2")
        self.d = d
        self.initial = initial
        self._step = step
        self.deterministic = deterministic
        self._states = states
        self._state_count = state_count
        self._enumerator = enumerator

    def step(self, state, letter):
        if state == REJECT:
            return (REJECT,)
        return self._step(state, letter)

    def dstep(self, state, letter):
        if not self.deterministic:
            raise ValueError("automaton is not deterministic")
        return self.step(state, letter)[0]

    def states(self):
        if self._states is None:
            if self._enumerator is not None:
                self._states = self._enumerator()
            else:
                self._states = self._explore()
        return self._states

    def _explore(self):
        seen = {self.initial: None}
        frontier = [self.initial]
        while frontier:
            q = frontier.pop()
            for a in range(1, self.d + 1):
                for t in self.step(q, a):
                    if t not in seen:
                        seen[t] = None
                        frontier.append(t)
        if REJECT not in seen:
            seen[REJECT] = None
        return tuple(seen)

    @property
    def state_count(self):
        if self._state_count is not None:
            return self._state_count
        return len(self.states())

    def nonrejecting_states(self):
        return tuple(q for q in self.states() if q != REJECT)

    @classmethod
    def from_table(cls, d, initial, table, rejecting=()):
        """Explicit automaton from a (state, letter) -> successors table.

        States listed in ``rejecting`` are merged into the absorbing sink;
        the table must be total on the remaining states.
        """
        rejecting = set(rejecting)
        rejecting.add(REJECT)

        def norm(q):
            return REJECT if q in rejecting else q

        states = []
        seen = set()
        for q, _ in table:
            if q not in seen and q not in rejecting:
                seen.add(q)
                states.append(q)
        fixed = {}
        deterministic = True
        for q in states:
            for a in range(1, d + 1):
                if (q, a) not in table:
                    raise ValueError("missing transition for state %r letter %d" % (q, a))
                succs = tuple(dict.fromkeys(norm(t) for t in table[(q, a)]))
                if not succs:
                    raise ValueError("empty successor set for state %r letter %d" % (q, a))
                if len(succs) > 1:
                    deterministic = False
                fixed[(q, a)] = succs
        init = norm(initial)
        return cls(
            d,
            init,
            lambda q, a: fixed[(q, a)],
            deterministic=deterministic,
            states=tuple(states) + (REJECT,),
        )


class ParityAutomaton:
    """Parity automaton: transitions carry priorities, acceptance is limsup-even.

    ``steps(state, letter)`` yields ``(transition_priority, successor)``
    pairs; ``dprime`` bounds the transition priorities.
    """

    def __init__(self, d, dprime, initial, steps, *, deterministic, states=None):
        self.d = d
        self.dprime = dprime
        self.initial = initial
        self._steps = steps
        self.deterministic = deterministic
        self._states = states

    def steps(self, state, letter):
        return self._steps(state, letter)

    def states(self):
        if self._states is None:
            seen = {self.initial: None}
            frontier = [self.initial]
            while frontier:
                q = frontier.pop()
                for a in range(1, self.d + 1):
                    for _, t in self.steps(q, a):
                        if t not in seen:
                            seen[t] = None
                            frontier.append(t)
            self._states = tuple(seen)
        return self._states

    @property
    def state_count(self):
        return len(self.states())


def counter_separator(n: int, d: int, cap: int = 10**7) -> SafetyAutomaton:
    """Deterministic multi-counter strong (n, d)-separator.

    One counter per odd priority p counts down from n on every p read;
    any letter above p refills everything below it.  A p arriving on an
    exhausted counter rejects: an n-vertex even graph can never replay an
    odd priority that often without something larger in between.
    (n+1)**(d/2) + 1 states.
    """
    if n < 1 or d < 2 or d % 2:
        raise ValueError("need n >= 1 and even d >= 2")
    h = d // 2
    count = (n + 1) ** h + 1
    if count > cap:
        raise CapExceeded("counter separator needs %d states (cap %d)" % (count, cap))

    def step(q, a):
        keep = (d + 1 - a) // 2 if a % 2 else (d - a) // 2
        if a % 2:
            c = q[keep - 1]
            if c == 0:
                return (REJECT,)
            return (q[: keep - 1] + (c - 1,) + (n,) * (h - keep),)
        return (q[:keep] + (n,) * (h - keep),)

    def enumerate_states():
        states = [tuple(t) for t in itertools.product(range(n, -1, -1), repeat=h)]
        states.append(REJECT)
        return tuple(states)

    return SafetyAutomaton(
        d,
        (n,) * h,
        step,
        deterministic=True,
        state_count=count,
        enumerator=enumerate_states,
    )


def tree_separator(tree, n: int, d: int, check=None, cap: int = 10**7) -> SafetyAutomaton:
    """Deterministic separator whose states are the leaves of a universal tree.

    The caller asserts the tree is (n, d/2)-universal; with ``check`` left
    at None that claim is verified exhaustively whenever the candidate
    enumeration is small.  Reading an even p jumps to the largest leaf
    agreeing with the current one above p; an odd p jumps to the largest
    leaf strictly below the current p-truncation, rejecting when none is
    left.
    """
    from .trees import count_trees, is_universal

    if d < 2 or d % 2:
        raise ValueError("need even d >= 2")
    index = tree if isinstance(tree, (LeafIndex, FullTreeIndex)) else LeafIndex(tree, cap=cap)
    if index.height != d // 2:
        raise ValueError("tree height %d does not match d/2 = %d" % (index.height, d // 2))
    if index.leaf_count + 1 > cap:
        raise CapExceeded("tree separator needs %d states (cap %d)" % (index.leaf_count + 1, cap))
    if check is None:
        check = count_trees(n, d // 2) <= 2000 and index.leaf_count <= 5000
    if check and not isinstance(index, FullTreeIndex):
        rebuilt = _tree_of_index(index)
        if not is_universal(rebuilt, n, d // 2):
            raise ValueError("tree is not (%d, %d)-universal" % (n, d // 2))

    def step(q, a):
        ref = truncate(q, a, d)
        if a % 2:
            nxt = index.max_lt(a, ref)
            return (REJECT,) if nxt is None else (nxt,)
        return (index.max_eq(a, ref),)

    aut = SafetyAutomaton(
        d,
        index.max_leaf,
        step,
        deterministic=True,
        state_count=index.leaf_count + 1,
        enumerator=lambda: tuple(list(index.all_leaves()) + [REJECT]),
    )
    aut.leaf_index = index
    return aut


def _tree_of_index(index):
    """Rebuild the nested-tuple tree from an index's leaf list."""

    def build(lvs, depth):
        if not lvs or not lvs[0][depth:]:
            return ()
        children = []
        start = 0
        for i in range(1, len(lvs) + 1):
            if i == len(lvs) or lvs[i][depth] != lvs[start][depth]:
                children.append(build(lvs[start:i], depth + 1))
                start = i
        return tuple(children)

    return build(list(index.all_leaves()), 0)


def register_automaton(n: int, d: int, cap: int = 10**6) -> ParityAutomaton:
    """Nondeterministic register automaton, a good-for-separation strong (n, d)-separator.

    States are non-increasing tuples of floor(1+lg n) registers holding
    priorities; reading p bumps every smaller register up to p.  Each step
    offers a priority-1 non-reset transition plus, per register k, a reset
    emitting 2k (register even) or 2k+1 (odd).  Transition priorities stay
    below dprime = 2 floor(lg n) + 3.
    """
    if n < 1 or d < 2 or d % 2:
        raise ValueError("need n >= 1 and even d >= 2")
    m = n.bit_length()
    count = math.comb(d + m - 1, m)
    if count > cap:
        raise CapExceeded("register automaton needs %d states (cap %d)" % (count, cap))

    def steps(q, a):
        upd = tuple(r if r > a else a for r in q)
        out = [(1, upd)]
        for k in range(1, m + 1):
            idx = m - k
            rk = upd[idx]
            pri = 2 * k if rk % 2 == 0 else 2 * k + 1
            out.append((pri, upd[:idx] + upd[idx + 1 :] + (1,)))
        return tuple(out)

    states = tuple(
        tuple(sorted(combo, reverse=True))
        for combo in itertools.combinations_with_replacement(range(1, d + 1), m)
    )
    return ParityAutomaton(
        d,
        2 * m + 1,
        (1,) * m,
        steps,
        deterministic=False,
        states=states,
    )


def product_parity_safety(R: ParityAutomaton, S: SafetyAutomaton) -> SafetyAutomaton:
    """Chained product running S on the transition priorities of R.

    A product state is rejecting exactly when its S component is, so the
    result is a safety automaton over R's input alphabet; it inherits R's
    nondeterminism.
    """
    if not S.deterministic:
        raise ValueError("the safety factor must be deterministic")
    if S.d < R.dprime:
        raise ValueError(
            "alphabet mismatch: S reads up to %d but R emits priorities up to %d" % (S.d, R.dprime)
        )

    def step(q, a):
        r, s = q
        out = []
        for pri, r2 in R.steps(r, a):
            s2 = S.dstep(s, pri)
            out.append(REJECT if s2 == REJECT else (r2, s2))
        return tuple(dict.fromkeys(out))

    def enumerate_states():
        pairs = [(r, s) for r in R.states() for s in S.states() if s != REJECT]
        pairs.append(REJECT)
        return tuple(pairs)

    return SafetyAutomaton(
        R.d,
        (R.initial, S.initial),
        step,
        deterministic=R.deterministic,
        state_count=R.state_count * (S.state_count - 1) + 1,
        enumerator=enumerate_states,
    )


def register_product_separator(n: int, d: int, cap: int = 10**7) -> SafetyAutomaton:
    """Safety separator R ||> U: the register automaton chained with a
    tree-backed separator sized for the register automaton itself."""
    from .trees import succinct_tree

    R = register_automaton(n, d)
    n2 = R.state_count
    d2 = R.dprime + 1 if R.dprime % 2 else R.dprime
    S = tree_separator(succinct_tree(n2, d2 // 2, cap=cap), n2, d2, check=False, cap=cap)
    return product_parity_safety(R, S)


def run_det(A: SafetyAutomaton, word) -> list:
    """State trace of the unique run on a finite word (|word| + 1 states)."""
    if not A.deterministic:
        raise ValueError("run_det needs a deterministic automaton")
    trace = [A.initial]
    q = A.initial
    for a in word:
        if not 1 <= a <= A.d:
            raise ValueError("letter %r outside 1..%d" % (a, A.d))
        q = A.dstep(q, a)
        trace.append(q)
    return trace


def accepts_lasso(A: SafetyAutomaton, w: Lasso) -> bool:
    """Whether some infinite run on prefix . period^omega avoids the sink.

    Subset simulation over the prefix, then cycle reachability in the
    product of non-rejecting states with period positions.
    """
    for a in w.prefix + w.period:
        if not 1 <= a <= A.d:
            raise ValueError("letter %r outside 1..%d" % (a, A.d))
    current = {A.initial} - {REJECT}
    for a in w.prefix:
        current = {t for q in current for t in A.step(q, a) if t != REJECT}
        if not current:
            return False

    period = w.period
    k = len(period)
    start_nodes = [(q, 0) for q in current]
    succ_of = {}
    order = []
    stack = list(start_nodes)
    seen = set(start_nodes)
    while stack:
        node = stack.pop()
        order.append(node)
        q, i = node
        nxt = []
        for t in A.step(q, period[i]):
            if t == REJECT:
                continue
            nn = (t, (i + 1) % k)
            nxt.append(nn)
            if nn not in seen:
                seen.add(nn)
                stack.append(nn)
        succ_of[node] = nxt

    idx = {node: i for i, node in enumerate(order)}
    adj = [[idx[t] for t in succ_of[node]] for node in order]
    comps = tarjan_scc(adj)
    comp_of = [0] * len(order)
    cyclic = [False] * len(comps)
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
        if len(comp) > 1:
            cyclic[ci] = True
    for v, targets in enumerate(adj):
        for t in targets:
            if t == v:
                cyclic[comp_of[v]] = True

    # a node admits an infinite run iff it reaches a cyclic component
    good = [False] * len(comps)
    comp_adj = [set() for _ in comps]
    for v, targets in enumerate(adj):
        for t in targets:
            if comp_of[v] != comp_of[t]:
                comp_adj[comp_of[v]].add(comp_of[t])
    for ci in _reverse_topological(comp_adj):
        if cyclic[ci] or any(good[cj] for cj in comp_adj[ci]):
            good[ci] = True
    return any(good[comp_of[idx[node]]] for node in start_nodes)


def _reverse_topological(comp_adj):
    n = len(comp_adj)
    indeg = [0] * n
    for targets in comp_adj:
        for t in targets:
            indeg[t] += 1
    queue = [i for i in range(n) if indeg[i] == 0]
    topo = []
    while queue:
        v = queue.pop()
        topo.append(v)
        for t in comp_adj[v]:
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    return reversed(topo)


def automaton_to_json(A, cap: int = 500_000) -> str:
    """Serialize an automaton to the interchange schema.

    States are stringified; parity automata carry a ``pri`` field per
    transition and safety automata do not.
    """
    states = A.states()
    if len(states) > cap:
        raise CapExceeded("%d states exceed serialization cap %d" % (len(states), cap))
    name = {q: repr(q) if not isinstance(q, str) else q for q in states}
    transitions = []
    if isinstance(A, ParityAutomaton):
        for q in states:
            for a in range(1, A.d + 1):
                for pri, t in A.steps(q, a):
                    transitions.append(
                        {"from": name[q], "letter": a, "pri": pri, "to": name.get(t, repr(t))}
                    )
        obj = {
            "states": [name[q] for q in states],
            "initial": name[A.initial],
            "rejecting": [],
            "transitions": transitions,
            "deterministic": A.deterministic,
            "d": A.d,
            "dprime": A.dprime,
        }
    else:
        for q in states:
            if q == REJECT:
                continue
            for a in range(1, A.d + 1):
                for t in A.step(q, a):
                    transitions.append({"from": name[q], "letter": a, "to": name.get(t, repr(t))})
        obj = {
            "states": [name[q] for q in states],
            "initial": name[A.initial],
            "rejecting": [REJECT] if REJECT in states else [],
            "transitions": transitions,
            "deterministic": A.deterministic,
            "d": A.d,
        }
    return json.dumps(obj, sort_keys=True)


def automaton_from_json(text: str):
    """Load an automaton from the interchange schema.

    Rejecting states merge into the single sink.  A non-rejecting state
    literally named "reject" would collide with the sink and is refused;
    several initial states are likewise refused rather than repaired.
    """
    obj = json.loads(text)
    d = obj.get("d")
    if d is None:
        d = max((t["letter"] for t in obj["transitions"]), default=2)
        d = d if d % 2 == 0 else d + 1
    if isinstance(obj["initial"], list):
        raise ValueError("multiple initial states are not supported; add a fresh initial state")
    rejecting = set(obj.get("rejecting", ()))
    parity = any("pri" in t for t in obj["transitions"])
    if parity:
        if not all("pri" in t for t in obj["transitions"]):
            raise ValueError("mixed parity/safety transitions")
        table = {}
        for t in obj["transitions"]:
            table.setdefault((t["from"], t["letter"]), []).append((t["pri"], t["to"]))
        states = tuple(obj["states"])
        for q in states:
            for a in range(1, d + 1):
                if (q, a) not in table:
                    raise ValueError("missing transition for state %r letter %d" % (q, a))
        fixed = {k: tuple(v) for k, v in table.items()}
        dprime = obj.get("dprime") or max(p for trans in fixed.values() for p, _ in trans)
        return ParityAutomaton(
            d,
            dprime,
            obj["initial"],
            lambda q, a: fixed[(q, a)],
            deterministic=all(len(v) == 1 for v in fixed.values()),
            states=states,
        )
    for q in obj["states"]:
        if q == REJECT and q not in rejecting:
            raise ValueError('non-rejecting state named "reject" collides with the sink')
    table = {}
    for t in obj["transitions"]:
        if t["from"] in rejecting:
            continue
        table.setdefault((t["from"], t["letter"]), []).append(t["to"])
    return SafetyAutomaton.from_table(d, obj["initial"], table, rejecting=rejecting)
