"""Ordered trees: navigation, universality, size bounds, and leaf queries.

A tree is a nested tuple: a node is the tuple of its child subtrees and a
leaf is the empty tuple.  A node of the tree-as-set-of-sequences view is a
tuple of child indices (branching directions); Python tuple comparison is
exactly the lexicographic order used throughout (a proper prefix compares
smaller).

A tree is (l, h)-universal when every ordered tree with at most l leaves
and height at most h embeds into it root-to-root, children injectively and
order-preserving.  Universal trees are both the search space of
progress-measure lifting and the combinatorial core of separating safety
automata, which is why leaf queries here are built to be cheap.
"""

from __future__ import annotations

import itertools
import json
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from heapq import heappop, heappush

LEAF = ()


class CapExceeded(Exception):
    """An enumeration or construction would exceed its configured cap."""


def tree_height(t) -> int:
    h = 0
    frontier = [(t, 0)]
    while frontier:
        node, depth = frontier.pop()
        h = max(h, depth)
        frontier.extend((c, depth + 1) for c in node)
    return h


def leaves(t):
    """Direction sequences of all leaves, in DFS = lexicographic order."""
    out = []
    stack = [(t, ())]
    while stack:
        node, path = stack.pop()
        if not node:
            out.append(path)
        else:
            for i in range(len(node) - 1, -1, -1):
                stack.append((node[i], path + (i,)))
    return out


def leaf_count(t) -> int:
    total = 0
    stack = [t]
    while stack:
        node = stack.pop()
        if not node:
            total += 1
        else:
            stack.extend(node)
    return total


def lex_compare(a, b) -> int:
    """-1, 0, or 1 ordering direction sequences; a proper prefix is smaller."""
    if a == b:
        return 0
    return -1 if a < b else 1


def truncation_length(p: int, d: int) -> int:
    """Length of the p-truncation of a depth-d/2 leaf sequence."""
    if not 1 <= p <= d:
        raise ValueError("priority %s outside 1..%s" % (p, d))
    return (d + 1 - p) // 2 if p % 2 else (d - p) // 2


def truncate(leaf, p: int, d: int):
    """p-truncation of a full-depth leaf: odd p keeps levels down to p, even p stops above it."""
    if len(leaf) != d // 2:
        raise ValueError("leaf %r is not at full depth %d" % (leaf, d // 2))
    return leaf[: truncation_length(p, d)]


def full_tree(n: int, h: int, cap: int = 10**7):
    """Full n-ary tree of height h (n**h leaves, shared substructure)."""
    if n < 1 or h < 0:
        raise ValueError("need n >= 1 and h >= 0")
    if n**h > cap:
        raise CapExceeded("full tree would have %d leaves (cap %d)" % (n**h, cap))
    t = LEAF
    for _ in range(h):
        t = (t,) * n
    return t


def succinct_tree(l: int, h: int, cap: int = 10**7):
    """Quasi-polynomial (l, h)-universal tree.

    Recursively: children(T(l, h)) = children(T(l//2, h)) next to a middle
    child carrying T(l, h-1); one leaf at l plain heights zero; empty at
    l = 0.  Leaf count follows f(l, h) = 2 f(l//2, h) + f(l, h-1) and stays
    within 2 l * C(ceil(lg l) + h + 1, h).
    """
    if l < 0 or h < 0:
        raise ValueError("need l >= 0 and h >= 0")
    if succinct_leaf_count(l, h) > cap:
        raise CapExceeded("succinct tree for (%d, %d) exceeds cap %d" % (l, h, cap))
    memo = {}

    def build(ll, hh):
        if ll == 0:
            return None
        if hh == 0:
            return LEAF
        key = (ll, hh)
        if key in memo:
            return memo[key]
        side = build(ll // 2, hh)
        mid = build(ll, hh - 1)
        side_children = side if side is not None else ()
        t = side_children + (mid,) + side_children
        memo[key] = t
        return t

    t = build(l, h)
    if t is None:
        raise ValueError("empty tree for l = 0 has no leaves")
    return t


def succinct_leaf_count(l: int, h: int) -> int:
    memo = {}

    def f(ll, hh):
        if ll == 0:
            return 0
        if hh == 0:
            return 1
        if (ll, hh) not in memo:
            memo[(ll, hh)] = 2 * f(ll // 2, hh) + f(ll, hh - 1)
        return memo[(ll, hh)]

    return f(l, h)


def embeds(t, big) -> bool:
    """Root-preserving order-embedding of t into big.

    Children of every node map injectively and order-preserving onto
    children of the image; decided by a subsequence DP over child lists.
    """
    memo = {}

    def emb(x, y):
        if not x:
            return True
        if len(x) > len(y):
            return False
        key = (id(x), id(y))
        hit = memo.get(key)
        if hit is not None:
            return hit
        # dp[i] = first i children of x matched into the scanned prefix of y
        dp = [True] + [False] * len(x)
        for yc in y:
            for i in range(len(x) - 1, -1, -1):
                if dp[i] and not dp[i + 1] and emb(x[i], yc):
                    dp[i + 1] = True
            if dp[len(x)]:
                break
        memo[key] = dp[len(x)]
        return dp[len(x)]

    return emb(t, big)


def count_trees(l: int, h: int) -> int:
    """Number of ordered trees with exactly l leaves, all at depth exactly h."""
    memo = {}

    def count(ll, hh):
        if hh == 0:
            return 1 if ll == 1 else 0
        key = (ll, hh)
        if key in memo:
            return memo[key]
        total = 0
        for parts in _compositions(ll):
            prod = 1
            for part in parts:
                prod *= count(part, hh - 1)
                if prod == 0:
                    break
            total += prod
        memo[key] = total
        return total

    return count(l, h)


def _compositions(total):
    """Ordered compositions of a positive integer."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


_TREES_MEMO = {}


def enumerate_trees(l: int, h: int, cap: int | None = None):
    """All ordered trees with exactly l leaves, all at depth exactly h.

    Equivalent trees are produced once; the recursion runs over ordered
    compositions of the leaf budget among children.
    """
    if cap is not None and count_trees(l, h) > cap:
        raise CapExceeded("%d trees for (%d, %d) exceed cap %d" % (count_trees(l, h), l, h, cap))
    return iter(_trees_list(l, h))


def _trees_list(l, h):
    key = (l, h)
    if key in _TREES_MEMO:
        return _TREES_MEMO[key]
    if h == 0:
        result = (LEAF,) if l == 1 else ()
    else:
        acc = []
        for parts in _compositions(l):
            child_choices = [_trees_list(part, h - 1) for part in parts]
            if any(not c for c in child_choices):
                continue
            for combo in itertools.product(*child_choices):
                acc.append(tuple(combo))
        result = tuple(acc)
    _TREES_MEMO[key] = result
    return result


def is_universal(big, l: int, h: int, cap: int = 200_000) -> bool:
    """Exhaustively check (l, h)-universality of a tree.

    Only trees with exactly l leaves all at depth h are enumerated: any
    smaller or shallower tree embeds into a padded one, so checking the
    padded shapes suffices.
    """
    for t in enumerate_trees(l, h, cap=cap):
        if not embeds(t, big):
            return False
    return True


def g_value(l: int, h: int) -> int:
    """Recurrence floor of the universal-tree size: g(l, h) = sum over delta of g(l//delta, h-1)."""
    if l < 1 or h < 1:
        raise ValueError("need l >= 1 and h >= 1")
    memo = {}

    def g(ll, hh):
        if hh == 1:
            return ll
        if ll == 1:
            return 1
        key = (ll, hh)
        if key not in memo:
            memo[key] = sum(g(ll // delta, hh - 1) for delta in range(1, ll + 1))
        return memo[key]

    return g(l, h)


@dataclass(frozen=True)
class SizeBounds:
    """Exact recurrence value g plus its binomial floor and the succinct ceiling."""

    g: int
    binom_lower: int
    jl_upper: int


def size_bounds(l: int, h: int) -> SizeBounds:
    if l < 1 or h < 1:
        raise ValueError("need l >= 1 and h >= 1")
    floor_lg = l.bit_length() - 1
    ceil_lg = (l - 1).bit_length()
    return SizeBounds(
        g=g_value(l, h),
        binom_lower=math.comb(floor_lg + h - 1, h - 1),
        jl_upper=2 * l * math.comb(ceil_lg + h + 1, h),
    )


def tree_to_json(t) -> str:
    """Nested-array serialization; a leaf is []."""

    def conv(node):
        return [conv(c) for c in node]

    return json.dumps(conv(t))


def tree_from_json(text: str):
    def conv(node):
        return tuple(conv(c) for c in node)

    obj = json.loads(text)
    if not isinstance(obj, list):
        raise ValueError("tree JSON must be a nested array")
    return conv(obj)


def random_tree(l: int, h: int, rng):
    """Random ordered tree with exactly l leaves, all at depth exactly h."""
    if h == 0:
        if l != 1:
            raise ValueError("height-0 tree must have exactly one leaf")
        return LEAF
    if l == 1:
        return (random_tree(1, h - 1, rng),)
    if h == 1:
        return (LEAF,) * l
    k = rng.randint(1, l)
    cuts = sorted(rng.sample(range(1, l), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [l])]
    return tuple(random_tree(part, h - 1, rng) for part in parts)


class LeafIndex:
    """Sorted-leaf view of an explicit tree for truncation queries.

    Requires every leaf at the same full depth.  Prefix arrays per
    truncation length make each query a binary search, which is the inner
    loop of both tree-backed separators and lifting.
    """

    def __init__(self, tree, cap: int = 500_000):
        lvs = leaves(tree)
        if len(lvs) > cap:
            raise CapExceeded("%d leaves exceed index cap %d" % (len(lvs), cap))
        depths = {len(leaf) for leaf in lvs}
        if len(depths) != 1:
            raise ValueError("leaves not all at the same depth: %s" % sorted(depths))
        self.height = depths.pop()
        self.d = 2 * self.height
        self._leaves = lvs
        self._pref = [[leaf[:length] for leaf in lvs] for length in range(self.height + 1)]

    @property
    def leaf_count(self):
        return len(self._leaves)

    @property
    def min_leaf(self):
        return self._leaves[0]

    @property
    def max_leaf(self):
        return self._leaves[-1]

    def all_leaves(self):
        return iter(self._leaves)

    def _arr(self, p, ref):
        length = truncation_length(p, self.d)
        if len(ref) != length:
            raise ValueError("reference %r is not a %d-truncation" % (ref, p))
        return self._pref[length]

    def max_eq(self, p, ref):
        arr = self._arr(p, ref)
        i = bisect_right(arr, ref) - 1
        return self._leaves[i] if i >= 0 and arr[i] == ref else None

    def max_lt(self, p, ref):
        arr = self._arr(p, ref)
        i = bisect_left(arr, ref) - 1
        return self._leaves[i] if i >= 0 else None

    def min_geq(self, p, ref):
        arr = self._arr(p, ref)
        i = bisect_left(arr, ref)
        return self._leaves[i] if i < len(arr) else None

    def min_gt(self, p, ref):
        arr = self._arr(p, ref)
        i = bisect_right(arr, ref)
        return self._leaves[i] if i < len(arr) else None


class FullTreeIndex:
    """Arithmetic twin of LeafIndex for the full n-ary tree of height h.

    Leaves are tuples over 0..n-1; queries are mixed-radix increments and
    decrements instead of binary searches, so the tree never needs to be
    materialized.  Behaviour matches LeafIndex(full_tree(n, h)) exactly.
    """

    def __init__(self, n: int, h: int):
        if n < 1 or h < 0:
            raise ValueError("need n >= 1 and h >= 0")
        self.n = n
        self.height = h
        self.d = 2 * h

    @property
    def leaf_count(self):
        return self.n**self.height

    @property
    def min_leaf(self):
        return (0,) * self.height

    @property
    def max_leaf(self):
        return (self.n - 1,) * self.height

    def all_leaves(self):
        return itertools.product(range(self.n), repeat=self.height)

    def _check(self, p, ref):
        length = truncation_length(p, self.d)
        if len(ref) != length:
            raise ValueError("reference %r is not a %d-truncation" % (ref, p))

    def _inc(self, ref):
        digits = list(ref)
        for i in range(len(digits) - 1, -1, -1):
            if digits[i] < self.n - 1:
                digits[i] += 1
                return tuple(digits[: i + 1]) + (0,) * (len(digits) - i - 1)
            digits[i] = 0
        return None

    def _dec(self, ref):
        digits = list(ref)
        for i in range(len(digits) - 1, -1, -1):
            if digits[i] > 0:
                digits[i] -= 1
                return tuple(digits[: i + 1]) + (self.n - 1,) * (len(digits) - i - 1)
            digits[i] = self.n - 1
        return None

    def max_eq(self, p, ref):
        self._check(p, ref)
        return ref + (self.n - 1,) * (self.height - len(ref))

    def max_lt(self, p, ref):
        self._check(p, ref)
        if not ref:
            return None
        pred = self._dec(ref)
        return None if pred is None else pred + (self.n - 1,) * (self.height - len(pred))

    def min_geq(self, p, ref):
        self._check(p, ref)
        return ref + (0,) * (self.height - len(ref))

    def min_gt(self, p, ref):
        self._check(p, ref)
        if not ref:
            return None
        succ = self._inc(ref)
        return None if succ is None else succ + (0,) * (self.height - len(succ))


def leaf_query(tree, mode: str, p: int, ref):
    """One-shot truncation query against a tree (see LeafIndex for the modes)."""
    index = tree if isinstance(tree, (LeafIndex, FullTreeIndex)) else LeafIndex(tree)
    try:
        fn = getattr(index, mode)
    except AttributeError:
        raise ValueError("unknown mode %r" % (mode,)) from None
    return fn(p, ref)


def min_universal_size(l: int, h: int, cap: int = 5_000_000) -> int:
    """Exact minimum leaf count of an (l, h)-universal tree of height h.

    Minimal universal trees have all leaves at full depth (branches that
    stop early can never host a full-depth embedding, so pruning them
    keeps universality), which lets the search work level by level: a
    height-h tree is a sequence of height-(h-1) children, and a candidate
    embeds iff its child shapes match an increasing subsequence of those
    children, decided exactly by greedy left-to-right matching.  The
    search runs iterative deepening from the recurrence floor g(l, h)
    upward: states are dominance-reduced sets of outstanding candidate
    suffixes, children are cost/profile Pareto representatives grouped
    per state by which suffixes they advance, and failed states memoize
    the largest budget they failed at.  Plain enumeration of host trees
    is hopeless already around (4, 3); this search is exact and fast at
    desk scales.
    """
    if l < 1 or h < 0:
        raise ValueError("need l >= 1 and h >= 0")
    if l == 1 or h == 0:
        return 1

    # Shape universe: every possible candidate child, with ids for bitmask profiles.
    shapes = []
    for m in range(1, l + 1):
        shapes.extend(_trees_list(m, h - 1))
    shape_id = {s: i for i, s in enumerate(shapes)}
    shape_cost = [leaf_count(s) for s in shapes]
    nshapes = len(shapes)

    # shape_le[i] = bitmask of shapes j with shapes[j] embeddable into shapes[i]
    shape_le = [0] * nshapes
    for i in range(nshapes):
        for j in range(nshapes):
            if shape_cost[j] <= shape_cost[i] and embeds(shapes[j], shapes[i]):
                shape_le[i] |= 1 << j

    candidates = [tuple(shape_id[c] for c in t) for t in _trees_list(l, h)]
    if not candidates:
        raise ValueError("no trees with %d leaves at height %d" % (l, h))

    # Children costlier than a full (l, h-1)-universal tree are dominated by one.
    child_cap = min_universal_size(l, h - 1, cap=cap)
    pool = []
    for m in range(1, child_cap + 1):
        for child in _trees_list(m, h - 1):
            mask = 0
            for i in range(nshapes):
                if shape_cost[i] <= m and embeds(shapes[i], child):
                    mask |= 1 << i
            pool.append((m, mask))
    pool.sort(key=lambda cm: (cm[0], -cm[1].bit_count()))
    pareto = []
    for cost, mask in pool:
        if any(pc <= cost and pm | mask == pm for pc, pm in pareto):
            continue
        pareto.append((cost, mask))

    mass = {}

    def suffix_mass(s):
        if s not in mass:
            mass[s] = sum(shape_cost[i] for i in s)
        return mass[s]

    # Cheapest child hosting one shape, and hosting a pair of shapes.
    cost_single = [min(c for c, m in pareto if (m >> i) & 1) for i in range(nshapes)]
    cost_pair = [[0] * nshapes for _ in range(nshapes)]
    for i in range(nshapes):
        for j in range(i, nshapes):
            both = min(c for c, m in pareto if (m >> i) & 1 and (m >> j) & 1)
            cost_pair[i][j] = cost_pair[j][i] = both

    pair_memo = {}

    def opt2(s1, s2):
        """Exact min cost to cover two suffixes jointly; a lower bound for any state containing both."""
        key = (s1, s2) if s1 <= s2 else (s2, s1)
        if key in pair_memo:
            return pair_memo[key]
        n1, n2 = len(s1), len(s2)
        dist = {(0, 0): 0}
        heap = [(0, 0, 0)]
        best = None
        while heap:
            c, i, j = heappop(heap)
            if c > dist.get((i, j), c):
                continue
            if i == n1 and j == n2:
                best = c
                break
            moves = []
            if i < n1:
                moves.append((cost_single[s1[i]], i + 1, j))
            if j < n2:
                moves.append((cost_single[s2[j]], i, j + 1))
            if i < n1 and j < n2:
                moves.append((cost_pair[s1[i]][s2[j]], i + 1, j + 1))
            for mc, ni, nj in moves:
                nc = c + mc
                if dist.get((ni, nj), nc + 1) > nc:
                    dist[(ni, nj)] = nc
                    heappush(heap, (nc, ni, nj))
        pair_memo[key] = best
        return best

    bound_memo = {}

    def state_bound(state):
        """Admissible cost floor: single-suffix mass and pairwise joint covers."""
        if state in bound_memo:
            return bound_memo[state]
        ordered = sorted(state)
        b = max(suffix_mass(s) for s in ordered)
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                v = opt2(ordered[i], ordered[j])
                if v > b:
                    b = v
        bound_memo[state] = b
        return b

    def dominates(big, small):
        # small is covered whenever big is: order-preserving map with
        # shape-embedding at every position, decided greedily.
        ptr = 0
        for sid in big:
            if ptr < len(small) and (shape_le[sid] >> small[ptr]) & 1:
                ptr += 1
        return ptr == len(small)

    def reduce_state(suffixes):
        uniq = sorted(set(suffixes), key=lambda s: (-len(s), s))
        kept = []
        for s in uniq:
            if not any(dominates(k, s) for k in kept):
                kept = [k for k in kept if not dominates(s, k)]
                kept.append(s)
        return frozenset(kept)

    start = reduce_state([c for c in candidates if c])
    failed = {}
    nodes = 0

    def dfs(state, budget):
        nonlocal nodes
        if not state:
            return True
        if state_bound(state) > budget:
            return False
        if failed.get(state, -1) >= budget:
            return False
        nodes += 1
        if nodes > cap:
            raise CapExceeded("min-universal search exceeded %d nodes" % cap)
        heads = 0
        for s in state:
            heads |= 1 << s[0]
        by_signature = {}
        for cost, mask in pareto:
            sig = mask & heads
            if sig and sig not in by_signature:
                by_signature[sig] = cost  # pool is cost-sorted, first is cheapest
        moves = sorted(by_signature.items(), key=lambda kv: (kv[1], -kv[0].bit_count()))
        for sig, cost in moves:
            if cost > budget:
                continue
            advanced = []
            for s in state:
                if (sig >> s[0]) & 1:
                    if len(s) > 1:
                        advanced.append(s[1:])
                else:
                    advanced.append(s)
            if dfs(reduce_state(advanced), budget - cost):
                return True
        failed[state] = max(failed.get(state, -1), budget)
        return False

    # The succinct construction bounds the answer above once greedy
    # matching confirms it covers every candidate.
    succ_children = succinct_tree(l, h)
    succ_masks = []
    for child in succ_children:
        m = leaf_count(child)
        mask = 0
        for i in range(nshapes):
            if shape_cost[i] <= m and embeds(shapes[i], child):
                mask |= 1 << i
        succ_masks.append(mask)
    if not all(_greedy_matches(seq, succ_masks) for seq in candidates):
        raise RuntimeError("succinct tree failed its own universality check")
    upper = sum(leaf_count(c) for c in succ_children)

    for bound in range(max(g_value(l, h), state_bound(start)), upper + 1):
        if dfs(start, bound):
            return bound
    return upper


def _greedy_matches(seq, masks):
    ptr = 0
    for mask in masks:
        if ptr < len(seq) and (mask >> seq[ptr]) & 1:
            ptr += 1
    return ptr == len(seq)
