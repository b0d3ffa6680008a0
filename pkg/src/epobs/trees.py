"""Tree-order machinery: levels, weights, pathwidth, B_h extraction and decomposition.

Levels are computed from *branch values*: for a directed edge ``v -> x`` of a
tree, ``branch[(v, x)]`` is the largest ``h`` such that the component of
``T - v`` containing ``x`` holds a ``v``-linked ``B_h``-tree.  This value is
one less than the Horton-Strahler number of that component rooted at ``x``,
which the validator uses as an independent recomputation.
"""

from __future__ import annotations

import functools
import sys
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .graph import Edge, Graph, GraphError, Path, edge_key

TreeLike = Union[Graph, "RootedTree"]


class TreeTooShallow(GraphError):
    """The tree lacks a level needed by the decomposition."""


class RootedTree:
    """A tree with a fixed root and the induced order ``u <=_T v``.

    ``u <=_T v`` holds when the path from ``u`` to the root passes through ``v``.
    """

    __slots__ = ("graph", "root", "parent", "depth", "order", "_children", "_tin", "_tout")

    def __init__(self, graph: Graph, root: int = 0):
        if not graph.is_tree():
            raise GraphError("graph is not a tree")
        graph.check_vertex(root)
        n = graph.n
        parent = [-1] * n
        depth = [0] * n
        order = [root]
        seen = [False] * n
        seen[root] = True
        for x in order:
            for y in graph.neighbors(x):
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    order.append(y)
        children: List[List[int]] = [[] for _ in range(n)]
        for x in order[1:]:
            children[parent[x]].append(x)
        tin = [0] * n
        tout = [0] * n
        clock = 0
        stack = [(root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                tout[x] = clock
                clock += 1
                continue
            tin[x] = clock
            clock += 1
            stack.append((x, True))
            for c in reversed(children[x]):
                stack.append((c, False))
        self.graph = graph
        self.root = root
        self.parent = tuple(parent)
        self.depth = tuple(depth)
        self.order = tuple(order)
        self._children = tuple(tuple(sorted(c)) for c in children)
        self._tin = tin
        self._tout = tout

    @property
    def n(self) -> int:
        return self.graph.n

    def children(self, v: int) -> Tuple[int, ...]:
        return self._children[v]

    def le(self, u: int, v: int) -> bool:
        """``u <=_T v``: ``v`` lies on the path from ``u`` to the root."""
        return self._tin[v] <= self._tin[u] and self._tout[u] <= self._tout[v]

    def lt(self, u: int, v: int) -> bool:
        return u != v and self.le(u, v)

    def subtree(self, u: int) -> FrozenSet[int]:
        """Vertex set of ``T_u``."""
        out = [u]
        for x in out:
            out.extend(self._children[x])
        return frozenset(out)

    def ancestors(self, u: int) -> List[int]:
        """``u`` and every vertex above it, ending at the root."""
        out = [u]
        while self.parent[out[-1]] != -1:
            out.append(self.parent[out[-1]])
        return out

    def path(self, u: int, v: int) -> Path:
        """The unique ``u``-``v`` path."""
        up_u = self.ancestors(u)
        up_v = self.ancestors(v)
        on_v = set(up_v)
        head = []
        for x in up_u:
            head.append(x)
            if x in on_v:
                meet = x
                break
        tail = up_v[: up_v.index(meet)]
        return tuple(head + tail[::-1])


def _as_rooted(t: TreeLike) -> RootedTree:
    return t if isinstance(t, RootedTree) else RootedTree(t, 0)


def _combine(vals: Sequence[int]) -> int:
    """Branch value of a vertex whose child branches have values ``vals``."""
    if not vals:
        return 0
    if len(vals) == 1:
        return vals[0]
    top = sorted(vals, reverse=True)
    return max(top[0], top[1] + 1)


# ---------------------------------------------------------------------------
# branch values and levels


def branch_values(t: TreeLike) -> Dict[Tuple[int, int], int]:
    """``branch[(v, x)]`` for every ordered pair of adjacent vertices."""
    rt = _as_rooted(t)
    g = rt.graph
    down = [0] * g.n  # value of parent(x) -> x
    for x in reversed(rt.order):
        down[x] = _combine([down[c] for c in rt.children(x)])
    up = [0] * g.n  # value of x -> parent(x)
    for p in rt.order:
        dirs = [(down[c], c) for c in rt.children(p)]
        if p != rt.root:
            dirs.append((up[p], -1))
        dirs.sort(reverse=True)
        top = dirs[:3]
        for c in rt.children(p):
            rest = [val for val, who in top if who != c][:2]
            up[c] = _combine(rest)
    out = {}
    for x in g.vertices():
        if x != rt.root:
            p = rt.parent[x]
            out[(p, x)] = down[x]
            out[(x, p)] = up[x]
    return out


def strahler_branch_values(g: Graph) -> Dict[Tuple[int, int], int]:
    """Branch values recomputed as Horton-Strahler numbers minus one.

    Memoised recursion over directed edges; shares no code with
    :func:`branch_values` and serves as its validator.
    """
    adj = g.adjacency

    @functools.lru_cache(maxsize=None)
    def strahler(v: int, x: int) -> int:
        kids = [strahler(x, y) for y in adj[x] if y != v]
        if not kids:
            return 1
        m = max(kids)
        return m + 1 if kids.count(m) >= 2 else m

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * g.n + 100))
    try:
        out = {}
        for v in g.vertices():
            for x in adj[v]:
                out[(v, x)] = strahler(v, x) - 1
    finally:
        sys.setrecursionlimit(limit)
    return out


@dataclass(frozen=True)
class LevelTable:
    """Per-vertex level ``lambda`` (``None`` below degree 3) plus branch values."""

    levels: Tuple[Optional[int], ...]
    branch: Dict[Tuple[int, int], int]
    h_max: Optional[int] = None

    def level(self, v: int) -> Optional[int]:
        return self.levels[v]

    def contains(self, v: int, h: int) -> bool:
        lam = self.levels[v]
        return lam is not None and lam >= h

    def members(self, h: int) -> FrozenSet[int]:
        """``L_h``: vertices with three v-linked ``B_h`` branches."""
        return frozenset(v for v, lam in enumerate(self.levels) if lam is not None and lam >= h)

    def bitmap(self, h: int) -> Tuple[bool, ...]:
        return tuple(lam is not None and lam >= h for lam in self.levels)


def levels_from_branches(g: Graph, branch: Dict[Tuple[int, int], int]) -> Tuple[Optional[int], ...]:
    out: List[Optional[int]] = []
    for v in g.vertices():
        if g.degree(v) < 3:
            out.append(None)
            continue
        vals = sorted((branch[(v, y)] for y in g.neighbors(v)), reverse=True)
        out.append(vals[2])
    return tuple(out)


def compute_levels(t: TreeLike, h_max: Optional[int] = None) -> LevelTable:
    """Levels of every vertex of degree at least 3.

    ``h_max`` only records the range the caller is interested in; levels are
    always exact.
    """
    rt = _as_rooted(t)
    branch = branch_values(rt)
    return LevelTable(levels_from_branches(rt.graph, branch), branch, h_max)


def compute_weight(t: TreeLike, levels: LevelTable, sub: Iterable[int], w: int) -> int:
    """Number of ``L_w`` vertices of the host tree inside ``sub``."""
    g = t.graph if isinstance(t, RootedTree) else t
    count = 0
    for v in set(sub):
        g.check_vertex(v)
        if levels.contains(v, w):
            count += 1
    return count


def compute_signature(t: RootedTree, levels: LevelTable, u: int, w: int) -> Tuple[int, int]:
    """Weights of the two child subtrees of ``u``, larger first."""
    kids = t.children(u)
    if len(kids) != 2:
        raise GraphError(f"vertex {t.graph.label(u)} has {len(kids)} children, expected 2")
    a, b = (compute_weight(t, levels, t.subtree(c), w) for c in kids)
    return (a, b) if a >= b else (b, a)


# ---------------------------------------------------------------------------
# pathwidth of trees


def _vs_rooted(adj: Sequence[Sequence[int]], allowed: FrozenSet[int], root: int) -> Tuple[int, Optional[int]]:
    """Vertex separation of the subtree on ``allowed`` rooted at ``root``.

    Returns the value and the critical vertex (a vertex of that value with
    two children of that value), following the critical-vertex rule for
    rooted trees.
    """
    parent = {root: -1}
    order = [root]
    for x in order:
        for y in adj[x]:
            if y in allowed and y not in parent:
                parent[y] = x
                order.append(y)
    children: Dict[int, List[int]] = {x: [] for x in order}
    for x in order[1:]:
        children[parent[x]].append(x)
    res: Dict[int, Tuple[int, Optional[int]]] = {}

    def collect(top: int) -> set:
        out = [top]
        for x in out:
            out.extend(children[x])
        return set(out)

    for u in reversed(order):
        ch = children[u]
        if not ch:
            res[u] = (0, None)
            continue
        k = max(res[c][0] for c in ch)
        if k == 0:
            res[u] = (1, None)  # a star: any edge needs width 1
            continue
        top = [c for c in ch if res[c][0] == k]
        if len(top) >= 3:
            res[u] = (k + 1, None)
        elif len(top) == 2:
            if any(res[c][1] is not None for c in top):
                res[u] = (k + 1, None)
            else:
                res[u] = (k, u)
        else:
            crit = res[top[0]][1]
            if crit is None:
                res[u] = (k, None)
            else:
                rest = frozenset(collect(u) - collect(crit))
                k2, _ = _vs_rooted(adj, rest, u)
                res[u] = (k + 1, None) if k2 >= k else (k, crit)
    return res[root]


def tree_pathwidth(t: TreeLike) -> int:
    """Exact pathwidth of a tree (equal to its vertex separation number)."""
    rt = _as_rooted(t)
    g = rt.graph
    if g.n <= 1:
        return 0
    return _vs_rooted(g.adjacency, frozenset(g.vertices()), rt.root)[0]


# ---------------------------------------------------------------------------
# B_h extraction


@dataclass(frozen=True)
class BhEmbedding:
    """A ``B_h``-subtree of a host tree: its root and edge set."""

    height: int
    root: int
    edges: FrozenSet[Edge]

    def vertices(self) -> FrozenSet[int]:
        out = {self.root}
        for e in self.edges:
            out.update(e)
        return frozenset(out)


def is_bh_subtree(g: Graph, root: int, edges: Iterable[Edge], h: int) -> bool:
    """Whether ``edges`` form a subdivided full binary tree of height ``h`` rooted at ``root``."""
    es = {edge_key(*e) for e in edges}
    if any(not g.has_edge(*e) for e in es):
        return False
    adj: Dict[int, List[int]] = {root: []}
    for u, v in es:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if len(es) != len(adj) - 1:
        return False
    if h == 0:
        return not es
    seen = {root}
    stack = [(root, -1, 0)]
    leaf_depths = set()
    while stack:
        x, p, branchings = stack.pop()
        kids = [y for y in adj[x] if y != p]
        for y in kids:
            if y in seen:
                return False
            seen.add(y)
        if x == root and len(kids) != 2:
            return False
        if len(kids) > 2:
            return False
        if len(kids) == 2:
            branchings += 1
        if not kids:
            leaf_depths.add(branchings)
        for y in kids:
            stack.append((y, x, branchings))
    return len(seen) == len(adj) and leaf_depths == {h}


def max_Bh(t: TreeLike) -> Tuple[int, BhEmbedding]:
    """Largest ``h`` such that the tree contains a ``B_h``-tree, with a witness."""
    rt = _as_rooted(t)
    g = rt.graph
    if g.n < 2:
        raise GraphError("need a tree with at least two vertices")
    vals = branch_values(rt)
    best_h, best_r = -1, -1
    for v in g.vertices():
        gs = sorted((vals[(v, y)] for y in g.neighbors(v)), reverse=True)
        h = gs[1] + 1 if len(gs) >= 2 else 0
        if h > best_h:
            best_h, best_r = h, v
    edges: List[Edge] = []

    def split(x: int, prev: int) -> int:
        gs = sorted((vals[(x, c)] for c in g.neighbors(x) if c != prev), reverse=True)
        return gs[1] + 1 if len(gs) >= 2 else 0

    def descend(prev: int, x: int, k: int) -> Tuple[List[int], int]:
        path = [prev, x]
        while k > 0 and split(x, prev) < k:
            nxt = next(c for c in g.neighbors(x) if c != prev and vals[(x, c)] >= k)
            prev, x = x, nxt
            path.append(x)
        return path, x

    todo = [(best_r, -1, best_h)]
    while todo:
        r, excl, h = todo.pop()
        if h == 0:
            continue
        picks = [y for y in g.neighbors(r) if y != excl and vals[(r, y)] >= h - 1][:2]
        for y in picks:
            path, s = descend(r, y, h - 1)
            edges.extend(edge_key(path[i], path[i + 1]) for i in range(len(path) - 1))
            todo.append((s, path[-2], h - 1))
    return best_h, BhEmbedding(best_h, best_r, frozenset(edges))


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class TreeParts:
    """The decomposition of a subcubic tree around its main path.

    ``u_chain`` holds the vertices chosen at levels ``w+5, w+4, w+3, w+2``.
    ``top_path`` runs ``v_top .. u_top``, ``bot_path`` runs ``v_bot .. u_bot``
    and ``main_path`` runs ``u_top .. v_bot``.
    """

    tree: RootedTree
    w: int
    levels: LevelTable
    root: int
    u_chain: Tuple[int, int, int, int]
    v_top: int
    v_bot: int
    top_path: Path
    bot_path: Path
    main_path: Path
    A: FrozenSet[int]
    C: FrozenSet[int]
    D: FrozenSet[int]
    T1: FrozenSet[int]
    T2: FrozenSet[int]
    omega_min: int

    @property
    def u_top(self) -> int:
        return self.u_chain[0]

    @property
    def u_bot(self) -> int:
        return self.u_chain[-1]

    @property
    def level_profile(self) -> Dict[str, int]:
        w = self.w
        return {"weight": w, "u_bot": w + 2, "u_top": w + 5, "root": w + 7}

    def summary(self) -> dict:
        lab = self.tree.graph.label
        return {
            "w": self.w,
            "root": lab(self.root),
            "u_chain": [lab(u) for u in self.u_chain],
            "v_top": lab(self.v_top),
            "v_bot": lab(self.v_bot),
            "main_path": [lab(x) for x in self.main_path],
            "sizes": {"A": len(self.A), "C": len(self.C), "D": len(self.D)},
            "omega_min": self.omega_min,
        }


def _minimal(rt: RootedTree, S: Iterable[int]) -> List[int]:
    """Members of ``S`` with no other member strictly below them."""
    S = set(S)
    blocked = set()
    for s in S:
        x = rt.parent[s]
        while x != -1 and x not in blocked:
            blocked.add(x)
            x = rt.parent[x]
    return sorted(s for s in S if s not in blocked)


def _u_ancestor(rt: RootedTree, u: int) -> int:
    g = rt.graph
    x = rt.parent[u]
    while x != -1 and g.degree(x) < 3:
        x = rt.parent[x]
    if x == -1:
        raise GraphError(f"no branch vertex above {g.label(u)}")
    return x


def decompose_tree(t: Graph, w: int = 10) -> TreeParts:
    """Split a subcubic tree into the parts ``A``, ``C``, ``D`` around the main path.

    Every free choice takes the smallest vertex id.
    """
    if not t.is_tree():
        raise GraphError("graph is not a tree")
    if t.max_degree() > 3:
        raise GraphError("tree is not subcubic")
    if w < 0:
        raise GraphError("weight level must be non-negative")
    levels = compute_levels(RootedTree(t, 0), w + 7)
    for h in range(w + 2, w + 8):
        if not levels.members(h):
            raise TreeTooShallow(f"tree too shallow: L_{h} is empty")
    root = min(levels.members(w + 7))
    rt = RootedTree(t, root)
    Lw = levels.members(w)

    def weight(vs: Iterable[int]) -> int:
        return sum(1 for v in vs if v in Lw)

    lmin = _minimal(rt, levels.members(w + 5))
    u_top = min(lmin, key=lambda s: (weight(rt.subtree(s)), s))
    kids = rt.children(u_top)
    if len(kids) != 2:
        raise GraphError(f"u_top {t.label(u_top)} does not have two children")
    sides = [rt.subtree(c) for c in kids]
    wts = [weight(s) for s in sides]
    # T1 is the heavier side; on a tie T2 is the side of the smaller child
    i2 = 1 if wts[0] > wts[1] else 0
    T2 = sides[i2]
    T1 = sides[1 - i2]
    chain = [u_top]
    region = T2
    for k in (w + 4, w + 3, w + 2):
        cand = _minimal(rt, levels.members(k) & region)
        if not cand:
            raise TreeTooShallow(f"tree too shallow: no L_{k} vertex below {t.label(chain[-1])}")
        chain.append(cand[0])
        region = rt.subtree(chain[-1])
    u_bot = chain[-1]
    v_top = _u_ancestor(rt, u_top)
    v_bot = _u_ancestor(rt, u_bot)
    top_path = rt.path(v_top, u_top)
    bot_path = rt.path(v_bot, u_bot)
    main_path = rt.path(u_top, v_bot)
    D = rt.subtree(u_bot)
    C = rt.subtree(u_top) - D - set(bot_path[1:])
    A = frozenset(t.vertices()) - rt.subtree(u_top) - set(top_path[1:])
    return TreeParts(
        tree=rt,
        w=w,
        levels=levels,
        root=root,
        u_chain=tuple(chain),
        v_top=v_top,
        v_bot=v_bot,
        top_path=top_path,
        bot_path=bot_path,
        main_path=main_path,
        A=frozenset(A),
        C=frozenset(C),
        D=frozenset(D),
        T1=T1,
        T2=T2,
        omega_min=weight(rt.subtree(u_top)),
    )


def validate_tree_parts(parts: TreeParts) -> List[str]:
    """Recheck (T1)-(T7) from scratch; returns the list of violations.

    Levels are recomputed with :func:`strahler_branch_values` and the tree
    order is rebuilt from the stored root.
    """
    problems: List[str] = []
    g = parts.tree.graph
    w = parts.w
    branch = strahler_branch_values(g)
    lam = levels_from_branches(g, branch)

    def in_level(v: int, h: int) -> bool:
        return lam[v] is not None and lam[v] >= h

    def level_set(h: int) -> set:
        return {v for v in g.vertices() if in_level(v, h)}

    if tuple(lam) != tuple(parts.levels.levels):
        problems.append("levels disagree with the Strahler recomputation")
    rt = RootedTree(g, parts.root)
    Lw = level_set(w)

    def weight(vs: Iterable[int]) -> int:
        return sum(1 for v in vs if v in Lw)

    def minimal_in(S: set) -> set:
        return {s for s in S if not any(x != s and rt.le(x, s) for x in S)}

    # (T1)
    if not in_level(parts.root, w + 7):
        problems.append(f"(T1) root is not in L_{w + 7}")
    if not in_level(parts.root, w + 6):
        problems.append(f"(T1) root is not in L_{w + 6}")
    for v in g.vertices():
        p = rt.parent[v]
        if p != -1 and branch[(v, p)] < w + 6:
            problems.append(f"(T1) no v-linked B_{w + 6} outside T_v for {g.label(v)}")
            break
    # (T2)
    u_top, u_bot = parts.u_top, parts.u_bot
    lmin = minimal_in(level_set(w + 5))
    if u_top not in lmin:
        problems.append(f"(T2) u_top is not a minimal L_{w + 5} vertex")
    if lmin:
        best = min(weight(rt.subtree(s)) for s in lmin)
        if weight(rt.subtree(u_top)) != best or parts.omega_min != best:
            problems.append("(T2) u_top does not minimise the subtree weight")
    # (T3)
    for k, u in zip((w + 5, w + 4, w + 3, w + 2), parts.u_chain):
        if not in_level(u, k):
            problems.append(f"(T3) u_{k} is not in L_{k}")
        elif any(x != u and rt.le(x, u) and in_level(x, k) for x in g.vertices()):
            problems.append(f"(T3) u_{k} is not minimal in L_{k}")
    for hi, lo in zip(parts.u_chain, parts.u_chain[1:]):
        if not rt.lt(lo, hi):
            problems.append("(T3) u-chain is not descending")
    # (T4)
    mp = parts.main_path
    if mp != rt.path(u_top, parts.v_bot):
        problems.append("(T4) main path is not the u_top-v_bot path")
    if parts.u_chain[1] not in mp or parts.u_chain[2] not in mp:
        problems.append("(T4) main path misses a middle u-vertex")
    if not rt.lt(u_bot, parts.v_bot):
        problems.append("(T4) v_bot is not above u_bot")
    # (T5)
    if any(rt.parent[mp[i + 1]] != mp[i] for i in range(len(mp) - 1)):
        problems.append("(T5) main path is not linearly ordered")
    # (T6)
    kids = rt.children(u_top)
    if len(kids) != 2:
        problems.append("(T6) u_top does not have two children")
    else:
        sides = [rt.subtree(c) for c in kids]
        holder = [s for s in sides if set(mp[1:]) <= s]
        if len(holder) != 1 and len(mp) > 1:
            problems.append("(T6) main path is not inside one side of u_top")
        elif len(mp) > 1:
            t2 = holder[0]
            t1 = sides[0] if sides[1] is t2 else sides[1]
            if weight(t1) < weight(t2):
                problems.append("(T6) the side holding the main path is heavier")
            if t2 != parts.T2 or t1 != parts.T1:
                problems.append("(T6) stored sides do not match")
    # (T7)
    for name, path, lo in (("top", parts.top_path, u_top), ("bot", parts.bot_path, u_bot)):
        if path != rt.path(path[0], lo):
            problems.append(f"(T7) {name} path does not end at its u-vertex")
        if any(g.degree(x) != 2 for x in path[1:-1]):
            problems.append(f"(T7) interior of the {name} path has a vertex of degree != 2")
        if g.degree(path[0]) < 3 or not rt.lt(lo, path[0]):
            problems.append(f"(T7) {name} path does not start at a branch vertex above it")
    D = rt.subtree(u_bot)
    C = rt.subtree(u_top) - D - set(parts.bot_path[1:])
    A = set(g.vertices()) - rt.subtree(u_top) - set(parts.top_path[1:])
    if parts.D != D or parts.C != C or parts.A != A:
        problems.append("(T7) parts A, C, D do not match their definitions")
    return problems
