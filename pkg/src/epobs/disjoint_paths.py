"""Exact vertex-disjoint set-to-set paths by a frontier dynamic program.

Each requested pair ``(X, Y)`` gets a fresh source joined to all of ``X`` and
a fresh sink joined to all of ``Y``.  Edges are then decided one at a time
along a vertex order with a small frontier; a state records, for every
frontier vertex, whether it is unused, saturated or the open end of a path
fragment (and what sits at the fragment's other end).  This is the usual
mate-array technique for path enumeration, specialised to decide existence
and recover one witness.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .graph import Edge, Graph, GraphError, Path, edge_key
from .reports import Budget

FREE = 0
SAT = 1
# entries >= 2 are open ends whose mate is vertex (entry - 2);
# entries < 0 are open ends closed on the far side by a terminal of type (-entry - 1)


def _vertex_order(adj: Dict[int, List[int]], vertices: Sequence[int]) -> List[int]:
    """Greedy order keeping the frontier small; ties go to the smallest id."""
    remaining = set(vertices)
    placed = set()
    pending = {v: len(adj[v]) for v in vertices}  # neighbours not yet placed
    frontier = set()
    order = []
    while remaining:
        best = None
        best_key = None
        cands = {y for x in frontier for y in adj[x] if y in remaining} or remaining
        for v in cands:
            grow = 1 if any(y not in placed for y in adj[v] if y != v) else 0
            shrink = sum(1 for y in adj[v] if y in frontier and pending[y] == 1)
            key = (grow - shrink, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        v = best
        order.append(v)
        remaining.discard(v)
        placed.add(v)
        for y in adj[v]:
            pending[y] -= 1
        frontier.add(v)
        frontier = {x for x in frontier if pending[x] > 0}
    return order


def disjoint_set_paths(
    g: Graph,
    pairs: Sequence[Tuple[Iterable[int], Iterable[int]]],
    blocked: Iterable[int] = (),
    blocked_edges: Iterable[Edge] = (),
    budget: Optional[Budget] = None,
) -> Optional[List[Path]]:
    """Pairwise vertex-disjoint ``X_i``-``Y_i`` paths, or ``None`` if none exist.

    Identical pairs may be requested more than once.  Each returned path
    meets its ``X`` only in the first vertex and its ``Y`` only in the last.
    The answer is exact; ``budget`` counts state transitions and raises
    :class:`SearchTimeout` when exceeded.
    """
    bl = frozenset(blocked)
    be = frozenset(edge_key(*e) for e in blocked_edges)
    classes: List[Tuple[FrozenSet[int], FrozenSet[int]]] = []
    pair_class = []
    for X, Y in pairs:
        key = (frozenset(X) - bl, frozenset(Y) - bl)
        for v in key[0] | key[1]:
            g.check_vertex(v)
        if not key[0] or not key[1]:
            return None
        if key not in classes:
            classes.append(key)
        pair_class.append(classes.index(key))
    need = [pair_class.count(k) for k in range(len(classes))]

    n = g.n
    adj: Dict[int, List[int]] = {}
    for v in g.vertices():
        if v in bl:
            continue
        adj[v] = [y for y in g.neighbors(v) if y not in bl and edge_key(v, y) not in be]
    ttype: Dict[int, int] = {}
    for i, k in enumerate(pair_class):
        s, t = n + 2 * i, n + 2 * i + 1
        X, Y = classes[k]
        adj[s] = sorted(X)
        adj[t] = sorted(Y)
        for x in X:
            adj[x].append(s)
        for y in Y:
            adj[y].append(t)
        ttype[s] = 2 * k
        ttype[t] = 2 * k + 1

    real = [v for v in sorted(adj) if v < n]
    order = _vertex_order({v: [y for y in adj[v] if y < n] for v in real}, real)
    terminals = sorted(ttype)
    pos_in_order = {v: i for i, v in enumerate(order)}
    introduced = set(terminals)
    left = {v: len(adj[v]) for v in adj}

    frontier: List[int] = list(terminals)
    start = tuple(-(ttype[t] + 1) for t in terminals)
    layer: Dict[Tuple, Tuple] = {(start, tuple(0 for _ in classes)): None}
    history: List[Tuple[str, object, Dict]] = []

    def tick() -> None:
        if budget is not None:
            budget.tick()

    for v in order:
        # introduce v
        frontier = frontier + [v]
        layer = {(st + (FREE,), done): ptr for (st, done), ptr in layer.items()}
        history.append(("grow", None, {k: k for k in layer}))
        introduced.add(v)
        for y in sorted(adj[v], key=lambda y: (y >= n, pos_in_order.get(y, -1), y)):
            if y not in introduced or y == v:
                continue
            pu = frontier.index(v)
            pv = frontier.index(y)
            new: Dict[Tuple, Tuple] = {}
            for key in layer:
                st, done = key
                tick()
                if key not in new:
                    new[key] = (key, False)
                res = _use_edge(st, done, pu, pv, frontier, n)
                if res is not None:
                    if res[1] != done:
                        if any(res[1][k] > need[k] for k in range(len(need))):
                            continue
                    if res not in new:
                        new[res] = (key, True)
            history.append(("edge", (v, y), new))
            layer = new
            left[v] -= 1
            left[y] -= 1
        # retire saturated or finished vertices
        gone = [i for i, x in enumerate(frontier) if left[x] == 0]
        if gone:
            keep = [i for i in range(len(frontier)) if left[frontier[i]] != 0]
            new = {}
            for (st, done) in layer:
                tick()
                if any(st[i] not in (FREE, SAT) for i in gone):
                    continue
                nst = tuple(st[i] for i in keep)
                nkey = (nst, done)
                if nkey not in new:
                    new[nkey] = (st, done)
            history.append(("shrink", tuple(gone), new))
            layer = new
            frontier = [frontier[i] for i in keep]
        if not layer:
            return None

    final = None
    for (st, done) in layer:
        if list(done) == need and all(e in (FREE, SAT) for e in st):
            final = (st, done)
            break
    if final is None:
        return None

    used: List[Edge] = []
    key = final
    for kind, info, table in reversed(history):
        ptr = table[key]
        if kind == "edge":
            prev, took = ptr
            if took:
                used.append(info)
            key = prev
        elif kind == "shrink":
            key = ptr
        else:
            st, done = key
            key = (st[:-1], done)
    return _extract_paths(used, pair_class, classes, n)


def _use_edge(
    st: Tuple[int, ...], done: Tuple[int, ...], pu: int, pv: int, frontier: List[int], n: int
) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    eu, ev = st[pu], st[pv]
    if eu == SAT or ev == SAT:
        return None
    u, v = frontier[pu], frontier[pv]
    s = list(st)
    dn = done
    if eu == FREE and ev == FREE:
        s[pu] = v + 2
        s[pv] = u + 2
    elif eu == FREE or ev == FREE:
        if eu == FREE:
            pf, po, eo = pu, pv, ev
            fv = u
        else:
            pf, po, eo = pv, pu, eu
            fv = v
        s[po] = SAT
        if eo >= 2:
            w = eo - 2
            s[pf] = w + 2
            s[frontier.index(w)] = fv + 2
        else:
            s[pf] = eo
    elif eu >= 2 and ev >= 2:
        if eu - 2 == v:
            return None  # would close a cycle
        w1, w2 = eu - 2, ev - 2
        s[pu] = SAT
        s[pv] = SAT
        s[frontier.index(w1)] = w2 + 2
        s[frontier.index(w2)] = w1 + 2
    elif eu >= 2 or ev >= 2:
        if eu >= 2:
            w, t = eu - 2, ev
        else:
            w, t = ev - 2, eu
        s[pu] = SAT
        s[pv] = SAT
        s[frontier.index(w)] = t
    else:
        t1, t2 = -eu - 1, -ev - 1
        if t1 // 2 != t2 // 2 or t1 == t2:
            return None
        s[pu] = SAT
        s[pv] = SAT
        k = t1 // 2
        dn = done[:k] + (done[k] + 1,) + done[k + 1 :]
    return tuple(s), dn


def _extract_paths(
    used: List[Edge],
    pair_class: List[int],
    classes: List[Tuple[FrozenSet[int], FrozenSet[int]]],
    n: int,
) -> List[Path]:
    nbr: Dict[int, List[int]] = {}
    for u, v in used:
        nbr.setdefault(u, []).append(v)
        nbr.setdefault(v, []).append(u)
    walks_by_class: Dict[int, List[List[int]]] = {}
    for i, k in enumerate(pair_class):
        s = n + 2 * i
        if s not in nbr:
            raise GraphError("internal error: source without a path")
        walk = [s]
        prev = None
        cur = s
        while True:
            nxt = [y for y in nbr[cur] if y != prev]
            if not nxt or (cur != s and cur >= n):
                break
            prev, cur = cur, nxt[0]
            walk.append(cur)
        walks_by_class.setdefault(k, []).append(walk[1:-1])
    out: List[Path] = []
    counters = {k: 0 for k in walks_by_class}
    for k in pair_class:
        walk = walks_by_class[k][counters[k]]
        counters[k] += 1
        X, Y = classes[k]
        out.append(_shortcut(walk, X, Y))
    return out


def _shortcut(walk: List[int], X: FrozenSet[int], Y: FrozenSet[int]) -> Path:
    """Sub-walk meeting ``X`` only at its start and ``Y`` only at its end."""
    j = next(i for i, x in enumerate(walk) if x in Y)
    i = max(i for i in range(j + 1) if walk[i] in X)
    return tuple(walk[i : j + 1])
