"""Exact search for (A-B, C-D)-linkages, packings of two linkages and robustness."""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from typing import AbstractSet, Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .constructions import CondensedWall, GridLinkageInstance
from .disjoint_paths import disjoint_set_paths
from .graph import Edge, Graph, GraphError, Path, bfs_path, edge_key, path_edges
from .reports import (
    EXHAUSTED,
    FAILS,
    HOLDS,
    TIMEOUT,
    Budget,
    SearchTimeout,
    Stopwatch,
    VerificationReport,
)

MODES = ("vertex", "edge")


@dataclass(frozen=True)
class Linkage:
    """An A-B path together with a C-D path.

    ``mode`` says whether the two paths are vertex-disjoint or only
    edge-disjoint.
    """

    path_ab: Path
    path_cd: Path
    mode: str = "vertex"

    def vertices(self) -> frozenset:
        return frozenset(self.path_ab) | frozenset(self.path_cd)

    def edges(self) -> frozenset:
        return frozenset(path_edges(self.path_ab)) | frozenset(path_edges(self.path_cd))

    def to_json(self) -> dict:
        return {"path_ab": list(self.path_ab), "path_cd": list(self.path_cd), "mode": self.mode}


def _check_set_path(g: Graph, path: Sequence[int], X: AbstractSet[int], Y: AbstractSet[int], name: str) -> List[str]:
    problems = []
    if not g.is_path(path):
        return [f"{name} is not a path of the graph"]
    if path[0] not in X or path[-1] not in Y:
        problems.append(f"{name} has wrong endpoints")
    if any(v in X for v in path[1:]) or any(v in Y for v in path[:-1]):
        problems.append(f"{name} meets its terminal sets more than once")
    return problems


def validate_linkage(
    g: Graph,
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    D: Iterable[int],
    link: Linkage,
) -> List[str]:
    """Violations of ``link`` as a linkage in ``g``; empty means valid."""
    A, B, C, D = (frozenset(s) for s in (A, B, C, D))
    problems = _check_set_path(g, link.path_ab, A, B, "A-B path")
    problems += _check_set_path(g, link.path_cd, C, D, "C-D path")
    if link.mode == "vertex":
        if set(link.path_ab) & set(link.path_cd):
            problems.append("paths share a vertex")
    elif link.mode == "edge":
        if set(path_edges(link.path_ab)) & set(path_edges(link.path_cd)):
            problems.append("paths share an edge")
    else:
        problems.append(f"unknown mode {link.mode!r}")
    return problems


def _reaches(
    g: Graph,
    sources: Iterable[int],
    targets: AbstractSet[int],
    blocked: AbstractSet[int],
    blocked_edges: AbstractSet[Edge] = frozenset(),
) -> bool:
    seen = set()
    queue = deque()
    for s in sources:
        if s not in blocked and s not in seen:
            if s in targets:
                return True
            seen.add(s)
            queue.append(s)
    adj = g.adjacency
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y in seen or y in blocked:
                continue
            if blocked_edges and edge_key(x, y) in blocked_edges:
                continue
            if y in targets:
                return True
            seen.add(y)
            queue.append(y)
    return False


def iter_set_paths(
    g: Graph,
    X: Iterable[int],
    Y: Iterable[int],
    blocked: AbstractSet[int] = frozenset(),
    blocked_edges: AbstractSet[Edge] = frozenset(),
    budget: Optional[Budget] = None,
    prune: Optional[Callable[[List[int], set], bool]] = None,
) -> Iterator[Path]:
    """Every X-Y path avoiding the blocked vertices and edges.

    A path meets ``X`` only in its first vertex and ``Y`` only in its last.
    Start vertices and neighbours are tried in ascending order.  ``prune``
    sees each partial path and may return ``False`` to cut the branch; it
    must only cut branches that cannot lead to a wanted path.
    """
    Xs = frozenset(X)
    Ys = frozenset(Y)
    adj = g.adjacency
    for s in sorted(Xs):
        if s in blocked:
            continue
        if budget is not None:
            budget.tick()
        if s in Ys:
            yield (s,)
            continue
        path = [s]
        on = {s}
        if prune is not None and not prune(path, on):
            continue
        stack = [iter(adj[s])]
        while stack:
            x = path[-1]
            for y in stack[-1]:
                if y in on or y in blocked or y in Xs:
                    continue
                if blocked_edges and edge_key(x, y) in blocked_edges:
                    continue
                if budget is not None:
                    budget.tick()
                if y in Ys:
                    yield tuple(path) + (y,)
                    continue
                path.append(y)
                on.add(y)
                if prune is None or prune(path, on):
                    stack.append(iter(adj[y]))
                    break
                path.pop()
                on.discard(y)
            else:
                stack.pop()
                on.discard(path.pop())


def _normalise(g: Graph, sets: Sequence[Iterable[int]], mode: str) -> Tuple[frozenset, ...]:
    if mode not in MODES:
        raise GraphError(f"mode must be one of {MODES}, got {mode!r}")
    out = []
    for name, s in zip("ABCD", sets):
        fs = frozenset(s)
        if not fs:
            raise GraphError(f"terminal set {name} is empty")
        for v in fs:
            g.check_vertex(v)
        out.append(fs)
    A, B, C, D = out
    if mode == "vertex" and (A | B) & (C | D):
        raise GraphError("in vertex mode the A/B terminals may not meet the C/D terminals")
    return tuple(out)


def _ab_pruner(
    g: Graph,
    B: frozenset,
    C: frozenset,
    D: frozenset,
    A: frozenset,
    mode: str,
    blocked: AbstractSet[int],
    blocked_edges: AbstractSet[Edge],
) -> Callable[[List[int], set], bool]:
    """Cut partial A-B paths that cannot finish or that disconnect C from D."""

    def prune(path: List[int], on: set) -> bool:
        x = path[-1]
        stop = set(blocked) | on | A
        stop.discard(x)
        if not _reaches(g, [x], B, stop - {x}, blocked_edges):
            return False
        if mode == "vertex":
            return _reaches(g, C, D, set(blocked) | on, blocked_edges)
        used = set(blocked_edges) | set(path_edges(path))
        return _reaches(g, C, D, blocked, used)

    return prune


BACKTRACK_SLICE = 20_000


def find_linkage(
    g: Graph,
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    D: Iterable[int],
    mode: str = "vertex",
    budget: Optional[Budget] = None,
    blocked: Iterable[int] = (),
    blocked_edges: Iterable[Edge] = (),
    method: str = "auto",
) -> Optional[Linkage]:
    """An (A-B, C-D)-linkage avoiding the blocked vertices/edges, or ``None``.

    ``None`` is returned only when no linkage exists.  In vertex mode the
    default ``method="auto"`` tries shortest paths, then a bounded slice of
    backtracking, then the exact frontier program; ``"backtrack"`` and
    ``"frontier"`` force one engine.  Running out of ``budget`` raises
    :class:`SearchTimeout`.
    """
    A, B, C, D = _normalise(g, (A, B, C, D), mode)
    bl = frozenset(blocked)
    be = frozenset(edge_key(*e) for e in blocked_edges)
    if method not in ("auto", "backtrack", "frontier"):
        raise GraphError(f"unknown method {method!r}")
    if mode == "edge" or method == "backtrack":
        return _backtrack_linkage(g, A, B, C, D, mode, budget, bl, be)
    if method == "auto":
        link = _greedy_linkage(g, A, B, C, D, bl, be)
        if link is not None:
            return link
        limit = BACKTRACK_SLICE
        if budget is not None:
            limit = min(limit, max(budget.limit - budget.nodes, 1))
        part = Budget(limit)
        try:
            return _backtrack_linkage(g, A, B, C, D, mode, part, bl, be)
        except SearchTimeout:
            pass
        finally:
            if budget is not None:
                budget.tick(part.nodes)
    paths = disjoint_set_paths(g, [(A, B), (C, D)], bl, be, budget)
    return None if paths is None else Linkage(paths[0], paths[1], "vertex")


def _backtrack_linkage(g, A, B, C, D, mode, budget, bl, be) -> Optional[Linkage]:
    prune = _ab_pruner(g, B, C, D, A, mode, bl, be)
    for p in iter_set_paths(g, A, B, bl, be, budget, prune):
        if mode == "vertex":
            q = bfs_path(g, C, D, blocked=bl | set(p), blocked_edges=be)
        else:
            q = bfs_path(g, C, D, blocked=bl, blocked_edges=be | set(path_edges(p)))
        if budget is not None:
            budget.tick()
        if q is not None:
            return Linkage(p, q, mode)
    return None


def _greedy_linkage(g: Graph, A, B, C, D, blocked: frozenset, blocked_edges: frozenset = frozenset()) -> Optional[Linkage]:
    """Shortest A-B path followed by a shortest C-D path around it, if that works."""
    p = bfs_path(g, A, B, blocked=blocked, blocked_edges=blocked_edges)
    if p is None:
        return None
    q = bfs_path(g, C, D, blocked=blocked | set(p), blocked_edges=blocked_edges)
    return None if q is None else Linkage(p, q, "vertex")


def iter_linkages(
    g: Graph,
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    D: Iterable[int],
    mode: str = "vertex",
    budget: Optional[Budget] = None,
    blocked: Iterable[int] = (),
    blocked_edges: Iterable[Edge] = (),
) -> Iterator[Linkage]:
    """Every (A-B, C-D)-linkage, A-B path first, in ascending DFS order."""
    A, B, C, D = _normalise(g, (A, B, C, D), mode)
    bl = frozenset(blocked)
    be = frozenset(edge_key(*e) for e in blocked_edges)
    prune = _ab_pruner(g, B, C, D, A, mode, bl, be)
    for p in iter_set_paths(g, A, B, bl, be, budget, prune):
        if mode == "vertex":
            inner = iter_set_paths(g, C, D, bl | set(p), be, budget)
        else:
            inner = iter_set_paths(g, C, D, bl, be | set(path_edges(p)), budget)
        for q in inner:
            yield Linkage(p, q, mode)


def find_two_linkages(
    g: Graph,
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    D: Iterable[int],
    mode: str = "edge",
    budget: Optional[int] = None,
    claim: str = "two-linkages",
    params: Optional[dict] = None,
) -> VerificationReport:
    """Search for two linkages that are vertex- or edge-disjoint from each other.

    Each linkage is itself a vertex-disjoint pair of paths; ``mode`` is the
    disjointness required between the two linkages.  Every first linkage is
    enumerated and the second is searched in what remains.
    """
    A, B, C, D = (frozenset(s) for s in (A, B, C, D))
    _normalise(g, (A, B, C, D), "vertex")
    if mode not in MODES:
        raise GraphError(f"mode must be one of {MODES}, got {mode!r}")
    bud = Budget(budget)
    clock = Stopwatch()
    first = 0
    params = dict(params or {}, mode=mode)
    if mode == "vertex":
        try:
            paths = disjoint_set_paths(g, [(A, B), (C, D), (A, B), (C, D)], budget=bud)
        except SearchTimeout:
            return VerificationReport(
                claim, params, TIMEOUT, None,
                {"nodes": bud.nodes, "wall_time": clock.elapsed()}, {"budget": bud.limit},
            )
        stats = {"nodes": bud.nodes, "wall_time": clock.elapsed()}
        if paths is None:
            return VerificationReport(claim, params, EXHAUSTED, None, stats, {"engine": "frontier"})
        cert = {
            "first": Linkage(paths[0], paths[1]).to_json(),
            "second": Linkage(paths[2], paths[3]).to_json(),
        }
        return VerificationReport(claim, params, HOLDS, cert, stats, {"engine": "frontier"})
    try:
        for l1 in iter_linkages(g, A, B, C, D, "vertex", bud):
            first += 1
            l2 = find_linkage(g, A, B, C, D, "vertex", bud, blocked_edges=l1.edges())
            if l2 is not None:
                cert = {"first": l1.to_json(), "second": l2.to_json()}
                return VerificationReport(
                    claim, params, HOLDS, cert,
                    {"nodes": bud.nodes, "first_linkages": first, "wall_time": clock.elapsed()},
                    {"engine": "backtrack"},
                )
    except SearchTimeout:
        return VerificationReport(
            claim, params, TIMEOUT, None,
            {"nodes": bud.nodes, "first_linkages": first, "wall_time": clock.elapsed()},
            {"budget": bud.limit},
        )
    return VerificationReport(
        claim, params, EXHAUSTED, None,
        {"nodes": bud.nodes, "first_linkages": first, "wall_time": clock.elapsed()},
        {"engine": "backtrack"},
    )


# ---------------------------------------------------------------------------
# robustness


def _wall_fast_linkage(w: CondensedWall, removed: AbstractSet[Edge]) -> Optional[Linkage]:
    """Route ``a P^j b`` through an untouched row and a c-d path around it."""
    g = w.graph
    for j in range(1, w.size + 1):
        p = w.linkage_path(j)
        if any(e in removed for e in path_edges(p)):
            continue
        q = bfs_path(g, [w.c], [w.d], blocked=set(p), blocked_edges=removed)
        if q is not None:
            return Linkage(p, q, "vertex")
    return None


def _edge_sets(edges: Sequence[Edge], k: int) -> Iterator[Tuple[Edge, ...]]:
    for size in range(0, k + 1):
        yield from itertools.combinations(edges, size)


def verify_hitting_robustness(
    w: CondensedWall,
    budget: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
    node_budget: Optional[int] = None,
) -> VerificationReport:
    """Check that ``W - X`` keeps an (a-b, c-d)-linkage for every small edge set ``X``.

    ``budget`` bounds ``|X|``.  In ``sample`` mode ``samples`` sets of size
    ``min(budget, |E|)`` are drawn with a seeded generator.
    """
    g = w.graph
    edges = list(g.edges())
    params = {"r": w.size, "budget": budget, "mode": mode}
    if mode == "exhaustive":
        cases: Iterable[Tuple[Edge, ...]] = _edge_sets(edges, budget)
    elif mode == "sample":
        rng = random.Random(seed)
        k = min(budget, len(edges))
        cases = (tuple(sorted(rng.sample(edges, k))) for _ in range(samples))
        params.update(samples=samples, seed=seed)
    else:
        raise GraphError(f"mode must be 'exhaustive' or 'sample', got {mode!r}")
    clock = Stopwatch()
    checked = fast = nodes = 0
    term = [[w.a], [w.b], [w.c], [w.d]]

    def stats() -> dict:
        return {"cases": checked, "fast_path": fast, "nodes": nodes, "wall_time": clock.elapsed()}

    for X in cases:
        checked += 1
        removed = frozenset(X)
        if _wall_fast_linkage(w, removed) is not None:
            fast += 1
            continue
        bud = Budget(node_budget)
        try:
            link = find_linkage(g, *term, "vertex", bud, blocked_edges=removed)
        except SearchTimeout:
            nodes += bud.nodes
            return VerificationReport(
                "hitting-robustness", params, TIMEOUT, None, stats(),
                {"unresolved_set": [list(e) for e in sorted(removed)]},
            )
        nodes += bud.nodes
        if link is None:
            return VerificationReport(
                "hitting-robustness", params, FAILS,
                {"hitting_set": [list(e) for e in sorted(removed)]}, stats(),
            )
    witness = _wall_fast_linkage(w, frozenset())
    cert = None if witness is None else witness.to_json()
    return VerificationReport("hitting-robustness", params, HOLDS, cert, stats(), {"witness": "linkage in the undamaged wall"})


def verify_vertex_robustness(
    inst: GridLinkageInstance, k: int, node_budget: Optional[int] = None, collect: bool = False
) -> VerificationReport:
    """Check that every vertex set ``S`` with ``|S| <= k`` leaves an (A-B, C-D)-linkage.

    The first failing set is the certificate.  With ``collect`` the loop
    runs to the end and ``detail["failing_sets"]`` lists every failure.
    """
    g = inst.graph
    params = {"r": inst.r, "max_deleted": k}
    clock = Stopwatch()
    checked = fast = nodes = 0
    failing: List[Tuple[int, ...]] = []

    def stats() -> dict:
        return {"cases": checked, "fast_path": fast, "nodes": nodes, "wall_time": clock.elapsed()}

    for size in range(k + 1):
        for S in itertools.combinations(g.vertices(), size):
            checked += 1
            sets = [s - set(S) for s in (inst.A, inst.B, inst.C, inst.D)]
            link = None
            if all(sets):
                link = _greedy_linkage(g, *sets, frozenset(S))
                if link is not None:
                    fast += 1
                    continue
                bud = Budget(node_budget)
                try:
                    link = find_linkage(g, *sets, "vertex", bud, blocked=S)
                except SearchTimeout:
                    nodes += bud.nodes
                    return VerificationReport(
                        "grid-proposition", params, TIMEOUT, None, stats(),
                        {"unresolved_set": list(S)},
                    )
                nodes += bud.nodes
            if link is None:
                failing.append(S)
                if not collect:
                    break
        if failing and not collect:
            break
    if failing:
        S = failing[0]
        detail = {}
        if collect:
            detail["failing_sets"] = [[g.label(v) for v in F] for F in failing]
        return VerificationReport(
            "grid-proposition", params, FAILS,
            {"deleted_vertices": list(S), "labels": [g.label(v) for v in S]},
            stats(), detail,
        )
    return VerificationReport("grid-proposition", params, HOLDS, None, stats())


def spine_edge_forced(w: CondensedWall, j: int) -> List[Path]:
    """c-d paths of ``W - E(a P^j b) - {a, b}`` that miss the edge ``z^(j-1) z^j``.

    The list is empty exactly when every such path uses that edge.
    """
    g = w.graph
    gone = frozenset(path_edges(w.linkage_path(j)))
    spine = edge_key(w.z[j - 1], w.z[j])
    return [
        p
        for p in iter_set_paths(g, [w.c], [w.d], blocked=frozenset({w.a, w.b}), blocked_edges=gone)
        if spine not in path_edges(p)
    ]
