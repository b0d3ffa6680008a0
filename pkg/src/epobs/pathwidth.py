"""Path decompositions: exact pathwidth of small graphs and the wall layout."""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Sequence, Tuple

import numpy as np

from .constructions import CondensedWall
from .graph import Graph, GraphError

MAX_EXACT_VERTICES = 24


@dataclass(frozen=True)
class PathDecomposition:
    bags: Tuple[FrozenSet[int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def to_json(self) -> dict:
        return {"width": self.width, "bags": [sorted(b) for b in self.bags]}


def validate_path_decomposition(g: Graph, d: PathDecomposition) -> List[str]:
    """All axiom violations of ``d`` as a decomposition of ``g``; empty means valid."""
    problems = []
    where = {}
    for i, bag in enumerate(d.bags):
        for v in bag:
            if not (isinstance(v, int) and 0 <= v < g.n):
                problems.append(f"bag {i} holds unknown vertex {v!r}")
                continue
            where.setdefault(v, []).append(i)
    for v in g.vertices():
        idx = where.get(v)
        if not idx:
            problems.append(f"vertex {g.label(v)} missing")
        elif idx[-1] - idx[0] + 1 != len(idx):
            problems.append(f"non-contiguous occurrence of {g.label(v)}")
    for u, v in g.edges():
        if not any(u in bag and v in bag for bag in d.bags):
            problems.append(f"edge uncovered: {g.label(u)}-{g.label(v)}")
    return problems


def decomposition_from_order(g: Graph, order: Sequence[int]) -> PathDecomposition:
    """Bag ``i`` is ``order[i]`` plus earlier vertices with a neighbour at or after ``i``."""
    pos = {v: i for i, v in enumerate(order)}
    last = {v: max([pos[v]] + [pos[y] for y in g.neighbors(v)]) for v in order}
    bags = []
    for i, v in enumerate(order):
        bag = {v} | {u for u in order[:i] if last[u] >= i}
        bags.append(frozenset(bag))
    return PathDecomposition(tuple(bags))


def vertex_separation_table(g: Graph) -> np.ndarray:
    """``f[S]`` = vertex separation of the best ordering that starts with the set ``S``.

    ``f[S] = max(c(S), min_{v in S} f[S - v])`` where ``c(S)`` counts the
    vertices of ``S`` with a neighbour outside ``S``.
    """
    n = g.n
    size = 1 << n
    states = np.arange(size, dtype=np.int64)
    nb = [sum(1 << y for y in g.neighbors(v)) for v in g.vertices()]
    boundary = np.zeros(size, dtype=np.int8)
    for v in range(n):
        inside = (states >> v) & 1
        leaks = (nb[v] & ~states) != 0
        boundary += (inside.astype(bool) & leaks).astype(np.int8)
    popcount = np.zeros(size, dtype=np.int8)
    for v in range(n):
        popcount += ((states >> v) & 1).astype(np.int8)
    f = np.zeros(size, dtype=np.int8)
    big = np.int8(n + 1)
    for k in range(1, n + 1):
        layer = states[popcount == k]
        best = np.full(layer.shape, big, dtype=np.int8)
        for v in range(n):
            has = ((layer >> v) & 1).astype(bool)
            cand = np.where(has, f[layer ^ (1 << v)], big)
            np.minimum(best, cand, out=best)
        f[layer] = np.maximum(best, boundary[layer])
    return f


def pathwidth_exact(g: Graph) -> Tuple[int, PathDecomposition]:
    """Exact pathwidth and an optimal decomposition (at most 24 vertices)."""
    n = g.n
    if n > MAX_EXACT_VERTICES:
        raise GraphError(f"exact pathwidth is limited to {MAX_EXACT_VERTICES} vertices, got {n}")
    if n == 0:
        return 0, PathDecomposition(())
    f = vertex_separation_table(g)
    full = (1 << n) - 1
    nb = [sum(1 << y for y in g.neighbors(v)) for v in g.vertices()]

    def boundary(S: int) -> int:
        return sum(1 for v in range(n) if S >> v & 1 and nb[v] & ~S)

    order = []
    S = full
    while S:
        target = int(f[S])
        c = boundary(S)
        for v in range(n):
            if S >> v & 1 and max(int(f[S ^ (1 << v)]), c) == target:
                order.append(v)
                S ^= 1 << v
                break
    order.reverse()
    d = decomposition_from_order(g, order)
    value = int(f[full])
    if d.width != value:
        raise AssertionError("recovered ordering does not attain the optimum")
    return value, d


def wall_decomposition(w: CondensedWall, with_apices: bool = True) -> PathDecomposition:
    """Width-5 decomposition of a condensed wall (width 3 without ``a`` and ``b``).

    Layer ``j`` contributes the sliding bags ``{z^(j-1), z^j, u^j_i, u^j_(i+1)}``
    for consecutive row vertices; ``a`` and ``b`` join every bag.
    """
    bags = []
    extra = {w.a, w.b} if with_apices else set()
    for j in range(1, w.size + 1):
        row = w.rows[j - 1]
        spine = {w.z[j - 1], w.z[j]}
        for i in range(len(row) - 1):
            bags.append(frozenset(spine | {row[i], row[i + 1]} | extra))
    return PathDecomposition(tuple(bags))
