"""Simple undirected graphs with dense integer vertex ids.

Everything else in the package is built on :class:`Graph`.  Graphs are
immutable once constructed; builders collect edges and call the constructor,
which checks simplicity and symmetry.
"""

from __future__ import annotations

from collections import Counter, deque
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

Edge = Tuple[int, int]
Path = Tuple[int, ...]


def edge_key(u: int, v: int) -> Edge:
    """Normalised key of the undirected edge ``uv``."""
    return (u, v) if u < v else (v, u)


def path_edges(path: Sequence[int]) -> List[Edge]:
    return [edge_key(path[i], path[i + 1]) for i in range(len(path) - 1)]


class GraphError(ValueError):
    """Raised for malformed graphs or arguments that do not refer to the graph."""


class ParallelEdgeError(GraphError):
    """An operation would have produced a loop or a parallel edge."""


class Graph:
    """Simple undirected graph on the vertices ``0..n-1``.

    ``labels`` is an optional tuple of strings, one per vertex, used to carry
    construction provenance such as ``"u^3_5"`` or ``"eps(u_14)"``.
    """

    __slots__ = ("_n", "_adj", "_labels", "_edges", "_edge_set")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = (), labels: Optional[Sequence[str]] = None):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        nbrs: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) refers to a vertex outside 0..{n - 1}")
            if u == v:
                raise ParallelEdgeError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise ParallelEdgeError(f"parallel edge {edge_key(u, v)}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self._n = n
        self._adj: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise GraphError(f"expected {n} labels, got {len(labels)}")
        self._labels: Optional[Tuple[str, ...]] = labels
        self._edges: Tuple[Edge, ...] = tuple(
            (u, v) for u in range(n) for v in self._adj[u] if u < v
        )
        self._edge_set: FrozenSet[Edge] = frozenset(self._edges)

    # -- basic queries -------------------------------------------------
    @property
    def n(self) -> int:
        return self._n

    vertex_count = n

    @property
    def m(self) -> int:
        return len(self._edges)

    def vertices(self) -> range:
        return range(self._n)

    def edges(self) -> Tuple[Edge, ...]:
        """All edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return self._edges

    def edge_set(self) -> FrozenSet[Edge]:
        return self._edge_set

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._edge_set

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return self._adj

    @property
    def labels(self) -> Optional[Tuple[str, ...]]:
        return self._labels

    def label(self, v: int) -> str:
        return self._labels[v] if self._labels is not None else str(v)

    def find_label(self, label: str) -> int:
        if self._labels is None:
            raise KeyError(label)
        try:
            return self._labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges and self._labels == other._labels

    def __hash__(self) -> int:
        return hash((self._n, self._edges, self._labels))

    # -- argument checking ---------------------------------------------
    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self._n):
            raise GraphError(f"unknown vertex {v!r}")

    def check_edge(self, e: Tuple[int, int]) -> Edge:
        u, v = e
        key = edge_key(u, v)
        if key not in self._edge_set:
            raise GraphError(f"unknown edge {e!r}")
        return key

    def is_path(self, path: Sequence[int]) -> bool:
        if not path or len(set(path)) != len(path):
            return False
        if any(not (0 <= v < self._n) for v in path):
            return False
        return all(self.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1))

    # -- derived graphs ------------------------------------------------
    def without_edges(self, removed: Iterable[Tuple[int, int]]) -> "Graph":
        """Same vertex ids, the given edges deleted."""
        gone = {self.check_edge(e) for e in removed}
        return Graph(self._n, (e for e in self._edges if e not in gone), self._labels)

    def without_vertices(self, removed: Iterable[int]) -> "Graph":
        """Same vertex ids; removed vertices become isolated."""
        gone = set(removed)
        for v in gone:
            self.check_vertex(v)
        return Graph(
            self._n,
            ((u, v) for u, v in self._edges if u not in gone and v not in gone),
            self._labels,
        )

    def induced_subgraph(self, vertices: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        """Induced subgraph relabelled densely; returns it with the old->new map."""
        keep = sorted(set(vertices))
        for v in keep:
            self.check_vertex(v)
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self._edges if u in index and v in index]
        labels = [self.label(v) for v in keep] if self._labels is not None else None
        return Graph(len(keep), edges, labels), index

    def is_connected(self) -> bool:
        if self._n == 0:
            return True
        return len(components(self)) == 1

    def is_tree(self) -> bool:
        return self._n >= 1 and self.m == self._n - 1 and self.is_connected()

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)


def components(
    g: Graph,
    removed_vertices: Iterable[int] = (),
    removed_edges: Iterable[Tuple[int, int]] = (),
) -> List[FrozenSet[int]]:
    """Connected components of ``g`` minus the removed vertices and edges.

    Components are returned ordered by their smallest vertex.
    """
    gone_v = set()
    for v in removed_vertices:
        g.check_vertex(v)
        gone_v.add(v)
    gone_e = {g.check_edge(e) for e in removed_edges}
    seen = [False] * g.n
    for v in gone_v:
        seen[v] = True
    parts = []
    adj = g.adjacency
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if seen[y]:
                    continue
                if gone_e and edge_key(x, y) in gone_e:
                    continue
                seen[y] = True
                comp.append(y)
                queue.append(y)
        parts.append(frozenset(comp))
    return parts


def degree_profile(g: Graph) -> Counter:
    """Degree multiset as a ``Counter`` mapping degree -> number of vertices."""
    return Counter(len(a) for a in g.adjacency)


def suppress_degree_two(g: Graph, keep: Iterable[int] = ()) -> Tuple[Graph, Dict[int, int]]:
    """Replace each maximal path through unkept degree-2 vertices by one edge.

    Returns the new graph and the map from surviving old ids to new ids.
    Raises :class:`ParallelEdgeError` if suppression would create a loop or a
    parallel edge, since only simple graphs are represented.
    """
    kept = set()
    for v in keep:
        g.check_vertex(v)
        kept.add(v)
    adj = g.adjacency
    drop = {v for v in g.vertices() if len(adj[v]) == 2 and v not in kept}
    survivors = [v for v in g.vertices() if v not in drop]
    index = {v: i for i, v in enumerate(survivors)}

    new_edges = set()
    visited_chain = set()

    def add(u: int, v: int) -> None:
        if u == v:
            raise ParallelEdgeError(f"suppression creates a loop at {g.label(u)}")
        key = edge_key(index[u], index[v])
        if key in new_edges:
            raise ParallelEdgeError(
                f"suppression creates a parallel edge {g.label(u)}-{g.label(v)}"
            )
        new_edges.add(key)

    for u in survivors:
        for x in adj[u]:
            if x not in drop:
                if u < x:
                    add(u, x)
                continue
            # walk the chain of suppressed vertices starting u -> x
            prev, cur = u, x
            chain = []
            while cur in drop:
                chain.append(cur)
                a, b = adj[cur]
                prev, cur = cur, (b if a == prev else a)
            if chain[0] in visited_chain:
                continue
            visited_chain.update(chain)
            add(u, cur)

    if any(v not in visited_chain for v in drop):
        raise ParallelEdgeError("a cycle of suppressible degree-2 vertices would become a loop")

    labels = [g.label(v) for v in survivors] if g.labels is not None else None
    return Graph(len(survivors), sorted(new_edges), labels), index


def bfs_path(
    g: Graph,
    sources: Iterable[int],
    targets: Iterable[int],
    blocked: Iterable[int] = (),
    blocked_edges: Iterable[Edge] = (),
) -> Optional[Path]:
    """Shortest path from ``sources`` to ``targets`` avoiding blocked vertices/edges.

    Neighbours are scanned in ascending id order, so the result is
    deterministic.  The returned path starts at its only source vertex and
    ends at its only target vertex.
    """
    block = set(blocked)
    bedges = set(blocked_edges)
    target_set = set(targets) - block
    parent: Dict[int, int] = {}
    queue = deque()
    for s in sorted(set(sources)):
        if s in block or s in parent:
            continue
        parent[s] = -1
        queue.append(s)
    adj = g.adjacency
    while queue:
        x = queue.popleft()
        if x in target_set:
            out = [x]
            while parent[out[-1]] != -1:
                out.append(parent[out[-1]])
            return tuple(reversed(out))
        for y in adj[x]:
            if y in parent or y in block:
                continue
            if bedges and edge_key(x, y) in bedges:
                continue
            parent[y] = x
            queue.append(y)
    return None
