"""Builders for the graph families used by the obstruction constructions.

Every builder is deterministic.  Vertex ids are assigned in a fixed order and
each vertex carries a provenance label (``"u^2_3"``, ``"z^1"``, ``"eps(u_7)"``)
so that certificates can be read by a human.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .graph import Edge, Graph, GraphError, Path, components, edge_key, path_edges

if TYPE_CHECKING:  # pragma: no cover
    from .trees import TreeParts


class _Builder:
    """Mutable edge/label accumulator; ``build`` freezes it into a Graph."""

    def __init__(self) -> None:
        self.labels: List[str] = []
        self.edges: List[Edge] = []

    def add(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def edge(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def path(self, start: int, end: int, length: int, prefix: str) -> Path:
        """Add a start-end path with ``length`` edges; returns its vertex tuple."""
        if length < 1:
            raise GraphError("path length must be at least 1")
        verts = [start]
        for i in range(1, length):
            verts.append(self.add(f"{prefix}.{i}"))
        verts.append(end)
        for i in range(length):
            self.edge(verts[i], verts[i + 1])
        return tuple(verts)

    def build(self) -> Graph:
        return Graph(len(self.labels), self.edges, self.labels)


# ---------------------------------------------------------------------------
# ladders


@dataclass(frozen=True)
class LadderInstance:
    graph: Graph
    length: int
    u: Tuple[int, ...]
    v: Tuple[int, ...]

    @property
    def rungs(self) -> Tuple[Edge, ...]:
        return tuple(zip(self.u, self.v))


def build_ladder(length: int) -> LadderInstance:
    """Ladder with ``length`` rungs ``u_i v_i``; ids ``u_i = i-1``, ``v_i = length+i-1``."""
    if length < 1:
        raise GraphError("ladder length must be at least 1")
    b = _Builder()
    u = tuple(b.add(f"u_{i}") for i in range(1, length + 1))
    v = tuple(b.add(f"v_{i}") for i in range(1, length + 1))
    for i in range(length - 1):
        b.edge(u[i], u[i + 1])
        b.edge(v[i], v[i + 1])
    for i in range(length):
        b.edge(u[i], v[i])
    return LadderInstance(b.build(), length, u, v)


# ---------------------------------------------------------------------------
# condensed walls


@dataclass(frozen=True)
class CondensedWall:
    """Handles into a condensed wall of size ``size``.

    ``graph`` is the graph the ids refer to: the wall itself when built by
    :func:`build_condensed_wall`, or the host graph of a counterexample.
    ``rows[j-1]`` is the path ``u^j_1 .. u^j_{2r}`` and ``z[j]`` is ``z^j``.
    """

    graph: Graph
    size: int
    a: int
    b: int
    z: Tuple[int, ...]
    rows: Tuple[Tuple[int, ...], ...]

    @property
    def c(self) -> int:
        return self.z[0]

    @property
    def d(self) -> int:
        return self.z[-1]

    @property
    def terminals(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def row_paths(self) -> Tuple[Path, ...]:
        return self.rows

    def vertices(self) -> FrozenSet[int]:
        out = {self.a, self.b, *self.z}
        for row in self.rows:
            out.update(row)
        return frozenset(out)

    def edges(self) -> FrozenSet[Edge]:
        vs = self.vertices()
        return frozenset(e for e in self.graph.edges() if e[0] in vs and e[1] in vs)

    def layer(self, j: int) -> FrozenSet[int]:
        """Vertex set of the j-th layer ``W_j`` (1-based)."""
        if not 1 <= j <= self.size:
            raise GraphError(f"layer index {j} outside 1..{self.size}")
        return frozenset(self.rows[j - 1]) | {self.z[j - 1], self.z[j]}

    def layer_edges(self, j: int) -> FrozenSet[Edge]:
        vs = self.layer(j)
        g = self.graph
        return frozenset(
            edge_key(x, y) for x in vs for y in g.neighbors(x) if y in vs and x < y
        )

    def linkage_path(self, j: int) -> Path:
        """The a-b path ``a P^j b``."""
        return (self.a,) + self.rows[j - 1] + (self.b,)


def _add_wall(b: _Builder, r: int) -> Tuple[int, int, Tuple[int, ...], Tuple[Tuple[int, ...], ...]]:
    rows = tuple(
        tuple(b.add(f"u^{j}_{i}") for i in range(1, 2 * r + 1)) for j in range(1, r + 1)
    )
    z = tuple(b.add(f"z^{j}") for j in range(r + 1))
    a = b.add("a")
    bb = b.add("b")
    for j in range(1, r + 1):
        row = rows[j - 1]
        for i in range(2 * r - 1):
            b.edge(row[i], row[i + 1])
        for i in range(1, r + 1):
            b.edge(z[j - 1], row[2 * i - 1])  # z^{j-1} u^j_{2i}
            b.edge(z[j], row[2 * i - 2])  # z^j u^j_{2i-1}
        b.edge(z[j - 1], z[j])
        b.edge(a, row[0])
        b.edge(bb, row[-1])
    return a, bb, z, rows


def build_condensed_wall(r: int) -> CondensedWall:
    """Condensed wall of size ``r`` with terminals ``a, b, c = z^0, d = z^r``."""
    if r < 1:
        raise GraphError("wall size must be at least 1")
    b = _Builder()
    a, bb, z, rows = _add_wall(b, r)
    return CondensedWall(b.build(), r, a, bb, z, rows)


# ---------------------------------------------------------------------------
# grid instance


@dataclass(frozen=True)
class GridLinkageInstance:
    """``4r x 4r`` grid with terminal regions; vertex ``(row, col)`` has id ``(row-1)*n + col-1``.

    Row 1 is the bottom row (region D) and row ``n`` the top row (region C).
    """

    graph: Graph
    r: int
    A: FrozenSet[int]
    B: FrozenSet[int]
    C: FrozenSet[int]
    D: FrozenSet[int]

    @property
    def side(self) -> int:
        return 4 * self.r

    def vertex(self, row: int, col: int) -> int:
        n = self.side
        return (row - 1) * n + (col - 1)


def build_grid_instance(
    r: int,
    b_column: Optional[int] = None,
    side_rows: Optional[Tuple[int, int]] = None,
) -> GridLinkageInstance:
    """Grid instance with terminal regions on its borders.

    A is column 1 and B column ``4r-1`` over rows 2..4r-1; C is the top row and
    D the bottom row.  ``b_column`` and ``side_rows`` override the B column and
    the row span of A and B for alternative readings.
    """
    if r < 1:
        raise GraphError("grid parameter r must be at least 1")
    n = 4 * r
    bcol = n - 1 if b_column is None else b_column
    lo, hi = (2, n - 1) if side_rows is None else side_rows
    if not (1 <= bcol <= n and 1 <= lo <= hi <= n):
        raise GraphError("grid region extents out of range")

    def vid(row: int, col: int) -> int:
        return (row - 1) * n + (col - 1)

    labels = [f"({row},{col})" for row in range(1, n + 1) for col in range(1, n + 1)]
    edges = []
    for row in range(1, n + 1):
        for col in range(1, n + 1):
            if col < n:
                edges.append((vid(row, col), vid(row, col + 1)))
            if row < n:
                edges.append((vid(row, col), vid(row + 1, col)))
    A = frozenset(vid(row, 1) for row in range(lo, hi + 1))
    B = frozenset(vid(row, bcol) for row in range(lo, hi + 1))
    C = frozenset(vid(n, col) for col in range(1, n + 1))
    D = frozenset(vid(1, col) for col in range(1, n + 1))
    sets = [A, B, C, D]
    for i in range(4):
        for k in range(i + 1, 4):
            if sets[i] & sets[k]:
                raise GraphError("grid terminal regions must be pairwise disjoint")
    return GridLinkageInstance(Graph(n * n, edges, labels), r, A, B, C, D)


# ---------------------------------------------------------------------------
# binary trees


@dataclass(frozen=True)
class BhTree:
    """A (possibly subdivided, possibly linked) binary tree of height ``height``.

    ``attachment`` is the far end of the linking path for v-linked trees and
    equals ``root`` when the path is trivial; it is ``None`` for unlinked trees.
    """

    graph: Graph
    root: int
    height: int
    subdivided: bool = False
    attachment: Optional[int] = None


def build_binary_tree(h: int) -> BhTree:
    """Full binary tree of height ``h`` in heap order (root 0, children 2i+1, 2i+2)."""
    if h < 0:
        raise GraphError("height must be non-negative")
    n = 2 ** (h + 1) - 1
    labels = []
    for i in range(n):
        bits = bin(i + 1)[3:]
        labels.append("r" + bits)
    edges = [((i - 1) // 2, i) for i in range(1, n)]
    return BhTree(Graph(n, edges, labels), 0, h)


def subdivide(g: Graph, times: int = 1) -> Tuple[Graph, Dict[int, int]]:
    """Subdivide every edge ``times`` times; original vertices keep their ids."""
    b = _Builder()
    for v in g.vertices():
        b.add(g.label(v))
    for u, v in g.edges():
        b.path(u, v, times + 1, f"{g.label(u)}~{g.label(v)}")
    return b.build(), {v: v for v in g.vertices()}


def subdivided_binary_tree(h: int, times: int = 1) -> BhTree:
    t = build_binary_tree(h)
    g, _ = subdivide(t.graph, times)
    return BhTree(g, t.root, h, subdivided=times > 0)


def v_link(tree: BhTree, path_len: int) -> BhTree:
    """Attach a path with ``path_len`` edges at the root; ``path_len = 0`` is allowed."""
    if path_len < 0:
        raise GraphError("path length must be non-negative")
    g = tree.graph
    b = _Builder()
    for v in g.vertices():
        b.add(g.label(v))
    for u, v in g.edges():
        b.edge(u, v)
    end = tree.root
    if path_len:
        end = b.add("link")
        b.path(end, tree.root, path_len, "link")
    return BhTree(b.build(), tree.root, tree.height, tree.subdivided, attachment=end)


# ---------------------------------------------------------------------------
# pattern threads


@dataclass(frozen=True)
class Thread:
    """A maximal pattern path whose interior vertices are not branch vertices.

    ``vertices`` runs from a branch vertex to another branch vertex (a U-path)
    or to a leaf.
    """

    vertices: Tuple[int, ...]
    leaf: bool

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


def branch_vertices(h: Graph) -> FrozenSet[int]:
    return frozenset(v for v in h.vertices() if h.degree(v) >= 3)


def pattern_threads(h: Graph, branch: Optional[FrozenSet[int]] = None) -> List[Thread]:
    """Split a pattern graph into U-paths and leaf threads, in canonical order."""
    U = branch_vertices(h) if branch is None else branch
    if not U:
        raise GraphError("pattern has no branch vertices")
    seen = set()
    out = []
    for s in sorted(U):
        for x in h.neighbors(s):
            walk = [s, x]
            prev, cur = s, x
            while cur not in U and h.degree(cur) == 2:
                a, b = h.neighbors(cur)
                prev, cur = cur, (b if a == prev else a)
                walk.append(cur)
            leaf = cur not in U
            if not leaf and walk[-1] < walk[0]:
                walk.reverse()
            elif not leaf and walk[-1] == walk[0]:
                raise GraphError("pattern has a loop through degree-2 vertices")
            key = tuple(walk)
            if not leaf and key in seen:
                continue
            if not leaf and len(key) > 2 and key[0] == key[-1]:
                continue
            seen.add(key)
            out.append(Thread(key, leaf))
    out.sort(key=lambda t: (t.leaf, t.vertices))
    return out


# ---------------------------------------------------------------------------
# counterexample instances


@dataclass(frozen=True)
class EpsilonMap:
    """Images of pattern branch vertices and bundles of pattern U-paths.

    ``bundle_map`` is keyed by the vertex tuple of the U-path (as in
    :class:`Thread`) and every bundle path runs from ``eps(start)`` to
    ``eps(end)``.  ``terminals`` records which pattern vertex is attached to
    each wall terminal (directly for ladders, through ``Z_*`` for trees).
    """

    vertex_map: Mapping[int, int]
    bundle_map: Mapping[Tuple[int, ...], Tuple[Path, ...]]
    terminals: Mapping[str, int]

    def image(self, vertices) -> FrozenSet[int]:
        return frozenset(self.vertex_map[v] for v in vertices if v in self.vertex_map)


class InvariantViolation(RuntimeError):
    """A construction invariant failed where the construction guarantees it."""


class DeletionBudgetError(GraphError):
    """More edges were deleted than the reference subdivision tolerates."""


@dataclass(frozen=True)
class CounterexampleInstance:
    """The obstruction graph together with the handles used by the checks.

    ``kind`` is ``"ladder"`` or ``"tree"``.  ``special`` lists the two pattern
    U-paths that are routed through the wall instead of being inflated;
    ``zpaths`` holds the ``Z_a .. Z_d`` bundles (tree instances only) with
    every path oriented from the pattern side to the wall terminal.
    """

    kind: str
    graph: Graph
    wall: CondensedWall
    eps: EpsilonMap
    pattern: Graph
    r: int
    params: Mapping[str, object]
    special: Tuple[Tuple[int, ...], Tuple[int, ...]]
    threads: Tuple[Thread, ...]
    zpaths: Mapping[str, Tuple[Path, ...]] = field(default_factory=dict)
    parts: Mapping[str, FrozenSet[int]] = field(default_factory=dict)
    tree_parts: Optional["TreeParts"] = None

    @property
    def terminals(self) -> Tuple[int, int, int, int]:
        return self.wall.terminals

    @property
    def branch_images(self) -> FrozenSet[int]:
        return frozenset(self.eps.vertex_map.values())

    @property
    def deletion_budget(self) -> int:
        return self.r - 2 if self.kind == "ladder" else self.r - 3

    def g_prime(self) -> Tuple[FrozenSet[int], FrozenSet[Edge]]:
        """``G'`` as vertex and edge sets (tree instances)."""
        if self.kind != "tree":
            raise GraphError("G' is defined for tree instances only")
        verts = set(self.wall.vertices())
        edges = set(self.wall.edges())
        for key in ("C", "D"):
            verts |= self.parts[f"eps_{key}"]
            edges |= self.parts[f"eps_{key}_edges"]
        for z in ("b", "c", "d"):
            for p in self.zpaths[z]:
                verts.update(p)
                edges.update(path_edges(p))
        return frozenset(verts), frozenset(edges)


def _add_bundle(b: _Builder, s: int, t: int, r: int, length: int, prefix: str) -> Tuple[Path, ...]:
    return tuple(b.path(s, t, length, f"{prefix}[{k}]") for k in range(r))


def default_cuts(length: int) -> Tuple[int, int]:
    return length // 3 + 1, (2 * length) // 3 + 1


def build_ladder_counterexample(
    r: int, length: int = 71, cut1: Optional[int] = None, cut2: Optional[int] = None
) -> CounterexampleInstance:
    """Condensed wall of size ``r`` glued to inflated thirds of a ladder.

    The rungs at ``cut1`` and ``cut2`` are removed; ``eps(u_cut1) = a``,
    ``eps(v_cut1) = b``, ``eps(v_cut2) = c`` and ``eps(u_cut2) = d``.  Every
    other U-path becomes ``r`` internally disjoint paths of length 3.
    """
    if r < 2:
        raise GraphError("ladder instances need r >= 2")
    if length < 71:
        raise GraphError("ladder instances need length >= 71")
    dc1, dc2 = default_cuts(length)
    c1 = dc1 if cut1 is None else cut1
    c2 = dc2 if cut2 is None else cut2
    if not (c1 - 2 >= 2 and c2 - c1 - 1 >= 2 and length - 1 - c2 >= 2):
        raise GraphError(
            f"cuts ({c1}, {c2}) must leave three segments with at least two inner rungs each"
        )
    lad = build_ladder(length)
    H = lad.graph
    U = branch_vertices(H)
    uu, vv = lad.u, lad.v
    specials = {uu[c1 - 1]: "a", vv[c1 - 1]: "b", vv[c2 - 1]: "c", uu[c2 - 1]: "d"}

    b = _Builder()
    a, bb, z, rows = _add_wall(b, r)
    term = {"a": a, "b": bb, "c": z[0], "d": z[-1]}
    vmap: Dict[int, int] = {}
    for s in sorted(U):
        vmap[s] = term[specials[s]] if s in specials else b.add(f"eps({H.label(s)})")

    threads = pattern_threads(H, U)
    cut_paths = {
        tuple(sorted((uu[c1 - 1], vv[c1 - 1]))),
        tuple(sorted((uu[c2 - 1], vv[c2 - 1]))),
    }
    bundles: Dict[Tuple[int, ...], Tuple[Path, ...]] = {}
    special = []
    for th in threads:
        if th.vertices in cut_paths:
            special.append(th.vertices)
            continue
        name = "-".join(H.label(x) for x in (th.start, th.end))
        bundles[th.vertices] = _add_bundle(b, vmap[th.start], vmap[th.end], r, 3, name)
    G = b.build()
    wall = CondensedWall(G, r, a, bb, z, rows)

    comps = components(G, removed_vertices=wall.terminals)
    owner = {}
    for comp in comps:
        for x in comp:
            owner[x] = comp
    parts = {
        "A": owner[vmap[uu[1]]],
        "B": owner[vmap[uu[c1]]],
        "C": owner[vmap[uu[length - 2]]],
        "W-T": owner[rows[0][0]],
    }
    special.sort(key=lambda p: 0 if p == tuple(sorted((uu[c1 - 1], vv[c1 - 1]))) else 1)
    eps = EpsilonMap(
        vmap,
        bundles,
        {"a": uu[c1 - 1], "b": vv[c1 - 1], "c": vv[c2 - 1], "d": uu[c2 - 1]},
    )
    return CounterexampleInstance(
        kind="ladder",
        graph=G,
        wall=wall,
        eps=eps,
        pattern=H,
        r=r,
        params={"length": length, "cut1": c1, "cut2": c2},
        special=(special[0], special[1]),
        threads=tuple(threads),
        parts=parts,
    )


def build_tree_counterexample(
    parts: "TreeParts", r: int = 5, bundle_len: Optional[int] = None
) -> CounterexampleInstance:
    """Condensed wall with inflations of the parts A, C, D of a decomposed tree.

    ``bundle_len`` defaults to ``|V(T)|``; smaller values keep surrogate
    instances small but may make the reference subdivision impossible when a
    pattern thread is longer than a bundle path.
    """
    from .trees import validate_tree_parts

    if r < 5:
        raise GraphError("tree instances need r >= 5")
    problems = validate_tree_parts(parts)
    if problems:
        raise GraphError("invalid tree parts: " + "; ".join(problems))
    T = parts.tree.graph
    ell = T.n if bundle_len is None else bundle_len
    if ell < 1:
        raise GraphError("bundle length must be at least 1")
    U = branch_vertices(T)
    threads = pattern_threads(T, U)

    b = _Builder()
    a, bb, z, rows = _add_wall(b, r)
    vmap = {s: b.add(f"eps({T.label(s)})") for s in sorted(U)}

    top = parts.top_path  # v_top ... u_top
    bot = parts.bot_path  # v_bot ... u_bot
    special_keys = {min(top, top[::-1]), min(bot, bot[::-1])}
    bundles: Dict[Tuple[int, ...], Tuple[Path, ...]] = {}
    special = []
    for th in threads:
        if th.leaf:
            continue
        if th.vertices in special_keys:
            special.append(th.vertices)
            continue
        name = "-".join(T.label(x) for x in (th.start, th.end))
        bundles[th.vertices] = _add_bundle(b, vmap[th.start], vmap[th.end], r, ell, name)

    term = {"a": a, "b": bb, "c": z[0], "d": z[-1]}
    anchor = {"a": parts.v_top, "b": parts.u_top, "c": parts.v_bot, "d": parts.u_bot}
    zpaths = {
        key: _add_bundle(b, vmap[anchor[key]], term[key], r, ell, f"Z_{key}")
        for key in ("a", "b", "c", "d")
    }
    G = b.build()
    wall = CondensedWall(G, r, a, bb, z, rows)

    named: Dict[str, FrozenSet[int]] = {}
    for key, region in (("A", parts.A), ("C", parts.C), ("D", parts.D)):
        verts = set(vmap[s] for s in region if s in vmap)
        edges = set()
        for th, paths in bundles.items():
            if th[0] in region and th[-1] in region:
                for p in paths:
                    verts.update(p)
                    edges.update(path_edges(p))
        named[f"eps_{key}"] = frozenset(verts)
        named[f"eps_{key}_edges"] = frozenset(edges)
    special.sort(key=lambda p: 0 if p == min(top, top[::-1]) else 1)
    eps = EpsilonMap(vmap, bundles, dict(anchor))
    inst = CounterexampleInstance(
        kind="tree",
        graph=G,
        wall=wall,
        eps=eps,
        pattern=T,
        r=r,
        params={"bundle_len": ell, "w": parts.w},
        special=(special[0], special[1]),
        threads=tuple(threads),
        zpaths=zpaths,
        parts=named,
        tree_parts=parts,
    )
    gv, _ = inst.g_prime()
    named["G_prime"] = gv
    return inst


# ---------------------------------------------------------------------------
# reference subdivision


@dataclass(frozen=True)
class SubdivisionModel:
    """Branch-vertex map and edge-to-path map witnessing ``H`` as a topological minor."""

    branch_map: Mapping[int, int]
    edge_paths: Mapping[Edge, Path]

    def vertices(self) -> FrozenSet[int]:
        out = set(self.branch_map.values())
        for p in self.edge_paths.values():
            out.update(p)
        return frozenset(out)

    def edges(self) -> FrozenSet[Edge]:
        out = set()
        for p in self.edge_paths.values():
            out.update(path_edges(p))
        return frozenset(out)

    def to_json(self) -> dict:
        return {
            "branch_map": {str(k): v for k, v in sorted(self.branch_map.items())},
            "edge_paths": [
                {"edge": list(e), "path": list(p)} for e, p in sorted(self.edge_paths.items())
            ],
        }


@dataclass(frozen=True)
class ReferencePlan:
    """Resource choices made by the reference subdivision for one deletion set.

    ``overrides`` lists ``(bundle key, index)`` for bundles whose first path
    was hit; ``leaf_routes`` lists the spare path prefixes used by leaf
    threads.  Equal plans materialise to equal models.
    """

    layer: int
    cd_path: Path
    overrides: Tuple[Tuple[Tuple[int, ...], int], ...]
    zchoice: Tuple[Tuple[str, int], ...]
    leaf_routes: Tuple[Tuple[Tuple[int, ...], Path], ...]


class _PlanContext:
    """Per-instance lookup tables shared by all plan computations."""

    def __init__(self, inst: CounterexampleInstance):
        self.inst = inst
        w = inst.wall
        owner: Dict[Edge, Tuple[str, object, int]] = {}
        for key, paths in inst.eps.bundle_map.items():
            for k, p in enumerate(paths):
                for e in path_edges(p):
                    owner[e] = ("bundle", key, k)
        for key, paths in inst.zpaths.items():
            for k, p in enumerate(paths):
                for e in path_edges(p):
                    owner[e] = ("z", key, k)
        self.owner = owner
        self.wall_edges = w.edges()
        self.layer_block = []
        for j in range(1, w.size + 1):
            self.layer_block.append(frozenset(path_edges(w.linkage_path(j))) | w.layer_edges(j))
        self.wall_vertices = w.vertices()
        self.cd_cache: Dict[Tuple[int, FrozenSet[Edge]], Optional[Path]] = {}
        self.leaf_threads = [t for t in inst.threads if t.leaf]
        # spare pools at each branch vertex: (key, index, path oriented away)
        pools: Dict[int, List[Tuple[Tuple, int, Path]]] = {}
        for key, paths in inst.eps.bundle_map.items():
            for k, p in enumerate(paths):
                pools.setdefault(key[0], []).append((("bundle", key), k, p))
                pools.setdefault(key[-1], []).append((("bundle", key), k, tuple(reversed(p))))
        if inst.kind == "tree":
            for zk, paths in inst.zpaths.items():
                s = inst.eps.terminals[zk]
                for k, p in enumerate(paths):
                    pools.setdefault(s, []).append((("z", zk), k, p))
        self.pools = pools

    def cd_path(self, j: int, wall_hits: FrozenSet[Edge]) -> Optional[Path]:
        key = (j, wall_hits)
        if key not in self.cd_cache:
            from .graph import bfs_path

            w = self.inst.wall
            blocked = set(self.inst.graph.vertices()) - set(self.wall_vertices)
            blocked |= set(w.rows[j - 1]) | {w.a, w.b}
            self.cd_cache[key] = bfs_path(
                self.inst.graph, [w.c], [w.d], blocked=blocked, blocked_edges=wall_hits
            )
        return self.cd_cache[key]


_CONTEXTS: Dict[int, _PlanContext] = {}


def _context(inst: CounterexampleInstance) -> _PlanContext:
    ctx = _CONTEXTS.get(id(inst))
    if ctx is None or ctx.inst is not inst:
        ctx = _PlanContext(inst)
        _CONTEXTS[id(inst)] = ctx
    return ctx


def plan_reference_subdivision(
    inst: CounterexampleInstance, deleted: Sequence[Tuple[int, int]] = (), enforce_budget: bool = True
) -> ReferencePlan:
    """Choose untouched resources for every pattern thread after deleting ``deleted``."""
    G = inst.graph
    X = frozenset(G.check_edge(e) for e in deleted)
    if enforce_budget and len(X) > inst.deletion_budget:
        raise DeletionBudgetError(
            f"{len(X)} deleted edges exceed the budget {inst.deletion_budget} for {inst.kind} instances"
        )
    ctx = _context(inst)
    wall_hits = X & ctx.wall_edges
    layer = None
    cd = None
    for j in range(1, inst.wall.size + 1):
        if ctx.layer_block[j - 1] & wall_hits:
            continue
        cd = ctx.cd_path(j, wall_hits)
        if cd is not None:
            layer = j
            break
    if layer is None:
        raise InvariantViolation("no untouched layer carries an (a-b, c-d)-linkage")

    touched: Dict[Tuple[str, object], set] = {}
    for e in X:
        own = ctx.owner.get(e)
        if own is not None:
            touched.setdefault((own[0], own[1]), set()).add(own[2])
    overrides = []
    zchoice = []
    for (kind, key), hit in sorted(touched.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        idx = next((k for k in range(inst.r) if k not in hit), None)
        if idx is None:
            raise InvariantViolation(f"every path of bundle {key} was hit")
        if idx == 0:
            continue
        if kind == "bundle":
            overrides.append((key, idx))
        else:
            zchoice.append((key, idx))
    overrides.sort()
    zchoice.sort()

    leaf_routes = []
    if ctx.leaf_threads:
        chosen = {("bundle", key): idx for key, idx in overrides}
        chosen.update({("z", key): idx for key, idx in zchoice})
        used = set()
        for th in ctx.leaf_threads:
            pool = ctx.pools.get(th.start, [])
            route = None
            for res, k, p in pool:
                if chosen.get(res, 0) == k or (res, k) in used:
                    continue
                if len(p) - 1 < th.length + 1:
                    continue
                prefix = p[: th.length + 1]
                if any(e in X for e in path_edges(prefix)):
                    continue
                route = prefix
                used.add((res, k))
                break
            if route is None:
                raise InvariantViolation(
                    f"no spare path at {inst.pattern.label(th.start)} for a leaf thread of length {th.length}"
                )
            leaf_routes.append((th.vertices, route))
    return ReferencePlan(layer, cd, tuple(overrides), tuple(zchoice), tuple(leaf_routes))


def materialize_plan(inst: CounterexampleInstance, plan: ReferencePlan) -> SubdivisionModel:
    """Turn resource choices into an explicit subdivision model of the pattern."""
    H = inst.pattern
    w = inst.wall
    vmap = inst.eps.vertex_map
    over = dict(plan.overrides)
    zc = dict(plan.zchoice)
    ab = w.linkage_path(plan.layer)
    cd = plan.cd_path
    routes: Dict[Tuple[int, ...], Path] = {}
    for key, paths in inst.eps.bundle_map.items():
        routes[key] = paths[over.get(key, 0)]
    s1, s2 = inst.special
    if inst.kind == "ladder":
        # s1 is the a-b rung, s2 the c-d rung
        for key, path in ((s1, ab), (s2, cd)):
            if vmap[key[0]] != path[0]:
                path = tuple(reversed(path))
            routes[key] = path
    else:
        za = inst.zpaths["a"][zc.get("a", 0)]
        zb = inst.zpaths["b"][zc.get("b", 0)]
        zcp = inst.zpaths["c"][zc.get("c", 0)]
        zd = inst.zpaths["d"][zc.get("d", 0)]
        # eps(v_top) -Z_a-> a -P^j-> b -Z_b-> eps(u_top)
        top = za + ab[1:] + tuple(reversed(zb))[1:]
        bot = zcp + cd[1:] + tuple(reversed(zd))[1:]
        for key, path in ((s1, top), (s2, bot)):
            if vmap[key[0]] != path[0]:
                path = tuple(reversed(path))
            routes[key] = path
    for key, path in plan.leaf_routes:
        routes[key] = path

    branch: Dict[int, int] = dict(vmap)
    epaths: Dict[Edge, Path] = {}
    for th in inst.threads:
        route = routes[th.vertices]
        pv = th.vertices
        k = len(pv) - 1
        if len(route) - 1 < k:
            raise InvariantViolation(
                f"route of length {len(route) - 1} too short for a thread of length {k}"
            )
        if th.leaf:
            for i in range(1, k + 1):
                branch[pv[i]] = route[i]
        else:
            for i in range(1, k):
                branch[pv[i]] = route[i]
        for i in range(k):
            lo = i
            hi = i + 1 if i < k - 1 else len(route) - 1
            seg = route[lo : hi + 1]
            x, y = pv[i], pv[i + 1]
            epaths[edge_key(x, y)] = seg if x < y else tuple(reversed(seg))
    return SubdivisionModel(branch, epaths)


def reference_subdivision(
    inst: CounterexampleInstance, deleted: Sequence[Tuple[int, int]] = ()
) -> SubdivisionModel:
    """A subdivision of the pattern in ``G - deleted`` with branch set ``eps(U)``.

    Raises :class:`DeletionBudgetError` when more than ``r-2`` (ladder) or
    ``r-3`` (tree) edges are deleted.
    """
    return materialize_plan(inst, plan_reference_subdivision(inst, deleted))
