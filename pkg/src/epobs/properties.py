"""Structural checks on counterexample instances.

Each ``check_*`` function returns a list of human-readable violations; an
empty list means the property holds.  :func:`validate_construction_properties`
bundles them into a report.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, List, Optional

from .constructions import CounterexampleInstance, branch_vertices
from .graph import Graph, GraphError, components
from .reports import FAILS, HOLDS, Stopwatch, VerificationReport
from .trees import _minimal


def _need_tree(inst: CounterexampleInstance) -> None:
    if inst.kind != "tree" or inst.tree_parts is None:
        raise GraphError("this property is defined for tree instances only")


def check_p1(inst: CounterexampleInstance) -> List[str]:
    """Among the minimal top-level vertices only ``eps(u_top)`` lands in ``G'``."""
    _need_tree(inst)
    parts = inst.tree_parts
    top = parts.w + 5
    minimal = _minimal(parts.tree, parts.levels.members(top))
    gv, _ = inst.g_prime()
    inside = sorted(s for s in minimal if inst.eps.vertex_map[s] in gv)
    if inside != [parts.u_top]:
        lab = inst.pattern.label
        return [f"minimal level-{top} images in G' are {[lab(s) for s in inside]}, expected [{lab(parts.u_top)}]"]
    return []


def check_p2(inst: CounterexampleInstance) -> List[str]:
    """``G'`` holds exactly ``omega_min`` images of weight-level vertices."""
    _need_tree(inst)
    parts = inst.tree_parts
    gv, _ = inst.g_prime()
    count = sum(1 for s in parts.levels.members(parts.w) if inst.eps.vertex_map[s] in gv)
    if count != parts.omega_min:
        return [f"G' holds {count} level-{parts.w} images, omega_min is {parts.omega_min}"]
    return []


def check_p3(inst: CounterexampleInstance) -> List[str]:
    """Every vertex of degree at least 3 is a branch image or a wall vertex."""
    g = inst.graph
    allowed = inst.branch_images | inst.wall.vertices()
    bad = [v for v in g.vertices() if g.degree(v) >= 3 and v not in allowed]
    return [f"{g.label(v)} has degree {g.degree(v)} outside eps(U) and W" for v in bad]


def check_ladder_components(inst: CounterexampleInstance) -> List[str]:
    """``G - {a, b, c, d}`` has four components: the wall remainder and three ladder pieces."""
    if inst.kind != "ladder":
        raise GraphError("the four-component check is for ladder instances")
    comps = components(inst.graph, removed_vertices=inst.terminals)
    problems = []
    if len(comps) != 4:
        problems.append(f"G - T has {len(comps)} components, expected 4")
    named = [inst.parts[k] for k in ("A", "B", "C", "W-T")]
    if len(set(named)) != 4:
        problems.append("named parts A, B, C, W-T do not lie in distinct components")
    return problems


def _shield_ok(g: Graph, centre: int, comp: FrozenSet[int]) -> bool:
    """Some vertex of ``comp`` separates its degree->=3 vertices from everything else.

    Everything outside ``comp`` is reached only through ``centre``, so it
    suffices to separate the big vertices of ``comp`` from ``centre``.
    """
    frontier = set()
    seen = {centre}
    dq = deque([centre])
    while dq:
        v = dq.popleft()
        for y in g.neighbors(v):
            if y in seen or y not in comp:
                continue
            seen.add(y)
            if g.degree(y) >= 3:
                frontier.add(y)
            else:
                dq.append(y)
    if len(frontier) <= 1:
        return True
    # exact fallback: try every vertex of the component as the separator
    big = {v for v in comp if g.degree(v) >= 3}
    for x in sorted(comp):
        rest = big - {x}
        seen = {centre, x}
        dq = deque([centre])
        hit = False
        while dq and not hit:
            v = dq.popleft()
            for y in g.neighbors(v):
                if y in seen or y not in comp:
                    continue
                if y in rest:
                    hit = True
                    break
                seen.add(y)
                dq.append(y)
        if not hit:
            return True
    return False


def check_local_structure(inst: CounterexampleInstance, v: int) -> List[str]:
    """Component and shielding structure of ``G - eps(v)`` for a branch vertex ``v`` off ``P_M``."""
    _need_tree(inst)
    T = inst.pattern
    g = inst.graph
    x = inst.eps.vertex_map[v]
    U = branch_vertices(T)
    tree_parts = [c for c in components(T, removed_vertices=[v]) if c & U]
    k = len(tree_parts)
    comps = components(g, removed_vertices=[x])
    lab = T.label(v)
    problems = []
    if len(comps) != k:
        problems.append(f"G - eps({lab}) has {len(comps)} components, expected {k}")
    owner: Dict[int, int] = {}
    for i, c in enumerate(comps):
        for y in c:
            owner[y] = i
    seen_owner = set()
    for part in tree_parts:
        owners = {owner[inst.eps.vertex_map[s]] for s in part & U}
        if len(owners) != 1:
            problems.append(f"images of one piece of T - {lab} are split across components")
            continue
        (o,) = owners
        if o in seen_owner:
            problems.append(f"two pieces of T - {lab} share a component of G - eps({lab})")
        seen_owner.add(o)
    for c in comps:
        if not _shield_ok(g, x, c):
            problems.append(f"a component of G - eps({lab}) has no single shielding vertex")
    return problems


def local_structure_vertices(inst: CounterexampleInstance) -> List[int]:
    _need_tree(inst)
    main = set(inst.tree_parts.main_path)
    return sorted(s for s in branch_vertices(inst.pattern) if s not in main)


def validate_construction_properties(
    inst: CounterexampleInstance, local_limit: Optional[int] = None
) -> VerificationReport:
    """Run every structural check that applies to the instance kind.

    ``local_limit`` caps how many branch vertices get the local-structure
    check (all of them by default).
    """
    clock = Stopwatch()
    checks: Dict[str, List[str]] = {"P3": check_p3(inst)}
    if inst.kind == "ladder":
        checks["four-components"] = check_ladder_components(inst)
    else:
        checks["P1"] = check_p1(inst)
        checks["P2"] = check_p2(inst)
        verts = local_structure_vertices(inst)
        if local_limit is not None:
            verts = verts[:local_limit]
        local = []
        for v in verts:
            local.extend(check_local_structure(inst, v))
        checks["local-structure"] = local
        checks_run = len(verts)
    failed = {k: v for k, v in checks.items() if v}
    params = {"kind": inst.kind, "r": inst.r}
    params.update({k: v for k, v in inst.params.items()})
    stats = {"wall_time": clock.elapsed(), "vertices": inst.graph.n, "edges": inst.graph.m}
    if inst.kind == "tree":
        stats["local_checked"] = checks_run
    detail = {"checks": sorted(checks), "violations": failed}
    return VerificationReport("construction-P", params, FAILS if failed else HOLDS, None, stats, detail)
