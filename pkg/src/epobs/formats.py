"""Wire formats: graph6, JSON with roles, DOT and DOT overlays of certificates."""

from __future__ import annotations

import json
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple

from .graph import Edge, Graph, GraphError, edge_key, path_edges

# -- graph6 ----------------------------------------------------------------


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n < 68719476736:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise GraphError("graph too large for graph6")


def to_graph6(g: Graph) -> str:
    """Standard graph6 string (no header, no newline), vertices in id order."""
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    bits.extend([0] * (-len(bits) % 6))
    body = []
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k : k + 6]:
            v = (v << 1) | b
        body.append(chr(v + 63))
    return _encode_n(g.n) + "".join(body)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s or any(not 63 <= ord(ch) <= 126 for ch in s):
        raise GraphError("not a graph6 string")
    data = [ord(ch) - 63 for ch in s]
    if data[0] == 63:
        if len(data) > 1 and data[1] == 63:
            if len(data) < 8:
                raise GraphError("truncated graph6 size field")
            n = 0
            for x in data[2:8]:
                n = (n << 6) | x
            data = data[8:]
        else:
            if len(data) < 4:
                raise GraphError("truncated graph6 size field")
            n = 0
            for x in data[1:4]:
                n = (n << 6) | x
            data = data[4:]
    else:
        n = data[0]
        data = data[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) != need:
        raise GraphError(f"graph6 body has {len(data)} characters, expected {need}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (data[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


# -- JSON ------------------------------------------------------------------


def graph_to_json(g: Graph, roles: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    return {
        "n": g.n,
        "edges": [list(e) for e in g.edges()],
        "labels": {str(v): g.label(v) for v in g.vertices()},
        "roles": dict(roles or {}),
    }


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def graph_from_json(data: Mapping[str, Any]) -> Tuple[Graph, Dict[str, Any]]:
    """Inverse of :func:`graph_to_json`; returns the graph and its roles."""
    try:
        n = int(data["n"])
        edges = [(int(u), int(v)) for u, v in data["edges"]]
        raw = data.get("labels") or {}
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from None
    labels = None
    if raw:
        labels = [str(raw.get(str(v), v)) for v in range(n)]
    return Graph(n, edges, labels), dict(data.get("roles") or {})


# -- DOT -------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    g: Graph,
    name: str = "G",
    vertex_attrs: Optional[Mapping[int, Mapping[str, str]]] = None,
    edge_attrs: Optional[Mapping[Edge, Mapping[str, str]]] = None,
) -> str:
    """Undirected DOT with labels; optional per-vertex and per-edge attributes."""
    vertex_attrs = vertex_attrs or {}
    edge_attrs = edge_attrs or {}
    lines = [f"graph {_quote(name)} {{"]
    for v in g.vertices():
        attrs = {"label": g.label(v)}
        attrs.update(vertex_attrs.get(v, {}))
        body = ", ".join(f"{k}={_quote(str(val))}" for k, val in sorted(attrs.items()))
        lines.append(f"  {v} [{body}];")
    for u, v in g.edges():
        attrs = edge_attrs.get((u, v))
        if attrs:
            body = ", ".join(f"{k}={_quote(str(val))}" for k, val in sorted(attrs.items()))
            lines.append(f"  {u} -- {v} [{body}];")
        else:
            lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_PALETTE = {"path_ab": "red", "path_cd": "blue"}


def _mark_path(g: Graph, path: Iterable[int], attrs: Dict[Edge, Dict[str, str]], role: str, color: str) -> None:
    for u, v in path_edges(list(path)):
        if not g.has_edge(u, v):
            raise GraphError(f"certificate path uses non-edge {u}-{v}")
        attrs.setdefault(edge_key(u, v), {}).update({"color": color, "penwidth": "3", "role": role})


def certificate_overlay(g: Graph, cert: Mapping[str, Any]) -> str:
    """DOT rendering of ``g`` with a linkage, linkage pair or subdivision highlighted.

    Raises :class:`GraphError` for certificates without a graph overlay.
    """
    eattrs: Dict[Edge, Dict[str, str]] = {}
    vattrs: Dict[int, Dict[str, str]] = {}
    if "path_ab" in cert and "path_cd" in cert:
        for key in ("path_ab", "path_cd"):
            _mark_path(g, cert[key], eattrs, key, _PALETTE[key])
    elif "first" in cert and "second" in cert:
        for which, color_shift in (("first", ("red", "blue")), ("second", ("orange", "green"))):
            sub = cert[which]
            if "path_ab" in sub:
                _mark_path(g, sub["path_ab"], eattrs, f"{which}.path_ab", color_shift[0])
                _mark_path(g, sub["path_cd"], eattrs, f"{which}.path_cd", color_shift[1])
            elif "edge_paths" in sub:
                for item in sub["edge_paths"]:
                    _mark_path(g, item["path"], eattrs, which, color_shift[0])
                for x in sub["branch_map"].values():
                    vattrs.setdefault(int(x), {})["shape"] = "doublecircle"
            else:
                raise GraphError("unrecognised certificate pair")
    elif "branch_map" in cert and "edge_paths" in cert:
        for item in cert["edge_paths"]:
            _mark_path(g, item["path"], eattrs, "subdivision", "red")
        for x in cert["branch_map"].values():
            vattrs.setdefault(int(x), {})["shape"] = "doublecircle"
    elif "hitting_set" in cert:
        for u, v in cert["hitting_set"]:
            eattrs.setdefault(edge_key(u, v), {}).update({"color": "red", "style": "dashed", "role": "deleted"})
    elif "deleted_vertices" in cert:
        for x in cert["deleted_vertices"]:
            vattrs.setdefault(int(x), {}).update({"color": "red", "style": "filled", "fillcolor": "pink"})
    else:
        raise GraphError("certificate has no graph overlay")
    return to_dot(g, vertex_attrs=vattrs, edge_attrs=eattrs)

