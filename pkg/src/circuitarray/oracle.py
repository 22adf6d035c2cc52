"""Exact effective resistance on the weighted graph underlying a grid.

Used only to cross-check :func:`circuitarray.grid.reduce_grid`.  The
resistance between u and v is det(L with u, v removed) / det(L with u removed)
for the weighted Laplacian L (conductance = 1/resistance), i.e. a ratio of
weighted 2-forest and spanning-tree sums.  Determinants use fraction-free
Bareiss elimination on an integer-scaled matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping

from .algebra import format_rational, substitute
from .grid import GridLabeling, corner_tails, reduce_grid

Vertex = tuple[int, int]


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[Vertex, Vertex, Fraction], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        for u, v, r in self.edges:
            if u == v:
                raise OracleError(f"self-loop at {u}")
            if u not in vs or v not in vs:
                raise OracleError(f"edge {u}-{v} leaves the vertex set")
            if r <= 0:
                raise OracleError(f"edge {u}-{v} has nonpositive resistance {r}")

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "edges": [{"u": list(u), "v": list(v), "r": format_rational(r)} for u, v, r in self.edges],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for u, v, _ in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen, stack = {self.vertices[0]}, [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


def triangle_vertices(n: int, r: int, d: int) -> tuple[Vertex, Vertex, Vertex]:
    """(bottom-left, bottom-right, apex) of T_{r,d} in an n-grid."""
    y = n - r
    x = n - r + 2 * (d - 1)
    return (x, y), (x + 2, y), (x + 1, y + 1)


def grid_corners(n: int) -> tuple[Vertex, Vertex, Vertex]:
    """(top, bottom-left, bottom-right), the same order as ``corner_tails``."""
    return (n, n), (0, 0), (2 * n, 0)


def grid_to_graph(g: GridLabeling, assignment: Mapping[str, Fraction] | None = None) -> WeightedGraph:
    """Lattice embedding of ``g``: vertices (2a+b, b), one edge per label."""
    assignment = assignment or {}
    edges = []
    vertices = set()
    for r, d, tri in g.triangles():
        p, s, q = triangle_vertices(g.n, r, d)
        vertices.update((p, s, q))
        for (u, v), value in (((p, q), tri.L), ((q, s), tri.R), ((p, s), tri.B)):
            w = substitute(value, assignment) if not isinstance(value, Fraction) else value
            if w <= 0:
                raise OracleError(f"edge {u}-{v} evaluates to nonpositive resistance {w}")
            edges.append((u, v, w))
    return WeightedGraph(tuple(sorted(vertices)), tuple(edges))


def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _scaled_laplacian(graph: WeightedGraph) -> tuple[list[list[int]], int, dict]:
    index = {v: i for i, v in enumerate(graph.vertices)}
    conductances = [1 / r for _, _, r in graph.edges]
    scale = lcm(*(c.denominator for c in conductances)) if conductances else 1
    n = len(index)
    lap = [[0] * n for _ in range(n)]
    for (u, v, _), c in zip(graph.edges, conductances):
        w = int(c * scale)
        i, j = index[u], index[v]
        lap[i][i] += w
        lap[j][j] += w
        lap[i][j] -= w
        lap[j][i] -= w
    return lap, scale, index


def _minor(lap, drop):
    keep = [i for i in range(len(lap)) if i not in drop]
    return [[lap[i][j] for j in keep] for i in keep]


def effective_resistance(graph: WeightedGraph, u: Vertex, v: Vertex) -> Fraction:
    if u == v:
        raise OracleError("effective resistance needs two distinct vertices")
    if u not in graph.vertices or v not in graph.vertices:
        raise OracleError("vertex not in graph")
    if not graph.is_connected():
        raise OracleError("graph is disconnected")
    lap, scale, index = _scaled_laplacian(graph)
    top = bareiss_determinant(_minor(lap, {index[u], index[v]}))
    bottom = bareiss_determinant(_minor(lap, {index[u]}))
    # both minors were scaled by `scale` per row; the ratio loses one factor
    return Fraction(top * scale, bottom)


def reduce_with_tails(g: GridLabeling) -> tuple[GridLabeling, tuple]:
    """``reduce_grid`` plus the three discarded corner arms (top, bottom-left, bottom-right)."""
    tails = corner_tails(g)
    return reduce_grid(g), tails


def corner_resistances(g: GridLabeling, assignment=None) -> dict[tuple[int, int], Fraction]:
    """Effective resistance between each pair of corners, keyed by corner indices."""
    graph = grid_to_graph(g, assignment)
    corners = grid_corners(g.n)
    out = {}
    for a in range(3):
        for b in range(a + 1, 3):
            out[(a, b)] = effective_resistance(graph, corners[a], corners[b])
    return out
