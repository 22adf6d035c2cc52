"""Triangular n-grids with labeled edges and the row-reduction step.

An n-grid has rows r = 1..n of upright triangles T_{r,d}, d = 1..r.  Every
grid edge is a side of exactly one upright triangle, so an edge is addressed
by ``(r, d, side)`` with side L (left), R (right) or B (base).  Triangle data
is passed around as ``Triangle(L, R, B)``.

Reducing an n-grid turns every upright triangle into a star, then every
interior vertex (where three stars meet) back into a triangle.  The new
triangles form an (n-1)-grid whose vertices are the star centres.  The three
corner vertices of the old grid are left holding one pendant arm each (the
corner tails) and are dropped.

Edge values are exact field elements: :class:`fractions.Fraction` for numeric
grids, :class:`~circuitarray.algebra.RationalFunction` for symbolic ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

from .algebra import RationalFunction, format_rational

SIDES = ("L", "R", "B")


class GridError(ValueError):
    pass


class Triangle(NamedTuple):
    L: object
    R: object
    B: object


@dataclass(frozen=True, order=True)
class EdgeAddress:
    r: int
    d: int
    side: str

    def __post_init__(self):
        if self.side not in SIDES:
            raise GridError(f"side must be one of L, R, B, got {self.side!r}")
        if not (1 <= self.d <= self.r):
            raise GridError(f"no upright triangle at row {self.r}, diagonal {self.d}")

    def mirror(self) -> "EdgeAddress":
        side = {"L": "R", "R": "L", "B": "B"}[self.side]
        return EdgeAddress(self.r, self.r + 1 - self.d, side)


def grid_addresses(n: int) -> Iterator[EdgeAddress]:
    for r in range(1, n + 1):
        for d in range(1, r + 1):
            for side in SIDES:
                yield EdgeAddress(r, d, side)


@dataclass(frozen=True)
class GridLabeling:
    """Resistance labels of an n-grid after ``m`` reductions."""

    n: int
    m: int
    labels: dict = field(hash=False, compare=True)

    def __post_init__(self):
        if self.n < 1:
            raise GridError("grid size must be at least 1")
        if self.m < 0:
            raise GridError("reduction count must be nonnegative")
        expected = set(grid_addresses(self.n))
        if set(self.labels) != expected:
            missing = sorted(expected - set(self.labels))
            extra = sorted(set(self.labels) - expected)
            raise GridError(f"bad label set: missing {missing[:3]}, unexpected {extra[:3]}")

    def __getitem__(self, key) -> object:
        if not isinstance(key, EdgeAddress):
            key = EdgeAddress(*key)
        return self.labels[key]

    def triangle(self, r: int, d: int) -> Triangle:
        lab = self.labels
        return Triangle(lab[EdgeAddress(r, d, "L")], lab[EdgeAddress(r, d, "R")], lab[EdgeAddress(r, d, "B")])

    def triangles(self) -> Iterator[tuple[int, int, Triangle]]:
        for r in range(1, self.n + 1):
            for d in range(1, r + 1):
                yield r, d, self.triangle(r, d)

    def is_symmetric(self) -> bool:
        return all(self.labels[a] == self.labels[a.mirror()] for a in self.labels)

    def map_values(self, fn) -> "GridLabeling":
        return GridLabeling(self.n, self.m, {a: fn(v) for a, v in self.labels.items()})

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        variables = None
        edges = []
        for a in sorted(self.labels):
            v = self.labels[a]
            if isinstance(v, RationalFunction):
                variables = v.variables
                value = v.to_json()
            else:
                value = format_rational(v)
            edges.append({"r": a.r, "d": a.d, "side": a.side, "value": value})
        out = {"n": self.n, "m": self.m}
        if variables is not None:
            out["variables"] = list(variables)
        out["edges"] = edges
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "GridLabeling":
        variables = data.get("variables")
        labels = {}
        for e in data["edges"]:
            v = e["value"]
            if isinstance(v, dict):
                if not variables:
                    raise GridError("symbolic edge values need a variables list")
                value = RationalFunction.from_json(v, variables)
            else:
                value = Fraction(v)
            labels[EdgeAddress(e["r"], e["d"], e["side"])] = value
        return cls(data["n"], data["m"], labels)


def make_all_one_grid(n: int, variables: Iterable[str] | None = None) -> GridLabeling:
    """n-grid with every edge equal to 1 (symbolic constant if ``variables`` given)."""
    if n < 1:
        raise GridError("grid size must be at least 1")
    one = Fraction(1) if variables is None else RationalFunction.constant(1, variables)
    return GridLabeling(n, 0, {a: one for a in grid_addresses(n)})


# -- local transforms ---------------------------------------------------------


def _exact(v):
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        raise GridError("edge values must be exact, not float")
    return v


def delta_transform(x, y, z):
    """Star arm between edges ``x`` and ``y`` of a triangle with sides x, y, z."""
    x, y, z = _exact(x), _exact(y), _exact(z)
    total = x + y + z
    if total == 0:
        raise ZeroDivisionError("triangle resistances sum to zero")
    return x * y / total


def wye_transform(a, b, c):
    """Triangle edge opposite arm ``a`` of a star with arms a, b, c."""
    a, b, c = _exact(a), _exact(b), _exact(c)
    if a == 0:
        raise ZeroDivisionError("star arm opposite the requested edge is zero")
    return (a * b + b * c + c * a) / a


def apex_arm(t: Triangle):
    return delta_transform(t.L, t.R, t.B)


def right_arm(t: Triangle):
    """Arm towards the bottom-right vertex."""
    return delta_transform(t.R, t.B, t.L)


def left_arm(t: Triangle):
    """Arm towards the bottom-left vertex."""
    return delta_transform(t.B, t.L, t.R)


def perimeter_edge(upper: Triangle, lower: Triangle):
    """New left-boundary edge: two arms meeting at a boundary vertex, in series."""
    upper, lower = Triangle(*upper), Triangle(*lower)
    return left_arm(upper) + apex_arm(lower)


def base_perimeter_edge(left: Triangle, right: Triangle):
    """New base edge of the last row: arms of two bottom-row neighbours in series."""
    left, right = Triangle(*left), Triangle(*right)
    return right_arm(left) + left_arm(right)


def reduced_edge(kind: str, triangles):
    """Y-to-triangle edge at an interior vertex.

    ``kind`` and the order of the three triangles (``(L, R, B)`` tuples):

    * ``"L"``: T_{r,d-1}, T_{r,d}, T_{r+1,d}  gives the left side of child T_{r,d};
    * ``"R"``: T_{r,d}, T_{r,d+1}, T_{r+1,d+1}  gives the right side of child T_{r,d};
    * ``"B"``: T_{r+2,d+1}, T_{r+1,d}, T_{r+1,d+1}  gives the base of child T_{r,d}.
    """
    triangles = [Triangle(*t) for t in triangles]
    if len(triangles) != 3:
        raise GridError(f"reduced_edge takes three triangles, got {len(triangles)}")
    t1, t2, t3 = triangles
    if kind == "L":
        return wye_transform(right_arm(t1), left_arm(t2), apex_arm(t3))
    if kind == "R":
        return wye_transform(left_arm(t2), right_arm(t1), apex_arm(t3))
    if kind == "B":
        return wye_transform(apex_arm(t1), right_arm(t2), left_arm(t3))
    raise GridError(f"kind must be L, R or B, got {kind!r}")


# -- row reduction ------------------------------------------------------------


def corner_tails(g: GridLabeling) -> tuple:
    """Pendant arms left at the top, bottom-left and bottom-right corners."""
    return (
        apex_arm(g.triangle(1, 1)),
        left_arm(g.triangle(g.n, 1)),
        right_arm(g.triangle(g.n, g.n)),
    )


def reduce_grid(g: GridLabeling) -> GridLabeling:
    """One reduction step: n-grid to the equivalent (n-1)-grid, tails dropped.

    Only the left half is computed; the right half is its mirror image.
    """
    n = g.n
    if n < 2:
        raise GridError("cannot reduce a grid with fewer than 2 rows")
    if not g.is_symmetric():
        raise GridError("symmetric grids only")
    t = g.triangle
    labels = {}
    for r in range(1, n):
        for d in range(1, (r + 1) // 2 + 1):
            if d == 1:
                left = perimeter_edge(t(r, 1), t(r + 1, 1))
            else:
                left = reduced_edge("L", (t(r, d - 1), t(r, d), t(r + 1, d)))
            if d == r:
                right = left
            else:
                right = reduced_edge("R", (t(r, d), t(r, d + 1), t(r + 1, d + 1)))
            if r == n - 1:
                base = base_perimeter_edge(t(n, d), t(n, d + 1))
            else:
                base = reduced_edge("B", (t(r + 2, d + 1), t(r + 1, d), t(r + 1, d + 1)))
            for a, v in ((EdgeAddress(r, d, "L"), left), (EdgeAddress(r, d, "R"), right), (EdgeAddress(r, d, "B"), base)):
                labels[a] = v
                labels[a.mirror()] = v
    return GridLabeling(n - 1, g.m + 1, labels)


def reduce_times(g: GridLabeling, times: int) -> GridLabeling:
    if times < 0:
        raise GridError("reduction count must be nonnegative")
    if times > g.n - 1:
        raise GridError(f"a {g.n}-grid can be reduced at most {g.n - 1} times")
    for _ in range(times):
        g = reduce_grid(g)
    return g
