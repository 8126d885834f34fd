"""Exact geometry for regions built from integral unit squares.

A grid is a finite union of closed unit squares whose corners have integer
coordinates. All containment / intersection predicates run on exact rational
coordinates; floats appear only when callers convert for plotting or
reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

Cell = tuple[int, int]

# unit direction vectors, counterclockwise order
_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))


class GridError(ValueError):
    """Malformed grid input (bad mask, empty region, ...)."""


def to_fraction(v) -> Fraction:
    """Coerce int/float/str/Fraction to an exact Fraction.

    Floats convert exactly (they are dyadic rationals); strings accept
    both "p/q" and decimal notation.
    """
    if isinstance(v, Fraction):
        return v
    return Fraction(v)


@dataclass(frozen=True, order=True)
class Point:
    """Exact rational point. Ordering is lexicographic on (x, y)."""

    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(to_fraction(x), to_fraction(y))

    def __iter__(self):
        yield self.x
        yield self.y

    def as_floats(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def __str__(self):
        return f"({self.x}, {self.y})"


def l1_distance(p: Point, q: Point) -> Fraction:
    return abs(p.x - q.x) + abs(p.y - q.y)


def rational_str(v: Fraction) -> str:
    v = to_fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _connected(cells: frozenset[Cell] | set[Cell]) -> bool:
    if not cells:
        return True
    start = next(iter(sorted(cells)))
    seen = {start}
    stack = [start]
    while stack:
        i, j = stack.pop()
        for di, dj in _DIRS:
            nb = (i + di, j + dj)
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


@dataclass(frozen=True)
class BoundaryLoop:
    """Closed axis-parallel polyline (corner vertices only, integer coords)."""

    vertices: tuple[tuple[int, int], ...]
    is_hole: bool

    @property
    def length(self) -> int:
        total = 0
        n = len(self.vertices)
        for a in range(n):
            x1, y1 = self.vertices[a]
            x2, y2 = self.vertices[(a + 1) % n]
            total += abs(x2 - x1) + abs(y2 - y1)
        return total

    def unit_edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Expand corner polyline into unit steps, in loop order."""
        edges = []
        n = len(self.vertices)
        for a in range(n):
            x1, y1 = self.vertices[a]
            x2, y2 = self.vertices[(a + 1) % n]
            dx = (x2 > x1) - (x2 < x1)
            dy = (y2 > y1) - (y2 < y1)
            steps = abs(x2 - x1) + abs(y2 - y1)
            for t in range(steps):
                p = (x1 + t * dx, y1 + t * dy)
                q = (x1 + (t + 1) * dx, y1 + (t + 1) * dy)
                edges.append((p, q))
        return edges


class Grid:
    """Immutable union of integral unit squares with exact geometry queries."""

    def __init__(self, squares: Iterable[Cell]):
        cells = frozenset((int(i), int(j)) for i, j in squares)
        if not cells:
            raise GridError("a grid needs at least one unit square")
        self.squares = cells

    def __eq__(self, other):
        return isinstance(other, Grid) and self.squares == other.squares

    def __hash__(self):
        return hash(self.squares)

    def __repr__(self):
        return f"Grid(area={self.area}, perimeter={self.perimeter})"

    # -- derived scalars ---------------------------------------------------

    @property
    def area(self) -> int:
        return len(self.squares)

    @cached_property
    def perimeter(self) -> int:
        """Count of unit edges adjacent to exactly one square (holes included)."""
        total = 0
        for i, j in self.squares:
            for di, dj in _DIRS:
                if (i + di, j + dj) not in self.squares:
                    total += 1
        return total

    @cached_property
    def bbox(self) -> tuple[int, int, int, int]:
        """(xmin, ymin, xmax, ymax) of the covered region, in coordinates."""
        xs = [i for i, _ in self.squares]
        ys = [j for _, j in self.squares]
        return min(xs), min(ys), max(xs) + 1, max(ys) + 1

    # -- structure ---------------------------------------------------------

    @cached_property
    def is_connected(self) -> bool:
        return _connected(self.squares)

    def components(self) -> list["Grid"]:
        remaining = set(self.squares)
        comps = []
        while remaining:
            start = min(remaining)
            seen = {start}
            stack = [start]
            while stack:
                i, j = stack.pop()
                for di, dj in _DIRS:
                    nb = (i + di, j + dj)
                    if nb in remaining and nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            comps.append(Grid(seen))
            remaining -= seen
        comps.sort(key=lambda g: min(g.squares))
        return comps

    @cached_property
    def is_convex(self) -> bool:
        """Contiguous and every axis-parallel line meets it in one segment.

        For unit-square unions it suffices that the grid is edge-connected
        and that the occupied cells of every row and every column form one
        contiguous run.
        """
        if not self.is_connected:
            return False
        rows: dict[int, list[int]] = {}
        cols: dict[int, list[int]] = {}
        for i, j in self.squares:
            rows.setdefault(j, []).append(i)
            cols.setdefault(i, []).append(j)
        for run in list(rows.values()) + list(cols.values()):
            if max(run) - min(run) + 1 != len(run):
                return False
        return True

    @cached_property
    def has_holes(self) -> bool:
        return any(loop.is_hole for loop in self.boundary_loops())

    # -- boundary ----------------------------------------------------------

    def _directed_boundary_edges(self):
        """Unit boundary edges oriented with the interior on the left."""
        edges = []
        for i, j in sorted(self.squares):
            if (i, j - 1) not in self.squares:
                edges.append(((i, j), (i + 1, j)))
            if (i + 1, j) not in self.squares:
                edges.append(((i + 1, j), (i + 1, j + 1)))
            if (i, j + 1) not in self.squares:
                edges.append(((i + 1, j + 1), (i, j + 1)))
            if (i - 1, j) not in self.squares:
                edges.append(((i, j + 1), (i, j)))
        return edges

    @cached_property
    def _loops(self) -> tuple[BoundaryLoop, ...]:
        edges = self._directed_boundary_edges()
        out: dict[tuple[int, int], list[tuple[tuple[int, int], tuple[int, int]]]] = {}
        for a, b in edges:
            out.setdefault(a, []).append((a, b))
        for lst in out.values():
            lst.sort()
        used = set()
        loops = []
        for start_edge in edges:
            if start_edge in used:
                continue
            loop_edges = [start_edge]
            used.add(start_edge)
            while True:
                a, b = loop_edges[-1]
                din = (b[0] - a[0], b[1] - a[1])
                # prefer the most-counterclockwise turn so loops touching at
                # a pinch vertex stay separate simple cycles
                left = (-din[1], din[0])
                right = (din[1], -din[0])
                nxt = None
                for want in (left, din, right):
                    target = ((b[0], b[1]), (b[0] + want[0], b[1] + want[1]))
                    cand = out.get(b, [])
                    if target in cand and target not in used:
                        nxt = target
                        break
                if nxt is None:
                    break
                used.add(nxt)
                loop_edges.append(nxt)
            # collapse collinear runs to corner vertices
            verts = []
            n = len(loop_edges)
            for idx in range(n):
                a, b = loop_edges[idx]
                pa, _ = loop_edges[idx - 1]
                din_prev = (a[0] - pa[0], a[1] - pa[1])
                dout = (b[0] - a[0], b[1] - a[1])
                if din_prev != dout:
                    verts.append(a)
            signed2 = 0
            for idx in range(len(verts)):
                x1, y1 = verts[idx]
                x2, y2 = verts[(idx + 1) % len(verts)]
                signed2 += x1 * y2 - x2 * y1
            loops.append(BoundaryLoop(tuple(verts), is_hole=signed2 < 0))
        return tuple(loops)

    def boundary_loops(self) -> list[BoundaryLoop]:
        return list(self._loops)

    @cached_property
    def boundary_edge_set(self) -> frozenset[tuple[tuple[int, int], tuple[int, int]]]:
        """Undirected unit boundary edges with endpoints in lexicographic order."""
        return frozenset(tuple(sorted(e)) for e in self._directed_boundary_edges())

    # -- point queries -----------------------------------------------------

    def _cell_candidates(self, v: Fraction) -> list[int]:
        f = math.floor(v)
        cands = [f]
        if v == f:
            cands.append(f - 1)
        return cands

    def contains(self, p: Point) -> bool:
        """True iff p lies in the closed union of squares."""
        for i in self._cell_candidates(p.x):
            for j in self._cell_candidates(p.y):
                if (i, j) in self.squares:
                    return True
        return False

    def square_clamp(self, cell: Cell, p: Point) -> Point:
        """Nearest point of the closed square `cell` to p (exact, per-axis clamp)."""
        i, j = cell
        x = min(max(p.x, Fraction(i)), Fraction(i + 1))
        y = min(max(p.y, Fraction(j)), Fraction(j + 1))
        return Point(x, y)

    def l1_distance_to(self, p: Point) -> Fraction:
        """Exact l1 distance from p to the grid (0 when contained)."""
        best = None
        for cell in sorted(self.squares):
            q = self.square_clamp(cell, p)
            d = l1_distance(p, q)
            if best is None or d < best:
                best = d
            if best == 0:
                break
        return best

    def first_boundary_hit(self, outside: Point, inside: Point) -> Point:
        """First crossing of segment [outside -> inside] with the boundary.

        `outside` must not be contained and `inside` must be; the earliest
        boundary point along the segment is returned, computed exactly.
        """
        dx = inside.x - outside.x
        dy = inside.y - outside.y
        best_t = None
        best_pt = None
        xmin, xmax = sorted((outside.x, inside.x))
        ymin, ymax = sorted((outside.y, inside.y))
        for (a, b) in self.boundary_edge_set:
            (x1, y1), (x2, y2) = a, b
            if x1 == x2:  # vertical edge at x = x1, y in [y1, y2]
                if dx == 0:
                    if outside.x != x1:
                        continue
                    # collinear: first endpoint of the edge hit by the segment
                    for ey in sorted((y1, y2)):
                        if ymin <= ey <= ymax:
                            t = (Fraction(ey) - outside.y) / dy
                            if 0 <= t <= 1 and (best_t is None or t < best_t):
                                best_t, best_pt = t, Point(Fraction(x1), Fraction(ey))
                    continue
                if not (xmin <= x1 <= xmax):
                    continue
                t = (Fraction(x1) - outside.x) / dx
                if t < 0 or t > 1:
                    continue
                y = outside.y + t * dy
                if y1 <= y <= y2 or y2 <= y <= y1:
                    if best_t is None or t < best_t:
                        best_t, best_pt = t, Point(Fraction(x1), y)
            else:  # horizontal edge at y = y1
                if dy == 0:
                    if outside.y != y1:
                        continue
                    for ex in sorted((x1, x2)):
                        if xmin <= ex <= xmax:
                            t = (Fraction(ex) - outside.x) / dx
                            if 0 <= t <= 1 and (best_t is None or t < best_t):
                                best_t, best_pt = t, Point(Fraction(ex), Fraction(y1))
                    continue
                if not (ymin <= y1 <= ymax):
                    continue
                t = (Fraction(y1) - outside.y) / dy
                if t < 0 or t > 1:
                    continue
                x = outside.x + t * dx
                if x1 <= x <= x2 or x2 <= x <= x1:
                    if best_t is None or t < best_t:
                        best_t, best_pt = t, Point(x, Fraction(y1))
        if best_pt is None:
            raise GridError("segment does not cross the boundary")
        return best_pt

    def _column_covers(self, x: Fraction, j: int) -> bool:
        """Does the closed grid cover the segment {x} x [j, j+1]?"""
        return any((i, j) in self.squares for i in self._cell_candidates(x))

    def vertical_exit_above(self, x: Fraction, y: Fraction) -> Fraction:
        """Smallest Y >= y where walking up the line at x leaves the grid."""
        j = math.floor(y)
        # the segment just above y lies in square row floor(y), even when y
        # is an integer; if that row is missing the point is already the exit
        if not self._column_covers(x, j):
            return to_fraction(y)
        while self._column_covers(x, j):
            j += 1
        return Fraction(j)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "squares": [list(c) for c in sorted(self.squares)],
            "area": self.area,
            "perimeter": self.perimeter,
            "convex": self.is_convex,
        }

    def to_mask(self) -> str:
        xmin, ymin, xmax, ymax = self.bbox
        rows = []
        for j in range(ymax - 1, ymin - 1, -1):
            rows.append("".join("#" if (i, j) in self.squares else "."
                                for i in range(xmin, xmax)))
        return "\n".join(rows)


def parse_grid(text: str) -> Grid:
    """Parse an ASCII mask of '#' (filled) and '.' (empty) rows.

    Rows are listed top to bottom; row r of an R-row mask holds squares with
    j = R - 1 - r. Rows must be equal length; anything but '#'/'.' is an
    error reported with its line and column (both 1-based).
    """
    lines = text.split("\n")
    while lines and lines[-1].strip() == "":
        lines.pop()
    while lines and lines[0].strip() == "":
        lines.pop(0)
    if not lines:
        raise GridError("empty grid mask")
    lines = [ln.rstrip("\r") for ln in lines]
    width = len(lines[0])
    squares = []
    nrows = len(lines)
    for r, ln in enumerate(lines):
        if len(ln) != width:
            raise GridError(f"ragged mask: line {r + 1} has length {len(ln)}, expected {width}")
        for c, ch in enumerate(ln):
            if ch == "#":
                squares.append((c, nrows - 1 - r))
            elif ch != ".":
                raise GridError(f"invalid character {ch!r} at line {r + 1}, column {c + 1}")
    if not squares:
        raise GridError("grid mask contains no '#' squares")
    return Grid(squares)
