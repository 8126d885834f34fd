"""Stop selection: offset lattice, hexagon-cell selection, boundary projection.

Stops live on vertical traversals spaced s = 2k - d/2 apart, with spacing d
along each traversal and a d/2 vertical offset between adjacent traversals.
That makes every point of the plane lie within l1 distance exactly <= k of
some lattice center. Each center owns a congruent hexagonal cell of area
d*s; the translates tile the plane and every cell sits inside its center's
radius-k diamond. Centers whose cell meets the grid are kept: centers inside
the grid become stops directly; outside centers are replaced by up to four
boundary stops, one per quarter-diamond of their coverage region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from gridcover.bounds import CostParams, DomainError
from gridcover.grid import Grid, Point, l1_distance, rational_str, to_fraction

# float margins closer to zero than this are re-decided in exact arithmetic
_EPS = 1e-9

_MAX_D_DENOMINATOR = 10**6


def snap_distance(d: float, k: Fraction) -> Fraction:
    """Clamp a float spacing into (0, 2k] as a small-denominator rational.

    Exact lattice coordinates need rational d; the realized value (within
    1e-6 of the request) is what every bound is evaluated against.
    """
    dd = Fraction(d).limit_denominator(_MAX_D_DENOMINATOR)
    if dd <= 0:
        dd = Fraction(1, _MAX_D_DENOMINATOR)
    if dd > 2 * k:
        dd = 2 * k
    return dd


@dataclass(frozen=True)
class StopLattice:
    """Offset stop lattice covering a grid's bounding box inflated by 2k."""

    d: Fraction
    s: Fraction
    k: Fraction
    anchor: Point
    m_range: tuple[int, int]  # traversal indices, inclusive
    n_range: tuple[int, int]  # stop indices along a traversal, inclusive

    def traversal_x(self, m: int) -> Fraction:
        return self.anchor.x + m * self.s

    def stop_at(self, m: int, n: int) -> Point:
        y = self.anchor.y + n * self.d
        if m % 2:
            y += self.d / 2
        return Point(self.traversal_x(m), y)

    def centers(self) -> list[Point]:
        out = []
        for m in range(self.m_range[0], self.m_range[1] + 1):
            for n in range(self.n_range[0], self.n_range[1] + 1):
                out.append(self.stop_at(m, n))
        return out

    def center_index(self) -> list[tuple[int, int]]:
        return [(m, n)
                for m in range(self.m_range[0], self.m_range[1] + 1)
                for n in range(self.n_range[0], self.n_range[1] + 1)]


def build_lattice(d, p: CostParams, g: Grid, anchor: Point | None = None) -> StopLattice:
    """Lay out the lattice over g's bounding box inflated by 2k per side.

    The anchor defaults to the bounding-box lower-left corner; d may be any
    rational-like value in (0, 2k].
    """
    k = to_fraction(p.k)
    d = to_fraction(d)
    if not 0 < d <= 2 * k:
        raise DomainError(f"spacing must lie in (0, 2k], got d={d}, k={k}")
    s = 2 * k - d / 2
    xmin, ymin, xmax, ymax = g.bbox
    if anchor is None:
        anchor = Point(Fraction(xmin), Fraction(ymin))
    pad = 2 * k
    m_lo = math.floor((Fraction(xmin) - pad - anchor.x) / s)
    m_hi = math.ceil((Fraction(xmax) + pad - anchor.x) / s)
    # offset traversals shift stops by d/2, cover both parities
    n_lo = math.floor((Fraction(ymin) - pad - anchor.y - d / 2) / d)
    n_hi = math.ceil((Fraction(ymax) + pad - anchor.y) / d)
    return StopLattice(d=d, s=s, k=k, anchor=anchor,
                       m_range=(m_lo, m_hi), n_range=(n_lo, n_hi))


@dataclass(frozen=True)
class ProjectedStop:
    """Boundary stop replacing an outside center, tagged with its quarter-diamond."""

    stop: Point
    source: Point
    diamond_index: int  # 1..4 = +x, +y, -x, -y quarter


@dataclass
class StopSet:
    """Selected stops for one grid: inside centers plus projected boundary stops."""

    lattice: StopLattice
    c_in: list[Point]
    c_out: list[Point]
    projected: list[ProjectedStop]
    grid: Grid = field(repr=False)

    @property
    def stops(self) -> list[Point]:
        return self.c_in + [ps.stop for ps in self.projected]

    @property
    def stop_count(self) -> int:
        return len(self.c_in) + len(self.projected)

    def to_json_dict(self) -> dict:
        return {
            "d": rational_str(self.lattice.d),
            "s": rational_str(self.lattice.s),
            "anchor": [rational_str(self.lattice.anchor.x), rational_str(self.lattice.anchor.y)],
            "c_in": [[rational_str(q.x), rational_str(q.y)] for q in self.c_in],
            "projected": [
                {
                    "stop": [rational_str(ps.stop.x), rational_str(ps.stop.y)],
                    "source": [rational_str(ps.source.x), rational_str(ps.source.y)],
                    "diamond_index": ps.diamond_index,
                }
                for ps in self.projected
            ],
        }


def hexagon_cell(center: Point, d: Fraction, k: Fraction) -> list[Point]:
    """Vertices of the center's cell: the hexagon with corners (+-k, 0) and
    (+-(k - d/2), +-d/2) around it (a diamond when d = 2k)."""
    w = k - d / 2
    h = d / 2
    cx, cy = center.x, center.y
    return [
        Point(cx + k, cy), Point(cx + w, cy + h), Point(cx - w, cy + h),
        Point(cx - k, cy), Point(cx - w, cy - h), Point(cx + w, cy - h),
    ]


def _cell_square_margins(cx, cy, i, j, d, k):
    """Overlap margins of cell-vs-square on the four separating axes
    x, y, x+y, x-y (all edge normals of both shapes); the intersection is
    nonempty iff all margins are >= 0 and has positive area iff all are > 0."""
    h = d / 2
    cu, cv = cx + cy, cx - cy
    return (
        min(cx + k - i, i + 1 - cx + k),
        min(cy + h - j, j + 1 - cy + h),
        min(cu + k - i - j, i + j + 2 - cu + k),
        min(cv + k - i + j + 1, i - j + 1 - cv + k),
    )


def _clip_polygon(poly: list[Point], i: int, j: int) -> list[Point]:
    """Sutherland-Hodgman clip of a convex polygon against square (i, j)."""
    def clip(pts, inside, intersect):
        out = []
        n = len(pts)
        for t in range(n):
            a, b = pts[t], pts[(t + 1) % n]
            ia, ib = inside(a), inside(b)
            if ia:
                out.append(a)
            if ia != ib:
                out.append(intersect(a, b))
        return out

    def against(axis, bound, keep_low):
        def inside(p):
            v = p.x if axis == 0 else p.y
            return v <= bound if keep_low else v >= bound

        def intersect(a, b):
            ax, ay = a.x, a.y
            bx, by = b.x, b.y
            if axis == 0:
                t = (bound - ax) / (bx - ax)
                return Point(Fraction(bound), ay + t * (by - ay))
            t = (bound - ay) / (by - ay)
            return Point(ax + t * (bx - ax), Fraction(bound))

        return inside, intersect

    for axis, bound, keep_low in ((0, i, False), (0, i + 1, True),
                                  (1, j, False), (1, j + 1, True)):
        inside, intersect = against(axis, bound, keep_low)
        poly = clip(poly, inside, intersect)
        if not poly:
            return []
    return poly


def classify_centers(g: Grid, lat: StopLattice) -> tuple[list[Point], list[Point]]:
    """Select the lattice centers whose cell meets g; split inside/outside.

    Cells with a positive-area grid overlap are always selected. Where a cell
    only touches g along a boundary segment or corner, the touching points
    are equidistant to several centers and each exact witness point goes to
    its lexicographically smallest nearest center, so measure-zero tangencies
    never inflate the stop set. All decisions are exact; floats only screen
    the clearly-in / clearly-out cases.
    """
    centers = lat.centers()
    cxy = np.array([c.as_floats() for c in centers], dtype=float)
    tree = cKDTree(cxy)
    d, k = lat.d, lat.k
    df, kf = float(d), float(k)

    def owner_of(w: Point) -> int:
        wf = np.array(w.as_floats())
        dist, _ = tree.query(wf, p=1)
        cand = tree.query_ball_point(wf, r=float(dist) + 1e-6, p=1.0)
        best = min(cand, key=lambda ci: (l1_distance(w, centers[ci]), centers[ci]))
        return best

    selected: set[int] = set()
    sq_centers = np.array([(i + 0.5, j + 0.5) for i, j in sorted(g.squares)], dtype=float)
    windows = tree.query_ball_point(sq_centers, r=kf + 1 + 1e-6, p=1.0)
    for (i, j), cand in zip(sorted(g.squares), windows):
        for ci in sorted(cand):
            cx, cy = cxy[ci]
            fm = min(_cell_square_margins(cx, cy, i, j, df, kf))
            if fm > _EPS:
                selected.add(ci)
                continue
            if fm < -_EPS:
                continue
            c = centers[ci]
            em = min(_cell_square_margins(c.x, c.y, i, j, d, k))
            if em > 0:
                selected.add(ci)
            elif em == 0:
                # tangential contact: resolve ownership at exact witnesses
                piece = _clip_polygon(hexagon_cell(c, d, k), i, j)
                if not piece:
                    continue
                n = len(piece)
                mid = Point(sum(q.x for q in piece) / n, sum(q.y for q in piece) / n)
                for w in piece + [mid]:
                    selected.add(owner_of(w))

    c_in, c_out = [], []
    for ci in sorted(selected):
        c = centers[ci]
        (c_in if g.contains(c) else c_out).append(c)
    c_in.sort()
    c_out.sort()
    return c_in, c_out


def _quarter_centers(x_out: Point, k: Fraction) -> list[tuple[int, Point]]:
    h = k / 2
    return [
        (1, Point(x_out.x + h, x_out.y)),
        (2, Point(x_out.x, x_out.y + h)),
        (3, Point(x_out.x - h, x_out.y)),
        (4, Point(x_out.x, x_out.y - h)),
    ]


def project_out_center(g: Grid, x_out: Point, k) -> list[tuple[Point, int]]:
    """Project an outside center to boundary stops, one per quarter-diamond.

    The coverage diamond of x_out splits into four radius-k/2 diamonds; for
    each quarter that meets the grid the stop is the first boundary crossing
    of the segment from x_out toward an exact witness point (the l1-nearest
    point of a qualifying square to the quarter's center, lexicographically
    smallest). Any pair of points in one quarter is within k of each other,
    so each stop covers its whole quarter.
    """
    k = to_fraction(k)
    if g.contains(x_out):
        raise DomainError(f"center {x_out} lies in the grid; projection needs an outside center")
    half = k / 2
    out = []
    for di, qc in _quarter_centers(x_out, k):
        # candidate squares overlapping or touching the quarter's bounding box
        witness = None
        i_lo = math.floor(qc.x - half) - 1
        i_hi = math.ceil(qc.x + half) + 1
        j_lo = math.floor(qc.y - half) - 1
        j_hi = math.ceil(qc.y + half) + 1
        for i in range(i_lo, i_hi):
            for j in range(j_lo, j_hi):
                if (i, j) not in g.squares:
                    continue
                w = g.square_clamp((i, j), qc)
                if l1_distance(w, qc) <= half:
                    if witness is None or w < witness:
                        witness = w
        if witness is None:
            continue
        if witness == x_out:
            stop = witness  # degenerate: the center touches the boundary
        else:
            stop = g.first_boundary_hit(x_out, witness)
        out.append((stop, di))
    if not out:
        raise DomainError(f"coverage diamond of {x_out} does not meet the grid")
    return out


def build_stop_set(g: Grid, d, p: CostParams, anchor: Point | None = None) -> StopSet:
    """Build the full stop set for grid g at spacing d.

    Projected stops are deduplicated by exact equality (against each other
    and against inside stops), keeping the first provenance tag.
    """
    k = to_fraction(p.k)
    d = snap_distance(float(d), k) if not isinstance(d, Fraction) else d
    lat = build_lattice(d, p, g, anchor=anchor)
    c_in, c_out = classify_centers(g, lat)
    in_set = set(c_in)
    seen: set[Point] = set()
    projected: list[ProjectedStop] = []
    for xo in c_out:
        for stop, di in project_out_center(g, xo, k):
            if stop in in_set or stop in seen:
                continue
            seen.add(stop)
            projected.append(ProjectedStop(stop=stop, source=xo, diamond_index=di))
    return StopSet(lattice=lat, c_in=c_in, c_out=c_out, projected=projected, grid=g)
