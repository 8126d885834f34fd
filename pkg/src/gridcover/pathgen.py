"""Covering-path construction from a stop set.

General grids: traversal segments, one boundary link per inside-stop run,
and the perimeter cycle form a connected structure; a minimum spanning tree
of it is doubled and shortcut in preorder, so the realized length is at most
twice the tree length. Convex grids instead get a serpentine sweep over the
traversal runs followed by one boundary-ordered chain through the projected
stops, realizing at most |C_in|*d + 2P (asserted per instance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from gridcover.bounds import CostParams, DomainError, optimal_profile
from gridcover.grid import Grid, Point, l1_distance, rational_str, to_fraction
from gridcover.stops import StopSet, build_stop_set, snap_distance
from gridcover.verify import verify_coverage


class InvariantViolation(RuntimeError):
    """A constructed object failed one of its promised inequalities."""


@dataclass(frozen=True)
class CoveringPath:
    """Ordered stop sequence; L is the exact sum of consecutive l1 hops."""

    stops: tuple[Point, ...]
    L: Fraction
    T: int
    cost: float
    method: str
    d: float | None

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "d": self.d,
            "stops": [[rational_str(q.x), rational_str(q.y)] for q in self.stops],
            "L": float(self.L),
            "T": self.T,
            "cost": self.cost,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CoveringPath":
        stops = tuple(Point.of(x, y) for x, y in data["stops"])
        L = _path_length(list(stops))
        return cls(stops=stops, L=L, T=len(stops), cost=float(data.get("cost", 0.0)),
                   method=data.get("method", "unknown"), d=data.get("d"))


def _path_length(stops: list[Point]) -> Fraction:
    total = Fraction(0)
    for a, b in zip(stops, stops[1:]):
        total += l1_distance(a, b)
    return total


def make_path(stops: list[Point], p: CostParams, method: str, d) -> CoveringPath:
    L = _path_length(stops)
    cost = p.alpha * float(L) + p.beta * len(stops)
    return CoveringPath(stops=tuple(stops), L=L, T=len(stops), cost=cost,
                        method=method, d=None if d is None else float(d))


def path_cost(path: CoveringPath, p: CostParams) -> float:
    return p.alpha * float(path.L) + p.beta * path.T


@dataclass
class SpanningStructure:
    """Stop/boundary graph whose MST feeds the doubled-tour path."""

    nodes: list[Point]
    stop_count: int  # nodes[:stop_count] are path stops
    edges: list[tuple[int, int, Fraction, str]]
    tree_edges: list[tuple[int, int, Fraction]]
    tree_length: Fraction
    cin_count: int
    extra_connector_length: Fraction = Fraction(0)

    @property
    def total_length(self) -> Fraction:
        return sum((e[2] for e in self.edges), Fraction(0))


def _boundary_maps(g: Grid):
    """Per-loop unit edges plus a lookup from undirected edge to loop position."""
    loops = g.boundary_loops()
    loop_edges = [loop.unit_edges() for loop in loops]
    edge_map = {}
    for li, edges in enumerate(loop_edges):
        for ei, (a, b) in enumerate(edges):
            edge_map[tuple(sorted((a, b)))] = (li, ei, a, b)
    return loop_edges, edge_map


def _locate_on_boundary(pt: Point, edge_map, loop_sizes) -> tuple[int, Fraction]:
    """Cyclic position (loop index, edge_pos + offset) of a boundary point."""
    cands = []
    if pt.x.denominator == 1:
        x = int(pt.x)
        js = [math.floor(pt.y)]
        if pt.y.denominator == 1:
            js.append(int(pt.y) - 1)
        for j in js:
            key = ((x, j), (x, j + 1))
            if key in edge_map:
                li, ei, a, b = edge_map[key]
                t = abs(pt.y - a[1])
                cands.append((li, (ei + t) % loop_sizes[li]))
    if pt.y.denominator == 1:
        y = int(pt.y)
        is_ = [math.floor(pt.x)]
        if pt.x.denominator == 1:
            is_.append(int(pt.x) - 1)
        for i in is_:
            key = tuple(sorted(((i, y), (i + 1, y))))
            if key in edge_map:
                li, ei, a, b = edge_map[key]
                t = abs(pt.x - a[0])
                cands.append((li, (ei + t) % loop_sizes[li]))
    if not cands:
        raise InvariantViolation(f"point {pt} is not on the grid boundary")
    return min(cands)


def _traversal_runs(ss: StopSet) -> list[list[Point]]:
    """Inside stops grouped by traversal x, each group sorted by y."""
    groups: dict[Fraction, list[Point]] = {}
    for q in ss.c_in:
        groups.setdefault(q.x, []).append(q)
    runs = []
    for x in sorted(groups):
        runs.append(sorted(groups[x], key=lambda q: q.y))
    return runs


def build_spanning_structure(g: Grid, ss: StopSet) -> SpanningStructure:
    """Traversal edges + one boundary link per inside run + perimeter cycle.

    Every inside run's link leaves through the top of its traversal; the next
    lattice point above the run is outside the grid, so the link is at most d
    long (violations raise, never pass silently). Hole loops or isolated
    pieces are joined afterwards by shortest connectors, tracked separately.
    """
    d = ss.lattice.d
    stops = ss.stops
    nodes: list[Point] = list(stops)
    index: dict[Point, int] = {q: i for i, q in enumerate(nodes)}

    def node_id(q: Point) -> int:
        if q not in index:
            index[q] = len(nodes)
            nodes.append(q)
        return index[q]

    edges: list[tuple[int, int, Fraction, str]] = []
    splits: dict[int, list[tuple[Fraction, int]]] = {}
    loop_edges, edge_map = _boundary_maps(g)
    loop_sizes = [Fraction(len(e)) for e in loop_edges]

    def register_split(pt: Point):
        li, pos = _locate_on_boundary(pt, edge_map, loop_sizes)
        splits.setdefault(li, []).append((pos, node_id(pt)))

    # traversal edges between consecutive stops in each run
    for run in _traversal_runs(ss):
        for a, b in zip(run, run[1:]):
            if b.y - a.y == d:
                edges.append((index[a], index[b], d, "traversal"))
        # boundary link from the top of each consecutive sub-run
        subruns = [[run[0]]]
        for a, b in zip(run, run[1:]):
            if b.y - a.y == d:
                subruns[-1].append(b)
            else:
                subruns.append([b])
        for sub in subruns:
            top = sub[-1]
            exit_y = g.vertical_exit_above(top.x, top.y)
            link_len = exit_y - top.y
            if link_len > d:
                raise InvariantViolation(
                    f"boundary link of length {link_len} exceeds spacing {d} at {top}")
            attach = Point(top.x, exit_y)
            if attach != top:
                edges.append((index[top], node_id(attach), link_len, "link"))
            register_split(attach)

    for ps in ss.projected:
        register_split(ps.stop)

    # perimeter cycle, split at attach points and projected stops
    for li, unit_edges in enumerate(loop_edges):
        stations: list[tuple[Fraction, int]] = []
        for ei, (a, _) in enumerate(unit_edges):
            stations.append((Fraction(ei), node_id(Point.of(a[0], a[1]))))
        stations.extend(splits.get(li, []))
        stations.sort(key=lambda t: (t[0], t[1]))
        size = loop_sizes[li]
        for (pos_a, na), (pos_b, nb) in zip(stations, stations[1:] + [(stations[0][0] + size,
                                                                       stations[0][1])]):
            arc = pos_b - pos_a
            if arc == 0 or na == nb:
                continue
            edges.append((na, nb, arc, "perimeter"))

    # connect leftover components (hole loops with no splits, etc.)
    parent = list(range(len(nodes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            return True
        return False

    for i, j, _, _ in edges:
        union(i, j)
    extra = Fraction(0)
    while True:
        roots: dict[int, list[int]] = {}
        for ni in range(len(nodes)):
            roots.setdefault(find(ni), []).append(ni)
        if len(roots) <= 1:
            break
        comps = sorted(roots.values(), key=lambda c: nodes[min(c, key=lambda n: nodes[n])])
        base = comps[0]
        best = None
        for other in comps[1:]:
            for a in base:
                for b in other:
                    dl = l1_distance(nodes[a], nodes[b])
                    cand = (dl, nodes[a], nodes[b], a, b)
                    if best is None or cand < best:
                        best = cand
        dl, _, _, a, b = best
        edges.append((a, b, dl, "connector"))
        extra += dl
        union(a, b)

    tree_edges, tree_length = _minimum_spanning_tree(nodes, edges)
    return SpanningStructure(nodes=nodes, stop_count=len(stops), edges=edges,
                             tree_edges=tree_edges, tree_length=tree_length,
                             cin_count=len(ss.c_in), extra_connector_length=extra)


def _minimum_spanning_tree(nodes, edges):
    order = sorted(range(len(edges)),
                   key=lambda e: (edges[e][2],
                                  min(nodes[edges[e][0]], nodes[edges[e][1]]),
                                  max(nodes[edges[e][0]], nodes[edges[e][1]])))
    parent = list(range(len(nodes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree = []
    total = Fraction(0)
    for ei in order:
        i, j, ln, _ = edges[ei]
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            tree.append((i, j, ln))
            total += ln
    return tree, total


def doubled_tour_path(st: SpanningStructure, p: CostParams) -> CoveringPath:
    """Preorder shortcut of the doubled spanning tree; L <= 2 * tree length."""
    n = len(st.nodes)
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for i, j, _ in st.tree_edges:
        adj[i].append(j)
        adj[j].append(i)
    if st.stop_count == 0:
        raise InvariantViolation("structure has no stops")

    root = min(range(st.stop_count), key=lambda i: st.nodes[i])

    def child_key(u, v):
        ux, uy = st.nodes[u].as_floats()
        vx, vy = st.nodes[v].as_floats()
        return (math.atan2(vy - uy, vx - ux), st.nodes[v])

    order: list[int] = []
    seen = {root}
    stack = [root]
    while stack:
        u = stack.pop()
        order.append(u)
        kids = sorted((v for v in adj[u] if v not in seen), key=lambda v: child_key(u, v))
        for v in reversed(kids):
            seen.add(v)
            stack.append(v)
    reachable = seen
    if len(reachable) != n:
        missing = sorted(set(range(n)) - reachable)
        raise InvariantViolation(
            f"spanning structure is disconnected; unreachable nodes: "
            f"{[str(st.nodes[m]) for m in missing[:5]]}")

    stops = [st.nodes[i] for i in order if i < st.stop_count]
    path = make_path(stops, p, "doubled-tree", None)
    if path.L > 2 * st.tree_length:
        raise InvariantViolation(
            f"shortcut path length {path.L} exceeds twice the tree length {st.tree_length}")
    return path


def convex_updown_path(g: Grid, ss: StopSet, p: CostParams) -> CoveringPath:
    """Serpentine sweep over traversal runs, then one boundary-ordered chain
    through the projected stops; realizes L <= |C_in|*d + 2P (asserted)."""
    if not g.is_convex:
        raise DomainError("up-and-down construction requires a convex grid")
    d = ss.lattice.d

    runs = _traversal_runs(ss)
    serp: list[Point] = []
    up = True
    for run in runs:
        serp.extend(run if up else run[::-1])
        up = not up

    loop_edges, edge_map = _boundary_maps(g)
    loop_sizes = [Fraction(len(e)) for e in loop_edges]
    located = []
    for ps in ss.projected:
        li, pos = _locate_on_boundary(ps.stop, edge_map, loop_sizes)
        located.append((li, pos, ps.stop))
    located.sort()

    chain: list[Point] = []
    if located:
        if serp:
            tail = serp[-1]
            entry = min(range(len(located)),
                        key=lambda i: (l1_distance(located[i][2], tail), located[i][2]))
        else:
            entry = 0
        chain = [located[(entry + i) % len(located)][2] for i in range(len(located))]

    stops = serp + chain
    path = make_path(stops, p, "up-and-down", ss.lattice.d)
    budget = len(ss.c_in) * d + 2 * g.perimeter
    if path.L > budget:
        raise InvariantViolation(
            f"up-and-down length {float(path.L):.3f} exceeds |C_in|*d + 2P = {float(budget):.3f}")
    return path


@dataclass
class ConstructResult:
    """Winning construction plus everything an audit needs."""

    path: CoveringPath
    stop_set: StopSet | None
    structure: SpanningStructure | None
    components: list["ConstructResult"] = field(default_factory=list)


def _candidate_spacings(g: Grid, p: CostParams, d_override) -> list[Fraction]:
    k = to_fraction(p.k)
    if d_override is not None:
        return [snap_distance(float(d_override), k)
                if not isinstance(d_override, Fraction) else d_override]
    if p.beta == 0:
        return [2 * k * i / 32 for i in range(1, 33)]
    profile = optimal_profile(p, g.area)
    return [snap_distance(profile.d_star, k)]


def _anchor_offsets(g: Grid, d: Fraction, k: Fraction, scan_phase: int) -> list[Point]:
    xmin, ymin, _, _ = g.bbox
    base = Point(Fraction(xmin), Fraction(ymin))
    if scan_phase <= 1:
        return [base]
    s = 2 * k - d / 2
    out = []
    for a in range(scan_phase):
        for b in range(scan_phase):
            out.append(Point(base.x + 2 * s * a / scan_phase, base.y + d * b / scan_phase))
    return out


def construct_detailed(g: Grid, p: CostParams, d=None, scan_phase: int = 1,
                       check: bool = True) -> ConstructResult:
    """Build, verify, and bound-check a covering path for g.

    d defaults to the optimal average spacing (beta > 0) or a 32-point scan
    of (0, 2k] minimizing realized cost (beta = 0). scan_phase > 1 also tries
    anchor translations within one lattice period and keeps the cheapest.
    """
    if not g.is_connected:
        parts = [construct_detailed(c, p, d=d, scan_phase=scan_phase, check=check)
                 for c in g.components()]
        stops: list[Point] = []
        for part in parts:
            stops.extend(part.path.stops)
        methods = {part.path.method for part in parts}
        method = methods.pop() if len(methods) == 1 else "mixed"
        path = make_path(stops, p, method, None)
        return ConstructResult(path=path, stop_set=None, structure=None, components=parts)

    k = to_fraction(p.k)
    best = None
    for di, dd in enumerate(_candidate_spacings(g, p, d)):
        for ai, anchor in enumerate(_anchor_offsets(g, dd, k, scan_phase)):
            ss = build_stop_set(g, dd, p, anchor=anchor)
            if g.is_convex:
                path = convex_updown_path(g, ss, p)
            else:
                st = build_spanning_structure(g, ss)
                path = doubled_tour_path(st, p)
            key = (path.cost, di, ai)
            if best is None or key < best[0]:
                best = (key, path, ss)
    _, path, ss = best
    structure = build_spanning_structure(g, ss)
    path = CoveringPath(stops=path.stops, L=path.L, T=path.T, cost=path.cost,
                        method=path.method, d=float(ss.lattice.d))

    if check:
        report = verify_coverage(g, list(path.stops), p.k)
        if not report.certified:
            raise InvariantViolation(
                f"constructed path failed coverage verification: {report}")
        if d is None:
            profile = optimal_profile(p, g.area, g.perimeter)
            slack = 1 + 1e-9
            if path.cost > profile.upper_general * slack:
                raise InvariantViolation(
                    f"cost {path.cost} exceeds the general bound {profile.upper_general}")
            if g.is_convex and path.cost > profile.upper_convex * slack:
                raise InvariantViolation(
                    f"cost {path.cost} exceeds the convex bound {profile.upper_convex}")
    return ConstructResult(path=path, stop_set=ss, structure=structure)


def construct(g: Grid, p: CostParams, d=None, scan_phase: int = 1,
              check: bool = True) -> CoveringPath:
    return construct_detailed(g, p, d=d, scan_phase=scan_phase, check=check).path
