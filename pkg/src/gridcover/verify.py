"""Independent certification of coverage, trade-off, and bound compliance.

Coverage checking is sampling-first: the grid is sampled at spacing h and
the distance-to-stop-set function is 1-Lipschitz under l1, so a sampled
maximum m <= k - h certifies every point. Constructions in this package are
tight by design (some points sit at distance exactly k), which the margin
rule can never certify at any finite h; the gap is closed by an exact
decision in rotated coordinates (u, v) = (x + y, x - y), where l1 balls
become axis-aligned squares and coverage reduces to rectangle arithmetic on
exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np
from scipy.spatial import cKDTree

from gridcover.bounds import CostParams, optimal_profile, upper_bound_convex, upper_bound_general
from gridcover.grid import Grid, Point, l1_distance, to_fraction
from gridcover.stops import StopSet

if TYPE_CHECKING:
    from gridcover.pathgen import SpanningStructure

_GUARD = 1e-9


@dataclass(frozen=True)
class CoverageReport:
    """Outcome of one coverage check.

    certified with method "lipschitz" means the sampled margin closed the
    argument on its own; "exact" means the rotated-coordinate decision ran.
    certified False with no counterexample is inconclusive at this spacing.
    """

    certified: bool
    max_observed_distance: float
    h: float
    counterexample: Point | None
    margin: float
    method: str | None
    samples: int

    @property
    def inconclusive(self) -> bool:
        return not self.certified and self.counterexample is None

    def to_json_dict(self) -> dict:
        return {
            "certified": self.certified,
            "max_observed_distance": self.max_observed_distance,
            "h": self.h,
            "counterexample": None if self.counterexample is None
            else [float(self.counterexample.x), float(self.counterexample.y)],
            "margin": self.margin,
            "method": self.method,
            "samples": self.samples,
        }


def _sample_keys(g: Grid, q: int) -> np.ndarray:
    """Integer keys (i*q + t, j*q + u) of the spacing-1/q sample lattice on g."""
    keys = set()
    rng = range(q + 1)
    for i, j in g.squares:
        base_x = i * q
        base_y = j * q
        for t in rng:
            for u in rng:
                keys.add((base_x + t, base_y + u))
    arr = np.array(sorted(keys), dtype=np.int64)
    return arr


def _exact_min_distance(p: Point, stops: list[Point], tree: cKDTree, pf: np.ndarray) -> Fraction:
    d, _ = tree.query(pf, p=1)
    cand = tree.query_ball_point(pf, r=float(d) + 1e-6, p=1.0)
    return min(l1_distance(p, stops[ci]) for ci in cand)


def exact_cover_check(g: Grid, stops: list[Point], k: Fraction) -> Point | None:
    """Exact coverage decision: None when every point of g is within k of a stop,
    otherwise a rational witness point with distance strictly greater than k.

    In (u, v) = (x + y, x - y) the stop diamonds are axis-aligned squares;
    compressing on their edge coordinates makes every compressed cell either
    fully covered or fully uncovered, so only uncovered cells meeting a grid
    square (a unit l1 ball in (u, v)) need an exact positive-area test.
    """
    k = to_fraction(k)
    if not stops:
        i, j = min(g.squares)
        return Point(Fraction(2 * i + 1, 2), Fraction(2 * j + 1, 2))

    su = [p.x + p.y for p in stops]
    sv = [p.x - p.y for p in stops]
    ucoords, vcoords = set(), set()
    for a, b in zip(su, sv):
        ucoords.update((a - k, a + k))
        vcoords.update((b - k, b + k))
    for i, j in g.squares:
        ucoords.update((Fraction(i + j), Fraction(i + j + 2)))
        vcoords.update((Fraction(i - j - 1), Fraction(i - j + 1)))
    eu = sorted(ucoords)
    ev = sorted(vcoords)
    upos = {c: t for t, c in enumerate(eu)}
    vpos = {c: t for t, c in enumerate(ev)}
    eu_f = np.array([float(c) for c in eu])
    ev_f = np.array([float(c) for c in ev])

    covered = np.zeros((len(eu) - 1, len(ev) - 1), dtype=bool)
    for a, b in zip(su, sv):
        covered[upos[a - k]:upos[a + k], vpos[b - k]:vpos[b + k]] = True

    for i, j in sorted(g.squares):
        a = upos[Fraction(i + j)]
        b = upos[Fraction(i + j + 2)]
        c = vpos[Fraction(i - j - 1)]
        d = vpos[Fraction(i - j + 1)]
        sub = covered[a:b, c:d]
        if sub.all():
            continue
        # float prefilter: min l1 distance from the diamond center to each cell
        uc, vc = float(i + j + 1), float(i - j)
        du = np.abs(np.clip(uc, eu_f[a:b], eu_f[a + 1:b + 1]) - uc)
        dv = np.abs(np.clip(vc, ev_f[c:d], ev_f[c + 1:d + 1]) - vc)
        dist = du[:, None] + dv[None, :]
        cand = np.argwhere(~sub & (dist < 1 + 1e-9))
        ucf, vcf = Fraction(i + j + 1), Fraction(i - j)
        for pu, pv in cand:
            ulo, uhi = eu[a + pu], eu[a + pu + 1]
            vlo, vhi = ev[c + pv], ev[c + pv + 1]
            cu = min(max(ucf, ulo), uhi)
            cv = min(max(vcf, vlo), vhi)
            dmin = abs(cu - ucf) + abs(cv - vcf)
            if dmin >= 1:
                continue
            # positive-area overlap: pick a point interior to both cell and diamond
            mu, mv = (ulo + uhi) / 2, (vlo + vhi) / 2
            dc = abs(mu - ucf) + abs(mv - vcf)
            if dc < 1:
                wu, wv = mu, mv
            else:
                t = (1 - dmin) / (2 * (dc - dmin))
                wu = cu + t * (mu - cu)
                wv = cv + t * (mv - cv)
            witness = Point((wu + wv) / 2, (wu - wv) / 2)
            dist_exact = min(l1_distance(witness, sp) for sp in stops)
            if dist_exact <= k:
                raise AssertionError("uncovered cell produced a covered witness")
            return witness
    return None


def verify_coverage(g: Grid, stops: list[Point], k, h: float | None = None,
                    halvings: int = 2, exact_closure: bool = True) -> CoverageReport:
    """Check that every point of g lies within l1 distance k of some stop.

    Samples g at spacing h (default k/16, corners included), computes the max
    sampled distance m, and certifies when m <= k - h. A sampled m > k is
    returned as a counterexample after exact recomputation. Otherwise the
    exact rotated-coordinate decision settles the run; with exact_closure
    disabled the spacing is halved up to `halvings` times before reporting
    inconclusive.
    """
    kf = to_fraction(k)
    k_float = float(k)
    stops = list(stops)
    if not stops:
        ce = exact_cover_check(g, stops, kf)
        return CoverageReport(False, math.inf, h or k_float / 16, ce, -math.inf, None, 0)
    pts_f = np.array([sp.as_floats() for sp in stops])
    tree = cKDTree(pts_f)

    h_req = h if h is not None else k_float / 16
    if h_req <= 0:
        raise ValueError(f"sample spacing must be positive, got {h_req}")
    guard = _GUARD * max(1.0, k_float)

    h_cur = h_req
    report = None
    for _ in range(halvings + 1):
        q = max(1, math.ceil(1 / h_cur - 1e-12))
        h_eff = 1.0 / q
        keys = _sample_keys(g, q)
        samples = keys.astype(float) / q
        dist, _ = tree.query(samples, p=1)
        mi = int(np.argmax(dist))
        m = float(dist[mi])
        report = CoverageReport(False, m, h_eff, None, k_float - m, None, len(keys))
        if m <= k_float - h_eff - guard:
            return CoverageReport(True, m, h_eff, None, k_float - m, "lipschitz", len(keys))
        if m > k_float + guard:
            # likely a genuine violation; confirm the worst samples exactly
            order = np.argsort(dist)[::-1]
            for si in map(int, order[:64]):
                if dist[si] <= k_float - guard:
                    break
                pt = Point(Fraction(int(keys[si, 0]), q), Fraction(int(keys[si, 1]), q))
                if _exact_min_distance(pt, stops, tree, samples[si]) > kf:
                    return CoverageReport(False, m, h_eff, pt, k_float - m, "sample", len(keys))
        if exact_closure:
            ce = exact_cover_check(g, stops, kf)
            if ce is None:
                return CoverageReport(True, m, h_eff, None, k_float - m, "exact", len(keys))
            return CoverageReport(False, m, h_eff, ce, k_float - m, "exact", len(keys))
        h_cur /= 2
    return report


def verify_tradeoff(path, g: Grid, k: float, tol: float = 1e-9) -> bool:
    """True iff (T-1) * f(L/(T-1)) >= A - 2k^2 for the path's (L, T)."""
    a0 = g.area - 2 * k * k
    t0 = path.T - 1
    L = float(path.L)
    if t0 <= 0 or L <= 0:
        lhs = 0.0
    else:
        davg = L / t0
        if davg > 2 * k:
            lhs = t0 * 2 * k * k
        else:
            lhs = t0 * davg * (2 * k - davg / 2)
    return lhs >= a0 - tol * max(1.0, abs(a0))


def _leq(a: float, b: float, tol: float = 1e-9) -> bool:
    return a <= b + tol * max(1.0, abs(a), abs(b))


@dataclass
class AuditReport:
    """Every inequality the construction promises, evaluated on one instance."""

    area: int
    perimeter: int
    convex: bool
    d: float
    realized_length: float
    realized_stops: int
    realized_cost: float
    lower_bound: float
    lower_bound_paper: float
    upper_general: float
    upper_convex: float | None
    lower_ok: bool
    upper_general_ok: bool
    upper_convex_ok: bool | None
    tradeoff_ok: bool
    stop_count_ok: bool
    selected_counts_ok: bool
    length_ok: bool
    tree_ok: bool | None
    tree_length: float | None
    ratio_lower: float | None
    notes: list[str] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        flags = [self.lower_ok, self.upper_general_ok, self.tradeoff_ok,
                 self.stop_count_ok, self.selected_counts_ok, self.length_ok]
        if self.upper_convex_ok is not None:
            flags.append(self.upper_convex_ok)
        if self.tree_ok is not None:
            flags.append(self.tree_ok)
        return all(flags)

    def to_json_dict(self) -> dict:
        out = dict(self.__dict__)
        return out


def audit(g: Grid, p: CostParams, path, ss: StopSet,
          structure: "SpanningStructure | None" = None) -> AuditReport:
    """Evaluate the bound sandwich and per-instance inequalities for a path."""
    A, P = g.area, g.perimeter
    k = p.k
    profile = optimal_profile(p, A, P)
    d = float(ss.lattice.d)
    fd = d * (2 * k - d / 2)
    cost = float(path.cost)
    L = float(path.L)
    T = path.T
    convex = g.is_convex
    ug = upper_bound_general(p, A, P)
    uc = upper_bound_convex(p, A, P) if convex else None

    notes = []
    lower_ok = cost >= profile.lower_bound_paper - 1e-9 * max(1.0, abs(profile.lower_bound_paper))
    upper_general_ok = _leq(cost, ug)
    if not g.is_connected:
        notes.append("grid is disconnected: upper bounds reported per definition but "
                     "the global construction guarantee does not apply")
    upper_convex_ok = _leq(cost, uc) if uc is not None else None

    stop_budget = (A + 16 * k * P + 32 * k * k) / fd
    stop_count_ok = T <= math.floor(stop_budget + 1e-9)
    n_in, n_out = len(ss.c_in), len(ss.c_out)
    selected_counts_ok = (
        n_in + n_out <= (A + 4 * k * P + 8 * k * k) / fd + 1e-9
        and n_out <= (4 * k * P + 8 * k * k) / fd + 1e-9
    )
    length_budget = 2 * d * (A + 6 * k * P + 8 * k * k) / fd
    length_ok = _leq(L, length_budget)

    tree_ok = None
    tree_length = None
    if structure is not None:
        tree_length = float(structure.tree_length)
        if g.is_connected and not g.has_holes and structure.extra_connector_length == 0:
            tree_ok = structure.tree_length <= len(ss.c_in) * ss.lattice.d + P
        else:
            notes.append("tree bound reported, not asserted: grid has holes or needed "
                         "extra connectors")

    ratio_lower = cost / profile.lower_bound if profile.lower_bound > 0 else None
    return AuditReport(
        area=A, perimeter=P, convex=convex, d=d,
        realized_length=L, realized_stops=T, realized_cost=cost,
        lower_bound=profile.lower_bound, lower_bound_paper=profile.lower_bound_paper,
        upper_general=ug, upper_convex=uc,
        lower_ok=lower_ok, upper_general_ok=upper_general_ok, upper_convex_ok=upper_convex_ok,
        tradeoff_ok=verify_tradeoff(path, g, k),
        stop_count_ok=stop_count_ok, selected_counts_ok=selected_counts_ok,
        length_ok=length_ok, tree_ok=tree_ok, tree_length=tree_length,
        ratio_lower=ratio_lower, notes=notes,
    )
