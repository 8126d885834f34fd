"""Brute-force reference solver for tiny instances.

Enumerates stop subsets drawn from a discrete candidate lattice inside the
grid, keeps the covering ones, and prices each with the exact minimum
Hamiltonian path length (subset dynamic programming). The result is optimal
relative to the candidate lattice, which can only overestimate the true
continuous optimum; it is labeled accordingly wherever it is reported.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from gridcover.bounds import CostParams, optimal_profile
from gridcover.grid import Grid, Point, l1_distance, to_fraction
from gridcover.pathgen import CoveringPath, construct_detailed, make_path
from gridcover.verify import exact_cover_check


class OracleError(RuntimeError):
    """Instance outside the oracle's enumeration limits."""


@dataclass(frozen=True)
class OracleConfig:
    spacing: Fraction = Fraction(1, 2)
    max_candidates: int = 24
    max_subset_size: int = 10

    def __post_init__(self):
        if self.spacing <= 0:
            raise ValueError("candidate spacing must be positive")


def candidate_points(g: Grid, spacing: Fraction) -> list[Point]:
    """Lattice points at the given spacing inside the closed grid, sorted."""
    spacing = to_fraction(spacing)
    xmin, ymin, xmax, ymax = g.bbox
    out = []
    nx = math.ceil((xmax - xmin) / spacing)
    ny = math.ceil((ymax - ymin) / spacing)
    for a in range(nx + 1):
        for b in range(ny + 1):
            pt = Point(xmin + a * spacing, ymin + b * spacing)
            if pt.x <= xmax and pt.y <= ymax and g.contains(pt):
                out.append(pt)
    return sorted(out)


def _coverage_masks(g: Grid, cands: list[Point], k: float) -> tuple[list[int], int]:
    """Bitmask per candidate of which certificate samples it covers (h = k/16)."""
    q = max(2, math.ceil(16 / k))
    keys = set()
    for i, j in g.squares:
        for t in range(q + 1):
            for u in range(q + 1):
                keys.add((i * q + t, j * q + u))
    keys = sorted(keys)
    pts = np.array(keys, dtype=float) / q
    cxy = np.array([c.as_floats() for c in cands])
    # samples x candidates l1 distances
    dist = np.abs(pts[:, None, 0] - cxy[None, :, 0]) + np.abs(pts[:, None, 1] - cxy[None, :, 1])
    covered = dist <= k + 1e-12
    masks = []
    for ci in range(len(cands)):
        m = 0
        for si in np.nonzero(covered[:, ci])[0]:
            m |= 1 << int(si)
        masks.append(m)
    return masks, (1 << len(keys)) - 1


def held_karp_path(points: list[Point]) -> tuple[Fraction, list[int]]:
    """Exact minimum Hamiltonian-path length over the points (free endpoints)."""
    n = len(points)
    if n <= 1:
        return Fraction(0), list(range(n))
    dist = [[l1_distance(points[i], points[j]) for j in range(n)] for i in range(n)]
    full = (1 << n) - 1
    best: dict[tuple[int, int], tuple[Fraction, int]] = {}
    for i in range(n):
        best[(1 << i, i)] = (Fraction(0), -1)
    for mask in range(1, full + 1):
        for last in range(n):
            if not mask & (1 << last):
                continue
            cur = best.get((mask, last))
            if cur is None:
                continue
            for nxt in range(n):
                if mask & (1 << nxt):
                    continue
                nm = mask | (1 << nxt)
                cand = cur[0] + dist[last][nxt]
                old = best.get((nm, nxt))
                if old is None or cand < old[0]:
                    best[(nm, nxt)] = (cand, last)
    end = min(range(n), key=lambda i: (best[(full, i)][0], i))
    length = best[(full, end)][0]
    order = [end]
    mask = full
    while best[(mask, order[-1])][1] != -1:
        prev = best[(mask, order[-1])][1]
        mask ^= 1 << order[-1]
        order.append(prev)
    order.reverse()
    return length, order


def brute_force_path(points: list[Point]) -> Fraction:
    """Permutation brute force; self-check partner of held_karp_path."""
    n = len(points)
    if n <= 1:
        return Fraction(0)
    best = None
    for perm in itertools.permutations(range(n)):
        if perm[0] > perm[-1]:
            continue  # a path and its reverse have equal length
        total = sum((l1_distance(points[a], points[b])
                     for a, b in zip(perm, perm[1:])), Fraction(0))
        if best is None or total < best:
            best = total
    return best


def solve_exact(g: Grid, p: CostParams, cfg: OracleConfig | None = None) -> CoveringPath:
    """Cheapest covering path with stops confined to the candidate lattice.

    Subsets are screened with sample-coverage bitmasks; every would-be winner
    is confirmed by the exact coverage decision before it is accepted.
    Raises OracleError when the candidate count exceeds the config limit or
    no covering subset exists within the subset-size limit.
    """
    cfg = cfg or OracleConfig()
    cands = candidate_points(g, cfg.spacing)
    if len(cands) > cfg.max_candidates:
        raise OracleError(
            f"instance too large: {len(cands)} candidates exceed the limit "
            f"{cfg.max_candidates} at spacing {cfg.spacing}")
    kf = to_fraction(p.k)
    masks, full = _coverage_masks(g, cands, p.k)
    best = None  # (cost, length, combo, order)
    n = len(cands)
    for size in range(1, min(n, cfg.max_subset_size) + 1):
        if best is not None and p.beta > 0 and p.beta * size >= best[0] - 1e-12:
            break
        for combo in itertools.combinations(range(n), size):
            m = 0
            for ci in combo:
                m |= masks[ci]
            if m != full:
                continue
            pts = [cands[ci] for ci in combo]
            # the path must at least span the farthest pair
            span = max((l1_distance(a, b) for a, b in itertools.combinations(pts, 2)),
                       default=Fraction(0))
            if best is not None and p.alpha * float(span) + p.beta * size >= best[0] - 1e-12:
                continue
            length, order = held_karp_path(pts)
            cost = p.alpha * float(length) + p.beta * size
            if best is not None and cost >= best[0] - 1e-12:
                continue
            if exact_cover_check(g, pts, kf) is not None:
                continue
            best = (cost, length, tuple(combo), order)
    if best is None:
        raise OracleError(
            f"no covering subset of size <= {cfg.max_subset_size} exists at "
            f"spacing {cfg.spacing}; the lattice is too coarse for k = {p.k}")
    _, _, combo, order = best
    stops = [cands[combo[i]] for i in order]
    return make_path(stops, p, "oracle", None)


_RATIO_COLUMNS = ["instance", "seed", "A", "P", "convex", "k", "alpha", "beta", "d",
                  "lower", "oracle", "constructed", "ratio_lower", "ratio_oracle"]


@dataclass
class RatioRow:
    values: dict

    def as_csv_fields(self) -> list[str]:
        out = []
        for col in _RATIO_COLUMNS:
            v = self.values.get(col, "")
            if isinstance(v, float):
                out.append(f"{v:.6f}")
            elif isinstance(v, bool):
                out.append("true" if v else "false")
            else:
                out.append(str(v))
        return out


def ratio_study(instances: list[tuple[str, Grid]], p: CostParams,
                cfg: OracleConfig | None = None, seed: int | None = None,
                oracle_enabled: bool = True) -> list[RatioRow]:
    """Per-instance comparison of lower bound, oracle optimum, and construction.

    Oracle failures (instance too large, infeasible discretization) become
    row markers; the study keeps going.
    """
    rows = []
    for name, g in instances:
        profile = optimal_profile(p, g.area, g.perimeter)
        lower = profile.lower_bound
        row = {
            "instance": name, "seed": "" if seed is None else seed,
            "A": g.area, "P": g.perimeter, "convex": g.is_convex,
            "k": p.k, "alpha": p.alpha, "beta": p.beta,
            "lower": lower,
        }
        try:
            result = construct_detailed(g, p)
            row["constructed"] = result.path.cost
            row["d"] = "" if result.path.d is None else result.path.d
            row["ratio_lower"] = (result.path.cost / lower) if lower > 0 else ""
        except Exception as exc:  # pragma: no cover - defensive per-row marker
            row["constructed"] = f"error:{type(exc).__name__}"
            row["d"] = ""
            row["ratio_lower"] = ""
        if oracle_enabled:
            try:
                oracle_path = solve_exact(g, p, cfg)
                row["oracle"] = oracle_path.cost
                if isinstance(row.get("constructed"), float) and oracle_path.cost > 0:
                    row["ratio_oracle"] = row["constructed"] / oracle_path.cost
                else:
                    row["ratio_oracle"] = ""
            except OracleError:
                row["oracle"] = "error:OracleError"
                row["ratio_oracle"] = ""
        else:
            row["oracle"] = ""
            row["ratio_oracle"] = ""
        rows.append(RatioRow(row))
    return rows


def ratio_csv(rows: list[RatioRow]) -> str:
    lines = [",".join(_RATIO_COLUMNS)]
    for row in rows:
        lines.append(",".join(row.as_csv_fields()))
    return "\n".join(lines) + "\n"
