"""Seeded benchmark instances and the ratio-study runner.

The generated families mirror the shapes the bounds care about: solid
rectangles, plus-shaped crosses, U-shapes (the canonical non-convex case),
and random orthogonal blobs with optional one-cell holes. Everything is a
pure function of the seed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from gridcover.bounds import CostParams
from gridcover.grid import Grid, _connected
from gridcover.oracle import OracleConfig, RatioRow, ratio_csv, ratio_study


def rectangle(w: int, h: int) -> Grid:
    return Grid([(i, j) for i in range(w) for j in range(h)])


def cross(n: int) -> Grid:
    """Plus shape with n unit squares per arm: area 4n+1, perimeter 8n+4."""
    squares = {(0, 0)}
    for i in range(1, n + 1):
        squares |= {(i, 0), (-i, 0), (0, i), (0, -i)}
    return Grid(squares)


def u_shape(w: int, h: int, thickness: int = 1) -> Grid:
    """U of outer size w x h with the given wall thickness (non-convex for w >= 3)."""
    squares = set()
    for i in range(w):
        for j in range(h):
            if j < thickness or i < thickness or i >= w - thickness:
                squares.add((i, j))
    return Grid(squares)


def random_blob(rng: random.Random, area: int, holes: int = 0) -> Grid:
    """Edge-connected random union of `area` squares, optionally with
    one-cell interior holes punched where connectivity allows."""
    cells = {(0, 0)}
    frontier = [(0, 0)]
    while len(cells) < area:
        base = rng.choice(frontier)
        i, j = base
        nbrs = [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)]
        nb = nbrs[rng.randrange(4)]
        if nb not in cells:
            cells.add(nb)
            frontier.append(nb)
        elif rng.random() < 0.3:
            frontier.remove(base)
            if not frontier:
                frontier = list(cells)
    g = Grid(cells)
    for _ in range(holes):
        interior = sorted(
            c for c in cells
            if all((c[0] + di, c[1] + dj) in cells
                   for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di, dj) != (0, 0))
        )
        rng.shuffle(interior)
        for c in interior:
            rest = cells - {c}
            if _connected(rest):
                cells = rest
                break
    return Grid(cells)


@dataclass(frozen=True)
class BenchInstance:
    name: str
    grid: Grid


def generate_instances(seed: int, count: int = 20, max_area: int = 400,
                       with_holes: bool = True) -> list[BenchInstance]:
    """Deterministic instance mix: rectangles, crosses, U-shapes, blobs."""
    rng = random.Random(seed)
    out: list[BenchInstance] = []
    kinds = ["rect", "cross", "ushape", "blob"]
    for idx in range(count):
        kind = kinds[idx % len(kinds)]
        if kind == "rect":
            w = rng.randint(1, max(1, int(max_area ** 0.5)))
            h = rng.randint(1, max(1, max_area // max(w, 1)))
            g = rectangle(w, h)
            name = f"rect{w}x{h}"
        elif kind == "cross":
            n = rng.randint(1, max(1, min(20, (max_area - 1) // 4)))
            g = cross(n)
            name = f"cross{n}"
        elif kind == "ushape":
            w = rng.randint(3, max(3, min(20, int(max_area ** 0.5) + 2)))
            h = rng.randint(2, max(2, min(20, max_area // max(w, 1))))
            g = u_shape(w, h)
            name = f"u{w}x{h}"
        else:
            area = rng.randint(4, max_area)
            holes = rng.randint(0, 2) if (with_holes and area >= 16) else 0
            g = random_blob(rng, area, holes=holes)
            name = f"blob{area}" + (f"h{holes}" if holes else "")
        out.append(BenchInstance(name=f"{idx:03d}_{name}", grid=g))
    return out


def oracle_suite() -> list[BenchInstance]:
    """Tiny fixed instances every oracle run can afford."""
    return [
        BenchInstance("oracle_sq1", rectangle(1, 1)),
        BenchInstance("oracle_rect2x1", rectangle(2, 1)),
        BenchInstance("oracle_rect1x2", rectangle(1, 2)),
    ]


def run_benchmark(out_dir: str | Path, seed: int, p: CostParams,
                  count: int = 12, max_area: int = 120,
                  oracle_cfg: OracleConfig | None = None,
                  make_figure: bool = True) -> list[RatioRow]:
    """Generate instances, run the ratio study, write CSV/JSON (+ figure).

    Output is byte-stable for a fixed (seed, params, count): instances are
    derived from the seed alone and rows are written in generation order.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    instances = oracle_suite() + generate_instances(seed, count=count, max_area=max_area)
    pairs = [(inst.name, inst.grid) for inst in instances]
    rows = ratio_study(pairs, p, cfg=oracle_cfg, seed=seed)

    (out_dir / "ratios.csv").write_text(ratio_csv(rows), encoding="utf-8")
    summary = {
        "seed": seed,
        "k": p.k,
        "alpha": p.alpha,
        "beta": p.beta,
        "instances": [
            {"name": inst.name, **inst.grid.to_json_dict()} for inst in instances
        ],
        "rows": [row.values for row in rows],
    }
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True), encoding="utf-8")

    if make_figure:
        from gridcover.render import benchmark_figure
        benchmark_figure(rows, out_dir / "ratios.svg")
    return rows
