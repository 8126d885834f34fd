import random
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.spatial import cKDTree

from gridcover.bench import random_blob, rectangle
from gridcover.bounds import CostParams, DomainError, coverage_area, optimal_profile
from gridcover.grid import Point, l1_distance, parse_grid
from gridcover.stops import (
    StopLattice,
    build_lattice,
    build_stop_set,
    classify_centers,
    hexagon_cell,
    project_out_center,
    snap_distance,
)

P111 = CostParams(k=1, alpha=1, beta=1)


def lattice_for(k, d, box=rectangle(2, 2)):
    return build_lattice(F(d).limit_denominator(10**6), CostParams(k=k, alpha=1, beta=1), box)


def plane_distance_stats(lat: StopLattice, samples_per_axis=48):
    """Max sampled l1 distance to the lattice over one period plus the
    analytic worst points (the hexagon corners)."""
    centers = np.array([c.as_floats() for c in lat.centers()])
    tree = cKDTree(centers)
    d, s, k = float(lat.d), float(lat.s), float(lat.k)
    ax, ay = lat.anchor.as_floats()
    xs = np.linspace(ax, ax + 2 * s, samples_per_axis)
    ys = np.linspace(ay, ay + 2 * d, samples_per_axis)
    mx, my = np.meshgrid(xs, ys)
    pts = np.column_stack([mx.ravel(), my.ravel()])
    corners = []
    for c in hexagon_cell(Point.of(F(ax), F(ay)), lat.d, lat.k):
        corners.append(c.as_floats())
    pts = np.vstack([pts, corners])
    dist, _ = tree.query(pts, p=1)
    return float(dist.max())


def test_lattice_plane_coverage_is_exactly_k():
    rng = random.Random(13)
    for _ in range(12):
        k = rng.uniform(0.3, 3)
        d = rng.uniform(0.1, 2) * k
        m = plane_distance_stats(lattice_for(k, d))
        assert m <= k + 1e-12
        assert abs(m - k) <= 1e-9


def test_lattice_d_equals_2k():
    # s = k and the cells degenerate to diamonds; coverage still exactly k
    m = plane_distance_stats(lattice_for(1, 2))
    assert abs(m - 1) <= 1e-12


def test_cell_area_is_coverage_area():
    for k, d in [(1, 1), (1, F(1236068, 1000000)), (2, 3), (F(3, 2), F(5, 4))]:
        k, d = F(k), F(d)
        cell = hexagon_cell(Point.of(0, 0), d, k)
        twice_area = F(0)
        for a, b in zip(cell, cell[1:] + cell[:1]):
            twice_area += a.x * b.y - b.x * a.y
        s = 2 * k - d / 2
        assert abs(twice_area) / 2 == d * s
        assert F(coverage_area(float(d), float(k))).limit_denominator(10**9) == \
            pytest.approx(float(d * s))


def test_cell_is_inside_coverage_diamond():
    cell = hexagon_cell(Point.of(3, 4), F(5, 4), F(1))
    for v in cell:
        assert l1_distance(v, Point.of(3, 4)) <= 1


def test_build_lattice_rejects_bad_spacing():
    with pytest.raises(DomainError):
        build_lattice(F(0), P111, rectangle(2, 2))
    with pytest.raises(DomainError):
        build_lattice(F(3), P111, rectangle(2, 2))


def test_traversal_spacing_and_offset():
    lat = build_lattice(F(2), P111, rectangle(4, 4))
    assert lat.s == 1
    assert lat.stop_at(0, 1).y - lat.stop_at(0, 0).y == 2
    assert lat.stop_at(1, 0).y - lat.stop_at(0, 0).y == 1  # d/2 offset
    width = 4 + 2 * 2 * float(lat.k)
    count = lat.m_range[1] - lat.m_range[0] + 1
    assert count >= width / float(lat.s)


def test_snap_distance():
    assert snap_distance(1.2360679, F(1)) <= 2
    assert snap_distance(5.0, F(1)) == 2  # clamped to 2k
    assert snap_distance(0.0, F(1)) > 0
    snapped = snap_distance(1.2360679, F(1))
    assert abs(float(snapped) - 1.2360679) < 1e-6


def test_classify_selects_anchor_center():
    g = parse_grid("#")
    lat = build_lattice(F(2), P111, g)
    c_in, c_out = classify_centers(g, lat)
    assert Point.of(0, 0) in c_in
    for c in c_in:
        assert g.contains(c)
    for c in c_out:
        assert not g.contains(c)


def test_classify_never_selects_far_centers():
    rng = random.Random(3)
    for trial in range(25):
        g = random_blob(random.Random(trial), rng.randint(1, 60))
        d = snap_distance(rng.uniform(0.05, 2.0), F(1))
        lat = build_lattice(d, P111, g)
        c_in, c_out = classify_centers(g, lat)
        for c in c_in + c_out:
            # the cell sits inside the center's diamond, so any selected
            # center is within k of the grid
            assert g.l1_distance_to(c) <= 1


def test_project_single_square_left_center():
    g = parse_grid("#")
    stops = project_out_center(g, Point.of(F(-1, 2), F(1, 2)), 1)
    assert (Point.of(0, F(1, 2)), 1) in stops


def test_project_tangent_corner_single_stop():
    g = parse_grid("#")
    stops = project_out_center(g, Point.of(2, 1), 1)  # corner (1,1) at distance k
    assert [s for s, _ in stops] == [Point.of(1, 1)]


def test_project_rejects_far_center():
    g = parse_grid("#")
    with pytest.raises(DomainError):
        project_out_center(g, Point.of(10, 10), 1)


def test_quarter_diamonds_tile_the_coverage_region():
    # four radius-k/2 diamonds have total area 4 * k^2/2 = 2k^2, the diamond area
    k = 3.0
    assert 4 * (k * k / 2) == 2 * k * k


def test_projected_stop_covers_its_quarter():
    rng = random.Random(11)
    g = parse_grid("##\n##")
    k = F(1)
    for _ in range(40):
        x = Point.of(F(rng.randint(-12, 20), 8), F(rng.randint(-12, 20), 8))
        if g.contains(x) or g.l1_distance_to(x) > k:
            continue
        for stop, di in project_out_center(g, x, k):
            centers = {1: Point.of(x.x + F(1, 2), x.y), 2: Point.of(x.x, x.y + F(1, 2)),
                       3: Point.of(x.x - F(1, 2), x.y), 4: Point.of(x.x, x.y - F(1, 2))}
            qc = centers[di]
            assert l1_distance(stop, qc) <= k / 2  # stop lies in its quarter
            # any point of the quarter is within k of the stop
            for _ in range(20):
                dx = F(rng.randint(-8, 8), 16)
                dy = F(rng.randint(-8, 8), 16)
                if abs(dx) + abs(dy) <= F(1, 2):
                    assert l1_distance(stop, Point.of(qc.x + dx, qc.y + dy)) <= k


def test_build_stop_set_counts_within_budget():
    g = rectangle(10, 10)
    prof = optimal_profile(P111, g.area)
    ss = build_stop_set(g, prof.d_star, P111)
    d = float(ss.lattice.d)
    fd = coverage_area(d, 1)
    A, P = g.area, g.perimeter
    assert len(ss.c_in) + len(ss.c_out) <= (A + 4 * P + 8) / fd
    assert len(ss.c_out) <= (4 * P + 8) / fd
    assert ss.stop_count <= (A + 16 * P + 32) / fd
    assert ss.stop_count <= len(ss.c_in) + 4 * len(ss.c_out)


def test_stop_set_prop_counts_on_random_grids():
    rng = random.Random(23)
    for trial in range(15):
        g = random_blob(random.Random(500 + trial), rng.randint(1, 80), holes=trial % 2)
        k = rng.choice([1.0, 2.0])
        p = CostParams(k=k, alpha=1, beta=rng.choice([0.5, 1, 4]))
        d = snap_distance(rng.uniform(0.2, 2.0) * k, F(k))
        ss = build_stop_set(g, d, p)
        fd = coverage_area(float(d), k)
        A, P = g.area, g.perimeter
        assert len(ss.c_in) + len(ss.c_out) <= (A + 4 * k * P + 8 * k * k) / fd + 1e-9
        assert len(ss.c_out) <= (4 * k * P + 8 * k * k) / fd + 1e-9
        assert ss.stop_count <= (A + 16 * k * P + 32 * k * k) / fd + 1e-9


def test_stop_set_stops_are_unique_and_placed():
    g = parse_grid("###\n#.#\n###")
    ss = build_stop_set(g, F(1), P111)
    stops = ss.stops
    assert len(stops) == len(set(stops))
    for q in ss.c_in:
        assert g.contains(q)
    for ps in ss.projected:
        assert g.contains(ps.stop)
        assert not g.contains(ps.source)
        assert 1 <= ps.diamond_index <= 4


def test_stop_set_json_uses_rational_strings():
    ss = build_stop_set(parse_grid("#"), F(618034, 500000), P111)
    dump = ss.to_json_dict()
    assert dump["d"] == "309017/250000"
    assert all(isinstance(x, str) for pair in dump["c_in"] for x in pair)
