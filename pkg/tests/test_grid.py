import random
from fractions import Fraction as F

import pytest

from gridcover.bench import cross, random_blob, rectangle
from gridcover.grid import Grid, GridError, Point, l1_distance, parse_grid


def test_parse_single_square():
    g = parse_grid("#")
    assert g.squares == frozenset({(0, 0)})
    assert g.area == 1
    assert g.perimeter == 4


def test_parse_2x2():
    g = parse_grid("##\n##")
    assert g.area == 4
    assert g.perimeter == 8


def test_parse_ring_with_hole():
    g = parse_grid("###\n#.#\n###")
    assert g.area == 8
    assert g.perimeter == 16  # 12 outer + 4 hole
    assert g.has_holes


def test_parse_row_orientation():
    # top mask row maps to the highest j
    g = parse_grid("#.\n..")
    assert g.squares == frozenset({(0, 1)})


def test_parse_errors():
    with pytest.raises(GridError):
        parse_grid("")
    with pytest.raises(GridError):
        parse_grid("...\n...")
    with pytest.raises(GridError, match="line 2, column 2"):
        parse_grid("##\n#x")
    with pytest.raises(GridError, match="ragged"):
        parse_grid("##\n#")


def test_mask_roundtrip():
    g = parse_grid("##.\n.##")
    assert parse_grid(g.to_mask()) == g


def test_area_examples():
    assert rectangle(10, 10).area == 100
    assert cross(5).area == 21  # 4n+1


def test_perimeter_examples():
    assert cross(5).perimeter == 44  # 8n+4
    assert rectangle(7, 3).perimeter == 2 * (7 + 3)


def test_is_convex():
    for w, h in [(1, 1), (3, 2), (10, 10), (1, 7)]:
        assert rectangle(w, h).is_convex
    assert cross(3).is_convex
    u = Grid([(0, 0), (1, 0), (2, 0), (0, 1), (2, 1)])
    assert not u.is_convex  # the line y = 1.5 meets two runs
    assert not Grid([(0, 0), (2, 0)]).is_convex  # disconnected
    # zigzag: orthogonally convex but not convex in the euclidean sense
    assert Grid([(0, 0), (0, 1), (1, 1), (2, 1), (2, 2)]).is_convex


def test_is_convex_matches_line_scan():
    rng = random.Random(5)
    for trial in range(40):
        g = random_blob(random.Random(trial), rng.randint(1, 40))
        xmin, ymin, xmax, ymax = g.bbox
        expected = g.is_connected
        for j in range(ymin, ymax):
            run = sorted(i for i, jj in g.squares if jj == j)
            if run and run[-1] - run[0] + 1 != len(run):
                expected = False
        for i in range(xmin, xmax):
            run = sorted(jj for ii, jj in g.squares if ii == i)
            if run and run[-1] - run[0] + 1 != len(run):
                expected = False
        assert g.is_convex == expected


def test_boundary_loops_examples():
    assert [lp.length for lp in parse_grid("#").boundary_loops()] == [4]
    loops = parse_grid("###\n#.#\n###").boundary_loops()
    assert sorted((lp.length, lp.is_hole) for lp in loops) == [(4, True), (12, False)]
    assert [lp.length for lp in parse_grid("##").boundary_loops()] == [6]


def test_loop_lengths_sum_to_perimeter():
    for trial in range(30):
        g = random_blob(random.Random(100 + trial), 1 + trial * 3,
                        holes=trial % 3)
        loops = g.boundary_loops()
        assert sum(lp.length for lp in loops) == g.perimeter
        outer = [lp for lp in loops if not lp.is_hole]
        assert len(outer) == len(g.components())
        assert g.perimeter % 2 == 0 and g.perimeter >= 4


def test_loop_vertices_are_axis_parallel():
    g = random_blob(random.Random(3), 25, holes=1)
    for lp in g.boundary_loops():
        n = len(lp.vertices)
        for t in range(n):
            x1, y1 = lp.vertices[t]
            x2, y2 = lp.vertices[(t + 1) % n]
            assert (x1 == x2) != (y1 == y2)


def test_contains():
    g = parse_grid("#")
    assert g.contains(Point.of(F(1, 2), F(1, 2)))
    assert g.contains(Point.of(1, 1))  # closed corner
    assert not g.contains(Point.of(F(5, 4), F(1, 2)))


def test_contains_matches_rasterized_membership():
    # strictly interior sample points at resolution 1/4
    offsets = [F(1, 8) + F(t, 4) for t in range(4)]
    for trial in range(100):
        g = random_blob(random.Random(trial), 1 + (trial % 25))
        xmin, ymin, xmax, ymax = g.bbox
        for i in range(xmin - 1, xmax + 1):
            for j in range(ymin - 1, ymax + 1):
                inside = (i, j) in g.squares
                for ox in offsets[:2]:
                    for oy in offsets[2:]:
                        assert g.contains(Point.of(i + ox, j + oy)) == inside


def test_l1_distance():
    assert l1_distance(Point.of(0, 0), Point.of(0, 0)) == 0
    assert l1_distance(Point.of(0, 0), Point.of(1, 2)) == 3
    assert l1_distance(Point.of(F(1, 2), 0), Point.of(0, F(1, 2))) == 1


def test_removing_and_readding_square_is_idempotent():
    g = random_blob(random.Random(9), 30)
    sq = sorted(g.squares)[7]
    if len(g.squares) > 1:
        smaller = Grid(g.squares - {sq})
        back = Grid(set(smaller.squares) | {sq})
        assert back.area == g.area
        assert back.perimeter == g.perimeter


def test_json_export_is_sorted_and_stable():
    g = parse_grid("##\n.#")
    d = g.to_json_dict()
    assert d["squares"] == sorted(d["squares"])
    assert d == {"squares": [[0, 1], [1, 0], [1, 1]], "area": 3,
                 "perimeter": 8, "convex": True}


def test_vertical_exit_above():
    g = parse_grid("#\n#")  # column of two squares, y in [0, 2]
    assert g.vertical_exit_above(F(1, 2), F(1, 2)) == 2
    assert g.vertical_exit_above(F(1, 2), F(2)) == 2
    ring = parse_grid("###\n#.#\n###")
    # inside the lower wall, the hole edge at y=1 is the first exit
    assert ring.vertical_exit_above(F(3, 2), F(1, 2)) == 1


def test_first_boundary_hit():
    g = parse_grid("#")
    hit = g.first_boundary_hit(Point.of(F(-1, 2), F(1, 2)), Point.of(F(1, 2), F(1, 2)))
    assert hit == Point.of(0, F(1, 2))
    diag = g.first_boundary_hit(Point.of(-1, -1), Point.of(F(1, 2), F(1, 2)))
    assert diag == Point.of(0, 0)
