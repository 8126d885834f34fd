import random
from fractions import Fraction as F

import pytest

from gridcover.bench import oracle_suite, rectangle
from gridcover.bounds import CostParams, optimal_profile
from gridcover.grid import Point, parse_grid
from gridcover.oracle import (
    OracleConfig,
    OracleError,
    brute_force_path,
    candidate_points,
    held_karp_path,
    ratio_csv,
    ratio_study,
    solve_exact,
)
from gridcover.verify import exact_cover_check, verify_tradeoff

P111 = CostParams(k=1, alpha=1, beta=1)


def test_candidates_are_half_integer_points_inside():
    g = parse_grid("#")
    cands = candidate_points(g, F(1, 2))
    assert len(cands) == 9
    assert Point.of(F(1, 2), F(1, 2)) in cands
    assert candidate_points(parse_grid("##"), F(1, 2))[0] == Point.of(0, 0)


def test_oracle_single_square_single_center_stop():
    path = solve_exact(parse_grid("#"), P111)
    assert list(path.stops) == [Point.of(F(1, 2), F(1, 2))]
    assert path.cost == 1.0
    # independent: the center covers every corner at distance exactly k and
    # no cheaper covering subset exists (one stop minimum at beta = 1)
    assert exact_cover_check(parse_grid("#"), list(path.stops), F(1)) is None


def test_oracle_two_squares_needs_two_stops():
    g = parse_grid("##")
    # no single candidate covers both far corners
    for c in candidate_points(g, F(1, 2)):
        assert exact_cover_check(g, [c], F(1)) is not None
    path = solve_exact(g, P111)
    assert path.T == 2
    assert path.cost == 3.0


def test_oracle_never_beats_the_analytic_lower_bound():
    for inst in oracle_suite():
        prof = optimal_profile(P111, inst.grid.area, inst.grid.perimeter)
        path = solve_exact(inst.grid, P111)
        assert path.cost >= prof.lower_bound_paper - 1e-9
        assert path.cost >= prof.lower_bound - 1e-9
        assert verify_tradeoff(path, inst.grid, 1)


def test_held_karp_matches_brute_force():
    rng = random.Random(4)
    for n in range(2, 7):
        for _ in range(6):
            pts = []
            while len(pts) < n:
                q = Point.of(F(rng.randint(0, 10), 2), F(rng.randint(0, 10), 2))
                if q not in pts:
                    pts.append(q)
            dp_len, order = held_karp_path(pts)
            assert dp_len == brute_force_path(pts)
            assert sorted(order) == list(range(n))


def test_oracle_monotone_in_candidate_set():
    g = parse_grid("#")
    coarse = solve_exact(g, P111, OracleConfig(spacing=F(1, 2)))
    fine = solve_exact(g, P111, OracleConfig(spacing=F(1, 4), max_candidates=30))
    assert fine.cost <= coarse.cost + 1e-12


def test_oracle_instance_too_large():
    with pytest.raises(OracleError, match="too large"):
        solve_exact(rectangle(4, 4), P111)


def test_oracle_infeasible_at_coarse_discretization():
    with pytest.raises(OracleError, match="no covering subset"):
        solve_exact(parse_grid("#"), CostParams(k=0.2, alpha=1, beta=1),
                    OracleConfig(spacing=F(1, 2), max_subset_size=4))


def test_ratio_study_rows_and_csv():
    g1, g2 = parse_grid("#"), parse_grid("##")
    rows = ratio_study([("sq1", g1), ("rect2x1", g2)], P111, seed=5)
    assert len(rows) == 2
    for row in rows:
        v = row.values
        assert v["ratio_oracle"] >= 1
        assert v["ratio_lower"] >= 1
        A, P, k = v["A"], v["P"], 1
        if A > 2 * k * k:
            quotient = 2 * (A + 16 * k * P + 32 * k * k) / (A - 2 * k * k)
            assert v["ratio_lower"] <= quotient
    text = ratio_csv(rows)
    header, *lines = text.strip().split("\n")
    assert header.startswith("instance,seed,A,P,convex,k,alpha,beta,d,lower,oracle")
    assert len(lines) == 2
    assert lines[0].startswith("sq1,5,1,4,true,")


def test_ratio_study_empty():
    assert ratio_csv([]).strip() == ("instance,seed,A,P,convex,k,alpha,beta,d,"
                                     "lower,oracle,constructed,ratio_lower,ratio_oracle")


def test_ratio_study_marks_oracle_errors():
    rows = ratio_study([("big", rectangle(6, 6))], P111)
    assert rows[0].values["oracle"] == "error:OracleError"
    assert isinstance(rows[0].values["constructed"], float)
