"""Covering paths on unit-square grids under the l1 metric.

Builds provably bounded covering paths for arbitrary grids, evaluates the
closed-form lower/upper cost bounds, certifies coverage, and compares
against a brute-force oracle on tiny instances.
"""

from gridcover.grid import Grid, GridError, Point, BoundaryLoop, l1_distance, parse_grid
from gridcover.bounds import (
    CostParams,
    BoundsProfile,
    coverage_area,
    gamma,
    sigma,
    optimal_profile,
    upper_bound_general,
    upper_bound_convex,
)
from gridcover.stops import StopLattice, StopSet, build_lattice, build_stop_set
from gridcover.pathgen import CoveringPath, SpanningStructure, construct, path_cost
from gridcover.verify import CoverageReport, AuditReport, verify_coverage, verify_tradeoff, audit
from gridcover.oracle import OracleConfig, OracleError, solve_exact, ratio_study

__all__ = [
    "Grid", "GridError", "Point", "BoundaryLoop", "l1_distance", "parse_grid",
    "CostParams", "BoundsProfile", "coverage_area", "gamma", "sigma",
    "optimal_profile", "upper_bound_general", "upper_bound_convex",
    "StopLattice", "StopSet", "build_lattice", "build_stop_set",
    "CoveringPath", "SpanningStructure", "construct", "path_cost",
    "CoverageReport", "AuditReport", "verify_coverage", "verify_tradeoff", "audit",
    "OracleConfig", "OracleError", "solve_exact", "ratio_study",
]

__version__ = "0.1.0"
