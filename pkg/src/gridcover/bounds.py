"""Closed-form cost bounds for covering paths on a grid.

Cost of a path with length L and T stops is alpha*L + beta*T. For a region
of area A > 2k^2 any covering path satisfies the trade-off
(T-1) * f(L/(T-1)) >= A - 2k^2, where f is the per-stop unique coverage
area. Minimizing the cost subject to that constraint yields a per-area
constant sigma and the lower bound sigma*(A - 2k^2); the constructive upper
bounds are 2*sigma*(A + 16kP + 32k^2) in general and half that on convex
grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """Parameter outside the domain of a bound formula."""


@dataclass(frozen=True)
class CostParams:
    """Coverage radius k and objective weights: cost = alpha*L + beta*T.

    beta = 0 is admitted as the pure-length limit case.
    """

    k: float
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if not self.k > 0:
            raise DomainError(f"coverage radius must be positive, got {self.k}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.beta < 0:
            raise DomainError(f"beta must be nonnegative, got {self.beta}")


def coverage_area(d: float, k: float) -> float:
    """Unique coverage area per stop at inter-stop distance d: d*(2k - d/2), capped at 2k^2."""
    if d <= 0 or k <= 0:
        raise DomainError(f"coverage_area needs d > 0 and k > 0, got d={d}, k={k}")
    if d <= 2 * k:
        return d * (2 * k - d / 2)
    return 2 * k * k


def gamma(p: CostParams, *, alpha: float | None = None) -> float:
    """Optimal path length per unit of effective area.

    gamma = (4ak + b + sqrt((4ak + b) b)) / (2k (4ak + b)); the alpha
    override exists so tests can probe the alpha -> 0 limit.
    """
    a = p.alpha if alpha is None else alpha
    b, k = p.beta, p.k
    m = 4 * a * k + b
    return (m + math.sqrt(m * b)) / (2 * k * m)


def d_star(p: CostParams) -> float | None:
    """Optimal average inter-stop distance (4k*gamma - 2)/gamma; None when beta = 0."""
    if p.beta == 0:
        return None
    g = gamma(p)
    return (4 * p.k * g - 2) / g


def sigma(p: CostParams) -> float:
    """Per-area cost constant: any covering path costs at least sigma*(A - 2k^2).

    For beta > 0: sigma = alpha*gamma + beta*gamma^2 / (4k*gamma - 2),
    which equals (alpha*d* + beta) / f(d*). For beta = 0 the limit is
    alpha / (2k).
    """
    if p.beta == 0:
        return p.alpha / (2 * p.k)
    g = gamma(p)
    return p.alpha * g + p.beta * g * g / (4 * p.k * g - 2)


def sigma_ratio_form(p: CostParams) -> float:
    """sigma recomputed as (alpha*d* + beta)/f(d*); cross-check of the closed form."""
    if p.beta == 0:
        return p.alpha / (2 * p.k)
    d = d_star(p)
    return (p.alpha * d + p.beta) / coverage_area(d, p.k)


def tradeoff_cost(L: float, a0: float, p: CostParams) -> float:
    """Cost alpha*L + beta*T of the cheapest T meeting the trade-off at length L.

    Defined for L > a0/(2k); used to cross-check that gamma*a0 minimizes it.
    """
    denom = 2 * (2 * p.k * L - a0)
    if denom <= 0:
        raise DomainError("L must exceed a0/(2k)")
    t0 = L * L / denom
    return p.alpha * L + p.beta * t0 + p.beta


@dataclass(frozen=True)
class BoundsProfile:
    """Optimal trade-off profile and cost bounds for one (grid, params) pair.

    lower_bound is the exact optimum of the constrained trade-off
    (sigma*a0 + beta); lower_bound_paper is the looser sigma*(A - 2k^2).
    d_star/l_star/t0_star are None on the degenerate branch (A <= 2k^2 or
    beta = 0 where the stop count is unbounded).
    """

    gamma: float
    sigma: float
    d_star: float | None
    l_star: float | None
    t0_star: float | None
    a0: float
    lower_bound: float
    lower_bound_paper: float
    upper_general: float | None
    upper_convex: float | None
    degenerate: bool

    def to_json_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "sigma": self.sigma,
            "d_star": self.d_star,
            "l_star": self.l_star,
            "t0_star": self.t0_star,
            "a0": self.a0,
            "lower_bound": self.lower_bound,
            "lower_bound_paper": self.lower_bound_paper,
            "upper_general": self.upper_general,
            "upper_convex": self.upper_convex,
            "degenerate": self.degenerate,
        }


def optimal_profile(p: CostParams, area: float, perimeter: float | None = None) -> BoundsProfile:
    """Evaluate gamma, sigma, the optimal (L*, T0*, d*) and the cost bounds.

    area <= 2k^2 yields the degenerate branch: one stop is always needed, so
    the lower bound is beta and the trade-off machinery is skipped.
    """
    g = gamma(p)
    s = sigma(p)
    a0 = area - 2 * p.k * p.k
    upper_general = upper_convex = None
    if perimeter is not None:
        upper_general = upper_bound_general(p, area, perimeter)
        upper_convex = upper_bound_convex(p, area, perimeter)
    if a0 <= 0:
        return BoundsProfile(
            gamma=g, sigma=s, d_star=d_star(p), l_star=None, t0_star=None,
            a0=a0, lower_bound=p.beta, lower_bound_paper=max(0.0, s * a0),
            upper_general=upper_general, upper_convex=upper_convex, degenerate=True,
        )
    if p.beta == 0:
        # stops are free: L* -> a0/(2k) with unboundedly many stops
        return BoundsProfile(
            gamma=g, sigma=s, d_star=None, l_star=a0 / (2 * p.k), t0_star=None,
            a0=a0, lower_bound=s * a0, lower_bound_paper=s * a0,
            upper_general=upper_general, upper_convex=upper_convex, degenerate=False,
        )
    l_star = g * a0
    t0_star = g * g * a0 / (4 * p.k * g - 2)
    return BoundsProfile(
        gamma=g, sigma=s, d_star=d_star(p), l_star=l_star, t0_star=t0_star,
        a0=a0, lower_bound=s * a0 + p.beta, lower_bound_paper=s * a0,
        upper_general=upper_general, upper_convex=upper_convex, degenerate=False,
    )


def upper_bound_general(p: CostParams, area: float, perimeter: float) -> float:
    """Constructive cost bound for any grid: 2*sigma*(A + 16kP + 32k^2)."""
    return 2 * sigma(p) * (area + 16 * p.k * perimeter + 32 * p.k * p.k)


def upper_bound_convex(p: CostParams, area: float, perimeter: float) -> float:
    """Constructive cost bound for convex grids: exactly half the general bound."""
    return sigma(p) * (area + 16 * p.k * perimeter + 32 * p.k * p.k)
