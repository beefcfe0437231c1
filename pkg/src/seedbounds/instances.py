"""Generators for the adversarial instances plus reference/brute-force optima.

Cluster i (1-based) is a vertical bar: two locations at (x_i, +/-h_i) with
x_i = (2**i - 2) * r and half-height h_i = 2**(i-2) * r.  The squared-cost
variant puts weight m / 4**(i-1) at each end, the linear-cost variant
m / 2**(i-1).  With that geometry the best discrete k-center solution picks
one end per bar and costs k*m*r**2 (squared) or k*m*r (linear).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import (BOTTOM, TOP, Instance, WeightedLocation, cost,
                   scaled_weighted_matrix)
from .errors import CapacityError, ConfigError
from .extfloat import ExtScalar

__all__ = [
    "OptimalCosts",
    "gen_kmeans_bad",
    "gen_kmedian_bad",
    "reference_costs",
    "brute_force_opt",
    "BRUTE_FORCE_LIMIT",
]

BRUTE_FORCE_LIMIT = 10**6


@dataclass(frozen=True)
class OptimalCosts:
    """Reference optimal costs: centers restricted to data points vs free."""

    discrete: ExtScalar
    continuous: ExtScalar


def _check_params(k: int, m: float, r: float) -> None:
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if not (m >= 1.0):
        raise ConfigError(f"m must be >= 1, got {m}")
    if not (r > 0.0):
        raise ConfigError(f"r must be > 0, got {r}")


def _bar_locations(k: int, m: float, r: float, weight_halving: int):
    ext_r = ExtScalar.from_float(r)
    ext_m = ExtScalar.from_float(m)
    locs = []
    for i in range(1, k + 1):
        x = ExtScalar.from_int((1 << i) - 2) * ext_r
        h = ext_r.shifted(i - 2)
        w = ext_m.shifted(-weight_halving * (i - 1))
        locs.append(WeightedLocation(i, TOP, x, h, w))
        locs.append(WeightedLocation(i, BOTTOM, x, h, w))
    return locs


def gen_kmeans_bad(k: int, m: float = 1.0, r: float = 1.0) -> Instance:
    """Squared-distance instance: per-end weights m / 4**(i-1)."""
    _check_params(k, m, r)
    return Instance(_bar_locations(k, m, r, weight_halving=2), k, m, r, "kmeans")


def gen_kmedian_bad(k: int, m: float = 1.0, r: float = 1.0) -> Instance:
    """Linear-distance instance: same geometry, per-end weights m / 2**(i-1)."""
    _check_params(k, m, r)
    return Instance(_bar_locations(k, m, r, weight_halving=1), k, m, r, "kmedian")


def reference_costs(inst: Instance) -> OptimalCosts:
    """Closed-form optima for a generated instance.

    Squared variant: discrete k*m*r**2 (one end per bar), continuous half of
    that (bar midpoints).  Linear variant: k*m*r for both -- any point of a
    bar's segment, its ends included, is a 1-median of the two ends.
    """
    ext_k = ExtScalar.from_int(inst.k)
    ext_m = ExtScalar.from_float(inst.m)
    ext_r = ExtScalar.from_float(inst.r)
    if inst.variant == "kmeans":
        discrete = ext_k * ext_m * ext_r * ext_r
        continuous = discrete.shifted(-1)
    else:
        discrete = ext_k * ext_m * ext_r
        continuous = discrete
    return OptimalCosts(discrete=discrete, continuous=continuous)


def brute_force_opt(inst: Instance, n_centers: int | None = None):
    """Exhaustive minimum of cost() over all n_centers-subsets of locations.

    Returns ``(cost, best)`` where ``best`` is the lexicographically
    smallest argmin index tuple.  Refuses work beyond BRUTE_FORCE_LIMIT
    subsets.
    """
    n = inst.k if n_centers is None else int(n_centers)
    L = inst.n_locations
    if not 1 <= n <= L:
        raise ConfigError(f"n_centers must be in 1..{L}, got {n}")
    total = math.comb(L, n)
    if total > BRUTE_FORCE_LIMIT:
        raise CapacityError(
            f"C({L},{n}) = {total} subsets exceeds the enumeration limit {BRUTE_FORCE_LIMIT}")
    W, _ = scaled_weighted_matrix(inst, inst.ell)
    best_cost = math.inf
    best = None
    for subset in itertools.combinations(range(L), n):
        c = W[subset, :].min(axis=0).sum()
        if c < best_cost:
            best_cost = c
            best = subset
    return cost(inst, best), best
