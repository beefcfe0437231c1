"""Distance-power seeding and an exact outcome-distribution oracle.

The first center is drawn proportionally to location weight (uniform over
underlying points); center i > 1 proportionally to
``weight * (min distance to the chosen centers) ** ell`` with ell = 2 for
the squared-cost variant and ell = 1 for the linear one.  Sampling is
cumulative-sum inversion over scaled extended-range prefix sums: the
uniform variate is drawn at native precision and scaled into the extended
range through exponent arithmetic; boundary ties resolve to the lower
index.

Trials are pure functions of ``(rng_seed, trial_index)``.  The batched
engine computes every trial row-independently, so results never depend on
chunking, execution order, or worker count, and a single-trial run
reproduces any batch row bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .core import (Instance, _ext_min_into, _ext_mul, _norm, _scaled_totals,
                   scaled_weighted_matrix)
from .errors import CapacityError, ConfigError, DegenerateInstanceError
from .extfloat import ExtScalar

__all__ = [
    "SeedingTrace",
    "CoverageDistribution",
    "TrialArrays",
    "seed",
    "run_trials",
    "exact_distribution",
    "early_miss_event",
    "DEBUG_CHECKS",
]

# Extra per-iteration distribution assertions (slow); enable in tests.
DEBUG_CHECKS = False

# Trials per engine chunk are sized so one (T, 2k) work array stays small.
_CHUNK_ELEMS = 1 << 21

# Use the cached full weighted matrix below this many entries, per-pick
# distance rows above (identical arithmetic either way).
_MATRIX_MAX_ENTRIES = 1 << 22

_EXACT_SEQUENCE_LIMIT = 10**7


@dataclass(frozen=True)
class SeedingTrace:
    """Full record of one seeding run.

    ``potentials[j]`` is the sampling normalizer before pick j: the total
    weight for j = 0 and the current cost of the chosen prefix afterwards.
    """

    k: int
    n_centers: int
    ell: int
    centers: tuple[int, ...]
    cluster_ids: tuple[int, ...]
    coverage_counts: tuple[int, ...]
    potentials: tuple[ExtScalar, ...]
    final_cost: ExtScalar
    rng_seed: int
    trial_index: int
    rng_algorithm: str = rng.ALGORITHM


@dataclass(frozen=True)
class CoverageDistribution:
    """probs[i] = P(exactly i of the k optimal clusters get covered)."""

    k: int
    probs: np.ndarray


@dataclass(frozen=True)
class TrialArrays:
    """Per-trial outcomes of a batched run, aligned by trial index."""

    trial_indices: np.ndarray
    coverage: np.ndarray
    final_m: np.ndarray
    final_e: np.ndarray
    early_miss: np.ndarray


def floor_frac(x: float, k: int) -> int:
    """floor(x * k) robust to binary representation of decimals like 0.1."""
    return int(math.floor(x * k + 1e-12))


def _resolve(inst: Instance, n_centers, ell):
    n = inst.k if n_centers is None else int(n_centers)
    l = inst.ell if ell is None else int(ell)
    if l not in (1, 2):
        raise ConfigError(f"ell must be 1 or 2, got {l}")
    if not 1 <= n <= inst.n_locations:
        raise ConfigError(f"n_centers must be in 1..{inst.n_locations}, got {n}")
    return n, l


def _run_chunk(inst, n_centers, ell, rng_seed, lo, hi, alpha_picks, beta_clusters,
               record=False):
    T = hi - lo
    L = inst.n_locations
    U = rng.uniform_matrix(rng_seed, np.arange(lo, hi, dtype=np.uint64), n_centers)
    # sampling measure: location weights before the first pick, then
    # weight * (min distance to chosen centers) ** ell
    pot_m = np.tile(inst._w_m, (T, 1))
    pot_e = np.tile(inst._w_e, (T, 1))
    covered = np.zeros((T, inst.k), dtype=bool)
    covcnt = np.zeros(T, dtype=np.int64)
    miss = np.ones(T, dtype=bool)
    row_ix = np.arange(T)
    use_matrix = L * L <= _MATRIX_MAX_ENTRIES
    if use_matrix:
        Wm, We = inst.weighted_distpow(ell)
    picks = np.empty((T, n_centers), dtype=np.int64)
    steps = [] if record else None

    for step in range(n_centers):
        s, prefix, E = _scaled_totals(pot_m, pot_e)
        total = prefix[:, -1]
        if not np.all(total > 0.0):
            raise DegenerateInstanceError(
                "total potential reached zero before all centers were chosen")
        if DEBUG_CHECKS:
            p = s / total[:, None]
            assert np.all((p >= 0.0) & (p <= 1.0))
            assert np.all(np.abs(s.sum(axis=1) / total - 1.0) <= 1e-12)
        pick = rng.weighted_pick(s, prefix, U[:, step])
        picks[:, step] = pick
        cl = inst._cluster[pick] - 1
        newly = ~covered[row_ix, cl]
        covcnt += newly
        covered[row_ix, cl] = True
        if step < alpha_picks:
            miss &= cl >= beta_clusters
        if use_matrix:
            nm, ne = Wm[pick], We[pick]
        else:
            dm, de = inst.distpow_rows(pick, ell)
            nm, ne = _ext_mul(dm, de, inst._w_m, inst._w_e)
        if step == 0:
            pot_m = np.array(nm, copy=True)
            pot_e = np.array(ne, copy=True)
        else:
            _ext_min_into(pot_m, pot_e, nm, ne)
        if record:
            steps.append((total.copy(), E.copy(), covcnt.copy()))

    _, prefix, E = _scaled_totals(pot_m, pot_e)
    final_m, final_e = _norm(prefix[:, -1], E)
    arrays = TrialArrays(
        trial_indices=np.arange(lo, hi, dtype=np.int64),
        coverage=covcnt,
        final_m=final_m,
        final_e=final_e,
        early_miss=miss,
    )
    return arrays, picks, steps


def seed(inst: Instance, n_centers: int | None = None, ell: int | None = None,
         rng_seed: int = 0, trial_index: int = 0) -> SeedingTrace:
    """Run one seeding trial; fully deterministic given (rng_seed, trial_index)."""
    n, l = _resolve(inst, n_centers, ell)
    arrays, picks, steps = _run_chunk(
        inst, n, l, rng_seed, trial_index, trial_index + 1,
        alpha_picks=0, beta_clusters=0, record=True)
    centers = tuple(int(c) for c in picks[0])
    return SeedingTrace(
        k=inst.k,
        n_centers=n,
        ell=l,
        centers=centers,
        cluster_ids=tuple(int(inst._cluster[c]) for c in centers),
        coverage_counts=tuple(int(cov[0]) for _, _, cov in steps),
        potentials=tuple(ExtScalar(float(t[0]), int(e[0])) for t, e, _ in steps),
        final_cost=ExtScalar(float(arrays.final_m[0]), int(arrays.final_e[0])),
        rng_seed=rng_seed,
        trial_index=trial_index,
    )


def run_trials(inst: Instance, trials: int, rng_seed: int,
               n_centers: int | None = None, ell: int | None = None,
               alpha: float = 0.1, beta: float = 0.1,
               first_trial: int = 0) -> TrialArrays:
    """Batched trials ``first_trial .. first_trial + trials - 1``.

    Output is identical to running each trial through :func:`seed`
    individually; chunking is an internal memory bound only.
    """
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    n, l = _resolve(inst, n_centers, ell)
    alpha_picks = floor_frac(alpha, inst.k)
    beta_clusters = floor_frac(beta, inst.k)
    chunk = max(1, _CHUNK_ELEMS // inst.n_locations)
    parts = []
    lo = first_trial
    end = first_trial + trials
    while lo < end:
        hi = min(lo + chunk, end)
        arrays, _, _ = _run_chunk(inst, n, l, rng_seed, lo, hi,
                                  alpha_picks, beta_clusters)
        parts.append(arrays)
        lo = hi
    return TrialArrays(
        trial_indices=np.concatenate([p.trial_indices for p in parts]),
        coverage=np.concatenate([p.coverage for p in parts]),
        final_m=np.concatenate([p.final_m for p in parts]),
        final_e=np.concatenate([p.final_e for p in parts]),
        early_miss=np.concatenate([p.early_miss for p in parts]),
    )


def exact_distribution(inst: Instance, n_centers: int | None = None,
                       ell: int | None = None):
    """Exact coverage distribution and expected cost ratio for tiny instances.

    Sums over all reachable center sets with their exact pick probabilities
    (order integrated out, since future picks depend only on the chosen
    set).  Returns ``(CoverageDistribution, expected ratio of seeding cost
    to the discrete reference optimum)``.
    """
    from .instances import reference_costs

    n, l = _resolve(inst, n_centers, ell)
    L = inst.n_locations
    if L ** n > _EXACT_SEQUENCE_LIMIT:
        raise CapacityError(
            f"{L}**{n} ordered center sequences exceed the exact-oracle limit")
    W, E = scaled_weighted_matrix(inst, l)
    w_e = inst._w_e
    Ew = int(w_e.max())
    w = np.ldexp(inst._w_m, np.maximum(w_e - Ew, -1100).astype(np.int32))

    level = {0: 1.0}
    for step in range(n):
        nxt: dict[int, float] = {}
        for mask, P in level.items():
            if step == 0:
                pot = w
            else:
                bits = [i for i in range(L) if mask >> i & 1]
                pot = W[bits, :].min(axis=0)
            tot = pot.sum()
            for i in range(L):
                if pot[i] > 0.0:
                    key = mask | (1 << i)
                    nxt[key] = nxt.get(key, 0.0) + P * pot[i] / tot
        level = nxt

    opt = reference_costs(inst).discrete
    probs = np.zeros(inst.k + 1)
    expected_ratio = 0.0
    for mask, P in level.items():
        bits = [i for i in range(L) if mask >> i & 1]
        probs[len(set(inst._cluster[bits].tolist()))] += P
        c_scaled = float(W[bits, :].min(axis=0).sum())
        expected_ratio += P * ExtScalar(c_scaled, E).ratio(opt)
    return CoverageDistribution(inst.k, probs), expected_ratio


def early_miss_event(trace: SeedingTrace, alpha: float, beta: float) -> bool:
    """True iff none of the first floor(alpha*k) centers lies in clusters
    1..floor(beta*k)."""
    if not (0.0 < alpha <= 1.0 and 0.0 < beta <= 1.0):
        raise ConfigError("alpha and beta must lie in (0, 1]")
    a = floor_frac(alpha, trace.k)
    b = floor_frac(beta, trace.k)
    return all(cid > b for cid in trace.cluster_ids[:a])
