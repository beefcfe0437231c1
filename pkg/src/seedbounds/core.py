"""Weighted planar point sets, distance-power costs, and coverage accounting.

Locations are the 2k distinct points of a generated instance; every point
multiplicity is carried as an ExtScalar weight so clusters whose sizes
shrink geometrically stay exact.  All distance and cost arithmetic runs on
packed (mantissa, exponent) numpy arrays with the same invariants as
ExtScalar; the scalar type appears at API boundaries.

Everything here is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .extfloat import EXT_ZERO, ExtScalar

__all__ = [
    "TOP",
    "BOTTOM",
    "WeightedLocation",
    "Instance",
    "CenterSet",
    "dist_pow",
    "cost",
    "coverage",
    "write_instance_csv",
]

TOP = "top"
BOTTOM = "bottom"

# Sentinel exponent for exact zeros inside packed arrays; far below any real
# exponent so lexicographic (exponent, mantissa) comparison stays correct.
_SENT = -(1 << 40)

# Exponent gaps are clipped here before ldexp; anything further apart than
# the double range contributes exactly nothing to a sum.
_MIN_SHIFT = -1100

CenterSet = Sequence[int]


# ---------------------------------------------------------------------------
# packed-array arithmetic: mantissa in +/-[1,2) or 0.0, int64 exponent
# ---------------------------------------------------------------------------

def _norm(m, e):
    fm, fe = np.frexp(m)
    mm = 2.0 * fm
    ee = np.asarray(e + fe.astype(np.int64) - 1, dtype=np.int64)
    ee = np.where(mm == 0.0, _SENT, ee)
    return mm, ee


def _shift_to(m, e, E):
    return np.ldexp(m, np.maximum(e - E, _MIN_SHIFT).astype(np.int32))


def _ext_sub(am, ae, bm, be):
    E = np.maximum(ae, be)
    return _norm(_shift_to(am, ae, E) - _shift_to(bm, be, E), E)


def _ext_add(am, ae, bm, be):
    E = np.maximum(ae, be)
    return _norm(_shift_to(am, ae, E) + _shift_to(bm, be, E), E)


def _ext_mul(am, ae, bm, be):
    return _norm(am * bm, ae + be)


def _ext_sqrt(m, e):
    odd = (e & 1).astype(np.int64)
    mm = np.sqrt(m * np.where(odd == 1, 2.0, 1.0))
    ee = (e - odd) >> 1
    ee = np.where(mm == 0.0, _SENT, ee)
    return mm, ee


def _ext_min_over_rows(m, e):
    e_min = e.min(axis=0)
    masked = np.where(e == e_min[None, :], m, np.inf)
    return masked.min(axis=0), e_min


def _ext_min_into(m1, e1, m2, e2):
    take = (e2 < e1) | ((e2 == e1) & (m2 < m1))
    np.copyto(m1, m2, where=take)
    np.copyto(e1, e2, where=take)


def _scaled_totals(m, e):
    """Scale by the per-row max exponent and prefix-sum along the last axis.

    Returns (scaled weights, prefix sums, max exponent per row).  The total
    of a row is ``prefix[..., -1] * 2**E`` -- entries more than ~1100 binary
    orders below the max flush to zero, exactly as scalar extended addition
    would drop them.
    """
    E = e.max(axis=-1)
    s = _shift_to(m, e, E[..., None])
    prefix = np.cumsum(s, axis=-1)
    return s, prefix, E


def _pack_scalar(x: ExtScalar, sign: float = 1.0):
    if x.m == 0.0:
        return 0.0, _SENT
    return sign * x.m, x.e


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightedLocation:
    """One end of a vertical cluster bar: a planar point with multiplicity.

    ``y_mag`` is the vertical offset magnitude; ``end_id`` carries its sign
    (top = +, bottom = -).  Coordinates are in units of the bar length
    parameter and may exceed the native float range, hence ExtScalar.
    """

    cluster_id: int
    end_id: str
    x: ExtScalar
    y_mag: ExtScalar
    weight: ExtScalar

    def __post_init__(self):
        if self.end_id not in (TOP, BOTTOM):
            raise ValueError(f"end_id must be {TOP!r} or {BOTTOM!r}")
        if self.weight.is_zero:
            raise ValueError("weight must be positive")

    @property
    def y_sign(self) -> float:
        return 1.0 if self.end_id == TOP else -1.0


class Instance:
    """A generated dataset: 2k weighted locations plus its parameters.

    Immutable after construction.  Packs coordinates and weights into
    (mantissa, exponent) arrays used by every cost/sampling hot path, and
    lazily caches the weighted distance-power matrix for small instances.
    """

    def __init__(self, locations: Iterable[WeightedLocation], k: int, m: float,
                 r: float, variant: str):
        if variant not in ("kmeans", "kmedian"):
            raise ValueError(f"unknown variant {variant!r}")
        locs = tuple(locations)
        if len(locs) != 2 * k:
            raise ValueError("an instance needs exactly 2k locations")
        seen = {}
        for loc in locs:
            key = (loc.cluster_id, loc.end_id)
            if not 1 <= loc.cluster_id <= k:
                raise ValueError(f"cluster_id {loc.cluster_id} outside 1..{k}")
            if key in seen:
                raise ValueError(f"duplicate location for cluster {key}")
            seen[key] = loc
        self.locations = locs
        self.k = k
        self.m = float(m)
        self.r = float(r)
        self.variant = variant

        L = 2 * k
        self._cluster = np.fromiter((loc.cluster_id for loc in locs), dtype=np.int64, count=L)
        w_m = np.empty(L)
        w_e = np.empty(L, dtype=np.int64)
        x_m = np.empty(L)
        x_e = np.empty(L, dtype=np.int64)
        y_m = np.empty(L)
        y_e = np.empty(L, dtype=np.int64)
        for i, loc in enumerate(locs):
            w_m[i], w_e[i] = _pack_scalar(loc.weight)
            x_m[i], x_e[i] = _pack_scalar(loc.x)
            y_m[i], y_e[i] = _pack_scalar(loc.y_mag, loc.y_sign)
        self._w_m, self._w_e = w_m, w_e
        self._x_m, self._x_e = x_m, x_e
        self._y_m, self._y_e = y_m, y_e
        self._wd_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    @property
    def ell(self) -> int:
        """Distance exponent of the variant's cost function."""
        return 2 if self.variant == "kmeans" else 1

    @property
    def n_locations(self) -> int:
        return len(self.locations)

    # -- packed-array machinery -------------------------------------------

    def distpow_rows(self, idxs: np.ndarray, ell: int):
        """dist(loc[idxs[t]], loc[i]) ** ell as (mantissa, exponent) arrays.

        Output shape is ``idxs.shape + (2k,)``.
        """
        idxs = np.asarray(idxs, dtype=np.int64)
        sl = (Ellipsis, None)
        dxm, dxe = _ext_sub(self._x_m[idxs][sl], self._x_e[idxs][sl],
                            self._x_m, self._x_e)
        dym, dye = _ext_sub(self._y_m[idxs][sl], self._y_e[idxs][sl],
                            self._y_m, self._y_e)
        dm, de = _ext_add(*_norm(dxm * dxm, dxe + dxe),
                          *_norm(dym * dym, dye + dye))
        if ell == 1:
            dm, de = _ext_sqrt(dm, de)
        return dm, de

    def weighted_distpow(self, ell: int):
        """Cached (2k, 2k) matrix W[j, i] = weight_i * dist(j, i)**ell."""
        if ell not in self._wd_cache:
            dm, de = self.distpow_rows(np.arange(self.n_locations), ell)
            self._wd_cache[ell] = _ext_mul(dm, de, self._w_m, self._w_e)
        return self._wd_cache[ell]


def scaled_weighted_matrix(inst: Instance, ell: int):
    """The weighted distance-power matrix flattened to plain floats.

    Entry [j, i] = weight_i * dist(j, i)**ell scaled by 2**-E with E the
    global max exponent.  Only valid while the whole exponent spread fits a
    double, i.e. for the small instances the enumeration oracles handle.
    """
    wm, we = inst.weighted_distpow(ell)
    E = int(we.max())
    return np.ldexp(wm, np.maximum(we - E, _MIN_SHIFT).astype(np.int32)), E


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def dist_pow(p: WeightedLocation, q: WeightedLocation, ell: int) -> ExtScalar:
    """Euclidean distance between two locations raised to ell (1 or 2)."""
    if ell not in (1, 2):
        raise ValueError("ell must be 1 or 2")
    am = np.array([_pack_scalar(p.x)[0], _pack_scalar(p.y_mag, p.y_sign)[0]])
    ae = np.array([_pack_scalar(p.x)[1], _pack_scalar(p.y_mag, p.y_sign)[1]], dtype=np.int64)
    bm = np.array([_pack_scalar(q.x)[0], _pack_scalar(q.y_mag, q.y_sign)[0]])
    be = np.array([_pack_scalar(q.x)[1], _pack_scalar(q.y_mag, q.y_sign)[1]], dtype=np.int64)
    dm, de = _ext_sub(am, ae, bm, be)
    sm, se = _norm(dm * dm, de + de)
    m2, e2 = _ext_add(sm[:1], se[:1], sm[1:], se[1:])
    if ell == 1:
        m2, e2 = _ext_sqrt(m2, e2)
    return ExtScalar(float(m2[0]), int(e2[0]))


def _validated_centers(inst: Instance, centers: CenterSet) -> np.ndarray:
    idx = np.asarray(tuple(centers), dtype=np.int64)
    if idx.ndim != 1:
        raise ValueError("center set must be a flat index sequence")
    if idx.size and (idx.min() < 0 or idx.max() >= inst.n_locations):
        raise ValueError("center index out of range")
    if len(set(idx.tolist())) != idx.size:
        raise ValueError("center set contains duplicate indices")
    return idx


def cost(inst: Instance, centers: CenterSet) -> ExtScalar:
    """Sum over locations of weight * (min distance to a center)**ell.

    A location that is itself a center contributes exactly zero.
    """
    idx = _validated_centers(inst, centers)
    if idx.size == 0:
        raise ValueError("center set must be nonempty")
    dm, de = inst.distpow_rows(idx, inst.ell)
    pm, pe = _ext_mul(dm, de, inst._w_m, inst._w_e)
    mm, me = _ext_min_over_rows(pm, pe)
    _, prefix, E = _scaled_totals(mm, me)
    return ExtScalar(float(prefix[-1]), int(E))


def coverage(inst: Instance, centers: CenterSet):
    """(number of covered clusters, per-cluster covered flags).

    Cluster j is covered iff some center location belongs to it.
    """
    idx = _validated_centers(inst, centers)
    flags = np.zeros(inst.k, dtype=bool)
    if idx.size:
        flags[inst._cluster[idx] - 1] = True
    return int(flags.sum()), flags.tolist()


# ---------------------------------------------------------------------------
# instance CSV
# ---------------------------------------------------------------------------

def write_instance_csv(inst: Instance, path) -> None:
    """Write ``cluster_id,end_id,x,y,weight`` rows (coordinates in units of r).

    Numeric cells use the extended-scalar scientific text format; the y
    column carries a leading minus for bottom ends.
    """
    lines = [
        f"# variant={inst.variant} k={inst.k} m={inst.m:.15g} r={inst.r:.15g}",
        "cluster_id,end_id,x,y,weight",
    ]
    for loc in inst.locations:
        y_txt = loc.y_mag.format_sci()
        if loc.end_id == BOTTOM and not loc.y_mag.is_zero:
            y_txt = "-" + y_txt
        lines.append(",".join([
            str(loc.cluster_id),
            loc.end_id,
            loc.x.format_sci(),
            y_txt,
            loc.weight.format_sci(),
        ]))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
