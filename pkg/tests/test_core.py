import itertools

import numpy as np
import pytest

from seedbounds.core import (BOTTOM, TOP, Instance, WeightedLocation, cost,
                             coverage, dist_pow, write_instance_csv)
from seedbounds.extfloat import EXT_ZERO, ExtScalar
from seedbounds.instances import gen_kmeans_bad, reference_costs

from conftest import assert_rel_close


@pytest.fixture(scope="module")
def inst2():
    return gen_kmeans_bad(2, 4.0, 1.0)


# ---------------------------------------------------------------------------
# dist_pow
# ---------------------------------------------------------------------------

def test_dist_zero_for_identical_location(inst2):
    loc = inst2.locations[0]
    assert dist_pow(loc, loc, 2) == EXT_ZERO
    assert dist_pow(loc, loc, 1) == EXT_ZERO


def test_dist_hand_values(inst2):
    top1, bot1, top2, bot2 = inst2.locations
    # bar ends (0, 0.5)-(0, -0.5): squared distance 1
    assert dist_pow(top1, bot1, 2).to_float() == 1.0
    # (0, 0.5)-(2, 1): 2^2 + 0.5^2
    assert dist_pow(top1, top2, 2).to_float() == 4.25
    assert dist_pow(top1, bot2, 2).to_float() == 6.25
    assert_rel_close(dist_pow(top1, top2, 1).to_float(), 4.25 ** 0.5, 2**-48)
    assert dist_pow(top2, top1, 2).to_float() == 4.25  # symmetry


def test_dist_extreme_range_stays_finite():
    inst = gen_kmeans_bad(2000, 1.0, 1.0)
    d = dist_pow(inst.locations[0], inst.locations[-1], 2)
    # rightmost bar sits at x ~ 2^2000, squared distance ~ 2^4000
    assert 3990 <= d.e <= 4010
    assert not d.is_zero


def test_dist_closed_form_cross_check():
    # independent closed form for the generated geometry: for clusters
    # a > b and end signs s, t the squared distance is
    # r^2 * 4^a * ((1 - 2^-d)^2 + (s - t*2^-d)^2 / 16) with d = a - b
    inst = gen_kmeans_bad(9, 1.0, 3.0)
    by = {(loc.cluster_id, loc.end_id): loc for loc in inst.locations}
    for a, b, s_end, t_end in [(2, 1, TOP, TOP), (5, 3, TOP, BOTTOM),
                               (9, 1, BOTTOM, BOTTOM), (7, 6, BOTTOM, TOP)]:
        d = a - b
        s = 1.0 if s_end == TOP else -1.0
        t = 1.0 if t_end == TOP else -1.0
        expected = 9.0 * 4.0**a * ((1 - 2.0**-d) ** 2 + (s - t * 2.0**-d) ** 2 / 16)
        got = dist_pow(by[(a, s_end)], by[(b, t_end)], 2).to_float()
        assert_rel_close(got, expected, 2**-48)


def test_dist_rejects_bad_exponent(inst2):
    with pytest.raises(ValueError):
        dist_pow(inst2.locations[0], inst2.locations[1], 3)


# ---------------------------------------------------------------------------
# cost
# ---------------------------------------------------------------------------

def test_cost_all_locations_is_zero(inst2):
    assert cost(inst2, range(4)) == EXT_ZERO


def test_cost_reference_and_doubled_prefix(inst2):
    assert cost(inst2, [0, 2]).to_float() == 8.0  # one end per cluster
    assert cost(inst2, [1, 3]).to_float() == 8.0
    assert cost(inst2, [0, 1]).to_float() == 8.5  # both ends of cluster 1


def test_cost_rejects_empty_and_invalid(inst2):
    with pytest.raises(ValueError):
        cost(inst2, [])
    with pytest.raises(ValueError):
        cost(inst2, [0, 0])
    with pytest.raises(ValueError):
        cost(inst2, [0, 9])


def test_cost_monotone_in_centers():
    inst = gen_kmeans_bad(6, 2.0, 1.0)
    rng = np.random.default_rng(7)
    for _ in range(25):
        order = rng.permutation(12)
        prev = None
        for j in range(1, 13):
            c = cost(inst, order[:j])
            if prev is not None:
                assert c <= prev
            prev = c


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------

def test_coverage_definitions(inst2):
    assert coverage(inst2, []) == (0, [False, False])
    assert coverage(inst2, [0, 1]) == (1, [True, False])
    assert coverage(inst2, [0, 2]) == (2, [True, True])
    assert coverage(inst2, [2, 0]) == (2, [True, True])  # order-independent


def test_coverage_bounded_by_center_count():
    inst = gen_kmeans_bad(5, 1.0, 1.0)
    rng = np.random.default_rng(3)
    for _ in range(50):
        size = int(rng.integers(1, 11))
        picks = rng.choice(10, size=size, replace=False)
        count, flags = coverage(inst, picks)
        assert count == sum(flags) <= min(size, 5)


# ---------------------------------------------------------------------------
# coverage/cost floor: covering a*k clusters forces ratio >= (9 - a)/8
# ---------------------------------------------------------------------------

def test_cost_floor_random_subsets():
    rng = np.random.default_rng(12)
    for k in range(4, 9):
        inst = gen_kmeans_bad(k, 1.0, 1.0)
        opt = reference_costs(inst).discrete
        for _ in range(400):
            picks = rng.choice(2 * k, size=k, replace=False)
            a = coverage(inst, picks)[0] / k
            ratio = cost(inst, picks).ratio(opt)
            assert ratio >= (9.0 - a) / 8.0 - 1e-12


def test_cost_floor_equality_cases():
    # k=2, both ends of the heaviest bar: ratio is exactly 17/16
    inst = gen_kmeans_bad(2, 4.0, 1.0)
    ratio = cost(inst, [0, 1]).ratio(reference_costs(inst).discrete)
    assert abs(ratio - 17.0 / 16.0) <= 1e-12
    # doubly covering every other cluster meets the floor with equality
    for k in (4, 6, 8):
        inst = gen_kmeans_bad(k, 1.0, 1.0)
        picks = []
        for i in range(0, k, 2):  # both ends of odd-numbered clusters
            picks += [2 * i, 2 * i + 1]
        a = coverage(inst, picks)[0] / k
        assert a == 0.5
        ratio = cost(inst, picks).ratio(reference_costs(inst).discrete)
        assert abs(ratio - (9.0 - a) / 8.0) <= 1e-12


def test_uncovered_cluster_contributes_at_least_17_8():
    # every center set leaving exactly one cluster uncovered pays at least
    # (17/8) * m * r^2 for it
    for k in range(2, 9):
        inst = gen_kmeans_bad(k, 1.0, 1.0)
        floor = 17.0 / 8.0
        for picks in itertools.combinations(range(2 * k), k):
            count, flags = coverage(inst, picks)
            if count != k - 1:
                continue
            u = flags.index(False)
            ends = [loc for loc in inst.locations if loc.cluster_id == u + 1]
            contrib = 0.0
            for loc in ends:
                best = min(dist_pow(loc, inst.locations[c], 2) for c in picks)
                contrib += (loc.weight * best).to_float()
            assert contrib >= floor * (1 - 1e-12)


# ---------------------------------------------------------------------------
# custom instances and validation
# ---------------------------------------------------------------------------

def _symmetric_instance():
    # two equal-weight bars mirrored around x = 1, unit weights
    w = ExtScalar(1.0)
    h = ExtScalar(0.5)
    locs = [
        WeightedLocation(1, TOP, ExtScalar(0.0), h, w),
        WeightedLocation(1, BOTTOM, ExtScalar(0.0), h, w),
        WeightedLocation(2, TOP, ExtScalar(2.0), h, w),
        WeightedLocation(2, BOTTOM, ExtScalar(2.0), h, w),
    ]
    return Instance(locs, 2, 1.0, 1.0, "kmeans")


def test_custom_symmetric_instance_costs():
    inst = _symmetric_instance()
    assert cost(inst, [0, 2]).to_float() == 2.0  # each far end pays (2h)^2 = 1
    # both ends of bar 1: bar 2's ends each pay min(2^2, 2^2 + 1) = 4
    assert cost(inst, [0, 1]).to_float() == 8.0


def test_instance_validation():
    w = ExtScalar(1.0)
    h = ExtScalar(0.5)
    loc = WeightedLocation(1, TOP, ExtScalar(0.0), h, w)
    with pytest.raises(ValueError):
        Instance([loc], 1, 1.0, 1.0, "kmeans")
    with pytest.raises(ValueError):
        Instance([loc, loc], 1, 1.0, 1.0, "kmeans")
    with pytest.raises(ValueError):
        Instance([loc, WeightedLocation(1, BOTTOM, ExtScalar(0.0), h, w)],
                 1, 1.0, 1.0, "kmodes")
    with pytest.raises(ValueError):
        WeightedLocation(1, "middle", ExtScalar(0.0), h, w)
    with pytest.raises(ValueError):
        WeightedLocation(1, TOP, ExtScalar(0.0), h, EXT_ZERO)


def test_instance_csv_round_trip(tmp_path):
    inst = gen_kmeans_bad(3, 4.0, 1.0)
    path = tmp_path / "instance.csv"
    write_instance_csv(inst, path)
    text = path.read_text().splitlines()
    assert text[0].startswith("# variant=kmeans k=3")
    assert text[1] == "cluster_id,end_id,x,y,weight"
    rows = [line.split(",") for line in text[2:]]
    assert len(rows) == 6
    # third bar: x = 6, y = +/-2, weight 1/4 of the second bar's
    row = rows[4]
    assert row[0] == "3" and row[1] == TOP
    assert_rel_close(ExtScalar.parse(row[2]).to_float(), 6.0, 1e-12)
    assert row[3].startswith("2.000")
    bot = rows[5]
    assert bot[3].startswith("-2.000")
    w2 = ExtScalar.parse(rows[2][4]).to_float()
    w3 = ExtScalar.parse(rows[4][4]).to_float()
    assert w2 / w3 == 4.0
