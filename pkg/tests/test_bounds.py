import pytest

from oracles import neighbourhood_counts
from rookcolor.bounds import (InstanceParams, excess_closed, feasible_frequency_profiles,
                              frequency_envelope, neighborhood_size, pair_capacity_bound,
                              upper_bound)


def test_neighbourhood_examples():
    assert neighborhood_size(2, 6, 7) == 20
    assert neighborhood_size(1, 4, 9) == 11
    assert neighborhood_size(2, 2, 2) == 2
    with pytest.raises(ValueError):
        neighborhood_size(3, 2, 5)


@pytest.mark.parametrize("p", range(1, 8))
def test_neighbourhood_matches_placements(p):
    for q in range(1, 8):
        sizes = neighbourhood_counts(p, q)
        assert set(sizes) == set(range(1, min(p, q) + 1))
        for l, seen in sizes.items():
            assert seen == {neighborhood_size(l, p, q)}


def test_excess():
    assert excess_closed(1, 6, 7, 19) == -7
    assert excess_closed(2, 6, 7, 19) == 2
    assert excess_closed(1, 1, 2, 2) == 0
    for l in range(1, 7):
        assert excess_closed(l, 6, 7, 19) == -l * l + 12 * l - 18


def test_profiles_examples():
    assert feasible_frequency_profiles(6, 6, 19) == []
    got = feasible_frequency_profiles(6, 7, 19)
    assert got and all(pr[1] == 0 and 15 <= pr[2] <= 18 for pr in got)
    assert [pr.as_dict() for pr in feasible_frequency_profiles(1, 3, 3)] == [{1: 3}]


@pytest.mark.parametrize("p,q", [(2, 3), (3, 4), (4, 4), (5, 6), (6, 7)])
def test_profile_conservation_and_order(p, q):
    for k in range(q, pair_capacity_bound(p, q) + 1):
        profiles = feasible_frequency_profiles(p, q, k)
        for pr in profiles:
            assert pr.colours == k and pr.cells == p * q
            assert all(l <= p and excess_closed(l, p, q, k) >= 0 for l, _ in pr.counts)
        vecs = [pr.vector(p) for pr in profiles]
        assert vecs == sorted(vecs)


@pytest.mark.parametrize("p,q", [(3, 3), (4, 5), (5, 5), (6, 6), (6, 7)])
def test_profile_emptiness_persists(p, q):
    for k in range(q, pair_capacity_bound(p, q) + 1):
        if not feasible_frequency_profiles(p, q, k):
            for k2 in range(k + 1, k + 4):
                assert not feasible_frequency_profiles(p, q, k2)


def test_capacity():
    assert pair_capacity_bound(6, 7) == 22
    assert pair_capacity_bound(1, 1) == 1
    assert pair_capacity_bound(2, 2) == 3


def test_upper_bound():
    assert upper_bound(6, 6) == 18
    assert upper_bound(6, 7) >= 19
    for q in range(1, 10):
        assert upper_bound(1, q) == q
    for p in range(1, 7):
        for q in range(p, 9):
            assert upper_bound(p, q) >= q


def test_envelope():
    env = frequency_envelope(6, 7, 19)
    assert (env.min_freq, env.max_freq) == (2, 6)
    assert frequency_envelope(6, 6, 19).empty


def test_instance_params():
    assert InstanceParams(7, 6, 19).normalized() == InstanceParams(6, 7, 19)
    with pytest.raises(ValueError):
        InstanceParams(0, 3, 3)
