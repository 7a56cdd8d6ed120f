import itertools

import pytest

from qaraki import arith
from qaraki.partitions import (
    brute_force_B,
    crossings,
    enumerate_B,
    from_permutation,
    inversions,
    pair_crossings,
    pair_partitions,
    q_factorial,
    q_integer,
    to_permutation,
)


def test_small_family_sizes():
    assert [len(enumerate_B(k)) for k in (2, 3, 4, 5)] == [1, 1, 2, 3]
    (p,) = enumerate_B(2)
    assert p.partner0 == 1 and p.sign == 1 and p.crossings == 0


@pytest.mark.parametrize("k", range(2, 10))
def test_enumeration_matches_brute_force(k):
    assert enumerate_B(k) == brute_force_B(k)


@pytest.mark.parametrize("k", range(2, 9))
def test_membership_invariants(k):
    for p in enumerate_B(k):
        points = [0, p.partner0, *itertools.chain.from_iterable(p.pairs), *p.singletons]
        assert sorted(points) == list(range(k))
        assert all(b < p.partner0 < a for a, b in p.pairs)
        assert all(s > p.partner0 for s in p.singletons)
        assert p.sign == (-1) ** (p.partner0 - 1)
        assert crossings(p) == p.crossings


def test_order_is_by_partner_then_pairs():
    ps = enumerate_B(7)
    keys = [(p.partner0, p.pairs) for p in ps]
    assert keys == sorted(keys)


def test_textbook_crossing():
    (p,) = [p for p in enumerate_B(4) if not p.singletons]
    assert p.partner0 == 2 and p.pairs == ((3, 1),)
    assert p.crossings == 1


def test_singleton_free_members_and_permutations():
    for m in range(1, 5):
        free = [p for p in enumerate_B(2 * m) if not p.singletons]
        assert all(p.partner0 == m for p in free)
        perms = sorted(to_permutation(p) for p in free)
        assert perms == sorted(itertools.permutations(range(1, m)))
        for p in free:
            sigma = to_permutation(p)
            assert from_permutation(sigma) == p
            assert p.crossings == m * (m - 1) // 2 + inversions(sigma)


def test_to_permutation_rejects_singletons():
    p = next(p for p in enumerate_B(4) if p.singletons)
    with pytest.raises(ValueError):
        to_permutation(p)


def test_pair_partitions():
    assert len(pair_partitions(4)) == 3
    assert pair_partitions(3) == []
    assert pair_partitions(0) == [()]
    assert len(pair_partitions(8)) == 105
    assert pair_crossings(((1, 3), (2, 4))) == 1
    assert pair_crossings(((1, 4), (2, 3))) == 0


def test_noncrossing_count_is_catalan():
    cat = [1, 1, 2, 5, 14, 42]
    for m in range(6):
        assert sum(1 for p in pair_partitions(2 * m) if pair_crossings(p) == 0) == cat[m]


def test_q_factorials():
    q = arith.mpq(1, 3)
    assert q_factorial(3, q) == (1 + q) * (1 + q + q * q)
    assert q_integer(0, q) == 0
    assert [q_factorial(k, 1) for k in range(6)] == [1, 1, 2, 6, 24, 120]
