"""Pair/singleton partitions, crossing statistics and q-factorials.

``B(n+1)`` is the family of partitions of the points ``{0, ..., n}`` into
pairs and singletons such that

* ``0`` is paired, with partner ``p0 = pi(0)``;
* every other pair ``{a, b}`` (``a > b``) straddles it: ``b < p0 < a``;
* every singleton lies to the right of ``p0``.

Crossing weights between blocks of such a partition:

* two pairs in the standard interleaving ``a < c < b < d`` count 1;
* two pairs avoiding ``0`` that are nested (``a < c < d < b``) count 2;
* a singleton ``s`` strictly inside a pair ``{a, b}`` counts 1.

With these weights the partition expansion of the dual variables agrees with
their defining recursion (checked word by word in the test-suite), and the
singleton-free members of ``B(2m)`` carry ``m(m-1)/2 + inv`` crossings.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fock import inversions

__all__ = [
    "DualPartition",
    "enumerate_B",
    "brute_force_B",
    "crossings",
    "inversions",
    "pair_partitions",
    "pair_crossings",
    "q_integer",
    "q_factorial",
    "q_factorial_table",
    "to_permutation",
    "from_permutation",
]


@dataclass(frozen=True)
class DualPartition:
    n: int
    partner0: int
    pairs: tuple  # ((a, b), ...) with a > b >= 1, sorted by b
    singletons: tuple
    sign: int
    crossings: int

    def blocks(self) -> list:
        return [(self.partner0, 0), *self.pairs, *((s,) for s in self.singletons)]


def _pair_weight(p, r) -> int:
    (a, b), (c, d) = sorted([tuple(sorted(p)), tuple(sorted(r))])
    if a < c < b < d:
        return 1
    if a < c < d < b and a != 0:
        return 2
    return 0


def _crossing_count(partner0: int, pairs, singletons) -> int:
    all_pairs = [(0, partner0)] + [(b, a) for a, b in pairs]
    total = 0
    for x, y in itertools.combinations(all_pairs, 2):
        total += _pair_weight(x, y)
    for s in singletons:
        for lo, hi in all_pairs:
            if lo < s < hi:
                total += 1
    return total


def crossings(p: DualPartition) -> int:
    """Weighted crossing number of a member of ``B(n+1)``."""
    return _crossing_count(p.partner0, p.pairs, p.singletons)


def _make(n, partner0, pairs, singletons) -> DualPartition:
    pairs = tuple(sorted(pairs, key=lambda ab: ab[1]))
    singletons = tuple(sorted(singletons))
    return DualPartition(
        n=n,
        partner0=partner0,
        pairs=pairs,
        singletons=singletons,
        sign=(-1) ** (partner0 - 1),
        crossings=_crossing_count(partner0, pairs, singletons),
    )


def enumerate_B(n_plus_1: int) -> list:
    """All members of ``B(n+1)``, ordered by ``pi(0)`` then pairs.

    Points left of ``pi(0)`` cannot be singletons and cannot pair among
    themselves, so each member is an injection from ``{1..p0-1}`` into
    ``{p0+1..n}``; unmatched right points become singletons.
    """
    n = n_plus_1 - 1
    if n < 1:
        raise ValueError("B(n+1) needs n+1 >= 2")
    out = []
    for p0 in range(1, n + 1):
        left = range(1, p0)
        right = list(range(p0 + 1, n + 1))
        if len(left) > len(right):
            continue
        members = []
        for targets in itertools.permutations(right, len(left)):
            pairs = [(a, b) for b, a in zip(left, targets)]
            singles = [r for r in right if r not in targets]
            members.append(_make(n, p0, pairs, singles))
        members.sort(key=lambda p: p.pairs)
        out.extend(members)
    return out


def _involutions(points):
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for blocks in _involutions(rest):
        yield [(first,)] + blocks
    for k, other in enumerate(rest):
        for blocks in _involutions(rest[:k] + rest[k + 1:]):
            yield [(first, other)] + blocks


def brute_force_B(n_plus_1: int) -> list:
    """``B(n+1)`` by filtering every pair/singleton partition of ``{0..n}``."""
    n = n_plus_1 - 1
    out = []
    for blocks in _involutions(list(range(n + 1))):
        zero = next(b for b in blocks if 0 in b)
        if len(zero) != 2:
            continue
        p0 = zero[1]
        pairs = [(max(b), min(b)) for b in blocks if len(b) == 2 and 0 not in b]
        singles = [b[0] for b in blocks if len(b) == 1]
        if all(b < p0 < a for a, b in pairs) and all(s > p0 for s in singles):
            out.append(_make(n, p0, pairs, singles))
    out.sort(key=lambda p: (p.partner0, p.pairs))
    return out


def to_permutation(p: DualPartition) -> tuple:
    """Singleton-free member of ``B(2m)`` to a permutation of ``1..m-1``.

    Left point ``l`` paired with ``m + s`` maps to ``s``; nestings become
    inversions, so ``crossings(p) == m(m-1)/2 + inversions(perm)``.
    """
    m = p.partner0
    if p.singletons or p.n != 2 * m - 1:
        raise ValueError("only singleton-free members of B(2m) correspond to permutations")
    by_left = {b: a for a, b in p.pairs}
    return tuple(by_left[l] - m for l in range(1, m))


def from_permutation(perm) -> DualPartition:
    m = len(perm) + 1
    pairs = [(m + s, l) for l, s in zip(range(1, m), perm)]
    return _make(2 * m - 1, m, pairs, [])


def pair_partitions(n: int) -> list:
    """All perfect matchings of ``{1..n}`` as tuples of pairs ``(a, b)``, ``a < b``."""
    if n % 2:
        return []

    def rec(points):
        if not points:
            yield ()
            return
        first = points[0]
        for k in range(1, len(points)):
            rest = points[1:k] + points[k + 1:]
            for tail in rec(rest):
                yield ((first, points[k]),) + tail

    return list(rec(list(range(1, n + 1))))


def pair_crossings(pairs) -> int:
    """Number of interleaving pairs ``a < c < b < d`` in a pair partition."""
    total = 0
    for (a, b), (c, d) in itertools.combinations(sorted(pairs), 2):
        if a < c < b < d:
            total += 1
    return total


def q_integer(k: int, q):
    """``[k]_q = 1 + q + ... + q^{k-1}``."""
    return sum((q ** j for j in range(k)), 0 * q)


def q_factorial(k: int, q):
    """``[k]_q! = prod_{j<=k} [j]_q``; equals ``k!`` at ``q = 1``."""
    out = 1 + 0 * q
    for j in range(1, k + 1):
        out = out * q_integer(j, q)
    return out


def q_factorial_table(N: int, q) -> list:
    """``[k]_{|q|}!`` for ``k = 0..N``."""
    return [q_factorial(k, abs(q)) for k in range(N + 1)]
