"""Residue admissibility and exact Goldbach partition counts.

An odd ``n1`` is *admissible* for even ``q`` when, for every odd prime ``p``
with ``p*p < q``, the residue ``n1 mod p`` avoids both bad residues
``{0, q mod p}``. Admissibility forces ``n1`` and ``q - n1`` to be prime, but
it deliberately rejects partitions that use one of those small primes.
"""

from dataclasses import dataclass
from math import ceil
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import InvalidArgument
from .primes import _check_even, _ensure_covers, cutoff_primes_for_predicate


@dataclass(frozen=True)
class ResidueRow:
    n1: int
    residues: dict  # prime -> n1 mod prime


@dataclass(frozen=True)
class BadResidueSet:
    q: int
    p: int
    residues: frozenset


@dataclass(frozen=True)
class PartitionProfile:
    q: int
    n: int
    goldbach_ordered: int
    goldbach_unordered: int
    admissible_count: int
    predicate_cutoff: int  # largest odd prime with p*p < q, 0 if none


class Partition(NamedTuple):
    n1: int
    n2: int
    admissible: bool
    prime_pair: bool


def odd_partition_count(q):
    """Ordered pairs of odd numbers >= 3 summing to ``q``: ``q/2 - 2``."""
    q = _check_even(q, 6)
    return q // 2 - 2


def residue_row(n1, primes):
    n1 = int(n1)
    if n1 < 3 or n1 % 2 == 0:
        raise InvalidArgument(f"n1 must be odd and >= 3, got {n1}")
    return ResidueRow(n1, {int(p): n1 % int(p) for p in primes})


def bad_residues(q, p):
    q = _check_even(q, 6)
    p = int(p)
    if p < 3 or p % 2 == 0:
        raise InvalidArgument(f"p must be an odd prime, got {p}")
    return BadResidueSet(q, p, frozenset({0, q % p}))


def _check_n1(q, n1):
    n1 = int(n1)
    if n1 % 2 == 0 or not 3 <= n1 <= q - 3:
        raise InvalidArgument(f"n1 must be odd in [3, {q - 3}], got {n1}")
    return n1


def is_admissible(q, n1, table=None):
    q = _check_even(q, 6)
    n1 = _check_n1(q, n1)
    for p in cutoff_primes_for_predicate(q, table):
        r = n1 % p
        if r == 0 or r == q % p:
            return False
    return True


def admissible_mask(q, table=None):
    """Boolean mask over odd ``n1 = 3, 5, ..., q - 3`` (length ``q/2 - 2``)."""
    q = _check_even(q, 6)
    cutoff = np.asarray(cutoff_primes_for_predicate(q, table), dtype=np.int64)
    return np.asarray(kernels.residue_mask(q, cutoff), dtype=bool)


def admissible_count(q, table=None):
    return int(admissible_mask(q, table).sum())


def is_prime_pair(q, n1, table=None):
    q = _check_even(q, 4)
    n1 = int(n1)
    if not 2 <= n1 <= q - 2:
        raise InvalidArgument(f"n1 must lie in [2, {q - 2}], got {n1}")
    table = _ensure_covers(table, q)
    return table.is_prime(n1) and table.is_prime(q - n1)


def goldbach_count(q, table=None):
    """``(ordered, unordered)`` Goldbach partition counts of ``q``.

    Ordered counts 3+7 and 7+3 separately; unordered counts ``n1 <= q/2``.
    """
    q = _check_even(q, 4)
    table = _ensure_covers(table, q)
    if q == 4:
        return 1, 1
    ps = table.primes_upto(q - 3)[1:]
    ordered = int(table.is_prime_array(q - ps).sum())
    return ordered, ceil(ordered / 2)


def enumerate_partitions(q, table=None):
    """One :class:`Partition` per candidate ``n1``.

    Covers every odd ``n1`` in ``[3, q - 3]``; ``n1 = 2`` only arises for q = 4,
    since ``q - 2`` is even.
    """
    q = _check_even(q, 4)
    table = _ensure_covers(table, q)
    if q == 4:
        return [Partition(2, 2, False, True)]
    n1 = np.arange(3, q - 2, 2, dtype=np.int64)
    pair = table.is_prime_array(n1) & table.is_prime_array(q - n1)
    adm = admissible_mask(q, table)
    return [
        Partition(int(a), q - int(a), bool(b), bool(c))
        for a, b, c in zip(n1, adm, pair)
    ]


def profile(q, table=None):
    q = _check_even(q, 4)
    table = _ensure_covers(table, q)
    ordered, unordered = goldbach_count(q, table)
    if q == 4:
        return PartitionProfile(4, 0, ordered, unordered, 0, 0)
    cutoff = cutoff_primes_for_predicate(q, table)
    return PartitionProfile(
        q,
        q // 2 - 2,
        ordered,
        unordered,
        admissible_count(q, table),
        cutoff[-1] if cutoff else 0,
    )
