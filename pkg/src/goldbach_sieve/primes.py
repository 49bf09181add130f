"""Prime tables: bit-packed odd-only sieves, segments and cutoff prime lists."""

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from . import kernels
from .errors import InsufficientBasePrimes, InvalidArgument

#: odd slots sieved per segment (2**20 odd numbers = 2 MiB of the number line)
SEGMENT_ODD_SLOTS = 1 << 20


def _pack(flags):
    return np.packbits(flags.astype(np.uint8, copy=False), bitorder="little")


def _small_odd_primes(limit):
    """Odd primes <= limit via a plain sieve; only used to seed segments."""
    if limit < 3:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    return np.flatnonzero(flags)[1:].astype(np.int64)


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Primality for ``[2, limit]``.

    ``bits`` holds one bit per odd number (bit ``i`` <-> ``2*i + 1``, little-endian
    within each byte), so storage is about ``limit / 16`` bytes. ``primes`` is the
    ascending list of all primes up to ``limit``, starting 2, 3, 5, 7.
    """

    limit: int
    bits: np.ndarray = field(repr=False)
    primes: np.ndarray = field(repr=False)

    @property
    def prime_list(self):
        return self.primes.tolist()

    @property
    def odd_primes(self):
        return self.primes[1:]

    def __contains__(self, k):
        return self.is_prime(k)

    def is_prime(self, k):
        k = int(k)
        if k > self.limit:
            raise InvalidArgument(f"{k} exceeds table limit {self.limit}")
        if k == 2:
            return True
        if k < 2 or k % 2 == 0:
            return False
        i = k >> 1
        return bool((self.bits[i >> 3] >> (i & 7)) & 1)

    def is_prime_array(self, values):
        """Vectorised membership for an integer array (values in ``[0, limit]``)."""
        v = np.asarray(values, dtype=np.int64)
        if v.size and (v.max() > self.limit):
            raise InvalidArgument(f"values exceed table limit {self.limit}")
        # even values never read their bit; clamp so v == limit stays in range
        i = np.minimum(v >> 1, self.bits.size * 8 - 1)
        odd = ((self.bits[i >> 3] >> (i & 7)) & 1).astype(bool)
        return np.where(v % 2 == 1, odd, v == 2)

    def primes_upto(self, x):
        """Ascending primes ``<= x`` (x clipped to the table limit)."""
        return self.primes[: int(np.searchsorted(self.primes, x, side="right"))]


@dataclass(frozen=True, eq=False)
class Segment:
    """Exact primality of the odd numbers in ``[lo, hi]``."""

    lo: int
    hi: int
    odd_primality: np.ndarray = field(repr=False)  # one byte per odd value

    @property
    def first_odd(self):
        return max(self.lo | 1, 1)

    def is_prime(self, k):
        if not self.lo <= k <= self.hi:
            raise InvalidArgument(f"{k} outside segment [{self.lo}, {self.hi}]")
        if k % 2 == 0:
            return k == 2
        return bool(self.odd_primality[(k - self.first_odd) // 2])

    def primes(self):
        out = self.first_odd + 2 * np.flatnonzero(self.odd_primality).astype(np.int64)
        if self.lo <= 2 <= self.hi:
            out = np.concatenate(([2], out))
        return out


def build_table(limit, segment_slots=SEGMENT_ODD_SLOTS):
    """Sieve ``[2, limit]`` segment by segment into a :class:`PrimeTable`."""
    limit = int(limit)
    if limit < 2:
        raise InvalidArgument(f"limit must be >= 2, got {limit}")
    base = _small_odd_primes(isqrt(limit))
    span = 2 * segment_slots
    packed, found = [], [np.array([2], dtype=np.int64)]
    lo = 1
    while lo <= limit:
        hi = min(lo + span - 1, limit)
        flags = kernels.sieve_odd(lo, hi, base)
        # segments start on a multiple of 16 + 1, so packed bytes line up
        packed.append(_pack(flags))
        found.append(lo + 2 * np.flatnonzero(flags).astype(np.int64))
        lo += span
    return PrimeTable(limit, np.concatenate(packed), np.concatenate(found))


def sieve_segment(table, lo, hi):
    """Sieve ``[lo, hi]`` using the base primes held by ``table``."""
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise InvalidArgument(f"empty segment [{lo}, {hi}]")
    if table.limit * table.limit < hi:
        raise InsufficientBasePrimes(
            f"table limit {table.limit} cannot certify primes up to {hi}"
        )
    base = table.odd_primes[: int(np.searchsorted(table.odd_primes, isqrt(hi), side="right"))]
    return Segment(lo, hi, kernels.sieve_odd(lo, hi, base))


def _check_even(q, minimum):
    q = int(q)
    if q < minimum or q % 2:
        raise InvalidArgument(f"q must be even and >= {minimum}, got {q}")
    return q


def _ensure_covers(table, x):
    if table is None:
        return build_table(max(x, 2))
    if table.limit < x:
        raise InsufficientBasePrimes(f"table limit {table.limit} < {x}")
    return table


def cutoff_primes_for_bound(q, table=None):
    """Odd primes with ``p*p + 3 <= q``; the last one is the bound's ``p_j``.

    Each q gets a unique ``p_j``: the prime enters exactly at ``q = p*p + 3``.
    """
    q = _check_even(q, 6)
    table = _ensure_covers(table, isqrt(q))
    return [int(p) for p in table.primes_upto(isqrt(q - 3)) if p > 2]


def cutoff_primes_for_predicate(q, table=None):
    """Odd primes with ``p*p < q``: every possible small factor of a number < q."""
    q = _check_even(q, 6)
    table = _ensure_covers(table, isqrt(q))
    return [int(p) for p in table.primes_upto(isqrt(q)) if p > 2 and p * p < q]
