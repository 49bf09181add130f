"""Exact rational evaluation of the partition-count lower bounds.

Every value is a :class:`fractions.Fraction`; nothing here touches floats.

Prime indexing follows ``p_0 = 2, p_1 = 3, p_2 = 5, ...`` so ``p_11 = 37``.
"""

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, prod

from .errors import InvalidArgument, OutOfStatedScope
from .primes import _check_even, _ensure_covers, _small_odd_primes, cutoff_primes_for_bound

#: first prime whose minima value has the telescoped form (p_4)
TELESCOPE_START = 11
#: from here on (p_11) the five leading fractions are all present
CHAIN_START = 37


@dataclass(frozen=True)
class BoundBreakdown:
    q: int
    cutoff: tuple
    shrink_product: Fraction
    n: int
    subtractive: int
    A: Fraction

    @property
    def p_j(self):
        return self.cutoff[-1] if self.cutoff else 0

    @property
    def empty_cutoff(self):
        return not self.cutoff


@dataclass(frozen=True)
class MinimaRecord:
    p_m: int
    q: int
    n: int
    A_eq5: Fraction
    A_eq3bis: Fraction | None  # None below TELESCOPE_START
    lower_chain: Fraction

    @property
    def forms_agree(self):
        return self.A_eq3bis is not None and self.A_eq3bis == self.A_eq5

    @property
    def exceeds_lower_chain(self):
        return self.A_eq3bis is not None and self.A_eq3bis > self.lower_chain


def _require_odd_primes(primes):
    primes = [int(p) for p in primes]
    if not primes:
        return primes
    if any(p < 3 or p % 2 == 0 for p in primes):
        raise InvalidArgument(f"expected odd primes, got {primes}")
    known = set(_small_odd_primes(max(primes)).tolist())
    bad = [p for p in primes if p not in known]
    if bad:
        raise InvalidArgument(f"not prime: {bad}")
    return primes


def shrink_product(cutoff):
    """Exact product of ``(p - 2) / p`` over the cutoff primes (1 when empty)."""
    cutoff = _require_odd_primes(cutoff)
    return Fraction(prod(p - 2 for p in cutoff), prod(cutoff))


def bound_A(q, table=None):
    """Conjectured lower bound ``shrink * n - (p_j - 2)`` for even ``q >= 6``.

    Below q = 12 no prime is in the cutoff and the bound reduces to ``A = n``.
    """
    q = _check_even(q, 6)
    cutoff = tuple(cutoff_primes_for_bound(q, table))
    shrink = shrink_product(cutoff)
    n = q // 2 - 2
    sub = cutoff[-1] - 2 if cutoff else 0
    return BoundBreakdown(q, cutoff, shrink, n, sub, shrink * n - sub)


def bound_A_three(q):
    """``(n - 2) / 3``: the bound once the bad residues of 3 are removed."""
    q = _check_even(q, 6)
    return Fraction(q // 2 - 2 - 2, 3)


def bound_A_three_five(q):
    """``(3/5) * (n/3 - 1) - 2``: the bound after removing residues of 3 and 5.

    Stated for ``q >= 28``; smaller q still evaluates but warns.
    """
    q = _check_even(q, 6)
    if q < 28:
        warnings.warn(f"q={q} is below the stated range q >= 28", OutOfStatedScope, stacklevel=2)
    n = q // 2 - 2
    return Fraction(3, 5) * (Fraction(n, 3) - 1) - 2


def telescoped_A(p_m, odd_primes):
    """Minima value as ``prod (p_i - 2)/p_{i-1} * (p_m^2 - 1)/(2 p_m) - (p_m - 2)``.

    ``odd_primes`` are the odd primes up to ``p_m`` in order (3, 5, 7, 11, ...).
    The product runs from ``p_4 = 11``; twin primes contribute unit factors.
    """
    ps = [int(p) for p in odd_primes]
    if len(ps) < 4 or ps[:4] != [3, 5, 7, 11] or ps[-1] != p_m:
        raise InvalidArgument(f"telescoped form needs odd primes 3..{p_m}, p_m >= 11")
    num = prod(ps[i] - 2 for i in range(3, len(ps)))
    den = prod(ps[i - 1] for i in range(3, len(ps)))
    return Fraction(num, den) * Fraction(p_m * p_m - 1, 2 * p_m) - (p_m - 2)


def five_fraction_product():
    return (
        Fraction(9, 7) * Fraction(15, 13) * Fraction(21, 19)
        * Fraction(27, 23) * Fraction(35, 31)
    )


def minima_lower_chain(p_m):
    p_m = int(p_m)
    if p_m < 3:
        raise InvalidArgument(f"p_m must be >= 3, got {p_m}")
    return 2 - Fraction(1, p_m)


def minima_record(p_m, table=None):
    """Bound at ``q = p_m^2 + 3``, where ``p_m`` first enters the cutoff.

    ``A_eq5`` comes from :func:`bound_A`, ``A_eq3bis`` from the telescoped
    product; the latter is only defined for ``p_m >= 11`` and is ``None`` below.
    """
    p_m = _require_odd_primes([p_m])[0]
    q = p_m * p_m + 3
    table = _ensure_covers(table, isqrt(q))
    a5 = bound_A(q, table).A
    a3bis = None
    if p_m >= TELESCOPE_START:
        a3bis = telescoped_A(p_m, table.primes_upto(p_m)[1:])
    return MinimaRecord(p_m, q, (p_m * p_m - 1) // 2, a5, a3bis, minima_lower_chain(p_m))


def minima_records(p_lo, p_hi, table=None):
    """:func:`minima_record` for every odd prime in ``[p_lo, p_hi]``."""
    p_lo, p_hi = int(p_lo), int(p_hi)
    if p_lo > p_hi:
        raise InvalidArgument(f"empty prime range [{p_lo}, {p_hi}]")
    table = _ensure_covers(table, max(p_hi, 2))
    return [
        minima_record(int(p), table)
        for p in table.primes_upto(p_hi)
        if p >= max(p_lo, 3)
    ]
