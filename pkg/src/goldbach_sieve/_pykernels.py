"""Pure numpy implementations of the hot kernels.

Signatures mirror ``_ckernels`` exactly; ``goldbach_sieve.kernels`` picks one
of the two at import time.

Bit layout shared by every kernel: a packed ``uint8`` array in little-endian
bit order where bit ``i`` is set iff the odd number ``2*i + 1`` is prime.
"""

import numpy as np

BACKEND = "python"


def sieve_odd(lo, hi, base_primes):
    """Primality flags (one byte each) for the odd numbers in ``[lo, hi]``.

    ``base_primes`` must contain every odd prime ``p`` with ``p*p <= hi``;
    extra entries are ignored.
    """
    first = lo | 1
    if first < 1:
        first = 1
    if hi < first:
        return np.zeros(0, dtype=np.uint8)
    count = (hi - first) // 2 + 1
    flags = np.ones(count, dtype=np.uint8)
    if first == 1:
        flags[0] = 0
    for p in base_primes:
        p = int(p)
        if p < 3:
            continue
        pp = p * p
        if pp > hi:
            break
        start = max(pp, -(-first // p) * p)
        if start % 2 == 0:
            start += p
        if start > hi:
            continue
        flags[(start - first) // 2::p] = 0
    return flags


def pair_counts(primes, a, b):
    """Ordered Goldbach counts for every even q in ``[a, b]``.

    ``primes`` is the ascending prime list (2 included) covering ``[2, b]``.
    Each unordered pair ``p1 <= p2`` with ``a <= p1 + p2 <= b`` is visited once.
    """
    primes = np.asarray(primes, dtype=np.int64)
    counts = np.zeros((b - a) // 2 + 1, dtype=np.int64)
    if a <= 4 <= b:
        counts[(4 - a) // 2] += 1
    odd = primes[(primes > 2) & (primes <= b)]
    n_first = int(np.searchsorted(odd, b // 2, side="right"))
    lo2 = np.maximum(odd[:n_first], a - odd[:n_first])
    starts = np.searchsorted(odd, lo2, side="left")
    stops = np.searchsorted(odd, b - odd[:n_first], side="right")
    for i in range(n_first):
        j0, j1 = starts[i], stops[i]
        if j0 >= j1:
            continue
        p1 = odd[i]
        idx = (odd[j0:j1] + (p1 - a)) >> 1
        counts[idx] += 2
        if odd[j0] == p1:
            counts[idx[0]] -= 1
    return counts


def residue_mask(q, odd_primes):
    """Admissibility mask over odd ``n1 = 3, 5, ..., q - 3`` by residue sieving.

    Every prime in ``odd_primes`` with ``p*p < q`` removes the classes
    ``n1 = 0`` and ``n1 = q (mod p)``.
    """
    n = q // 2 - 2
    mask = np.ones(max(n, 0), dtype=bool)
    if n <= 0:
        return mask
    for p in odd_primes:
        p = int(p)
        if p * p >= q:
            break
        inv2 = (p + 1) // 2
        for c in (0, q % p):
            mask[((c - 3) % p) * inv2 % p::p] = False
    return mask


def _bit_lookup(bits, values):
    idx = values >> 1
    return (bits[idx >> 3] >> (idx & 7)) & 1


def residue_scan(a, b, odd_primes, bits):
    """Residue-sieve every even q in ``[a, b]``.

    Returns ``(admissible, unsound)``: per q, the number of admissible ``n1``
    and how many of those fail to be a prime pair according to ``bits``.
    """
    size = (b - a) // 2 + 1
    admissible = np.zeros(size, dtype=np.int64)
    unsound = np.zeros(size, dtype=np.int64)
    odd_primes = np.asarray(odd_primes, dtype=np.int64)
    for k in range(size):
        q = a + 2 * k
        if q < 6:
            continue
        mask = residue_mask(q, odd_primes)
        n1 = 3 + 2 * np.flatnonzero(mask)
        admissible[k] = n1.size
        if n1.size:
            ok = _bit_lookup(bits, n1) & _bit_lookup(bits, q - n1)
            unsound[k] = n1.size - int(ok.sum())
    return admissible, unsound
