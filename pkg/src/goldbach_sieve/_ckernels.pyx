# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Same signatures and results as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cnp.import_array()

BACKEND = "cython"


cdef inline int _bit(const uint8_t[::1] bits, int64_t k) noexcept nogil:
    cdef int64_t i = k >> 1
    return (bits[i >> 3] >> (i & 7)) & 1


def sieve_odd(int64_t lo, int64_t hi, base_primes):
    cdef int64_t first = lo | 1
    if first < 1:
        first = 1
    if hi < first:
        return np.zeros(0, dtype=np.uint8)
    cdef int64_t count = (hi - first) // 2 + 1
    out = np.ones(count, dtype=np.uint8)
    cdef uint8_t[::1] flags = out
    cdef const int64_t[::1] base = np.ascontiguousarray(base_primes, dtype=np.int64)
    cdef Py_ssize_t i
    cdef int64_t p, start, m, step
    if first == 1:
        flags[0] = 0
    with nogil:
        for i in range(base.shape[0]):
            p = base[i]
            if p < 3:
                continue
            if p * p > hi:
                break
            start = ((first + p - 1) // p) * p
            if start < p * p:
                start = p * p
            if start % 2 == 0:
                start += p
            step = 2 * p
            m = start
            while m <= hi:
                flags[(m - first) >> 1] = 0
                m += step
    return out


cdef Py_ssize_t _lower_bound(const int64_t[::1] arr, Py_ssize_t n, int64_t x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def pair_counts(primes, int64_t a, int64_t b):
    cdef const int64_t[::1] ps = np.ascontiguousarray(primes, dtype=np.int64)
    out = np.zeros((b - a) // 2 + 1, dtype=np.int64)
    cdef int64_t[::1] counts = out
    cdef Py_ssize_t n = ps.shape[0], i, j
    cdef int64_t p1, p2, lo2, hi2
    if a <= 4 <= b:
        counts[(4 - a) >> 1] += 1
    with nogil:
        for i in range(n):
            p1 = ps[i]
            if p1 == 2:
                continue
            if 2 * p1 > b:
                break
            lo2 = a - p1
            if lo2 < p1:
                lo2 = p1
            hi2 = b - p1
            j = _lower_bound(ps, n, lo2)
            while j < n:
                p2 = ps[j]
                if p2 > hi2:
                    break
                if p2 == p1:
                    counts[(p1 + p2 - a) >> 1] += 1
                else:
                    counts[(p1 + p2 - a) >> 1] += 2
                j += 1
    return out


def residue_mask(int64_t q, odd_primes):
    cdef int64_t n = q // 2 - 2
    if n < 0:
        n = 0
    out = np.ones(n, dtype=bool)
    if n == 0:
        return out
    cdef uint8_t[::1] mask = out.view(np.uint8)
    cdef const int64_t[::1] ps = np.ascontiguousarray(odd_primes, dtype=np.int64)
    cdef Py_ssize_t i
    cdef int64_t p, c, k, inv2, r
    with nogil:
        for i in range(ps.shape[0]):
            p = ps[i]
            if p * p >= q:
                break
            inv2 = (p + 1) >> 1
            for r in range(2):
                c = 0 if r == 0 else q % p
                k = ((((c - 3) % p) + p) % p) * inv2 % p
                while k < n:
                    mask[k] = 0
                    k += p
    return out


def residue_scan(int64_t a, int64_t b, odd_primes, bits):
    cdef Py_ssize_t size = (b - a) // 2 + 1
    adm_out = np.zeros(size, dtype=np.int64)
    bad_out = np.zeros(size, dtype=np.int64)
    cdef int64_t[::1] adm = adm_out
    cdef int64_t[::1] bad = bad_out
    cdef const int64_t[::1] ps = np.ascontiguousarray(odd_primes, dtype=np.int64)
    cdef const uint8_t[::1] bv = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int64_t n_max = b // 2 - 2
    if n_max < 1:
        n_max = 1
    cdef uint8_t *mask = <uint8_t *> malloc(n_max)
    if mask == NULL:
        raise MemoryError()
    cdef Py_ssize_t t, i
    cdef int64_t q, n, p, c, k, inv2, r, n1, cnt, nbad
    try:
        with nogil:
            for t in range(size):
                q = a + 2 * t
                if q < 6:
                    continue
                n = q // 2 - 2
                memset(mask, 1, n)
                for i in range(ps.shape[0]):
                    p = ps[i]
                    if p * p >= q:
                        break
                    inv2 = (p + 1) >> 1
                    for r in range(2):
                        c = 0 if r == 0 else q % p
                        k = ((((c - 3) % p) + p) % p) * inv2 % p
                        while k < n:
                            mask[k] = 0
                            k += p
                cnt = 0
                nbad = 0
                for k in range(n):
                    if mask[k]:
                        cnt += 1
                        n1 = 3 + 2 * k
                        if not (_bit(bv, n1) and _bit(bv, q - n1)):
                            nbad += 1
                adm[t] = cnt
                bad[t] = nbad
    finally:
        free(mask)
    return adm_out, bad_out
