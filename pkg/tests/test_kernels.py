"""Both kernel backends must agree with each other and with brute force."""

import io
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goldbach_sieve import kernels
from goldbach_sieve.primes import build_table

from oracles import brute_admissible_count, brute_goldbach_ordered, prime_flags, trial_division_is_prime

BACKENDS = kernels.available_backends()
TABLE = build_table(20_000)


@pytest.fixture(params=BACKENDS, ids=lambda m: m.BACKEND)
def backend(request):
    return request.param


def test_compiled_backend_is_selected_when_built():
    forced = os.environ.get("GOLDBACH_SIEVE_PURE", "") not in ("", "0")
    assert kernels.BACKEND == ("python" if forced else BACKENDS[0].BACKEND)


def test_sieve_odd(backend):
    base = TABLE.primes_upto(200)[1:]
    flags = backend.sieve_odd(1, 20_000, base)
    want = [trial_division_is_prime(k) for k in range(1, 20_001, 2)]
    assert flags.astype(bool).tolist() == want


def test_sieve_odd_even_bounds(backend):
    base = TABLE.primes_upto(200)[1:]
    flags = backend.sieve_odd(100, 130, base)
    assert [101 + 2 * i for i in np.flatnonzero(flags)] == [101, 103, 107, 109, 113, 127]


def test_pair_counts_against_brute(backend):
    counts = backend.pair_counts(TABLE.primes_upto(2000), 4, 2000)
    flags = prime_flags(2000)
    assert counts.tolist() == [brute_goldbach_ordered(q, flags) for q in range(4, 2001, 2)]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9000), st.integers(0, 500))
def test_pair_counts_window_consistent(a2, w):
    a, b = 2 * a2, 2 * (a2 + w)
    full = kernels.available_backends()[-1].pair_counts(TABLE.primes_upto(b), 4, b)
    for m in BACKENDS:
        got = m.pair_counts(TABLE.primes_upto(b), a, b)
        assert got.tolist() == full[(a - 4) // 2:].tolist()


def test_residue_scan_against_brute(backend):
    small = TABLE.primes_upto(50)[1:]
    adm, unsound = backend.residue_scan(4, 2000, small, TABLE.bits)
    assert adm.tolist() == [0] + [brute_admissible_count(q) for q in range(6, 2001, 2)]
    assert not unsound.any()


def test_residue_scan_detects_unsound_pairs(backend):
    # corrupt the table: mark 17 composite, so n1 = 17 for q = 40 (40 = 17 + 23) is flagged
    bits = TABLE.bits.copy()
    i = 17 >> 1
    bits[i >> 3] &= ~np.uint8(1 << (i & 7))
    _, unsound = backend.residue_scan(40, 40, TABLE.primes_upto(10)[1:], bits)
    assert unsound.tolist() == [2]


def test_residue_mask_matches_between_backends():
    small = TABLE.primes_upto(150)[1:]
    for q in range(6, 20_000, 97 * 2):
        masks = [np.asarray(m.residue_mask(q, small), dtype=bool) for m in BACKENDS]
        assert all((masks[0] == x).all() for x in masks)


def test_scan_output_identical_across_backends(monkeypatch):
    from goldbach_sieve import scan

    texts = []
    for m in BACKENDS:
        for name in ("pair_counts", "residue_scan", "residue_mask"):
            monkeypatch.setattr(kernels, name, getattr(m, name))
        buf = io.StringIO()
        scan.scan_range(4, 8000, chunk=1024, sink=buf)
        texts.append(buf.getvalue())
    assert all(t == texts[0] for t in texts)
