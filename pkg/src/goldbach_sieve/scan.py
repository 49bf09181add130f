"""Range scans: per-q partition counts against the conjectured bound.

A scan splits ``[q_lo, q_hi]`` into chunks of ``chunk`` consecutive integers
(``chunk / 2`` even q each). Chunks are independent work units; a worker pool
computes them and the parent writes them strictly in ascending q, so the output
bytes depend only on ``(q_lo, q_hi, chunk, seed)``.

Soundness policy: every q up to ``FULL_VERIFY_LIMIT`` is residue-sieved in
full and each admissible ``n1`` re-checked as a prime pair. Above it the
admissible count comes from the prime-pair counts directly, and each chunk
re-checks ``SAMPLES_PER_CHUNK`` seeded random ``(q, n1)`` picks.
"""

import csv
import io
import json
import logging
import os
from bisect import bisect_right
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from pathlib import Path

import numpy as np

from . import kernels
from .errors import CheckpointMismatch, CorruptCheckpoint, InvalidArgument, ScanAborted
from .partitions import is_admissible
from .primes import build_table

log = logging.getLogger(__name__)

COLUMNS = (
    "q", "n", "p_j", "A_num", "A_den", "goldbach_ordered",
    "admissible_count", "conjecture_ok", "soundness_ok", "special",
)
FULL_VERIFY_LIMIT = 100_000
SAMPLES_PER_CHUNK = 16
DEFAULT_CHUNK = 1 << 17
CHECKPOINT_MAGIC = "goldbach-scan"
CHECKPOINT_VERSION = "v1"


@dataclass(frozen=True)
class ScanRecord:
    q: int
    n: int
    p_j: int
    A_num: int
    A_den: int
    goldbach_ordered: int
    admissible_count: int
    conjecture_ok: bool
    soundness_ok: bool
    special: str = ""  # "q4", "empty_cutoff" or ""

    @property
    def A(self):
        return Fraction(self.A_num, self.A_den)

    @property
    def margin(self):
        return self.goldbach_ordered - self.A


@dataclass
class ScanReport:
    q_lo: int
    q_hi: int
    records_written: int = 0
    violations: list = field(default_factory=list)
    soundness_violations: list = field(default_factory=list)
    min_margin: tuple | None = None  # (q, Fraction)
    min_margin_bounded: tuple | None = None  # same, over rows with a cutoff prime
    checkpoint: int | None = None  # last completed q

    @property
    def ok(self):
        return not self.violations and not self.soundness_violations


class BoundLadder:
    """Prefix shrink products for every cutoff prime a scan can reach.

    ``value(q)`` returns ``(p_j, A_num, A_den)`` in lowest terms.
    """

    def __init__(self, odd_primes):
        self.entries = []
        self.prefix = []
        num, den = 1, 1
        for p in odd_primes:
            p = int(p)
            num, den = num * (p - 2), den * p
            g = gcd(num, den)
            num, den = num // g, den // g
            self.entries.append(p * p + 3)
            self.prefix.append((p, num, den))

    def value(self, q):
        n = q // 2 - 2 if q >= 6 else 0
        k = bisect_right(self.entries, q)
        if k == 0:
            return 0, n, 1
        p, num, den = self.prefix[k - 1]
        # num/den is reduced, so gcd(num*n - (p-2)*den, den) == gcd(n, den)
        g = gcd(den, n)
        return p, (num * n - (p - 2) * den) // g, den // g


def _bits_at(bits, values):
    idx = values >> 1
    return ((bits[idx >> 3] >> (idx & 7)) & 1).astype(bool)


def _admissible_from_pairs(table, qs, ordered):
    """Admissible counts from exact pair counts.

    Admissible ``n1`` are exactly the odd primes ``n1`` with ``q - n1`` prime and
    both squares above q, so each small prime ``p`` (``p*p < q``) with
    ``q - p`` prime removes the two ordered pairs it appears in.
    """
    adm = ordered.copy()
    adm[qs == 4] = 0
    top = int(qs[-1])
    for p in table.primes_upto(isqrt(top))[1:]:
        p = int(p)
        sel = qs > p * p
        if not sel.any():
            continue
        hit = _bits_at(table.bits, qs[sel] - p)
        adm[sel] -= 2 * hit
    return adm


def compute_chunk(table, a, b, seed=0, ladder=None):
    """ScanRecords for every even q in ``[a, b]``."""
    qs = np.arange(a, b + 1, 2, dtype=np.int64)
    ordered = kernels.pair_counts(table.primes_upto(b), a, b)
    adm = _admissible_from_pairs(table, qs, ordered)
    sound = adm <= ordered

    full_hi = min(b, FULL_VERIFY_LIMIT)
    if a <= full_hi:
        k = (full_hi - a) // 2 + 1
        small = table.primes_upto(isqrt(full_hi))[1:]
        res_adm, unsound = kernels.residue_scan(a, full_hi, small, table.bits)
        sound[:k] &= (unsound == 0) & (res_adm == adm[:k])
        adm[:k] = res_adm

    sampled = np.flatnonzero(qs > FULL_VERIFY_LIMIT)
    if sampled.size:
        rng = np.random.default_rng([seed, a])
        for i in rng.choice(sampled, size=SAMPLES_PER_CHUNK):
            q = int(qs[i])
            n1 = 3 + 2 * int(rng.integers(0, q // 2 - 2))
            predicted = (
                n1 * n1 > q and (q - n1) ** 2 > q
                and table.is_prime(n1) and table.is_prime(q - n1)
            )
            residue_ok = is_admissible(q, n1, table)
            if residue_ok != predicted or (residue_ok and not (
                table.is_prime(n1) and table.is_prime(q - n1)
            )):
                sound[i] = False

    if ladder is None:
        ladder = BoundLadder(table.primes_upto(isqrt(max(b - 3, 0)))[1:])
    records = []
    for q, g, ad, ok in zip(qs.tolist(), ordered.tolist(), adm.tolist(), sound.tolist()):
        p_j, a_num, a_den = ladder.value(q)
        if p_j:
            special, conj = "", g * a_den > a_num
        else:
            # no cutoff prime yet (q < 12): the bound is undefined, A = n is
            # reported for continuity only and cannot be violated
            special, conj = ("q4" if q == 4 else "empty_cutoff"), True
        records.append(ScanRecord(
            q, q // 2 - 2 if q >= 6 else 0, p_j, a_num, a_den, g, ad, conj, ok, special,
        ))
    return records


# -- output formats ---------------------------------------------------------

def config_line(q_lo, q_hi, chunk, seed, fmt):
    if fmt == "jsonl":
        cfg = {"command": "scan", "q_lo": q_lo, "q_hi": q_hi, "chunk": chunk, "seed": seed}
        return json.dumps({"config": cfg}) + "\n"
    return f"# scan q_lo={q_lo} q_hi={q_hi} chunk={chunk} seed={seed} format={fmt}\n"


def header_lines(q_lo, q_hi, chunk, seed, fmt):
    text = config_line(q_lo, q_hi, chunk, seed, fmt)
    if fmt == "csv":
        text += ",".join(COLUMNS) + "\n"
    return text


_BOOL = {True: "true", False: "false"}


def format_records(records, fmt):
    if fmt == "jsonl":
        return "".join(json.dumps(asdict(r)) + "\n" for r in records)
    b = _BOOL
    return "".join(
        f"{r.q},{r.n},{r.p_j},{r.A_num},{r.A_den},{r.goldbach_ordered},"
        f"{r.admissible_count},{b[r.conjecture_ok]},{b[r.soundness_ok]},{r.special}\n"
        for r in records
    )


def parse_records(lines, fmt):
    """Inverse of :func:`format_records` for data lines (no headers)."""
    out = []
    if fmt == "jsonl":
        for line in lines:
            out.append(ScanRecord(**json.loads(line)))
        return out
    for row in csv.reader(lines):
        if len(row) != len(COLUMNS):
            raise ValueError(f"malformed row: {row}")
        vals = dict(zip(COLUMNS, row))
        out.append(ScanRecord(
            *(int(vals[c]) for c in COLUMNS[:7]),
            vals["conjecture_ok"] == "true",
            vals["soundness_ok"] == "true",
            vals["special"],
        ))
    return out


# -- aggregation ------------------------------------------------------------

class _Aggregate:
    def __init__(self, report):
        self.report = report
        self._best = None  # (numerator, denominator) of the smallest margin
        self._best_bounded = None

    def add(self, rec):
        rep = self.report
        rep.records_written += 1
        if not rec.conjecture_ok:
            rep.violations.append(rec.q)
        if not rec.soundness_ok:
            rep.soundness_violations.append(rec.q)
        x, d = rec.goldbach_ordered * rec.A_den - rec.A_num, rec.A_den
        best = self._best
        if best is None or x * best[1] < best[0] * d:
            self._best = (x, d)
            rep.min_margin = (rec.q, Fraction(x, d))
        if rec.p_j:
            best = self._best_bounded
            if best is None or x * best[1] < best[0] * d:
                self._best_bounded = (x, d)
                rep.min_margin_bounded = (rec.q, Fraction(x, d))
        rep.checkpoint = rec.q


# -- checkpointing ----------------------------------------------------------

def write_checkpoint(path, q_lo, q_hi, chunk, last):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(f"{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION} {q_lo} {q_hi} {chunk}\n{last}\n",
                   encoding="utf-8")
    os.replace(tmp, path)


def read_checkpoint(path):
    """``(q_lo, q_hi, chunk, last)`` from a checkpoint file."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        magic, version, q_lo, q_hi, chunk = lines[0].split()
        last = int(lines[1])
        q_lo, q_hi, chunk = int(q_lo), int(q_hi), int(chunk)
    except (OSError, IndexError, ValueError, UnicodeDecodeError) as exc:
        raise CorruptCheckpoint(f"{path}: unreadable checkpoint ({exc})") from exc
    if magic != CHECKPOINT_MAGIC or version != CHECKPOINT_VERSION:
        raise CorruptCheckpoint(f"{path}: bad header {lines[0]!r}")
    if len(lines) != 2 or last % 2 or not q_lo - 2 <= last <= q_hi:
        raise CorruptCheckpoint(f"{path}: last completed q {last} out of range")
    if (last - q_lo + 2) % chunk and last != q_hi:
        raise CorruptCheckpoint(f"{path}: {last} is not a chunk boundary")
    return q_lo, q_hi, chunk, last


# -- driver -----------------------------------------------------------------

_WORKER_TABLE = None


def _init_worker(table):
    global _WORKER_TABLE
    _WORKER_TABLE = table


def _worker_chunk(args):
    a, b, seed = args
    return compute_chunk(_WORKER_TABLE, a, b, seed)


def _chunks(start, q_hi, q_lo, chunk):
    for s in range(q_lo, q_hi + 1, chunk):
        if s >= start:
            yield s, min(s + chunk - 2, q_hi)


def _iter_results(table, jobs, workers, seed):
    if workers <= 1:
        ladder = None
        for a, b in jobs:
            if ladder is None:
                ladder = BoundLadder(table.primes_upto(isqrt(max(table.limit - 3, 0)))[1:])
            yield compute_chunk(table, a, b, seed, ladder)
        return
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(table,)) as pool:
        pending = deque()
        jobs = iter(jobs)
        for job in jobs:
            pending.append(pool.submit(_worker_chunk, (*job, seed)))
            if len(pending) >= 2 * workers:
                break
        while pending:
            result = pending.popleft().result()
            job = next(jobs, None)
            if job is not None:
                pending.append(pool.submit(_worker_chunk, (*job, seed)))
            yield result


def _write_rows(stream, text):
    stream.write(text)
    stream.flush()


def _validate(q_lo, q_hi, chunk, workers):
    if q_lo % 2 or q_hi % 2 or not 4 <= q_lo <= q_hi:
        raise InvalidArgument(f"need even 4 <= q_lo <= q_hi, got [{q_lo}, {q_hi}]")
    if chunk < 2 or chunk % 2:
        raise InvalidArgument(f"chunk must be even and >= 2, got {chunk}")
    if workers < 1:
        raise InvalidArgument(f"workers must be >= 1, got {workers}")


def _drive(table, report, agg, start, chunk, workers, seed, stream, fmt, checkpoint):
    q_lo, q_hi = report.q_lo, report.q_hi
    jobs = list(_chunks(start, q_hi, q_lo, chunk))
    for records in _iter_results(table, jobs, workers, seed):
        try:
            if stream is not None:
                _write_rows(stream, format_records(records, fmt))
        except OSError as exc:
            raise ScanAborted(
                f"sink write failed after q={report.checkpoint}; checkpoint intact"
            ) from exc
        for rec in records:
            agg.add(rec)
        if checkpoint is not None:
            write_checkpoint(checkpoint, q_lo, q_hi, chunk, records[-1].q)
        log.debug("chunk done through q=%d", records[-1].q)
    return report


def scan_range(q_lo, q_hi, chunk=DEFAULT_CHUNK, workers=1, sink=None, fmt="csv",
               checkpoint=None, seed=0, table=None):
    """Scan every even q in ``[q_lo, q_hi]`` and return a :class:`ScanReport`.

    ``sink`` is a path, a text stream, or None (aggregate only). A checkpoint
    requires a path sink, since resuming must truncate and append to it.
    """
    q_lo, q_hi, chunk, workers = int(q_lo), int(q_hi), int(chunk), int(workers)
    _validate(q_lo, q_hi, chunk, workers)
    if fmt not in ("csv", "jsonl"):
        raise InvalidArgument(f"unknown format {fmt!r}")
    if checkpoint is not None and not isinstance(sink, (str, Path)):
        raise InvalidArgument("checkpointing needs a file path sink")
    if table is None or table.limit < q_hi:
        table = build_table(q_hi)
    report = ScanReport(q_lo, q_hi)
    agg = _Aggregate(report)
    header = header_lines(q_lo, q_hi, chunk, seed, fmt)
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="") as stream:
            _write_rows(stream, header)
            if checkpoint is not None:
                write_checkpoint(checkpoint, q_lo, q_hi, chunk, q_lo - 2)
            return _drive(table, report, agg, q_lo, chunk, workers, seed, stream, fmt, checkpoint)
    if sink is not None:
        _write_rows(sink, header)
    return _drive(table, report, agg, q_lo, chunk, workers, seed, sink, fmt, checkpoint)


def resume(checkpoint_path, sink, fmt="csv", workers=1, seed=0, expect=None, table=None):
    """Continue an interrupted scan from its checkpoint.

    Rows past the checkpoint are dropped, completed rows are re-read to
    rebuild the report, and scanning continues at ``checkpoint + 2``.
    ``expect`` is an optional ``(q_lo, q_hi, chunk)`` that must match.
    """
    q_lo, q_hi, chunk, last = read_checkpoint(checkpoint_path)
    if expect is not None and tuple(int(x) for x in expect) != (q_lo, q_hi, chunk):
        raise CheckpointMismatch(
            f"checkpoint is for ({q_lo}, {q_hi}, {chunk}), not {tuple(expect)}"
        )
    header = header_lines(q_lo, q_hi, chunk, seed, fmt)
    sink = Path(sink)
    try:
        raw = sink.read_bytes()
    except FileNotFoundError:
        if last != q_lo - 2:
            raise CorruptCheckpoint(f"{sink} is missing but checkpoint is at {last}")
        raw = b""
    text = raw.decode("utf-8")
    if not text.startswith(header) and not header.startswith(text):
        raise CheckpointMismatch(f"{sink} was written with a different configuration")

    report = ScanReport(q_lo, q_hi)
    agg = _Aggregate(report)
    keep = header
    if text.startswith(header):
        body = text[len(header):]
        expected = q_lo
        buf = io.StringIO()
        for line in body.splitlines(keepends=True):
            if expected > last:
                break
            try:
                (rec,) = parse_records([line], fmt)
            except (ValueError, TypeError, KeyError) as exc:
                raise CorruptCheckpoint(f"{sink}: unreadable row {line!r}") from exc
            if rec.q != expected:
                raise CorruptCheckpoint(f"{sink}: expected q={expected}, found {rec.q}")
            agg.add(rec)
            buf.write(line)
            expected += 2
        if expected <= last:
            raise CorruptCheckpoint(f"{sink} ends before checkpoint q={last}")
        keep += buf.getvalue()
    elif last != q_lo - 2:
        raise CorruptCheckpoint(f"{sink} lacks rows up to checkpoint q={last}")
    report.checkpoint = last

    if last >= q_hi:
        if len(keep) != len(text):
            sink.write_text(keep, encoding="utf-8")
        return report
    if table is None or table.limit < q_hi:
        table = build_table(q_hi)
    with open(sink, "w", encoding="utf-8", newline="") as stream:
        _write_rows(stream, keep)
        return _drive(table, report, agg, last + 2, chunk, max(int(workers), 1), seed,
                      stream, fmt, checkpoint_path)


def min_margin(q_lo, q_hi, table=None, chunk=DEFAULT_CHUNK):
    """``(q, goldbach_ordered - A)`` minimised over ``[q_lo, q_hi]``; ties go to smaller q."""
    q_lo, q_hi = int(q_lo), int(q_hi)
    if q_lo > q_hi:
        raise InvalidArgument(f"empty range [{q_lo}, {q_hi}]")
    return scan_range(q_lo, q_hi, chunk=chunk, table=table).min_margin
