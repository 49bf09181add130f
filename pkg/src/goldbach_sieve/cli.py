"""Command-line front end.

Exit status: 0 success, 1 violations found (scan only), 2 usage error.
Data goes to stdout (or ``--output``); diagnostics go to stderr.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bounds, partitions, scan
from .errors import CheckpointMismatch, CorruptCheckpoint, InvalidArgument, ScanAborted
from .primes import build_table

log = logging.getLogger("goldbach_sieve")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class _Emitter:
    """Writes a config echo plus rows in plain, csv or jsonl form."""

    def __init__(self, stream, fmt, command, **config):
        self.stream, self.fmt = stream, fmt
        if fmt == "jsonl":
            self._line(json.dumps({"config": {"command": command, **config}}))
        else:
            pairs = " ".join(f"{k}={v}" for k, v in config.items())
            self._line(f"# {command} {pairs} format={fmt}".replace("  ", " "))
        self._header_done = False

    def _line(self, text):
        self.stream.write(text + "\n")

    def row(self, fields, plain):
        """``fields`` is an ordered dict for csv/jsonl; ``plain`` the human line."""
        if self.fmt == "plain":
            self._line(plain)
        elif self.fmt == "jsonl":
            self._line(json.dumps(fields))
        else:
            if not self._header_done:
                self._line(",".join(fields))
                self._header_done = True
            self._line(",".join(_csv_cell(v) for v in fields.values()))


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return str(v)


def _frac(x):
    return f"{x.numerator}/{x.denominator}"


def cmd_table(args, out):
    if args.n1_max < 3 or args.prime_max < 3:
        raise InvalidArgument("table needs n1_max >= 3 and prime_max >= 3")
    primes = build_table(args.prime_max).prime_list[1:]
    em = _Emitter(out, args.format, "table", n1_max=args.n1_max, prime_max=args.prime_max)
    if args.format == "plain":
        em._line("# n1: " + " ".join(f"r({p})" for p in primes))
    for n1 in range(3, args.n1_max + 1, 2):
        row = partitions.residue_row(n1, primes).residues
        fields = {"n1": n1, **{f"r({p})": r for p, r in row.items()}}
        em.row(fields, f"{n1}: " + " ".join(str(r) for r in row.values()))
    return EXIT_OK


def cmd_count(args, out):
    prof = partitions.profile(args.q)
    em = _Emitter(out, args.format, "count", q=args.q)
    fields = dict(vars(prof))
    em.row(fields, " ".join(f"{k}={v}" for k, v in fields.items()))
    return EXIT_OK


def cmd_partitions(args, out):
    em = _Emitter(out, args.format, "partitions", q=args.q)
    for part in partitions.enumerate_partitions(args.q):
        fields = part._asdict()
        em.row(fields, " ".join(f"{k}={_csv_cell(v)}" for k, v in fields.items()))
    return EXIT_OK


def cmd_bound(args, out):
    bd = bounds.bound_A(args.q)
    em = _Emitter(out, args.format, "bound", q=args.q)
    fields = {
        "q": bd.q,
        "cutoff": ";".join(map(str, bd.cutoff)),
        "shrink_num": bd.shrink_product.numerator,
        "shrink_den": bd.shrink_product.denominator,
        "n": bd.n,
        "subtractive": bd.subtractive,
        "A_num": bd.A.numerator,
        "A_den": bd.A.denominator,
        "empty_cutoff": bd.empty_cutoff,
    }
    plain = (
        f"q={bd.q} cutoff={','.join(map(str, bd.cutoff)) or '-'} "
        f"shrink={_frac(bd.shrink_product)} n={bd.n} sub={bd.subtractive} A={_frac(bd.A)}"
    )
    if bd.empty_cutoff:
        plain += " (empty cutoff: A = n)"
    em.row(fields, plain)
    return EXIT_OK


def cmd_minima(args, out):
    if args.p_lo > args.p_hi or args.p_hi < 3:
        raise InvalidArgument(f"bad prime range [{args.p_lo}, {args.p_hi}]")
    em = _Emitter(out, args.format, "minima", p_lo=args.p_lo, p_hi=args.p_hi)
    for rec in bounds.minima_records(args.p_lo, args.p_hi):
        tel = rec.A_eq3bis
        fields = {
            "p_m": rec.p_m, "q": rec.q, "n": rec.n,
            "A_eq5_num": rec.A_eq5.numerator, "A_eq5_den": rec.A_eq5.denominator,
            "A_eq3bis_num": tel.numerator if tel is not None else None,
            "A_eq3bis_den": tel.denominator if tel is not None else None,
            "forms_agree": rec.forms_agree if tel is not None else None,
            "lower_num": rec.lower_chain.numerator, "lower_den": rec.lower_chain.denominator,
            "exceeds_lower": rec.exceeds_lower_chain if tel is not None else None,
        }
        plain = f"p_m={rec.p_m} q={rec.q} n={rec.n} A_eq5={_frac(rec.A_eq5)}"
        if tel is None:
            plain += " A_eq3bis=- (telescoped form needs p_m >= 11)"
        else:
            plain += (
                f" A_eq3bis={_frac(tel)} forms_agree={_csv_cell(rec.forms_agree)}"
                f" lower={_frac(rec.lower_chain)}"
            )
            verdict = "exceeds" if rec.exceeds_lower_chain else "does NOT exceed"
            plain += f" {verdict} 2 - 1/{rec.p_m}"
        em.row(fields, plain)
    return EXIT_OK


def cmd_scan(args, out):
    fmt = "csv" if args.format == "plain" else args.format
    if args.checkpoint and not args.output:
        raise InvalidArgument("--checkpoint requires --output")
    table = build_table(max(args.q_hi, 4))
    ck = Path(args.checkpoint) if args.checkpoint else None
    if ck is not None and ck.exists():
        log.info("resuming from %s", ck)
        report = scan.resume(ck, args.output, fmt=fmt, workers=args.workers, seed=args.seed,
                             expect=(args.q_lo, args.q_hi, args.chunk), table=table)
    else:
        report = scan.scan_range(
            args.q_lo, args.q_hi, chunk=args.chunk, workers=args.workers,
            sink=args.output if args.output else out, fmt=fmt,
            checkpoint=ck, seed=args.seed, table=table,
        )
    mq, mval = report.min_margin
    print(
        f"records: {report.records_written}  violations: {len(report.violations)}  "
        f"soundness_violations: {len(report.soundness_violations)}  "
        f"min_margin: q={mq} margin={_frac(mval)}",
        file=sys.stderr,
    )
    if report.min_margin_bounded is not None:
        bq, bval = report.min_margin_bounded
        print(f"min_margin (q >= 12): q={bq} margin={_frac(bval)}", file=sys.stderr)
    for q in report.violations[:20]:
        print(f"violation: q={q}", file=sys.stderr)
    for q in report.soundness_violations[:20]:
        print(f"soundness violation: q={q}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _even(text):
    v = int(text)
    if v % 2:
        raise argparse.ArgumentTypeError(f"{v} is not even")
    return v


def _add_common(p, defaults=True):
    # subcommand copies use SUPPRESS so they never clobber flags given earlier
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--format", choices=("plain", "csv", "jsonl"), default=d("plain"))
    p.add_argument("--output", default=d(None), help="write data here instead of stdout")
    p.add_argument("--workers", type=int, default=d(1))
    p.add_argument("--seed", type=int, default=d(0), help="soundness sampling seed")
    p.add_argument("--checkpoint", default=d(None), help="checkpoint file (scan only)")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return p


def build_parser():
    common = _add_common(argparse.ArgumentParser(add_help=False), defaults=False)
    parser = _add_common(argparse.ArgumentParser(
        prog="goldbach-sieve",
        description="Goldbach partitions, residue admissibility and the conjectured bound.",
    ))
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("table", parents=[common], help="residues of odd n1 modulo odd primes")
    p.add_argument("n1_max", type=int)
    p.add_argument("prime_max", type=int)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("count", parents=[common], help="partition profile of q")
    p.add_argument("q", type=_even)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("partitions", parents=[common], help="list candidate partitions of q")
    p.add_argument("q", type=_even)
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("bound", parents=[common], help="exact conjectured bound for q")
    p.add_argument("q", type=_even)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("minima", parents=[common], help="bound at q = p^2 + 3 per prime")
    p.add_argument("p_lo", type=int)
    p.add_argument("p_hi", type=int)
    p.set_defaults(func=cmd_minima)

    p = sub.add_parser("scan", parents=[common], help="audit every even q in a range")
    p.add_argument("q_lo", type=_even)
    p.add_argument("q_hi", type=_even)
    p.add_argument("--chunk", type=_even, default=scan.DEFAULT_CHUNK,
                   help="integers per work unit (default %(default)s)")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.output and args.cmd != "scan":
            with open(args.output, "w", encoding="utf-8", newline="") as out:
                return args.func(args, out)
        return args.func(args, sys.stdout)
    except (InvalidArgument, CheckpointMismatch, CorruptCheckpoint) as exc:
        print(f"goldbach-sieve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScanAborted as exc:
        print(f"goldbach-sieve: aborted: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
