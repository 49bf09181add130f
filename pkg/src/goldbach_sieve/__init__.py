"""Goldbach partitions through residue sieving, with exact bound auditing."""

from .bounds import (
    BoundBreakdown,
    MinimaRecord,
    bound_A,
    bound_A_three,
    bound_A_three_five,
    five_fraction_product,
    minima_lower_chain,
    minima_record,
    minima_records,
    shrink_product,
)
from .kernels import BACKEND
from .partitions import (
    PartitionProfile,
    admissible_count,
    bad_residues,
    enumerate_partitions,
    goldbach_count,
    is_admissible,
    is_prime_pair,
    odd_partition_count,
    profile,
    residue_row,
)
from .primes import (
    PrimeTable,
    Segment,
    build_table,
    cutoff_primes_for_bound,
    cutoff_primes_for_predicate,
    sieve_segment,
)
from .scan import ScanRecord, ScanReport, min_margin, resume, scan_range

__version__ = "0.1.0"
