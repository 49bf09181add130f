class InvalidArgument(ValueError):
    pass


class InsufficientBasePrimes(ValueError):
    """The table is too small to certify primality over the requested range."""


class OutOfStatedScope(UserWarning):
    """A bound was evaluated below the q range it was stated for."""


class CorruptCheckpoint(ValueError):
    pass


class CheckpointMismatch(ValueError):
    """Checkpoint belongs to a scan with different range parameters."""


class ScanAborted(RuntimeError):
    """The sink failed mid-scan; the checkpoint still marks the last good chunk."""
