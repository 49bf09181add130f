"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy fallback in ``_pykernels`` takes over. Set ``GOLDBACH_SIEVE_PURE=1`` to
force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("GOLDBACH_SIEVE_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
sieve_odd = _impl.sieve_odd
pair_counts = _impl.pair_counts
residue_mask = _impl.residue_mask
residue_scan = _impl.residue_scan


def available_backends():
    """Modules usable on this install, compiled first."""
    mods = []
    try:
        from . import _ckernels
        mods.append(_ckernels)
    except ImportError:
        pass
    mods.append(_pykernels)
    return mods
