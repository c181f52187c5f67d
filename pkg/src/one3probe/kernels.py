"""Engine selection: compiled extension vs pure-Python fallbacks.

The extension handles only values that fit in uint64 (encoding sums stay
below 2^64 whenever the clause count is at most 32); everything else runs on
the pure paths.  Set ONE3PROBE_PURE=1 to force pure Python throughout.
"""

from __future__ import annotations

import os

from . import _purekernel

try:
    from . import _kernel
except ImportError:  # extension not built
    _kernel = None

HAVE_KERNEL = _kernel is not None
FORCE_PURE = os.environ.get("ONE3PROBE_PURE", "0") not in ("", "0")
USE_KERNEL = HAVE_KERNEL and not FORCE_PURE

_U64_MAX = (1 << 64) - 1


def fits_u64(enc, t: int) -> bool:
    """True when every partial encoding sum and the target fit in uint64."""
    return sum(enc) <= _U64_MAX and t <= _U64_MAX


def kernel_usable_for(ef) -> bool:
    return HAVE_KERNEL and fits_u64(ef.enc, ef.target) and ef.k <= 62


def scan_one_in_three(k: int, clauses, engine: str = "auto") -> int:
    if engine == "kernel" or (engine == "auto" and USE_KERNEL and k <= 62):
        if _kernel is None:
            raise ValueError("compiled kernel unavailable")
        return _kernel.scan_one_in_three(k, list(clauses))
    return _purekernel.scan_one_in_three(k, list(clauses))


def scan_target_sum(k: int, enc, t: int, engine: str = "auto") -> int:
    usable = USE_KERNEL and k <= 62 and fits_u64(enc, t)
    if engine == "kernel" or (engine == "auto" and usable):
        if _kernel is None or not fits_u64(enc, t):
            raise ValueError("compiled kernel unavailable or values exceed uint64")
        return _kernel.scan_target_sum(k, list(enc), t)
    return _purekernel.scan_target_sum(k, list(enc), t)


def search_2dib(enc, k1, k2, t, lo_r, lo_c, hi_r, hi_c,
                repaired, paper_literal, call_budget, depth_budget):
    if _kernel is None:
        raise ValueError("compiled kernel unavailable")
    return _kernel.search_2dib(
        enc, k1, k2, t, lo_r, lo_c, hi_r, hi_c,
        repaired, paper_literal, call_budget, depth_budget,
    )
