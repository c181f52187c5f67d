"""Pure-Python twins of the compiled scan kernels.

These are deliberately plain enumeration loops so they stay auditable; the
compiled versions in ``_kernel`` must agree with them bit for bit (checked
by the kernel test suite).
"""

from __future__ import annotations


def scan_one_in_three(k: int, clauses: list[tuple[int, int, int]]) -> int:
    """Smallest assignment mask giving every clause exactly one true
    literal, or -1 if none exists."""
    shifted = [(a - 1, b - 1, c - 1) for (a, b, c) in clauses]
    for n in range(1 << k):
        ok = True
        for a, b, c in shifted:
            if ((n >> a) & 1) + ((n >> b) & 1) + ((n >> c) & 1) != 1:
                ok = False
                break
        if ok:
            return n
    return -1


def scan_target_sum(k: int, enc: list[int], t: int) -> int:
    """Smallest assignment mask whose encoding inner product equals t,
    or -1 if none exists."""
    for n in range(1 << k):
        total = 0
        rest = n
        i = 0
        while rest:
            if rest & 1:
                total += enc[i]
            rest >>= 1
            i += 1
        if total == t:
            return n
    return -1
