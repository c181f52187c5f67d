"""Base-4 occurrence encodings and the implicit assignment matrix.

Each variable z_i of a formula is encoded as the integer whose base-4 digit j
(1-based from the least significant end) is 1 iff z_i occurs in clause C_j.
The inner product of an assignment bit vector with the encoding vector then
carries, digit by digit, the number of true literals in each clause; an
assignment hits the all-ones target exactly when every clause has exactly one
true literal.  All arithmetic is exact (Python integers).

Assignments are identified with cells of a 2^{k1} x 2^{k2} matrix: the first
k1 assignment bits are the row index, the remaining k2 bits the column index
(little-endian in the variable index).  The matrix is never materialized
here; ``matrix_value`` is the sole cell accessor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .formula import Assignment, PosCnf


class CellIndex(NamedTuple):
    row: int
    col: int


class Rect(NamedTuple):
    """Inclusive axis-aligned rectangle of matrix cells."""

    lo: CellIndex
    hi: CellIndex

    @property
    def row_extent(self) -> int:
        return self.hi.row - self.lo.row

    @property
    def col_extent(self) -> int:
        return self.hi.col - self.lo.col


@dataclass(frozen=True)
class EncodedFormula:
    """Occurrence-encoding vector plus search target and row/column split.

    ``enc[i-1]`` is the encoding of z_i; ``target`` is the all-ones base-4
    integer of length m; k1 + k2 variables split the assignment into row
    (low k1 bits) and column (high k2 bits) coordinates.
    """

    enc: tuple[int, ...]
    target: int
    k1: int
    k2: int
    m: int

    @property
    def k(self) -> int:
        return self.k1 + self.k2

    def full_rect(self) -> Rect:
        return Rect(CellIndex(0, 0), CellIndex((1 << self.k1) - 1, (1 << self.k2) - 1))


def base4_digits(n: int, length: int) -> tuple[int, ...]:
    """Digits d_1..d_length of n in base 4, least significant first."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    digits = []
    rest = n
    for _ in range(length):
        digits.append(rest & 3)
        rest >>= 2
    if rest:
        raise ValueError(f"length {length} too small for {n}")
    return tuple(digits)


def base4_zone(n: int, l: int, u: int, length: int) -> tuple[int, ...]:
    """Digits d_l..d_u of the length-``length`` base-4 representation of n."""
    if not 1 <= l <= u <= length:
        raise ValueError(f"zone bounds ({l}, {u}) invalid for length {length}")
    return base4_digits(n, length)[l - 1:u]


def occurrence_encoding(f: PosCnf, i: int) -> int:
    """The base-4 occurrence encoding of variable z_i in f."""
    if not 1 <= i <= f.num_vars:
        raise ValueError(f"variable index {i} out of range [1, {f.num_vars}]")
    return sum(1 << (2 * j) for j, clause in enumerate(f.clauses) if i in clause)


def encode_formula(f: PosCnf, k1: int) -> EncodedFormula:
    """Encode every variable of f; k1 of the variables are row coordinates."""
    if not 0 <= k1 <= f.num_vars:
        raise ValueError(f"k1={k1} out of range [0, {f.num_vars}]")
    m = f.num_clauses
    return EncodedFormula(
        enc=tuple(occurrence_encoding(f, i) for i in range(1, f.num_vars + 1)),
        target=((1 << (2 * m)) - 1) // 3,
        k1=k1,
        k2=f.num_vars - k1,
        m=m,
    )


def assignment_value(sigma: Assignment, ef: EncodedFormula) -> int:
    """Inner product of the assignment bit vector with the encoding vector."""
    if sigma.num_vars != ef.k:
        raise ValueError(f"assignment has {sigma.num_vars} bits, formula has {ef.k}")
    total = 0
    mask = sigma.mask
    i = 0
    while mask:
        if mask & 1:
            total += ef.enc[i]
        mask >>= 1
        i += 1
    return total


def index_to_assignment(c: CellIndex, k1: int, k2: int) -> Assignment:
    """Decode a cell into the assignment whose low k1 bits are the row."""
    if not (0 <= c.row < (1 << k1) and 0 <= c.col < (1 << k2)):
        raise ValueError(f"cell {c} out of bounds for split ({k1}, {k2})")
    return Assignment(mask=c.row | (c.col << k1), num_vars=k1 + k2)


def assignment_to_index(sigma: Assignment, k1: int) -> CellIndex:
    """Inverse of index_to_assignment."""
    if sigma.num_vars < k1:
        raise ValueError(f"assignment has {sigma.num_vars} bits, need at least {k1}")
    return CellIndex(row=sigma.mask & ((1 << k1) - 1), col=sigma.mask >> k1)


def matrix_value(c: CellIndex, ef: EncodedFormula) -> int:
    """Value of one cell of the implicit matrix."""
    return assignment_value(index_to_assignment(c, ef.k1, ef.k2), ef)
