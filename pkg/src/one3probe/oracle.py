"""Ground truth: exhaustive solving, matrix materialization, claim checkers.

Everything here is deliberately brute force so it stays auditable.  The two
exhaustive solvers take different routes on purpose: ``brute_force_one_in_three``
evaluates the exactly-one-true-literal predicate clause by clause, while
``target_membership`` scans encoding inner products for the target integer.
Their agreement is the end-to-end check of the target characterization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import kernels
from .encoding import CellIndex, EncodedFormula, matrix_value
from .formula import Assignment, PosCnf
from .preprocess import expand

#: Largest assignment space the exhaustive solvers will enumerate.
BRUTE_FORCE_MAX_VARS = 24

#: Largest matrix (in variables, i.e. log2 of the cell count) to materialize.
MATERIALIZE_MAX_VARS = 20


@dataclass(frozen=True)
class Verdict:
    holds: bool
    first_violation: Optional[dict] = None

    def __post_init__(self):
        if self.holds and self.first_violation is not None:
            raise ValueError("a holding verdict cannot carry a violation")


@dataclass
class MaterializedMatrix:
    rows: int
    cols: int
    cells: list[list[int]]  # cells[row][col]

    def cell(self, row: int, col: int) -> int:
        return self.cells[row][col]


def brute_force_one_in_three(
    f: PosCnf, allow_large: bool = False, engine: str = "auto"
) -> Optional[Assignment]:
    """Lexicographically smallest assignment giving every clause exactly one
    true literal (z_1 in the lowest bit), or None."""
    if f.num_vars > BRUTE_FORCE_MAX_VARS and not allow_large:
        raise ValueError(
            f"{f.num_vars} variables exceeds the {BRUTE_FORCE_MAX_VARS}-variable guard"
        )
    mask = kernels.scan_one_in_three(f.num_vars, f.clauses, engine=engine)
    return Assignment(mask, f.num_vars) if mask >= 0 else None


def target_membership(
    ef: EncodedFormula, allow_large: bool = False, engine: str = "auto"
) -> Optional[Assignment]:
    """Lexicographically smallest assignment whose inner product with the
    encoding vector equals the target, or None."""
    if ef.k > BRUTE_FORCE_MAX_VARS and not allow_large:
        raise ValueError(f"{ef.k} variables exceeds the {BRUTE_FORCE_MAX_VARS}-variable guard")
    mask = kernels.scan_target_sum(ef.k, ef.enc, ef.target, engine=engine)
    return Assignment(mask, ef.k) if mask >= 0 else None


def materialize(ef: EncodedFormula, allow_large: bool = False) -> MaterializedMatrix:
    """Dense matrix of all inner-product values, cell (row, col) holding the
    value of the assignment with row in the low k1 bits."""
    if ef.k > MATERIALIZE_MAX_VARS and not allow_large:
        raise ValueError(f"{ef.k} variables exceeds the {MATERIALIZE_MAX_VARS}-variable guard")
    # Subset-sum doubling: flat[mask] accumulates one variable per pass.
    flat = [0]
    for e in ef.enc:
        flat = flat + [v + e for v in flat]
    rows = 1 << ef.k1
    cols = 1 << ef.k2
    cells = [[flat[row | (col << ef.k1)] for col in range(cols)] for row in range(rows)]
    return MaterializedMatrix(rows=rows, cols=cols, cells=cells)


def check_sortedness(mm: MaterializedMatrix, strict: bool) -> Verdict:
    """Every row and column sorted ascending (strictly if ``strict``)."""
    for row in range(mm.rows):
        prev = None
        for col in range(mm.cols):
            v = mm.cells[row][col]
            if prev is not None and (prev > v or (strict and prev == v)):
                return Verdict(
                    holds=False,
                    first_violation={
                        "axis": "row",
                        "cell": (row, col),
                        "neighbor": (row, col - 1),
                        "value": v,
                        "neighbor_value": prev,
                    },
                )
            prev = v
    for col in range(mm.cols):
        prev = None
        for row in range(mm.rows):
            v = mm.cells[row][col]
            if prev is not None and (prev > v or (strict and prev == v)):
                return Verdict(
                    holds=False,
                    first_violation={
                        "axis": "column",
                        "cell": (row, col),
                        "neighbor": (row - 1, col),
                        "value": v,
                        "neighbor_value": prev,
                    },
                )
            prev = v
    return Verdict(holds=True)


def check_sortedness_allpairs(mm: MaterializedMatrix, strict: bool) -> bool:
    """Independent comparator: all pairs along each row/column.  Quadratic;
    use only on small matrices to validate check_sortedness itself."""
    for row in range(mm.rows):
        for c1 in range(mm.cols):
            for c2 in range(c1 + 1, mm.cols):
                a, b = mm.cells[row][c1], mm.cells[row][c2]
                if a > b or (strict and a == b):
                    return False
    for col in range(mm.cols):
        for r1 in range(mm.rows):
            for r2 in range(r1 + 1, mm.rows):
                a, b = mm.cells[r1][col], mm.cells[r2][col]
                if a > b or (strict and a == b):
                    return False
    return True


def check_equivalence(psi: PosCnf, allow_large: bool = False) -> Verdict:
    """1-in-3 satisfiability is preserved by the clause-block expansion."""
    exp = expand(psi)
    before = brute_force_one_in_three(psi, allow_large=allow_large)
    after = brute_force_one_in_three(exp.phi, allow_large=allow_large)
    if (before is None) == (after is None):
        return Verdict(holds=True)
    return Verdict(
        holds=False,
        first_violation={
            "input_satisfiable": before is not None,
            "expanded_satisfiable": after is not None,
        },
    )


def check_dominance(ef: EncodedFormula) -> Verdict:
    """Each encoding strictly exceeds the sum of all lower-indexed encodings,
    separately over the original indices [1, k1] and the auxiliary indices
    [k1+1, k]."""
    prefix = 0
    for l in range(2, ef.k1 + 1):
        prefix += ef.enc[l - 2]
        if ef.enc[l - 1] <= prefix:
            return Verdict(
                holds=False,
                first_violation={
                    "range": "original",
                    "index": l,
                    "encoding": ef.enc[l - 1],
                    "prefix_sum": prefix,
                },
            )
    prefix = 0
    for l in range(ef.k1 + 2, ef.k + 1):
        prefix += ef.enc[l - 2]
        if ef.enc[l - 1] <= prefix:
            return Verdict(
                holds=False,
                first_violation={
                    "range": "auxiliary",
                    "index": l,
                    "encoding": ef.enc[l - 1],
                    "prefix_sum": prefix,
                },
            )
    return Verdict(holds=True)
