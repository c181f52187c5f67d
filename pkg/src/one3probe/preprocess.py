"""Formula expansion: ranking, literal ordering, auxiliary-clause gadgets.

The pipeline renames variables so occurrence encodings are nondecreasing,
sorts literals within each clause by descending index, and then replaces each
clause C_i with a block of four: the original clause plus three gadget
clauses over three fresh auxiliary variables.  The expanded formula has
4*m1 clauses and k1 + 3*m1 variables, and is 1-in-3-satisfiable iff the
input is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .encoding import EncodedFormula, encode_formula, occurrence_encoding
from .formula import Assignment, PosCnf, require_valid


@dataclass(frozen=True)
class ExpansionResult:
    """Expanded formula plus everything the matrix search needs.

    ``rename[i-1]`` is the new index of old variable z_i (a bijection on
    [1, k1]), retained so witnesses can be mapped back to the input's
    variable names.
    """

    phi: PosCnf
    ef: EncodedFormula
    rename: tuple[int, ...]
    k1: int
    k2: int
    m: int
    m1: int


def rank_variables(psi: PosCnf) -> tuple[int, ...]:
    """Permutation pi with pi[i-1] = new index of z_i, such that occurrence
    encodings are nondecreasing in the new index.  Ties break by original
    index (stable)."""
    order = sorted(range(1, psi.num_vars + 1), key=lambda i: (occurrence_encoding(psi, i), i))
    rename = [0] * psi.num_vars
    for new_index, old_index in enumerate(order, start=1):
        rename[old_index - 1] = new_index
    return tuple(rename)


def apply_rename(psi: PosCnf, rename: tuple[int, ...]) -> PosCnf:
    clauses = tuple(
        (rename[a - 1], rename[b - 1], rename[c - 1]) for (a, b, c) in psi.clauses
    )
    return PosCnf(clauses=clauses, num_vars=psi.num_vars)


def normalize_clause_order(psi: PosCnf) -> PosCnf:
    """Sort literals within each clause by descending variable index."""
    clauses = tuple(tuple(sorted(c, reverse=True)) for c in psi.clauses)
    return PosCnf(clauses=clauses, num_vars=psi.num_vars)


def expand(psi: PosCnf) -> ExpansionResult:
    """Rank, normalize, and expand psi into the 4*m1-clause formula."""
    require_valid(psi)
    k1 = psi.num_vars
    m1 = psi.num_clauses
    rename = rank_variables(psi)
    base = normalize_clause_order(apply_rename(psi, rename))
    clauses: list[tuple[int, int, int]] = [(0, 0, 0)] * (4 * m1)
    for i in range(1, m1 + 1):
        hi3, hi2, _hi1 = base.clause(i)
        a3 = k1 + 3 * i      # auxiliary block for clause i
        a2 = k1 + 3 * i - 1
        a1 = k1 + 3 * i - 2
        clauses[4 * i - 4] = base.clause(i)       # C_{4i-3}
        clauses[4 * i - 3] = (a3, hi3, hi2)       # C_{4i-2}
        clauses[4 * i - 2] = (a3, a1, hi2)        # C_{4i-1}
        clauses[4 * i - 1] = (a3, a2, hi3)        # C_{4i}
    phi = PosCnf(clauses=tuple(clauses), num_vars=k1 + 3 * m1)
    ef = encode_formula(phi, k1)
    return ExpansionResult(
        phi=phi, ef=ef, rename=rename, k1=k1, k2=3 * m1, m=4 * m1, m1=m1
    )


def preprocess(psi: PosCnf) -> ExpansionResult:
    """Full pipeline entry point (validation included)."""
    return expand(psi)


def lift_witness(exp: ExpansionResult, sigma_psi: Assignment) -> Assignment:
    """Extend a 1-in-3 witness of the (renamed) input to the expanded formula.

    For clause block i with literals (pos3, pos2, pos1), the auxiliary triple
    (a3, a2, a1) = (z_{k1+3i}, z_{k1+3i-1}, z_{k1+3i-2}) is set to (1,0,0),
    (0,1,0), or (0,0,1) according to whether the true literal of C_i sits at
    position 1, 2, or 3.  ``sigma_psi`` is over the renamed variables
    z_1..z_k1.
    """
    k1 = exp.k1
    mask = sigma_psi.mask
    for i in range(1, exp.m1 + 1):
        hi3, hi2, hi1 = exp.phi.clause(4 * i - 3)
        a1 = k1 + 3 * i - 2
        a2 = k1 + 3 * i - 1
        a3 = k1 + 3 * i
        if sigma_psi.value(hi1):
            mask |= 1 << (a3 - 1)
        elif sigma_psi.value(hi2):
            mask |= 1 << (a2 - 1)
        elif sigma_psi.value(hi3):
            mask |= 1 << (a1 - 1)
        else:
            raise ValueError(f"clause block {i} has no true literal to lift")
    return Assignment(mask=mask, num_vars=exp.phi.num_vars)


def rename_witness_to_original(exp: ExpansionResult, witness: Assignment) -> Assignment:
    """Restrict an expanded-formula witness to the original k1 variables,
    in the input's original numbering."""
    mask = 0
    for old in range(1, exp.k1 + 1):
        if witness.value(exp.rename[old - 1]):
            mask |= 1 << (old - 1)
    return Assignment(mask=mask, num_vars=exp.k1)
