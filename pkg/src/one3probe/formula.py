"""Positive 3CNF formulas: data model, validation, text format, generation.

A formula is a conjunction C_m ∧ ... ∧ C_1 of clauses, each an ordered triple
of distinct positive literals.  Clauses are stored indexed by clause number:
``clauses[j]`` is C_{j+1}, so C_1 (the rightmost conjunct) sits at index 0.
The p3cnf text format lists C_m first; the parser/serializer reverse between
the two conventions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

Clause = tuple[int, int, int]

#: Default cap on clause count used by exhaustive enumeration.
DEFAULT_CLAUSE_CAP = 4

#: Largest variable count accepted by enumerate_small.
ENUMERATE_MAX_VARS = 6


class ParseError(ValueError):
    """Raised on malformed p3cnf input; carries 1-based line/column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class PosCnf:
    """A positive 3CNF formula over variables z_1 .. z_{num_vars}.

    ``clauses[j]`` is clause C_{j+1}; literals are kept in display order
    (leftmost literal first), so after normalization ``clauses[j][0]`` is the
    largest variable index in the clause.
    """

    clauses: tuple[Clause, ...]
    num_vars: int

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def clause(self, j: int) -> Clause:
        """Clause C_j (1-based)."""
        return self.clauses[j - 1]


@dataclass(frozen=True)
class Assignment:
    """A total truth assignment as a bit mask: bit i-1 holds the value of z_i."""

    mask: int
    num_vars: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.num_vars:
            raise ValueError(f"mask {self.mask:#x} out of range for {self.num_vars} variables")

    def value(self, i: int) -> int:
        """Value assigned to z_i (1-based)."""
        return (self.mask >> (i - 1)) & 1

    def true_vars(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.num_vars + 1) if self.value(i))

    def bits(self) -> tuple[int, ...]:
        return tuple(self.value(i) for i in range(1, self.num_vars + 1))

    @classmethod
    def from_true_vars(cls, true_vars, num_vars: int) -> "Assignment":
        mask = 0
        for i in true_vars:
            mask |= 1 << (i - 1)
        return cls(mask, num_vars)


def parse_pos3cnf(text: str) -> PosCnf:
    """Parse p3cnf text into a PosCnf.

    Format: header ``p p3cnf <k> <m>``, then m body lines of three
    space-separated positive integers, listed C_m down to C_1.  Lines
    starting with ``c`` are comments.  A trailing newline is required.
    """
    if not text.endswith("\n"):
        raise ParseError("missing trailing newline", max(1, text.count("\n") + 1))
    header: Optional[tuple[int, int]] = None
    body: list[Clause] = []
    for lineno, line in enumerate(text.split("\n")[:-1], start=1):
        if line.startswith("c"):
            continue
        if line.strip() == "":
            raise ParseError("blank line", lineno)
        tokens = line.split()
        if header is None:
            if tokens[:2] != ["p", "p3cnf"] or len(tokens) != 4:
                raise ParseError("expected header 'p p3cnf <k> <m>'", lineno)
            try:
                k, m = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise ParseError("non-integer header field", lineno) from None
            if k < 0 or m < 0:
                raise ParseError("negative header field", lineno)
            if m < 1:
                raise ParseError("fewer than 1 clause declared", lineno)
            header = (k, m)
            continue
        if len(tokens) != 3:
            raise ParseError(f"clause has {len(tokens)} literals, expected 3", lineno)
        lits = []
        col = 1
        for tok in tokens:
            col = line.index(tok, col - 1) + 1
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"bad literal token {tok!r}", lineno, col) from None
            if v <= 0:
                raise ParseError(f"non-positive literal {v}", lineno, col)
            if v > header[0]:
                raise ParseError(f"literal {v} exceeds declared variable count {header[0]}", lineno, col)
            lits.append(v)
        if len(set(lits)) != 3:
            raise ParseError("duplicate variable in clause", lineno)
        body.append((lits[0], lits[1], lits[2]))
    if header is None:
        raise ParseError("missing header", 1)
    k, m = header
    if len(body) != m:
        raise ParseError(f"header declares {m} clauses, body has {len(body)}", 1)
    # Body lists C_m first; storage is C_1 first.
    return PosCnf(clauses=tuple(reversed(body)), num_vars=k)


def serialize(f: PosCnf) -> str:
    """Serialize to p3cnf text; round-trips bit-exactly through parse_pos3cnf."""
    lines = [f"p p3cnf {f.num_vars} {f.num_clauses}"]
    for clause in reversed(f.clauses):
        lines.append(" ".join(str(v) for v in clause))
    return "\n".join(lines) + "\n"


def validate(f: PosCnf) -> list[str]:
    """Check the structural assumptions; returns violation descriptions.

    An empty list means the formula is acceptable to every pipeline entry
    point.  Violations are data, not exceptions, so robustness probing can
    construct bad instances deliberately.
    """
    violations = []
    if f.num_clauses < 2:
        violations.append(f"formula has {f.num_clauses} clause(s), need at least 2")
    seen_combos: dict[frozenset, int] = {}
    used: set[int] = set()
    for j, clause in enumerate(f.clauses, start=1):
        if len(set(clause)) != 3:
            violations.append(f"clause C_{j} {clause} repeats a variable")
        for v in clause:
            if not 1 <= v <= f.num_vars:
                violations.append(f"clause C_{j} variable {v} outside [1, {f.num_vars}]")
            used.add(v)
        combo = frozenset(clause)
        if combo in seen_combos:
            violations.append(
                f"duplicate variable combination in C_{seen_combos[combo]} and C_{j}"
            )
        else:
            seen_combos[combo] = j
    for i in range(1, f.num_vars + 1):
        if i not in used:
            violations.append(f"index gap at {i}: variable never occurs")
    return violations


def require_valid(f: PosCnf) -> None:
    """Raise ValueError if the formula violates any structural assumption."""
    violations = validate(f)
    if violations:
        raise ValueError("invalid formula: " + "; ".join(violations))


def generate_random(k1: int, m1: int, seed: int) -> PosCnf:
    """Deterministically generate a valid random formula with k1 variables
    and m1 clauses.  Raises ValueError on infeasible parameters."""
    if k1 < 3:
        raise ValueError("k1 must be at least 3")
    if m1 < 2:
        raise ValueError("m1 must be at least 2")
    n_triples = k1 * (k1 - 1) * (k1 - 2) // 6
    if m1 > n_triples:
        raise ValueError(f"m1={m1} exceeds the {n_triples} distinct variable triples of k1={k1}")
    if 3 * m1 < k1:
        raise ValueError(f"m1={m1} clauses cannot cover k1={k1} variables")
    rng = random.Random(seed)
    all_triples = list(itertools.combinations(range(1, k1 + 1), 3))
    chosen: Optional[list[tuple[int, int, int]]] = None
    for _ in range(200):
        sample = rng.sample(all_triples, m1)
        if len({v for t in sample for v in t}) == k1:
            chosen = sample
            break
    if chosen is None:
        # Constructive fallback: cover variables in shuffled blocks of 3,
        # then fill with unused random triples.
        order = list(range(1, k1 + 1))
        rng.shuffle(order)
        cover = []
        for start in range(0, k1, 3):
            block = order[start:start + 3]
            while len(block) < 3:
                extra = rng.choice([v for v in order if v not in block])
                block.append(extra)
            cover.append(tuple(sorted(block)))
        cover = list(dict.fromkeys(cover))
        pool = [t for t in all_triples if t not in set(cover)]
        chosen = cover + rng.sample(pool, m1 - len(cover))
    clauses = []
    for triple in chosen:
        lits = list(triple)
        rng.shuffle(lits)
        clauses.append((lits[0], lits[1], lits[2]))
    rng.shuffle(clauses)
    f = PosCnf(clauses=tuple(clauses), num_vars=k1)
    require_valid(f)
    return f


def canonical_form(f: PosCnf) -> PosCnf:
    """Literals descending within each clause, clauses in sorted order."""
    triples = sorted(tuple(sorted(c, reverse=True)) for c in f.clauses)
    return PosCnf(clauses=tuple(triples), num_vars=f.num_vars)


def enumerate_small(k1_max: int, clause_cap: int = DEFAULT_CLAUSE_CAP) -> Iterator[PosCnf]:
    """Yield every valid formula (in canonical form) with at most k1_max
    variables and at most clause_cap clauses, without duplicates."""
    if k1_max > ENUMERATE_MAX_VARS:
        raise ValueError(f"k1_max={k1_max} exceeds the guard of {ENUMERATE_MAX_VARS}")
    for k in range(3, k1_max + 1):
        triples = [tuple(sorted(t, reverse=True)) for t in itertools.combinations(range(1, k + 1), 3)]
        for m in range(2, clause_cap + 1):
            if m > len(triples):
                break
            for combo in itertools.combinations(triples, m):
                if len({v for t in combo for v in t}) == k:
                    yield PosCnf(clauses=tuple(sorted(combo)), num_vars=k)
