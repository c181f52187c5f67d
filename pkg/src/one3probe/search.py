"""Recursive three-quadrant search over the implicit assignment matrix.

Each call evaluates the cell at the rectangle midpoint and, depending on
whether the target is below or above that candidate value, recurses into the
three quadrants that could still contain the target (assuming rows and
columns are sorted).  Two variants are shipped:

* ``faithful`` keeps the published control flow bit for bit, including its
  base case that rejects any rectangle with both extents <= 1 *without
  probing its cells*.
* ``repaired`` differs only in probing the up-to-4 cells of such terminal
  rectangles and in reconstructing a witness assignment on success.

Two candidate decodings are selectable: ``f_consistent`` packs the row into
the low k1 bits of the probed assignment (matching the cell-to-assignment
bijection), while ``paper_literal`` computes r = 2^k1 * row + col exactly as
printed in the published pseudocode, which disagrees with the bijection
whenever row and col are not symmetric under the bit-swap.

The pure-Python recursion here is the reference; a compiled twin in
``_kernel`` is used automatically when available (see ``kernels``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from . import kernels
from .encoding import EncodedFormula, Rect
from .formula import Assignment, PosCnf
from .preprocess import ExpansionResult, preprocess, rename_witness_to_original

MODES = ("faithful", "repaired")
R_DECODES = ("f_consistent", "paper_literal")
ENGINES = ("auto", "pure", "kernel")

DEFAULT_CALL_BUDGET = 10_000_000


@dataclass(frozen=True)
class SearchConfig:
    mode: str = "repaired"
    r_decode: str = "f_consistent"
    call_budget: int = DEFAULT_CALL_BUDGET
    depth_budget: Optional[int] = None  # None: 4 * (k1 + k2) at run time

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.r_decode not in R_DECODES:
            raise ValueError(f"unknown r_decode {self.r_decode!r}")
        if self.call_budget < 1:
            raise ValueError("call_budget must be >= 1")
        if self.depth_budget is not None and self.depth_budget < 1:
            raise ValueError("depth_budget must be >= 1")

    def resolved_depth_budget(self, ef: EncodedFormula) -> int:
        return self.depth_budget if self.depth_budget is not None else 4 * ef.k


@dataclass
class SearchStats:
    calls: int = 0
    max_depth: int = 0
    cells_evaluated: int = 0
    budget_exhausted: bool = False


@dataclass
class SearchResult:
    found: bool
    witness: Optional[Assignment]
    stats: SearchStats


class TraceRow(NamedTuple):
    """One line of the per-call trace: rectangle, candidate, branch taken."""

    depth: int
    lo_row: int
    lo_col: int
    hi_row: int
    hi_col: int
    r: Optional[int]
    s: Optional[int]
    branch: str


def candidate(rect: Rect, ef: EncodedFormula, decode: str = "f_consistent") -> tuple[int, int]:
    """The (r, s) pair probed at the midpoint of ``rect``.

    r is the probed assignment mask; s is the corresponding inner-product
    value.  Under ``paper_literal`` the row is packed into the *high* bits.
    """
    _check_rect(rect, ef)
    if decode not in R_DECODES:
        raise ValueError(f"unknown r_decode {decode!r}")
    mid_row = (rect.lo.row + rect.hi.row) // 2
    mid_col = (rect.lo.col + rect.hi.col) // 2
    if decode == "paper_literal":
        r = (mid_row << ef.k1) + mid_col
    else:
        r = mid_row | (mid_col << ef.k1)
    return r, _mask_value(r, ef.enc)


def _mask_value(mask: int, enc: tuple[int, ...]) -> int:
    total = 0
    i = 0
    while mask:
        if mask & 1:
            total += enc[i]
        mask >>= 1
        i += 1
    return total


def _check_rect(rect: Rect, ef: EncodedFormula) -> None:
    if not (
        0 <= rect.lo.row <= rect.hi.row < (1 << ef.k1)
        and 0 <= rect.lo.col <= rect.hi.col < (1 << ef.k2)
    ):
        raise ValueError(f"rectangle {rect} out of bounds for split ({ef.k1}, {ef.k2})")


def two_dib_search(
    ef: EncodedFormula,
    rect: Optional[Rect] = None,
    cfg: Optional[SearchConfig] = None,
    trace: Optional[list[TraceRow]] = None,
    engine: str = "auto",
) -> SearchResult:
    """Run the two-dimensional implicit binary search over ``rect``.

    ``trace``, if a list, receives one TraceRow per call (forces the pure
    engine).  ``engine`` selects the compiled kernel, the pure recursion, or
    automatic routing.
    """
    if cfg is None:
        cfg = SearchConfig()
    if rect is None:
        rect = ef.full_rect()
    _check_rect(rect, ef)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    use_kernel = kernels.kernel_usable_for(ef) and trace is None
    if engine == "kernel" and not use_kernel:
        raise ValueError("compiled kernel unavailable or not applicable here")
    if engine == "auto":
        engine = "kernel" if (use_kernel and kernels.USE_KERNEL) else "pure"
    if engine == "kernel":
        return _search_kernel(ef, rect, cfg)
    return _search_pure(ef, rect, cfg, trace)


def _search_kernel(ef: EncodedFormula, rect: Rect, cfg: SearchConfig) -> SearchResult:
    found, witness_mask, calls, max_depth, cells, exhausted = kernels.search_2dib(
        list(ef.enc),
        ef.k1,
        ef.k2,
        ef.target,
        rect.lo.row,
        rect.lo.col,
        rect.hi.row,
        rect.hi.col,
        cfg.mode == "repaired",
        cfg.r_decode == "paper_literal",
        cfg.call_budget,
        cfg.resolved_depth_budget(ef),
    )
    stats = SearchStats(calls, max_depth, cells, bool(exhausted))
    witness = Assignment(witness_mask, ef.k) if witness_mask >= 0 else None
    return SearchResult(found=bool(found), witness=witness, stats=stats)


def _search_pure(
    ef: EncodedFormula,
    rect: Rect,
    cfg: SearchConfig,
    trace: Optional[list[TraceRow]],
) -> SearchResult:
    enc = ef.enc
    t = ef.target
    k1 = ef.k1
    repaired = cfg.mode == "repaired"
    paper_literal = cfg.r_decode == "paper_literal"
    depth_budget = cfg.resolved_depth_budget(ef)
    stats = SearchStats()
    witness: list[Optional[Assignment]] = [None]

    def emit(depth, lo_r, lo_c, hi_r, hi_c, r, s, branch):
        if trace is not None:
            trace.append(TraceRow(depth, lo_r, lo_c, hi_r, hi_c, r, s, branch))

    def rec(lo_r: int, lo_c: int, hi_r: int, hi_c: int, depth: int) -> bool:
        stats.calls += 1
        if stats.calls > cfg.call_budget or depth > depth_budget:
            stats.budget_exhausted = True
            return False
        if depth > stats.max_depth:
            stats.max_depth = depth
        if hi_r - lo_r <= 1 and hi_c - lo_c <= 1:
            if not repaired:
                emit(depth, lo_r, lo_c, hi_r, hi_c, None, None, "reject")
                return False
            for row in range(lo_r, hi_r + 1):
                for col in range(lo_c, hi_c + 1):
                    stats.cells_evaluated += 1
                    mask = row | (col << k1)
                    if _mask_value(mask, enc) == t:
                        witness[0] = Assignment(mask, ef.k)
                        emit(depth, lo_r, lo_c, hi_r, hi_c, mask, t, "probe_hit")
                        return True
            emit(depth, lo_r, lo_c, hi_r, hi_c, None, None, "probe_miss")
            return False
        mid_r = (lo_r + hi_r) // 2
        mid_c = (lo_c + hi_c) // 2
        up_r = (lo_r + hi_r + 1) // 2
        up_c = (lo_c + hi_c + 1) // 2
        if paper_literal:
            r = (mid_r << k1) + mid_c
        else:
            r = mid_r | (mid_c << k1)
        s = _mask_value(r, enc)
        stats.cells_evaluated += 1
        if s == t:
            emit(depth, lo_r, lo_c, hi_r, hi_c, r, s, "found")
            if repaired:
                witness[0] = Assignment(r, ef.k)
            return True
        wide_r = hi_r - lo_r >= 2
        wide_c = hi_c - lo_c >= 2
        if t < s:
            emit(depth, lo_r, lo_c, hi_r, hi_c, r, s, "low")
            if wide_r and wide_c:
                children = (
                    (lo_r, lo_c, mid_r, mid_c),
                    (lo_r, up_c, mid_r, hi_c),
                    (up_r, lo_c, hi_r, mid_c),
                )
            elif not wide_r:
                children = ((lo_r, lo_c, hi_r, mid_c),)
            else:
                children = ((lo_r, lo_c, mid_r, hi_c),)
        else:
            emit(depth, lo_r, lo_c, hi_r, hi_c, r, s, "high")
            if wide_r and wide_c:
                children = (
                    (lo_r, up_c, mid_r, hi_c),
                    (up_r, lo_c, hi_r, mid_c),
                    (up_r, up_c, hi_r, hi_c),
                )
            elif not wide_r:
                children = ((lo_r, up_c, hi_r, hi_c),)
            else:
                children = ((up_r, lo_c, hi_r, hi_c),)
        for child in children:
            if rec(child[0], child[1], child[2], child[3], depth + 1):
                return True
            if stats.budget_exhausted:
                return False
        return False

    found = rec(rect.lo.row, rect.lo.col, rect.hi.row, rect.hi.col, 1)
    if stats.budget_exhausted:
        found = False
        witness[0] = None
    return SearchResult(found=found, witness=witness[0], stats=stats)


@dataclass
class SolveResult:
    """Decision for an input formula plus reporting metadata.

    The witness, when present, is reported both over the expanded formula's
    variables and restricted to the input's original variable numbering,
    with auxiliary true variables listed separately.
    """

    found: bool
    witness: Optional[Assignment]
    witness_original: Optional[Assignment]
    aux_true_vars: Optional[tuple[int, ...]]
    stats: SearchStats
    expansion: ExpansionResult


def solve(
    psi: PosCnf,
    cfg: Optional[SearchConfig] = None,
    trace: Optional[list[TraceRow]] = None,
    engine: str = "auto",
) -> SolveResult:
    """Preprocess ``psi`` and search the full implicit matrix."""
    if cfg is None:
        cfg = SearchConfig()
    exp = preprocess(psi)
    res = two_dib_search(exp.ef, exp.ef.full_rect(), cfg, trace=trace, engine=engine)
    witness_original = None
    aux_true = None
    if res.witness is not None:
        value = _mask_value(res.witness.mask, exp.ef.enc)
        if value != exp.ef.target:
            raise RuntimeError(
                f"unsound witness: value {value} != target {exp.ef.target}"
            )
        witness_original = rename_witness_to_original(exp, res.witness)
        aux_true = tuple(
            i for i in range(exp.k1 + 1, exp.phi.num_vars + 1) if res.witness.value(i)
        )
    return SolveResult(
        found=res.found,
        witness=res.witness,
        witness_original=witness_original,
        aux_true_vars=aux_true,
        stats=res.stats,
        expansion=exp,
    )
