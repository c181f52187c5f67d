import random

import pytest

from one3probe import oracle
from one3probe.encoding import (
    CellIndex,
    EncodedFormula,
    assignment_value,
    encode_formula,
    matrix_value,
)
from one3probe.formula import Assignment, generate_random, parse_pos3cnf
from one3probe.preprocess import expand


@pytest.fixture
def psi1_ef(psi1):
    return expand(psi1).ef


class TestBruteForce:
    def test_psi1_smallest_witness(self, psi1):
        witness = oracle.brute_force_one_in_three(psi1)
        assert witness is not None
        assert witness.true_vars() == (1,)

    def test_all_triples_unsat(self, all_triples4):
        assert oracle.brute_force_one_in_three(all_triples4) is None

    def test_disjoint_clauses(self):
        f = parse_pos3cnf("p p3cnf 6 2\n1 2 3\n4 5 6\n")
        witness = oracle.brute_force_one_in_three(f)
        assert witness is not None
        assert all(
            sum(witness.value(v) for v in clause) == 1 for clause in f.clauses
        )

    def test_guard(self):
        f = generate_random(25, 12, seed=0)
        with pytest.raises(ValueError, match="guard"):
            oracle.brute_force_one_in_three(f)

    def test_guard_override(self):
        small = generate_random(5, 3, seed=0)
        a = oracle.brute_force_one_in_three(small)
        b = oracle.brute_force_one_in_three(small, allow_large=True)
        assert (a is None) == (b is None)


class TestTargetMembership:
    def test_psi1_expanded_present(self, psi1_ef):
        witness = oracle.target_membership(psi1_ef)
        assert witness is not None
        assert assignment_value(witness, psi1_ef) == psi1_ef.target

    def test_all_triples_expanded_absent(self, all_triples4):
        ef = expand(all_triples4).ef
        assert oracle.target_membership(ef) is None

    @pytest.mark.parametrize("seed", range(0, 60, 3))
    def test_agreement_with_clause_predicate(self, seed):
        rng = random.Random(seed)
        k1 = rng.randrange(4, 8)
        m1 = rng.randrange(2, 5)
        if 3 * m1 < k1:
            m1 = (k1 + 2) // 3 + 1
        psi = generate_random(k1, m1, seed)
        exp = expand(psi)
        by_predicate = oracle.brute_force_one_in_three(exp.phi)
        by_target = oracle.target_membership(exp.ef)
        assert (by_predicate is None) == (by_target is None)
        if by_predicate is not None:
            # Both return the lexicographically smallest witness.
            assert by_predicate.mask == by_target.mask


class TestMaterialize:
    def test_corner_values(self, psi1_ef):
        mm = oracle.materialize(psi1_ef)
        assert (mm.rows, mm.cols) == (16, 64)
        assert mm.cell(0, 0) == 0
        assert mm.cell(15, 63) == sum(psi1_ef.enc) == int("33333333", 4)

    def test_row_and_column_prefixes(self, psi1_ef):
        mm = oracle.materialize(psi1_ef)
        assert mm.cell(15, 0) == int("11231123", 4)
        assert mm.cell(0, 63) == int("22102210", 4)

    def test_agrees_with_matrix_value_sampled(self, psi1_ef):
        mm = oracle.materialize(psi1_ef)
        rng = random.Random(7)
        for _ in range(1000):
            row = rng.randrange(16)
            col = rng.randrange(64)
            assert mm.cell(row, col) == matrix_value(CellIndex(row, col), psi1_ef)

    def test_guard(self):
        ef = EncodedFormula(enc=(1,) * 21, target=1, k1=10, k2=11, m=1)
        with pytest.raises(ValueError, match="guard"):
            oracle.materialize(ef)


class TestCheckSortedness:
    def test_vacuous_one_by_one(self):
        mm = oracle.MaterializedMatrix(rows=1, cols=1, cells=[[0]])
        assert oracle.check_sortedness(mm, strict=True).holds

    def test_constructed_violation(self):
        mm = oracle.MaterializedMatrix(rows=2, cols=2, cells=[[0, 2], [1, 1]])
        verdict = oracle.check_sortedness(mm, strict=False)
        assert not verdict.holds
        assert verdict.first_violation["axis"] == "column"
        assert verdict.first_violation["cell"] == (1, 1)

    def test_strict_catches_equality(self):
        mm = oracle.MaterializedMatrix(rows=1, cols=2, cells=[[3, 3]])
        assert oracle.check_sortedness(mm, strict=False).holds
        assert not oracle.check_sortedness(mm, strict=True).holds

    def test_psi1_matrix_verdict_recorded(self, psi1_ef):
        mm = oracle.materialize(psi1_ef)
        verdict = oracle.check_sortedness(mm, strict=False)
        # Recorded, not presumed: whatever it is, it must agree with the
        # independent all-pairs comparator on a submatrix.
        sub = oracle.MaterializedMatrix(
            rows=16, cols=16, cells=[row[:16] for row in mm.cells]
        )
        assert oracle.check_sortedness(sub, strict=False).holds == \
            oracle.check_sortedness_allpairs(sub, strict=False)
        assert isinstance(verdict.holds, bool)

    @pytest.mark.parametrize("seed", range(30))
    def test_agrees_with_allpairs_random(self, seed):
        rng = random.Random(seed)
        rows = rng.randrange(1, 9)
        cols = rng.randrange(1, 9)
        cells = [[rng.randrange(6) for _ in range(cols)] for _ in range(rows)]
        mm = oracle.MaterializedMatrix(rows=rows, cols=cols, cells=cells)
        for strict in (False, True):
            assert (
                oracle.check_sortedness(mm, strict).holds
                == oracle.check_sortedness_allpairs(mm, strict)
            )


class TestCheckEquivalence:
    def test_psi1(self, psi1):
        assert oracle.check_equivalence(psi1).holds

    def test_all_triples(self, all_triples4):
        assert oracle.check_equivalence(all_triples4).holds


class TestCheckDominance:
    def test_geometric_holds(self):
        ef = EncodedFormula(enc=(1, 4, 16), target=21, k1=3, k2=0, m=3)
        assert oracle.check_dominance(ef).holds

    def test_equal_pair_fails(self):
        ef = EncodedFormula(enc=(1, 1), target=5, k1=2, k2=0, m=2)
        verdict = oracle.check_dominance(ef)
        assert not verdict.holds
        assert verdict.first_violation["index"] == 2

    def test_psi1_expanded_verdict_recorded(self, psi1_ef):
        verdict = oracle.check_dominance(psi1_ef)
        assert isinstance(verdict.holds, bool)
        if not verdict.holds:
            v = verdict.first_violation
            assert v["encoding"] <= v["prefix_sum"]


class TestObservationBridge:
    """Monotonicity of values under coordinate-wise cell order is exactly
    non-strict sortedness of the materialized matrix."""

    @pytest.mark.parametrize("seed", range(4))
    def test_equivalence_of_statements(self, seed):
        psi = generate_random(4, 2, seed)
        ef = expand(psi).ef
        mm = oracle.materialize(ef)
        sorted_verdict = oracle.check_sortedness(mm, strict=False).holds
        monotone = all(
            mm.cell(r1, c1) <= mm.cell(r2, c2)
            for r1 in range(mm.rows)
            for c1 in range(mm.cols)
            for r2 in range(r1, mm.rows)
            for c2 in range(c1, mm.cols)
        )
        assert sorted_verdict == monotone
