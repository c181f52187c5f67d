import pytest

from one3probe.formula import parse_pos3cnf

PSI1_TEXT = "p p3cnf 4 2\n1 2 3\n1 2 4\n"

# No assignment can hit every clause exactly once here (checked by the oracle
# tests); handy as a canonical unsatisfiable instance.
ALL_TRIPLES4_TEXT = "p p3cnf 4 4\n2 3 4\n1 3 4\n1 2 4\n1 2 3\n"


@pytest.fixture
def psi1():
    return parse_pos3cnf(PSI1_TEXT)


@pytest.fixture
def all_triples4():
    return parse_pos3cnf(ALL_TRIPLES4_TEXT)
