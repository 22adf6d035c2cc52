from fractions import Fraction

import pytest

from circuitarray.algebra import Polynomial, RationalFunction
from circuitarray.arrays import (
    CM_NUMERIC_POINT,
    FAMILIES,
    ArrayError,
    CircuitArrayTable,
    build_cm_array,
    build_cx_array,
    build_numeric_array,
    closed_form_row,
    in_domain,
    row_start,
    verify_closed_form,
)


@pytest.fixture(scope="module")
def cx():
    return build_cx_array(8)


@pytest.fixture(scope="module")
def cm():
    return build_cm_array(3, 8)


def test_domain_shape():
    t = build_numeric_array(4)
    assert set(t.entries) == {(i, j) for j in range(1, 5) for i in range(0, 2 * (j - 1) + 1)}
    assert all(in_domain(i, j) for i, j in t.entries)
    assert row_start(0) == 1 and row_start(3) == 3 and row_start(6) == 4


def test_numeric_spot_values():
    t = build_numeric_array(4)
    assert t[(0, 1)] == Fraction(2, 3)
    assert t[(2, 2)] == Fraction(1, 2)
    assert t[(3, 4)] == Fraction(1965403, 1904448)


def test_grid_oracle_agrees_with_recursion():
    assert build_numeric_array(5, use_grid_oracle=True).entries == build_numeric_array(5).entries


def test_cx_seed_and_variables(cx):
    x = Polynomial.variable("X", ("X",))
    assert cx[(0, 1)] == RationalFunction(x - 3, x)
    assert all(v.used_variables() in ((), ("X",)) for v in cx.entries.values())


def test_cx_specializes_to_numeric(cx):
    numeric = build_numeric_array(8)
    assert cx.substitute({"X": 9}).entries == numeric.entries


def test_cm_specializes_to_numeric(cm):
    numeric = build_numeric_array(8, max_row=3)
    assert cm.substitute(CM_NUMERIC_POINT).entries == numeric.entries


def test_cm_variable_usage(cm):
    for (i, _), v in cm.entries.items():
        allowed = {"X1"} if i <= 1 else {"X1", "X2"}
        assert set(v.used_variables()) <= allowed


def test_cm_row_limit():
    with pytest.raises(ArrayError, match="unsupported, see docs"):
        build_cm_array(4, 4)


def test_max_row_restriction():
    t = build_cx_array(5, max_row=2)
    assert t.max_row == 2
    assert t.entries == build_cx_array(5).restrict(max_row=2).entries


def test_round_trips(cx, cm):
    small = cx.restrict(max_column=4)
    assert CircuitArrayTable.from_json(small.dumps()).entries == small.entries
    assert CircuitArrayTable.from_csv(small.to_csv(), "univariate", ("X",)).entries == small.entries
    m = cm.restrict(max_column=3)
    assert CircuitArrayTable.from_json(m.dumps()).entries == m.entries
    n = build_numeric_array(4)
    assert CircuitArrayTable.from_csv(n.to_csv(), "numeric").entries == n.entries


def test_outside_domain_rejected():
    with pytest.raises(ArrayError):
        CircuitArrayTable("numeric", {(3, 2): Fraction(1)}, 2)


def test_markdown_layout():
    md = build_numeric_array(2).to_markdown().splitlines()
    assert md[0] == "| i \\ j | 1 | 2 |"
    assert md[2] == "| 0 | 2/3 | 26/27 |"


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_closed_forms(family, cx, cm):
    variant, _, s_min = FAMILIES[family]
    table = cx if variant == "univariate" else cm
    assert verify_closed_form(family, range(s_min, 9), table).passed


def test_cx1_printed_form_differs(cx):
    report = verify_closed_form("CX1", range(2, 9), cx, printed=True)
    assert not report.passed
    assert closed_form_row("CX1", 2) == cx[(1, 2)]
