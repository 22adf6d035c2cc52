from fractions import Fraction

import pytest

from circuitarray.algebra import Polynomial, canonicalize
from circuitarray.arrays import build_cm_array, build_cx_array
from circuitarray.conjecture import (
    ConjectureError,
    Verdict,
    VerdictReport,
    check_strong_form,
    check_weak_form,
    compare_exponent_arrays,
    degree_conventions,
    exponent_array_literal,
    exponent_array_reference,
    extract_row_factorization,
    extract_row_factorizations,
    predicted_cell,
)

K_BY_ROW = {1: Fraction(1, 3), 2: Fraction(2), 3: Fraction(1, 12), 4: Fraction(1, 2),
            5: Fraction(1, 192), 6: Fraction(1, 32), 7: Fraction(1, 3072)}


@pytest.fixture(scope="module")
def cx():
    return build_cx_array(30, max_row=7)


@pytest.fixture(scope="module")
def factorizations(cx):
    fz, report = extract_row_factorizations(cx, 7)
    assert not report.failed
    return fz


def test_verdict_validation():
    with pytest.raises(ConjectureError):
        Verdict("x", 0, "maybe")
    with pytest.raises(ConjectureError, match="no witness"):
        Verdict("x", 0, "fail")
    rep = VerdictReport()
    rep.add(Verdict("x", 0, "pass"))
    rep.add(Verdict("x", 1, "reference-discrepancy", [{"cell": [1, 1]}]))
    assert rep.statuses("x") == ["pass", "reference-discrepancy"]
    assert len(rep.discrepancies) == 1 and not rep.failed


def test_exponent_reference_rows():
    ref = exponent_array_reference()
    assert ref.cell(3, 0) == (1, 3, 3, 1)
    assert ref.cell(3, 1) == (4, 4, 2)
    assert ref.cell_exponents(2, 3) == {1: 1, 2: 2, 3: 1}


def test_literal_rules_on_column_zero_and_rule_d():
    lit = exponent_array_literal(3)
    ref = exponent_array_reference()
    for i in range(4):
        assert lit.cell(i, 0) == ref.cell(i, 0)
        expect, _ = predicted_cell(i, i + 1, ref)
        assert lit.cell_exponents(i, i + 1) == expect


def test_exponent_audit_reports_cells():
    rep = compare_exponent_arrays()
    bad = {tuple(v.witnesses[0]["cell"]) for v in rep.discrepancies}
    assert bad == {(2, 2), (3, 1), (3, 2), (3, 3)}
    assert not rep.failed
    w31 = next(v.witnesses[0] for v in rep.discrepancies if v.witnesses[0]["cell"] == [3, 1])
    assert w31["mismatched_k"] == [3]


def test_strong_constants(factorizations):
    for r, k in K_BY_ROW.items():
        assert factorizations[r].K == k


def test_strong_reassembles_every_entry(cx, factorizations):
    for r in range(1, 8):
        fz = factorizations[r]
        for j in fz.columns:
            assert fz.reassemble(j) == cx[(r, j)]


def test_strong_degrees(factorizations):
    for r in range(0, 8):
        expect = degree_conventions(r)["r in {2(c-1), 2(c-1)+1}"]
        assert set(factorizations[r].degrees().values()) == {expect}


def test_row_5_column_5(cx):
    fz = extract_row_factorization(cx, 5)
    assert fz.K == Fraction(1, 192)
    X = ("X",)
    assert fz.p[5] == Polynomial.parse("981*X^3 - 855*X^2 + 495*X - 109", X)
    assert fz.bank(4, 5) == Polynomial.parse("438561*X^3 - 187029*X^2 + 87399*X - 16243", X)
    assert canonicalize(fz.bank(3, 5)).primitive == Polynomial.parse("7371*X^2 - 486*X + 91", X)


def test_strong_form_exponents(cx):
    report, _ = check_strong_form(cx, 4)
    assert not report.failed
    assert "inconclusive" not in report.statuses()


def test_weak_form_row_2(cx, factorizations):
    rep = check_weak_form(cx, 2, 8, 8, factorization=factorizations[2])
    assert rep.verdicts and set(rep.statuses()) == {"pass"}


def test_weak_form_multivariate_row_1():
    cm = build_cm_array(3, 20)
    rep = check_weak_form(cm, 1, 8, 8, "integral")
    assert set(rep.statuses()) == {"pass"}


def test_row_factorization_needs_univariate():
    with pytest.raises(ConjectureError):
        extract_row_factorizations(build_cm_array(3, 4), 3)
