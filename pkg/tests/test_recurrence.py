from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circuitarray.recurrence import (
    ExactSequence,
    OperatorPolynomial,
    RecurrenceError,
    apply_operator,
    exponents_operator,
    mine_annihilator,
    minimal_annihilator,
    powers_of_nine_factorization,
    product_annihilator,
    sum_annihilator,
)


def seq(f, n=20, start=0):
    return ExactSequence(tuple(f(s) for s in range(start, start + n)), start)


def fib(n):
    a, b = 0, 1
    out = []
    for _ in range(n):
        out.append(a)
        a, b = b, a + b
    return ExactSequence(tuple(out))


def test_fibonacci():
    assert minimal_annihilator(fib(20), 6) == OperatorPolynomial([-1, -1, 1])


@pytest.mark.parametrize("c", [1, 2, 9])
def test_geometric(c):
    assert minimal_annihilator(seq(lambda s: c**s), 6) == OperatorPolynomial([-c, 1])


def test_square_of_sum_of_powers():
    op = minimal_annihilator(seq(lambda s: (3**s + 2**s) ** 2), 6)
    assert op == OperatorPolynomial.from_roots({9: 1, 6: 1, 4: 1})
    assert op.to_text() == "E^3 - 19*E^2 + 114*E - 216"
    assert op.factored_text() == "(E-9)(E-6)(E-4)"


def test_zero_sequence():
    assert minimal_annihilator(ExactSequence((0,) * 6), 2).degree == 0


def test_inconclusive_when_order_too_high():
    # 2^s + s^3 needs order 5
    res = mine_annihilator(seq(lambda s: 2**s + s**3, 8), 3)
    assert not res.conclusive


def test_too_short_raises():
    with pytest.raises(RecurrenceError, match="at least 8 terms"):
        mine_annihilator(ExactSequence((1, 2, 3)), 3)


def test_rational_terms():
    op = minimal_annihilator(seq(lambda s: Fraction(1, 3**s) + 1), 4)
    assert op.rational_roots() == {Fraction(1, 3): 1, Fraction(1): 1}


def test_parse_comments_and_commas():
    s = ExactSequence.parse("# header\n1, 2\n3 # three\n\n4/5\n")
    assert s.terms == (1, 2, 3, Fraction(4, 5))


def test_from_recursion_and_apply():
    op = OperatorPolynomial.from_recursion([10, -9])
    assert op == OperatorPolynomial.from_roots({1: 1, 9: 1})
    assert apply_operator(op, seq(lambda s: 9**s + 4)).is_zero()


def test_nine_power_factorization():
    op = OperatorPolynomial.from_roots({1: 1, 9: 2, 81: 1})
    fact = powers_of_nine_factorization(op, 8)
    assert fact.full_success
    assert fact.exponents() == {0: 1, 1: 2, 2: 1}
    assert fact.to_text() == "(E-1)^1 (E-9)^2 (E-81)^1"
    assert fact.expand() == op
    bad = powers_of_nine_factorization(OperatorPolynomial.from_roots({9: 1, 6: 1}), 8)
    assert not bad.full_success and bad.remainder == OperatorPolynomial([-6, 1])


def test_k_max_limits_search():
    op = exponents_operator({3: 1})
    assert not powers_of_nine_factorization(op, 2).full_success
    assert powers_of_nine_factorization(op, 3).full_success


def test_divides():
    a = OperatorPolynomial.from_roots({9: 1})
    b = OperatorPolynomial.from_roots({9: 2, 81: 1})
    assert a.divides(b) and not b.divides(a)


def test_product_and_sum_closure():
    a = OperatorPolynomial.from_roots({3: 1})
    b = OperatorPolynomial.from_roots({2: 1, 1: 1})
    prod = product_annihilator(a, b)
    assert apply_operator(prod, seq(lambda s: 3**s * (2**s + 5))).is_zero()
    total = sum_annihilator([a, b])
    assert apply_operator(total, seq(lambda s: 3**s + 2**s + 7)).is_zero()


roots_st = st.dictionaries(st.sampled_from([1, 2, 3, 9, 81, Fraction(1, 2), -3]), st.integers(1, 2), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(roots_st, st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_mined_operator_divides_generator(roots, weights):
    # sequence sum_r P_r(s) r^s with polynomial weights of degree < multiplicity
    gen = OperatorPolynomial.from_roots(roots)
    items = sorted(roots.items(), key=lambda kv: Fraction(kv[0]))

    def term(s):
        total, k = Fraction(0), 0
        for r, m in items:
            for p in range(m):
                total += weights[k % 6] * s**p * Fraction(r) ** s
                k += 1
        return total

    ex = seq(term, 2 * gen.degree + 4)
    op = minimal_annihilator(ex, gen.degree + 1)
    assert op is not None
    assert apply_operator(op, ex).is_zero()
    assert op.divides(gen)
