"""Printed reference values, transcribed as printed (misprints included).

The audit compares computed data against these; nothing in the library reads
them to compute anything.  Factored entries are stored as a content and lists
of numerator and denominator factors so the printed shape survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Polynomial, RationalFunction, format_rational
from .arrays import CM_VARIABLES, CX_VARIABLES


@dataclass(frozen=True)
class PrintedValue:
    content: Fraction
    num: tuple[str, ...]
    den: tuple[str, ...] = ()

    def value(self, variables) -> RationalFunction:
        num = Polynomial.constant(self.content, variables)
        for f in self.num:
            num = num * Polynomial.parse(f, variables)
        den = Polynomial.constant(1, variables)
        for f in self.den:
            den = den * Polynomial.parse(f, variables)
        return RationalFunction(num, den)

    def to_text(self) -> str:
        num = "*".join(f"({f})" for f in self.num) or "1"
        if self.content != 1:
            num = f"{format_rational(self.content)}*{num}"
        if not self.den:
            return num
        return f"{num}/(" + "*".join(f"({f})" for f in self.den) + ")"


def _pv(content, num, den=()):
    return PrintedValue(Fraction(content), tuple(num), tuple(den))


NUMERIC_TABLE = {
    (0, 1): Fraction(2, 3),
    (0, 2): Fraction(26, 27),
    (0, 3): Fraction(242, 243),
    (0, 4): Fraction(2186, 2187),
    (1, 2): Fraction(13, 12),
    (1, 3): Fraction(121, 120),
    (1, 4): Fraction(1093, 1092),
    (2, 2): Fraction(1, 2),
    (2, 3): Fraction(89, 100),
    (2, 4): Fraction(16243, 16562),
    (3, 3): Fraction(1157, 960),
    (3, 4): Fraction(1965403, 1904448),
}

UNIVARIATE_TABLE = {
    (0, 1): _pv(1, ["1/3*X - 1"], ["1/3*X"]),
    (0, 2): _pv(1, ["3*X - 1"], ["3*X"]),
    (0, 3): _pv(1, ["27*X - 1"], ["27*X"]),
    (0, 4): _pv(1, ["243*X - 1"], ["243*X"]),
    (1, 2): _pv(1, ["3*X - 1"], ["3*X - 3"]),
    (1, 3): _pv(1, ["27*X - 1"], ["27*X - 3"]),
    (1, 4): _pv(1, ["243*X - 1"], ["243*X - 3"]),
    (2, 2): _pv(2, ["1 - 4/3*X + 1/3*X^2"], ["X - 1", "X - 1"]),
    (2, 3): _pv(2, ["13 - 36*X + 39*X^2"], ["9*X - 1", "9*X - 1"]),
    (2, 4): _pv(2, ["121 - 540*X + 3267*X^2"], ["81*X - 1", "81*X - 1"]),
    (3, 3): _pv(Fraction(1, 12), ["3*X - 1", "13 - 36*X + 39*X^2"], ["9*X - 1", "1 - 2*X + X^2"]),
    (3, 4): _pv(Fraction(1, 12), ["27*X - 1", "121 - 540*X + 3267*X^2"], ["81*X - 1", "10 - 36*X + 45*X^2"]),
}

_N3 = "9*X1^2*X2 + 8*X1^2 + 36*X1*X2 + 128*X1 + 36*X2 + 512"
_N4 = "81*X1^2*X2 + 80*X1^2 + 324*X1*X2 + 2432*X1 + 324*X2 + 55808"

MULTIVARIATE_TABLE = {
    (0, 1): _pv(1, ["X1"]),
    (0, 2): _pv(1, ["X1 + 8"], ["9"]),
    (0, 3): _pv(1, ["X1 + 80"], ["81"]),
    (0, 4): _pv(1, ["X1 + 728"], ["729"]),
    (1, 2): _pv(1, ["X1 + 8"], ["3*X1 + 6"]),
    (1, 3): _pv(1, ["X1 + 80"], ["3", "X1 + 26"]),
    (1, 4): _pv(1, ["X1 + 728"], ["3", "X1 + 242"]),
    (2, 2): _pv(1, ["X2"]),
    (2, 3): _pv(1, [_N3], ["X1 + 26", "X1 + 26"]),
    (2, 4): _pv(1, [_N4], ["X1 + 242", "X1 + 242"]),
    (3, 3): _pv(1, ["X1 + 8", _N3], ["3", "X1 + 2", "X1 + 26", "3*X1*X2 + 2*X1 + 6*X2 + 16"]),
    (3, 4): _pv(
        1,
        ["X1 + 80", _N4],
        ["3", "X1 + 242", "27*X1^2*X2 + 26*X1^2 + 108*X1*X2 + 596*X1 + 108*X2 + 5696"],
    ),
}

# column-4 entries of rows 3..5, printed as products of shared factors
COLUMN4_FACTORED = {
    (3, 4): _pv(Fraction(1, 24), ["-1 + 27*X", "121 - 540*X + 3267*X^2"], ["-1 + 81*X", "5 - 18*X + 45*X^2"]),
    (4, 4): _pv(1, ["-1 + 27*X", "-89 + 333*X - 447*X^2 + 267*X^3"], ["5 - 18*X + 45*X^2"] * 2),
    (5, 4): _pv(
        Fraction(1, 192),
        ["13 - 36*X + 39*X^2", "-89 + 333*X - 447*X^2 + 267*X^3"],
        ["-1 + X"] * 3 + ["5 - 18*X + 45*X^2"],
    ),
}

# the same rows listed column by column, used to read off the shared factors
ROW_LISTS = {
    (2, 2): _pv(2, ["X - 3"], ["3", "X - 1"]),
    (2, 3): _pv(2, ["13 - 36*X + 39*X^2"], ["1 - 9*X", "1 - 9*X"]),
    (2, 4): _pv(2, ["121 - 540*X + 3267*X^2"], ["1 - 81*X", "1 - 81*X"]),
    (3, 3): _pv(1, ["3*X - 1", "39*X^2 - 36*X + 13"], ["12", "X - 1", "X - 1", "9*X - 1"]),
    (3, 4): _pv(1, ["27*X - 1", "3267*X^2 - 540*X + 121"], ["24", "81*X - 1", "45*X^2 - 18*X + 5"]),
    (3, 5): _pv(1, ["243*X - 1", "265599*X^2 - 6804*X + 1093"], ["12", "729*X - 1", "7371*X^2 - 486*X + 91"]),
    (4, 3): _pv(1, ["X - 3", "3*X - 1"], ["6", "X - 1", "X - 1"]),
    (4, 4): _pv(1, ["27*X - 1", "267*X^3 - 447*X^2 + 333*X - 89"], ["4", "45*X^2 - 18*X + 5", "45*X^2 - 18*X + 5"]),
    (4, 5): _pv(
        1,
        ["243*X - 1", "438561*X^3 - 187029*X^2 + 87399*X - 16243"],
        ["2", "7371*X^2 - 486*X + 91", "7371*X^2 - 486*X + 91"],
    ),
    (5, 4): _pv(
        1,
        ["39*X^2 - 36*X + 13", "267*X^3 - 447*X^2 + 333*X - 89"],
        ["192", "X - 1", "X - 1", "X - 1", "45*X^2 - 18*X + 5"],
    ),
    (5, 5): _pv(
        1,
        ["3267*X^2 - 540*X + 121", "438561*X^3 - 187029*X^2 + 87399*X - 16243"],
        ["192", "7371*X^2 - 486*X + 91", "981*X^3 - 855*X^2 + 495*X - 109"],
    ),
}

# factors of the row-5 quotients named in the worked factorization
ROW5_FACTORS = {
    4: {"p2(j-1)": "13 - 36*X + 39*X^2", "p3(j)": "5 - 18*X + 45*X^2",
        "p4(j)": "-89 + 333*X - 447*X^2 + 267*X^3", "p5(j)": "(X - 1)^3"},
    5: {"p2(j-1)": "3267*X^2 - 540*X + 121", "p3(j)": "7371*X^2 - 486*X + 91",
        "p4(j)": "438561*X^3 - 187029*X^2 + 87399*X - 16243", "p5(j)": "981*X^3 - 855*X^2 + 495*X - 109"},
}
ROW5_CONSTANT = Fraction(1, 192)

# numerator coefficient sequences of the multivariable row 2, keyed by (a, b) for X1^a X2^b:
# (printed recursion coefficients c_1.. for G_s = c_1 G_{s-1} + ..., printed annihilator roots)
MULTIVARIATE_ROW2 = {
    (0, 0): ((100, -1638, 8100, -6561), {81: 1, 9: 2, 1: 1}),
    (0, 1): ((10, -1), {1: 1, 9: 1}),
    (1, 0): ((19, -99, 81), {9: 2, 1: 1}),
    (1, 1): ((9,), {9: 1}),
    (2, 0): ((10, -9), {1: 1, 9: 1}),
    (2, 1): ((9,), {9: 1}),
}

# univariate row 2 numerator coefficients of X^0, X^1, X^2
UNIVARIATE_ROW2 = {
    0: ((10, -9), {1: 1, 9: 1}),
    1: ((18, 81), {9: 2}),
    2: ((90, -81), {9: 1, 81: 1}),
}

# multivariable row 0 numerator: (constant term, X1 term) as printed
MULTIVARIATE_ROW0 = {
    "constant": ((1,), {1: 1}),
    "X1": ((10, -9), {1: 1, 9: 1}),
}

# annihilator of the X coefficient of p_3 quoted in the worked example (nine-power exponents)
P3_LINEAR_ANNIHILATOR = {1: 4, 2: 4, 3: 2}

# rows certified by direct factorization
STRONG_FORM_ROWS = range(0, 8)


def univariate_reference(key):
    return UNIVARIATE_TABLE[key].value(CX_VARIABLES)


def multivariate_reference(key):
    return MULTIVARIATE_TABLE[key].value(CM_VARIABLES)
