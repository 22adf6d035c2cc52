"""Exact rationals, sparse multivariate polynomials and reduced rational functions.

Rationals are :class:`fractions.Fraction`.  Polynomials are immutable sparse
maps from exponent vectors to nonzero rational coefficients; the arithmetic and
the gcd are delegated to sympy's sparse polynomial rings (gmpy2 ground types),
everything visible from the outside (terms, ordering, text form, canonical
content/primitive split) is defined here.

Term order is graded lexicographic with the variables compared in the order
they are listed, so ``X1^2`` sorts before ``X1*X2`` and ``X1`` before ``X2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

__all__ = [
    "Fraction",
    "Polynomial",
    "CanonicalPolynomial",
    "RationalFunction",
    "poly_gcd",
    "canonicalize",
    "ratfunc_make",
    "substitute",
    "parse_rational",
    "format_rational",
]

Scalar = Union[int, Fraction]


class AlgebraError(ValueError):
    pass


@lru_cache(maxsize=None)
def _ring(variables: tuple[str, ...]) -> PolyRing:
    if not variables:
        raise AlgebraError("a polynomial needs at least one variable")
    return PolyRing(variables, QQ, grlex)


def _qq(c) -> object:
    if isinstance(c, Fraction):
        return QQ(c.numerator, c.denominator)
    if isinstance(c, int):
        return QQ(c)
    return QQ.convert(c)


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_rational(q: Scalar) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _sort_key(monom: tuple[int, ...]):
    return (sum(monom), monom)


def _monomial_text(variables, monom) -> str:
    parts = []
    for name, e in zip(variables, monom):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _integer_content(elem: PolyElement) -> tuple[Fraction, PolyElement]:
    """Split ``elem`` (nonzero) into content and integer primitive part."""
    nums = [int(c.numerator) for c in elem.values()]
    dens = [int(c.denominator) for c in elem.values()]
    content = Fraction(gcd(*nums), lcm(*dens))
    if elem.LC < 0:
        content = -content
    return content, elem.quo_ground(_qq(content))


class Polynomial:
    """Immutable sparse polynomial with rational coefficients.

    ``terms`` maps exponent vectors (one entry per variable) to nonzero
    :class:`Fraction` coefficients.
    """

    __slots__ = ("_p",)

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple[int, ...], Scalar] = ()):
        variables = tuple(variables)
        ring = _ring(variables)
        data = {}
        for monom, c in dict(terms).items():
            monom = tuple(int(e) for e in monom)
            if len(monom) != len(variables) or min(monom, default=0) < 0:
                raise AlgebraError(f"bad exponent vector {monom} for variables {variables}")
            if c != 0:
                data[monom] = _qq(c)
        self._p = ring.from_dict(data) if data else ring.zero

    @classmethod
    def _wrap(cls, elem: PolyElement) -> "Polynomial":
        obj = cls.__new__(cls)
        obj._p = elem
        return obj

    @classmethod
    def constant(cls, value: Scalar, variables: Iterable[str]) -> "Polynomial":
        variables = tuple(variables)
        return cls._wrap(_ring(variables)(_qq(value)))

    @classmethod
    def variable(cls, name: str, variables: Iterable[str] | None = None) -> "Polynomial":
        variables = tuple(variables) if variables is not None else (name,)
        ring = _ring(variables)
        return cls._wrap(ring.gens[variables.index(name)])

    # -- inspection -----------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(str(s) for s in self._p.ring.symbols)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {m: _frac(c) for m, c in self._p.items()}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in decreasing graded-lex order (serialization order)."""
        return sorted(self.terms.items(), key=lambda t: _sort_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._p

    def is_constant(self) -> bool:
        return self._p.is_ground

    def degree(self, variable: str | None = None) -> int:
        """Total degree, or the degree in one variable; -1 for zero."""
        if not self._p:
            return -1
        if variable is None:
            return max(sum(m) for m in self._p)
        i = self.variables.index(variable)
        return max(m[i] for m in self._p)

    def coefficient(self, monom: tuple[int, ...]) -> Fraction:
        c = self._p.get(tuple(monom))
        return Fraction(0) if c is None else _frac(c)

    def leading_coefficient(self) -> Fraction:
        return _frac(self._p.LC) if self._p else Fraction(0)

    def used_variables(self) -> tuple[str, ...]:
        names = self.variables
        return tuple(n for i, n in enumerate(names) if any(m[i] for m in self._p))

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        missing = [v for v in self.used_variables() if v not in assignment]
        if missing:
            raise AlgebraError(f"no value given for {', '.join(missing)}")
        values = [Fraction(assignment.get(v, 0)) for v in self.variables]
        total = Fraction(0)
        for monom, c in self._p.items():
            term = _frac(c)
            for v, e in zip(values, monom):
                if e:
                    term *= v**e
            total += term
        return total

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other._p.ring != self._p.ring:
                raise AlgebraError(
                    f"variable lists differ: {self.variables} vs {other.variables}"
                )
            return other._p
        if isinstance(other, (int, Fraction)):
            return self._p.ring(_qq(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Polynomial._wrap(self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Polynomial._wrap(self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Polynomial._wrap(o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Polynomial._wrap(self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial._wrap(-self._p)

    def __pow__(self, n: int):
        if n < 0:
            raise AlgebraError("negative power of a polynomial")
        return Polynomial._wrap(self._p**n)

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises if there is a remainder."""
        o = self._coerce(other)
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        q, r = self._p.div(o)
        if r:
            raise AlgebraError("division is not exact")
        return Polynomial._wrap(q)

    def divides(self, other: "Polynomial") -> bool:
        o = self._coerce(other)
        return not o.rem(self._p)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._p.ring == other._p.ring and self._p == other._p
        if isinstance(other, (int, Fraction)):
            return self._p == self._p.ring(_qq(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self._p.items())))

    # -- text -----------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text: decreasing graded-lex terms, explicit ``*`` and ``^``."""
        if not self._p:
            return "0"
        out = []
        for monom, c in self.sorted_terms():
            mono = _monomial_text(self.variables, monom)
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    __str__ = to_text

    def __repr__(self):
        return f"Polynomial({self.to_text()!r}, variables={self.variables})"

    _TERM = re.compile(r"([+-]?)([^+-]+)")

    @classmethod
    def parse(cls, text: str, variables: Iterable[str]) -> "Polynomial":
        """Inverse of :meth:`to_text` (also accepts rational coefficients)."""
        variables = tuple(variables)
        src = text.replace(" ", "")
        if not src:
            raise AlgebraError("empty polynomial text")
        terms: dict[tuple[int, ...], Fraction] = {}
        pos = 0
        for m in cls._TERM.finditer(src):
            if m.start() != pos:
                raise AlgebraError(f"cannot parse polynomial {text!r}")
            pos = m.end()
            coeff = Fraction(-1 if m.group(1) == "-" else 1)
            monom = [0] * len(variables)
            for factor in m.group(2).split("*"):
                if not factor:
                    raise AlgebraError(f"cannot parse polynomial {text!r}")
                name, _, exp = factor.partition("^")
                if name in variables:
                    monom[variables.index(name)] += int(exp) if exp else 1
                elif not exp:
                    coeff *= Fraction(name)
                else:
                    raise AlgebraError(f"unknown variable {name!r} in {text!r}")
            key = tuple(monom)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        if pos != len(src):
            raise AlgebraError(f"cannot parse polynomial {text!r}")
        return cls(variables, terms)


@dataclass(frozen=True)
class CanonicalPolynomial:
    """``content * primitive`` with ``primitive`` integral, coprime and positively led."""

    content: Fraction
    primitive: Polynomial

    def expand(self) -> Polynomial:
        return self.primitive * self.content

    def __str__(self):
        if self.content == 1:
            return self.primitive.to_text()
        return f"{format_rational(self.content)}*({self.primitive.to_text()})"


def canonicalize(p: Polynomial) -> CanonicalPolynomial:
    if p.is_zero():
        raise AlgebraError("cannot canonicalize zero")
    content, prim = _integer_content(p._p)
    return CanonicalPolynomial(content, Polynomial._wrap(prim))


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor in canonical (primitive, positive-led) form."""
    q_elem = p._coerce(q)
    if not p._p and not q_elem:
        return p
    g = p._p.gcd(q_elem)
    return Polynomial._wrap(_integer_content(g)[1])


def _reduce(num: PolyElement, den: PolyElement) -> tuple[PolyElement, PolyElement]:
    ring = num.ring
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return ring.zero, ring.one
    if not den.is_ground:
        g, num, den = num.cofactors(den)
    c, den = _integer_content(den)
    return num.quo_ground(_qq(c)), den


class RationalFunction:
    """Reduced quotient of two polynomials.

    The denominator is stored primitive with positive leading coefficient; the
    numerator carries the rational content.  Equal functions therefore have
    identical representations.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, num, den=1, variables: Iterable[str] | None = None):
        ring = None
        if variables is not None:
            ring = _ring(tuple(variables))
        for part in (num, den):
            if isinstance(part, Polynomial):
                if ring is not None and part._p.ring != ring:
                    raise AlgebraError("numerator and denominator use different variables")
                ring = part._p.ring
        if ring is None:
            raise AlgebraError("variables are required for a constant rational function")

        def lift(x):
            if isinstance(x, Polynomial):
                return x._p
            return ring(_qq(Fraction(x)))

        self._num, self._den = _reduce(lift(num), lift(den))

    @classmethod
    def _raw(cls, num: PolyElement, den: PolyElement) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj._num, obj._den = _reduce(num, den)
        return obj

    @classmethod
    def constant(cls, value: Scalar, variables: Iterable[str]) -> "RationalFunction":
        ring = _ring(tuple(variables))
        return cls._raw(ring(_qq(Fraction(value))), ring.one)

    @classmethod
    def variable(cls, name: str, variables: Iterable[str] | None = None) -> "RationalFunction":
        return cls(Polynomial.variable(name, variables))

    # -- parts ------------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(str(s) for s in self._num.ring.symbols)

    @property
    def num(self) -> Polynomial:
        """Numerator with the content folded in."""
        return Polynomial._wrap(self._num)

    @property
    def den(self) -> Polynomial:
        """Primitive denominator with positive leading coefficient."""
        return Polynomial._wrap(self._den)

    @property
    def content(self) -> Fraction:
        if not self._num:
            return Fraction(0)
        return _integer_content(self._num)[0]

    @property
    def num_primitive(self) -> Polynomial:
        if not self._num:
            return Polynomial._wrap(self._num)
        return Polynomial._wrap(_integer_content(self._num)[1])

    def is_zero(self) -> bool:
        return not self._num

    def is_constant(self) -> bool:
        return self._num.is_ground and self._den.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise AlgebraError("not a constant")
        return _frac(self._num.LC) if self._num else Fraction(0)

    def used_variables(self) -> tuple[str, ...]:
        used = set(self.num.used_variables()) | set(self.den.used_variables())
        return tuple(v for v in self.variables if v in used)

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            if other._num.ring != self._num.ring:
                raise AlgebraError(
                    f"variable lists differ: {self.variables} vs {other.variables}"
                )
            return other._num, other._den
        if isinstance(other, Polynomial):
            if other._p.ring != self._num.ring:
                raise AlgebraError("variable lists differ")
            return other._p, self._num.ring.one
        if isinstance(other, (int, Fraction)):
            ring = self._num.ring
            return ring(_qq(other)), ring.one
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n, d = o
        if d == self._den:
            return RationalFunction._raw(self._num + n, d)
        return RationalFunction._raw(self._num * d + n * self._den, self._den * d)

    __radd__ = __add__

    def __neg__(self):
        obj = RationalFunction.__new__(RationalFunction)
        obj._num, obj._den = -self._num, self._den
        return obj

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n, d = o
        return RationalFunction._raw(self._num * d - n * self._den, self._den * d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n, d = o
        return RationalFunction._raw(self._num * n, self._den * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n, d = o
        if not n:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction._raw(self._num * d, self._den * n)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self._num:
            raise ZeroDivisionError("division by the zero rational function")
        n, d = o
        return RationalFunction._raw(n * self._den, d * self._num)

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        return RationalFunction._raw(self._num**k, self._den**k)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n, d = o
        if isinstance(other, RationalFunction):
            return self._num == n and self._den == d
        return self._num * d == n * self._den

    def __hash__(self):
        return hash((self.variables, frozenset(self._num.items()), frozenset(self._den.items())))

    # -- evaluation / text ------------------------------------------------

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        return substitute(self, assignment)

    def to_json(self) -> dict:
        """``{"num", "den", "content"}`` with both polynomials primitive."""
        return {
            "num": self.num_primitive.to_text(),
            "den": self.den.to_text(),
            "content": format_rational(self.content),
        }

    @classmethod
    def from_json(cls, data: Mapping, variables: Iterable[str]) -> "RationalFunction":
        variables = tuple(variables)
        num = Polynomial.parse(data["num"], variables) * parse_rational(data["content"])
        den = Polynomial.parse(data["den"], variables)
        return cls(num, den)

    def integral_parts(self) -> tuple[Polynomial, Polynomial]:
        """Integer numerator and denominator, jointly primitive, denominator positively led."""
        c = self.content
        if c == 0:
            return self.num, self.den
        return self.num_primitive * c.numerator, self.den * c.denominator

    def to_text(self) -> str:
        """Human-readable ``(num)/(den)`` form with integer coefficients."""
        if self.is_constant():
            return format_rational(self.constant_value())
        num, den = self.integral_parts()
        num_txt = num.to_text()
        if den.is_constant() and den.leading_coefficient() == 1:
            return num_txt
        den_txt = den.to_text()
        if " " in num_txt:
            num_txt = f"({num_txt})"
        if " " in den_txt or "*" in den_txt:
            den_txt = f"({den_txt})"
        return f"{num_txt}/{den_txt}"

    __str__ = to_text

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"


def ratfunc_make(num: Polynomial, den: Polynomial) -> RationalFunction:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    return RationalFunction(num, den)


def substitute(f: Union[RationalFunction, Polynomial, Scalar], assignment: Mapping[str, Scalar]) -> Fraction:
    """Exact value of ``f`` at a point; every variable of ``f`` must be assigned."""
    if isinstance(f, (int, Fraction)):
        return Fraction(f)
    if isinstance(f, Polynomial):
        return f.evaluate(assignment)
    missing = [v for v in f.used_variables() if v not in assignment]
    if missing:
        raise AlgebraError(f"no value given for {', '.join(missing)}")
    den = f.den.evaluate(assignment)
    if den == 0:
        point = ", ".join(f"{k}={format_rational(v)}" for k, v in sorted(assignment.items()))
        raise ZeroDivisionError(f"denominator {f.den} vanishes at {point}")
    return f.num.evaluate(assignment) / den
