"""Shift-operator polynomials and exact recurrence mining.

An operator A = a_0 + a_1 E + ... + a_d E^d acts on a sequence by
(A G)_t = sum a_i G_{t+i}.  A annihilates G when A G is identically zero; the
minimal monic annihilator is the characteristic polynomial of the shortest
linear recurrence G satisfies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy import Poly, Symbol
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .algebra import RationalFunction, format_rational

_E = Symbol("E")


class RecurrenceError(ValueError):
    pass


@dataclass(frozen=True)
class ExactSequence:
    terms: tuple
    start: int = 0

    def __post_init__(self):
        if not self.terms:
            raise RecurrenceError("a sequence needs at least one term")
        object.__setattr__(self, "terms", tuple(Fraction(t) for t in self.terms))

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, k):
        return self.terms[k]

    def is_zero(self) -> bool:
        return all(t == 0 for t in self.terms)

    def drop(self, k: int) -> "ExactSequence":
        return ExactSequence(self.terms[k:], self.start + k)

    def to_text(self) -> str:
        return "\n".join(format_rational(t) for t in self.terms) + "\n"

    @classmethod
    def parse(cls, text: str, start: int = 0) -> "ExactSequence":
        terms = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                terms.extend(Fraction(tok) for tok in line.replace(",", " ").split())
        return cls(tuple(terms), start)


def _root_text(r: Fraction) -> str:
    if r == 0:
        return "E"
    sign = "-" if r > 0 else "+"
    return f"E {sign} {format_rational(abs(r))}"


class OperatorPolynomial:
    """Polynomial in the shift E with rational coefficients, lowest degree first.

    ``roots`` optionally records a known splitting as ``{root: multiplicity}``.
    """

    __slots__ = ("coeffs", "roots")

    def __init__(self, coeffs: Iterable, roots: Mapping | None = None):
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs or cs[-1] == 0:
            raise RecurrenceError("the zero operator has no leading coefficient")
        self.coeffs = tuple(cs)
        self.roots = None if roots is None else {Fraction(r): int(m) for r, m in roots.items() if m}

    @classmethod
    def from_roots(cls, roots: Mapping) -> "OperatorPolynomial":
        poly = cls([1])
        for r, m in sorted(roots.items(), key=lambda kv: -Fraction(kv[0])):
            for _ in range(m):
                poly = poly * cls([-Fraction(r), 1])
        poly.roots = {Fraction(r): int(m) for r, m in roots.items() if m}
        return poly

    @classmethod
    def from_recursion(cls, coefficients: Sequence) -> "OperatorPolynomial":
        """Characteristic polynomial of G_s = c_1 G_{s-1} + ... + c_d G_{s-d}."""
        d = len(coefficients)
        cs = [Fraction(0)] * (d + 1)
        cs[d] = Fraction(1)
        for i, c in enumerate(coefficients, start=1):
            cs[d - i] = -Fraction(c)
        return cls(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def monic(self) -> "OperatorPolynomial":
        lc = self.leading
        return OperatorPolynomial([c / lc for c in self.coeffs], self.roots)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        roots = None
        if self.roots is not None and other.roots is not None:
            roots = dict(self.roots)
            for r, m in other.roots.items():
                roots[r] = roots.get(r, 0) + m
        return OperatorPolynomial(out, roots)

    def __eq__(self, other):
        return isinstance(other, OperatorPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def divmod_linear(self, root) -> tuple["OperatorPolynomial", Fraction]:
        """Synthetic division by (E - root)."""
        root = Fraction(root)
        if self.degree == 0:
            return self, self.coeffs[0]
        acc = Fraction(0)
        quotient = []
        for c in reversed(self.coeffs):
            acc = acc * root + c
            quotient.append(acc)
        rem = quotient.pop()
        return OperatorPolynomial(list(reversed(quotient))), rem

    def divides(self, other: "OperatorPolynomial") -> bool:
        """True when ``self`` divides ``other`` exactly."""
        rem = list(other.coeffs)
        d = self.degree
        lc = self.leading
        for top in range(len(rem) - 1, d - 1, -1):
            q = rem[top] / lc
            if q:
                for i, c in enumerate(self.coeffs):
                    rem[top - d + i] -= q * c
        return all(c == 0 for c in rem[:d]) if d else True

    def to_sympy(self) -> Poly:
        return Poly([QQ(c.numerator, c.denominator) for c in reversed(self.coeffs)], _E, domain=QQ)

    def rational_roots(self) -> dict[Fraction, int]:
        if self.degree == 0:
            return {}
        return {Fraction(int(r.p), int(r.q)): int(m) for r, m in self.to_sympy().ground_roots().items()}

    def to_text(self) -> str:
        """Expanded form, highest power first, e.g. ``E^2 - E - 1``."""
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("E" if k == 1 else f"E^{k}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{format_rational(mag)}*{mono}"
            else:
                body = format_rational(mag)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def factored_text(self) -> str:
        """Product of rational linear factors, largest root first, times any remainder."""
        roots = self.roots if self.roots is not None else self.rational_roots()
        rest = self
        for r, m in roots.items():
            for _ in range(m):
                rest, _ = rest.divmod_linear(r)
        pieces = []
        for r in sorted(roots, reverse=True):
            f = f"({_root_text(r).replace(' ', '')})"
            pieces.append(f if roots[r] == 1 else f"{f}^{roots[r]}")
        lead = rest.leading
        if rest.degree > 0:
            pieces.append(f"({rest.to_text()})")
        elif lead != 1 or not pieces:
            pieces.insert(0, format_rational(lead))
        return "".join(pieces)

    def __repr__(self):
        return f"OperatorPolynomial({self.to_text()!r})"

    __str__ = to_text


def apply_operator(op: OperatorPolynomial, seq: ExactSequence) -> ExactSequence:
    n = len(seq)
    if n <= op.degree:
        raise RecurrenceError(f"sequence of length {n} is too short for an operator of degree {op.degree}")
    terms = seq.terms
    out = [sum(c * terms[t + i] for i, c in enumerate(op.coeffs) if c) for t in range(n - op.degree)]
    return ExactSequence(tuple(Fraction(x) for x in out), seq.start)


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> tuple[list[Fraction] | None, bool]:
    """Solve rows * a = rhs exactly; returns (solution or None, unique)."""
    d = len(rows[0])
    aug = [[QQ(x.numerator, x.denominator) for x in row] + [QQ(b.numerator, b.denominator)] for row, b in zip(rows, rhs)]
    red, pivots = DomainMatrix(aug, (len(aug), d + 1), QQ).rref()
    if d in pivots:
        return None, False
    mat = red.to_list()
    sol = [Fraction(0)] * d
    for r, col in enumerate(pivots):
        v = mat[r][d]
        sol[col] = Fraction(int(v.numerator), int(v.denominator))
    return sol, len(pivots) == d


@dataclass
class MiningResult:
    """Outcome of a minimal-annihilator search."""

    operator: OperatorPolynomial | None
    max_order: int
    terms: int
    fitted_terms: int
    held_out: int
    unique_fit: bool = True

    @property
    def conclusive(self) -> bool:
        return self.operator is not None


def required_length(max_order: int) -> int:
    return 2 * max_order + 2


def mine_annihilator(seq: ExactSequence | Sequence, max_order: int, held_out: int = 2) -> MiningResult:
    """Least-order monic annihilator, fitted on all but ``held_out`` terms.

    For each order d the recurrence coefficients are solved exactly from the
    fitting window; the candidate is accepted only if it also annihilates the
    held-out tail.  A rank-deficient window falls back to solving over every
    term, which still guarantees the operator kills the whole sequence.
    """
    if not isinstance(seq, ExactSequence):
        seq = ExactSequence(tuple(seq))
    n = len(seq)
    if max_order < 0:
        raise RecurrenceError("maxOrder must be nonnegative")
    if n < required_length(max_order):
        raise RecurrenceError(
            f"mining up to order {max_order} needs at least {required_length(max_order)} terms, got {n}"
        )
    terms = seq.terms
    fit = n - held_out
    if seq.is_zero():
        return MiningResult(OperatorPolynomial([1]), max_order, n, fit, held_out)
    for d in range(1, max_order + 1):
        rows = [list(terms[t : t + d]) for t in range(fit - d)]
        rhs = [-terms[t + d] for t in range(fit - d)]
        sol, unique = _solve(rows, rhs)
        if sol is None:
            continue
        op = OperatorPolynomial(sol + [Fraction(1)])
        if not unique:
            rows = [list(terms[t : t + d]) for t in range(n - d)]
            rhs = [-terms[t + d] for t in range(n - d)]
            full, _ = _solve(rows, rhs)
            if full is None:
                continue
            op = OperatorPolynomial(full + [Fraction(1)])
        if apply_operator(op, seq).is_zero():
            return MiningResult(op, max_order, n, fit, held_out, unique)
    return MiningResult(None, max_order, n, fit, held_out)


def minimal_annihilator(seq: ExactSequence | Sequence, max_order: int) -> OperatorPolynomial | None:
    return mine_annihilator(seq, max_order).operator


def product_annihilator(a: OperatorPolynomial, b: OperatorPolynomial) -> OperatorPolynomial:
    """Annihilator of a termwise product from the root multisets of the factors.

    Root r r' gets multiplicity m + m' - 1; products reached by several pairs keep
    the largest multiplicity.
    """
    if a.roots is None or b.roots is None:
        raise RecurrenceError("product_annihilator needs operators with known root multisets")
    roots: dict[Fraction, int] = {}
    for r, m in a.roots.items():
        for s, k in b.roots.items():
            roots[r * s] = max(roots.get(r * s, 0), m + k - 1)
    return OperatorPolynomial.from_roots(roots)


def sum_annihilator(ops: Sequence[OperatorPolynomial]) -> OperatorPolynomial:
    if not ops:
        raise RecurrenceError("sum_annihilator needs at least one operator")
    out = ops[0]
    for op in ops[1:]:
        out = out * op
    return out


@dataclass
class NinePowerFactorization:
    factors: list  # [(k, multiplicity)] meaning (E - 9^k)^multiplicity
    remainder: OperatorPolynomial

    @property
    def full_success(self) -> bool:
        return self.remainder.degree == 0

    def exponents(self) -> dict[int, int]:
        return dict(self.factors)

    def expand(self) -> OperatorPolynomial:
        out = self.remainder
        for k, m in self.factors:
            for _ in range(m):
                out = out * OperatorPolynomial([-(9**k), 1])
        return out

    def to_text(self) -> str:
        parts = [f"(E-{9 ** k})^{m}" for k, m in self.factors]
        rem = self.remainder
        if rem.degree > 0 or rem.leading != 1 or not parts:
            parts.append(f"* ({rem.to_text()})" if parts else f"({rem.to_text()})")
        return " ".join(parts)

    __str__ = to_text


def powers_of_nine_factorization(op: OperatorPolynomial, k_max: int) -> NinePowerFactorization:
    if k_max < 0:
        raise RecurrenceError("kMax must be nonnegative")
    factors = []
    rest = op
    for k in range(k_max + 1):
        m = 0
        while rest.degree > 0:
            q, r = rest.divmod_linear(9**k)
            if r != 0:
                break
            rest, m = q, m + 1
        if m:
            factors.append((k, m))
    return NinePowerFactorization(factors, rest)


def exponents_operator(exponents: Mapping[int, int]) -> OperatorPolynomial:
    """prod (E - 9^k)^e over the given exponent map."""
    return OperatorPolynomial.from_roots({Fraction(9**k): e for k, e in exponents.items() if e})


# -- coefficient sequences of array rows ----------------------------------------


def _coefficient_key(monom: tuple[int, ...]):
    return monom[0] if len(monom) == 1 else monom


def polynomial_coefficient_sequences(polys: Sequence, start: int = 0) -> dict:
    """Coefficient-by-coefficient sequences of a list of polynomials."""
    keys = set()
    for p in polys:
        keys.update(p.terms)
    out = {}
    for monom in sorted(keys, key=lambda m: (sum(m), m)):
        out[_coefficient_key(monom)] = ExactSequence(tuple(p.coefficient(monom) for p in polys), start)
    return out


NORMALIZATIONS = ("canonical", "integral", "structural")


@dataclass
class CoefficientSequences:
    row: int
    part: str
    normalization: str
    start: int
    sequences: dict = field(default_factory=dict)
    content: ExactSequence | None = None
    dropped: int = 0


def coefficient_sequences(table, row: int, part: str, normalization: str = "canonical", factorization=None, drop_prefix: int = 0) -> CoefficientSequences:
    """Coefficient sequences along one row of a symbolic circuit array.

    ``canonical``: primitive numerator or denominator, contents as their own
    sequence.  ``integral``: integer numerator and denominator with no common
    integer factor.  ``structural``: the product form supplied by a row
    factorization (``factorization.structural_parts(j)``).
    """
    if part not in ("num", "den"):
        raise RecurrenceError("part must be 'num' or 'den'")
    if normalization not in NORMALIZATIONS:
        raise RecurrenceError(f"normalization must be one of {NORMALIZATIONS}")
    columns = sorted(j for (i, j) in table.entries if i == row)
    if not columns:
        raise RecurrenceError(f"row {row} is absent from the table")
    if normalization == "structural":
        if factorization is None:
            raise RecurrenceError("structural normalization needs a row factorization")
        columns = [j for j in columns if j in factorization.p]
    columns = columns[drop_prefix:]
    if not columns:
        raise RecurrenceError(f"row {row} has no columns left after dropping {drop_prefix}")
    polys, contents = [], []
    for j in columns:
        v: RationalFunction = table[(row, j)]
        if normalization == "canonical":
            polys.append(v.num_primitive if part == "num" else v.den)
            contents.append(v.content)
        elif normalization == "integral":
            polys.append(v.integral_parts()[0 if part == "num" else 1])
        else:
            polys.append(factorization.structural_parts(j)[0 if part == "num" else 1])
    out = CoefficientSequences(row, part, normalization, columns[0], dropped=drop_prefix)
    out.sequences = polynomial_coefficient_sequences(polys, columns[0])
    if normalization == "canonical" and part == "num":
        out.content = ExactSequence(tuple(contents), columns[0])
    return out
