"""Empirical checks of the nine-power annihilator conjectures for circuit-array rows.

Weak form: every coefficient sequence of a row's numerators and denominators
is annihilated by a product of factors (E - 9^k).

Strong form: row r factors as a fixed quotient of per-row polynomials p_r(j),

    odd r:   C[r,j] = K p_{r-3}(j-1) p_{r-1}(j) / (p_{r-2}(j) p_r(j))
    even r:  C[r,j] = K p_{r-4}(j-1) p_r(j) / p_{r-1}(j)^2

with p_t = 1 for t < 0, deg p_r = floor(r/2) + 1, and the coefficient
sequences of p_r annihilated by nine-power products whose exponents are given
by a three-index exponent array e.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .algebra import Polynomial, canonicalize, format_rational
from .arrays import CircuitArrayTable, row_start
from .recurrence import (
    ExactSequence,
    apply_operator,
    coefficient_sequences,
    exponents_operator,
    mine_annihilator,
    polynomial_coefficient_sequences,
    powers_of_nine_factorization,
)

STATUSES = ("pass", "fail", "reference-discrepancy", "inconclusive")


class ConjectureError(ValueError):
    pass


# -- verdicts -------------------------------------------------------------------


@dataclass
class Verdict:
    check: str
    row: int | None
    status: str
    witnesses: list = field(default_factory=list)
    detail: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ConjectureError(f"unknown status {self.status!r}")
        if self.status == "fail" and not self.witnesses:
            raise ConjectureError(f"failing check {self.check!r} has no witness")

    def to_json(self) -> dict:
        out = {"check": self.check, "row": self.row, "status": self.status, "witnesses": self.witnesses}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerdictReport:
    verdicts: list = field(default_factory=list)

    def add(self, verdict: Verdict) -> Verdict:
        self.verdicts.append(verdict)
        return verdict

    def extend(self, other: "VerdictReport") -> None:
        self.verdicts.extend(other.verdicts)

    def by_check(self, check: str) -> list[Verdict]:
        return [v for v in self.verdicts if v.check == check]

    def statuses(self, check: str | None = None) -> list[str]:
        return [v.status for v in self.verdicts if check is None or v.check == check]

    @property
    def failed(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.status == "fail"]

    @property
    def discrepancies(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.status == "reference-discrepancy"]

    def to_json(self) -> list:
        return [v.to_json() for v in self.verdicts]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"


def _combine(statuses: Iterable[str]) -> str:
    statuses = list(statuses)
    if "fail" in statuses:
        return "fail"
    if "inconclusive" in statuses:
        return "inconclusive"
    return "pass"


# -- exponent array -----------------------------------------------------------------


@dataclass
class ExponentArray:
    values: dict = field(default_factory=dict)  # (i, j, k) -> exponent, absent means 0
    source: str = ""
    precedence: tuple = ()
    rule_of: dict = field(default_factory=dict)  # (i, j, k) -> rule letter

    def get(self, i: int, j: int, k: int) -> int:
        return self.values.get((i, j, k), 0)

    def cell(self, i: int, j: int) -> tuple[int, ...]:
        """Exponents of one cell: k = 0..i in column 0, k = 1..(i or i+1) elsewhere."""
        if j == 0:
            ks = range(0, i + 1)
        else:
            ks = range(1, (i + 2) if j == i + 1 else (i + 1))
        return tuple(self.get(i, j, k) for k in ks)

    def cell_exponents(self, i: int, j: int) -> dict[int, int]:
        """Cell as a {k: exponent} map of nine-power factors."""
        first = 0 if j == 0 else 1
        return {first + n: e for n, e in enumerate(self.cell(i, j)) if e}

    def has_cell(self, i: int, j: int) -> bool:
        return any(key[0] == i and key[1] == j for key in self.values)


def exponent_array_literal(i_max: int) -> ExponentArray:
    """Generate the array by its recursive rules.

    Precedence, per cell: (b) e[i,0,i] = 1; (c) e[i+1,0,k] = e[i,0,k] + k;
    (d) e[i,i+1,k+1] = e[i,0,k]; then (f) e[i,j,k] = e[i-1,j,k] + k for
    i > j >= 1; then (e) e[i,i,k] = e[i,i-1,k] + k; everything else (a) is 0.
    """
    if i_max < 0:
        raise ConjectureError("iMax must be nonnegative")
    arr = ExponentArray(source="literal rules", precedence=("b", "c", "d", "f", "e", "a"))
    vals, rule = arr.values, arr.rule_of

    def put(key, value, letter):
        if key in rule:
            return
        rule[key] = letter
        if value:
            vals[key] = value

    for i in range(i_max + 1):
        put((i, 0, i), 1, "b")
        if i >= 1:
            for k in range(0, i):
                put((i, 0, k), arr.get(i - 1, 0, k) + k, "c")
        for k in range(0, i + 1):
            put((i, i + 1, k + 1), arr.get(i, 0, k), "d")
        for j in range(1, i):
            for k in range(1, i + 1):
                put((i, j, k), arr.get(i - 1, j, k) + k, "f")
        if i >= 1:
            for k in range(1, i + 1):
                put((i, i, k), arr.get(i, i - 1, k) + k, "e")
    return arr


_REFERENCE_ROWS = {
    0: [(1,), (1,)],
    1: [(1, 1), (2,), (1, 1)],
    2: [(1, 2, 1), (3, 2), (2, 3), (1, 2, 1)],
    3: [(1, 3, 3, 1), (4, 4, 2), (3, 5, 3), (2, 4, 4)],
}


def exponent_array_reference() -> ExponentArray:
    """Printed rows 0..3 of the exponent array, hardcoded."""
    arr = ExponentArray(source="printed table")
    for i, cells in _REFERENCE_ROWS.items():
        for j, cell in enumerate(cells):
            first = 0 if j == 0 else 1
            for n, e in enumerate(cell):
                arr.values[(i, j, first + n)] = e
                arr.rule_of[(i, j, first + n)] = "printed"
    return arr


def reference_cells() -> list[tuple[int, int]]:
    return [(i, j) for i, cells in _REFERENCE_ROWS.items() for j in range(len(cells))]


def _rule_for_cell(i: int, j: int) -> str:
    if j == 0:
        return "b/c"
    if j == i + 1:
        return "d"
    if j == i:
        return "e"
    return "f"


def _one_step(ref: ExponentArray, i: int, j: int) -> tuple[int, ...] | None:
    """Apply the cell's own rule once to printed neighbouring cells."""
    if j == 0:
        if i == 0:
            return (1,)
        return tuple(ref.get(i - 1, 0, k) + k for k in range(i)) + (1,)
    if j == i + 1:
        return tuple(ref.get(i, 0, k) for k in range(i + 1))
    if j == i:
        return tuple(ref.get(i, i - 1, k) + k for k in range(1, i + 1))
    if (i - 1, j) not in reference_cells():
        return None
    return tuple(ref.get(i - 1, j, k) + k for k in range(1, i + 1))


def compare_exponent_arrays(literal: ExponentArray | None = None, reference: ExponentArray | None = None) -> VerdictReport:
    """Cell-by-cell audit of the recursive rules against the printed table.

    Two comparisons per printed cell: the fully generated literal array, and a
    single application of the cell's rule to the printed neighbours.
    """
    literal = literal or exponent_array_literal(3)
    reference = reference or exponent_array_reference()
    report = VerdictReport()
    for i, j in reference_cells():
        printed = reference.cell(i, j)
        generated = literal.cell(i, j)
        rule = _rule_for_cell(i, j)
        step = _one_step(reference, i, j)
        witness = {
            "cell": [i, j],
            "rule": rule,
            "printed": list(printed),
            "generated": list(generated),
            "one_step": None if step is None else list(step),
        }
        mismatched_k = []
        if step is not None and step != printed:
            first = 0 if j == 0 else 1
            mismatched_k = [first + n for n, (a, b) in enumerate(zip(step, printed)) if a != b]
            witness["mismatched_k"] = mismatched_k
        same = generated == printed and (step is None or step == printed)
        report.add(
            Verdict(
                "exponent-array",
                i,
                "pass" if same else "reference-discrepancy",
                [witness],
                f"e[{i},{j},.] rule ({rule})",
            )
        )
    return report


def predicted_cell(row: int, col: int, reference: ExponentArray | None = None) -> tuple[dict[int, int] | None, str]:
    """Exponent map for one cell: printed if tabulated, else from rule (d) on column 0."""
    reference = reference or exponent_array_reference()
    if (row, col) in reference_cells():
        return reference.cell_exponents(row, col), "printed"
    if row in _REFERENCE_ROWS and col == row + 1:
        return {k + 1: reference.get(row, 0, k) for k in range(row + 1) if reference.get(row, 0, k)}, "rule d"
    return None, "untabulated"


# -- row factorizations ---------------------------------------------------------------


class FactorBank:
    """Extracted p_r(j) for every processed row, with p_t = 1 for t < 0."""

    def __init__(self, variables):
        self.variables = tuple(variables)
        self.p: dict[tuple[int, int], Polynomial] = {}
        self._one = Polynomial.constant(1, self.variables)

    def __call__(self, r: int, j: int) -> Polynomial:
        if r < 0:
            return self._one
        try:
            return self.p[(r, j)]
        except KeyError:
            raise ConjectureError(f"p_{r}({j}) has not been extracted") from None

    def has(self, r: int, j: int) -> bool:
        return r < 0 or (r, j) in self.p


@dataclass
class RowFactorization:
    row: int
    structure: str  # "odd quotient", "even quotient" or "closed form"
    K: Fraction
    p: dict  # j -> Polynomial
    reference_column: int | None
    raw_contents: dict  # j -> content of p_r(j)
    bank: FactorBank = field(repr=False)

    @property
    def columns(self) -> list[int]:
        return sorted(self.p)

    def degrees(self) -> dict[int, int]:
        return {j: p.degree() for j, p in sorted(self.p.items())}

    def structural_parts(self, j: int) -> tuple[Polynomial, Polynomial]:
        """(numerator, denominator) of the quotient form at column j."""
        r, P, K = self.row, self.bank, self.K
        if self.structure == "closed form":
            raise ConjectureError("row 0 has no quotient form")
        if r % 2:
            return P(r - 3, j - 1) * P(r - 1, j) * K, P(r - 2, j) * P(r, j)
        return P(r - 4, j - 1) * P(r, j) * K, P(r - 1, j) ** 2

    def reassemble(self, j: int):
        from .algebra import RationalFunction

        num, den = self.structural_parts(j)
        return RationalFunction(num, den)

    def to_json(self) -> dict:
        return {
            "row": self.row,
            "structure": self.structure,
            "K": format_rational(self.K),
            "reference_column": self.reference_column,
            "p": {str(j): str(canonicalize(p)) for j, p in sorted(self.p.items())},
        }


def _p0_column(cx: CircuitArrayTable, j: int) -> Polynomial:
    return cx[(0, j)].num_primitive


def extract_row_factorizations(cx: CircuitArrayTable, max_row: int, j_range: Iterable[int] | None = None, reference_column: int = 5) -> tuple[dict, VerdictReport]:
    """Extract p_0 .. p_{max_row} by multiplying each entry back by the known factors.

    Row r's quotient determines K*p_r (even r) or p_r/K (odd r) once the lower
    rows are known; the scale is fixed by making p_r primitive with positive
    leading coefficient at ``reference_column`` (or the row's first column if
    later).  Any entry whose multiplied-back form is not a polynomial fails.
    """
    if cx.variant != "univariate":
        raise ConjectureError("structural extraction runs on the one-variable array")
    bank = FactorBank(cx.variables)
    report = VerdictReport()
    cols_all = sorted({j for (_, j) in cx.entries})
    if j_range is not None:
        wanted = set(j_range)
        cols_all = [j for j in cols_all if j in wanted]
    factorizations: dict[int, RowFactorization] = {}

    # row 0: primitive numerators 3*9^(j-2)*X - 1 for j >= 2
    p0 = {j: _p0_column(cx, j) for j in cols_all if j >= 2 and (0, j) in cx}
    bank.p.update({(0, j): p for j, p in p0.items()})
    factorizations[0] = RowFactorization(0, "closed form", Fraction(1), p0, None, {j: Fraction(1) for j in p0}, bank)

    for r in range(1, max_row + 1):
        cols = [j for j in cols_all if j >= row_start(r) and (r, j) in cx]
        if not cols:
            break
        raw: dict[int, Polynomial] = {}
        bad = None
        for j in cols:
            needed = [(r - 1, j), (r - 2, j), (r - 3, j - 1), (r - 4, j - 1)]
            if not all(bank.has(*n) for n in needed):
                continue
            v = cx[(r, j)]
            if r % 2:
                top = bank(r - 3, j - 1) * bank(r - 1, j) * v.den
                bottom = v.num * bank(r - 2, j)
            else:
                top = v.num * bank(r - 1, j) ** 2
                bottom = v.den * bank(r - 4, j - 1)
            if not bottom.divides(top):
                bad = j
                break
            raw[j] = top.exact_div(bottom)
        if bad is not None or not raw:
            report.add(Verdict("strong-structure", r, "fail", [{"column": bad, "reason": "entry does not split into the predicted factors"}]))
            break
        jref = max(reference_column, row_start(r))
        if jref not in raw:
            jref = max(raw)
        content = canonicalize(raw[jref]).content
        K = content if r % 2 == 0 else 1 / content
        p = {j: (q * (1 / K) if r % 2 == 0 else q * K) for j, q in raw.items()}
        bank.p.update({(r, j): q for j, q in p.items()})
        contents = {j: canonicalize(q).content for j, q in p.items()}
        fz = RowFactorization(r, "odd quotient" if r % 2 else "even quotient", K, p, jref, contents, bank)
        factorizations[r] = fz
        mism = [j for j in p if fz.reassemble(j) != cx[(r, j)]]
        status = "pass" if not mism else "fail"
        report.add(
            Verdict(
                "strong-structure",
                r,
                status,
                [{"columns": [min(p), max(p)], "K": format_rational(K), "reference_column": jref,
                  "raw_contents": {str(j): format_rational(c) for j, c in sorted(contents.items()) if c != 1},
                  "mismatched_columns": mism}],
                f"{fz.structure}, K = {format_rational(K)}",
            )
        )
    return factorizations, report


def extract_row_factorization(cx: CircuitArrayTable, r: int, j_range: Iterable[int] | None = None) -> RowFactorization:
    fz, report = extract_row_factorizations(cx, r, j_range)
    if r not in fz:
        witness = report.failed[0].witnesses if report.failed else []
        raise ConjectureError(f"row {r} could not be factored: {witness}")
    return fz[r]


# -- weak form --------------------------------------------------------------------------


def _mine_verdict(check: str, row: int, label: str, seq: ExactSequence, max_order: int, k_max: int) -> Verdict:
    res = mine_annihilator(seq, max_order)
    witness = {"sequence": label, "terms": len(seq), "start": seq.start}
    if not res.conclusive:
        return Verdict(check, row, "inconclusive", [witness], f"no annihilator of order <= {max_order}")
    op = res.operator
    witness["annihilator"] = op.to_text()
    witness["held_out_verified"] = bool(res.unique_fit)
    assert apply_operator(op, seq).is_zero()
    fact = powers_of_nine_factorization(op, k_max)
    witness["factored"] = fact.to_text()
    witness["exponents"] = {str(k): m for k, m in fact.factors}
    return Verdict(check, row, "pass" if fact.full_success else "fail", [witness])


def _key_text(key, variables) -> str:
    if key == "content":
        return "content"
    if isinstance(key, int):
        return f"{variables[0]}^{key}"
    return "*".join(f"{v}^{e}" for v, e in zip(variables, key))


def check_weak_form(table: CircuitArrayTable, row: int, max_order: int = 12, k_max: int = 8, normalization: str = "structural", factorization: RowFactorization | None = None, drop_prefix: int = 0, columns: Iterable[int] | None = None) -> VerdictReport:
    """Mine every numerator/denominator coefficient sequence of one row and factor over 9^k."""
    report = VerdictReport()
    if columns is not None:
        wanted = set(columns)
        table = CircuitArrayTable(table.variant, {k: v for k, v in table.entries.items() if k[1] in wanted}, table.max_column, table.variables)
    for part in ("num", "den"):
        seqs = coefficient_sequences(table, row, part, normalization, factorization, drop_prefix)
        items = list(seqs.sequences.items())
        if seqs.content is not None:
            items.append(("content", seqs.content))
        for key, seq in items:
            label = f"{part} {_key_text(key, table.variables)}"
            v = _mine_verdict("weak-form", row, label, seq, max_order, k_max)
            v.witnesses[0]["normalization"] = normalization
            v.witnesses[0]["dropped_columns"] = seqs.dropped
            report.add(v)
    return report


# -- strong form --------------------------------------------------------------------------

E_ROW_MAPS = {
    "floor(r/2)": lambda r: r // 2,
    "ceil(r/2)": lambda r: (r + 1) // 2,
    "r": lambda r: r,
    "2r": lambda r: 2 * r,
}


def degree_conventions(r: int) -> dict[str, int]:
    """Expected deg p_r under the two row/c conventions."""
    c_iii = r // 2 + 1
    c_quot = r // 2 + 1 if r % 2 == 0 else (r + 3) // 2
    return {"r in {2(c-1), 2(c-1)+1}": c_iii, "r in {2(c-1), 2(c-1)-1}": c_quot}


def check_strong_form(cx: CircuitArrayTable, c_max: int, max_order: int = 12, k_max: int = 8, reference_column: int = 5) -> tuple[VerdictReport, dict]:
    """Structure, degree and exponent checks for rows 0 .. 2(cMax-1)+1."""
    max_row = 2 * (c_max - 1) + 1
    fz, report = extract_row_factorizations(cx, max_row, reference_column=reference_column)
    reference = exponent_array_reference()
    map_hits = {name: {"match": 0, "mismatch": 0, "untabulated": 0} for name in E_ROW_MAPS}

    for r in range(0, max_row + 1):
        if r not in fz:
            continue
        rf = fz[r]
        degs = rf.degrees()
        deg_status = {}
        for name, expect in degree_conventions(r).items():
            deg_status[name] = all(d == expect for d in degs.values())
        report.add(
            Verdict(
                "strong-degree",
                r,
                "pass" if deg_status["r in {2(c-1), 2(c-1)+1}"] else "fail",
                [{"degrees": sorted(set(degs.values())), "conventions": deg_status,
                  "expected": degree_conventions(r)}],
            )
        )
        polys = [rf.p[j] for j in rf.columns]
        seqs = polynomial_coefficient_sequences(polys, rf.columns[0])
        for t, seq in seqs.items():
            res = mine_annihilator(seq, max_order)
            witness = {"coefficient": f"X^{t}", "terms": len(seq), "start": seq.start}
            if not res.conclusive:
                report.add(Verdict("strong-exponents", r, "inconclusive", [witness], f"no annihilator of order <= {max_order}"))
                continue
            fact = powers_of_nine_factorization(res.operator, k_max)
            mined = fact.exponents() if fact.full_success else None
            witness["annihilator"] = res.operator.factored_text()
            witness["nine_power_exponents"] = None if mined is None else {str(k): m for k, m in sorted(mined.items())}
            matches = {}
            for name, fn in E_ROW_MAPS.items():
                predicted, src = predicted_cell(fn(r), t, reference)
                if predicted is None:
                    matches[name] = "untabulated"
                    map_hits[name]["untabulated"] += 1
                    continue
                ok = mined == predicted
                matches[name] = "match" if ok else "mismatch"
                map_hits[name]["match" if ok else "mismatch"] += 1
            witness["e_row_maps"] = matches
            predicted, src = predicted_cell(r // 2, t, reference)
            witness["predicted"] = None if predicted is None else {str(k): m for k, m in sorted(predicted.items())}
            witness["predicted_source"] = src
            if mined is None:
                status = "fail"
            elif predicted is None:
                status = "inconclusive"
            else:
                status = "pass" if mined == predicted else "fail"
            report.add(Verdict("strong-exponents", r, status, [witness]))
    maps = {
        name: ("reproduces every tabulated cell" if h["mismatch"] == 0 and h["match"] else "does not reproduce")
        for name, h in map_hits.items()
    }
    report.add(
        Verdict(
            "strong-e-row-map",
            None,
            "pass" if any(v.startswith("reproduces") for v in maps.values()) else "fail",
            [{"maps": maps, "counts": map_hits}],
        )
    )
    return report, fz
