"""Exact circuit arrays of triangular resistor grids.

The package reduces all-one triangular grids by Delta-Y moves, builds the
numeric, one-variable and two-variable circuit arrays, mines their
annihilating shift operators and checks them against the nine-power forms.
"""

from .algebra import (
    AlgebraError,
    CanonicalPolynomial,
    Polynomial,
    RationalFunction,
    canonicalize,
    poly_gcd,
    ratfunc_make,
    substitute,
)
from .arrays import (
    CircuitArrayTable,
    build_cm_array,
    build_cx_array,
    build_numeric_array,
    closed_form_row,
    verify_closed_form,
)
from .audit import AuditConfig, AuditResult, render_ledger, run_audit
from .conjecture import (
    Verdict,
    VerdictReport,
    check_strong_form,
    check_weak_form,
    compare_exponent_arrays,
    exponent_array_literal,
    exponent_array_reference,
    extract_row_factorizations,
)
from .grid import (
    EdgeAddress,
    GridLabeling,
    Triangle,
    delta_transform,
    make_all_one_grid,
    reduce_grid,
    reduce_times,
    reduced_edge,
    wye_transform,
)
from .oracle import WeightedGraph, corner_resistances, effective_resistance, grid_to_graph, reduce_with_tails
from .recurrence import (
    ExactSequence,
    OperatorPolynomial,
    apply_operator,
    mine_annihilator,
    minimal_annihilator,
    powers_of_nine_factorization,
)

__version__ = "0.1.0"
