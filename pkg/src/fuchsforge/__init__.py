"""Formal Fuchsian operators over Q and Q(i): Euclidean algebra, resonance
analysis, normal forms and formal solutions."""

from .errors import (
    DSLParseError,
    FuchsError,
    InternalInvariantError,
    LogObstruction,
    NotCoprimeError,
    NotFuchsianError,
    NotSplitError,
    PrecisionError,
    PreconditionError,
    ResonantError,
)
from .fields import QQ, QQI, GaussianRational, get_field
from .poly import EulerPolynomial
from .series import LaurentSeries
from .operators import OperatorSeries, op_add, op_mul, to_d_form, to_euler_form

__version__ = "0.1.0"

from .analysis import (
    gcd0,
    is_fuchsian,
    is_pre_fuchsian,
    natural_order,
    resonance_orders,
    resonance_structure,
    split_roots,
)
from .euclidean import conjugate_by, div_rem, gcd_bezout, invert_conjugacy, lcm, relaxed_fuchsian_div
from .normal_forms import (
    build_pij,
    eulerize_nonresonant,
    formal_factorize,
    fuchsian_bezout,
    minimal_affine_nf,
    minimal_reducible_nf,
    solve_ULVM,
    sylvester_solve,
    truncate_equiv,
    verify_conjugacy,
    verify_result,
)
from .solutions import (
    chain_solve,
    classify_apparent,
    companion,
    first_order_solve,
    frobenius_solution,
)
from .dsl import parse, evaluate, parse_operator, print_text
