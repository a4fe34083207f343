"""JSON forms of scalars, polynomials, series and operators.

Operators use the schema

    {"field": "Q" | "Qi", "kmin": int, "trunc": int,
     "terms": [{"k": int, "poly": ["a/b", ...]}, ...]}

with only the nonzero terms listed.  Everything here round-trips exactly.
"""

import json

from .errors import PreconditionError
from .fields import get_field
from .operators import OperatorSeries
from .poly import EulerPolynomial
from .series import LaurentSeries


def scalar_to_json(x, field):
    return field.format(x)


def scalar_from_json(s, field):
    return field.parse(s)


def poly_to_json(p, field):
    return [field.format(c) for c in EulerPolynomial(p).coeffs]


def poly_from_json(data, field):
    return EulerPolynomial([field.parse(s) for s in data])


def operator_to_json(L):
    field = L.field
    return {
        "field": field.name,
        "kmin": L.kmin,
        "trunc": L.trunc,
        "terms": [{"k": k, "poly": poly_to_json(p, field)} for k, p in L.items()],
    }


def operator_from_json(data):
    try:
        field = get_field(data["field"])
        terms = {int(t["k"]): poly_from_json(t["poly"], field) for t in data["terms"]}
        L = OperatorSeries.from_dict(terms, int(data["trunc"]), field)
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed operator JSON: {exc}") from exc
    if not L.is_zero() and L.kmin != int(data["kmin"]):
        raise PreconditionError("operator JSON kmin does not match its terms")
    return L


def series_to_json(s):
    return {
        "kmin": s.kmin,
        "trunc": s.trunc,
        "coeffs": [s.field.format(c) for c in s.coeffs],
    }


def series_from_json(data, field):
    return LaurentSeries(int(data["kmin"]), int(data["trunc"]), [field.parse(c) for c in data["coeffs"]], field)


def dumps(obj):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
