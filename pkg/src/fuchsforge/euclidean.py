"""Ore's Euclidean toolkit for operators with truncated Laurent coefficients.

Operators are handled in the form sum_d a_d(t) E^d (coefficients on the
left), which is the grid of :class:`OperatorSeries` read column by column.
"""

from dataclasses import dataclass

from .analysis import is_fuchsian
from .errors import (
    InternalInvariantError,
    NotCoprimeError,
    NotFuchsianError,
    PreconditionError,
    PrecisionError,
)
from .linalg import solve
from .operators import OperatorSeries, as_operator, op_mul
from .series import LaurentSeries


@dataclass(frozen=True)
class DivisionResult:
    quotient: OperatorSeries
    remainder: OperatorSeries

    @property
    def divisible(self):
        return self.remainder.is_zero()

    @property
    def trunc(self):
        return min(self.quotient.trunc, self.remainder.trunc)


@dataclass(frozen=True)
class BezoutCertificate:
    """U*L + V*M = gcd, with the gcd made monic in E."""

    gcd: OperatorSeries
    U: OperatorSeries
    V: OperatorSeries

    @property
    def coprime(self):
        return self.gcd.order == 0


@dataclass(frozen=True)
class ConjugacyPair:
    """target*H = K*source."""

    H: OperatorSeries
    K: OperatorSeries
    target: OperatorSeries
    source: OperatorSeries = None


def _monomial(c, d):
    """c(t) E^d."""
    zero = LaurentSeries.zero(c.trunc, c.field)
    return OperatorSeries.from_left_coefficients([zero] * d + [c], c.field)


def _check_precision(op, floor, what):
    if op.trunc < floor:
        raise PrecisionError(
            f"{what}: truncation order fell to {op.trunc}, below the input's lowest order {floor}"
        )


def div_rem(L, M):
    """Right division L = Q*M + R with order(R) < order(M)."""
    if M.is_zero():
        raise PreconditionError("division by the zero operator")
    m = M.order
    binv = M.leading_coefficient().inverse()
    floor = min(L.kmin, M.kmin) if not L.is_zero() else M.kmin
    Q = None
    R = L
    while not R.is_zero() and R.order >= m:
        d = R.order
        term = _monomial(R.left_coefficient(d) * binv, d - m)
        Q = term if Q is None else Q + term
        R = R - op_mul(term, M)
        if not R.is_zero() and R.order >= d:
            raise InternalInvariantError("leading term failed to cancel in division")
    if Q is None:
        Q = OperatorSeries.zero(R.trunc, L.field)
    _check_precision(R, floor, "div_rem")
    return DivisionResult(Q, R)


def monic(op):
    """Left-multiply by the inverse of the leading E-coefficient."""
    inv = op.leading_coefficient().inverse()
    return op_mul(as_operator(inv, op.trunc, op.field), op), inv


def gcd_bezout(L, M):
    if L.is_zero() or M.is_zero():
        raise PreconditionError("gcd needs nonzero operators")
    floor = min(L.kmin, M.kmin)
    T = min(L.trunc, M.trunc)
    r0, r1 = L, M
    s0, s1 = OperatorSeries.one(T, L.field), OperatorSeries.zero(T, L.field)
    t0, t1 = OperatorSeries.zero(T, L.field), OperatorSeries.one(T, L.field)
    while not r1.is_zero():
        step = div_rem(r0, r1)
        q = step.quotient
        r0, r1 = r1, step.remainder
        s0, s1 = s1, s0 - op_mul(q, s1)
        t0, t1 = t1, t0 - op_mul(q, t1)
        _check_precision(r1, floor, "gcd_bezout")
    g, inv = monic(r0)
    lift = as_operator(inv, T, L.field)
    return BezoutCertificate(g, op_mul(lift, s0), op_mul(lift, t0))


def _remainder_vector(R, n):
    return [R.left_coefficient(d) for d in range(n)]


def _dependency(L, M):
    """Monic X of least order with X*M right-divisible by L.

    Found as the first linear dependence, over the truncated Laurent
    coefficient field, among the remainders of E^k M modulo L.
    """
    n = L.order
    E = OperatorSeries.euler((0, 1), min(L.trunc, M.trunc), L.field)
    vectors = []
    R = div_rem(M, L).remainder
    for s in range(n + 1):
        v = _remainder_vector(R, n)
        zero = LaurentSeries.zero(R.trunc, L.field)
        if s == 0:
            coeffs = [] if all(x.is_zero() for x in v) else None
        else:
            A = [[vectors[k][row] for k in range(s)] for row in range(n)]
            coeffs = solve(A, [-x for x in v], pivot_key=lambda x: x.kmin, zero=zero)
        if coeffs is not None:
            one = LaurentSeries.constant(1, R.trunc, L.field)
            return OperatorSeries.from_left_coefficients(list(coeffs) + [one], L.field)
        vectors.append(v)
        R = div_rem(op_mul(E, R), L).remainder
    raise PrecisionError("no dependence among the remainders; truncation too low")


def lcm(L, M):
    """Least common left multiple, monic in E."""
    if L.is_zero() or M.is_zero():
        raise PreconditionError("lcm needs nonzero operators")
    X = _dependency(L, M)
    return monic(op_mul(X, M))[0]


def conjugate_by(L, H):
    """Weyl conjugation: the monic M with M*H = K*L, i.e. lcm(L, H) H^-1."""
    if not gcd_bezout(L, H).coprime:
        raise NotCoprimeError("gcd(L, H) is not 1")
    M = _dependency(L, H)
    if M.order != L.order:
        raise InternalInvariantError("conjugate has the wrong order")
    res = div_rem(op_mul(M, H), L)
    if not res.divisible:
        raise InternalInvariantError("M*H is not right-divisible by L")
    return ConjugacyPair(H=H, K=res.quotient, target=M, source=L)


def invert_conjugacy(L, M, H):
    """(V, W) with L*V = W*M and gcd(V, M) = 1, from U*L + V*H = 1."""
    if not div_rem(op_mul(M, H), L).divisible:
        raise PreconditionError("M*H is not right-divisible by L")
    cert = gcd_bezout(L, H)
    if not cert.coprime:
        raise NotCoprimeError("gcd(L, H) is not 1")
    V = cert.V
    res = div_rem(op_mul(L, V), M)
    if not res.divisible:
        raise InternalInvariantError("L*V is not right-divisible by M")
    return V, res.quotient


def relaxed_fuchsian_div(L, M):
    """L = Q'M + R' with both Q' and R' Fuchsian (Q' = Q - 1, R' = M + R)."""
    if not (is_fuchsian(L) and is_fuchsian(M)):
        raise NotFuchsianError("relaxed division needs Fuchsian operands")
    if not L.order > M.order:
        raise PreconditionError("relaxed division needs order(L) > order(M)")
    res = div_rem(L, M)
    return DivisionResult(res.quotient - 1, M + res.remainder)
