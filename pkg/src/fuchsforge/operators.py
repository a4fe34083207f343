"""Truncated graded operators  L = sum_{k=kmin}^{T} t^k p_k(E).

The coefficient polynomials sit to the right of the powers of t, so the
whole algebra reduces to one commutation rule, w(E) t^j = t^j w(E + j).
"""

from gmpy2 import mpq

from .errors import NotFuchsianError, PreconditionError
from .fields import QQ, unify_fields
from .poly import NEG_INF, EulerPolynomial, _add, _mul, _shift, _strip, _sub
from .series import LaurentSeries


class OperatorSeries:
    """Immutable truncated operator.

    ``terms[i]`` is the coefficient of t^(kmin + i) for i up to ``trunc``.
    The zero operator has no terms and ``kmin = trunc + 1``.
    """

    __slots__ = ("kmin", "trunc", "terms", "field")

    def __init__(self, kmin, trunc, terms=(), field=QQ):
        polys = [t if isinstance(t, EulerPolynomial) else EulerPolynomial(t) for t in terms]
        polys = polys[: max(0, trunc - kmin + 1)]
        lead = 0
        while lead < len(polys) and not polys[lead]:
            lead += 1
        polys = polys[lead:]
        kmin += lead
        if not polys:
            kmin = trunc + 1
        else:
            polys += [EulerPolynomial()] * (trunc - kmin + 1 - len(polys))
        object.__setattr__(self, "kmin", kmin)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "terms", tuple(polys))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorSeries is immutable")

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, trunc, field=QQ):
        return cls(trunc + 1, trunc, (), field)

    @classmethod
    def euler(cls, poly, trunc, field=QQ):
        """The Euler operator p(E), exact, tracked through ``trunc``."""
        poly = EulerPolynomial(poly).map(field)
        return cls(0, trunc, (poly,), field)

    @classmethod
    def one(cls, trunc, field=QQ):
        return cls.euler((1,), trunc, field)

    @classmethod
    def monomial(cls, k, poly, trunc, field=QQ):
        """t^k p(E)."""
        return cls(k, trunc, (EulerPolynomial(poly).map(field),), field)

    @classmethod
    def from_dict(cls, terms, trunc, field=QQ):
        """Build from {k: EulerPolynomial or coefficient list}."""
        terms = {k: EulerPolynomial(p).map(field) for k, p in terms.items() if k <= trunc}
        terms = {k: p for k, p in terms.items() if p}
        if not terms:
            return cls.zero(trunc, field)
        lo = min(terms)
        return cls(lo, trunc, [terms.get(k, EulerPolynomial()) for k in range(lo, trunc + 1)], field)

    @classmethod
    def from_left_coefficients(cls, coeffs, field=None):
        """sum_d a_d(t) E^d from Laurent series a_0, a_1, ... (coefficient on the left)."""
        field = field or (coeffs[0].field if coeffs else QQ)
        trunc = min(a.trunc for a in coeffs)
        grid = {}
        for d, a in enumerate(coeffs):
            for k, c in a.items():
                if k <= trunc:
                    grid.setdefault(k, {})[d] = c
        terms = {}
        for k, row in grid.items():
            terms[k] = EulerPolynomial([row.get(d, 0) for d in range(max(row) + 1)])
        return cls.from_dict(terms, trunc, field)

    # -- inspection ----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, k):
        """p_k, the coefficient of t^k."""
        if k > self.trunc:
            raise PreconditionError(f"t^{k} is beyond the truncation order {self.trunc}")
        i = k - self.kmin
        if 0 <= i < len(self.terms):
            return self.terms[i]
        return EulerPolynomial()

    def items(self):
        for i, p in enumerate(self.terms):
            if p:
                yield self.kmin + i, p

    @property
    def order(self):
        return max((p.degree for p in self.terms), default=NEG_INF)

    @property
    def tmax(self):
        """Largest t-power with a nonzero tracked coefficient."""
        return max((k for k, _ in self.items()), default=None)

    def left_coefficient(self, d):
        """The Laurent series a_d(t) with self = sum_d a_d(t) E^d."""
        return LaurentSeries.from_dict({k: p[d] for k, p in self.items()}, self.trunc, self.field)

    def left_coefficients(self):
        n = self.order
        if n == NEG_INF:
            return []
        return [self.left_coefficient(d) for d in range(n + 1)]

    def leading_coefficient(self):
        return self.left_coefficient(self.order)

    def __eq__(self, other):
        if not isinstance(other, OperatorSeries):
            return NotImplemented
        return (
            self.kmin == other.kmin
            and self.trunc == other.trunc
            and self.terms == other.terms
            and self.field is other.field
        )

    def __hash__(self):
        return hash((self.kmin, self.trunc, self.terms))

    def agrees_with(self, other, upto=None):
        top = min(self.trunc, other.trunc) if upto is None else upto
        lo = min(self.kmin, other.kmin)
        return all(self[k] == other[k] for k in range(lo, top + 1))

    def first_difference(self, other, upto=None):
        """Lowest t-order where the two operators differ, or None."""
        top = min(self.trunc, other.trunc) if upto is None else upto
        lo = min(self.kmin, other.kmin)
        for k in range(lo, top + 1):
            if self[k] != other[k]:
                return k
        return None

    def truncate(self, trunc):
        if trunc >= self.trunc:
            return self
        return OperatorSeries(self.kmin, trunc, self.terms, self.field)

    def with_trunc(self, trunc):
        """Re-tag an exactly known operator with a different tracked order."""
        return OperatorSeries.from_dict(dict(self.items()), trunc, self.field)

    # -- arithmetic ------------------------------------------------------------
    def _as_op(self, other):
        if isinstance(other, OperatorSeries):
            return other
        if isinstance(other, EulerPolynomial):
            return OperatorSeries.euler(other, self.trunc, self.field)
        return OperatorSeries.euler((other,), max(self.trunc, 0), self.field)

    def __add__(self, other):
        return op_add(self, self._as_op(other))

    __radd__ = __add__

    def __neg__(self):
        return OperatorSeries(self.kmin, self.trunc, [-p for p in self.terms], self.field)

    def __sub__(self, other):
        return op_add(self, -self._as_op(other))

    def __rsub__(self, other):
        return op_add(self._as_op(other), -self)

    def __mul__(self, other):
        if isinstance(other, OperatorSeries):
            return op_mul(self, other)
        if isinstance(other, (EulerPolynomial, LaurentSeries)):
            return op_mul(self, as_operator(other, self.trunc, self.field))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, (EulerPolynomial, LaurentSeries)):
            return op_mul(as_operator(other, self.trunc, self.field), self)
        return self.scale(other)

    def scale(self, c):
        c = self.field(c)
        return OperatorSeries(self.kmin, self.trunc, [p * c for p in self.terms], self.field)

    def mul_t(self, s):
        """Left multiplication by t^s."""
        return OperatorSeries(self.kmin + s, self.trunc + s, self.terms, self.field)

    def __repr__(self):
        return f"OperatorSeries({dict((k, str(p)) for k, p in self.items())}, trunc={self.trunc}, field={self.field.name})"

    def __str__(self):
        from .dsl import print_text

        return print_text(self)


def as_operator(x, trunc, field=QQ):
    """Lift a polynomial in E, a Laurent series in t or a scalar to an operator."""
    if isinstance(x, OperatorSeries):
        return x
    if isinstance(x, EulerPolynomial):
        return OperatorSeries.euler(x, trunc, field)
    if isinstance(x, LaurentSeries):
        return OperatorSeries.from_dict({k: (c,) for k, c in x.items()}, x.trunc, x.field)
    return OperatorSeries.euler((x,), trunc, field)


def shift_poly(w, j):
    """w(E + j)."""
    return EulerPolynomial(w).shift(j)


def op_add(A, B):
    field = unify_fields(A.field, B.field)
    trunc = min(A.trunc, B.trunc)
    lo = min(A.kmin, B.kmin)
    if lo > trunc:
        return OperatorSeries.zero(trunc, field)
    terms = [EulerPolynomial(_add(A[k].coeffs, B[k].coeffs)) for k in range(lo, trunc + 1)]
    return OperatorSeries(lo, trunc, terms, field)


def op_sub(A, B):
    return op_add(A, -B)


def op_mul(A, B):
    """Noncommutative product: (t^a p)(t^b q) = t^(a+b) p(E+b) q."""
    field = unify_fields(A.field, B.field)
    trunc = min(A.trunc + B.kmin, B.trunc + A.kmin)
    if A.is_zero() or B.is_zero():
        return OperatorSeries.zero(trunc, field)
    lo = A.kmin + B.kmin
    size = trunc - lo + 1
    if size <= 0:
        return OperatorSeries.zero(trunc, field)
    out = [[] for _ in range(size)]
    bterms = [(B.kmin + i, q.coeffs) for i, q in enumerate(B.terms) if q]
    for ia, p in enumerate(A.terms):
        if ia >= size:
            break
        if not p:
            continue
        pc = p.coeffs
        for b, qc in bterms:
            pos = ia + b - B.kmin
            if pos >= size:
                break
            out[pos] = _add(out[pos], _mul(_shift(pc, b), qc))
    return OperatorSeries(lo, trunc, [EulerPolynomial(c) for c in out], field)


def order(L):
    return L.order


def eulerization(L):
    """p_0 = E(L), the constant-in-t part of a Fuchsian-shaped operator."""
    if L.is_zero():
        return EulerPolynomial()
    if L.kmin < 0:
        raise NotFuchsianError(f"operator has a t^{L.kmin} term; Eulerization needs kmin >= 0")
    return L[0]


def to_euler_form(coeffs, field=None):
    """Operator sum_i a_i(t) D^(n-i) in the graded E-representation.

    ``coeffs`` lists the Laurent series a_0 (of D^n) down to a_n (of D^0).
    Uses t^k D^k = E(E-1)...(E-k+1).
    """
    if not coeffs or coeffs[0].is_zero():
        raise PreconditionError("leading coefficient of the D-form operator is zero")
    field = field or coeffs[0].field
    n = len(coeffs) - 1
    trunc = min(a.trunc - (n - i) for i, a in enumerate(coeffs))
    terms = {}
    for i, a in enumerate(coeffs):
        d = n - i
        fall = EulerPolynomial.falling(d)
        for m, c in a.items():
            k = m - d
            if k <= trunc:
                terms[k] = terms.get(k, EulerPolynomial()) + fall * c
    return OperatorSeries.from_dict(terms, trunc, field)


def to_d_form(L):
    """Coefficients a_0..a_n (of D^n..D^0) with sum a_i D^(n-i) = L.

    Each p_k(E) is expanded in the falling-factorial basis, and
    E(E-1)...(E-d+1) = t^d D^d.
    """
    n = L.order
    if n == NEG_INF:
        return [LaurentSeries.zero(L.trunc, L.field)]
    by_d = [dict() for _ in range(n + 1)]
    for k, p in L.items():
        for d, c in enumerate(p.to_falling()):
            if c:
                by_d[d][k + d] = c
    return [
        LaurentSeries.from_dict(by_d[n - i], L.trunc + (n - i), L.field) for i in range(n + 1)
    ]


def is_exact_polynomial(L):
    return L.tmax is None or L.tmax < L.trunc
