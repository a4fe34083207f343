"""Commutative polynomials in the Euler symbol E = t d/dt.

:class:`EulerPolynomial` is an immutable coefficient tuple in ascending
powers.  The underscore helpers work on plain lists and are what the
operator arithmetic calls in its inner loops.
"""

import math
from math import comb

from gmpy2 import mpq

NEG_INF = -math.inf


def _strip(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def _add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = out[i] + x
    return _strip(out)


def _sub(a, b):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] = out[i] - x
    return _strip(out)


def _mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _strip(out)


def _scale(a, s):
    if not s:
        return []
    return [x * s for x in a]


def _shift(a, j):
    """Coefficients of a(E + j) via Horner with the linear factor E + j."""
    if not j or len(a) <= 1:
        return list(a)
    out = []
    for c in reversed(a):
        # out <- out*(E + j) + c
        new = [0] * (len(out) + 1)
        for i, x in enumerate(out):
            new[i + 1] += x
            new[i] += x * j
        new[0] += c
        out = new
    return out


def _divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv = mpq(1) / b[-1]
    if len(a) <= db:
        return [], _strip(a)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv
        q[i - db] = c
        if c:
            for k in range(db + 1):
                a[i - db + k] -= c * b[k]
    return _strip(q), _strip(a[:db])


def _evaluate(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


class EulerPolynomial:
    """Polynomial in E with exact coefficients, ascending order.

    Trailing zeros are stripped; the zero polynomial has no coefficients and
    degree ``-inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, EulerPolynomial):
            coeffs = coeffs.coeffs
        object.__setattr__(self, "coeffs", tuple(_strip(coeffs)))

    def __setattr__(self, name, value):
        raise AttributeError("EulerPolynomial is immutable")

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def E(cls):
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots, lead=mpq(1)):
        """lead * prod (E - r) over ``roots``."""
        out = [lead]
        for r in roots:
            out = _mul(out, [-r, 1])
        return cls(out)

    @classmethod
    def falling(cls, d):
        """E (E - 1) ... (E - d + 1)."""
        return cls.from_roots(range(d), lead=mpq(1))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __eq__(self, other):
        if isinstance(other, EulerPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, type(mpq(0)))) or hasattr(other, "im"):
            return self.coeffs == tuple(_strip([other]))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _other(self, other):
        if isinstance(other, EulerPolynomial):
            return other.coeffs
        return _strip([other])

    def __add__(self, other):
        return EulerPolynomial(_add(self.coeffs, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return EulerPolynomial(_sub(self.coeffs, self._other(other)))

    def __rsub__(self, other):
        return EulerPolynomial(_sub(self._other(other), self.coeffs))

    def __neg__(self):
        return EulerPolynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, EulerPolynomial):
            return EulerPolynomial(_mul(self.coeffs, other.coeffs))
        return EulerPolynomial(_scale(self.coeffs, other))

    __rmul__ = __mul__

    def __pow__(self, n):
        out = EulerPolynomial((1,))
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, other):
        q, r = _divmod(self.coeffs, self._other(other))
        return EulerPolynomial(q), EulerPolynomial(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        return _evaluate(self.coeffs, x)

    def shift(self, j):
        """The polynomial w(E + j)."""
        return EulerPolynomial(_shift(self.coeffs, j))

    def monic(self):
        if not self.coeffs:
            return self
        return self * (mpq(1) / self.lc)

    def map(self, fn):
        return EulerPolynomial([fn(c) for c in self.coeffs])

    def __repr__(self):
        return f"EulerPolynomial({list(map(str, self.coeffs))})"

    def __str__(self):
        return format_poly(self.coeffs)

    def to_falling(self):
        """Coefficients c_d with self = sum_d c_d E(E-1)...(E-d+1).

        Newton forward differences at 0, 1, ..., deg.
        """
        if not self.coeffs:
            return []
        n = len(self.coeffs) - 1
        values = [self(mpq(x)) for x in range(n + 1)]
        out = []
        fact = 1
        for d in range(n + 1):
            if d:
                fact *= d
            out.append(values[0] / mpq(fact))
            values = [values[i + 1] - values[i] for i in range(len(values) - 1)]
        return _strip(out)

    @classmethod
    def from_falling(cls, cs):
        out = EulerPolynomial()
        for d, c in enumerate(cs):
            if c:
                out = out + cls.falling(d) * c
        return out


def poly_gcd(a, b):
    """Monic gcd; gcd(0, 0) is 0."""
    a, b = EulerPolynomial(a), EulerPolynomial(b)
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g and g monic (or zero)."""
    a, b = EulerPolynomial(a), EulerPolynomial(b)
    r0, r1 = a, b
    s0, s1 = EulerPolynomial((1,)), EulerPolynomial()
    t0, t1 = EulerPolynomial(), EulerPolynomial((1,))
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = mpq(1) / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def power_sums(p, count):
    """Power sums s_0..s_count of the roots of p (with multiplicity).

    Newton's identities on the coefficients; no roots are computed.
    """
    p = EulerPolynomial(p).monic()
    n = p.degree
    # e_k with sign: p = E^n + a_{n-1} E^{n-1} + ... ; a_{n-k} = (-1)^k e_k
    a = [p[n - k] for k in range(n + 1)]  # a[0] = 1
    s = [mpq(n)]
    for k in range(1, count + 1):
        acc = k * a[k] if k <= n else 0
        for i in range(1, k):
            if i <= n:
                acc = acc + a[i] * s[k - i]
        s.append(-acc)
    return s


def from_power_sums(s, n):
    """Monic polynomial of degree n whose roots have power sums ``s``."""
    a = [1]
    for k in range(1, n + 1):
        acc = s[k]
        for i in range(1, k):
            acc = acc + a[i] * s[k - i]
        a.append(-acc / mpq(k))
    return EulerPolynomial(list(reversed(a)))


def shift_resultant(p):
    """Monic polynomial in j vanishing exactly at the differences of roots.

    Its roots are lambda_b - lambda_a over all ordered pairs of roots of p,
    so it agrees (up to sign and a power of the leading coefficient) with
    Res_E(p(E), p(E + j)) viewed as a polynomial in j.
    """
    p = EulerPolynomial(p)
    n = p.degree
    if n < 1:
        return EulerPolynomial((1,))
    m = n * n
    s = power_sums(p, m)
    d = []
    for k in range(m + 1):
        acc = 0
        for i in range(k + 1):
            term = comb(k, i) * s[i] * s[k - i]
            acc = acc + (term if (k - i) % 2 == 0 else -term)
        d.append(acc)
    return from_power_sums(d, m)


def format_poly(coeffs, var="E", field=None):
    """Render ascending coefficients in the operator DSL."""
    from .fields import QQ

    field = field or QQ
    parts = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if not c:
            continue
        mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
        parts.append(_term(c, mono, field))
    if not parts:
        return "0"
    text = parts[0]
    for p in parts[1:]:
        text += " - " + p[1:] if p.startswith("-") else " + " + p
    return text


def _term(c, mono, field):
    if hasattr(c, "im") and c.im:
        s = "(" + field.format(c).replace(" i", "*i") + ")"
        return s if not mono else f"{s}*{mono}"
    r = c.re if hasattr(c, "im") else mpq(c)
    if not mono:
        return str(r)
    if r == 1:
        return mono
    if r == -1:
        return "-" + mono
    return f"{r}*{mono}"
