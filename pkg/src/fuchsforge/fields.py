"""Exact coefficient fields: the rationals and the Gaussian rationals Q(i).

Rationals are ``gmpy2.mpq`` values.  Elements of Q(i) are
:class:`GaussianRational` pairs of ``mpq``.  A :class:`Field` object tags a
computation and coerces raw numbers into its scalar type.
"""

import re
from fractions import Fraction

from gmpy2 import mpq

from .errors import DSLParseError, FieldMismatchError

_RATIONAL_TYPES = (int, type(mpq(0)), Fraction)


def _q(x):
    if isinstance(x, GaussianRational):
        if x.im:
            raise FieldMismatchError(f"{x} is not rational")
        return x.re
    return mpq(x)


class GaussianRational:
    """An element re + im*i with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, _RATIONAL_TYPES):
            return GaussianRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussianRational(1) / self ** (-n)
        result, base = GaussianRational(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return QQI.format(self)


class Field:
    """Base for the two supported coefficient fields."""

    name = ""

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __repr__(self):
        return f"<field {self.name}>"

    def __reduce__(self):
        return (get_field, (self.name,))


class RationalField(Field):
    name = "Q"

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        return _q(x)

    def contains(self, x):
        return not isinstance(x, GaussianRational) or not x.im

    def parse(self, text):
        value = parse_scalar(text)
        if isinstance(value, GaussianRational):
            if value.im:
                raise FieldMismatchError(f"{text!r} is not rational; use field Qi")
            return value.re
        return value

    def format(self, x):
        return str(_q(x))

    def real_imag(self, x):
        return _q(x), mpq(0)

    def is_integer(self, x):
        return _q(x).denominator == 1


class GaussianField(Field):
    name = "Qi"

    def __call__(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return self.parse(x)
        return GaussianRational(x, 0)

    def contains(self, x):
        return True

    def parse(self, text):
        value = parse_scalar(text)
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(value, 0)

    def format(self, x):
        x = self(x)
        sign = "-" if x.im < 0 else "+"
        return f"{x.re}{sign}{abs(x.im)} i"

    def real_imag(self, x):
        x = self(x)
        return x.re, x.im

    def is_integer(self, x):
        x = self(x)
        return not x.im and x.re.denominator == 1


QQ = RationalField()
QQI = GaussianField()
_FIELDS = {"Q": QQ, "Qi": QQI}


def get_field(name):
    try:
        return _FIELDS[name]
    except KeyError:
        raise FieldMismatchError(f"unknown field {name!r}; expected Q or Qi") from None


def unify_fields(*fields):
    """Return the common field tag, refusing to mix Q and Qi values."""
    first = fields[0]
    for f in fields[1:]:
        if f is not first:
            raise FieldMismatchError(f"mixed fields {first.name} and {f.name}")
    return first


_NUM = r"[0-9]+(?:/[0-9]+)?"
_SCALAR_RE = re.compile(
    rf"^\s*(?P<re>[+-]?\s*{_NUM})?\s*"
    rf"(?:(?P<isign>[+-])?\s*(?P<im>{_NUM})?\s*\*?\s*(?P<i>i))?\s*$"
)


def parse_scalar(text):
    """Parse ``"a/b"``, ``"a/b+c/d i"``, ``"-i"``, ``"2i"`` and similar forms.

    Returns ``mpq`` for purely rational input and GaussianRational otherwise.
    """
    m = _SCALAR_RE.match(text)
    if not m or (m.group("re") is None and m.group("i") is None):
        raise DSLParseError(f"not a field element: {text!r}")
    re_part = mpq(m.group("re").replace(" ", "")) if m.group("re") else mpq(0)
    if m.group("i") is None:
        return re_part
    if m.group("re") is not None and m.group("isign") is None:
        if m.group("im") is not None:
            raise DSLParseError(f"not a field element: {text!r}")
        # "2i", "-3/4 i": the only number is the imaginary part
        return GaussianRational(0, re_part)
    im_part = mpq(m.group("im")) if m.group("im") else mpq(1)
    if m.group("isign") == "-":
        im_part = -im_part
    return GaussianRational(re_part, im_part)
