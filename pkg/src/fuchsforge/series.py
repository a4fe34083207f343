"""Truncated Laurent series in t with exact coefficients.

A series with ``trunc = T`` stands for its class modulo t^(T+1).  Every
operation returns the largest ``trunc`` its inputs justify.  The zero
series keeps its ``trunc`` and reports ``kmin = trunc + 1``.
"""

from gmpy2 import mpq

from .errors import LogObstruction, PrecisionError
from .fields import QQ, unify_fields


class LaurentSeries:
    __slots__ = ("kmin", "trunc", "coeffs", "field")

    def __init__(self, kmin, trunc, coeffs=(), field=QQ):
        coeffs = [field(c) if c else 0 for c in coeffs]
        # keep only tracked orders, then drop leading zeros
        coeffs = coeffs[: max(0, trunc - kmin + 1)]
        lead = 0
        while lead < len(coeffs) and not coeffs[lead]:
            lead += 1
        coeffs = coeffs[lead:]
        kmin += lead
        if not coeffs:
            kmin = trunc + 1
        else:
            coeffs += [0] * (trunc - kmin + 1 - len(coeffs))
        object.__setattr__(self, "kmin", kmin)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    @classmethod
    def zero(cls, trunc, field=QQ):
        return cls(trunc + 1, trunc, (), field)

    @classmethod
    def constant(cls, c, trunc, field=QQ):
        return cls(0, trunc, (c,), field)

    @classmethod
    def monomial(cls, k, trunc, c=1, field=QQ):
        return cls(k, trunc, (c,), field)

    @classmethod
    def from_dict(cls, terms, trunc, field=QQ):
        terms = {k: c for k, c in terms.items() if c and k <= trunc}
        if not terms:
            return cls.zero(trunc, field)
        lo = min(terms)
        return cls(lo, trunc, [terms.get(k, 0) for k in range(lo, trunc + 1)], field)

    # -- inspection --------------------------------------------------------
    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def valuation(self):
        return self.kmin

    def __getitem__(self, k):
        """Coefficient of t^k (0 if untracked below ``kmin``)."""
        if k > self.trunc:
            raise PrecisionError(f"t^{k} is beyond the truncation order {self.trunc}")
        i = k - self.kmin
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def items(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.kmin + i, c

    def as_dict(self):
        return dict(self.items())

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.trunc == other.trunc
            and self.kmin == other.kmin
            and self.coeffs == other.coeffs
            and self.field is other.field
        )

    def __hash__(self):
        return hash((self.kmin, self.trunc, self.coeffs))

    def agrees_with(self, other, upto=None):
        """Equality of the classes modulo t^(upto+1) (default: common trunc)."""
        top = min(self.trunc, other.trunc) if upto is None else upto
        lo = min(self.kmin, other.kmin)
        return all(self[k] == other[k] for k in range(lo, top + 1))

    def truncate(self, trunc):
        if trunc >= self.trunc:
            return self
        return LaurentSeries(self.kmin, trunc, self.coeffs, self.field)

    def with_field(self, field):
        return LaurentSeries(self.kmin, self.trunc, self.coeffs, field)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            unify_fields(self.field, other.field)
            return other
        # exact scalar: known to every order
        return LaurentSeries(0, max(self.trunc, 0), (other,), self.field)

    def __add__(self, other):
        other = self._coerce(other)
        trunc = min(self.trunc, other.trunc)
        lo = min(self.kmin, other.kmin)
        out = [self[k] + other[k] for k in range(lo, trunc + 1)] if lo <= trunc else []
        return LaurentSeries(lo, trunc, out, self.field)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.kmin, self.trunc, [-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return LaurentSeries(self.kmin, self.trunc, [c * other for c in self.coeffs], self.field)
        unify_fields(self.field, other.field)
        trunc = min(self.trunc + other.kmin, other.trunc + self.kmin)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(trunc, self.field)
        lo = self.kmin + other.kmin
        out = [0] * max(0, trunc - lo + 1)
        a, b = self.coeffs, other.coeffs
        for i, x in enumerate(a):
            if not x or i >= len(out):
                continue
            for j in range(min(len(b), len(out) - i)):
                y = b[j]
                if y:
                    out[i + j] += x * y
        return LaurentSeries(lo, trunc, out, self.field)

    __rmul__ = __mul__

    def shift(self, s):
        """Multiply by t^s."""
        return LaurentSeries(self.kmin + s, self.trunc + s, self.coeffs, self.field)

    def inverse(self):
        """1/self; relative precision is preserved."""
        if self.is_zero():
            raise PrecisionError("cannot invert a series that vanishes to its truncation order")
        v = self.kmin
        rel = self.trunc - v
        a = self.coeffs
        inv0 = mpq(1) / a[0]
        b = [inv0]
        for n in range(1, rel + 1):
            acc = 0
            for k in range(1, min(n, len(a) - 1) + 1):
                if a[k]:
                    acc += a[k] * b[n - k]
            b.append(-acc * inv0)
        return LaurentSeries(-v, -v + rel, b, self.field)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return self * (mpq(1) / other)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentSeries.constant(1, self.trunc - self.kmin, self.field)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    # -- calculus ----------------------------------------------------------
    def derivative(self):
        """d/dt, known to one order less."""
        return LaurentSeries.from_dict(
            {k - 1: c * k for k, c in self.items()}, self.trunc - 1, self.field
        )

    def integral(self):
        """Termwise primitive with zero constant term."""
        terms = {}
        for k, c in self.items():
            if k == -1:
                raise LogObstruction(0, detail="primitive of t^-1 requested")
            terms[k + 1] = c / mpq(k + 1)
        return LaurentSeries.from_dict(terms, self.trunc + 1, self.field)

    def euler_derivative(self):
        """E = t d/dt acting termwise: t^k -> k t^k."""
        return LaurentSeries.from_dict({k: c * k for k, c in self.items()}, self.trunc, self.field)

    def euler_integral(self, offset=0):
        """Solve E w = t^offset * self termwise; raises on a t^0 term.

        ``LogObstruction.m`` is the relative position of the offending
        coefficient within ``self``.
        """
        terms = {}
        for k, c in self.items():
            e = k + offset
            if e == 0:
                raise LogObstruction(k - self.kmin, detail="E^-1 of a constant term")
            terms[e] = c / e
        return LaurentSeries.from_dict(terms, self.trunc + offset, self.field)

    def exp(self):
        """exp(self) for a series with zero constant term."""
        if self.kmin < 1:
            raise PrecisionError("exp needs a series without constant or polar terms")
        trunc = self.trunc
        f = [self[k] for k in range(0, trunc + 1)]
        g = [mpq(1)]
        for n in range(1, trunc + 1):
            acc = 0
            for k in range(1, n + 1):
                if f[k]:
                    acc += k * f[k] * g[n - k]
            g.append(acc / mpq(n))
        return LaurentSeries(0, trunc, g, self.field)

    def __repr__(self):
        return f"LaurentSeries(kmin={self.kmin}, trunc={self.trunc}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        parts = []
        for k, c in self.items():
            parts.append(f"({self.field.format(c)})*t^{k}")
        return (" + ".join(parts) or "0") + f" + O(t^{self.trunc + 1})"
