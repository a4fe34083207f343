"""Fuchsianity, resonances of the Euler part, and the root bookkeeping
(natural order, Lambda_j, I_j, J) used by the factorized normal forms.

Resonance detection is root-free: j is a resonance order exactly when
gcd(p0(E), p0(E + j)) is nonconstant, and the candidate j are the positive
integer roots of the root-difference polynomial from :func:`shift_resultant`.
"""

from dataclasses import dataclass, field as dc_field

import gmpy2
from gmpy2 import mpq

from .errors import NotFuchsianError, NotSplitError, PreconditionError
from .fields import QQ, QQI, GaussianRational
from .poly import EulerPolynomial, poly_gcd, shift_resultant


def is_fuchsian(L):
    if L.is_zero() or L.kmin != 0:
        return False
    return L[0].degree == L.order


def is_pre_fuchsian(L):
    """(True, k) when t^k L is Fuchsian, else (False, None)."""
    if L.is_zero():
        return False, None
    if L[L.kmin].degree == L.order:
        return True, -L.kmin
    return False, None


def require_fuchsian(*ops):
    for op in ops:
        if not is_fuchsian(op):
            raise NotFuchsianError("operator is not Fuchsian (need kmin = 0 and deg p0 = order)")


def gcd0(L, H):
    """gcd of the Eulerizations, monic."""
    require_fuchsian(L, H)
    return poly_gcd(L[0], H[0])


# -- integer roots -----------------------------------------------------------


def _real_imag_parts(poly):
    re, im = [], []
    for c in poly.coeffs:
        if isinstance(c, GaussianRational):
            re.append(c.re)
            im.append(c.im)
        else:
            re.append(mpq(c))
            im.append(mpq(0))
    return EulerPolynomial(re), EulerPolynomial(im)


def _integer_coefficients(poly):
    den = 1
    for c in poly.coeffs:
        den = gmpy2.lcm(den, mpq(c).denominator)
    return [int(mpq(c) * den) for c in poly.coeffs]


def positive_integer_roots(poly):
    """Positive integer roots of a polynomial over Q or Q(i), ascending.

    Rational-root test on the primitive integer polynomial: a root j > 0
    divides the lowest nonzero coefficient and is at most the Fujiwara bound.
    """
    re, im = _real_imag_parts(EulerPolynomial(poly))
    g = poly_gcd(re, im) if im else re.monic()
    if g.degree < 1:
        return []
    a = _integer_coefficients(g)
    while a and a[0] == 0:
        a.pop(0)
    n = len(a) - 1
    if n < 1:
        return []
    lead = abs(a[-1])
    bound = 1
    for k in range(1, n + 1):
        ratio = abs(a[n - k])
        if k == n:
            ratio = (ratio + 1) // 2 + 1
        q = -(-ratio // lead)
        root, _ = gmpy2.iroot(gmpy2.mpz(q), k)
        bound = max(bound, 2 * (int(root) + 1))
    const = abs(a[0])
    out = []
    for j in range(1, min(bound, const) + 1):
        if const % j:
            continue
        acc = 0
        for c in reversed(a):
            acc = acc * j + c
        if acc == 0:
            out.append(j)
    return out


# -- resonance structure -----------------------------------------------------


@dataclass(frozen=True)
class ResonanceStructure:
    """Resonance data of an Euler part p0.

    ``res_orders``, ``w``, ``nu`` and ``N`` never need roots.  The remaining
    fields are filled only when the roots are known; ``ordered`` lists them
    with repetition in natural order, and ``I`` and ``J`` use 1-based
    positions in that list.
    """

    p0: EulerPolynomial
    res_orders: tuple
    w: dict
    nu: dict
    N: int
    roots: tuple = None
    ordered: tuple = None
    Lambda: dict = dc_field(default=None)
    I: dict = dc_field(default=None)
    J: dict = dc_field(default=None)

    def w_of(self, j):
        return self.w.get(j, EulerPolynomial((1,)))

    def nu_of(self, j):
        return self.nu.get(j, 0)


def resonance_orders(p0):
    """Root-free resonance data: orders j >= 1 with deg gcd(p0, p0(E+j)) >= 1."""
    p0 = EulerPolynomial(p0)
    if p0.degree < 1:
        return ResonanceStructure(p0, (), {}, {}, 0)
    orders, w, nu = [], {}, {}
    for j in positive_integer_roots(shift_resultant(p0)):
        wj = poly_gcd(p0, p0.shift(j))
        if wj.degree >= 1:
            orders.append(j)
            w[j] = wj
            nu[j] = wj.degree
    return ResonanceStructure(p0, tuple(orders), w, nu, max(orders, default=0))


def _field_of(values):
    return QQI if any(isinstance(v, GaussianRational) for v in values) else QQ


def natural_order(roots, field=None):
    """Roots grouped into integer-difference classes, each sorted ascending.

    Classes are ordered by their smallest element, compared by real part and
    then imaginary part.  Repeated roots end up adjacent.
    """
    roots = list(roots)
    field = field or _field_of(roots)
    classes = []
    for r in roots:
        for cls in classes:
            if field.is_integer(r - cls[0]):
                cls.append(r)
                break
        else:
            classes.append([r])
    key = lambda x: field.real_imag(x)  # noqa: E731
    for cls in classes:
        cls.sort(key=key)
    classes.sort(key=lambda cls: key(cls[0]))
    return tuple(r for cls in classes for r in cls)


def _multiplicities(ordered):
    out = []
    for r in ordered:
        if out and out[-1][0] == r:
            out[-1][1] += 1
        else:
            out.append([r, 1])
    return [(r, m) for r, m in out]


def resonance_structure(p0, roots):
    """Full structure including Lambda_j, I_j and J(lambda_i)."""
    p0 = EulerPolynomial(p0)
    roots = list(roots)
    field = _field_of(list(roots) + list(p0.coeffs))
    if EulerPolynomial.from_roots([field(r) for r in roots]) != p0.monic():
        raise PreconditionError("the given roots do not multiply out to the Euler part")
    base = resonance_orders(p0)
    ordered = natural_order([field(r) for r in roots], field)
    mult = _multiplicities(ordered)
    count = dict((r, m) for r, m in mult)
    n = len(ordered)

    Lambda, I = {}, {}
    for j in base.res_orders:
        lam, idx = [], []
        for r, m in mult:
            k = count.get(r + j, 0)
            take = min(m, k)
            if not take:
                continue
            lam.extend([r] * take)
            positions = [i + 1 for i in range(n) if ordered[i] == r]
            idx.extend(positions[-take:])
        Lambda[j] = tuple(lam)
        I[j] = tuple(sorted(idx))
    J = {}
    for i, r in enumerate(ordered, start=1):
        J[i] = tuple(j for j in base.res_orders if count.get(r + j, 0))
    return ResonanceStructure(
        p0, base.res_orders, base.w, base.nu, base.N,
        roots=tuple(mult), ordered=ordered, Lambda=Lambda, I=I, J=J,
    )


# -- splitting ---------------------------------------------------------------


def _to_sympy(c):
    import sympy

    if isinstance(c, GaussianRational):
        return sympy.Rational(int(c.re.numerator), int(c.re.denominator)) + sympy.I * sympy.Rational(
            int(c.im.numerator), int(c.im.denominator)
        )
    c = mpq(c)
    return sympy.Rational(int(c.numerator), int(c.denominator))


def _from_sympy(x, field):
    import sympy

    re, im = sympy.re(x), sympy.im(x)
    value = GaussianRational(mpq(int(re.p), int(re.q)), mpq(int(im.p), int(im.q)))
    return field(value) if im else field(value.re)


def split_roots(p0, field=QQ):
    """Roots of p0 with multiplicity if it splits over ``field``, else None."""
    import sympy

    p0 = EulerPolynomial(p0)
    if p0.degree < 1:
        return ()
    x = sympy.Symbol("x")
    domain = sympy.QQ_I if field is QQI else sympy.QQ
    coeffs = [_to_sympy(c) for c in reversed(p0.coeffs)]
    if field is QQ and any(isinstance(c, GaussianRational) and c.im for c in p0.coeffs):
        raise NotSplitError("coefficients are not rational; use field Qi")
    poly = sympy.Poly(coeffs, x, domain=domain)
    _, factors = poly.factor_list()
    roots = []
    for f, m in factors:
        if f.degree() != 1:
            return None
        a, b = f.all_coeffs()
        roots.extend([_from_sympy(-b / a, field)] * m)
    return natural_order(roots, field)


def require_roots(p0, field=QQ, roots=None):
    """Validated roots in natural order: given ones, or found by splitting."""
    if roots is not None:
        roots = [field(r) for r in roots]
        if EulerPolynomial.from_roots(roots) != EulerPolynomial(p0).monic():
            raise PreconditionError("the given roots do not multiply out to the Euler part")
        return natural_order(roots, field)
    found = split_roots(p0, field)
    if found is None:
        raise NotSplitError(f"Euler part {p0} does not split over {field.name}")
    return found
