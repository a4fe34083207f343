"""Formal solutions: companion systems, Frobenius series, first-order and
chain solving for factored operators, and the apparent-singularity test.

A solution t^lambda * f(t) is kept as an exponent plus an ordinary
truncated series; an operator acts on it through

    L (t^lambda t^m) = t^lambda sum_k t^(k+m) p_k(lambda + m).
"""

from dataclasses import dataclass

from gmpy2 import mpq

from .analysis import is_fuchsian, split_roots
from .errors import LogObstruction, NotFuchsianError, PreconditionError, PrecisionError
from .fields import QQ
from .operators import to_d_form
from .series import LaurentSeries


@dataclass(frozen=True)
class ExponentSeries:
    """t^exponent * series."""

    exponent: object
    series: LaurentSeries

    @property
    def trunc(self):
        return self.series.trunc

    def normalized(self):
        """Absorb the valuation into the exponent and make the leading coefficient 1."""
        s = self.series
        if s.is_zero():
            return self
        lead = s[s.kmin]
        return ExponentSeries(self.exponent + s.kmin, s.shift(-s.kmin) * (mpq(1) / lead))


@dataclass(frozen=True)
class FrobeniusSolution:
    exponent: object
    series: LaurentSeries
    trunc: int

    def as_exponent_series(self):
        return ExponentSeries(self.exponent, self.series)


@dataclass(frozen=True)
class CompanionSystem:
    matrix: tuple
    basis_kind: str

    @property
    def size(self):
        return len(self.matrix)


def _constant(c, trunc, field):
    return LaurentSeries.constant(c, trunc, field) if c else LaurentSeries.zero(trunc, field)


def companion(L, kind="euler_form"):
    """Companion matrix of L in E-form (x_k = E^(k-1) u) or D-form (x_k = D^(k-1) u)."""
    if kind == "euler_form":
        if not is_fuchsian(L):
            raise NotFuchsianError("the E-form companion system needs a Fuchsian operator")
        coeffs = list(reversed(L.left_coefficients()))  # r_0 (of E^n) first
    elif kind == "d_form":
        coeffs = to_d_form(L)
    else:
        raise PreconditionError(f"unknown companion kind {kind!r}")
    n = len(coeffs) - 1
    if n < 1:
        raise PreconditionError("companion system needs order >= 1")
    field = L.field
    inv = coeffs[0].inverse()
    trunc = min(c.trunc for c in coeffs)
    rows = []
    for i in range(n - 1):
        rows.append(tuple(_constant(1 if c == i + 1 else 0, trunc, field) for c in range(n)))
    rows.append(tuple(-(inv * coeffs[n - k]) for k in range(n)))
    return CompanionSystem(tuple(rows), kind)


def apply_operator(L, exponent, f):
    """g with L (t^exponent f) = t^exponent g."""
    field = L.field
    trunc = min(L.trunc + f.kmin, f.trunc + L.kmin)
    out = {}
    for k, p in L.items():
        for m, c in f.items():
            s = k + m
            if s > trunc:
                break
            out[s] = out.get(s, 0) + p(exponent + m) * c
    return LaurentSeries.from_dict(out, trunc, field)


def frobenius_solution(L, lam, T=None):
    """t^lam (1 + c_1 t + ...) through t^(lam+T), or LogObstruction(m)."""
    if not is_fuchsian(L):
        raise NotFuchsianError("Frobenius recursion needs a Fuchsian operator")
    field = L.field
    lam = field(lam)
    T = L.trunc if T is None else T
    if T > L.trunc:
        raise PrecisionError(f"operator is known only to t^{L.trunc}, not t^{T}")
    p0 = L[0]
    if p0(lam):
        raise PreconditionError(f"{field.format(lam)} is not a root of the Euler part")
    c = [field.one]
    for m in range(1, T + 1):
        rhs = field.zero
        for k in range(1, m + 1):
            if c[m - k]:
                rhs = rhs - L[k](lam + m - k) * c[m - k]
        d = p0(lam + m)
        if d:
            c.append(rhs * (mpq(1) / d))
        elif rhs:
            raise LogObstruction(m, lam, "indicial polynomial vanishes with a nonzero right-hand side")
        else:
            c.append(field.zero)
    return FrobeniusSolution(lam, LaurentSeries(0, T, c, field), T)


def first_order_solve(lam, r=None, rhs=None, T=10, field=QQ):
    """Solve (E - lam + r(t)) u = rhs, with r(0) = 0.

    Without ``rhs`` this is t^lam exp(rho), rho = -sum r_k t^k / k.  With
    ``rhs = t^mu g`` the particular solution t^mu e^rho w is returned,
    where (E + mu - lam) w = e^(-rho) g is solved termwise; a zero divisor
    against a nonzero coefficient raises LogObstruction.
    """
    lam = field(lam)
    if r is None:
        r = LaurentSeries.zero(T, field)
    else:
        T = min(T, r.trunc)
        r = r.truncate(T)
    if not r.is_zero() and r.kmin < 1:
        raise PreconditionError("r must vanish at t = 0")
    rho = LaurentSeries.from_dict({k: -c / mpq(k) for k, c in r.items()}, T, field)
    e_rho = rho.exp() if not rho.is_zero() else LaurentSeries.constant(1, T, field)
    if rhs is None:
        return ExponentSeries(lam, e_rho)
    if isinstance(rhs, LaurentSeries):
        rhs = ExponentSeries(field.zero, rhs)
    rhs = rhs.normalized() if rhs.series.kmin < 0 else rhs
    mu, g = field(rhs.exponent), rhs.series
    e_neg = (-rho).exp() if not rho.is_zero() else LaurentSeries.constant(1, T, field)
    integrand = e_neg * g
    delta = mu - lam
    w = {}
    for k, c in integrand.items():
        d = delta + k
        if d:
            w[k] = c * (mpq(1) / d)
        else:
            raise LogObstruction(k, lam, "primitive of t^-1 required")
    w = LaurentSeries.from_dict(w, integrand.trunc, field)
    return ExponentSeries(mu, e_rho * w)


@dataclass(frozen=True)
class ChainSolution:
    """Solution started from the homogeneous solution of factor ``start`` (1-based)."""

    start: int
    solution: ExponentSeries = None
    obstruction: LogObstruction = None

    @property
    def log_free(self):
        return self.obstruction is None


def chain_solve(factors, T=10, field=QQ):
    """Solutions of prod_i (E - lambda_i + r_i) u = 0 via the factor chain.

    For each start s the homogeneous solution y of factor s is pushed
    through L_(s+1) y' = y, ..., L_n u = y''.  Starts that need a
    logarithm report the obstruction instead.
    """
    factors = list(factors)
    n = len(factors)
    out = []
    for s in range(n, 0, -1):
        lam, r = factors[s - 1]
        try:
            y = first_order_solve(lam, r, None, T, field)
            for i in range(s, n):
                lam_i, r_i = factors[i]
                y = first_order_solve(lam_i, r_i, y, T, field)
            out.append(ChainSolution(s, y.normalized()))
        except LogObstruction as exc:
            out.append(ChainSolution(s, obstruction=exc))
    return out


def classify_apparent(L, T=None):
    """holomorphic / meromorphic / ramified_or_log, certified through t^T."""
    return classify_apparent_report(L, T)["verdict"]


def classify_apparent_report(L, T=None):
    if not is_fuchsian(L):
        raise NotFuchsianError("classification needs a Fuchsian operator")
    field = L.field
    roots = split_roots(L[0], field)
    report = {"roots": roots, "obstructions": [], "verdict": "ramified_or_log"}
    if roots is None or len(set(roots)) != len(roots) or not all(field.is_integer(x) for x in roots):
        return report
    for lam in roots:
        try:
            frobenius_solution(L, lam, T)
        except LogObstruction as exc:
            report["obstructions"].append((lam, exc.m))
    if report["obstructions"]:
        return report
    nonneg = all(field.real_imag(x)[0] >= 0 for x in roots)
    report["verdict"] = "holomorphic" if nonneg else "meromorphic"
    return report
