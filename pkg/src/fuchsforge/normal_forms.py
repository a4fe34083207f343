"""Homological equations and the four normal-form procedures.

Every procedure runs the same order-by-order recursion.  With
M = sum t^j q_j (q_0 = p_0), H = sum t^j h_j, K = sum t^j k_j and
h_0 = k_0 = 1, the t^j part of MH = KL reads

    p0(E+j) h_j - p0 k_j + q_j = v_j,
    v_j = sum_{a<j} k_a(E+j-a) p_{j-a} - sum_{0<a<j} q_a(E+j-a) h_{j-a}.

The procedures differ only in how q_j is picked; h_j, k_j then follow
from one cofactor solve modulo w_j = gcd(p0, p0(E+j)).
"""

from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from .analysis import (
    gcd0,
    is_fuchsian,
    require_fuchsian,
    require_roots,
    resonance_orders,
    resonance_structure,
)
from .errors import (
    InternalInvariantError,
    NotCoprimeError,
    PreconditionError,
    PrecisionError,
    ResonantError,
)
from .euclidean import ConjugacyPair, gcd_bezout
from .linalg import solve
from .operators import OperatorSeries, as_operator, op_mul
from .poly import EulerPolynomial, poly_gcd, poly_xgcd
from .series import LaurentSeries


# -- polynomial solvers -------------------------------------------------------


def sylvester_solve(p, q, r):
    """(u, v) with p u + q v = r, deg u < deg q and deg v < deg p."""
    p, q, r = EulerPolynomial(p), EulerPolynomial(q), EulerPolynomial(r)
    if r and r.degree > p.degree + q.degree - 1:
        raise PreconditionError("right-hand side degree too large for the Sylvester map")
    g, s, _ = poly_xgcd(p, q)
    if g.degree != 0:
        raise NotCoprimeError(f"gcd({p}, {q}) = {g}")
    u = (s * r) % q
    v, rem = divmod(r - p * u, q)
    if rem:
        raise InternalInvariantError("Sylvester back-substitution left a remainder")
    return u, v


def _cofactor_solve(a, b, r):
    """(h, k) with a h - b k = r and deg h < deg b, for coprime a, b."""
    g, s, _ = poly_xgcd(a, b)
    if g.degree != 0:
        raise InternalInvariantError("cofactors of the homological equation are not coprime")
    h = (s * r) % b
    k, rem = divmod(a * h - r, b)
    if rem:
        raise InternalInvariantError("cofactor back-substitution left a remainder")
    return h, k


def solve_ULVM(L, M, R):
    """(U, V) with U L + V M = R, order U < order M and order V < order L."""
    require_fuchsian(L, M)
    if gcd0(L, M).degree != 0:
        raise NotCoprimeError("Euler parts are not coprime")
    R = as_operator(R, min(L.trunc, M.trunc), L.field)
    if not R.is_zero():
        if R.kmin < 0:
            raise PreconditionError("right-hand side must have holomorphic coefficients")
        if R.order > L.order + M.order - 1:
            raise PreconditionError("right-hand side order too large")
    T = min(L.trunc, M.trunc, R.trunc)
    l0, m0 = L[0], M[0]
    U, V = {}, {}
    for j in range(0, T + 1):
        rhs = R[j] if j >= R.kmin else EulerPolynomial()
        for a in range(j):
            b = j - a
            rhs = rhs - U[a].shift(b) * L[b] - V[a].shift(b) * M[b]
        U[j], V[j] = sylvester_solve(l0, m0, rhs)
    return (
        OperatorSeries.from_dict(U, T, L.field),
        OperatorSeries.from_dict(V, T, L.field),
    )


def fuchsian_bezout(L, H):
    """(U, V) with U L + V H = 1, U = H + U', V = -L + V'."""
    require_fuchsian(L, H)
    T = min(L.trunc, H.trunc)
    comm = op_mul(H, L) - op_mul(L, H)
    Up, Vp = solve_ULVM(L, H, OperatorSeries.one(T, L.field) - comm)
    return H + Up, Vp - L


# -- results --------------------------------------------------------------


@dataclass(frozen=True)
class HomologicalStep:
    j: int
    v: EulerPolynomial
    w: EulerPolynomial
    q: EulerPolynomial
    h: EulerPolynomial
    k: EulerPolynomial
    c: dict = None


@dataclass(frozen=True)
class HomologicalSolution:
    """Raw Taylor data of a conjugacy before any repair (h_0 = k_0 = 1)."""

    h: dict
    k: dict
    q: dict
    steps: tuple = ()


@dataclass
class NormalFormResult:
    normal_form: OperatorSeries
    conj: ConjugacyPair
    kind: str
    achieved_trunc: int
    solution: HomologicalSolution = None
    factors: list = None
    report: dict = dc_field(default_factory=dict)


@dataclass(frozen=True)
class ConjugacyReport:
    flavor: str
    identity_ok: bool
    first_failure: int = None
    gcd_ok: bool = True
    fuchsian_ok: bool = True
    trunc: int = None

    @property
    def ok(self):
        return self.identity_ok and self.gcd_ok and self.fuchsian_ok


# -- the shared recursion -----------------------------------------------------


def homological_recursion(p, T, res, choose_q):
    """Run the order-j recursion for j = 1..T.

    ``p`` maps j to p_j (p_0 the Euler part), ``res`` is the resonance
    structure of p_0 and ``choose_q(j, v)`` returns (q_j, extra) with
    v - q_j divisible by w_j.
    """
    p0 = p[0]
    one = EulerPolynomial((p0.lc / p0.lc,))
    h, k, q = {0: one}, {0: one}, {0: p0}
    steps = []
    for j in range(1, T + 1):
        v = EulerPolynomial()
        for a in range(j):
            v = v + k[a].shift(j - a) * p.get(j - a, EulerPolynomial())
        for a in range(1, j):
            v = v - q[a].shift(j - a) * h[j - a]
        qj, extra = choose_q(j, v)
        w = res.w_of(j)
        r, rem = divmod(v - qj, w)
        if rem:
            raise InternalInvariantError(f"order {j}: defect is not in the image of the homological map")
        hj, kj = _cofactor_solve(p0.shift(j) // w, p0 // w, r)
        if p0.shift(j) * hj - p0 * kj + qj != v:
            raise InternalInvariantError(f"order {j}: homological identity fails")
        h[j], k[j], q[j] = hj, kj, qj
        steps.append(HomologicalStep(j, v, w, qj, hj, kj, extra))
    return HomologicalSolution(h, k, q, tuple(steps))


def _assemble(L, sol, T, repair, M=None):
    field = L.field
    H = OperatorSeries.from_dict(sol.h, T, field)
    K = OperatorSeries.from_dict(sol.k, T, field)
    if M is None:
        M = OperatorSeries.from_dict(sol.q, T, field)
    if repair is None:
        repair = not (is_fuchsian(H) and is_fuchsian(K))
    if repair:
        H = H + L
        K = K + M
    return M, H, K


def _prepare(L):
    require_fuchsian(L)
    T = L.trunc
    p = {j: L[j] for j in range(0, T + 1)}
    return p, T, resonance_orders(p[0])


def _need_precision(T, N, what):
    if T < N:
        raise PrecisionError(f"{what}: truncation order {T} is below the last resonance order {N}")


# -- normal forms ----------------------------------------------------------


def eulerize_nonresonant(L):
    """F-equivalence of a nonresonant Fuchsian L with its Euler part."""
    p, T, res = _prepare(L)
    if res.res_orders:
        raise ResonantError(res.res_orders)
    zero = EulerPolynomial()
    sol = homological_recursion(p, T, res, lambda j, v: (zero, None))
    M, H, K = _assemble(L, sol, T, None)
    return NormalFormResult(M, ConjugacyPair(H, K, M, L), "euler", T, sol)


def truncate_equiv(L):
    """F-equivalence of L with its Taylor truncation at the last resonance N."""
    p, T, res = _prepare(L)
    N = res.N
    _need_precision(T, N, "truncate_equiv")
    zero = EulerPolynomial()
    sol = homological_recursion(p, T, res, lambda j, v: (p[j] if j <= N else zero, None))
    M, H, K = _assemble(L, sol, T, True)
    return NormalFormResult(M, ConjugacyPair(H, K, M, L), "poly_truncation", T, sol, report={"N": N})


def minimal_affine_nf(L, roots=None):
    """p0 + sum t^j q_j with q_j = v_j mod w_j supported on resonance orders."""
    p, T, res = _prepare(L)
    _need_precision(T, res.N, "minimal_affine_nf")
    zero = EulerPolynomial()

    def choose(j, v):
        if j in res.w:
            return v % res.w[j], None
        return zero, None

    sol = homological_recursion(p, T, res, choose)
    M, H, K = _assemble(L, sol, T, None)
    report = {"N": res.N, "separated_roots": _separated_roots(p[0], sol.q, res, L.field, roots)}
    return NormalFormResult(M, ConjugacyPair(H, K, M, L), "minimal_affine", T, sol, report=report)


def _separated_roots(p0, q, res, field, roots):
    """Simple roots outside every resonance whose factor E - lambda splits off.

    M = p0 + sum t^j q_j is right-divisible by E - lambda exactly when
    every q_j vanishes at lambda.  None when p0 has a repeated root or
    does not split.
    """
    try:
        ordered = require_roots(p0, field, roots)
    except PreconditionError:
        return None
    if len(set(ordered)) != len(ordered):
        return None
    rs = resonance_structure(p0, ordered)
    involved = set()
    for lam in rs.Lambda.values():
        involved.update(lam)
    for j in rs.res_orders:
        involved.update(x + j for x in rs.Lambda[j])
    return [lam for lam in ordered if lam not in involved and all(not qj(lam) for qj in q.values())]


def build_pij(roots, i, j):
    """p_ij = prod_{a<i} (E - lambda_a + j) * prod_{a>i} (E - lambda_a), 1-based i."""
    n = len(roots)
    if not 1 <= i <= n:
        raise PreconditionError(f"index {i} outside 1..{n}")
    left = [lam - j for lam in roots[: i - 1]]
    right = list(roots[i:])
    lead = mpq(1)
    return EulerPolynomial.from_roots(left + right, lead)


def first_order_factor(lam, r, trunc, field):
    """E - lambda + r(t) as an operator."""
    op = OperatorSeries.euler((-lam, 1), trunc, field)
    if r is not None and not r.is_zero():
        op = op + as_operator(r, trunc, field)
    return op


def factor_product(roots, rs, trunc, field):
    """prod_i (E - lambda_i + r_i(t)) in the given order."""
    out = OperatorSeries.one(trunc, field)
    for lam, r in zip(roots, rs):
        out = op_mul(out, first_order_factor(lam, r, trunc, field))
    return out


def _series(coeffs, trunc, field):
    return LaurentSeries.from_dict(coeffs, trunc, field)


def minimal_reducible_nf(L, roots=None):
    """Ordered factors E - lambda_i + r_i(t) with supp r_i inside J(lambda_i)."""
    p, T, res = _prepare(L)
    _need_precision(T, res.N, "minimal_reducible_nf")
    field = L.field
    ordered = require_roots(p[0], field, roots)
    rs = resonance_structure(p[0], ordered)
    n = len(ordered)
    lc = p[0].lc
    inv = mpq(1) / lc
    Ls = L.scale(inv)
    ps = {j: pj * inv for j, pj in p.items()}
    rcoef = [dict() for _ in range(n)]
    cache = {}

    def current_product():
        key = tuple(tuple(sorted(d.items())) for d in rcoef)
        if key not in cache:
            cache.clear()
            series = [_series(d, T, field) for d in rcoef]
            cache[key] = factor_product(ordered, series, T, field)
        return cache[key]

    def choose(j, v):
        base = current_product()[j]
        if j not in rs.w:
            return base, None
        w = rs.w[j]
        idx = rs.I[j]
        nu = w.degree
        pij = [build_pij(ordered, i, j) % w for i in idx]
        target = (v - base) % w
        A = [[P[d] for P in pij] for d in range(nu)]
        b = [target[d] for d in range(nu)]
        c = solve(A, b, zero=field.zero)
        if c is None:
            raise InternalInvariantError(f"order {j}: no admissible factor corrections")
        qj = base
        chosen = {}
        for i, ci in zip(idx, c):
            if ci:
                rcoef[i - 1][j] = ci
                qj = qj + build_pij(ordered, i, j) * ci
            chosen[i] = ci
        return qj, chosen

    sol = homological_recursion(ps, T, rs, choose)
    series = [_series(d, T, field) for d in rcoef]
    M = factor_product(ordered, series, T, field)
    Mq = OperatorSeries.from_dict(sol.q, T, field)
    if not M.agrees_with(Mq):
        raise InternalInvariantError("factor product differs from the recursion's normal form")
    M, H, Ks = _assemble(Ls, sol, T, None, M)
    # M H = Ks (L / lc), so K = Ks / lc has source L itself
    K = Ks.scale(inv)
    factors = list(zip(ordered, series))
    report = {"N": rs.N, "I": rs.I, "J": rs.J, "roots": ordered}
    return NormalFormResult(
        M, ConjugacyPair(H, K, M, L), "minimal_reducible", T, sol, factors=factors, report=report
    )


@dataclass(frozen=True)
class FormalFactorization:
    """L = unit(t) * prod_i (E - lambda_i + r_i(t)) to ``trunc``."""

    unit: LaurentSeries
    roots: tuple
    series: tuple
    trunc: int

    @property
    def factors(self):
        return list(zip(self.roots, self.series))

    def product(self):
        field = self.unit.field
        P = factor_product(self.roots, self.series, self.trunc, field)
        return op_mul(as_operator(self.unit, self.trunc, field), P)


def formal_factorize(L, roots=None):
    """Full factorization into first-order factors with power-series r_i."""
    require_fuchsian(L)
    T = L.trunc
    field = L.field
    ordered = require_roots(L[0], field, roots)
    n = len(ordered)
    unit = L.leading_coefficient()
    Ln = op_mul(as_operator(unit.inverse(), T, field), L)
    rcoef = [dict() for _ in range(n)]
    for j in range(1, T + 1):
        series = [_series(d, T, field) for d in rcoef]
        base = factor_product(ordered, series, T, field)[j]
        target = Ln[j] - base
        if not target:
            continue
        basis = [build_pij(ordered, i, j) for i in range(1, n + 1)]
        A = [[P[d] for P in basis] for d in range(n)]
        b = [target[d] for d in range(n)]
        if target.degree >= n:
            raise InternalInvariantError(f"order {j}: defect has degree {target.degree} >= {n}")
        c = solve(A, b, zero=field.zero)
        if c is None:
            raise InternalInvariantError(f"order {j}: the p_ij do not span the defect")
        for i, ci in enumerate(c):
            if ci:
                rcoef[i][j] = ci
    series = tuple(_series(d, T, field) for d in rcoef)
    return FormalFactorization(unit, ordered, series, T)


# -- verification ------------------------------------------------------------


def verify_conjugacy(L, M, H, K, flavor="fuchsian"):
    """Check M H = K L term by term plus the flavor's coprimality condition."""
    if flavor not in ("weyl", "fuchsian"):
        raise PreconditionError(f"unknown flavor {flavor!r}")
    left = op_mul(M, H)
    right = op_mul(K, L)
    trunc = min(left.trunc, right.trunc)
    first = left.first_difference(right, trunc)
    gcd_ok, fuchsian_ok = True, True
    if flavor == "weyl":
        try:
            gcd_ok = gcd_bezout(L, H).coprime
        except PreconditionError:
            gcd_ok = False
    else:
        fuchsian_ok = all(is_fuchsian(x) for x in (L, M, H, K))
        gcd_ok = fuchsian_ok and poly_gcd(H[0], L[0]).degree == 0
    return ConjugacyReport(flavor, first is None, first, gcd_ok, fuchsian_ok, trunc)


def verify_result(result, flavor="fuchsian"):
    c = result.conj
    return verify_conjugacy(c.source, c.target, c.H, c.K, flavor)
