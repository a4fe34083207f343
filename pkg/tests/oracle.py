"""Dense linear-algebra oracle for single homological steps.

The structured solver works with gcds, cofactors and remainders.  Here the
order-j step is instead written as one square linear system in the
coefficients of (h_j, k_j, q_j or c_i), built with sympy polynomial
arithmetic and row-reduced with sympy's DomainMatrix over QQ.  The
right-hand side v_j is recomputed from truncated operator products rather
than from the recursion's own sum.
"""

import sympy
from sympy.polys.matrices import DomainMatrix

from fuchsforge.operators import OperatorSeries, op_mul
from fuchsforge.normal_forms import build_pij, factor_product
from fuchsforge.series import LaurentSeries

from gen import from_sympy, to_sympy

x = sympy.Symbol("x")


def _sym(p):
    cs = [to_sympy(c) for c in reversed(p.coeffs)] or [0]
    return sympy.Poly(cs, x, domain=sympy.QQ)


def _coeffs(poly, size):
    cs = list(reversed(poly.all_coeffs()))
    return [sympy.QQ.from_sympy(c) for c in cs] + [sympy.QQ(0)] * (size - len(cs))


def recompute_v(L, sol, j):
    """[K' L - M' H']_j with H', K', M' cut below t^j."""
    field = L.field
    H = OperatorSeries.from_dict({a: sol.h[a] for a in range(j)}, j, field)
    K = OperatorSeries.from_dict({a: sol.k[a] for a in range(j)}, j, field)
    M = OperatorSeries.from_dict({a: sol.q[a] for a in range(j)}, j, field)
    Lj = L.truncate(j)
    return (op_mul(K, Lj) - op_mul(M, H))[j]


def reducible_base(roots, factors, j, field):
    """Order-j coefficient of the factor product with every r_i cut below t^j."""
    cut = [LaurentSeries.from_dict({k: c for k, c in r.items() if k < j}, j, field) for _, r in factors]
    return factor_product(roots, cut, j, field)[j]


def dense_step(L, sol, j, mode, res=None, roots=None, factors=None):
    """Solve step j densely; returns (h, k, q, c) as coefficient lists / dicts.

    ``mode`` is "euler", "affine" or "reducible".  ``res`` carries w_j,
    nu_j and I_j; for "reducible" also pass the ordered roots and the
    final factor list.
    """
    p0 = L[0]
    n = p0.degree
    v = recompute_v(L, sol, j)
    nu = res.nu_of(j) if res is not None else 0
    zero = sympy.Poly(0, x, domain=sympy.QQ)
    extra, base = [], zero
    if mode == "affine":
        extra = [sympy.Poly(x**d, x, domain=sympy.QQ) for d in range(nu)]
    elif mode == "reducible":
        base = _sym(reducible_base(roots, factors, j, L.field))
        if nu:
            extra = [_sym(build_pij(roots, i, j)) for i in res.I[j]]
    # p0(x + j) through sympy's own Taylor shift
    P0 = _sym(p0)
    P0j = P0.shift(j)
    X = sympy.Poly(x, x, domain=sympy.QQ)
    size = max(2 * n, v.degree + 1 if v else 0, 1)
    columns = []
    columns += [_coeffs(P0j * X**d, size) for d in range(n)]
    columns += [_coeffs(-P0 * X**d, size) for d in range(n)]
    columns += [_coeffs(e, size) for e in extra]
    rhs = _coeffs(_sym(v) - base, size)
    unknowns = len(columns)
    rows = [[col[r] for col in columns] for r in range(size)]
    # normalization: deg h_j < n - nu
    for d in range(n - nu, n):
        row = [sympy.QQ(0)] * unknowns
        row[d] = sympy.QQ(1)
        rows.append(row)
        rhs.append(sympy.QQ(0))
    aug = DomainMatrix([r + [b] for r, b in zip(rows, rhs)], (len(rows), unknowns + 1), sympy.QQ)
    red, pivots = aug.rref()
    if unknowns in pivots or len(pivots) != unknowns:
        raise AssertionError(f"order {j}: dense system is not uniquely solvable")
    red = red.to_Matrix()
    vals = [from_sympy(sympy.Rational(red[r, unknowns])) for r in range(unknowns)]
    h, k, e = vals[:n], vals[n : 2 * n], vals[2 * n :]
    if mode == "affine":
        q, c = e, None
    elif mode == "reducible":
        c = dict(zip(res.I[j], e)) if nu else {}
        q = None
    else:
        q, c = [], None
    return h, k, q, c


def _padded(p, n):
    cs = list(p.coeffs) + [0] * n
    return cs[:n]


def check_steps(L, sol, mode, res=None, roots=None, factors=None, max_j=6):
    """Compare every step j <= max_j with the dense oracle; returns the count."""
    n = L[0].degree
    count = 0
    for step in sol.steps:
        if step.j > max_j:
            break
        h, k, q, c = dense_step(L, sol, step.j, mode, res, roots, factors)
        assert _padded(step.h, n) == h, (step.j, step.h, h)
        assert _padded(step.k, n) == k, (step.j, step.k, k)
        assert step.h.degree < n and step.k.degree < n
        if mode == "affine":
            nu = res.nu_of(step.j)
            assert _padded(step.q, nu) == q and (not step.q or step.q.degree < max(nu, 1))
            if not nu:
                assert not step.q
        elif mode == "euler":
            assert not step.q
        else:
            got = {i: ci for i, ci in (step.c or {}).items()}
            assert got == c, (step.j, got, c)
        count += 1
    return count
