"""Acceptance criteria 1-10.

Each test records PASS/FAIL with a one-line detail in ``acceptance_log``;
conftest prints the lines at the end of the run.  All checks are exact
(rational arithmetic), so the tolerance is zero throughout.
"""

import functools
import io
import itertools
import json
import math
import pathlib
import random

import sympy
from gmpy2 import mpq

from fuchsforge import cli
from fuchsforge.analysis import is_fuchsian, resonance_orders, resonance_structure
from fuchsforge.dsl import parse_operator, print_text
from fuchsforge.errors import LogObstruction
from fuchsforge.euclidean import div_rem, gcd_bezout, lcm
from fuchsforge.normal_forms import (
    build_pij,
    eulerize_nonresonant,
    formal_factorize,
    minimal_affine_nf,
    minimal_reducible_nf,
    verify_result,
)
from fuchsforge.operators import op_mul
from fuchsforge.poly import EulerPolynomial
from fuchsforge.solutions import apply_operator, classify_apparent, frobenius_solution

from acceptance_log import record
from gen import (
    random_nonresonant_fuchsian,
    random_operator,
    random_resonant_split,
    random_split_fuchsian,
    to_sympy,
)
from oracle import check_steps

GOLDEN = pathlib.Path(__file__).parent / "golden"


def P(text, trunc=10):
    return parse_operator(text, trunc)


def _finish(k, failures, detail):
    ok = record(k, not failures, detail if not failures else f"{detail}; first failure: {failures[0]}")
    assert ok, failures[:3]


# -- shared suites (4 and 6 feed criteria 5 and 7) ----------------------------------------


@functools.lru_cache(maxsize=None)
def suite4():
    rng = random.Random(4004)
    out = []
    for _ in range(100):
        L, roots = random_nonresonant_fuchsian(rng, trunc=12)
        out.append((L, roots, eulerize_nonresonant(L)))
    return out


@functools.lru_cache(maxsize=None)
def suite6():
    rng = random.Random(6006)
    out = []
    for _ in range(100):
        L, roots = random_resonant_split(rng, trunc=12)
        out.append((L, roots, minimal_affine_nf(L), minimal_reducible_nf(L)))
    return out


# -- 1 ---------------------------------------------------------------------------------


def test_criterion_1_ring_axioms():
    rng = random.Random(1001)
    failures = []
    for n in range(500):
        A, B, C = (random_operator(rng, max_order=3, trunc=10, kmin_range=(-1, 1)) for _ in range(3))
        AB = op_mul(A, B)
        if op_mul(AB, C) != op_mul(A, op_mul(B, C)):
            failures.append(f"associativity #{n}")
        if op_mul(A, B + C) != AB + op_mul(A, C) or op_mul(A + B, C) != op_mul(A, C) + op_mul(B, C):
            failures.append(f"distributivity #{n}")
        if AB.order != A.order + B.order:
            failures.append(f"order additivity #{n}")
    _finish(1, failures, "500 triples: associativity, distributivity, order additivity")


# -- 2 ---------------------------------------------------------------------------------


def test_criterion_2_euclid():
    rng = random.Random(2002)
    failures = []
    for n in range(200):
        L, M = (random_operator(rng, trunc=16, kmin_range=(0, 1), tmax=3) for _ in range(2))
        d = div_rem(L, M)
        if not (op_mul(d.quotient, M) + d.remainder).agrees_with(L):
            failures.append(f"division identity #{n}")
        if not (d.remainder.is_zero() or d.remainder.order < M.order):
            failures.append(f"remainder order #{n}")
        c = gcd_bezout(L, M)
        if not (op_mul(c.U, L) + op_mul(c.V, M)).agrees_with(c.gcd):
            failures.append(f"Bezout #{n}")
        l = lcm(L, M)
        if not (div_rem(l, L).remainder.is_zero() and div_rem(l, M).remainder.is_zero()):
            failures.append(f"lcm #{n}")
    _finish(2, failures, "200 pairs: L = QM + R, Bezout, lcm divisibility")


# -- 3 ---------------------------------------------------------------------------------


def test_criterion_3_worked_example():
    failures = []
    L = P("(E+t)*(E-1)", 8)
    E = EulerPolynomial.E()
    if dict(L.items()) != {0: E * (E - 1), 1: E - 1}:
        failures.append("expansion")
    if not is_fuchsian(L):
        failures.append("Fuchsian")
    res = resonance_orders(L[0])
    if res.res_orders != (1,) or res.N != 1:
        failures.append("resonances")
    aff = minimal_affine_nf(L)
    if aff.normal_form != P("E*(E-1) - t", 8) or not verify_result(aff).ok:
        failures.append("minimal affine NF")
    red = minimal_reducible_nf(L)
    if red.normal_form != L or [lam for lam, _ in red.factors] != [0, 1] or not verify_result(red).ok:
        failures.append("minimal reducible NF")
    if dict(red.factors[0][1].items()) != {1: 1} or not red.factors[1][1].is_zero():
        failures.append("factor tails")
    u = frobenius_solution(L, 1)
    if dict(u.series.items()) != {0: 1}:
        failures.append("solution t at 1")
    try:
        frobenius_solution(L, 0)
        failures.append("no obstruction at 0")
    except LogObstruction as exc:
        if exc.m != 1:
            failures.append(f"obstruction at m={exc.m}")
    _finish(3, failures, "(E+t)(E-1): expansion, resonance {1}, N=1, NFs, solution t, log at 0")


# -- 4 ---------------------------------------------------------------------------------


def test_criterion_4_eulerization():
    failures = []
    r = eulerize_nonresonant(P("E + t", 8))
    for j in range(9):
        if r.solution.h[j] != EulerPolynomial((mpq(1, math.factorial(j)),)):
            failures.append(f"h_{j}")
    rep = verify_result(r)
    if not rep.ok or rep.trunc < 8:
        failures.append("E+t conjugacy")
    for n, (L, _, res) in enumerate(suite4()):
        if not verify_result(res, "fuchsian").ok:
            failures.append(f"random #{n}")
    _finish(4, failures, "E+t: h_j = 1/j! to order 8; 100 nonresonant operators verified")


# -- 5 ---------------------------------------------------------------------------------


def test_criterion_5_oracle_equivalence():
    failures = []
    steps = 0
    for n, (L, _, res) in enumerate(suite4()):
        try:
            steps += check_steps(L, res.solution, "euler", max_j=6)
        except AssertionError as exc:
            failures.append(f"suite 4 #{n}: {exc}")
    for n, (L, roots, aff, red) in enumerate(suite6()):
        rs = resonance_structure(L[0], roots)
        try:
            steps += check_steps(L, aff.solution, "affine", rs, max_j=6)
            Ls = L.scale(mpq(1) / L[0].lc)
            steps += check_steps(Ls, red.solution, "reducible", rs, rs.ordered, red.factors, max_j=6)
        except AssertionError as exc:
            failures.append(f"suite 6 #{n}: {exc}")
    _finish(5, failures, f"{steps} homological steps (j <= 6) match the dense sympy solve")


# -- 6 ---------------------------------------------------------------------------------


def test_criterion_6_shape():
    failures = []
    for n, (L, roots, aff, red) in enumerate(suite6()):
        res = resonance_orders(L[0])
        for j, q in aff.solution.q.items():
            if j and ((j in res.w and q.degree > res.nu[j] - 1) or (j not in res.w and q)):
                failures.append(f"#{n} q_{j}")
        rs = resonance_structure(L[0], roots)
        for i, (_, s) in enumerate(red.factors, start=1):
            support = {k for k, c in s.items() if c}
            if not support <= set(rs.J[i]) or any(k > rs.N for k in support):
                failures.append(f"#{n} r_{i}")
        if not (verify_result(aff).ok and verify_result(red).ok):
            failures.append(f"#{n} verify")
    _finish(6, failures, "100 resonant split operators: deg q_j < nu_j, supp r_i in J(lambda_i), verified")


# -- 7 ---------------------------------------------------------------------------------


def _pairs():
    for L, roots, res in suite4():
        yield roots, res
    for L, roots, aff, red in suite6():
        yield roots, aff
        yield roots, red


def test_criterion_7_solution_transport():
    failures = []
    checked = 0
    for n, (roots, res) in enumerate(_pairs()):
        c = res.conj
        for lam in sorted(set(roots)):
            try:
                u = frobenius_solution(c.source, lam)
            except LogObstruction:
                continue
            Hu = apply_operator(c.H, lam, u.series)
            MHu = apply_operator(c.target, lam, Hu)
            checked += 1
            if not MHu.is_zero():
                failures.append(f"pair {n}, exponent {lam}: first nonzero t^{MHu.kmin}")
    _finish(7, failures, f"{checked} log-free solutions u: M(Hu) = 0 to common truncation")


# -- 8 ---------------------------------------------------------------------------------


def _rank(polys, n):
    rows = [[to_sympy(p.coeffs[d]) if d < len(p.coeffs) else 0 for d in range(n)] for p in polys]
    return sympy.Matrix(rows).rank() if rows else 0


def test_criterion_8_factorization():
    failures = []
    rng = random.Random(8008)
    for n in range(100):
        L, _ = random_split_fuchsian(rng, n=rng.randint(1, 3), trunc=10)
        f = formal_factorize(L)
        if not f.product().agrees_with(L, upto=10):
            failures.append(f"product #{n}")
    lists = 0
    for size in range(1, 5):
        for roots in itertools.combinations_with_replacement(range(6), size):
            lists += 1
            roots = tuple(mpq(x) for x in roots)
            rs = resonance_structure(EulerPolynomial.from_roots(roots), roots)
            for j in range(1, 7):
                if _rank([build_pij(rs.ordered, i, j) for i in range(1, size + 1)], size) != size:
                    failures.append(f"rank {roots} j={j}")
                if j in rs.w:
                    w = rs.w[j]
                    if _rank([build_pij(rs.ordered, i, j) % w for i in rs.I[j]], w.degree) != w.degree:
                        failures.append(f"rank mod w {roots} j={j}")
    _finish(8, failures, f"100 factorizations re-multiply; rank checks on {lists} root lists, j = 1..6")


# -- 9 ---------------------------------------------------------------------------------


def test_criterion_9_apparent():
    failures = []
    for n in range(1, 5):
        text = "*".join(f"(E-{i})" for i in range(n))
        if classify_apparent(P(text)) != "holomorphic":
            failures.append(f"falling factorial n={n}")
    if classify_apparent(P("E*(E+1)")) != "meromorphic":
        failures.append("E(E+1)")
    if classify_apparent(P("(E+t)*(E-1)")) != "ramified_or_log":
        failures.append("worked example")
    _finish(9, failures, "falling factorials holomorphic, E(E+1) meromorphic, (E+t)(E-1) ramified_or_log")


# -- 10 --------------------------------------------------------------------------------

CORPUS = [
    "0", "1", "E", "t", "D", "D^2", "t^-1", "-t^-2*E", "3/2*t^2*E", "(E + t)*(E - 1)",
    "E*(E-1) + t*(E-1) + 7*t^2", "E^3 - 2*E + 1/3", "(E - 1/2)^3", "t*D", "D*t", "t^2*D^2 + t*D + 1",
    "(1 + t)^4", "E*t - t*E", "(E + t^-1)*(E - t)", "-(E + 1)", "2*(E - t)^2 - 3", "t^3*(E + 5)^2",
    "(t*E)^3", "E^4 - t^4", "1/7*E + 2/9*t", "(D - 1)*(D + 1)", "t^-1*D^2 - D", "(E+t)*(E+t^2)*(E+t^3)",
    "5 - E*t^2*E", "(E - 3)*(E + 3/4) + t*(E^2 - 1) - t^5",
]


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main([a.replace("{golden}", str(GOLDEN)) for a in argv], out, err)
    return code, out.getvalue()


def test_criterion_10_cli():
    failures = []
    assert len(CORPUS) == 30
    for text in CORPUS:
        L = parse_operator(text, 8)
        if parse_operator(print_text(L), 8) != L:
            failures.append(f"round trip {text!r}")
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for name, (argv, expected) in cases.items():
        first, second = _run(argv), _run(argv)
        if first != second or first[1] != (GOLDEN / f"{name}.json").read_text():
            failures.append(f"golden {name}")
        if first[0] != expected:
            failures.append(f"exit code {name}: {first[0]} != {expected}")
    _finish(10, failures, f"30-expression round trip; {len(cases)} golden files byte-identical; exit codes 0/2/3/4")
