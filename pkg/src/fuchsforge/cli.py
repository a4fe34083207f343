"""Command line front end.

    fuchsforge [--trunc N] [--field Q|Qi] [--format text|json] [--roots LIST] COMMAND ...

Exit codes: 0 success, 1 failed verification, 2 parse error,
3 precondition error, 4 logarithmic obstruction, 5 internal error.
"""

import argparse
import json
import os
import sys

from . import dsl
from .analysis import (
    is_fuchsian,
    is_pre_fuchsian,
    require_roots,
    resonance_orders,
    resonance_structure,
    split_roots,
)
from .errors import FuchsError, LogObstruction, PreconditionError
from .euclidean import conjugate_by, div_rem, gcd_bezout, invert_conjugacy, lcm
from .fields import get_field, parse_scalar
from .normal_forms import (
    eulerize_nonresonant,
    formal_factorize,
    minimal_affine_nf,
    minimal_reducible_nf,
    truncate_equiv,
    verify_conjugacy,
)
from .operators import OperatorSeries, op_mul
from .poly import EulerPolynomial, format_poly
from .serialize import dumps, operator_from_json, operator_to_json, series_to_json
from .series import LaurentSeries
from .solutions import classify_apparent_report, frobenius_solution

DEFAULT_TRUNC = 16


class Session:
    """Parsed global options plus helpers to read operands."""

    def __init__(self, args):
        self.field = get_field(args.field)
        self.fmt = args.format
        self.trunc = args.trunc
        self.roots = None
        if args.roots:
            self.roots = [self.field(parse_scalar(x.strip())) for x in args.roots.split(",") if x.strip()]

    def default_trunc(self, asts):
        if self.trunc is not None:
            return self.trunc
        env = os.environ.get("FUCHSFORGE_TRUNC")
        base = int(env) if env else DEFAULT_TRUNC
        N = 0
        for ast in asts:
            L = dsl.evaluate(ast, base, self.field)
            if not L.is_zero() and L.kmin >= 0 and L[0].degree >= 1:
                N = max(N, resonance_orders(L[0]).N)
        return max(base, 2 * N + 2)

    def operators(self, *texts):
        asts = [dsl.parse(t) for t in texts]
        T = self.default_trunc(asts)
        return [dsl.evaluate(a, T, self.field) for a in asts]

    # -- rendering ------------------------------------------------------------
    def render(self, value):
        f = self.field
        if isinstance(value, OperatorSeries):
            return operator_to_json(value) if self.fmt == "json" else dsl.print_text(value)
        if isinstance(value, EulerPolynomial):
            return format_poly(value.coeffs, field=f)
        if isinstance(value, LaurentSeries):
            return series_to_json(value) if self.fmt == "json" else dsl.print_series(value)
        if isinstance(value, dict):
            return {str(k): self.render(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [self.render(v) for v in value]
        if isinstance(value, (bool, int, str)) or value is None:
            return value
        return f.format(value)


def _text_lines(value, indent=""):
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.extend(_text_lines(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_scalar_text(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)) and v:
                sub = _text_lines(v, indent + "  ")
                lines.append(f"{indent}- {sub[0].strip()}")
                lines.extend(sub[1:])
            else:
                lines.append(f"{indent}- {_scalar_text(v)}")
    else:
        lines.append(indent + _scalar_text(value))
    return lines


def _scalar_text(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def emit(session, result, out):
    rendered = session.render(result)
    if session.fmt == "json":
        out.write(dumps(rendered))
    else:
        out.write("\n".join(_text_lines(rendered)) + "\n")


# -- commands ----------------------------------------------------------------


def cmd_normalize(s, a):
    (L,) = s.operators(a.expr)
    return {"operator": L, "order": L.order if not L.is_zero() else None}


def cmd_mul(s, a):
    A, B = s.operators(a.left, a.right)
    return {"product": op_mul(A, B)}


def cmd_divrem(s, a):
    L, M = s.operators(a.left, a.right)
    res = div_rem(L, M)
    return {"quotient": res.quotient, "remainder": res.remainder, "divisible": res.divisible}


def cmd_gcd(s, a):
    L, M = s.operators(a.left, a.right)
    c = gcd_bezout(L, M)
    return {"gcd": c.gcd, "U": c.U, "V": c.V, "coprime": c.coprime}


def cmd_lcm(s, a):
    L, M = s.operators(a.left, a.right)
    return {"lcm": lcm(L, M)}


def cmd_conjugate(s, a):
    L, H = s.operators(a.source, a.H)
    p = conjugate_by(L, H)
    return {"target": p.target, "H": p.H, "K": p.K}


def cmd_invert(s, a):
    L, M, H = s.operators(a.source, a.target, a.H)
    V, W = invert_conjugacy(L, M, H)
    return {"V": V, "W": W}


def cmd_fuchsian_check(s, a):
    (L,) = s.operators(a.expr)
    pre, k = is_pre_fuchsian(L)
    out = {"fuchsian": is_fuchsian(L), "pre_fuchsian": pre, "shift": k}
    if pre:
        out["eulerization"] = L.mul_t(k)[0]
    return out


def _roots_or_none(s, p0):
    if s.roots is not None:
        return require_roots(p0, s.field, s.roots)
    return split_roots(p0, s.field)


def cmd_resonances(s, a):
    (L,) = s.operators(a.expr)
    if not is_fuchsian(L):
        raise PreconditionError("resonances need a Fuchsian operator")
    p0 = L[0]
    res = resonance_orders(p0)
    out = {"orders": list(res.res_orders), "N": res.N, "w": dict(res.w), "nu": dict(res.nu)}
    roots = _roots_or_none(s, p0)
    if roots is not None:
        rs = resonance_structure(p0, roots)
        out["roots"] = list(rs.ordered)
        out["Lambda"] = {j: list(v) for j, v in rs.Lambda.items()}
        out["I"] = {j: list(v) for j, v in rs.I.items()}
        out["J"] = {i: list(v) for i, v in rs.J.items()}
    return out


def _nf_payload(result, L):
    c = result.conj
    report = verify_conjugacy(c.source, c.target, c.H, c.K, "fuchsian")
    out = {
        "kind": result.kind,
        "normal_form": result.normal_form,
        "achieved_trunc": result.achieved_trunc,
        "conj": {"source": L, "target": c.target, "H": c.H, "K": c.K},
        "verified": report.ok,
    }
    if result.kind == "minimal_affine":
        out["q"] = {j: q for j, q in result.solution.q.items() if j and q}
        out["separated_roots"] = result.report.get("separated_roots")
    if result.factors is not None:
        out["factors"] = [{"lambda": lam, "r": r} for lam, r in result.factors]
    return out


def cmd_nf(s, a):
    (L,) = s.operators(a.expr)
    if a.which == "euler":
        res = eulerize_nonresonant(L)
    elif a.which == "poly":
        res = truncate_equiv(L)
    elif a.which == "minimal":
        res = minimal_affine_nf(L, s.roots)
    else:
        res = minimal_reducible_nf(L, s.roots)
    return _nf_payload(res, L)


def cmd_factor(s, a):
    (L,) = s.operators(a.expr)
    f = formal_factorize(L, s.roots)
    return {
        "unit": f.unit,
        "factors": [{"lambda": lam, "r": r} for lam, r in f.factors],
        "verified": f.product().agrees_with(L),
    }


def cmd_solve(s, a):
    (L,) = s.operators(a.expr)
    if not is_fuchsian(L):
        raise PreconditionError("Frobenius solutions need a Fuchsian operator")
    if a.exponent is not None:
        exponents = [s.field(parse_scalar(a.exponent))]
    else:
        exponents = list(dict.fromkeys(require_roots(L[0], s.field, s.roots)))
    sols, obstructed = [], False
    for lam in exponents:
        try:
            sol = frobenius_solution(L, lam)
            sols.append({"exponent": lam, "series": sol.series})
        except LogObstruction as exc:
            obstructed = True
            sols.append({"exponent": lam, "obstruction": exc.m})
    return {"solutions": sols}, (4 if obstructed else 0)


def cmd_classify(s, a):
    (L,) = s.operators(a.expr)
    rep = classify_apparent_report(L)
    return {
        "verdict": rep["verdict"],
        "roots": list(rep["roots"]) if rep["roots"] is not None else None,
        "obstructions": [{"exponent": lam, "m": m} for lam, m in rep["obstructions"]],
    }


def _bundle_operators(path):
    with open(path) as fh:
        data = json.load(fh)
    conj = data.get("conj", data)
    try:
        return [operator_from_json(conj[key]) for key in ("source", "target", "H", "K")]
    except KeyError as exc:
        raise PreconditionError(f"bundle lacks the operator {exc}") from exc


def cmd_verify(s, a):
    if len(a.items) == 1:
        L, M, H, K = _bundle_operators(a.items[0])
    elif len(a.items) == 4:
        L, M, H, K = s.operators(*a.items)
    else:
        raise PreconditionError("verify takes a bundle file or four operators (L M H K)")
    rep = verify_conjugacy(L, M, H, K, a.flavor)
    out = {
        "flavor": rep.flavor,
        "ok": rep.ok,
        "identity_ok": rep.identity_ok,
        "first_failure": rep.first_failure,
        "gcd_ok": rep.gcd_ok,
        "fuchsian_ok": rep.fuchsian_ok,
        "trunc": rep.trunc,
    }
    return out, (0 if rep.ok else 1)


# -- parser ------------------------------------------------------------------


def _global_options(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("-N", "--trunc", type=int, default=default,
                        help="truncation order (default max(16, 2N+2))")
    parser.add_argument("--field", choices=("Q", "Qi"), default=default if suppress else "Q")
    parser.add_argument("--format", choices=("text", "json"), default=default if suppress else "text")
    parser.add_argument("--roots", default=default, help="comma-separated roots of the Euler part")


def build_parser():
    parser = argparse.ArgumentParser(prog="fuchsforge", description="Formal Fuchsian operator toolkit.")
    _global_options(parser, False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *operands, help=None):
        p = sub.add_parser(name, parents=[common], help=help)
        for op in operands:
            p.add_argument(op)
        p.set_defaults(func=func)
        return p

    add("normalize", cmd_normalize, "expr", help="canonical form of an operator")
    add("mul", cmd_mul, "left", "right", help="product")
    add("divrem", cmd_divrem, "left", "right", help="right division with remainder")
    add("gcd", cmd_gcd, "left", "right", help="right gcd with Bezout cofactors")
    add("lcm", cmd_lcm, "left", "right", help="least common left multiple")
    add("conjugate", cmd_conjugate, "source", "H", help="Weyl conjugate of L by H")
    add("invert-conjugacy", cmd_invert, "source", "target", "H", help="reverse conjugacy")
    add("fuchsian-check", cmd_fuchsian_check, "expr", help="Fuchsian and pre-Fuchsian test")
    add("resonances", cmd_resonances, "expr", help="resonance orders and root data")
    p = add("nf", cmd_nf, help="normal forms")
    p.add_argument("which", choices=("euler", "poly", "minimal", "reducible"))
    p.add_argument("expr")
    add("factor", cmd_factor, "expr", help="formal factorization")
    p = add("solve", cmd_solve, "expr", help="Frobenius solutions")
    p.add_argument("--exponent", default=None)
    add("classify", cmd_classify, "expr", help="apparent singularity test")
    p = add("verify", cmd_verify, help="check a conjugacy (bundle file or L M H K)")
    p.add_argument("items", nargs="+")
    p.add_argument("--flavor", choices=("weyl", "fuchsian"), default="fuchsian")
    return parser


def _error_payload(exc, code):
    err = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    if getattr(exc, "position", None) is not None:
        err["position"] = exc.position
    if isinstance(exc, LogObstruction):
        err["m"] = exc.m
    return {"error": err}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "text")
    try:
        session = Session(args)
        result = args.func(session, args)
        code = 0
        if isinstance(result, tuple):
            result, code = result
        emit(session, result, out)
        return code
    except FuchsError as exc:
        return _report_error(exc, exc.exit_code, fmt, out, err)
    except Exception as exc:  # anything else is a bug
        return _report_error(exc, 5, fmt, out, err)


def _report_error(exc, code, fmt, out, err):
    if fmt == "json":
        out.write(dumps(_error_payload(exc, code)))
    else:
        err.write(f"error: {exc}\n")
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
