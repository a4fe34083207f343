"""Operator DSL.

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' uint)? | '(' expr ')' ('^' uint)?
    atom   := RATIONAL | 'i' | 't' ('^' int)? | 'E' | 'D'

A leading unary minus is accepted in front of the first term of an
expression so that printed operators parse back.  Products are
noncommutative and D stands for t^-1 E.

Every atom is an exact Laurent polynomial operator, so evaluation is done
exactly on {k: p_k} dictionaries and only truncated at the very end.
"""

import re
from typing import NamedTuple

from gmpy2 import mpq

from .errors import DSLParseError, PreconditionError
from .fields import QQ, QQI, GaussianRational
from .operators import OperatorSeries
from .poly import EulerPolynomial, _add, _mul, _shift, _strip


class Node(NamedTuple):
    kind: str
    args: tuple = ()
    pos: int = 0


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([tEDi])|([-+*^()]))")


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise DSLParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][1]

    def take(self, expected=None):
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            what = repr(tok) if tok else "end of input"
            raise DSLParseError(f"expected {expected!r}, found {what}", pos)
        self.i += 1
        return tok, pos

    def expr(self):
        if self.peek() == "-":
            _, pos = self.take()
            node = Node("neg", (self.term(),), pos)
        else:
            node = self.term()
        while self.peek() in ("+", "-"):
            op, pos = self.take()
            node = Node("add" if op == "+" else "sub", (node, self.term()), pos)
        return node

    def term(self):
        node = self.factor()
        while self.peek() == "*":
            _, pos = self.take()
            node = Node("mul", (node, self.factor()), pos)
        return node

    def uint(self):
        tok, pos = self.take()
        if not tok.isdigit():
            if tok == "-":
                raise DSLParseError("negative exponent is only allowed on t", pos)
            raise DSLParseError("expected a nonnegative integer exponent", pos)
        return int(tok)

    def factor(self):
        tok, pos = self.tokens[self.i]
        if tok == "(":
            self.take()
            node = self.expr()
            self.take(")")
        elif tok == "t":
            self.take()
            k = 1
            if self.peek() == "^":
                self.take()
                sign = 1
                if self.peek() == "-":
                    self.take()
                    sign = -1
                tok2, pos2 = self.take()
                if not tok2.isdigit():
                    raise DSLParseError("expected an integer exponent", pos2)
                k = sign * int(tok2)
            return Node("t", (k,), pos)
        elif tok in ("E", "D", "i"):
            self.take()
            node = Node(tok, (), pos)
        elif tok and tok[0].isdigit():
            self.take()
            node = Node("num", (mpq(tok),), pos)
        else:
            what = repr(tok) if tok else "end of input"
            raise DSLParseError(f"unexpected {what}", pos)
        if self.peek() == "^":
            _, ppos = self.take()
            node = Node("pow", (node, self.uint()), ppos)
        return node


def parse(text):
    """Parse DSL text into a :class:`Node` tree."""
    p = _Parser(text)
    if p.peek() == "":
        raise DSLParseError("empty expression", 0)
    node = p.expr()
    if p.peek() != "":
        raise DSLParseError(f"unexpected {p.peek()!r}", p.pos())
    return node


# -- exact evaluation on {k: coeff list} ------------------------------------


def _exact_add(a, b, sign=1):
    out = dict(a)
    for k, q in b.items():
        q = q if sign == 1 else [-c for c in q]
        out[k] = _add(out.get(k, []), q)
        if not out[k]:
            del out[k]
    return out


def _exact_mul(a, b):
    out = {}
    for ka, p in a.items():
        for kb, q in b.items():
            k = ka + kb
            out[k] = _add(out.get(k, []), _mul(_shift(p, kb), q))
    return {k: v for k, v in out.items() if _strip(v)}


def _exact_pow(a, n):
    out = {0: [mpq(1)]}
    for _ in range(n):
        out = _exact_mul(out, a)
    return out


def evaluate_exact(node, field=QQ):
    kind = node.kind
    if kind == "num":
        c = field(node.args[0])
        return {0: [c]} if c else {}
    if kind == "i":
        if field is not QQI:
            raise PreconditionError("the atom i needs field Qi")
        return {0: [GaussianRational(0, 1)]}
    if kind == "t":
        return {node.args[0]: [field(1)]}
    if kind == "E":
        return {0: [field(0), field(1)]}
    if kind == "D":
        return {-1: [field(0), field(1)]}
    if kind == "neg":
        return _exact_add({}, evaluate_exact(node.args[0], field), -1)
    if kind in ("add", "sub"):
        a = evaluate_exact(node.args[0], field)
        b = evaluate_exact(node.args[1], field)
        return _exact_add(a, b, 1 if kind == "add" else -1)
    if kind == "mul":
        return _exact_mul(evaluate_exact(node.args[0], field), evaluate_exact(node.args[1], field))
    if kind == "pow":
        return _exact_pow(evaluate_exact(node.args[0], field), node.args[1])
    raise DSLParseError(f"unknown node {kind!r}", node.pos)


def evaluate(node, trunc, field=QQ):
    """The operator denoted by ``node``, tracked modulo t^(trunc+1)."""
    if isinstance(node, str):
        node = parse(node)
    terms = evaluate_exact(node, field)
    return OperatorSeries.from_dict(
        {k: EulerPolynomial(p).map(field) for k, p in terms.items()}, trunc, field
    )


def parse_operator(text, trunc, field=QQ):
    return evaluate(parse(text), trunc, field)


# -- printing ---------------------------------------------------------------


def _fmt_q(x):
    return str(mpq(x))


def _coefficient(c):
    """(sign, text) with text empty for a unit coefficient."""
    if isinstance(c, GaussianRational) and c.im:
        if not c.re:
            im = c.im
            mag = "i" if abs(im) == 1 else f"{_fmt_q(abs(im))}*i"
            return (-1 if im < 0 else 1), mag
        sign = "-" if c.im < 0 else "+"
        im = "i" if abs(c.im) == 1 else f"{_fmt_q(abs(c.im))}*i"
        return 1, f"({_fmt_q(c.re)} {sign} {im})"
    r = c.re if isinstance(c, GaussianRational) else mpq(c)
    mag = "" if abs(r) == 1 else _fmt_q(abs(r))
    return (-1 if r < 0 else 1), mag


def _monomial_text(c, k, d):
    sign, coef = _coefficient(c)
    parts = [coef] if coef else []
    if k:
        parts.append("t" if k == 1 else f"t^{k}")
    if d:
        parts.append("E" if d == 1 else f"E^{d}")
    return sign, "*".join(parts) or "1"


def print_text(L):
    """Flat sum of monomials c*t^k*E^d, ascending in k, descending in d."""
    pieces = []
    for k, p in L.items():
        for d in range(p.degree, -1, -1):
            if p[d]:
                pieces.append(_monomial_text(p[d], k, d))
    if not pieces:
        return "0"
    sign, body = pieces[0]
    text = ("-" if sign < 0 else "") + body
    for sign, body in pieces[1:]:
        text += (" - " if sign < 0 else " + ") + body
    return text


def print_series(s, exponent=None):
    """Series text with an order term, e.g. ``1 - t + 1/2*t^2 + O(t^3)``.

    A nonzero ``exponent`` is shown as a leading ``t^(lam)*`` factor.
    """
    pieces = [_monomial_text(c, k, 0) for k, c in s.items()]
    if pieces:
        sign, body = pieces[0]
        text = ("-" if sign < 0 else "") + body
        for sign, body in pieces[1:]:
            text += (" - " if sign < 0 else " + ") + body
        text += f" + O(t^{s.trunc + 1})"
    else:
        text = f"O(t^{s.trunc + 1})"
    if exponent:
        lam = s.field.format(exponent)
        text = f"t^({lam})*({text})"
    return text
