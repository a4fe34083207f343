import io
import json
import pathlib
import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings

from fuchsforge import cli
from fuchsforge.dsl import parse, parse_operator, print_series, print_text
from fuchsforge.errors import DSLParseError, PreconditionError
from fuchsforge.fields import QQI, GaussianRational
from fuchsforge.operators import OperatorSeries
from fuchsforge.poly import EulerPolynomial
from fuchsforge.serialize import operator_from_json, operator_to_json, series_from_json, series_to_json

from gen import random_operator, seeded

GOLDEN = pathlib.Path(__file__).parent / "golden"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main([a.replace("{golden}", str(GOLDEN)) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


# -- parsing and printing -------------------------------------------------------------


def test_parse_examples():
    L = parse_operator("(E + t)*(E - 1)", 6)
    assert dict(L.items()) == {0: EulerPolynomial((0, -1, 1)), 1: EulerPolynomial((-1, 1))}
    D2 = parse_operator("D^2", 6)
    assert D2.kmin == -2 and D2[-2] == EulerPolynomial((0, -1, 1))
    M = parse_operator("3/2*t^2*E", 6)
    assert dict(M.items()) == {2: EulerPolynomial((0, mpq(3, 2)))}
    assert parse_operator("-t^-1*E + 2", 6).kmin == -1


def test_gaussian_parse():
    L = parse_operator("E - i*t", 4, QQI)
    assert L[1] == EulerPolynomial((GaussianRational(0, -1),))
    with pytest.raises(PreconditionError):
        parse_operator("E - i", 4)


@pytest.mark.parametrize(
    "text, pos",
    [("E +* t", 3), ("(E + t", 6), ("E^-1", 2), ("E $ t", 2), ("", 0), ("E t", 2)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(DSLParseError) as info:
        parse(text)
    assert info.value.position == pos


def test_print_examples():
    assert print_text(OperatorSeries.zero(5)) == "0"
    assert print_text(parse_operator("E", 5)) == "E"
    assert print_text(parse_operator("(E+t)*(E-1)", 5)) == "E^2 - E + t*E - t"
    s = parse_operator("E + t", 4)
    assert print_series(s.leading_coefficient()) == "1 + O(t^5)"


@settings(max_examples=60, deadline=None)
@given(seeded(random_operator, trunc=8, kmin_range=(-2, 2)))
def test_round_trip_text(L):
    assert parse_operator(print_text(L), L.trunc) == L


def _gaussian_operator(rng):
    terms = {}
    for k in range(rng.randint(0, 2), 5):
        terms[k] = EulerPolynomial([GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(3)])
    return OperatorSeries.from_dict(terms, 6, QQI)


@settings(max_examples=40, deadline=None)
@given(seeded(_gaussian_operator))
def test_round_trip_text_gaussian(L):
    assert parse_operator(print_text(L), 6, QQI) == L


@settings(max_examples=40, deadline=None)
@given(seeded(random_operator, trunc=8, kmin_range=(-2, 2)))
def test_round_trip_json(L):
    blob = json.dumps(operator_to_json(L))
    assert operator_from_json(json.loads(blob)) == L
    s = L.leading_coefficient()
    assert series_from_json(json.loads(json.dumps(series_to_json(s))), L.field) == s


# -- command line ------------------------------------------------------------------------


def test_golden_outputs_byte_identical():
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for name, (argv, expected) in cases.items():
        first = run(*argv)
        second = run(*argv)
        assert first == second, name
        code, text, _ = first
        assert code == expected, name
        assert text == (GOLDEN / f"{name}.json").read_text(), name


def test_text_outputs():
    code, out, _ = run("nf", "minimal", "(E+t)*(E-1)", "-N", "4")
    assert code == 0 and "normal_form: E^2 - E - t" in out and "verified: true" in out
    code, out, _ = run("mul", "E", "t")
    assert code == 0 and "product: t*E + t" in out
    code, out, _ = run("resonances", "E*(E-1)")
    assert "N: 1" in out


def test_exit_codes():
    assert run("normalize", "E +")[0] == 2
    assert run("nf", "euler", "E*(E-1)")[0] == 3
    assert run("--field", "Q", "normalize", "E - i")[0] == 3
    assert run("solve", "(E+t)*(E-1)", "--exponent", "0")[0] == 4
    assert run("verify", "E", "E-1", "1", "1")[0] == 1
    assert run("verify", "E", "E", "1", "1", "--flavor", "weyl")[0] == 0
    assert run("nf", "reducible", "E^2+1")[0] == 3
    assert run("--field", "Qi", "nf", "reducible", "E^2+1")[0] == 0


def test_internal_error_exit_code(monkeypatch):
    def boom(session, args):
        raise RuntimeError("broken")

    monkeypatch.setattr(cli, "cmd_normalize", boom)
    code, out, _ = run("--format", "json", "normalize", "E")
    assert code == 5 and json.loads(out)["error"]["exit_code"] == 5


def test_flags_after_subcommand_and_roots():
    code, out, _ = run("nf", "reducible", "(E+t)*(E-1)", "--roots", "1,0", "--format", "json", "-N", "5")
    assert code == 0 and json.loads(out)["achieved_trunc"] == 5
    code, _, _ = run("nf", "reducible", "(E+t)*(E-1)", "--roots", "0,2")
    assert code == 3


def test_default_truncation(monkeypatch):
    code, out, _ = run("--format", "json", "normalize", "E")
    assert json.loads(out)["operator"]["trunc"] == 16
    code, out, _ = run("--format", "json", "normalize", "E*(E-20)")
    assert json.loads(out)["operator"]["trunc"] == 42
    monkeypatch.setenv("FUCHSFORGE_TRUNC", "5")
    code, out, _ = run("--format", "json", "normalize", "E")
    assert json.loads(out)["operator"]["trunc"] == 5


def test_deterministic_random_commands():
    rng = random.Random(7)
    for _ in range(5):
        L = random_operator(rng, trunc=6, tmax=2)
        text = print_text(L)
        assert run("--format", "json", "-N", "6", "gcd", text, "E-1") == run(
            "--format", "json", "-N", "6", "gcd", text, "E-1"
        )
