from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weylbs.dsl import (Bracket, BracketPower, Context, FPower, ParseError, Partial, Product,
                        ResolveError, ScalarPoly, Sum, Var, evaluate_text, operator, parse,
                        render, scalar)
from weylbs.scalars import UniPoly
from weylbs.weyl import WeylElement

NAMES = ("x1", "x2", "y1")


def test_bracket_node():
    assert parse("[dx1, x1]") == Bracket(Partial("x1"), Var("x1"))
    assert parse("[dx1, x1; 3]") == BracketPower(Partial("x1"), Var("x1"), 3)


def test_scalar_polynomial_expands():
    node = parse("(s+1)^2*(s+2)")
    assert isinstance(node, ScalarPoly)
    assert node.poly == UniPoly.from_roots([-1, -1, -2])
    assert scalar("(s+1)*(s+1/2)") == UniPoly.from_roots([-1, Fraction(-1, 2)])


def test_difference_is_sum_of_two_products():
    node = parse("x1*dx1 - y1*dy1")
    assert isinstance(node, Sum) and len(node.terms) == 2
    assert all(isinstance(t, Product) for t in node.terms)


def test_f_powers():
    assert parse("f^s") == FPower(0)
    assert parse("f^(s+1)") == FPower(1)
    assert parse("f^(s-2)") == FPower(-2)


@pytest.mark.parametrize("text,pos", [("x1 + ", 5), ("x1 ? y1", 3), ("(x1", 3), ("[x1; 2]", 3)])
def test_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.pos == pos


def test_resolution_errors():
    with pytest.raises(ResolveError):
        operator("z", NAMES)
    with pytest.raises(ResolveError):
        operator("f^(s+1)", NAMES)


def test_evaluation_matches_direct_construction():
    x1, d1 = WeylElement.x(3, 0), WeylElement.d(3, 0)
    assert operator("[dx1, x1^2]", NAMES) == x1 * 2
    assert operator("(s+1)*dx1", NAMES) == d1 * UniPoly((1, 1))
    assert operator("[dx1^2, x1; 2]", NAMES) == WeylElement.scalar(3, 2)
    assert operator("x1^-1", NAMES) * x1 == WeylElement.one(3)


def test_sandwich_bracket_expansion():
    f = WeylElement.monomial(3, (1, 0, 1))
    val = evaluate_text("[dx1*dy1, f^(s+1)]", Context(NAMES, f=f))
    assert len(val.terms) == 2
    assert {k for _, k, _ in val.terms} == {1}


# random expression text for the parse-print-parse property
atoms = st.sampled_from(["x1", "x2", "y1", "dx1", "dy1", "s", "3", "1/2", "(s+1)", "f^(s+1)", "f^s"])


def _expr(depth):
    if depth == 0:
        return atoms
    sub = _expr(depth - 1)
    return st.one_of(
        atoms,
        st.tuples(sub, sub).map(lambda t: f"{t[0]} + {t[1]}"),
        st.tuples(sub, sub).map(lambda t: f"{t[0]} - {t[1]}"),
        st.tuples(sub, sub).map(lambda t: f"({t[0]})*({t[1]})"),
        st.tuples(sub, st.integers(0, 3)).filter(lambda t: "f^" not in t[0])
          .map(lambda t: f"({t[0]})^{t[1]}"),
        st.tuples(sub, sub).map(lambda t: f"[{t[0]}, {t[1]}]"),
        st.tuples(sub, sub, st.integers(0, 3)).map(lambda t: f"[{t[0]}, {t[1]}; {t[2]}]"),
        sub.map(lambda t: f"-({t})"),
    )


@settings(max_examples=300, deadline=None)
@given(_expr(3))
def test_parse_print_parse_fixpoint(text):
    node = parse(text)
    assert parse(render(node)) == node
