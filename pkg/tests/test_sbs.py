import pytest

from weylbs.commutative import CPoly, find_poly_combination
from weylbs.dsl import Context, evaluate_text, operator, scalar
from weylbs.fixture import load_fixture, shipped_fixtures
from weylbs.rings import RingDescriptor
from weylbs.scalars import UniPoly
from weylbs.sbs import (BsEquation, SandwichEquation, collapse_to_bs, search_sandwich,
                        segre_bracket_identities, segre_equation, segre_generators,
                        segre_identity_list, segre_target, theta, verify_bs, verify_identity,
                        verify_sandwich)
from weylbs.weyl import WeylElement, apply, substitute_s

from conftest import random_element

V2 = RingDescriptor.veronese(2)
CUSP = RingDescriptor.semigroup([(2, 0), (3, 0), (0, 1), (1, 1)], ("x", "y"))
POLY1 = RingDescriptor.polynomial(("x",))


def sandwich_fixtures():
    return [n for n in shipped_fixtures() if load_fixture(n).kind == "sandwich"]


# -- verification -------------------------------------------------------------

def test_veronese_xy_verifies_and_wrong_b_refutes():
    eq = load_fixture("veronese-xy").sandwich()
    rep = verify_sandwich(eq)
    assert rep.ok and rep.sample_points == list(range(rep.sampling_bound + 1))
    bad = verify_sandwich(eq.with_b(scalar("(s+1)^2")))
    assert bad.verdict == "refuted"
    fail = bad.first_failure
    assert fail.n == 0 and fail.witness == (0, 0)
    # oracle: both sides at n = 0 on the monomial 1
    lhs = {}
    for a, bt in eq.pairs:
        for e, c in apply(substitute_s(bt, 0), (0, 0)).items():
            for e2, c2 in apply(substitute_s(a, 0) * WeylElement.monomial(2, (1, 1)), e, c).items():
                lhs[e2] = lhs.get(e2, UniPoly()) + c2
    assert lhs[(0, 0)] == fail.lhs[(0, 0)] == 2
    assert fail.rhs[(0, 0)] == 1


def test_veronese_x2_verifies():
    assert verify_sandwich(load_fixture("veronese-x2").sandwich()).ok


def test_cusp_equation_holds_through_the_action_only():
    fx = load_fixture("ex-f-y")
    assert verify_bs(fx.bs()).ok
    # as an operator identity b(0) would have to vanish
    rep = verify_sandwich(load_fixture("ex-f-y-sandwich").sandwich())
    assert rep.verdict == "refuted" and rep.first_failure.n == 0


def test_trivial_bs():
    eq = BsEquation.build(POLY1, (1,), operator("dx", ("x",)), scalar("s+1"))
    assert verify_bs(eq).ok
    assert not verify_bs(BsEquation.build(POLY1, (1,), operator("dx", ("x",)), scalar("s+2"))).ok


def test_verify_bs_accepts_non_monomial_f():
    P2 = RingDescriptor.polynomial(("x", "y"))
    f = {(1, 0): 1, (0, 1): 1}  # x + y, with (dx) (x+y)^(s+1) = (s+1) (x+y)^s
    eq = BsEquation.build(P2, f, operator("dx", ("x", "y")), scalar("s+1"))
    assert verify_bs(eq).ok
    with pytest.raises(ValueError):
        theta(operator("dx", ("x", "y")), WeylElement.mult(f, 2))


def test_invalid_operator_rejected():
    eq = SandwichEquation.build(V2, (1, 1), [(operator("dx", ("x", "y")), WeylElement.one(2))], 1)
    with pytest.raises(ValueError):
        verify_sandwich(eq)


@pytest.mark.parametrize("name", ["veronese-xy", "veronese-x2", "veronese-xy-refuted", "ex-f-y-sandwich"])
def test_sampling_robustness(name):
    eq = load_fixture(name).sandwich()
    assert verify_sandwich(eq).verdict == verify_sandwich(eq, extra_samples=5).verdict


# -- collapse -----------------------------------------------------------------

def test_collapse_of_every_verified_fixture():
    count = 0
    for name in sandwich_fixtures():
        eq = load_fixture(name).sandwich()
        if verify_sandwich(eq).ok:
            bs = collapse_to_bs(eq)
            assert bs.b == eq.b
            assert verify_bs(bs).ok, name
            count += 1
    assert count >= 2


def test_collapse_trivial_cases():
    one = WeylElement.one(2)
    a = operator("dx*dy", ("x", "y"))
    eq = SandwichEquation.build(V2, (1, 1), [(a, one), (a * 2, one)], 3)
    assert collapse_to_bs(eq).delta == a * 3
    killed = SandwichEquation.build(V2, (1, 1), [(a, operator("dx^2", ("x", "y")))], 0)
    bs = collapse_to_bs(killed)
    assert bs.delta.is_zero() and verify_bs(bs).ok
    assert not verify_bs(BsEquation(V2, bs.f, bs.delta, UniPoly.const(1))).ok


# -- ideal property -----------------------------------------------------------

def test_sbs_polynomials_form_an_ideal():
    eq = load_fixture("veronese-xy").sandwich()
    scaled = eq.lscale(scalar("s+3"))
    assert verify_sandwich(scaled).ok
    assert scaled.b == eq.b * scalar("s+3")
    total = eq + scaled
    assert verify_sandwich(total).ok and total.b == eq.b * scalar("s+4")
    assert verify_sandwich(eq.normalized().lscale(scalar("2"))).ok


# -- Theta --------------------------------------------------------------------

def test_theta_small_cases():
    d = operator("dx", ("x",))
    assert theta(d, (1,)).to_text(("x",)) == "(-s)*x^-1 + (1)*dx"
    m = WeylElement.monomial(2, (3, 1))
    assert theta(m, (1, 1)) == m.declare_localization((1, 1))
    for n in range(1, 6):
        lhs = WeylElement.monomial(1, (n,)) * d
        rhs = substitute_s(theta(d, (1,)), n) * WeylElement.monomial(1, (n,))
        assert lhs == rhs


def test_theta_homomorphism_and_conjugation(rng):
    for _ in range(50):
        n = rng.randint(1, 2)
        f = tuple(rng.randint(0, 2) for _ in range(n))
        if not any(f):
            f = (1,) + f[1:]
        a = random_element(rng, n, rng.randint(1, 2), 2)
        b = random_element(rng, n, rng.randint(1, 2), 2)
        ta, tb = theta(a, f), theta(b, f)
        assert theta(a * b, f) == ta * tb
        assert theta(a + b, f) == ta + tb
        k = rng.randint(0, 4)
        fk = WeylElement.monomial(n, tuple(k * e for e in f))
        assert fk * a == substitute_s(ta, k) * fk


# -- search -------------------------------------------------------------------

def test_search_recovers_b_for_the_templates():
    for name in ("veronese-xy-search", "veronese-x2-search", "polynomial-x-search"):
        fx = load_fixture(name)
        eq = search_sandwich(fx.descriptor, fx.f, fx.template, fx.sdeg, fx.bdeg)
        assert eq is not None and eq.b == fx.b.monic(), name
        assert verify_sandwich(eq).ok


def test_search_too_small_template():
    fx = load_fixture("polynomial-x-search-one-word")
    assert search_sandwich(fx.descriptor, fx.f, fx.template, fx.sdeg, fx.bdeg) is None
    fx = load_fixture("veronese-xy-search")
    assert search_sandwich(fx.descriptor, fx.f, fx.template, fx.sdeg, 2) is None


def test_search_with_higher_s_degree_keeps_minimal_b():
    fx = load_fixture("veronese-x2-search")
    eq = search_sandwich(fx.descriptor, fx.f, fx.template, 1, 3)
    assert eq.b == scalar("(s+1)*(s+1/2)")


# -- Segre --------------------------------------------------------------------

@pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 2)])
def test_segre_identities(a, b):
    rep = segre_bracket_identities(a, b)
    assert rep.ok
    assert {p.label for p in rep.parts} >= {"C", "D", "sum"}


def test_segre_c_identity_at_small_n():
    desc = RingDescriptor.segre(2, 2)
    f = WeylElement.monomial(4, (1, 0, 1, 0))
    ctx = Context(desc.names, f=f)
    lhs = evaluate_text("[dx1*dy1, f^(s+1)]", ctx).terms
    q = operator("(s+1)*x1*dx1 + (s+1)*y1*dy1 + (s+1)^2", desc.names)
    rep = verify_identity(desc, f, lhs, [(WeylElement.one(4), 0, q)])
    assert rep.ok and rep.sample_points[:6] == [0, 1, 2, 3, 4, 5]


def test_summed_identity_sign():
    """The summed identity carries -(s+1)(s+a)E + (s+1)(s+b)F; the opposite sign fails."""
    desc = RingDescriptor.segre(2, 3)
    f = WeylElement.monomial(5, (1, 0, 1, 0, 0))
    ctx = Context(desc.names, f=f)
    lhs_text = [lhs for lab, lhs, _ in segre_identity_list(2, 3) if lab == "sum"][0]
    lhs = evaluate_text(lhs_text, ctx).terms
    one = WeylElement.one(5)
    flipped = operator("(s+1)*(s+2)*x1*dx1 - (s+1)*(s+3)*y1*dy1", desc.names)
    assert verify_identity(desc, f, lhs, [(one, 0, flipped)]).verdict == "refuted"


@pytest.mark.parametrize("a,b", [(2, 2), (2, 3)])
def test_assembled_segre_equation(a, b):
    eq = segre_equation(a, b)
    assert eq.b == scalar(f"(s+1)^3*(s+{a})*(s+{b})")
    assert verify_sandwich(eq).ok


# -- commutative helper -------------------------------------------------------

def test_find_combination_trivial():
    names = ("s", "A")
    g = CPoly.parse("s*A + 1", names)
    coeffs = find_poly_combination(g, [g], 0)
    assert coeffs == [CPoly.const(names, 1)]
    gens = [CPoly.parse("s+1", names), CPoly.parse("(s+1)*A", names)]
    assert find_poly_combination(CPoly.const(names, 1), gens, 3) is None


def test_segre_target_in_ideal():
    gens = segre_generators()
    coeffs = find_poly_combination(segre_target(), gens, 4)
    assert coeffs is not None
    assert sum((g * c for g, c in zip(gens, coeffs)), CPoly(gens[0].names)) == segre_target()
    assert find_poly_combination(segre_target(), gens, 3) is None


def test_literal_third_generator_gives_no_combination():
    gens = segre_generators()
    literal = CPoly.parse("(s+1)*E^2 + (s+1)*E*F + 2*(s+1)^2*E + (s+1)^2*F + (s+1)^3", gens[0].names)
    assert find_poly_combination(segre_target(), [gens[0], gens[1], literal], 4) is None
