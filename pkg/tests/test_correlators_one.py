import pytest
from gmpy2 import mpq

from hypervir.correlators_one import (
    DimensionCount,
    asymptotic_residual,
    asymptotics_check,
    build_one_point,
    dimension_count,
    leading_constraints,
    odd_degree_bound,
)
from hypervir.curve import generic_curve, sample_curve
from hypervir.exact_algebra import Poly
from hypervir.field_element import GaloisElement, RationalExpr

C, VAC, X = Poly.var("c"), Poly.var("vac"), Poly.var("x")


def test_cubic_closed_form(generic_cubic):
    opf = build_one_point(generic_cubic)
    assert opf.p_even == -4 * C * X * VAC + Poly.var("A1")
    assert not opf.p_odd
    assert asymptotics_check(opf).passed


def test_cubic_matches_genus_one_formula(generic_cubic):
    # <T> = (c/32) p'^2/p^2 <1> - c <1> x/p + <T>/p with <T> = A1/4
    opf = build_one_point(generic_cubic)
    curve = generic_cubic
    p1, dp = curve.poly("x1"), curve.derivative("x1")
    expected = GaloisElement(curve, {
        (): RationalExpr(C * VAC * dp * dp / 32 + (-C * VAC * Poly.var("x1") + Poly.var("A1") / 4) * p1, {("p", 1): 2})
    })
    assert (opf.element(1) - expected).is_zero()


def test_quintic_leading_coefficient():
    curve = generic_curve(5, 2)
    opf = build_one_point(curve)
    assert opf.fixed["A0"] == -3 * C * 2 * VAC
    assert opf.free == ("A1", "A2", "A3")
    assert odd_degree_bound(5) == -1 and not opf.p_odd
    assert asymptotics_check(opf).passed


def test_quartic_top_two_fixed():
    curve = generic_curve(4, 1)
    opf = build_one_point(curve)
    assert opf.p_even.degree("x") == 2
    assert set(leading_constraints(curve)) == {"A0", "A1"}
    assert odd_degree_bound(4) == -2 and not opf.p_odd
    assert asymptotics_check(opf).passed


def test_unfixed_leading_coefficient_fails(quintic):
    opf = build_one_point(quintic, impose=False)
    rep = asymptotics_check(opf)
    assert not rep.passed
    res = asymptotic_residual(quintic, opf.element(1))
    offending = GaloisElement(quintic, {(): RationalExpr((Poly.var("A0") + 3 * C * VAC) / 4, {("x", 1): 2})})
    assert (res - offending).is_zero()


def test_septic_has_odd_part():
    opf = build_one_point(sample_curve(7, 1))
    assert opf.p_odd.degree("x") == 0 and "Ao0" in opf.free
    assert asymptotics_check(opf).passed


def test_pi_split_reconstructs(quintic):
    opf = build_one_point(quintic)
    assert opf.pi_split().reconstruct() == opf.p_even


@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("parity", [1, 2])
def test_dimension_counts(g, parity):
    n = 2 * g + parity
    dc = dimension_count(sample_curve(n, 3))
    assert dc.dim_even == 2 * g - 1
    if g >= 2:
        assert dc == DimensionCount(2 * g - 1, g - 2, 3 * (g - 1))
    else:
        assert dc.dim_odd is None and dc.total is None


def test_defining_identity_holds(quintic):
    opf = build_one_point(quintic)
    ident = opf.p_times(1) - opf.schwarz_term(1) - opf.polynomial(1) * mpq(1, 4)
    assert ident.is_zero()
