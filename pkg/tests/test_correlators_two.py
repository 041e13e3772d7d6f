import pytest

from hypervir.correlators_one import build_one_point
from hypervir.correlators_two import (
    attach_state_ansatz,
    build_R,
    build_two_point,
    correction_list,
    lemma_expansions,
    ope_reference,
    pole_structure,
    regular_part_and_N0,
    subtract_corrections,
    verify_correction_list,
)
from hypervir.curve import sample_curve
from hypervir.exact_algebra import Poly
from hypervir.field_element import GaloisElement, diagonal_series, relabel, weighted_projection

C, VAC = Poly.var("c"), Poly.var("vac")


def over_pp(e):
    curve = e.curve
    return e * GaloisElement.inv_p(curve, 1) * GaloisElement.inv_p(curve, 2)


@pytest.fixture(scope="module")
def quintic_R(quintic):
    opf = build_one_point(quintic)
    return opf, build_R(quintic, opf)


def test_R_leading_pole(quintic, quintic_R):
    _, R = quintic_R
    s = diagonal_series(over_pp(R), 1, 2, order=-1)
    assert (s.coefficient(-4) - GaloisElement.from_poly(quintic, C * VAC / 2)).is_zero()
    assert s.coefficient(-3).is_zero()


def test_R_subleading_poles_match_ope(quintic, quintic_R):
    opf, R = quintic_R
    rest = diagonal_series(over_pp(R) - ope_reference(quintic, opf), 1, 2, order=-1)
    assert rest.principal_part() == {}


def test_R_exchange_symmetric(quintic_R):
    _, R = quintic_R
    assert (relabel(R, {1: 2, 2: 1}) - R).is_zero()


def test_corrections_symmetry_and_growth(seeded_quintic):
    R = build_R(seeded_quintic, build_one_point(seeded_quintic))
    corr = subtract_corrections(R)
    assert (corr.r12 - corr.r21).is_zero()
    assert weighted_projection(corr.corrected, 1).is_zero()
    assert weighted_projection(corr.corrected, 2).is_zero()


def test_corrections_rejected_for_even_degree():
    curve = sample_curve(6, 1)
    R = build_R(curve, build_one_point(curve))
    with pytest.raises(ValueError):
        subtract_corrections(R)


def test_correction_list_quintic(quintic):
    rep = verify_correction_list(quintic)
    assert rep.passed, rep.render()


def test_correction_list_seeded(seeded_quintic):
    assert verify_correction_list(seeded_quintic).passed


def test_correction_list_cubic(cubic):
    opf = build_one_point(cubic)
    assert not opf.p_odd
    assert verify_correction_list(cubic, opf).passed
    # no y-weighted families without an odd one-point part
    assert set(correction_list(cubic, opf).components) <= {()}


def test_correction_list_septic():
    curve = sample_curve(7, 1)
    assert verify_correction_list(curve).passed


def test_ansatz_sizes(quintic):
    a5 = attach_state_ansatz(quintic)
    assert len(a5.symbols) == 6 and not a5.p1 and not a5.p12
    a7 = attach_state_ansatz(sample_curve(7, 1))
    assert [s for s in a7.symbols if s.startswith("F")] == ["F_0_0"]
    assert a7.p12 == Poly.var("F_0_0")


def test_ansatz_symmetric(quintic):
    p0 = attach_state_ansatz(quintic).p0
    swapped = p0.subs({"x1": Poly.var("x2"), "x2": Poly.var("x1")})
    assert swapped == p0


@pytest.mark.parametrize("which", ["cubic", "quintic"])
def test_pole_structure(which, request):
    curve = request.getfixturevalue(which)
    rep = pole_structure(build_two_point(curve))
    assert rep.passed, rep.render()


def test_pole_structure_seeded(seeded_quintic):
    assert pole_structure(build_two_point(seeded_quintic)).passed


def test_regular_part_cubic(cubic):
    rep, n0 = regular_part_and_N0(build_two_point(cubic))
    assert rep.passed
    assert n0.points() <= {2}


@pytest.mark.parametrize("n", [5, 7, 9])
def test_lemma_expansions(n):
    assert lemma_expansions(sample_curve(n, 2))
