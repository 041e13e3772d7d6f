import pytest
from gmpy2 import mpq

from hypervir.correlators_three import attach_state_ansatz3, build_three_point
from hypervir.correlators_two import build_two_point
from hypervir.curve import sample_curve
from hypervir.exact_algebra import Poly
from hypervir.minimal_model_25 import (
    ALPHA25,
    C25,
    ModelError,
    force_N0_constraint_g1,
    g1_residual,
    lee_yang_block_count,
    model_constants,
    n0_defect,
    n0_defect_three,
    solve_25_g2,
    verify_25_lemma,
)


@pytest.mark.parametrize(
    "pq, c, irreps",
    [((2, 5), mpq(-22, 5), 2), ((2, 3), 0, 1), ((3, 4), mpq(1, 2), 3), ((5, 2), mpq(-22, 5), 2)],
)
def test_model_constants(pq, c, irreps):
    # c = 1 - 6 (p - q)^2 / (p q), (p - 1)(q - 1)/2 irreducibles
    p, q = pq
    assert model_constants(p, q) == (c, irreps)
    assert c == 1 - mpq(6 * (p - q) ** 2, p * q)


@pytest.mark.parametrize("pq", [(2, 4), (1, 3), (3, 3), (0, 5)])
def test_model_constants_invalid(pq):
    with pytest.raises(ModelError):
        model_constants(*pq)


def test_constants_single_source():
    assert (C25, ALPHA25) == (model_constants(2, 5)[0], mpq(3, 10))


# genus one -----------------------------------------------------------------------

def test_genus_one_solve(generic_cubic):
    sol = force_N0_constraint_g1(generic_cubic)
    assert (sol.alpha, sol.c) == (mpq(3, 10), mpq(-22, 5))
    assert sol.candidates == [mpq(-22, 5)] and sol.unique


def test_genus_one_back_substitution():
    res = g1_residual(mpq(3, 10), mpq(-22, 5))
    assert res.consistent and res.defect.is_zero()


@pytest.mark.parametrize("alpha, c", [(mpq(3, 10), mpq(-21, 5)), (mpq(1, 3), mpq(-22, 5))])
def test_genus_one_perturbed(alpha, c):
    res = g1_residual(alpha, c)
    assert not res.consistent and res.residual != Poly()


def test_genus_one_needs_cubic(quintic):
    with pytest.raises(ModelError):
        force_N0_constraint_g1(quintic)


# the explicit constraint at odd n ------------------------------------------------------

@pytest.mark.parametrize("seed", [1, 2, 3])
def test_lemma_quintic_samples(seed):
    rep, N = verify_25_lemma(sample_curve(5, seed))
    assert rep.passed, rep.render()
    assert N.degree("x") <= 4


def test_lemma_quintic_degree(quintic):
    rep, N = verify_25_lemma(quintic)
    assert rep.passed
    assert N.degree("x") == 4
    # no y1 y2 state polynomial at n = 5
    assert not build_two_point(quintic).ansatz.p12


@pytest.mark.parametrize("n", [7, 9])
def test_lemma_higher_odd_degree(n):
    assert verify_25_lemma(sample_curve(n, 1))[0].passed


def test_lemma_fails_away_from_lee_yang(quintic):
    rep, _ = verify_25_lemma(quintic, c=mpq(-21, 5), cross_check=False)
    assert not rep.passed


def test_lemma_rejects_even_degree():
    with pytest.raises(ModelError):
        verify_25_lemma(sample_curve(6, 1))


def test_three_point_diagonal_pairing():
    p0 = attach_state_ansatz3(sample_curve(5, 1)).parts[()]
    x2 = Poly.var("x2")
    diag = p0.subs({"x1": x2})
    coeff = diag.coefficient("x2", 2).coefficient("x3", 0)
    assert coeff == Poly.var("B_1_1_0") + 2 * Poly.var("B_2_0_0")


# genus two --------------------------------------------------------------------------

def test_block_counts():
    assert [lee_yang_block_count(g) for g in range(5)] == [1, 2, 5, 15, 50]
    with pytest.raises(ValueError):
        lee_yang_block_count(-1)


@pytest.fixture(scope="module")
def g2(quintic):
    return solve_25_g2(quintic, recheck=False)


def _check(result, name):
    return next(c for c in result.report.checks if c.name == name).passed


def test_stage_one_leaves_one_unknown(g2):
    assert g2.stages["two_point_rank"] == 5
    assert g2.stages["leftover"] == "B_1_1"
    assert _check(g2, "two-point constraint fixes all but one combination")


def test_stage_two_fixes_three_point_coefficients(g2):
    syms = g2.stages["three_point_symbols"]
    assert len(syms) == 10
    assert all(s in g2.fixed for s in syms)
    assert _check(g2, "three-point constraint fixes every three-point coefficient")


def test_leftover_stays_free(g2):
    # no compatibility condition constrains B_1_1; the count matches the conformal blocks
    assert g2.stages["compatibility_conditions"] == 0
    assert g2.free == ["A1", "A2", "A3", "B_1_1", "vac"]
    assert len(g2.free) == lee_yang_block_count(2)


def test_closed_loop_for_any_leftover(quintic, g2):
    tpf = build_two_point(quintic)
    for b11 in (0, mpq(7, 3)):
        values = {k: v.subs({"B_1_1": b11}) for k, v in g2.fixed.items()}
        values["B_1_1"] = Poly.const(b11)
        assert n0_defect(tpf.substitute(values), ALPHA25).subs({"c": C25}).is_zero()
        th = build_three_point(quintic, tpf.substitute(values)).substitute(values)
        assert n0_defect_three(th).subs({"c": C25}).is_zero()


def test_perturbed_coefficient_breaks_constraint(quintic, g2):
    values = dict(g2.fixed)
    values["B_2_2_2"] = values["B_2_2_2"] + 1
    tpf = build_two_point(quintic).substitute(values)
    th = build_three_point(quintic, tpf).substitute(values)
    assert not n0_defect_three(th).subs({"c": C25}).is_zero()


def test_numeric_c_rejected_in_built_functions(quintic):
    with pytest.raises(ValueError):
        build_two_point(quintic).substitute({"c": Poly.const(C25)})


def test_solve_needs_quintic(cubic):
    with pytest.raises(ModelError):
        solve_25_g2(cubic)
