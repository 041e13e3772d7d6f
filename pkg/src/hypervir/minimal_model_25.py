"""The (2,5) minimal model: N_0(T,T) = (3/10) T'' and the genus-2 coefficient solve."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .curve import CurveSpec, generic_curve, split_even_odd
from .exact_algebra import (
    LinearSystem,
    Poly,
    compatibility_conditions,
    Rational,
    solve_linear,
    solve_linear_with_parameter,
)
from .field_element import GaloisElement, diagonal_series
from .correlators_one import C, VAC, build_one_point
from .reports import CorrelatorReport
from .correlators_two import TwoPointFunction, build_two_point, normal_ordered_TT


class ModelError(ValueError):
    pass


def model_constants(p: int, q: int) -> tuple[Rational, Rational]:
    """Central charge ``1 - 6(p-q)^2/(pq)`` and the number ``(p-1)(q-1)/2`` of irreducibles."""
    if p < 2 or q < 2 or math.gcd(p, q) != 1:
        raise ModelError("invalid model: need coprime p, q >= 2")
    c = 1 - mpq(6 * (p - q) ** 2, p * q)
    return c, mpq((p - 1) * (q - 1), 2)


C25, _ = model_constants(2, 5)
ALPHA25 = mpq(3, 10)


def _monomials(names: list[str], max_degree: int) -> list[Poly]:
    out = []
    for deg in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(names, deg):
            m = Poly.const(1)
            for nm in combo:
                m = m * Poly.var(nm)
            out.append(m)
    return out


def _equations(e: GaloisElement, names: list[str]) -> list[Poly]:
    eqs = []
    for r in e.components.values():
        eqs.extend(r.num.split_by(names).values())
    return eqs


def n0_defect(tpf: TwoPointFunction, alpha) -> GaloisElement:
    """``<N_0(T,T)(x_2)> - alpha d^2<T(x_2)>``."""
    n0 = normal_ordered_TT(tpf)
    t2 = tpf.opf.element(2)
    return n0 - t2.diff(2).diff(2) * alpha


@dataclass
class G1Solution:
    alpha: Rational
    c: Rational
    candidates: list[Rational]
    unique: bool
    report: CorrelatorReport


def _g1_setup(curve: CurveSpec, state_degree: int, alpha, c=None):
    tpf = build_two_point(curve)
    curve_syms = sorted({v for a in curve.coeffs for v in a.variables()})
    basis = _monomials(["A1"] + curve_syms, state_degree)
    b_names = [f"b{k}" for k in range(len(basis))]
    b00 = sum((Poly.var(b) * m for b, m in zip(b_names, basis)), Poly())
    values = {"B_0_0": b00, VAC: 1}
    if c is not None:
        values[C] = c
    defect = n0_defect(tpf, alpha).subs(values)
    return defect, _equations(defect, ["x2", "A1"] + curve_syms), b_names


def force_N0_constraint_g1(curve: CurveSpec | None = None, state_degree: int = 2) -> G1Solution:
    """Solve ``<N_0(T,T)> = alpha d^2 <T>`` on a genus-one curve for ``alpha`` and ``c``.

    The only state coefficient at g = 1 is ``B_0_0``; it is given a general
    polynomial ansatz in ``A1`` and the curve coefficients.  ``<1> = 1`` by
    homogeneity.
    """
    curve = curve or generic_curve(3, 4)
    if curve.g != 1 or curve.n != 3:
        raise ModelError("the genus-one constraint needs n = 3")
    _, eqs, b_names = _g1_setup(curve, state_degree, Poly.var("alpha"))
    sol = solve_linear_with_parameter(eqs, ["alpha"] + b_names, C)
    rep = CorrelatorReport("N0(T,T) = alpha T'' at genus one", curve.describe())
    rep.data["c_candidates"] = [str(v) for v in sol.candidates]
    found = [(cv, s) for cv, s in sol.solutions if "alpha" not in _free_unknowns(s)]
    if len(found) != 1:
        rep.add("unique (alpha, c)", False, f"{len(found)} solutions")
        raise ModelError(rep.render())
    cv, s = found[0]
    alpha = s.particular["alpha"].constant_value() if s.particular["alpha"] else mpq(0)
    rep.add("unique (alpha, c)", True, f"alpha = {alpha}, c = {cv}")
    return G1Solution(alpha, cv, list(sol.candidates), True, rep)


def _free_unknowns(sol) -> set[str]:
    free = set()
    for vec in sol.null_space:
        free |= {u for u, v in vec.items() if v}
    return free


@dataclass
class G1Residual:
    consistent: bool
    residual: Poly  # a non-zero combination of the equations when inconsistent
    defect: GaloisElement


def g1_residual(alpha, c, curve: CurveSpec | None = None, state_degree: int = 2) -> G1Residual:
    """Check ``(alpha, c)`` by back-substitution: can any ``B_0_0`` make the defect vanish?"""
    curve = curve or generic_curve(3, 4)
    defect, eqs, b_names = _g1_setup(curve, state_degree, rational_or_poly(alpha), rational_or_poly(c))
    sol = solve_linear(LinearSystem.from_equations(eqs, b_names))
    if sol.kind == "inconsistent":
        return G1Residual(False, sol.witness_constant, defect)
    return G1Residual(True, Poly(), defect.subs(sol.particular).canonical())


def rational_or_poly(v):
    return v if isinstance(v, Poly) else Poly.const(v)


# ---------------------------------------------------------------------------
# the explicit constraint at odd n


def _even_odd_functions(q: Poly, x: str = "x") -> tuple[Poly, Poly]:
    """``q = q_e(x) + x q_o(x)`` with both parts even polynomials in ``x``."""
    s = split_even_odd(q, x)
    t = Poly.var(x) ** 2
    return s.even_part.subs({"t": t}), s.odd_part.subs({"t": t})


def lemma_lhs(curve: CurveSpec, opf) -> dict[int, Poly]:
    """Left-hand side of the explicit (2,5) constraint as ``sum_k L_k / p^k``.

    Each ``L_k`` is a Laurent polynomial in ``x`` (and ``<1>``).  The
    ``p^(4)/p`` term carries a factor ``<1>``, which homogeneity requires.
    """
    x = Poly.var("x")
    xinv = Poly.var("x", -1)
    c, vac = Poly.var(C), Poly.var(VAC)
    inv_vac = Poly.var(VAC, -1)
    n = curve.n
    p = curve.poly("x")

    def d(q: Poly, k: int = 1) -> Poly:
        return q.diff("x", k)

    P, Po = opf.p_even, opf.p_odd
    pe, po = _even_odd_functions(p)
    Pe, PO = _even_odd_functions(P)
    A0 = P.coefficient("x", n - 2)
    L2 = (
        c * vac * mpq(7, 640) * d(p, 2) ** 2
        - c * vac * mpq(7, 960) * d(p) * d(p, 3)
        + d(p, 2) * P / 20
        + d(p) * d(P) * mpq(3, 80)
        - P * P * inv_vac / 16
        + curve.a0 * x ** (n - 2) * P / 4
        - A0 * curve.a0 * x ** (2 * n - 4) / 8
    )
    bracket = -d(p, 3) / 4 - (d(pe, 2) * xinv - d(po, 2)) / 8 + xinv * (d(pe) * xinv + 5 * d(po)) / 8
    # -(c/256)(Pi_e' + x Pi_o')/(xp) with P_even = -(c/8) Pi
    L1 = (
        c * vac * mpq(1, 1536) * d(p, 4)
        - d(P, 2) * mpq(3, 160)
        - Po * Po * inv_vac / 16
        + xinv * (d(Pe) + x * d(PO)) / 32
        - c * vac * mpq(1, 64) * xinv * bracket
    )
    return {2: L2, 1: L1}


def lemma_numerator(curve: CurveSpec, opf) -> Poly:
    """``p^2 * lhs``."""
    L = lemma_lhs(curve, opf)
    p = curve.poly("x")
    return L[2] + L[1] * p


def expand_at_infinity(num: Poly, den: Poly, x: str, lowest: int) -> dict[int, Poly]:
    """Coefficients of ``num/den`` at ``x -> oo`` from the leading order down to ``x^lowest``."""
    if not num:
        return {}
    dn, dd = num.degree(x), den.degree(x)
    lead = den.coefficient(x, dd)
    if not lead.is_constant():
        raise ModelError("leading coefficient must be a number")
    inv = 1 / lead.constant_value()
    nc, dc = num.coefficients(x), den.coefficients(x)
    top = dn - dd
    out: dict[int, Poly] = {}
    series: list[Poly] = []
    for i in range(0, top - lowest + 1):
        acc = nc.get(dn - i, Poly())
        for j in range(1, i + 1):
            acc = acc - dc.get(dd - j, Poly()) * series[i - j]
        series.append(acc * inv)
        if series[-1]:
            out[top - i] = series[-1]
    return out


def verify_25_lemma(curve: CurveSpec, c=None, cross_check: bool = True) -> tuple[CorrelatorReport, Poly]:
    """Check the explicit constraint at odd ``n``; returns the report and ``P^(0)(x,x)``."""
    if curve.n % 2 == 0:
        raise ModelError("the explicit constraint is stated for odd n")
    c = C25 if c is None else c
    n = curve.n
    opf = build_one_point(curve)
    rep = CorrelatorReport("(2,5) constraint at odd n", curve.describe())
    dPe = _even_odd_functions(opf.p_even)[0].diff("x")
    rep.add("Pi_even' / x is a polynomial", not dPe or dPe.min_degree("x") >= 1)
    N = lemma_numerator(curve, opf).subs({C: c})
    regular = (not N) or N.min_degree("x") >= 0
    rep.add("l.h.s. regular at x = 0", regular, "" if regular else f"pole of order {-N.min_degree('x')}")
    p2 = curve.poly("x") ** 2
    orders = expand_at_infinity(N, p2, "x", -5)
    for k in (4, 5):
        v = orders.get(-k)
        rep.add(f"order x^-{k} at infinity vanishes", not v, "" if not v else str(v))
    high = sorted(k for k in orders if k > -4)
    rep.add("orders above x^-4 vanish", not high, "" if not high else f"orders {high}")
    deg_ok = (not N) or N.degree("x") <= 2 * n - 6
    rep.add(f"p^2 * lhs is a polynomial of degree <= {2 * n - 6}", regular and deg_ok)
    if cross_check:
        tpf = build_two_point(curve)
        defect = n0_defect(tpf, ALPHA25).subs({C: c})
        states = {s: 0 for s in tpf.ansatz.symbols}
        lhs2 = GaloisElement.from_poly(curve, N.subs({"x": Poly.var("x2")})) * GaloisElement.inv_p(curve, 2) ** 2
        even = defect.subs(states)
        even = GaloisElement(curve, {(): even.components[()]}) if () in even.components else GaloisElement(curve)
        rep.add("l.h.s. matches the Galois-even two-point N0 defect", (even + lhs2).is_zero())
    rep.data["P0_diagonal"] = str(N)
    return rep, N


# ---------------------------------------------------------------------------
# the genus-two solve


def n0_defect_three(th) -> GaloisElement:
    """``<N_0(T,T)(x_2) T(x_3)> - alpha d_2^2 <T(x_2) T(x_3)>`` with alpha = 3/10."""
    curve = th.curve
    inv = GaloisElement.inv_p(curve, 1) * GaloisElement.inv_p(curve, 2) * GaloisElement.inv_p(curve, 3)
    full = th.raw_times_p() * inv
    n0 = diagonal_series(full, 1, 2, order=0).coefficient(0)
    tt = th.tpf.raw_times_p(2, 3) * GaloisElement.inv_p(curve, 2) * GaloisElement.inv_p(curve, 3)
    return n0 - tt.diff(2).diff(2) * ALPHA25


@dataclass
class ModelSolveResult:
    fixed: dict[str, Poly]
    free: list[str]
    report: CorrelatorReport
    stages: dict[str, object] = field(default_factory=dict)

    def render(self) -> str:
        lines = [self.report.render(), "fixed coefficients:"]
        lines += [f"  {k} = {v}" for k, v in sorted(self.fixed.items())]
        lines.append(f"free parameters ({len(self.free)}): {', '.join(self.free)}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "report": self.report.to_dict(),
            "fixed": {k: str(v) for k, v in sorted(self.fixed.items())},
            "free": list(self.free),
            "stages": {k: v for k, v in self.stages.items()},
        }


def _solve_or_raise(eqs: list[Poly], unknowns: list[str], what: str):
    sol = solve_linear(LinearSystem.from_equations(eqs, unknowns))
    if sol.kind == "inconsistent":
        raise ModelError(f"{what}: inconsistent system, witness constant {sol.witness_constant}")
    return sol


def _stage_one(tpf: TwoPointFunction, c) -> tuple[dict[str, Poly], str, int]:
    """Diagonal two-point constraint; returns the solution in terms of one leftover symbol."""
    symbols = list(tpf.ansatz.symbols)
    defect = n0_defect(tpf, ALPHA25).subs({C: c}).canonical()
    eqs = _equations(defect, ["x2"])
    sol = _solve_or_raise(eqs, symbols, "two-point constraint")
    rank = len(symbols) - sol.free_count
    if sol.free_count == 0:
        return dict(sol.particular), "", rank
    if sol.free_count != 1:
        raise ModelError(f"two-point constraint leaves {sol.free_count} unknowns")
    for leftover in reversed(symbols):
        rest = [s for s in symbols if s != leftover]
        s2 = solve_linear(LinearSystem.from_equations(eqs, rest))
        if s2.kind == "unique":
            return dict(s2.particular), leftover, rank
    raise ModelError("no leftover symbol parametrises the two-point solution")


def _solve_leftover(conditions: list[Poly], leftover: str) -> dict[str, Poly]:
    """Solve ``q * leftover + r = 0`` when some ``q`` is a number; check the rest."""
    for cond in conditions:
        coeffs = cond.coefficients(leftover)
        if set(coeffs) - {0, 1}:
            raise ModelError("compatibility condition is not linear in the leftover")
        q = coeffs.get(1)
        if q is not None and q.is_constant():
            value = -coeffs.get(0, Poly()) / q.constant_value()
            bad = [cd for cd in conditions if cd.subs({leftover: value})]
            if bad:
                raise ModelError(f"leftover conditions disagree: {bad[0].subs({leftover: value})}")
            return {leftover: value}
    return {}


def lee_yang_block_count(g: int) -> int:
    """Genus-g conformal blocks of the (2,5) model from the Verlinde formula.

    ``sum_j S_0j^(2-2g)`` with ``S_0j^-2 = (5 +- sqrt 5)/2``, i.e. ``u_{g-1}``
    for ``u_k = a^k + b^k``, ``a + b = ab = 5``.
    """
    if g < 0:
        raise ValueError("genus must be non-negative")
    if g == 0:
        return 1
    u = [2, 5]
    while len(u) < g:
        u.append(5 * u[-1] - 5 * u[-2])
    return u[g - 1]


def solve_25_g2(curve: CurveSpec | None = None, recheck: bool = True) -> ModelSolveResult:
    """Staged solve at n = 5: two-point diagonal, then three-point diagonal, then back-substitution."""
    from .correlators_three import build_three_point, three_point_checks
    from .correlators_two import pole_structure

    curve = curve or CurveSpec(5, 2, tuple(Poly.const(v) for v in (1, 0, 0, 0, -1, 0)))
    if curve.n != 5:
        raise ModelError("the genus-two solve needs n = 5")
    c = C25
    rep = CorrelatorReport("(2,5) genus-two solve", curve.describe())
    tpf = build_two_point(curve)
    stage1, leftover, rank = _stage_one(tpf, c)
    rep.add("two-point constraint fixes all but one combination", bool(leftover) and rank == len(tpf.ansatz.symbols) - 1,
            f"rank {rank}, leftover {leftover or '-'}")

    tpf1 = tpf.substitute(stage1)
    th = build_three_point(curve, tpf1)
    defect3 = n0_defect_three(th).subs({C: c}).canonical()
    eqs3 = _equations(defect3, ["x2", "x3"])
    # the leftover enters with state-dependent coefficients, so it stays a symbol here
    system3 = LinearSystem.from_equations(eqs3, list(th.ansatz.symbols))
    sol3 = _solve_or_raise(eqs3, list(th.ansatz.symbols), "three-point constraint")
    rep.add("three-point constraint fixes every three-point coefficient", sol3.kind == "unique",
            f"{len(th.ansatz.symbols)} symbols, {sol3.free_count} left")
    conditions = compatibility_conditions(system3)
    stage3 = {}
    if leftover and conditions:
        stage3 = _solve_leftover(conditions, leftover)
    rep.add("three-point constraint fixes the two-point leftover", not leftover or bool(stage3),
            "" if stage3 or not leftover else f"{leftover} appears in no compatibility condition")
    fixed = {k: v.subs(stage3) for k, v in stage1.items()}
    fixed.update({k: v.subs(stage3) for k, v in sol3.particular.items()})
    fixed.update(stage3)

    free = sorted({v for e in fixed.values() for v in e.variables()} | {VAC} | set(tpf.opf.free))
    free = [f for f in free if f not in fixed]
    rep.add("exactly 4 free parameters remain", len(free) == 4, f"{len(free)}: " + ", ".join(free))
    rep.add("free count matches the genus-two conformal block count", len(free) == lee_yang_block_count(2),
            f"{lee_yang_block_count(2)} blocks")

    # c is only fixed inside the defects: the built functions keep it symbolic
    tpf_s = tpf.substitute(fixed)
    rep.add("two-point N0 constraint holds", n0_defect(tpf_s, ALPHA25).subs({C: c}).is_zero())
    th_s = th.substitute(fixed)
    rep.add("three-point N0 constraint holds", n0_defect_three(th_s).subs({C: c}).is_zero())
    if recheck:
        # structural checks compare against references in a symbolic c
        rep.extend(pole_structure(tpf.substitute(fixed)), "solved two-point: ")
        rep.extend(three_point_checks(th.substitute(fixed)), "solved three-point: ")
    stages = {
        "two_point_rank": rank,
        "leftover": leftover,
        "compatibility_conditions": len(conditions),
        "three_point_symbols": list(th.ansatz.symbols),
    }
    return ModelSolveResult(fixed, free, rep, stages)
