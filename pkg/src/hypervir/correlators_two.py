"""The connected Virasoro two-point function for odd n."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .curve import (
    CurveSpec,
    even_derivative_over_s,
    even_second_derivative,
    split_even_odd,
    sqrt_diag_substitute,
)
from .exact_algebra import Poly
from .field_element import (
    GaloisElement,
    diagonal_series,
    odd_cutoff,
    p_at,
    project_above,
    relabel,
    weighted_projection,
    xname,
)
from .correlators_one import OnePointFunction, build_one_point, c_sym, odd_degree_bound, vac_sym
from .reports import CorrelatorReport


class SymmetryConditionError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def f_pair(curve: CurveSpec, i: int, j: int) -> GaloisElement:
    """``((y_i + y_j)/(x_i - x_j))^2 = (p_i + p_j + 2 y_i y_j)/(x_i - x_j)^2``."""
    num = GaloisElement.from_poly(curve, p_at(curve, i) + p_at(curve, j))
    num = num + GaloisElement.from_poly(curve, 2, (i, j))
    return num * GaloisElement.inv_diff(curve, i, j, 2)


def f_pair_power(curve: CurveSpec, i: int, j: int, k: int) -> GaloisElement:
    return f_pair(curve, i, j) ** k


# ---------------------------------------------------------------------------
# singular part


def _diag_pieces(curve: CurveSpec, opf: OnePointFunction, i: int, j: int) -> dict[str, Poly]:
    xi, xj = xname(i), xname(j)
    sp = split_even_odd(curve.poly("x"), "x")
    sP = split_even_odd(opf.p_even, "x")

    def at(q):
        return sqrt_diag_substitute(q, xi, xj)

    return {
        "E": at(sp.even_part),
        "O": at(sp.odd_part),
        "E1": at(even_derivative_over_s(sp.even_part)),
        "O1": at(even_derivative_over_s(sp.odd_part)),
        "E2": at(even_second_derivative(sp.even_part)),
        "O2": at(even_second_derivative(sp.odd_part)),
        "Pe": at(sP.even_part),
        "Po": at(sP.odd_part),
        "s": Poly.var(xi) + Poly.var(xj),
    }


def build_R(curve: CurveSpec, opf: OnePointFunction, i: int = 1, j: int = 2) -> GaloisElement:
    """The displayed singular part of ``<T T> p_i p_j - <1>^-1 <T><T> p_i p_j``."""
    d = _diag_pieces(curve, opf, i, j)
    c, vac = c_sym(), vac_sym()
    s = d["s"]
    half = mpq(1, 2)
    inv4 = GaloisElement.inv_diff(curve, i, j, 4)
    inv2 = GaloisElement.inv_diff(curve, i, j, 2)
    pi, pj = p_at(curve, i), p_at(curve, j)
    dpi = curve.derivative(xname(i))
    dpj = curve.derivative(xname(j))
    yy = (i, j)

    def yy_poly(q: Poly) -> GaloisElement:
        return GaloisElement.from_poly(curve, q, yy)

    quartic = GaloisElement.from_poly(curve, c * vac * pi * pj / 4)
    quartic = quartic + yy_poly(c * vac * (d["E"] + s * d["O"] * half) / 4)

    quad = GaloisElement.from_poly(curve, c * vac * dpi * dpj / 32)
    quad = quad + yy_poly(c * vac * (d["E1"] + s * d["O1"] * mpq(3, 2)) / 32)
    Pi, Pj = opf.polynomial(i), opf.polynomial(j)
    quad = quad + (Pj * pi + Pi * pj) / 8
    if opf.p_odd:
        diag = GaloisElement.from_poly(curve, d["E"] + s * d["O"] * half)
        odd_mix = GaloisElement.from_poly(curve, opf.p_odd_at(j), (i,))
        odd_mix = odd_mix + GaloisElement.from_poly(curve, opf.p_odd_at(i), (j,))
        quad = quad + odd_mix * diag / 8
    quad = quad + yy_poly(c * vac * (d["E2"] + s * d["O2"] * half) / 32)
    quad = quad + yy_poly((d["Pe"] + s * d["Po"] * half) / 4)
    return quartic * inv4 + quad * inv2


# ---------------------------------------------------------------------------
# growth corrections


@dataclass
class Corrections:
    corrected: GaloisElement
    correction: GaloisElement  # [R]_1 + [R]^2 - [[R]_1]^2
    r12: GaloisElement
    r21: GaloisElement


def subtract_corrections(R: GaloisElement, i: int = 1, j: int = 2) -> Corrections:
    """``R - [R]_i - [R]^j + [[R]_i]^j`` with the symmetry condition enforced."""
    n = R.curve.n
    if n % 2 == 0:
        raise ValueError("growth corrections are only available for odd n")
    r1 = weighted_projection(R, i)
    r2 = weighted_projection(R, j)
    r12 = weighted_projection(r1, j)
    r21 = weighted_projection(r2, i)
    if not (r12 - r21).is_zero():
        raise SymmetryConditionError("[[R]_>k]^>k differs from [[R]^>k]_>k")
    correction = r1 + r2 - r12
    return Corrections(R - correction, correction, r12, r21)


def correction_list(curve: CurveSpec, opf: OnePointFunction, i: int = 1, j: int = 2) -> GaloisElement:
    """Hand-derived odd-n correction terms (to be added to ``R``)."""
    n = curve.n
    if n % 2 == 0:
        raise ValueError("the correction list is stated for odd n only")
    c, vac = c_sym(), vac_sym()
    a0 = curve.a0
    xi, xj = Poly.var(xname(i)), Poly.var(xname(j))
    out = (
        opf.polynomial(j) * (xi ** (n - 2) * (-a0 / 8))
        + opf.polynomial(i) * (xj ** (n - 2) * (-a0 / 8))
        + GaloisElement.from_poly(curve, c * vac * (mpq(-1, 64) * (n * n - 1) * a0 * a0) * xi ** (n - 2) * xj ** (n - 2))
    )
    if not opf.p_odd:
        return out
    families = [
        (curve.a(1) * mpq(-1, 8), (n - 5) // 2, (n - 1) // 2),
        (Poly.const(a0 * mpq(-1, 16)), (n - 3) // 2, (n - 1) // 2),
        (Poly.const(a0 * mpq(-3, 16)), (n - 5) // 2, (n + 1) // 2),
        (curve.a(2) * mpq(-1, 16), (n - 5) // 2, (n - 3) // 2),
    ]
    for coeff, e_own, e_other in families:
        if e_own < 0:
            raise ValueError("negative exponent in correction family")
        out = out + GaloisElement.from_poly(curve, coeff * xi ** e_own * xj ** e_other * opf.p_odd_at(j), (i,))
        out = out + GaloisElement.from_poly(curve, coeff * xj ** e_own * xi ** e_other * opf.p_odd_at(i), (j,))
    return out


def verify_correction_list(curve: CurveSpec, opf: OnePointFunction | None = None) -> CorrelatorReport:
    opf = opf or build_one_point(curve)
    R = build_R(curve, opf)
    rep = CorrelatorReport("two-point correction list", curve.describe())
    try:
        corr = subtract_corrections(R)
    except SymmetryConditionError as exc:
        rep.add("symmetry condition [[R]_>k]^>k = [[R]^>k]_>k", False, str(exc))
        return rep
    rep.add("symmetry condition [[R]_>k]^>k = [[R]^>k]_>k", True)
    residual = (correction_list(curve, opf) + corr.correction).canonical()
    rep.add(
        "transcribed list equals generic projections",
        residual.is_zero(),
        "" if residual.is_zero() else "residual: " + residual.render(),
    )
    return rep


# ---------------------------------------------------------------------------
# state ansatz


@dataclass
class StateAnsatz2:
    p0: Poly  # symmetric in x1, x2
    p1: Poly  # coefficient of y1; the y2 coefficient is p1 with x1 <-> x2
    p12: Poly
    symbols: tuple[str, ...]

    def element(self, curve: CurveSpec, i: int = 1, j: int = 2) -> GaloisElement:
        swap = {"x1": Poly.var(xname(j)), "x2": Poly.var(xname(i))}
        same = {"x1": Poly.var(xname(i)), "x2": Poly.var(xname(j))}
        e = GaloisElement.from_poly(curve, self.p0.subs(same))
        if self.p1:
            e = e + GaloisElement.from_poly(curve, self.p1.subs(same), (i,))
            e = e + GaloisElement.from_poly(curve, self.p1.subs(swap), (j,))
        if self.p12:
            e = e + GaloisElement.from_poly(curve, self.p12.subs(same), (i, j))
        return e

    def substitute(self, values) -> "StateAnsatz2":
        remaining = tuple(s for s in self.symbols if s not in values)
        return StateAnsatz2(self.p0.subs(values), self.p1.subs(values), self.p12.subs(values), remaining)


def symmetric_pairs(deg: int, prefix: str) -> tuple[Poly, list[str]]:
    x1, x2 = Poly.var("x1"), Poly.var("x2")
    out, names = Poly(), []
    for a in range(deg, -1, -1):
        for b in range(a, -1, -1):
            name = f"{prefix}_{a}_{b}"
            mono = x1 ** a * x2 ** b
            if a != b:
                mono = mono + x1 ** b * x2 ** a
            out = out + Poly.var(name) * mono
            names.append(name)
    return out, names


def attach_state_ansatz(curve: CurveSpec) -> StateAnsatz2:
    """Symbolic ``P^(0)``, ``P^(1)``, ``P^(2)``, ``P^(1,2)`` within the degree bounds."""
    n = curve.n
    even_deg = n - 3
    odd_deg = odd_degree_bound(n)
    p0, names = symmetric_pairs(even_deg, "B")
    p1 = Poly()
    if odd_deg >= 0:
        x1, x2 = Poly.var("x1"), Poly.var("x2")
        for a in range(odd_deg, -1, -1):
            for b in range(even_deg, -1, -1):
                name = f"E_{a}_{b}"
                p1 = p1 + Poly.var(name) * x1 ** a * x2 ** b
                names.append(name)
    p12 = Poly()
    if odd_deg >= 0:
        p12, more = symmetric_pairs(odd_deg, "F")
        names.extend(more)
    return StateAnsatz2(p0, p1, p12, tuple(names))


# ---------------------------------------------------------------------------
# assembly


@dataclass
class TwoPointFunction:
    curve: CurveSpec
    opf: OnePointFunction
    R: GaloisElement
    corrections: Corrections
    ansatz: StateAnsatz2
    assembled: GaloisElement  # <1> <T T>_c p1 p2

    def singular_reference(self, i: int = 1, j: int = 2) -> GaloisElement:
        """``(c/32) f^2 <1> + (1/16) f (P_i + P_j)``."""
        f = f_pair(self.curve, i, j)
        c, vac = c_sym(), vac_sym()
        return f * f * (c * vac / 32) + f * (self.opf.polynomial(i) + self.opf.polynomial(j)) / 16

    def regular_part(self, i: int = 1, j: int = 2) -> GaloisElement:
        """``<[T(x_i) T(x_j)]_reg> p_i p_j``."""
        reg = self.assembled - self.singular_reference(1, 2)
        if (i, j) == (1, 2):
            return reg
        return relabel(reg, _pair_map(i, j))

    def assembled_at(self, i: int, j: int) -> GaloisElement:
        if (i, j) == (1, 2):
            return self.assembled
        return relabel(self.assembled, _pair_map(i, j))

    def raw_times_p(self, i: int = 1, j: int = 2) -> GaloisElement:
        """``<T(x_i) T(x_j)> p_i p_j`` (Laurent in ``<1>``)."""
        vac_inv = Poly.var("vac") ** -1
        return self.assembled_at(i, j) + self.opf.p_times(i) * self.opf.p_times(j) * vac_inv

    def substitute(self, values) -> "TwoPointFunction":
        return TwoPointFunction(
            self.curve,
            self.opf.substitute(values),
            self.R.subs(values),
            self.corrections,
            self.ansatz.substitute(values),
            self.assembled.subs(values),
        )


def _pair_map(i: int, j: int) -> dict[int, int]:
    if (i, j) == (2, 1):
        return {1: 2, 2: 1}
    if i == 1:
        return {2: j}
    if j == 2:
        return {1: i}
    return {1: i, 2: j}


def build_two_point(curve: CurveSpec, opf: OnePointFunction | None = None) -> TwoPointFunction:
    opf = opf or build_one_point(curve)
    R = build_R(curve, opf)
    corr = subtract_corrections(R)
    ansatz = attach_state_ansatz(curve)
    assembled = corr.corrected + ansatz.element(curve)
    return TwoPointFunction(curve, opf, R, corr, ansatz, assembled)


def ope_reference(curve: CurveSpec, opf: OnePointFunction, i: int = 1, j: int = 2) -> GaloisElement:
    """``(c/2)<1>/(x_i-x_j)^4 + (<T(x_i)> + <T(x_j)>)/(x_i-x_j)^2``."""
    c, vac = c_sym(), vac_sym()
    quartic = GaloisElement.inv_diff(curve, i, j, 4) * (c * vac / 2)
    return quartic + (opf.element(i) + opf.element(j)) * GaloisElement.inv_diff(curve, i, j, 2)


def pole_structure(tpf: TwoPointFunction) -> CorrelatorReport:
    curve = tpf.curve
    c, vac = c_sym(), vac_sym()
    rep = CorrelatorReport("two-point pole structure", curve.describe())
    over_p = tpf.assembled * GaloisElement.inv_p(curve, 1) * GaloisElement.inv_p(curve, 2)
    series = diagonal_series(over_p, 1, 2, order=-1)
    lead = series.coefficient(-4) - GaloisElement.from_poly(curve, c * vac / 2)
    rep.add("eps^-4 coefficient = (c/2)<1>", lead.is_zero())
    rep.add("eps^-3 coefficient = 0", series.coefficient(-3).is_zero())
    rest = diagonal_series(over_p - ope_reference(curve, tpf.opf), 1, 2, order=-1)
    ok = not rest.principal_part()
    rep.add("eps^-2, eps^-1 match (<T(x1)> + <T(x2)>)/eps^2", ok,
            "" if ok else f"orders {sorted(rest.principal_part())} remain")
    canon = tpf.assembled.canonical()
    rep.add("no p(x_i) denominators", canon.max_den_exponent("p") == 0)
    swapped = relabel(tpf.assembled, {1: 2, 2: 1})
    rep.add("exchange symmetry 1 <-> 2", (swapped - tpf.assembled).is_zero())
    k = curve.n - 3
    for i in (1, 2):
        grow = project_above(tpf.assembled, i, k, odd_cutoff(curve.n, k))
        rep.add(f"O(x{i}^(n-3)) at infinity", grow.is_zero())
    return rep


def lemma_expansions(curve: CurveSpec) -> bool:
    """Both diagonal expansions of ``p_even`` and ``x p_odd`` hold to ``O((x1-x2)^4)``."""
    sp = split_even_odd(curve.poly("x"), "x")
    x1, x2 = Poly.var("x1"), Poly.var("x2")
    t1, t2 = {"t": x1 * x1}, {"t": x2 * x2}

    def at(q):
        return sqrt_diag_substitute(q, "x1", "x2")

    d2 = (x1 - x2) ** 2
    lhs_e = sp.even_part.subs(t1) + sp.even_part.subs(t2)
    rhs_e = at(sp.even_part) * 2 + d2 * (at(even_derivative_over_s(sp.even_part)) + at(even_second_derivative(sp.even_part))) / 4
    lhs_o = x1 * sp.odd_part.subs(t1) + x2 * sp.odd_part.subs(t2)
    rhs_o = (x1 + x2) * (
        at(sp.odd_part)
        + d2 * (at(even_derivative_over_s(sp.odd_part)) * 3 + at(even_second_derivative(sp.odd_part))) / 8
    )
    return _divisible_by_diff_power(lhs_e - rhs_e, 4) and _divisible_by_diff_power(lhs_o - rhs_o, 4)


def _divisible_by_diff_power(q: Poly, k: int) -> bool:
    d = Poly.var("x1") - Poly.var("x2")
    for _ in range(k):
        if not q:
            return True
        nxt = q.exact_div_var(d, "x1")
        if nxt is None:
            return False
        q = nxt
    return True


# ---------------------------------------------------------------------------
# regular part and normal ordered product


def normal_ordered_TT(tpf: TwoPointFunction) -> GaloisElement:
    """``<N_0(T,T)(x_2)>``: the eps^0 coefficient of ``<T(x_2+eps) T(x_2)>``.

    The pole terms ``(c/2)<1>/eps^4 + 2<T>/eps^2 + <T>'/eps`` have no
    constant term, so this is the constant term of the full expansion.
    """
    curve = tpf.curve
    inv_pp = GaloisElement.inv_p(curve, 1) * GaloisElement.inv_p(curve, 2)
    full = tpf.raw_times_p(1, 2) * inv_pp
    return diagonal_series(full, 1, 2, order=0).coefficient(0)


def regular_part_and_N0(tpf: TwoPointFunction) -> tuple[CorrelatorReport, GaloisElement]:
    rep = CorrelatorReport("two-point regular part", tpf.curve.describe())
    curve = tpf.curve
    inv_pp = GaloisElement.inv_p(curve, 1) * GaloisElement.inv_p(curve, 2)
    sub = tpf.assembled * inv_pp - ope_reference(curve, tpf.opf)
    rest = diagonal_series(sub, 1, 2, order=-1)
    rep.add("principal part after subtracting the OPE poles", not rest.principal_part())
    reg = tpf.regular_part()
    rs = diagonal_series(reg, 1, 2, order=-1)
    rep.add("regular part has no diagonal poles", not rs.principal_part())
    return rep, normal_ordered_TT(tpf)
