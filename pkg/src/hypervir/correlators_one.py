"""The Virasoro one-point function on y^2 = p(x)."""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .curve import CurveSpec, EvenOddSplit, sample_curve, split_even_odd
from .exact_algebra import LinearSystem, Poly, solve_linear
from .field_element import GaloisElement, RationalExpr, odd_cutoff, project_above, xname
from .reports import CorrelatorReport

C = "c"
VAC = "vac"


def c_sym() -> Poly:
    return Poly.var(C)


def vac_sym() -> Poly:
    return Poly.var(VAC)


def odd_degree_bound(n: int) -> int:
    """Maximal degree of the y-weighted polynomial (negative means absent)."""
    return (n - 7) // 2 if n % 2 else n // 2 - 4


def leading_constraints(curve: CurveSpec) -> dict[str, Poly]:
    """Values of the top coefficients of ``P_even`` forced by the behaviour at infinity."""
    n = curve.n
    c, vac = c_sym(), vac_sym()
    a0 = curve.a0
    if n % 2:
        return {"A0": c * vac * (mpq(-1, 8) * (n * n - 1) * a0)}
    return {
        "A0": c * vac * (mpq(-1, 8) * n * n * a0),
        "A1": c * vac * curve.a(1) * mpq(-n * (n - 2), 8),
    }


@dataclass(frozen=True)
class PiSplit:
    """``Pi(x) = pi_even(x^2) + x pi_odd(x^2)`` with ``P_even = -(c/8) Pi``.

    Stored scaled by ``-(c/8)``: the fields hold the split of ``P_even``
    itself, which avoids dividing by a symbolic central charge.
    """

    pi_even: Poly
    pi_odd: Poly

    def reconstruct(self, x: str = "x") -> Poly:
        return EvenOddSplit(self.pi_even, self.pi_odd, x).reconstruct()


@dataclass
class OnePointFunction:
    curve: CurveSpec
    p_even: Poly  # in "x"
    p_odd: Poly  # in "x"; zero when absent
    fixed: dict[str, Poly] = field(default_factory=dict)
    free: tuple[str, ...] = ()
    odd_degree: int = -1

    def polynomial(self, i: int) -> GaloisElement:
        """``P(x_i, y_i) = P_even + y_i P_odd``."""
        sub = {"x": Poly.var(xname(i))}
        e = GaloisElement.from_poly(self.curve, self.p_even.subs(sub))
        if self.p_odd:
            e = e + GaloisElement.from_poly(self.curve, self.p_odd.subs(sub), (i,))
        return e

    def p_even_at(self, i: int) -> Poly:
        return self.p_even.subs({"x": Poly.var(xname(i))})

    def p_odd_at(self, i: int) -> Poly:
        return self.p_odd.subs({"x": Poly.var(xname(i))})

    def schwarz_term(self, i: int) -> GaloisElement:
        """``(c/32) p'(x_i)^2 / p(x_i) <1>``."""
        dp = self.curve.derivative(xname(i))
        return GaloisElement(
            self.curve, {(): RationalExpr(dp * dp * c_sym() * vac_sym() * mpq(1, 32), {("p", i): 1})}
        )

    def p_times(self, i: int = 1) -> GaloisElement:
        """``p(x_i) <T(x_i)>``."""
        return self.schwarz_term(i) + self.polynomial(i) / 4

    def element(self, i: int = 1) -> GaloisElement:
        return self.p_times(i) * GaloisElement.inv_p(self.curve, i)

    def substitute(self, values) -> "OnePointFunction":
        # the Schwarz and OPE reference terms are built from the symbol c
        if C in values:
            raise ValueError("c must stay symbolic here; substitute it in the final expression")
        return OnePointFunction(
            self.curve,
            self.p_even.subs(values),
            self.p_odd.subs(values),
            {k: v.subs(values) for k, v in self.fixed.items()},
            tuple(f for f in self.free if f not in values),
            self.odd_degree,
        )

    def pi_split(self) -> PiSplit:
        s = split_even_odd(self.p_even, "x")
        return PiSplit(s.even_part, s.odd_part)

    def parameters(self) -> list[str]:
        return [VAC, C] + list(self.free)

    def render(self) -> str:
        lines = [f"P_even(x) = {self.p_even}", f"P_odd(x) = {self.p_odd if self.p_odd else 'absent'}"]
        for k, v in sorted(self.fixed.items()):
            lines.append(f"{k} := {v}")
        lines.append("<T(x)> =\n" + self.element(1).canonical().render())
        return "\n".join(lines)


def _even_names(curve: CurveSpec) -> list[str]:
    return [f"A{k}" for k in range(curve.n - 1)]


def _odd_names(bound: int) -> list[str]:
    return [f"Ao{k}" for k in range(bound + 1)]


def build_one_point(curve: CurveSpec, impose: bool = True) -> OnePointFunction:
    """Symbolic ansatz with the leading coefficients fixed (unless ``impose`` is false)."""
    n = curve.n
    x = Poly.var("x")
    fixed = leading_constraints(curve) if impose else {}
    p_even = Poly()
    free = []
    for k, name in enumerate(_even_names(curve)):
        coeff = fixed.get(name)
        if coeff is None:
            coeff = Poly.var(name)
            free.append(name)
        p_even = p_even + coeff * x ** (n - 2 - k)
    bound = odd_degree_bound(n)
    p_odd = Poly()
    for k, name in enumerate(_odd_names(bound)):
        p_odd = p_odd + Poly.var(name) * x ** k
        free.append(name)
    return OnePointFunction(curve, p_even, p_odd, fixed, tuple(free), bound)


def asymptotic_residual(curve: CurveSpec, element: GaloisElement) -> GaloisElement:
    """What must vanish at infinity for a one-point function at point 1.

    Odd ``n``: ``[<T>]_{>-3} - (c/32) x^-2 <1>``; even ``n``: ``[<T>]_{>-4}``.
    """
    n = curve.n
    k = -3 if n % 2 else -4
    proj = project_above(element, 1, k, odd_cutoff(n, k))
    if n % 2:
        target = GaloisElement(curve, {(): RationalExpr(c_sym() * vac_sym() * mpq(1, 32), {("x", 1): 2})})
        proj = proj - target
    return proj.canonical()


def asymptotics_check(opf: OnePointFunction) -> CorrelatorReport:
    rep = CorrelatorReport("one-point asymptotics", opf.curve.describe())
    res = asymptotic_residual(opf.curve, opf.element(1))
    expected = "(c/32) x^-2 <1> + O(x^-3)" if opf.curve.n % 2 else "O(x^-4)"
    rep.add(f"<T(x)> = {expected}", res.is_zero(), "" if res.is_zero() else "offending: " + res.render())
    ident = opf.p_times(1) - opf.schwarz_term(1) - opf.polynomial(1) / 4
    rep.add("p<T> - (c/32)p'^2/p<1> - P/4 = 0", ident.is_zero())
    return rep


@dataclass(frozen=True)
class DimensionCount:
    dim_even: int
    dim_odd: int | None
    total: int | None


def dimension_count(curve: CurveSpec, seed: int = 0) -> DimensionCount:
    """Free parameters of the one-point ansatz, from the asymptotic linear system.

    The ansatz is deliberately over-sized (degree ``n`` in both parts) so that
    the degree bounds come out of the solve.  Counts are taken on a
    numerical curve of the same degree.
    """
    n = curve.n
    if not curve.is_numeric:
        curve = sample_curve(n, seed)
    x = Poly.var(xname(1))
    even_u = [f"Ue{k}" for k in range(n + 1)]
    odd_u = [f"Uo{k}" for k in range(n + 1)]
    p_even = sum((Poly.var(u) * x ** k for k, u in enumerate(even_u)), Poly())
    p_odd = sum((Poly.var(u) * x ** k for k, u in enumerate(odd_u)), Poly())
    dp = curve.derivative(xname(1))
    schwarz = GaloisElement(
        curve, {(): RationalExpr(dp * dp * c_sym() * vac_sym() * mpq(1, 32), {("p", 1): 2})}
    )
    quarter = GaloisElement(curve, {(): RationalExpr(Poly.const(mpq(1, 4)), {("p", 1): 1})})
    elem = schwarz + quarter * (GaloisElement.from_poly(curve, p_even) + GaloisElement.from_poly(curve, p_odd, (1,)))
    res = asymptotic_residual(curve, elem)
    eqs = []
    for r in res.components.values():
        eqs.extend(r.num.split_by([xname(1)]).values())
    sol = solve_linear(LinearSystem.from_equations(eqs, even_u + odd_u))
    if sol.kind == "inconsistent":
        raise ArithmeticError("one-point asymptotic system is inconsistent")
    dim_even = sum(1 for v in sol.null_space if any(v[u] for u in even_u))
    dim_odd = sum(1 for v in sol.null_space if any(v[u] for u in odd_u))
    g = curve.g
    if g < 2:
        return DimensionCount(dim_even, None, None)
    return DimensionCount(dim_even, dim_odd, dim_even + dim_odd)
