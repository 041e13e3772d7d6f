"""Hyperelliptic curves y^2 = p(x), parity splittings of p and the Schwarzian."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .exact_algebra import Poly, Rational, format_rational, rational, univariate_gcd

T_VAR = "t"


class CurveError(ValueError):
    pass


class CurveParseError(CurveError):
    pass


@dataclass(frozen=True)
class CurveSpec:
    """Degree ``n`` polynomial ``p(x) = sum_k a_k x^(n-k)`` with genus ``g``.

    Coefficients are polynomials so that generic curves can carry symbolic
    ``a_k``; the leading coefficient must always be a non-zero rational.
    """

    n: int
    g: int
    coeffs: tuple[Poly, ...]

    @property
    def a0(self) -> Rational:
        return self.coeffs[0].constant_value()

    def a(self, k: int) -> Poly:
        return self.coeffs[k] if 0 <= k <= self.n else Poly()

    def poly(self, x: str = "x") -> Poly:
        xv = Poly.var(x)
        out = Poly()
        for k, ak in enumerate(self.coeffs):
            if ak:
                out = out + ak * xv ** (self.n - k)
        return out

    def derivative(self, x: str = "x", order: int = 1) -> Poly:
        return self.poly(x).diff(x, order)

    @property
    def is_numeric(self) -> bool:
        return all(a.is_constant() for a in self.coeffs)

    def describe(self) -> str:
        return f"y^2 = {self.poly('x')}  (n={self.n}, g={self.g})"

    def to_text(self) -> str:
        lines = [f"n = {self.n}"]
        for k, ak in enumerate(self.coeffs):
            lines.append(f"a{k} = {format_rational(ak.constant_value())}")
        return "\n".join(lines) + "\n"


def genus_of(n: int) -> int:
    return (n - 1) // 2


def validate_curve(n: int, coeffs: Sequence) -> CurveSpec:
    """Check degree, leading coefficient and squarefreeness of ``p``."""
    if n < 3:
        raise CurveError("genus below 1")
    if len(coeffs) != n + 1:
        raise CurveError(f"expected {n + 1} coefficients a0..a{n}, got {len(coeffs)}")
    polys = tuple(Poly.coerce(rational(c) if not isinstance(c, Poly) else c) for c in coeffs)
    if not polys[0] or not polys[0].is_constant():
        raise CurveError("leading coefficient a0 must be a non-zero rational")
    spec = CurveSpec(n, genus_of(n), polys)
    if spec.is_numeric:
        p = spec.poly("x")
        g = univariate_gcd(p, p.diff("x"), "x")
        if g.degree("x") > 0:
            raise CurveError("degenerate curve")
    return spec


def generic_curve(n: int, a0=1, names: str = "a") -> CurveSpec:
    """Curve with rational ``a0`` and symbolic ``a1..an`` (squarefree generically)."""
    if n < 3:
        raise CurveError("genus below 1")
    coeffs = [Poly.const(a0)] + [Poly.var(f"{names}{k}") for k in range(1, n + 1)]
    return CurveSpec(n, genus_of(n), tuple(coeffs))


def sample_curve(n: int, seed: int, bound: int = 5) -> CurveSpec:
    """Pseudo-random squarefree curve with small rational coefficients."""
    rng = random.Random(seed)
    while True:
        coeffs = [rng.randint(1, 3)]
        for _ in range(n):
            num = rng.randint(-bound, bound)
            den = rng.choice([1, 1, 2, 3])
            coeffs.append(rational(f"{num}/{den}"))
        try:
            return validate_curve(n, coeffs)
        except CurveError:
            continue


_LINE = re.compile(r"^\s*([A-Za-z]\w*)\s*=\s*([-+]?\d+(?:\s*/\s*\d+)?)\s*$")


def parse_curve_text(text: str) -> CurveSpec:
    """Parse ``n = <int>`` and ``a<k> = <num>/<den>`` lines (``#`` comments allowed)."""
    n = None
    values: dict[int, Rational] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise CurveParseError(f"line {lineno}: cannot parse {raw!r}")
        key, val = m.group(1), m.group(2).replace(" ", "")
        if key == "n":
            if "/" in val:
                raise CurveParseError(f"line {lineno}: n must be an integer")
            n = int(val)
        elif re.fullmatch(r"a\d+", key):
            k = int(key[1:])
            if k in values:
                raise CurveParseError(f"line {lineno}: duplicate {key}")
            try:
                values[k] = rational(val)
            except ZeroDivisionError:
                raise CurveParseError(f"line {lineno}: zero denominator") from None
        else:
            raise CurveParseError(f"line {lineno}: unknown field {key!r}")
    if n is None:
        raise CurveParseError("missing n")
    if 0 not in values:
        raise CurveParseError("missing a0")
    if any(k > n for k in values):
        raise CurveParseError("coefficient index exceeds n")
    coeffs = [values.get(k, rational(0)) for k in range(n + 1)]
    return validate_curve(n, coeffs)


def read_curve(path: str | Path) -> CurveSpec:
    return parse_curve_text(Path(path).read_text())


# ---------------------------------------------------------------------------
# even / odd splitting


@dataclass(frozen=True)
class EvenOddSplit:
    """``p(x) = even_part(x^2) + x * odd_part(x^2)``; both stored in ``t = x^2``."""

    even_part: Poly
    odd_part: Poly
    var: str = "x"

    def reconstruct(self) -> Poly:
        x = Poly.var(self.var)
        t = x * x
        return self.even_part.subs({T_VAR: t}) + x * self.odd_part.subs({T_VAR: t})


def split_even_odd(p: Poly, x: str = "x") -> EvenOddSplit:
    even = Poly()
    odd = Poly()
    t = Poly.var(T_VAR)
    for k, ck in p.coefficients(x).items():
        if k % 2 == 0:
            even = even + ck * t ** (k // 2)
        else:
            odd = odd + ck * t ** (k // 2)
    return EvenOddSplit(even, odd, x)


def sqrt_diag_substitute(q_even: Poly, x1: str = "x1", x2: str = "x2") -> Poly:
    """``q(sqrt(x1 x2))`` for an even ``q`` stored in ``t``: substitute ``t -> x1 x2``."""
    return q_even.subs({T_VAR: Poly.var(x1) * Poly.var(x2)})


def even_derivative_over_s(q: Poly) -> Poly:
    """For even ``Q(s) = q(s^2)``, return ``Q'(s)/s`` as a polynomial in ``t``."""
    return 2 * q.diff(T_VAR)


def even_second_derivative(q: Poly) -> Poly:
    """For even ``Q(s) = q(s^2)``, return ``Q''(s)`` as a polynomial in ``t``."""
    t = Poly.var(T_VAR)
    return 2 * q.diff(T_VAR) + 4 * t * q.diff(T_VAR, 2)


# ---------------------------------------------------------------------------
# univariate rational functions


class RationalFunction:
    """``num/den`` in a single variable, reduced by the univariate gcd when the
    coefficients are rational."""

    __slots__ = ("num", "den", "var")

    def __init__(self, num, den=None, var: str = "x"):
        num = Poly.coerce(num)
        den = Poly.const(1) if den is None else Poly.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.var = var
        if not num:
            self.num, self.den = Poly(), Poly.const(1)
            return
        if _rational_coeffs(num, var) and _rational_coeffs(den, var):
            g = univariate_gcd(num, den, var)
            if g.degree(var) > 0:
                num = num.divmod_var(g, var)[0]
                den = den.divmod_var(g, var)[0]
            lead = den.coefficients(var)[den.degree(var)].constant_value()
            num, den = num / lead, den / lead
        self.num, self.den = num, den

    @classmethod
    def of(cls, value, var: str = "x") -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls(value, None, var)

    def __add__(self, other):
        o = RationalFunction.of(other, self.var)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den, self.var)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.var)

    def __sub__(self, other):
        return self + (-RationalFunction.of(other, self.var))

    def __rsub__(self, other):
        return RationalFunction.of(other, self.var) - self

    def __mul__(self, other):
        o = RationalFunction.of(other, self.var)
        return RationalFunction(self.num * o.num, self.den * o.den, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalFunction.of(other, self.var)
        if not o.num:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * o.den, self.den * o.num, self.var)

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den ** -k, self.num ** -k, self.var)
        return RationalFunction(self.num ** k, self.den ** k, self.var)

    def __eq__(self, other):
        o = RationalFunction.of(other, self.var)
        return not (self.num * o.den - o.num * self.den)

    def is_zero(self) -> bool:
        return not self.num

    def diff(self) -> "RationalFunction":
        v = self.var
        return RationalFunction(
            self.num.diff(v) * self.den - self.num * self.den.diff(v), self.den * self.den, v
        )

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        """``self(inner(x))``."""
        inner = RationalFunction.of(inner, self.var)
        dn = max(self.num.degree(self.var), self.den.degree(self.var), 0)

        def homog(p: Poly) -> Poly:
            out = Poly()
            for k, ck in p.coefficients(self.var).items():
                out = out + ck * inner.num ** k * inner.den ** (dn - k)
            return out

        return RationalFunction(homog(self.num), homog(self.den), self.var)

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _rational_coeffs(p: Poly, var: str) -> bool:
    return set(p.variables()) <= {var}


def schwarzian(f) -> RationalFunction:
    """``f'''/f' - (3/2) (f''/f')^2``."""
    f = RationalFunction.of(f)
    d1 = f.diff()
    if d1.is_zero():
        raise CurveError("derivative vanishes")
    d2 = d1.diff()
    d3 = d2.diff()
    ratio = d2 / d1
    return d3 / d1 - RationalFunction(Poly.const(rational("3/2")), None, f.var) * ratio * ratio


def schwarzian_of_y(curve: CurveSpec | Poly, x: str = "x") -> RationalFunction:
    """``S(p) + (3/8) (p'/p)^2``, the Schwarzian of ``y = sqrt(p)``."""
    p = curve.poly(x) if isinstance(curve, CurveSpec) else curve
    p_rf = RationalFunction(p, None, x)
    log_der = p_rf.diff() / p_rf
    sp = schwarzian(p_rf) if p.degree(x) > 1 else RationalFunction(Poly(), None, x)
    return sp + RationalFunction(Poly.const(rational("3/8")), None, x) * log_der * log_der
