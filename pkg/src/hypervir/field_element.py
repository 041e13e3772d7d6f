"""Elements of the function field of X^N with X: y^2 = p(x).

An element is stored as ``sum_S (prod_{i in S} y_i) * R_S`` where each
``R_S`` is a :class:`RationalExpr` in ``x1..xN`` whose denominator is a
product of the factors ``(x_i - x_j)`` (i < j), ``p(x_i)`` and ``x_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from gmpy2 import mpq

from .curve import CurveSpec
from .exact_algebra import Poly, Rational, rational

DEFAULT_DIAGONAL_ORDER = 6
DEFAULT_MAX_TERMS = 64


class TruncationError(RuntimeError):
    pass


def xname(i: int) -> str:
    return f"x{i}"


def eps_name() -> str:
    return "eps"


# factor keys: ("d", i, j) with i < j, ("p", i), ("x", i)


def diff_factor(i: int, j: int) -> tuple[tuple, int]:
    """Factor key for ``x_i - x_j`` and the sign relating it to the stored form."""
    if i == j:
        raise ValueError("diagonal factor x_i - x_i")
    return (("d", i, j), 1) if i < j else (("d", j, i), -1)


def factor_involves(f: tuple, i: int) -> bool:
    return i in f[1:]


@lru_cache(maxsize=None)
def p_at(curve: CurveSpec, i: int) -> Poly:
    return curve.poly(xname(i))


@lru_cache(maxsize=None)
def p_derivatives_at(curve: CurveSpec, i: int) -> tuple[Poly, ...]:
    p = p_at(curve, i)
    out = [p]
    for _ in range(curve.n):
        out.append(out[-1].diff(xname(i)))
    return tuple(out)


def factor_poly(curve: CurveSpec, f: tuple) -> Poly:
    kind = f[0]
    if kind == "d":
        return Poly.var(xname(f[1])) - Poly.var(xname(f[2]))
    if kind == "p":
        return p_at(curve, f[1])
    if kind == "x":
        return Poly.var(xname(f[1]))
    raise ValueError(f"unknown factor {f!r}")


def factor_derivative(curve: CurveSpec, f: tuple, i: int) -> Poly:
    kind = f[0]
    if kind == "d":
        if f[1] == i:
            return Poly.const(1)
        if f[2] == i:
            return Poly.const(-1)
        return Poly()
    if kind == "p":
        return p_derivatives_at(curve, i)[1] if f[1] == i else Poly()
    if kind == "x":
        return Poly.const(1) if f[1] == i else Poly()
    raise ValueError(f"unknown factor {f!r}")


def _factor_sort_key(f):
    return (f[0], f[1:])


def render_factor(f: tuple) -> str:
    if f[0] == "d":
        return f"(x{f[1]} - x{f[2]})"
    if f[0] == "p":
        return f"p(x{f[1]})"
    return f"x{f[1]}"


# ---------------------------------------------------------------------------


class RationalExpr:
    """``num / prod factor^exp`` with a factored denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Mapping[tuple, int] | None = None):
        self.num = num
        self.den = {f: e for f, e in (den or {}).items() if e}
        if not num:
            self.den = {}

    @classmethod
    def poly(cls, p) -> "RationalExpr":
        return cls(Poly.coerce(p))

    def is_zero(self) -> bool:
        return not self.num

    def __neg__(self):
        return RationalExpr(-self.num, self.den)

    def scale(self, s) -> "RationalExpr":
        return RationalExpr(self.num * s, self.den)

    def mul(self, other: "RationalExpr") -> "RationalExpr":
        if not self.num or not other.num:
            return RationalExpr(Poly())
        den = dict(self.den)
        for f, e in other.den.items():
            den[f] = den.get(f, 0) + e
        return RationalExpr(self.num * other.num, den)

    def add(self, other: "RationalExpr", curve: CurveSpec) -> "RationalExpr":
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RationalExpr(self.num + other.num, self.den)
        den = dict(self.den)
        for f, e in other.den.items():
            if e > den.get(f, 0):
                den[f] = e
        return RationalExpr(self.lift(den, curve) + other.lift(den, curve), den)

    def lift(self, den: Mapping[tuple, int], curve: CurveSpec) -> Poly:
        """Numerator over the larger denominator ``den``."""
        num = self.num
        for f, e in den.items():
            k = e - self.den.get(f, 0)
            if k < 0:
                raise ValueError("target denominator does not contain this one")
            if k:
                num = num * factor_poly(curve, f) ** k
        return num

    def cancel(self, curve: CurveSpec) -> "RationalExpr":
        """Divide out every stored factor that divides the numerator exactly."""
        num = self.num
        den = dict(self.den)
        for f in sorted(den, key=_factor_sort_key):
            while den.get(f, 0) > 0:
                if f[0] == "x":
                    if num.min_degree(xname(f[1])) < 1:
                        break
                    num = _shift_down(num, xname(f[1]))
                else:
                    var = xname(f[1])
                    q = num.exact_div_var(factor_poly(curve, f), var)
                    if q is None:
                        break
                    num = q
                den[f] -= 1
        return RationalExpr(num, den)

    def evaluate(self, curve: CurveSpec, point: Mapping[int, Rational]) -> Poly:
        vals = {xname(i): v for i, v in point.items()}
        num = self.num.evaluate(vals)
        d = mpq(1)
        for f, e in self.den.items():
            fv = factor_poly(curve, f).evaluate(vals)
            if not fv.is_constant():
                raise ValueError("evaluation point does not fix every variable")
            val = fv.constant_value()
            if not val:
                raise ZeroDivisionError(f"factor {render_factor(f)} vanishes at the point")
            d *= val ** e
        return num / d

    def render(self) -> str:
        if not self.den:
            return str(self.num)
        den = " ".join(
            render_factor(f) + (f"^{e}" if e != 1 else "")
            for f, e in sorted(self.den.items(), key=lambda it: _factor_sort_key(it[0]))
        )
        return f"({self.num}) / [{den}]"


def _shift_down(p: Poly, name: str) -> Poly:
    x = Poly.var(name)
    out = Poly()
    for k, ck in p.coefficients(name).items():
        out = out + ck * x ** (k - 1)
    return out


def _subset_key(s: tuple) -> tuple:
    return (len(s), s)


class GaloisElement:
    """``sum_S y_S R_S`` with all ``y_i`` exponents reduced to 0 or 1."""

    __slots__ = ("curve", "components")

    def __init__(self, curve: CurveSpec, components: Mapping[tuple, RationalExpr] | None = None):
        self.curve = curve
        self.components = {
            tuple(sorted(s)): r for s, r in (components or {}).items() if not r.is_zero()
        }

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, curve) -> "GaloisElement":
        return cls(curve)

    @classmethod
    def from_poly(cls, curve, p, subset: Iterable[int] = ()) -> "GaloisElement":
        return cls(curve, {tuple(sorted(subset)): RationalExpr.poly(p)})

    @classmethod
    def one(cls, curve) -> "GaloisElement":
        return cls.from_poly(curve, 1)

    @classmethod
    def y(cls, curve, i: int) -> "GaloisElement":
        return cls.from_poly(curve, 1, (i,))

    @classmethod
    def x(cls, curve, i: int) -> "GaloisElement":
        return cls.from_poly(curve, Poly.var(xname(i)))

    @classmethod
    def p(cls, curve, i: int) -> "GaloisElement":
        return cls.from_poly(curve, p_at(curve, i))

    @classmethod
    def inv_diff(cls, curve, i: int, j: int, e: int = 1) -> "GaloisElement":
        """``(x_i - x_j)^(-e)``."""
        f, sign = diff_factor(i, j)
        return cls(curve, {(): RationalExpr(Poly.const(sign ** e), {f: e})})

    @classmethod
    def inv_p(cls, curve, i: int, e: int = 1) -> "GaloisElement":
        return cls(curve, {(): RationalExpr(Poly.const(1), {("p", i): e})})

    @classmethod
    def inv_x(cls, curve, i: int, e: int = 1) -> "GaloisElement":
        return cls(curve, {(): RationalExpr(Poly.const(1), {("x", i): e})})

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "GaloisElement":
        if isinstance(other, GaloisElement):
            return other
        return GaloisElement.from_poly(self.curve, Poly.coerce(other))

    def __add__(self, other) -> "GaloisElement":
        other = self._coerce(other)
        comps = dict(self.components)
        for s, r in other.components.items():
            if s in comps:
                comps[s] = comps[s].add(r, self.curve)
            else:
                comps[s] = r
        return GaloisElement(self.curve, comps)

    __radd__ = __add__

    def __neg__(self) -> "GaloisElement":
        return GaloisElement(self.curve, {s: -r for s, r in self.components.items()})

    def __sub__(self, other) -> "GaloisElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "GaloisElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "GaloisElement":
        if not isinstance(other, GaloisElement):
            s = Poly.coerce(other) if not isinstance(other, Poly) else other
            if s.is_constant():
                q = s.constant_value() if s else mpq(0)
                return GaloisElement(self.curve, {k: r.scale(q) for k, r in self.components.items()})
            return GaloisElement(
                self.curve, {k: RationalExpr(r.num * s, r.den) for k, r in self.components.items()}
            )
        out: dict[tuple, RationalExpr] = {}
        for s1, r1 in self.components.items():
            for s2, r2 in other.components.items():
                common = set(s1) & set(s2)
                subset = tuple(sorted(set(s1) ^ set(s2)))
                prod = r1.mul(r2)
                for i in common:
                    prod = _times_p(prod, self.curve, i)
                if subset in out:
                    out[subset] = out[subset].add(prod, self.curve)
                else:
                    out[subset] = prod
        return GaloisElement(self.curve, out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaloisElement":
        q = rational(other)
        if not q:
            raise ZeroDivisionError("division of a field element by zero")
        return self * (1 / q)

    def __pow__(self, k: int) -> "GaloisElement":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = GaloisElement.one(self.curve)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_coefficients(self, fn) -> "GaloisElement":
        """Apply ``fn`` to every numerator polynomial (e.g. a parameter substitution)."""
        return GaloisElement(
            self.curve, {s: RationalExpr(fn(r.num), r.den) for s, r in self.components.items()}
        )

    def subs(self, mapping: Mapping[str, object]) -> "GaloisElement":
        return self.map_coefficients(lambda p: p.subs(mapping))

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaloisElement):
            other = self._coerce(other)
        return (self - other).is_zero()

    def __hash__(self):
        return id(self)

    def points(self) -> set[int]:
        pts: set[int] = set()
        for s, r in self.components.items():
            pts.update(s)
            for f in r.den:
                pts.update(f[1:])
            for name in r.num.variables():
                if name.startswith("x") and name[1:].isdigit():
                    pts.add(int(name[1:]))
        return pts

    def canonical(self) -> "GaloisElement":
        return GaloisElement(self.curve, {s: r.cancel(self.curve) for s, r in self.components.items()})

    def parameters(self) -> set[str]:
        out: set[str] = set()
        for r in self.components.values():
            for name in r.num.variables():
                if not (name.startswith("x") and name[1:].isdigit()):
                    out.add(name)
        return out

    def max_den_exponent(self, kind: str) -> int:
        return max((e for r in self.components.values() for f, e in r.den.items() if f[0] == kind), default=0)

    # calculus -----------------------------------------------------------
    def diff(self, i: int) -> "GaloisElement":
        """Derivative in ``x_i`` along the curve (``dy_i/dx_i = p'(x_i) / (2 y_i)``)."""
        curve = self.curve
        var = xname(i)
        out = GaloisElement(curve)
        for s, r in self.components.items():
            inv = [f for f in r.den if factor_involves(f, i)]
            den = dict(r.den)
            for f in inv:
                den[f] += 1
            polys = {f: factor_poly(curve, f) for f in inv}
            prod_all = Poly.const(1)
            for f in inv:
                prod_all = prod_all * polys[f]
            num = r.num.diff(var) * prod_all
            for f in inv:
                rest = Poly.const(1)
                for g in inv:
                    if g != f:
                        rest = rest * polys[g]
                num = num - r.num * factor_derivative(curve, f, i) * rest * r.den[f]
            term = RationalExpr(num, den)
            if i in s:
                dp = p_derivatives_at(curve, i)[1]
                extra = RationalExpr(r.num * dp * mpq(1, 2), {**r.den, ("p", i): r.den.get(("p", i), 0) + 1})
                term = term.add(extra, curve)
            out = out + GaloisElement(curve, {s: term})
        return out

    # numeric ------------------------------------------------------------
    def evaluate(self, point: Mapping[int, object]) -> dict[tuple, Poly]:
        """Value at fixed rational ``x_i`` as coefficients of ``y_S`` (with y_i^2 = p(x_i))."""
        point = {i: rational(v) for i, v in point.items()}
        out: dict[tuple, Poly] = {}
        for s, r in self.components.items():
            v = r.evaluate(self.curve, point)
            if v:
                out[s] = out.get(s, Poly()) + v
        return {s: v for s, v in out.items() if v}

    # rendering ----------------------------------------------------------
    def render(self) -> str:
        if not self.components:
            return "0"
        lines = []
        for s in sorted(self.components, key=_subset_key):
            prefix = "*".join(f"y{i}" for i in s) if s else "1"
            lines.append(f"[{prefix}] {self.components[s].render()}")
        return "\n".join(lines)

    __str__ = render

    def __repr__(self):
        return f"GaloisElement({len(self.components)} components)"


def _times_p(r: RationalExpr, curve: CurveSpec, i: int) -> RationalExpr:
    f = ("p", i)
    e = r.den.get(f, 0)
    if e:
        den = dict(r.den)
        den[f] = e - 1
        return RationalExpr(r.num, den)
    return RationalExpr(r.num * p_at(curve, i), r.den)


# ---------------------------------------------------------------------------
# reduction and splitting


def y_name(i: int) -> str:
    return f"y{i}"


def reduce(raw: Poly, curve: CurveSpec, n_points: int) -> GaloisElement:
    """Rewrite a polynomial in ``x_i, y_i`` using ``y_i^2 = p(x_i)``."""
    ynames = [y_name(i) for i in range(1, n_points + 1)]
    out = GaloisElement(curve)
    for exps, coeff in raw.split_by(ynames).items():
        subset = tuple(i + 1 for i, e in enumerate(exps) if e % 2)
        poly = coeff
        for i, e in enumerate(exps):
            if e >= 2:
                poly = poly * p_at(curve, i + 1) ** (e // 2)
        out = out + GaloisElement.from_poly(curve, poly, subset)
    return out


def galois_split(e: GaloisElement, i: int) -> tuple[GaloisElement, GaloisElement]:
    """``e = even + y_i * odd`` with neither part containing ``y_i``."""
    even, odd = {}, {}
    for s, r in e.components.items():
        if i in s:
            odd[tuple(k for k in s if k != i)] = r
        else:
            even[s] = r
    return GaloisElement(e.curve, even), GaloisElement(e.curve, odd)


# ---------------------------------------------------------------------------
# Laurent projection at x_i -> infinity


def _inverse_series(h: list[Poly], order: int) -> list[Poly]:
    """Coefficients of ``1/(1 + sum_{k>=1} h[k] w^k)`` up to ``w^order``."""
    inv = [Poly.const(1)]
    for m in range(1, order + 1):
        acc = Poly()
        for k in range(1, min(m, len(h) - 1) + 1):
            if h[k]:
                acc = acc - h[k] * inv[m - k]
        inv.append(acc)
    return inv


def _series_mul(a: list[Poly], b: list[Poly], order: int) -> list[Poly]:
    out = [Poly() for _ in range(order + 1)]
    for i, ai in enumerate(a[: order + 1]):
        if not ai:
            continue
        for j, bj in enumerate(b[: order + 1 - i]):
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def _series_pow(a: list[Poly], e: int, order: int) -> list[Poly]:
    result = [Poly.const(1)] + [Poly() for _ in range(order)]
    for _ in range(e):
        result = _series_mul(result, a, order)
    return result


@lru_cache(maxsize=None)
def _inv_p_series_at_infinity(curve: CurveSpec, e: int, order: int) -> tuple[Poly, ...]:
    """``(p(x)/(a0 x^n))^(-e)`` as a series in ``w = 1/x``."""
    a0 = curve.a0
    h = [Poly()] + [curve.a(k) / a0 for k in range(1, curve.n + 1)]
    inv = _inverse_series(h, order)
    return tuple(_series_pow(inv, e, order))


def project_above(
    e: GaloisElement,
    i: int,
    k: int,
    k_odd: int | None = None,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> GaloisElement:
    """Part of ``e`` of degree strictly above ``k`` in ``x_i`` at infinity.

    Components carrying ``y_i`` use the cutoff ``k_odd`` on their stored
    (integer) ``x_i`` exponents when given.
    """
    curve = e.curve
    out: dict[tuple, RationalExpr] = {}
    for s, r in e.components.items():
        cutoff = k_odd if (k_odd is not None and i in s) else k
        proj = _project_rational(curve, r, i, cutoff, max_terms)
        if proj is not None and not proj.is_zero():
            out[s] = proj
    return GaloisElement(curve, out)


def _project_rational(curve, r: RationalExpr, i: int, cutoff: int, max_terms: int):
    var = xname(i)
    num_coeffs = r.num.coefficients(var)
    involved = {f: ex for f, ex in r.den.items() if factor_involves(f, i)}
    others = {f: ex for f, ex in r.den.items() if not factor_involves(f, i)}
    total_deg = 0
    for f, ex in involved.items():
        total_deg += ex * (curve.n if f[0] == "p" else 1)
    top = max(num_coeffs) - total_deg
    depth = top - cutoff - 1
    if depth < 0:
        return None
    if depth > max_terms:
        raise TruncationError(
            f"projection needs {depth + 1} expansion terms, above the limit {max_terms}"
        )
    series = [Poly.const(1)] + [Poly() for _ in range(depth)]
    for f, ex in involved.items():
        if f[0] == "d":
            j = f[2] if f[1] == i else f[1]
            sign = 1 if f[1] == i else (-1) ** ex
            xj = Poly.var(xname(j))
            fs = [Poly.const(sign * math.comb(ex + m - 1, m)) * xj ** m for m in range(depth + 1)]
        elif f[0] == "p":
            a0inv = 1 / curve.a0 ** ex
            fs = [c * a0inv for c in _inv_p_series_at_infinity(curve, ex, depth)]
        else:
            fs = [Poly.const(1)] + [Poly() for _ in range(depth)]
        series = _series_mul(series, fs, depth)
    terms: dict[int, Poly] = {}
    for a, ca in num_coeffs.items():
        for m, sm in enumerate(series):
            deg = a - total_deg - m
            if deg <= cutoff:
                break
            if sm:
                terms[deg] = terms.get(deg, Poly()) + ca * sm
    terms = {d: c for d, c in terms.items() if c}
    if not terms:
        return None
    shift = max(0, -min(terms))
    xv = Poly.var(var)
    num = Poly()
    for d, c in terms.items():
        num = num + c * xv ** (d + shift)
    den = dict(others)
    if shift:
        den[("x", i)] = den.get(("x", i), 0) + shift
    return RationalExpr(num, den)


def odd_cutoff(n: int, k_even: int) -> int:
    """Integer cutoff on the ``x``-part of ``y``-weighted components.

    ``y ~ x^(n/2)`` so ``y * x^m`` exceeds ``x^k`` iff ``m > k - n/2``.
    """
    return math.floor(mpq(k_even) - mpq(n, 2))


def weighted_projection(e: GaloisElement, i: int, k: int | None = None) -> GaloisElement:
    """``pi_{k,i}(E^even) + y_i pi_{k - n/2, i}(E^odd)``; default ``k = n - 3``."""
    n = e.curve.n
    if k is None:
        k = n - 3
    return project_above(e, i, k, odd_cutoff(n, k))


# ---------------------------------------------------------------------------
# diagonal series


@dataclass
class DiagonalSeries:
    """``sum_r eps^r * coeffs[r]`` around ``x_i = x_j + eps`` on the sheet ``y_i -> y_j``."""

    i: int
    j: int
    order: int
    coeffs: dict[int, GaloisElement]
    curve: CurveSpec | None = None

    def coefficient(self, r: int) -> GaloisElement:
        if r > self.order:
            raise TruncationError(f"coefficient eps^{r} beyond truncation order {self.order}")
        if r in self.coeffs:
            return self.coeffs[r]
        return _zero_like(self)

    def principal_part(self) -> dict[int, GaloisElement]:
        return {r: c for r, c in self.coeffs.items() if r < 0 and not c.is_zero()}

    def lowest_order(self) -> int | None:
        nz = [r for r, c in self.coeffs.items() if not c.is_zero()]
        return min(nz) if nz else None


def _zero_like(series: DiagonalSeries) -> GaloisElement:
    if series.curve is not None:
        return GaloisElement(series.curve)
    for c in series.coeffs.values():
        return GaloisElement(c.curve)
    raise ValueError("empty series has no curve attached")


@lru_cache(maxsize=None)
def _taylor_shift_table(curve: CurveSpec, j: int, order: int) -> tuple[Poly, ...]:
    """``H_k = p^(k)(x_j)/k!`` for ``k = 0..order``."""
    ders = p_derivatives_at(curve, j)
    out = []
    for k in range(order + 1):
        out.append(ders[k] / math.factorial(k) if k < len(ders) else Poly())
    return tuple(out)


@lru_cache(maxsize=None)
def _h_powers(curve: CurveSpec, j: int, order: int) -> tuple[tuple[Poly, ...], ...]:
    """``[H^m]_r`` for ``H = sum_{k>=1} H_k eps^k``, ``m, r <= order``."""
    h = list(_taylor_shift_table(curve, j, order))
    base = [Poly()] + h[1:]
    powers = [[Poly.const(1)] + [Poly() for _ in range(order)]]
    for _ in range(order):
        powers.append(_series_mul(powers[-1], base, order))
    return tuple(tuple(p) for p in powers)


def _binom_general(a: Rational, m: int) -> Rational:
    out = mpq(1)
    for k in range(m):
        out = out * (a - k) / (k + 1)
    return out


@lru_cache(maxsize=None)
def _p_ratio_series(curve: CurveSpec, j: int, power: Rational, order: int) -> tuple[Poly, ...]:
    """Numerators of ``(p(x_j+eps)/p(x_j))^power``; coefficient ``r`` is over ``p(x_j)^r``."""
    hp = _h_powers(curve, j, order)
    pj = p_at(curve, j)
    pj_pows = [Poly.const(1)]
    for _ in range(order):
        pj_pows.append(pj_pows[-1] * pj)
    out = []
    for r in range(order + 1):
        acc = Poly()
        for m in range(r + 1):
            if hp[m][r]:
                acc = acc + hp[m][r] * pj_pows[r - m] * _binom_general(power, m)
        out.append(acc)
    return tuple(out)


def sqrt_ratio_series(curve: CurveSpec, j: int, order: int) -> list[RationalExpr]:
    """``u(eps) = sqrt(p(x_j + eps)/p(x_j))`` with ``u(0) = 1``."""
    nums = _p_ratio_series(curve, j, mpq(1, 2), order)
    return [RationalExpr(nums[r], {("p", j): r}) for r in range(order + 1)]


def diagonal_series(
    e: GaloisElement, i: int = 1, j: int = 2, order: int = DEFAULT_DIAGONAL_ORDER
) -> DiagonalSeries:
    """Expand ``e`` around ``x_i = x_j + eps`` up to and including ``eps^order``."""
    curve = e.curve
    acc: dict[int, dict[tuple, RationalExpr]] = {}
    for s, r in e.components.items():
        pole = 0
        for f, ex in r.den.items():
            if f[0] == "d" and set(f[1:]) == {i, j}:
                pole += ex
        depth = order + pole
        if depth < 0:
            continue
        # each factor series: list of numerators sharing one denominator
        num_series, den = _numerator_series(r.num, i, j, depth)
        series = num_series
        new_subset = set(s)
        if i in s:
            new_subset.discard(i)
            if j in s:
                new_subset.discard(j)
                series = _series_mul(series, _u_padded(curve, j, depth), depth)
                series = [c * p_at(curve, j) for c in series]
                den = _merge(den, {("p", j): depth})
            else:
                new_subset.add(j)
                series = _series_mul(series, _u_padded(curve, j, depth), depth)
                den = _merge(den, {("p", j): depth})
        sign = 1
        for f, ex in r.den.items():
            if not factor_involves(f, i):
                den = _merge(den, {f: ex})
                continue
            if f[0] == "d":
                other = f[2] if f[1] == i else f[1]
                if other == j:
                    if f[1] == j:  # stored as (x_j - x_i) = -eps
                        sign *= (-1) ** ex
                    continue
                fs, fden = _diff_factor_series(i, j, other, f, ex, depth)
            elif f[0] == "p":
                nums = _p_ratio_series(curve, j, mpq(-ex), depth)
                fs = [nums[m] * _pj_pad(curve, j, depth - m) for m in range(depth + 1)]
                fden = {("p", j): ex + depth}
            else:
                fs, fden = _x_factor_series(j, ex, depth)
            series = _series_mul(series, fs, depth)
            den = _merge(den, fden)
        subset = tuple(sorted(new_subset))
        for m, c in enumerate(series):
            if not c:
                continue
            power = m - pole
            term = RationalExpr(c * sign, den)
            slot = acc.setdefault(power, {})
            slot[subset] = slot[subset].add(term, curve) if subset in slot else term
    coeffs = {p: GaloisElement(curve, comps) for p, comps in acc.items()}
    coeffs = {p: c for p, c in coeffs.items() if not c.is_zero()}
    return DiagonalSeries(i, j, order, coeffs, curve)


def _merge(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for f, e in b.items():
        if e:
            out[f] = out.get(f, 0) + e
    return out


@lru_cache(maxsize=None)
def _u_padded(curve, j, depth):
    nums = _p_ratio_series(curve, j, mpq(1, 2), depth)
    return [nums[m] * _pj_pad(curve, j, depth - m) for m in range(depth + 1)]


@lru_cache(maxsize=None)
def _pj_pad(curve, j, k):
    return p_at(curve, j) ** k


def _numerator_series(num: Poly, i: int, j: int, depth: int) -> tuple[list[Poly], dict]:
    xi, xj = xname(i), xname(j)
    shifted = num.subs({xi: Poly.var(xj) + Poly.var(eps_name())})
    coeffs = shifted.coefficients(eps_name())
    return [coeffs.get(m, Poly()) for m in range(depth + 1)], {}


def _diff_factor_series(i, j, k, f, ex, depth):
    """Series of ``f^(-ex)`` where ``f`` is ``x_i - x_k`` or ``x_k - x_i`` and ``x_i = x_j + eps``."""
    # x_i - x_k = (x_j - x_k) + eps ; x_k - x_i = (x_k - x_j) - eps
    if f[1] == i:
        base_key, base_sign = diff_factor(j, k)
        step = 1
    else:
        base_key, base_sign = diff_factor(k, j)
        step = -1
    # (A + step*eps)^(-ex) with A = base_sign * F, F the stored factor
    out = []
    for m in range(depth + 1):
        coef = _binom_general(mpq(-ex), m) * step ** m
        # A^(-ex-m) = base_sign^(ex+m) F^(-ex-m); pad to common F^(ex+depth)
        coef *= base_sign ** (ex + m)
        fpoly = Poly.var(xname(base_key[1])) - Poly.var(xname(base_key[2]))
        out.append(Poly.const(coef) * fpoly ** (depth - m))
    return out, {base_key: ex + depth}


def _x_factor_series(j, ex, depth):
    xj = Poly.var(xname(j))
    out = []
    for m in range(depth + 1):
        out.append(Poly.const(_binom_general(mpq(-ex), m)) * xj ** (depth - m))
    return out, {("x", j): ex + depth}


def principal_part_vanishes(e: GaloisElement, i: int, j: int) -> bool:
    return not diagonal_series(e, i, j, order=-1).principal_part()


def relabel(e: GaloisElement, mapping: Mapping[int, int]) -> GaloisElement:
    """Rename points ``i -> mapping[i]`` (a permutation on the points involved)."""
    full = {i: mapping.get(i, i) for i in e.points() | set(mapping)}
    var_map = {xname(i): Poly.var(xname(j)) for i, j in full.items() if i != j}
    comps: dict[tuple, RationalExpr] = {}
    for s, r in e.components.items():
        num = r.num.subs(var_map)
        den: dict[tuple, int] = {}
        sign = 1
        for f, ex in r.den.items():
            if f[0] == "d":
                key, sg = diff_factor(full[f[1]], full[f[2]])
                sign *= sg ** ex
            else:
                key = (f[0], full[f[1]])
            den[key] = den.get(key, 0) + ex
        new = tuple(sorted(full[i] for i in s))
        term = RationalExpr(num * sign, den)
        comps[new] = comps[new].add(term, e.curve) if new in comps else term
    return GaloisElement(e.curve, comps)
