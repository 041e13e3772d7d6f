"""Exact rational arithmetic, sparse multivariate polynomials and linear solves.

Every symbolic quantity in the package lives in a single polynomial ring over
the rationals whose generators are named on first use (``x1``, ``c``, ``A0``,
...).  Parameters such as the vacuum expectation may carry negative exponents,
so the ring is really a Laurent ring in those symbols; the ``x`` variables are
only ever used with non-negative exponents.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from gmpy2 import mpq

Rational = type(mpq(0))
Scalar = Union[int, "Rational", str]


def rational(value) -> Rational:
    """Coerce ``value`` (int, Fraction, mpq, ``"num/den"`` string) to an mpq."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        value = value.strip()
        if "/" in value:
            num, den = value.split("/")
            return mpq(int(num), int(den))
        return mpq(int(value))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return mpq(value)


def format_rational(q: Rational) -> str:
    q = rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# variable registry

_NAMES: list[str] = []
_INDEX: dict[str, int] = {}


def var_index(name: str) -> int:
    idx = _INDEX.get(name)
    if idx is None:
        idx = len(_NAMES)
        _NAMES.append(name)
        _INDEX[name] = idx
    return idx


def var_name(idx: int) -> str:
    return _NAMES[idx]


def _trim(m: list) -> tuple:
    while m and m[-1] == 0:
        m.pop()
    return tuple(m)


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    if len(a) == len(b):
        m = tuple(map(int.__add__, a, b))
    else:
        m = tuple(map(int.__add__, a[: len(b)], b)) + a[len(b):]
    if m and m[-1] == 0:
        return _trim(list(m))
    return m


class StructuralError(ValueError):
    """Raised when operands do not share a compatible variable layout."""


class Poly:
    """Sparse polynomial with rational coefficients.

    ``terms`` maps exponent tuples (indexed by the global variable registry,
    trailing zeros trimmed) to non-zero mpq coefficients.  Instances are
    treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, Rational] | None = None):
        self.terms = dict(terms) if terms else {}

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, value) -> "Poly":
        q = rational(value)
        return cls({(): q}) if q else cls()

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        idx = var_index(name)
        m = [0] * (idx + 1)
        m[idx] = power
        return cls({_trim(m): mpq(1)})

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @staticmethod
    def coerce(value) -> "Poly":
        if isinstance(value, Poly):
            return value
        return Poly.const(value)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        if len(other.terms) > len(self.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for m, q in small.items():
            v = out.get(m)
            if v is None:
                out[m] = q
            else:
                v = v + q
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -q for m, q in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        out = dict(self.terms)
        for m, q in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = -q
            else:
                v = v - q
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(out)

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                q = rational(other)
            except TypeError:
                return NotImplemented
            if not q:
                return Poly()
            return Poly._raw({m: c * q for m, c in self.terms.items()})
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly()
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((mb, qb),) = b.items()
            if not mb:
                return Poly._raw({m: q * qb for m, q in a.items()})
            return Poly._raw({_mono_mul(m, mb): q * qb for m, q in a.items()})
        out: dict = {}
        get = out.get
        for mb, qb in b.items():
            for ma, qa in a.items():
                m = _mono_mul(ma, mb)
                v = get(m)
                out[m] = qa * qb if v is None else v + qa * qb
        return Poly._raw({m: q for m, q in out.items() if q})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        q = rational(other)
        if not q:
            raise ZeroDivisionError("division of a polynomial by zero")
        inv = 1 / q
        return Poly._raw({m: c * inv for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            if len(self.terms) == 1:
                ((m, q),) = self.terms.items()
                return Poly._raw({tuple(e * k for e in m): q ** k})
            raise ValueError("negative powers only for monomials")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # queries ------------------------------------------------------------
    def variables(self) -> list[str]:
        present = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    present.add(i)
        return [var_name(i) for i in sorted(present)]

    def degree(self, name: str | None = None) -> int:
        """Degree in ``name`` (total degree when omitted); ``-1`` for zero."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(m) for m in self.terms)
        idx = _INDEX.get(name)
        if idx is None:
            return 0
        return max((m[idx] if idx < len(m) else 0) for m in self.terms)

    def min_degree(self, name: str) -> int:
        idx = _INDEX.get(name)
        if idx is None or not self.terms:
            return 0
        return min((m[idx] if idx < len(m) else 0) for m in self.terms)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Rational:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((), mpq(0))

    def coefficients(self, name: str) -> dict[int, "Poly"]:
        """Split by powers of ``name``: ``{k: coefficient of name**k}``."""
        idx = var_index(name)
        out: dict[int, dict] = {}
        for m, q in self.terms.items():
            if idx < len(m) and m[idx]:
                k = m[idx]
                lm = list(m)
                lm[idx] = 0
                rest = _trim(lm)
            else:
                k, rest = 0, m
            out.setdefault(k, {})[rest] = q
        return {k: Poly._raw(v) for k, v in out.items()}

    def coefficient(self, name: str, k: int) -> "Poly":
        return self.coefficients(name).get(k, Poly())

    def split_by(self, names: Sequence[str]) -> dict[tuple, "Poly"]:
        """Group terms by their exponents in ``names``."""
        idxs = [var_index(n) for n in names]
        out: dict[tuple, dict] = {}
        for m, q in self.terms.items():
            key = tuple((m[i] if i < len(m) else 0) for i in idxs)
            lm = list(m)
            for i in idxs:
                if i < len(lm):
                    lm[i] = 0
            out.setdefault(key, {})[_trim(lm)] = q
        return {k: Poly._raw(v) for k, v in out.items()}

    # calculus / substitution --------------------------------------------
    def diff(self, name: str, times: int = 1) -> "Poly":
        """Formal partial derivative."""
        idx = var_index(name)
        out: dict = {}
        for m, q in self.terms.items():
            if idx >= len(m):
                continue
            e = m[idx]
            if e < times and e >= 0:
                continue
            f = 1
            for j in range(times):
                f *= e - j
            if not f:
                continue
            lm = list(m)
            lm[idx] = e - times
            out[_trim(lm)] = q * f
        return Poly._raw(out)

    def subs(self, mapping: Mapping[str, object]) -> "Poly":
        """Substitute polynomials (or scalars) for variables."""
        if not mapping:
            return self
        idx_map = {var_index(k): Poly.coerce(v) for k, v in mapping.items()}
        power_cache: dict[tuple, Poly] = {}

        def power(i, e):
            key = (i, e)
            r = power_cache.get(key)
            if r is None:
                r = idx_map[i] ** e
                power_cache[key] = r
            return r

        groups: dict[tuple, dict] = {}
        for m, q in self.terms.items():
            key = tuple((i, m[i]) for i in idx_map if i < len(m) and m[i])
            lm = list(m)
            for i, _ in key:
                lm[i] = 0
            groups.setdefault(key, {})[_trim(lm)] = q
        result = Poly()
        for key, rest in groups.items():
            term = Poly._raw(rest)
            for i, e in key:
                term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object]) -> "Poly":
        return self.subs({k: rational(v) for k, v in values.items()})

    # division -----------------------------------------------------------
    def divmod_var(self, divisor: "Poly", name: str) -> tuple["Poly", "Poly"]:
        """Long division treating ``self`` and ``divisor`` as polynomials in ``name``.

        The leading coefficient of ``divisor`` in ``name`` must be a non-zero
        rational constant.
        """
        dcoeffs = divisor.coefficients(name)
        ddeg = max(dcoeffs)
        lead = dcoeffs[ddeg]
        if not lead.is_constant() or not lead:
            raise StructuralError("divisor leading coefficient must be a rational constant")
        inv = 1 / lead.constant_value()
        xv = Poly.var(name)
        rem = self.coefficients(name)
        quot = Poly()
        for k in range(max(rem), ddeg - 1, -1):
            ck = rem.get(k)
            if ck is None or not ck:
                continue
            factor = ck * inv
            shift = k - ddeg
            quot = quot + factor * xv ** shift
            for j, dj in dcoeffs.items():
                t = rem.get(j + shift, Poly()) - factor * dj
                rem[j + shift] = t
        remainder = Poly()
        for k, ck in rem.items():
            if ck:
                remainder = remainder + ck * xv ** k
        return quot, remainder

    def exact_div_var(self, divisor: "Poly", name: str) -> "Poly | None":
        q, r = self.divmod_var(divisor, name)
        return q if not r else None

    # rendering ----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, Rational]]:
        """Terms in graded lexicographic order (highest first)."""
        def key(item):
            m = item[0]
            return (sum(m), m)
        return sorted(self.terms.items(), key=key, reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, q in self.sorted_terms():
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(var_name(i))
                elif e:
                    factors.append(f"{var_name(i)}^{e}")
            coeff = format_rational(q)
            if factors:
                if q == 1:
                    body = "*".join(factors)
                elif q == -1:
                    body = "-" + "*".join(factors)
                else:
                    body = f"{coeff}*" + "*".join(factors)
            else:
                body = coeff
            parts.append(body)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly({self})"

    def serialize(self, names: Sequence[str] | None = None) -> list:
        """Canonical list of ``[exponent-vector, "num/den"]`` pairs."""
        if names is None:
            names = self.variables()
        idxs = [var_index(n) for n in names]
        covered = set(idxs)
        for m in self.terms:
            for i, e in enumerate(m):
                if e and i not in covered:
                    raise StructuralError(f"variable {var_name(i)} missing from table")
        rows = []
        for m, q in self.terms.items():
            vec = [m[i] if i < len(m) else 0 for i in idxs]
            rows.append((vec, q))
        rows.sort(key=lambda r: (sum(r[0]), r[0]), reverse=True)
        return [[vec, format_rational(q)] for vec, q in rows]

    @classmethod
    def deserialize(cls, names: Sequence[str], rows: Iterable) -> "Poly":
        out = Poly()
        for vec, q in rows:
            term = Poly.const(q)
            for n, e in zip(names, vec):
                if e:
                    term = term * Poly.var(n, e)
            out = out + term
        return out


def var(name: str) -> Poly:
    return Poly.var(name)


def const(value) -> Poly:
    return Poly.const(value)


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if not isinstance(a, Poly) or not isinstance(b, Poly):
        raise StructuralError("poly_arith expects two polynomials")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_derivative(p: Poly, name: str, times: int = 1) -> Poly:
    return p.diff(name, times)


# ---------------------------------------------------------------------------
# univariate helpers


def univariate_gcd(a: Poly, b: Poly, name: str) -> Poly:
    """Monic gcd of two polynomials in ``name`` with rational coefficients."""
    for p in (a, b):
        extra = set(p.variables()) - {name}
        if extra:
            raise StructuralError(f"univariate gcd got extra variables {sorted(extra)}")
    while b:
        _, r = a.divmod_var(b, name)
        a, b = b, r
    if not a:
        return a
    lead = a.coefficients(name)[a.degree(name)].constant_value()
    return a / lead


def rational_roots(p: Poly, name: str) -> list[Rational]:
    """All rational roots of a univariate polynomial, each verified exactly.

    Candidates come from the rational root theorem applied to the integer
    normalisation of the square-free part.
    """
    if not p:
        raise ValueError("the zero polynomial has every number as a root")
    deriv = p.diff(name)
    g = univariate_gcd(p, deriv, name) if deriv else Poly.const(1)
    sqfree = p.divmod_var(g, name)[0] if g.degree(name) > 0 else p
    coeffs = sqfree.coefficients(name)
    deg = max(coeffs)
    vals = [coeffs.get(k, Poly()).constant_value() if k in coeffs else mpq(0) for k in range(deg + 1)]
    roots: list[Rational] = []
    # strip factors of x
    low = 0
    while low <= deg and not vals[low]:
        low += 1
    if low:
        roots.append(mpq(0))
    vals = vals[low:]
    deg = len(vals) - 1
    if deg <= 0:
        return roots
    den = 1
    for v in vals:
        den = math.lcm(den, int(v.denominator))
    ints = [int(v * den) for v in vals]
    if deg == 1:
        roots.append(mpq(-ints[0], ints[1]))
        return sorted(set(roots))
    if deg == 2:
        c0, c1, c2 = ints
        disc = c1 * c1 - 4 * c2 * c0
        if disc >= 0:
            r = math.isqrt(disc)
            if r * r == disc:
                roots.extend({mpq(-c1 + r, 2 * c2), mpq(-c1 - r, 2 * c2)})
        return sorted(set(roots))
    for num in _divisors(abs(ints[0])):
        for d in _divisors(abs(ints[-1])):
            for s in (1, -1):
                cand = mpq(s * num, d)
                acc = mpq(0)
                for v in reversed(vals):
                    acc = acc * cand + v
                if not acc:
                    roots.append(cand)
    return sorted(set(roots))


def _divisors(n: int) -> list[int]:
    if n == 0:
        return [1]
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


# ---------------------------------------------------------------------------
# linear systems


@dataclass(frozen=True)
class LinearSystem:
    """Rows ``sum_u coeff[u] * u = constant`` over the rationals.

    Constants may be polynomials in parameters that are not unknowns; the
    solve is then carried out over the rational vector space they span.
    """

    unknowns: tuple[str, ...]
    rows: tuple[tuple[tuple[Rational, ...], Poly], ...]

    def __post_init__(self):
        width = len(self.unknowns)
        for coeffs, _ in self.rows:
            if len(coeffs) != width:
                raise StructuralError("row width does not match unknown count")

    @classmethod
    def from_equations(cls, equations: Iterable[Poly], unknowns: Sequence[str]) -> "LinearSystem":
        """Build rows from polynomial expressions ``eq == 0`` linear in ``unknowns``."""
        unknowns = tuple(unknowns)
        idxs = [var_index(u) for u in unknowns]
        pos = {i: k for k, i in enumerate(idxs)}
        rows = []
        for eq in equations:
            coeffs = [mpq(0)] * len(unknowns)
            const_terms: dict = {}
            for m, q in eq.terms.items():
                hits = [(i, e) for i, e in enumerate(m) if e and i in pos]
                if not hits:
                    const_terms[m] = -q
                    continue
                if len(hits) > 1 or hits[0][1] != 1:
                    raise StructuralError("equation is not linear in the unknowns")
                i = hits[0][0]
                lm = list(m)
                lm[i] = 0
                if _trim(lm):
                    raise StructuralError("unknown multiplied by a non-constant")
                coeffs[pos[i]] += q
            rows.append((tuple(coeffs), Poly._raw(const_terms)))
        return cls(unknowns, tuple(rows))


@dataclass
class LinearSolution:
    kind: str  # "unique" | "family" | "inconsistent"
    unknowns: tuple[str, ...]
    particular: dict[str, Poly] = field(default_factory=dict)
    null_space: list[dict[str, Rational]] = field(default_factory=list)
    witness: dict[int, Rational] | None = None
    witness_constant: Poly | None = None

    @property
    def free_count(self) -> int:
        return len(self.null_space)

    def substitution(self) -> dict[str, Poly]:
        return dict(self.particular)


def _eliminate(system: LinearSystem):
    n = len(system.unknowns)
    # each row: coefficient list, constant, and its expression in original rows
    rows = []
    for r, (coeffs, constant) in enumerate(system.rows):
        rows.append([list(coeffs), constant, {r: mpq(1)}])
    pivots: list[int] = []
    pivot_rows: list[list] = []
    remaining = rows
    for col in range(n):
        pr = None
        for k, row in enumerate(remaining):
            if row[0][col]:
                pr = k
                break
        if pr is None:
            continue
        prow = remaining.pop(pr)
        inv = 1 / prow[0][col]
        prow[0] = [v * inv for v in prow[0]]
        prow[1] = prow[1] * inv
        prow[2] = {k: v * inv for k, v in prow[2].items()}
        for row in itertools.chain(remaining, pivot_rows):
            f = row[0][col]
            if f:
                row[0] = [a - f * b for a, b in zip(row[0], prow[0])]
                row[1] = row[1] - prow[1] * f
                comb = dict(row[2])
                for k, v in prow[2].items():
                    comb[k] = comb.get(k, mpq(0)) - f * v
                row[2] = {k: v for k, v in comb.items() if v}
        pivots.append(col)
        pivot_rows.append(prow)
    return pivots, pivot_rows, remaining


def compatibility_conditions(system: LinearSystem) -> list[Poly]:
    """Constants left on the rows that elimination reduces to zero.

    The system is solvable exactly when all of them vanish; with symbolic
    constants they are the conditions on the remaining symbols.
    """
    _, _, remaining = _eliminate(system)
    return [row[1] for row in remaining if row[1]]


def solve_linear(system: LinearSystem) -> LinearSolution:
    """Exact Gauss-Jordan elimination.

    Returns the reduced particular solution (free unknowns set to 0), a
    reduced null-space basis, or an inconsistency witness: row multipliers
    whose combination cancels every unknown but leaves a non-zero constant.
    """
    n = len(system.unknowns)
    pivots, pivot_rows, remaining = _eliminate(system)
    for row in remaining:
        if row[1]:
            return LinearSolution(
                "inconsistent", system.unknowns, witness=row[2], witness_constant=row[1]
            )
    particular = {u: Poly() for u in system.unknowns}
    for col, row in zip(pivots, pivot_rows):
        particular[system.unknowns[col]] = row[1]
    free = [c for c in range(n) if c not in pivots]
    null_space = []
    for fc in free:
        vec = {u: mpq(0) for u in system.unknowns}
        vec[system.unknowns[fc]] = mpq(1)
        for col, row in zip(pivots, pivot_rows):
            vec[system.unknowns[col]] = -row[0][fc]
        null_space.append(vec)
    kind = "unique" if not free else "family"
    return LinearSolution(kind, system.unknowns, particular, null_space)


def residuals(system: LinearSystem, assignment: Mapping[str, Poly]) -> list[Poly]:
    out = []
    for coeffs, constant in system.rows:
        acc = -constant
        for u, a in zip(system.unknowns, coeffs):
            if a:
                acc = acc + Poly.coerce(assignment[u]) * a
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# linear unknowns with one polynomial parameter


@dataclass
class ParametricSolution:
    parameter: str
    candidates: list[Rational]
    solutions: list[tuple[Rational, LinearSolution]]
    condition: Poly


def solve_linear_with_parameter(
    equations: Sequence[Poly], unknowns: Sequence[str], parameter: str
) -> ParametricSolution:
    """Solve equations linear in ``unknowns`` whose coefficients are polynomials in ``parameter``.

    Fraction-free elimination over Q[parameter] yields compatibility
    conditions; every admissible parameter value is a rational root of their
    gcd.  Each root is then substituted and the remaining system solved
    exactly with :func:`solve_linear`.
    """
    unknowns = list(unknowns)
    uidx = {var_index(u): u for u in unknowns}
    pidx = var_index(parameter)
    rows = []
    for eq in equations:
        row: dict[str, Poly] = {}
        rest: dict = {}
        for mono, q in eq.terms.items():
            hits = [(i, e) for i, e in enumerate(mono) if e and i in uidx]
            if not hits:
                rest[mono] = q
                continue
            if len(hits) != 1 or hits[0][1] != 1:
                raise StructuralError("equation is not linear in the unknowns")
            i = hits[0][0]
            lm = list(mono)
            lm[i] = 0
            rest_m = _trim(lm)
            if any(e for j, e in enumerate(rest_m) if j != pidx):
                raise StructuralError("unknown coefficient depends on more than the parameter")
            u = uidx[i]
            row[u] = row.get(u, Poly()) + Poly._raw({rest_m: q})
        const = Poly._raw(rest)
        if any(set(const.variables()) - {parameter} for _ in [0]):
            raise StructuralError("constant depends on more than the parameter")
        rows.append((row, const))

    conditions: list[Poly] = []
    active = [r for r in rows if r[0] or r[1]]
    for u in unknowns:
        piv = None
        for k, (row, _) in enumerate(active):
            if row.get(u):
                piv = k
                break
        if piv is None:
            continue
        prow, pconst = active.pop(piv)
        pc = prow[u]
        new_active = []
        for row, const in active:
            f = row.get(u)
            if not f:
                new_active.append((row, const))
                continue
            nrow = {}
            for w in set(row) | set(prow):
                v = row.get(w, Poly()) * pc - prow.get(w, Poly()) * f
                if v:
                    nrow[w] = v
            nconst = const * pc - pconst * f
            new_active.append((nrow, nconst))
        active = new_active
    for row, const in active:
        if not row and const:
            conditions.append(const)
    if not conditions:
        return ParametricSolution(parameter, [], [], Poly())
    g = conditions[0]
    for cnd in conditions[1:]:
        g = univariate_gcd(g, cnd, parameter) if g.degree(parameter) > 0 else g
        if g.is_constant():
            break
    if g.is_constant():
        return ParametricSolution(parameter, [], [], g)
    cands = rational_roots(g, parameter)
    sols = []
    for val in cands:
        subbed = [eq.subs({parameter: val}) for eq in equations]
        system = LinearSystem.from_equations(subbed, unknowns)
        sol = solve_linear(system)
        if sol.kind != "inconsistent":
            sols.append((val, sol))
    return ParametricSolution(parameter, cands, sols, g)


def numerator_coefficients(p: Poly, names: Sequence[str]) -> list[Poly]:
    """Coefficients of ``p`` with respect to the monomials in ``names``."""
    return list(p.split_by(names).values())
