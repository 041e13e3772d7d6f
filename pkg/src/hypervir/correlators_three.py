"""The connected Virasoro three-point function for odd n."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .curve import CurveSpec
from .exact_algebra import Poly
from .field_element import (
    GaloisElement,
    diagonal_series,
    odd_cutoff,
    project_above,
    relabel,
    weighted_projection,
    xname,
)
from .correlators_one import c_sym, odd_degree_bound, vac_sym
from .reports import CorrelatorReport
from .correlators_two import SymmetryConditionError, TwoPointFunction, build_two_point, f_pair

PAIRS = ((1, 2), (1, 3), (2, 3))


# ---------------------------------------------------------------------------
# connected functions


def set_partitions(items: Sequence[int]) -> list[list[tuple[int, ...]]]:
    items = list(items)
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for part in set_partitions(rest):
        out.append([(first,)] + part)
        for k in range(len(part)):
            merged = tuple(sorted((first,) + part[k]))
            out.append(part[:k] + [merged] + part[k + 1:])
    return out


def connected_recursion(
    n_points: int,
    raw: Mapping[tuple[int, ...], object],
    vac,
    zero: Callable[[], object] | None = None,
) -> dict[tuple[int, ...], object]:
    """Invert ``<phi_S>/<1> = sum over partitions of prod <phi_B>_c`` for all ``S``.

    ``raw`` maps sorted index tuples to raw correlators; ``vac`` is ``<1>``
    (anything whose reciprocal multiplies the values, e.g. a Laurent ``Poly``).
    """
    inv = vac ** -1
    conn: dict[tuple[int, ...], object] = {}
    for size in range(1, n_points + 1):
        for subset in itertools.combinations(range(1, n_points + 1), size):
            value = raw[subset] * inv
            for part in set_partitions(subset):
                if len(part) == 1:
                    continue
                term = None
                for block in part:
                    term = conn[block] if term is None else term * conn[block]
                value = value - term
            conn[subset] = value
    return conn


def raw_from_connected(n_points: int, conn: Mapping[tuple[int, ...], object], vac) -> dict:
    out = {}
    for size in range(1, n_points + 1):
        for subset in itertools.combinations(range(1, n_points + 1), size):
            total = None
            for part in set_partitions(subset):
                term = None
                for block in part:
                    term = conn[block] if term is None else term * conn[block]
                total = term if total is None else total + term
            out[subset] = total * vac
    return out


# ---------------------------------------------------------------------------
# singular part


def build_R0_3(tpf: TwoPointFunction) -> GaloisElement:
    """``<1> R^(0)(x1,x2,x3)``: the symmetric singular part of the connected function."""
    curve = tpf.curve
    c, vac = c_sym(), vac_sym()
    f = {pair: f_pair(curve, *pair) for pair in PAIRS}
    P = {i: tpf.opf.polynomial(i) for i in (1, 2, 3)}
    reg = {pair: tpf.regular_part(*pair).canonical() for pair in PAIRS}
    out = f[(1, 2)] * f[(1, 3)] * f[(2, 3)] * (c * vac / 64)
    out = out + f[(1, 2)] * f[(1, 3)] * (P[2] + P[3]) / 64
    out = out + f[(1, 2)] * f[(2, 3)] * (P[1] + P[3]) / 64
    out = out + f[(1, 3)] * f[(2, 3)] * (P[1] + P[2]) / 64
    out = out + f[(1, 2)] * (reg[(1, 3)] + reg[(2, 3)]) / 4
    out = out + f[(1, 3)] * (reg[(1, 2)] + reg[(2, 3)]) / 4
    out = out + f[(2, 3)] * (reg[(1, 2)] + reg[(1, 3)]) / 4
    return out


@dataclass
class Cascade:
    corrected: GaloisElement
    projections: dict[tuple[int, ...], GaloisElement]


def correction_cascade(R0: GaloisElement, check_symmetry: bool = True) -> Cascade:
    """``R - R_1 + R_12 - R_2 + R_23 - R_3 + R_13 - R_123`` with ``Q_i`` the weighted projection."""
    if R0.curve.n % 2 == 0:
        raise ValueError("the projection cascade is only available for odd n")
    proj: dict[tuple[int, ...], GaloisElement] = {}

    def get(seq: tuple[int, ...]) -> GaloisElement:
        if seq in proj:
            return proj[seq]
        base = R0 if len(seq) == 1 else get(seq[:-1])
        proj[seq] = weighted_projection(base, seq[-1])
        return proj[seq]

    for seq in [(1,), (2,), (3,), (1, 2), (2, 3), (1, 3), (1, 2, 3)]:
        get(seq)
    if check_symmetry:
        if not (get((3, 1)) - get((1, 3))).is_zero():
            raise SymmetryConditionError("R_13 differs from R_31")
        r123 = get((1, 2, 3))
        for seq in [(2, 3, 1), (3, 1, 2)]:
            if not (get(seq) - r123).is_zero():
                raise SymmetryConditionError(f"R_123 differs from R_{''.join(map(str, seq))}")
    corrected = (
        R0
        - proj[(1,)] + proj[(1, 2)]
        - proj[(2,)] + proj[(2, 3)]
        - proj[(3,)] + proj[(1, 3)]
        - proj[(1, 2, 3)]
    )
    return Cascade(corrected, proj)


# ---------------------------------------------------------------------------
# state ansatz


def _sym_orbit(exps: tuple[int, ...], groups: Sequence[Sequence[int]]) -> Poly:
    """Sum of distinct monomials obtained by permuting exponents within each group of slots."""
    seen = set()
    out = Poly()
    slots = list(exps)
    perms = [list(itertools.permutations(g)) for g in groups]
    for choice in itertools.product(*perms):
        e = list(slots)
        for g, perm in zip(groups, choice):
            for src, dst in zip(g, perm):
                e[dst] = slots[src]
        key = tuple(e)
        if key in seen:
            continue
        seen.add(key)
        m = Poly.const(1)
        for k, ek in enumerate(key):
            m = m * Poly.var(xname(k + 1)) ** ek
        out = out + m
    return out


@dataclass
class StateAnsatz3:
    """``P^(0) + sum y_i P^(i) + sum y_i y_j P^(ij) + y1 y2 y3 P^(123)`` as one element builder."""

    parts: dict[tuple[int, ...], Poly]  # subset -> polynomial in x1, x2, x3
    symbols: tuple[str, ...]

    def element(self, curve: CurveSpec) -> GaloisElement:
        e = GaloisElement(curve)
        for subset, poly in self.parts.items():
            if poly:
                e = e + GaloisElement.from_poly(curve, poly, subset)
        return e

    def substitute(self, values) -> "StateAnsatz3":
        return StateAnsatz3(
            {k: v.subs(values) for k, v in self.parts.items()},
            tuple(s for s in self.symbols if s not in values),
        )


def attach_state_ansatz3(curve: CurveSpec) -> StateAnsatz3:
    """Symbolic three-point state polynomials with the degree bounds and permutation symmetry."""
    n = curve.n
    even_deg = n - 3
    odd_deg = odd_degree_bound(n)
    names: list[str] = []
    parts: dict[tuple[int, ...], Poly] = {}

    # P^(0): fully symmetric
    p0 = Poly()
    for a in range(even_deg, -1, -1):
        for b in range(a, -1, -1):
            for c in range(b, -1, -1):
                name = f"B_{a}_{b}_{c}"
                p0 = p0 + Poly.var(name) * _sym_orbit((a, b, c), [(0, 1, 2)])
                names.append(name)
    parts[()] = p0
    if odd_deg < 0:
        return StateAnsatz3(parts, tuple(names))

    # y_i P^(i): the odd slot is x_i, the other two are symmetric
    single = {}
    for a in range(odd_deg, -1, -1):
        for b in range(even_deg, -1, -1):
            for c in range(b, -1, -1):
                name = f"C_{a}_{b}_{c}"
                single[name] = (a, b, c)
                names.append(name)
    for i in (1, 2, 3):
        others = [k for k in (1, 2, 3) if k != i]
        poly = Poly()
        for name, (a, b, c) in single.items():
            exps = [0, 0, 0]
            exps[i - 1], exps[others[0] - 1], exps[others[1] - 1] = a, b, c
            poly = poly + Poly.var(name) * _sym_orbit(tuple(exps), [tuple(k - 1 for k in others)])
        parts[(i,)] = poly

    # y_i y_j P^(ij): two odd slots symmetric, one even slot
    double = {}
    for a in range(odd_deg, -1, -1):
        for b in range(a, -1, -1):
            for c in range(even_deg, -1, -1):
                name = f"D_{a}_{b}_{c}"
                double[name] = (a, b, c)
                names.append(name)
    for i, j in PAIRS:
        k = 6 - i - j
        poly = Poly()
        for name, (a, b, c) in double.items():
            exps = [0, 0, 0]
            exps[i - 1], exps[j - 1], exps[k - 1] = a, b, c
            poly = poly + Poly.var(name) * _sym_orbit(tuple(exps), [(i - 1, j - 1)])
        parts[(i, j)] = poly

    # y1 y2 y3 P^(123): fully symmetric
    triple = Poly()
    for a in range(odd_deg, -1, -1):
        for b in range(a, -1, -1):
            for c in range(b, -1, -1):
                name = f"G_{a}_{b}_{c}"
                triple = triple + Poly.var(name) * _sym_orbit((a, b, c), [(0, 1, 2)])
                names.append(name)
    parts[(1, 2, 3)] = triple
    return StateAnsatz3(parts, tuple(names))


# ---------------------------------------------------------------------------
# assembly and checks


@dataclass
class ThreePointFunction:
    curve: CurveSpec
    tpf: TwoPointFunction
    R0: GaloisElement
    cascade: Cascade
    ansatz: StateAnsatz3
    assembled: GaloisElement  # <1> <T T T>_c p1 p2 p3

    def connected_times_p(self) -> GaloisElement:
        return self.assembled * Poly.var("vac") ** -1

    def raw_times_p(self) -> GaloisElement:
        """``<T(x1) T(x2) T(x3)> p1 p2 p3`` from the partition sum."""
        opf = self.tpf.opf
        vac_inv = Poly.var("vac") ** -1
        pt = {i: opf.p_times(i) for i in (1, 2, 3)}
        out = self.assembled
        for (i, j), k in zip(PAIRS, (3, 2, 1)):
            out = out + self.tpf.assembled_at(i, j) * pt[k] * vac_inv
        return out + pt[1] * pt[2] * pt[3] * vac_inv ** 2

    def substitute(self, values) -> "ThreePointFunction":
        return ThreePointFunction(
            self.curve,
            self.tpf.substitute(values),
            self.R0.subs(values),
            self.cascade,
            self.ansatz.substitute(values),
            self.assembled.subs(values),
        )


def build_three_point(
    curve: CurveSpec, tpf: TwoPointFunction | None = None, check_symmetry: bool = True
) -> ThreePointFunction:
    tpf = tpf or build_two_point(curve)
    R0 = build_R0_3(tpf)
    cascade = correction_cascade(R0, check_symmetry)
    ansatz = attach_state_ansatz3(curve)
    assembled = cascade.corrected + ansatz.element(curve)
    return ThreePointFunction(curve, tpf, R0, cascade, ansatz, assembled)


def _inv_ppp(curve: CurveSpec) -> GaloisElement:
    return GaloisElement.inv_p(curve, 1) * GaloisElement.inv_p(curve, 2) * GaloisElement.inv_p(curve, 3)


def no_fourfold_pole(th: ThreePointFunction) -> CorrelatorReport:
    rep = CorrelatorReport("three-point: no fourfold pole", th.curve.describe())
    conn = th.assembled * _inv_ppp(th.curve)
    for i, j in PAIRS:
        s = diagonal_series(conn, i, j, order=-1)
        ok4 = s.coefficient(-4).is_zero()
        ok3 = s.coefficient(-3).is_zero()
        low = s.lowest_order()
        rep.add(f"x{i} -> x{j}: eps^-4 and eps^-3 vanish", ok4 and ok3, f"lowest order {low}")
    return rep


def three_point_checks(th: ThreePointFunction) -> CorrelatorReport:
    curve = th.curve
    rep = no_fourfold_pole(th)
    rep.title = "three-point function"
    k = curve.n - 3
    for i in (1, 2, 3):
        grow = project_above(th.assembled, i, k, odd_cutoff(curve.n, k))
        rep.add(f"O(x{i}^(n-3)) at infinity", grow.is_zero())
    for perm in ({1: 2, 2: 1}, {1: 2, 2: 3, 3: 1}):
        moved = relabel(th.assembled, perm)
        rep.add(f"symmetric under {perm}", (moved - th.assembled).is_zero())
    rep.add("no p(x_i) denominators", th.assembled.canonical().max_den_exponent("p") == 0)
    rep.extend(ope_check_three(th))
    return rep


def ope_check_three(th: ThreePointFunction) -> CorrelatorReport:
    """Principal part of the raw function at ``x1 -> x2`` equals the OPE prediction."""
    curve = th.curve
    c = c_sym()
    rep = CorrelatorReport("three-point OPE", curve.describe())
    raw = th.raw_times_p() * _inv_ppp(curve)
    tpf, opf = th.tpf, th.tpf.opf
    t3 = opf.element(3)
    inv_pp13 = GaloisElement.inv_p(curve, 1) * GaloisElement.inv_p(curve, 3)
    inv_pp23 = GaloisElement.inv_p(curve, 2) * GaloisElement.inv_p(curve, 3)
    t13 = tpf.raw_times_p(1, 3) * inv_pp13
    t23 = tpf.raw_times_p(2, 3) * inv_pp23
    ref = GaloisElement.inv_diff(curve, 1, 2, 4) * t3 * (c / 2)
    ref = ref + (t13 + t23) * GaloisElement.inv_diff(curve, 1, 2, 2)
    s = diagonal_series(raw - ref, 1, 2, order=-1)
    rep.add("x1 -> x2 principal part matches T T OPE", not s.principal_part())
    return rep
