"""Digraph representation of Virasoro N-point functions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


from .curve import CurveSpec
from .field_element import GaloisElement, diagonal_series
from .correlators_one import OnePointFunction, c_sym, vac_sym
from .reports import CorrelatorReport
from .correlators_two import TwoPointFunction, f_pair


class GraphError(KeyError):
    pass


@dataclass(frozen=True, order=True)
class Digraph:
    """Labelled vertices with ordered edges; every vertex has in/out-degree at most one."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        tails, heads = set(), set()
        for i, j in self.edges:
            if i == j:
                raise ValueError("self-loops are not allowed")
            if i not in vs or j not in vs:
                raise ValueError(f"edge ({i},{j}) leaves the vertex set")
            if i in tails or j in heads:
                raise ValueError("vertex degree exceeds one")
            tails.add(i)
            heads.add(j)

    @classmethod
    def make(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "Digraph":
        return cls(tuple(sorted(vertices)), tuple(sorted(edges)))

    @property
    def tails(self) -> frozenset[int]:
        """``A_N``: vertices with an outgoing edge."""
        return frozenset(i for i, _ in self.edges)

    @property
    def heads(self) -> frozenset[int]:
        """``E_N``: vertices with an incoming edge."""
        return frozenset(j for _, j in self.edges)

    @property
    def path_starts(self) -> frozenset[int]:
        return self.tails - self.heads

    @property
    def isolated(self) -> frozenset[int]:
        return frozenset(self.vertices) - self.tails - self.heads

    def successor(self) -> dict[int, int]:
        return dict(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def render(self) -> str:
        body = ",".join(f"{i}->{j}" for i, j in self.edges) or "(none)"
        return f"{body} | loops={loop_count(self)}"


def loop_count(g: Digraph) -> int:
    """Number of directed cycles."""
    succ = g.successor()
    seen: set[int] = set()
    loops = 0
    for start in g.vertices:
        if start in seen:
            continue
        path = []
        v = start
        while v is not None and v not in seen:
            seen.add(v)
            path.append(v)
            v = succ.get(v)
        if v is not None and v in path:
            loops += 1
    return loops


def _sort_key(g: Digraph):
    return (len(g.edges), g.edges)


def enumerate_graphs(n: int | Sequence[int]) -> list[Digraph]:
    """All admissible digraphs on ``1..n`` (or on the given vertex labels)."""
    vertices = tuple(range(1, n + 1)) if isinstance(n, int) else tuple(sorted(n))
    if not vertices:
        raise ValueError("need at least one vertex")
    out = []

    def rec(k: int, used_heads: frozenset, edges: list):
        if k == len(vertices):
            out.append(Digraph(vertices, tuple(sorted(edges))))
            return
        v = vertices[k]
        rec(k + 1, used_heads, edges)
        for w in vertices:
            if w != v and w not in used_heads:
                edges.append((v, w))
                rec(k + 1, used_heads | {w}, edges)
                edges.pop()

    rec(0, frozenset(), [])
    return sorted(out, key=_sort_key)


def brute_force_count(n: int) -> int:
    """Count admissible graphs by testing every subset of the ordered pairs."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    count = 0
    for mask in range(1 << len(pairs)):
        outs, ins = set(), set()
        ok = True
        for b, (i, j) in enumerate(pairs):
            if mask >> b & 1:
                if i in outs or j in ins:
                    ok = False
                    break
                outs.add(i)
                ins.add(j)
        count += ok
    return count


def partial_injection_count(n: int) -> int:
    """Fixed-point-free partial injections of an n-set, by inclusion-exclusion."""

    def all_partial(m: int) -> int:
        return sum(math.comb(m, k) ** 2 * math.factorial(k) for k in range(m + 1))

    return sum((-1) ** j * math.comb(n, j) * all_partial(n - j) for j in range(n + 1))


def export_graphs(graphs: Sequence[Digraph]) -> str:
    return "\n".join(g.render() for g in graphs)


# ---------------------------------------------------------------------------
# decomposition and contraction maps


def classify(g: Digraph, a: int = 1, b: int = 2) -> str:
    ab, ba = g.has_edge(a, b), g.has_edge(b, a)
    if ab and ba:
        return "loop"
    if ab:
        return "a->b"
    if ba:
        return "b->a"
    return "apart"


def phi(g: Digraph, a: int = 1, b: int = 2) -> Digraph:
    """Contract the edge ``a -> b`` into ``b``."""
    if not g.has_edge(a, b) or g.has_edge(b, a):
        raise ValueError("phi needs a -> b without b -> a")
    edges = []
    for i, j in g.edges:
        if (i, j) == (a, b):
            continue
        edges.append((i, b) if j == a else (i, j))
    return Digraph.make([v for v in g.vertices if v != a], edges)


def phi_inverse(g: Digraph, a: int = 1, b: int = 2) -> Digraph:
    edges = [((i, a) if j == b else (i, j)) for i, j in g.edges]
    edges.append((a, b))
    return Digraph.make(g.vertices + (a,), edges)


def phibar(g: Digraph, a: int = 1, b: int = 2) -> Digraph:
    """Contract the edge ``b -> a`` into ``b``."""
    if not g.has_edge(b, a) or g.has_edge(a, b):
        raise ValueError("phibar needs b -> a without a -> b")
    edges = []
    for i, j in g.edges:
        if (i, j) == (b, a):
            continue
        edges.append((b, j) if i == a else (i, j))
    return Digraph.make([v for v in g.vertices if v != a], edges)


def phibar_inverse(g: Digraph, a: int = 1, b: int = 2) -> Digraph:
    edges = [((a, j) if i == b else (i, j)) for i, j in g.edges]
    edges.append((b, a))
    return Digraph.make(g.vertices + (a,), edges)


def chi(g: Digraph, b: int = 2) -> Digraph:
    """Drop the isolated vertex ``b``."""
    if b not in g.isolated:
        raise ValueError("chi needs b isolated")
    return Digraph.make([v for v in g.vertices if v != b], g.edges)


def decomposition_report(n: int) -> CorrelatorReport:
    rep = CorrelatorReport(f"graph decomposition, N={n}", "-")
    graphs = enumerate_graphs(n)
    classes: dict[str, list[Digraph]] = {"loop": [], "a->b": [], "b->a": [], "apart": []}
    for g in graphs:
        classes[classify(g)].append(g)
    rep.add("classes partition S", sum(len(v) for v in classes.values()) == len(graphs))
    rest = tuple(range(2, n + 1))
    target = set(enumerate_graphs(rest))
    img = [phi(g) for g in classes["a->b"]]
    rep.add("phi is a bijection onto S(x2..xN)", len(set(img)) == len(img) and set(img) == target)
    img = [phibar(g) for g in classes["b->a"]]
    rep.add("phibar is a bijection onto S(x2..xN)", len(set(img)) == len(img) and set(img) == target)
    rep.add(
        "phi and phibar invert",
        all(phi_inverse(phi(g)) == g for g in classes["a->b"])
        and all(phibar_inverse(phibar(g)) == g for g in classes["b->a"]),
    )
    if n >= 3:
        tail = set(enumerate_graphs(tuple(range(3, n + 1))))
        isolated2 = [g for g in target if 2 in g.isolated]
        img = [chi(g) for g in isolated2]
        rep.add("chi is a bijection onto S(x3..xN)", len(set(img)) == len(img) and set(img) == tail)
        loops = {Digraph.make(range(3, n + 1), [e for e in g.edges if 1 not in e and 2 not in e]) for g in classes["loop"]}
        rep.add("S_(12) matches S(x3..xN)", len(classes["loop"]) == len(tail) and loops == tail)
    else:
        rep.add("S_(12) is the single 2-cycle", len(classes["loop"]) == 1)
    return rep


# ---------------------------------------------------------------------------
# graph weights

ROracle = Callable[[frozenset, frozenset], GaloisElement]


def assemble_F(g: Digraph, curve: CurveSpec, r_oracle: ROracle) -> GaloisElement:
    """``(c/2)^loops prod (f_ij/4) <prod P(x_k) prod T(x_l) p_l>_r``."""
    weight = GaloisElement.one(curve) * (c_sym() / 2) ** loop_count(g)
    for i, j in g.edges:
        weight = weight * f_pair(curve, min(i, j), max(i, j)) / 4
    try:
        bracket = r_oracle(g.path_starts, g.isolated)
    except KeyError as exc:
        raise GraphError(f"no bracket for P={sorted(g.path_starts)}, T={sorted(g.isolated)}") from exc
    return weight * bracket


class DirectBrackets:
    """``<...>_r`` built from the directly constructed one-, two- and three-point functions."""

    def __init__(self, opf: OnePointFunction, tpf: TwoPointFunction | None = None, raw3: GaloisElement | None = None):
        self.opf = opf
        self.tpf = tpf
        self.raw3 = raw3
        self.curve = opf.curve
        self._cache: dict = {}

    def tt_regular(self, i: int, j: int) -> GaloisElement:
        """``<T_i T_j>_r p_i p_j`` = raw minus the graph singular terms."""
        key = ("tt", i, j)
        if key not in self._cache:
            if self.tpf is None:
                raise KeyError(key)
            curve = self.curve
            c, vac = c_sym(), vac_sym()
            f = f_pair(curve, i, j)
            raw = self.tpf.raw_times_p(i, j)
            val = raw - f * f * (c * vac / 32) - f * (self.opf.polynomial(i) + self.opf.polynomial(j)) / 16
            self._cache[key] = val
        return self._cache[key]

    def __call__(self, P: frozenset, T: frozenset) -> GaloisElement:
        curve, opf = self.curve, self.opf
        P, T = tuple(sorted(P)), tuple(sorted(T))
        if not P and not T:
            return GaloisElement.from_poly(curve, vac_sym())
        if not P and len(T) == 1:
            return opf.p_times(T[0])
        if len(P) == 1 and not T:
            return opf.polynomial(P[0]) / 4
        if not P and len(T) == 2:
            return self.tt_regular(*T)
        if len(P) == 1 and len(T) == 1:
            k, l = P[0], T[0]
            dp = curve.derivative(f"x{k}")
            schwarz = GaloisElement.from_poly(curve, dp * dp * c_sym() / 32) * GaloisElement.inv_p(curve, k)
            return self.tt_regular(min(k, l), max(k, l)) - schwarz * opf.p_times(l)
        raise KeyError((P, T))


def graph_sum(n: int, curve: CurveSpec, r_oracle: ROracle, skip_empty: bool = True) -> GaloisElement:
    total = GaloisElement(curve)
    for g in enumerate_graphs(n):
        if skip_empty and not g.edges:
            continue
        total = total + assemble_F(g, curve, r_oracle)
    return total


def graph_sum_equivalence(n: int, direct_raw: GaloisElement, r_oracle: ROracle) -> CorrelatorReport:
    """``sum_{Gamma != Gamma_0} F(Gamma) - <T...T> p...p`` has no poles on any diagonal."""
    curve = direct_raw.curve
    rep = CorrelatorReport(f"graph-sum equivalence, N={n}", curve.describe())
    diff = graph_sum(n, curve, r_oracle) - direct_raw
    for i, j in itertools.combinations(range(1, n + 1), 2):
        s = diagonal_series(diff, i, j, order=-1)
        pp = s.principal_part()
        rep.add(f"x{i} -> x{j}: empty principal part", not pp, "" if not pp else f"orders {sorted(pp)} remain")
    return rep
