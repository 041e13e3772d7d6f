import pytest
from hypothesis import given, settings, strategies as st

from hypervir.correlators_three import build_three_point
from hypervir.correlators_two import build_two_point, f_pair
from hypervir.exact_algebra import Poly
from hypervir.field_element import GaloisElement
from hypervir.graph_expansion import (
    DirectBrackets,
    Digraph,
    GraphError,
    assemble_F,
    brute_force_count,
    classify,
    decomposition_report,
    enumerate_graphs,
    export_graphs,
    graph_sum_equivalence,
    loop_count,
    partial_injection_count,
)

C = Poly.var("c")


def placeholder(curve):
    def oracle(P, T):
        name = "r_P" + "".join(map(str, sorted(P))) + "_T" + "".join(map(str, sorted(T)))
        return GaloisElement.from_poly(curve, Poly.var(name))
    return oracle


def factorizing(curve):
    def oracle(P, T):
        out = Poly.const(1)
        for k in P:
            out = out * Poly.var(f"a{k}")
        for k in T:
            out = out * Poly.var(f"b{k}")
        return GaloisElement.from_poly(curve, out)
    return oracle


def same(a, b):
    return (a - b).is_zero()


# enumeration ----------------------------------------------------------------

@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 18)])
def test_small_counts_match_brute_force(n, count):
    assert len(enumerate_graphs(n)) == count == brute_force_count(n)


@pytest.mark.parametrize("n, count", [(4, 108), (5, 780)])
def test_larger_counts_match_partial_injections(n, count):
    assert len(enumerate_graphs(n)) == count == partial_injection_count(n)


def test_brute_force_four():
    assert brute_force_count(4) == partial_injection_count(4)


def test_two_point_graphs():
    assert [g.edges for g in enumerate_graphs(2)] == [(), ((1, 2),), ((2, 1),), ((1, 2), (2, 1))]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_degree_constraints_and_order(n):
    graphs = enumerate_graphs(n)
    assert len(set(graphs)) == len(graphs)
    for g in graphs:
        tails = [i for i, _ in g.edges]
        heads = [j for _, j in g.edges]
        assert len(set(tails)) == len(tails) and len(set(heads)) == len(heads)
        assert all(i != j for i, j in g.edges)
    keys = [(len(g.edges), g.edges) for g in graphs]
    assert keys == sorted(keys)


def test_invalid_digraphs():
    with pytest.raises(ValueError):
        Digraph.make([1, 2], [(1, 1)])
    with pytest.raises(ValueError):
        Digraph.make([1, 2, 3], [(1, 2), (1, 3)])
    with pytest.raises(ValueError):
        Digraph.make([1, 2], [(1, 3)])


@pytest.mark.parametrize(
    "edges, loops",
    [([(1, 2), (2, 1)], 1), ([(1, 2), (2, 3), (3, 1)], 1), ([], 0), ([(1, 2), (2, 3)], 0)],
)
def test_loop_count(edges, loops):
    assert loop_count(Digraph.make([1, 2, 3], edges)) == loops


@settings(max_examples=30)
@given(st.permutations([1, 2, 3, 4, 5]))
def test_permutation_loops_are_cycles(perm):
    # drop fixed points; loops are then the cycles of length >= 2
    edges = [(i + 1, v) for i, v in enumerate(perm) if v != i + 1]
    seen, cycles = set(), 0
    for start in range(1, 6):
        if start in seen or perm[start - 1] == start:
            continue
        cycles += 1
        v = start
        while v not in seen:
            seen.add(v)
            v = perm[v - 1]
    assert loop_count(Digraph.make(range(1, 6), edges)) == cycles


def test_export_format():
    text = export_graphs(enumerate_graphs(2))
    assert text.splitlines() == ["(none) | loops=0", "1->2 | loops=0", "2->1 | loops=0", "1->2,2->1 | loops=1"]


# decomposition --------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4])
def test_decomposition(n):
    assert decomposition_report(n).passed


def test_classify():
    assert classify(Digraph.make([1, 2, 3], [(1, 2), (2, 1)])) == "loop"
    assert classify(Digraph.make([1, 2, 3], [(1, 2)])) == "a->b"
    assert classify(Digraph.make([1, 2, 3], [(2, 1)])) == "b->a"
    assert classify(Digraph.make([1, 2, 3], [(1, 3)])) == "apart"


# weights ----------------------------------------------------------------------

def test_F_two_point_examples(quintic):
    r = placeholder(quintic)
    f12 = f_pair(quintic, 1, 2)
    g0, g12, g21, loop = enumerate_graphs(2)
    assert same(assemble_F(g0, quintic, r), r(frozenset(), frozenset({1, 2})))
    assert same(assemble_F(g12, quintic, r), f12 * r(frozenset({1}), frozenset()) / 4)
    assert same(assemble_F(g21, quintic, r), f12 * r(frozenset({2}), frozenset()) / 4)
    assert same(assemble_F(loop, quintic, r), f12 * f12 * r(frozenset(), frozenset()) * (C / 32))


def test_F_three_cycle(quintic):
    r = placeholder(quintic)
    g = Digraph.make([1, 2, 3], [(1, 2), (2, 3), (3, 1)])
    f = f_pair(quintic, 1, 2) * f_pair(quintic, 2, 3) * f_pair(quintic, 1, 3)
    assert same(assemble_F(g, quintic, r), f * r(frozenset(), frozenset()) * (C / 128))


def test_F_multiplicative(quintic):
    r = factorizing(quintic)
    for g in enumerate_graphs(4):
        if any({i, j} & {1, 2} and {i, j} & {3, 4} for i, j in g.edges):
            continue
        left = Digraph.make([1, 2], [e for e in g.edges if e[0] in (1, 2)])
        right = Digraph.make([3, 4], [e for e in g.edges if e[0] in (3, 4)])
        assert same(assemble_F(g, quintic, r), assemble_F(left, quintic, r) * assemble_F(right, quintic, r))


def test_missing_bracket_raises(quintic):
    def oracle(P, T):
        raise KeyError((P, T))
    with pytest.raises(GraphError):
        assemble_F(enumerate_graphs(2)[0], quintic, oracle)


# equivalence with the direct construction -------------------------------------

@pytest.mark.parametrize("which", ["cubic", "quintic"])
def test_equivalence_two_points(which, request):
    curve = request.getfixturevalue(which)
    tpf = build_two_point(curve)
    rep = graph_sum_equivalence(2, tpf.raw_times_p(1, 2), DirectBrackets(tpf.opf, tpf))
    assert rep.passed, rep.render()


def test_equivalence_three_points_cubic(cubic):
    tpf = build_two_point(cubic)
    th = build_three_point(cubic, tpf)
    assert graph_sum_equivalence(3, th.raw_times_p(), DirectBrackets(tpf.opf, tpf)).passed


def test_equivalence_detects_a_wrong_bracket(quintic):
    tpf = build_two_point(quintic)
    good = DirectBrackets(tpf.opf, tpf)

    def bad(P, T):
        out = good(P, T)
        return out * 2 if len(P) == 1 and not T else out

    assert not graph_sum_equivalence(2, tpf.raw_times_p(1, 2), bad).passed
