import json

import pytest

from kcrystals import graph as graphmod
from kcrystals.cartan import parse_cartan
from kcrystals.core import ElementaryB, TLambda
from kcrystals.graph import (BudgetExceeded, DisconnectedError, canonical_form, components, explore, hw_elements,
                             is_semi_normal, lw_elements, weight_multiset)
from kcrystals.monomial import ORIGINAL, CMatrix, MonomialCrystal, MonomialRule, parse_monomial

A2 = parse_cartan("A2")


def variant(spec, text=None):
    c = CMatrix.parse(text, spec) if text else CMatrix.standard(spec)
    return MonomialCrystal(spec, MonomialRule.variant(c))


def test_explore_example_path():
    G = explore(MonomialCrystal(A2, ORIGINAL), [parse_monomial("Y1(0)")])
    labels = [(G.nodes[a].label, i, G.nodes[b].label) for a, i, b in G.edges()]
    assert labels == [("Y1(0)", "1", "Y1(2)^-1 Y2(1)"), ("Y1(2)^-1 Y2(1)", "2", "Y2(3)^-1")]
    assert not G.truncated


def test_explore_t_lambda():
    T = TLambda(A2, (1, 0))
    G = explore(T, [T.element])
    assert len(G) == 1 and G.edges() == []
    assert hw_elements(G) == [T.element]


def test_explore_variant_vector_rep():
    G = explore(variant(A2, "1,2:0;2,1:1"), [parse_monomial("Y1(0)")])
    assert [nd.label for nd in G.nodes.values()] == ["Y1(0)", "Y1(1)^-1 Y2(1)", "Y2(2)^-1"]


def test_explore_depth_and_truncation():
    B = ElementaryB(parse_cartan("A1"), "1")
    G = explore(B, [B.elem(0)], depth=2)
    assert len(G) == 5
    assert G.truncated and G.depth == 2


def test_explore_bfs_order():
    B = ElementaryB(parse_cartan("A1"), "1")
    G = explore(B, [B.elem(0)], depth=2)
    assert [b.n for b in G.nodes] == [0, -1, 1, -2, 2]


def test_explore_directions():
    B = ElementaryB(parse_cartan("A1"), "1")
    assert [b.n for b in explore(B, [B.elem(0)], depth=2, direction="f").nodes] == [0, -1, -2]
    assert [b.n for b in explore(B, [B.elem(0)], depth=2, direction="e").nodes] == [0, 1, 2]
    with pytest.raises(ValueError):
        explore(B, [B.elem(0)], direction="up")


def test_f_only_from_highest_weight_matches_both():
    B = variant(A2)
    seed = parse_monomial("Y1(0) Y2(0)")
    g1 = explore(B, [seed], direction="f")
    g2 = explore(B, [seed])
    assert set(g1.nodes) == set(g2.nodes)
    assert canonical_form(g1, seed) == canonical_form(g2, seed)


def test_budget_exceeded_keeps_partial_graph():
    B = ElementaryB(parse_cartan("A1"), "1")
    with pytest.raises(BudgetExceeded) as exc:
        explore(B, [B.elem(0)], budget=10)
    assert len(exc.value.graph) == 11
    assert exc.value.graph.truncated


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv(graphmod.BUDGET_ENV, "4")
    B = ElementaryB(parse_cartan("A1"), "1")
    with pytest.raises(BudgetExceeded):
        explore(B, [B.elem(0)])


def test_edge_weight_invariant():
    G = explore(variant(A2), [parse_monomial("Y1(0)^2 Y2(0)")])
    for a, i, b in G.edges():
        alpha = A2.root_to_weight(tuple(int(j == i) for j in A2.labels))
        assert G.nodes[b].wt == tuple(x - y for x, y in zip(G.nodes[a].wt, alpha))
        assert G.phi(i, a) == G.phi(i, b) + 1
        assert G.eps(i, b) == G.eps(i, a) + 1


def test_hw_elements_vector_rep():
    G = explore(variant(A2), [parse_monomial("Y2(2)^-1")])
    assert [G.nodes[b].label for b in hw_elements(G)] == ["Y1(0)"]
    assert [G.nodes[b].label for b in lw_elements(G)] == ["Y2(2)^-1"]


def test_hw_elements_adjoint():
    G = explore(variant(A2), [parse_monomial("Y1(0) Y2(0)")])
    tops = hw_elements(G)
    assert len(tops) == 1 and G.nodes[tops[0]].wt == (1, 1)


def test_semi_normal():
    G = explore(variant(A2), [parse_monomial("Y1(0)")])
    assert is_semi_normal(G)
    T = TLambda(A2, (0, 0))
    r = is_semi_normal(explore(T, [T.element]))
    assert r.ok is False


def test_semi_normal_truncated_is_inconclusive():
    B = ElementaryB(parse_cartan("A1"), "1")
    r = is_semi_normal(explore(B, [B.elem(0)], depth=3))
    assert r.ok is None and r.skipped > 0


def test_canonical_form_deterministic():
    B = variant(A2)
    s = parse_monomial("Y1(0) Y2(0)")
    assert canonical_form(explore(B, [s]), s) == canonical_form(explore(B, [s]), s)


def test_canonical_form_c_independent_vector_rep():
    s = parse_monomial("Y1(0)")
    g1 = explore(variant(A2, "1,2:0;2,1:1"), [s])
    g2 = explore(variant(A2, "1,2:1;2,1:0"), [s])
    assert set(g1.nodes) != set(g2.nodes)
    assert canonical_form(g1, s) == canonical_form(g2, s)


def test_canonical_form_distinguishes():
    B = variant(A2)
    g1 = explore(B, [parse_monomial("Y1(0)")])
    g2 = explore(B, [parse_monomial("Y2(0)")])
    assert canonical_form(g1, parse_monomial("Y1(0)")) != canonical_form(g2, parse_monomial("Y2(0)"))


def test_canonical_form_disconnected():
    B = variant(A2)
    G = explore(B, [parse_monomial("Y1(0)"), parse_monomial("Y2(5)")])
    with pytest.raises(DisconnectedError):
        canonical_form(G, parse_monomial("Y1(0)"))
    assert len(components(G)) == 2


def test_restricted_components_are_strings():
    G = explore(variant(A2), [parse_monomial("Y1(0) Y2(0)")])
    comps = components(G, ["1"])
    sizes = sorted(len(c) for c in comps)
    # one 1-string per node killed by e_1
    assert len(comps) == sum(1 for b in G.nodes if G.e("1", b) is None)
    for comp in comps:
        top = [b for b in comp if G.e("1", b) is None][0]
        assert len(comp) == G.phi("1", top) + 1
    assert sum(sizes) == 8


def test_weight_multiset():
    G = explore(variant(A2), [parse_monomial("Y1(0) Y2(0)")])
    assert weight_multiset(G)[(0, 0)] == 2


def test_json_roundtrip():
    B = MonomialCrystal(parse_cartan("A1~"), MonomialRule.variant(CMatrix.standard(parse_cartan("A1~"))))
    s = parse_monomial("Y0(0)")
    G = explore(B, [s], depth=3)
    H = graphmod.loads(graphmod.dumps(G))
    # loaded graphs are keyed by node label
    assert H.sources == ["Y0(0)"]
    assert canonical_form(H, H.sources[0]) == canonical_form(G, s)
    assert H.truncated and H.spec == G.spec
    doc = json.loads(graphmod.dumps(G))
    assert {"nodes", "edges", "sources", "truncated"} <= set(doc)
    assert set(doc["nodes"][0]) >= {"id", "wt", "eps", "phi", "label"}


def test_json_roundtrip_original_flag():
    A1 = parse_cartan("A1")
    G = explore(MonomialCrystal(A1, ORIGINAL), [parse_monomial("Y(1) Y(2)^-1", A1)])
    assert graphmod.loads(graphmod.dumps(G)).axiom_unsafe


def test_dot_export():
    G = explore(variant(A2), [parse_monomial("Y1(0)")])
    dot = graphmod.to_dot(G)
    assert dot.startswith("digraph")
    assert dot.count("->") == 2
    assert 'label="1"' in dot and "Y1(0)" in dot
