import json
import random

import pytest

from kcrystals import graph as graphmod
from kcrystals.cartan import parse_cartan
from kcrystals.core import TLambda
from kcrystals.graph import explore
from kcrystals.monomial import (ORIGINAL, CMatrix, Monomial, MonomialCrystal, MonomialRule, A_variant,
                                parse_monomial)
from kcrystals.verify import (EXPECTED_FAIL, FAIL, INCONCLUSIVE, MUTATIONS, PASS, CheckReport, KCrystal,
                              all_checks, check_component_is_Blam, check_crystal_axioms, check_normal,
                              check_semi_normal, eps_displayed, exit_code, merge_verdict, phi_map,
                              phi_rank2_morphism_check, random_k_sample, random_lam_seq, recheck_witness,
                              stembridge_check)

A1 = parse_cartan("A1")
A2 = parse_cartan("A2")
B2 = parse_cartan("B2")


def variant_graph(spec, seed, depth=None, c=None):
    c = CMatrix.standard(spec) if c is None else c
    return explore(MonomialCrystal(spec, MonomialRule.variant(c)), [parse_monomial(seed, spec)], depth=depth)


def adjoint():
    return variant_graph(A2, "Y1(0) Y2(0)")


# -- reports ------------------------------------------------------------------------------

def test_report_invariants():
    with pytest.raises(ValueError):
        CheckReport("x", FAIL)
    with pytest.raises(ValueError):
        CheckReport("x", INCONCLUSIVE)
    r = CheckReport("x", FAIL, [{"detail": "d"}])
    assert json.loads(r.dumps())["verdict"] == FAIL


def test_exit_codes():
    p = CheckReport("a", PASS)
    f = CheckReport("b", FAIL, [{"detail": ""}])
    i = CheckReport("c", INCONCLUSIVE, reason="r")
    x = CheckReport("d", EXPECTED_FAIL, [{"detail": ""}])
    assert exit_code([p, x]) == 0
    assert exit_code([p, i, f]) == 1
    assert exit_code([p, i]) == 2
    assert merge_verdict([p, x]) == EXPECTED_FAIL
    assert merge_verdict([p, p]) == PASS


# -- axioms ---------------------------------------------------------------------------------

def test_axioms_vector_rep():
    assert check_crystal_axioms(variant_graph(A2, "Y1(0)")).verdict == PASS


def test_axioms_t_lambda():
    T = TLambda(A2, (1, 1))
    assert check_crystal_axioms(explore(T, [T.element])).verdict == PASS


def test_axioms_bad_example():
    G = explore(MonomialCrystal(A1, ORIGINAL), [parse_monomial("Y(1) Y(2)^-1", A1)])
    r = check_crystal_axioms(G)
    assert r.verdict == EXPECTED_FAIL
    assert {w["axiom"] for w in r.witnesses} == {"inverse"}
    w = r.witnesses[0]
    names = [str(x) for x in w["elements"]]
    assert names == ["Y1(1) Y1(2)^-1", "Y1(2)^-1 Y1(3)^-1", "Y1(0) Y1(3)^-1"]
    assert all(recheck_witness(G, w) for w in r.witnesses)


def test_expected_fail_propagates():
    G = explore(MonomialCrystal(A1, ORIGINAL), [parse_monomial("Y(1) Y(2)^-1", A1)])
    reports = all_checks(G)
    assert reports[0].verdict == EXPECTED_FAIL
    assert FAIL not in {r.verdict for r in reports}
    assert exit_code(reports) == 0


@pytest.mark.parametrize("name", sorted(MUTATIONS))
def test_mutation_witnesses_recheck(name):
    G = MUTATIONS[name](adjoint())
    r = check_crystal_axioms(G)
    for w in r.witnesses:
        assert recheck_witness(G, w)


# -- semi-normality and normality -----------------------------------------------------------

def test_semi_normal_report():
    assert check_semi_normal(variant_graph(A2, "Y1(0)")).verdict == PASS
    r = check_semi_normal(variant_graph(parse_cartan("A1~"), "Y0(0)", depth=5))
    assert r.verdict == INCONCLUSIVE and r.stats["checked"] > 0


def test_normal_examples():
    assert check_normal(adjoint(), A2).verdict == PASS
    assert check_normal(variant_graph(B2, "Y1(0)"), B2).verdict == PASS


def test_normal_detects_deleted_edge():
    r = check_normal(MUTATIONS["edge_deletion"](adjoint()), A2)
    assert r.verdict == FAIL and r.witnesses


# -- B(lam) ---------------------------------------------------------------------------------

def test_blam_vector_rep():
    r = check_component_is_Blam(variant_graph(A2, "Y1(0)"), A2, (1, 0))
    assert r.verdict == PASS and r.stats["weyl_dim"] == 3


def test_blam_original_adjoint():
    G = explore(MonomialCrystal(A2, ORIGINAL), [parse_monomial("Y1(0) Y2(0)")])
    r = check_component_is_Blam(G, A2, (1, 1))
    assert r.verdict == PASS and len(G) == 8
    # PASS implies normal PASS
    assert r.sub("normal").verdict == PASS


def test_blam_wrong_weight():
    r = check_component_is_Blam(variant_graph(A2, "Y1(0)"), A2, (0, 1))
    assert r.verdict == FAIL


def test_blam_affine_inconclusive():
    G = variant_graph(parse_cartan("A1~"), "Y0(0)", depth=5)
    r = check_component_is_Blam(G)
    assert r.verdict == INCONCLUSIVE
    assert r.sub("crystal_axioms").verdict == PASS
    assert r.sub("semi_normal").verdict != FAIL


# -- Stembridge -----------------------------------------------------------------------------

def test_stembridge_examples():
    assert stembridge_check(adjoint(), A2).verdict == PASS
    assert stembridge_check(MUTATIONS["edge_relabel"](adjoint()), A2).verdict == FAIL
    assert stembridge_check(variant_graph(B2, "Y1(0)"), B2).verdict == INCONCLUSIVE


def test_stembridge_a3():
    G = variant_graph(parse_cartan("A3"), "Y1(0) Y3(0)")
    assert len(G) == 15
    assert stembridge_check(G).verdict == PASS


# -- the map Phi ------------------------------------------------------------------------------

def test_phi_highest_weight_seed():
    c = CMatrix.parse("1,2:0;2,1:1", A2)
    K = KCrystal(A2, {0: (1, 2)}, -3, 3)
    b = K.element({})
    assert phi_map(A2, c, K, b) == parse_monomial("Y1(0) Y2(0)^2")
    assert [K.eps(i, b) for i in "12"] == [0, 0]
    Mc = MonomialCrystal(A2, MonomialRule.variant(c))
    assert [Mc.eps(i, phi_map(A2, c, K, b)) for i in "12"] == [0, 0]


def test_phi_single_step():
    c = CMatrix.parse("1,2:0;2,1:1", A2)
    K = KCrystal(A2, {}, -3, 3)
    b = K.element({0: (-1, 0)})
    M = phi_map(A2, c, K, b)
    assert M == A_variant(A2, c, "1", 0).inverse()
    # the maximum is reached at n = -1, where the term is -z_1(-1) - 2 z_1(0) = 2
    assert K.eps("1", b) == 2 == eps_displayed(A2, K, b, "1")
    assert MonomialCrystal(A2, MonomialRule.variant(c)).eps("1", M) == 2


def test_phi_needs_the_fixed_c():
    with pytest.raises(ValueError):
        phi_rank2_morphism_check(A2, CMatrix.parse("1,2:1;2,1:0", A2), {}, [])


@pytest.mark.parametrize("name", ["A2", "B2", "C2", "G2"])
def test_phi_random(name):
    spec = parse_cartan(name)
    l1, l2 = spec.labels
    c = CMatrix({(l1, l2): 0, (l2, l1): 1})
    rng = random.Random(7)
    for _ in range(20):
        rep = phi_rank2_morphism_check(spec, c, random_lam_seq(rng), [random_k_sample(rng)])
        assert rep.verdict == PASS, rep.witnesses[:2]


def test_loaded_graph_checks(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(graphmod.dumps(adjoint()))
    G = graphmod.loads(p.read_text())
    assert [r.verdict for r in all_checks(G)] == [PASS, PASS, PASS, PASS]


def test_monomial_constructor_round_trip():
    assert Monomial({("1", 0): 1}) == parse_monomial("Y1(0)")
