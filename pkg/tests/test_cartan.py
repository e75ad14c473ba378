import itertools
from fractions import Fraction

import pytest

from kcrystals.cartan import (CartanError, CartanSpec, dominant_weights_up_to, freudenthal_multiplicities,
                              highest_root, parse_cartan, positive_roots, simple_root_as_weight, weyl_dim)


# -- independent oracles ------------------------------------------------------

def dim_type_a(lam):
    """Product over intervals [i, j] of (sum of lam_k + 1 over the interval) / length."""
    n = len(lam)
    out = Fraction(1)
    for i in range(n):
        for j in range(i, n):
            out *= Fraction(sum(lam[k] + 1 for k in range(i, j + 1)), j - i + 1)
    return int(out)


def dim_b2(a, b):
    # a on the long node, b on the short node
    return (a + 1) * (b + 1) * (a + b + 2) * (2 * a + b + 3) // 6


def dim_g2(long_, short):
    a, b = short, long_
    return (a + 1) * (b + 1) * (a + b + 2) * (a + 2 * b + 3) * (a + 3 * b + 4) * (2 * a + 3 * b + 5) // 120


def ssyt_weights(lam):
    """Weight multiset of sl_{n+1} irrep from semistandard tableaux, by brute force."""
    n = len(lam) + 1
    rows = [sum(lam[k:]) for k in range(len(lam))]
    cells = [(r, c) for r, length in enumerate(rows) for c in range(length)]
    out = {}

    def fill(k, T):
        if k == len(cells):
            counts = [0] * (n + 1)
            for v in T.values():
                counts[v] += 1
            w = tuple(counts[i] - counts[i + 1] for i in range(1, n))
            out[w] = out.get(w, 0) + 1
            return
        r, c = cells[k]
        lo = 1
        if c > 0:
            lo = max(lo, T[(r, c - 1)])
        if r > 0:
            lo = max(lo, T[(r - 1, c)] + 1)
        for v in range(lo, n + 1):
            T[(r, c)] = v
            fill(k + 1, T)
            del T[(r, c)]

    fill(0, {})
    return out


# -- parsing --------------------------------------------------------------------

def test_parse_a2():
    assert parse_cartan("A2").gcm == ((2, -1), (-1, 2))


def test_parse_affine_a1():
    spec = parse_cartan("A1~")
    assert spec.gcm == ((2, -2), (-2, 2))
    assert spec.labels == ("0", "1")
    assert spec.is_affine


def test_parse_inline_g2_is_finite():
    spec = parse_cartan("[[2,-1],[-3,2]]")
    assert spec.type_tag == "finite"
    assert spec.gcm == parse_cartan("G2").gcm


def test_parse_json_labels():
    spec = parse_cartan('{"labels": ["a", "b"], "gcm": [[2, -1], [-1, 2]]}')
    assert spec.labels == ("a", "b")
    assert spec.pair("a", "b") == -1


@pytest.mark.parametrize("bad", ["Q3", "A0", "[[2,1],[1,2]]", "[[2,-1],[0,2]]", "[[1,0],[0,2]]", "{"])
def test_parse_rejects(bad):
    with pytest.raises((CartanError, ValueError)):
        parse_cartan(bad)


def test_affine_a2_cycle():
    spec = parse_cartan("A2~")
    assert spec.gcm == ((2, -1, -1), (-1, 2, -1), (-1, -1, 2))
    assert spec.is_affine


@pytest.mark.parametrize("name,tag", [("A3", "finite"), ("B3", "finite"), ("C3", "finite"), ("D4", "finite"),
                                      ("G2", "finite"), ("F4", "finite"), ("E6", "finite"),
                                      ("A3~", "affine"), ("B2~", "affine"), ("G2~", "affine"),
                                      ("[[2,-3],[-3,2]]", "other")])
def test_classification(name, tag):
    assert parse_cartan(name).type_tag == tag


def test_symmetrizer_makes_symmetric():
    for name in ["B2", "C3", "G2", "F4", "B3~"]:
        spec = parse_cartan(name)
        d = spec.symmetrizer
        n = spec.rank
        for i in range(n):
            for j in range(n):
                assert d[i] * spec.gcm[i][j] == d[j] * spec.gcm[j][i]
        assert min(d) >= 1


def test_unknown_label():
    with pytest.raises(CartanError):
        parse_cartan("A2").index("7")


# -- roots ----------------------------------------------------------------------

@pytest.mark.parametrize("name,i,want", [("A2", "1", (2, -1)), ("A1~", "0", (2, -2)), ("G2", "2", (-1, 2))])
def test_simple_root_as_weight(name, i, want):
    assert simple_root_as_weight(parse_cartan(name), i) == want


@pytest.mark.parametrize("name,count", [("A1", 1), ("A2", 3), ("B2", 4), ("G2", 6), ("A3", 6), ("B3", 9),
                                        ("D4", 12), ("F4", 24), ("E6", 36)])
def test_positive_root_counts(name, count):
    assert len(positive_roots(parse_cartan(name))) == count


def test_a2_roots_explicit():
    assert set(positive_roots(parse_cartan("A2"))) == {(1, 0), (0, 1), (1, 1)}


def test_roots_built_from_simple_ones():
    for name in ["A3", "B3", "G2", "F4"]:
        spec = parse_cartan(name)
        roots = set(positive_roots(spec))
        for beta in roots:
            if sum(beta) == 1:
                continue
            assert any(tuple(b - (k == j) for k, b in enumerate(beta)) in roots for j in range(spec.rank))


def test_positive_roots_need_finite():
    with pytest.raises(CartanError):
        positive_roots(parse_cartan("A1~"))


def test_simple_root_pairs_to_two():
    for name in ["A3", "B2", "G2", "A2~"]:
        spec = parse_cartan(name)
        for k, i in enumerate(spec.labels):
            assert simple_root_as_weight(spec, i)[k] == 2


def test_highest_root_g2():
    assert highest_root(parse_cartan("G2")) == (2, 3)


# -- dimensions and multiplicities ---------------------------------------------

@pytest.mark.parametrize("lam", [(1, 0), (1, 1), (0, 3), (2, 1)])
def test_weyl_dim_a2(lam):
    assert weyl_dim(parse_cartan("A2"), lam) == dim_type_a(lam)


def test_weyl_dim_examples():
    assert weyl_dim(parse_cartan("A2"), (1, 0)) == 3
    assert weyl_dim(parse_cartan("A2"), (1, 1)) == 8
    assert weyl_dim(parse_cartan("B2"), (0, 1)) == 4


@pytest.mark.parametrize("lam", list(itertools.product(range(3), repeat=3)))
def test_weyl_dim_a3(lam):
    assert weyl_dim(parse_cartan("A3"), lam) == dim_type_a(lam)


@pytest.mark.parametrize("a,b", list(itertools.product(range(4), repeat=2)))
def test_weyl_dim_b2_g2(a, b):
    assert weyl_dim(parse_cartan("B2"), (a, b)) == dim_b2(a, b)
    assert weyl_dim(parse_cartan("G2"), (a, b)) == dim_g2(a, b)


def test_weyl_dim_rejects():
    with pytest.raises(CartanError):
        weyl_dim(parse_cartan("A2"), (-1, 0))
    with pytest.raises(CartanError):
        weyl_dim(parse_cartan("A1~"), (1, 0))


def test_freudenthal_vector_rep():
    spec = parse_cartan("A2")
    assert freudenthal_multiplicities(spec, (1, 0)) == {(1, 0): 1, (-1, 1): 1, (0, -1): 1}


def test_freudenthal_a1():
    assert freudenthal_multiplicities(parse_cartan("A1"), (2,)) == {(2,): 1, (0,): 1, (-2,): 1}


def test_freudenthal_adjoint_zero_weight():
    assert freudenthal_multiplicities(parse_cartan("A2"), (1, 1))[(0, 0)] == 2


@pytest.mark.parametrize("lam", [(1, 1), (2, 0), (2, 1), (0, 3), (2, 2)])
def test_freudenthal_against_tableaux(lam):
    assert freudenthal_multiplicities(parse_cartan("A2"), lam) == ssyt_weights(lam)


@pytest.mark.parametrize("lam", [(1, 0, 1), (0, 2, 0), (1, 1, 0)])
def test_freudenthal_a3_against_tableaux(lam):
    assert freudenthal_multiplicities(parse_cartan("A3"), lam) == ssyt_weights(lam)


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "B2", "C3", "B3", "G2"])
def test_freudenthal_total_is_weyl_dim(name):
    spec = parse_cartan(name)
    for lam in dominant_weights_up_to(spec, 3 if spec.rank <= 2 else 2):
        assert sum(freudenthal_multiplicities(spec, lam).values()) == weyl_dim(spec, lam)


def test_dominant_weights_up_to():
    ws = list(dominant_weights_up_to(parse_cartan("A2"), 1))
    assert sorted(ws) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_spec_invariants():
    with pytest.raises(CartanError):
        CartanSpec(("1", "1"), ((2, -1), (-1, 2)))
    with pytest.raises(CartanError):
        CartanSpec(("1",), ((3,),))
