from collections import Counter
from itertools import product

import pytest
from hypothesis import given, strategies as st

from k3rm.errors import NotACharacter, RankMismatch
from k3rm.spinbranch import (
    WeightMultiset, decompose_sl2k, outer, recompose, restrict_to_product, sl2k_irrep, spin_branching,
    spin_module, spin_weights, sym2, tensor, trivial, wedge2,
)

CASES = [(m, n) for m in range(2, 13) for n in range(1, 13) if n * m <= 12 and n * m >= 2]


def V(*a):
    return sl2k_irrep(a)


@pytest.mark.parametrize("m,n", CASES)
def test_branching_identity(m, n):
    c = spin_branching(m, n)
    assert c.ok
    total, mult, base = c.dims
    assert total == 2 ** (n * m // 2)
    nprime = n // 2 if m % 2 else 0
    assert mult == 2**nprime
    assert base == (2 ** (m // 2)) ** n
    assert total == mult * base


def test_paper_cases():
    c = spin_branching(3, 2)
    assert c.dims == (8, 2, 4)
    assert all(k == 2 for _, k in c.restricted.weights) and len(c.restricted.weights) == 4
    c = spin_branching(3, 3)
    assert c.dims == (16, 2, 8)
    assert all(k == 2 for _, k in c.restricted.weights) and len(c.restricted.weights) == 8
    assert spin_branching(2, 2).dims == (4, 1, 4)


def test_spin_weights():
    plus, minus = spin_weights(6)
    S6 = plus + minus
    assert S6.dim == 8
    assert set(S6.counter()) == set(product((1, -1), repeat=3))
    S3 = spin_weights(3)
    assert S3.counter() == Counter({(1,): 1, (-1,): 1})
    assert spin_module(3) == V(1)


def test_small_decompositions():
    VV = outer(V(1), V(1))
    assert VV == V(1, 1)
    assert decompose_sl2k(sym2(VV)) == [((2, 2), 1), ((0, 0), 1)]
    assert sym2(VV).dim == 10
    assert sorted(decompose_sl2k(wedge2(VV))) == [((0, 2), 1), ((2, 0), 1)]
    assert wedge2(VV).dim == 6
    assert sorted(decompose_sl2k(tensor(V(1), V(1)))) == [((0,), 1), ((2,), 1)]


def test_weight_two_part_of_abelian_surface_type():
    W = V(1, 1) * 2
    parts = dict(decompose_sl2k(wedge2(W)))
    assert parts == {(2, 2): 1, (2, 0): 3, (0, 2): 3, (0, 0): 1}
    assert wedge2(W).dim == 28
    assert parts[(0, 0)] == 1


hw = st.lists(st.integers(0, 3), min_size=1, max_size=3)


@st.composite
def characters(draw):
    k = draw(st.integers(1, 3))
    parts = draw(st.lists(st.tuples(st.lists(st.integers(0, 3), min_size=k, max_size=k).map(tuple),
                                    st.integers(1, 3)), min_size=1, max_size=4))
    return k, parts


@given(characters())
def test_decompose_recompose(data):
    k, parts = data
    W = recompose(k, parts)
    got = decompose_sl2k(W)
    assert recompose(k, got) == W
    expected = Counter()
    for h, mult in parts:
        expected[h] += mult
    assert dict(got) == dict(expected)


@given(characters())
def test_wedge_plus_sym_is_tensor(data):
    k, parts = data
    W = recompose(k, parts)
    assert wedge2(W) + sym2(W) == tensor(W, W)
    assert wedge2(W).dim == W.dim * (W.dim - 1) // 2


@given(st.integers(2, 12))
def test_spin_module_symmetric(N):
    S = spin_module(N)
    assert S.dim == 2 ** (N // 2)
    assert S.is_negation_symmetric()


def test_errors():
    with pytest.raises(RankMismatch):
        WeightMultiset(2, {(1,): 1})
    with pytest.raises(RankMismatch):
        restrict_to_product(spin_module(6), 2, 2)
    with pytest.raises(RankMismatch):
        V(1) + V(1, 1)
    with pytest.raises(NotACharacter):
        decompose_sl2k(WeightMultiset(1, {(1,): 1}))
    with pytest.raises(NotACharacter):
        decompose_sl2k(WeightMultiset(1, {(2,): 1, (-2,): 1}))
    with pytest.raises(NotACharacter):
        sl2k_irrep((-1,))


def test_serialization():
    W = wedge2(V(1, 1))
    assert WeightMultiset.from_json(W.to_json()) == W
    assert trivial(2).to_json() == [{"weight": [0, 0], "mult": 1}]
