import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgecyclic.exact_linear import ONE, rank, vadd
from hodgecyclic.free_structures import (Letter, Tensor, act, bracketing, commutator, cyclic_norm,
                                         descents, embed_fixing_first, eulerian_idempotent,
                                         group_product, hodge_component, is_lie, koszul_sign,
                                         lyndon_basis, lyndon_words, pbw_decompose, reorder_sign,
                                         sym_dimension, symmetrize, words_by_weight)

from . import oracles

a, b = Letter(0, "a", 0), Letter(1, "b", 0)
x, y = Letter(0, "x", 1), Letter(1, "y", 0)
z = Letter(2, "z", 1, 2)

words = st.lists(st.sampled_from([x, y, z]), min_size=1, max_size=4).map(tuple)


def test_koszul_sign_of_two_odd_letters():
    assert reorder_sign([1, 1], [1, 0]) == -1
    assert reorder_sign([1, 0], [1, 0]) == 1
    assert koszul_sign([1, 0], [1, 1]) == -1


@settings(max_examples=80, deadline=None)
@given(st.permutations(range(4)), st.lists(st.integers(0, 1), min_size=4, max_size=4))
def test_reorder_sign_counts_odd_inversions(order, degs):
    inv = sum(1 for i, j in itertools.combinations(range(4), 2)
              if order[i] > order[j] and degs[order[i]] & 1 and degs[order[j]] & 1)
    assert reorder_sign(degs, list(order)) == (-1) ** inv


def test_act_on_words_carries_signs():
    w, s = act((x, y, x), (2, 1, 0))
    assert w == (x, y, x) and s == -1


def test_commutator_is_graded():
    assert commutator(Tensor.word((x,)), Tensor.word((x,))) == Tensor.word((x, x), 2)
    assert commutator(Tensor.word((y,)), Tensor.word((y,))) == 0


def test_lyndon_words_against_brute_force():
    for n in range(1, 7):
        got = [w for w in lyndon_words([a, b], n) if len(w) == n]
        assert len(got) == oracles.lyndon_count(2, n)


@pytest.mark.parametrize("n", range(1, 7))
def test_witt_formula(n):
    assert len(lyndon_basis([a, b], n)) == oracles.witt(2, n)


def test_bracketing_is_lie():
    for n in range(1, 5):
        for t in lyndon_basis([x, y, z], n):
            assert is_lie(t)


@pytest.mark.parametrize("n", range(1, 6))
def test_first_eulerian_idempotent_closed_form(n):
    e = eulerian_idempotent(n, 1)
    want = oracles.first_eulerian(n)
    assert {s: (int(c.numerator), int(c.denominator)) for s, c in e.items()} == \
        {s: (c.numerator, c.denominator) for s, c in want.items() if c}


@pytest.mark.parametrize("n", range(1, 6))
def test_eulerian_relations(n):
    es = [eulerian_idempotent(n, p) for p in range(1, n + 1)]
    tot: dict = {}
    for e in es:
        vadd(tot, e)
    assert tot == {tuple(range(n)): ONE}
    for i, j in itertools.product(range(n), repeat=2):
        prod = group_product(es[i], es[j])
        assert prod == (es[i] if i == j else {})
    N = cyclic_norm(n)
    for p in range(1, n + 1):
        lhs = group_product(eulerian_idempotent(n, p), N)
        rhs = group_product(N, embed_fixing_first(eulerian_idempotent(n - 1, p - 1)))
        assert lhs == rhs


def test_descents():
    assert descents((0, 1, 2)) == 0 and descents((2, 1, 0)) == 2


@settings(max_examples=60, deadline=None)
@given(words)
def test_pbw_components_sum_to_word(w):
    t = Tensor.word(w)
    total = Tensor()
    for comp in pbw_decompose(t).values():
        total = total + comp
    assert total == t


@settings(max_examples=40, deadline=None)
@given(words)
def test_hodge_components_are_idempotent(w):
    t = Tensor.word(w)
    for p, comp in pbw_decompose(t).items():
        assert hodge_component(comp, p) == comp


def test_symmetrized_lyndon_products_are_eigenvectors():
    lie = lyndon_basis([x, y], 1) + lyndon_basis([x, y], 2)
    for k in (1, 2, 3):
        for factors in itertools.combinations_with_replacement(lie, k):
            s = symmetrize(list(factors))
            if s:
                assert set(pbw_decompose(s)) == {k}


def test_symmetrize_rejects_non_lie():
    with pytest.raises(ValueError):
        symmetrize([Tensor.word((x, y))])


@pytest.mark.parametrize("letters", [[a, b], [x, y], [x, y, z]])
def test_sym_dimension_is_rank_of_projection(letters):
    for n in range(1, 5):
        ws = words_by_weight(letters, n)
        blocks: dict = {}
        for w in ws:
            blocks.setdefault(tuple(sorted(w)), []).append(w)
        for p in range(1, n + 1):
            trace = sum(sym_dimension(bl[0], p) for bl in blocks.values())
            proj = rank(hodge_component(Tensor.word(w), p).terms for w in ws)
            assert trace == proj


@pytest.mark.parametrize("n", range(1, 7))
def test_pbw_dimension_count(n):
    ws = words_by_weight([a, b], n)
    dims = [rank(hodge_component(Tensor.word(w), p).terms for w in ws) for p in range(1, n + 1)]
    assert sum(dims) == 2 ** n
    assert dims[0] == oracles.witt(2, n)


def test_bracketing_of_standard_factorization():
    assert bracketing((a, b)) == Tensor({(a, b): 1, (b, a): -1})
