import pytest

from hodgecyclic.cyclic_complexes import (Necklace, beta, build_hodge_bicomplex, connes_les,
                                          cyclic_derham, cyclic_hodge, hochschild_hodge,
                                          necklace_canonical)
from hodgecyclic.exact_linear import ONE
from hodgecyclic.free_structures import Letter, Tensor

from . import oracles

e0, f0 = Letter(0, "e", 0), Letter(1, "f", 0)
o1 = Letter(2, "o", 1)


def test_canonical_rotation_of_even_word():
    assert necklace_canonical((f0, e0, e0)) == ((e0, e0, f0), 1)


def test_odd_square_vanishes():
    assert necklace_canonical((o1, o1)) is None
    assert necklace_canonical((o1,)) == ((o1,), 1)
    assert necklace_canonical(()) is None


def test_rotation_past_odd_letter_is_signed():
    w, s = necklace_canonical((o1, e0, o1, f0))
    assert w == (e0, o1, f0, o1) and s == -1


def test_necklace_identifies_rotations():
    assert Necklace({(e0, f0): 1}) == Necklace({(f0, e0): 1})
    assert Necklace({(e0, f0): 1}) - Necklace({(f0, e0): 1}) == 0


def test_derham_then_beta_is_a_commutator_sum():
    # beta(dr x) lands in [R, R], so its cyclic image vanishes
    for w in [(e0, f0, e0), (o1, e0, f0), (o1, o1, e0)]:
        b = beta(cyclic_derham(Tensor.word(w)))
        assert Necklace(b.terms) == 0


@pytest.mark.parametrize("p", range(0, 5))
def test_abelian_one_dimensional(ab1, p):
    hh = hochschild_hodge(ab1.R, p, 2)
    hc = cyclic_hodge(ab1.R, p, 2)
    for n in range(3):
        assert hh.dims[n] == oracles.abelian_hh(1, p, n)
        assert hc.dims[n] == oracles.abelian_hc(1, p, n)
        assert hh.safe[n] and hc.safe[n]


@pytest.mark.parametrize("p", range(0, 4))
def test_abelian_plane(ab2, p):
    hh = hochschild_hodge(ab2.R, p, 2, reps=False)
    hc = cyclic_hodge(ab2.R, p, 2, reps=False)
    assert hh.dims == {n: oracles.abelian_hh(2, p, n) for n in range(3)}
    assert hc.dims == {n: oracles.abelian_hc(2, p, n) for n in range(3)}


def sl2_hh(p, n):
    # center k[Casimir] tensored with the cohomology ring of sl2; unit removed
    if p % 2:
        return 0
    return int(n == 3) + int(n == 0 and p > 0)


@pytest.mark.parametrize("p", [0, 1, 2])
def test_sl2_hochschild(sl2, p):
    hh = hochschild_hodge(sl2.R, p, 3, reps=False)
    assert hh.dims == {n: sl2_hh(p, n) for n in range(4)}


def test_hochschild_representatives_are_cycles(ab2):
    hh = hochschild_hodge(ab2.R, 1, 2)
    for g in hh.groups.values():
        for z in g.reps:
            assert g.coords(z)


def test_bicomplex_gate(ab2):
    tc = build_hodge_bicomplex(ab2.R, 2, 2, 5)
    assert tc.homology_dim(0) == oracles.abelian_hc(2, 2, 0)


def test_bicomplex_needs_enough_columns(ab2):
    with pytest.raises(ValueError):
        build_hodge_bicomplex(ab2.R, 1, 3, 5, columns=3)


def test_weight_cap_required_off_diagonal(s2):
    with pytest.raises(ValueError):
        hochschild_hodge(s2.R, 1, 2)


@pytest.mark.parametrize("name,p", [("ab1", 0), ("ab1", 1), ("ab2", 0), ("ab2", 1), ("ab2", 2)])
def test_connes_sequence_exact(request, name, p):
    spec = request.getfixturevalue(name)
    rep = connes_les(spec.R, p, 3, p + 4)
    assert all(rep.safe.values())
    assert rep.exact


def test_weight_zero_degenerates(ab2):
    rep = connes_les(ab2.R, 0, 3, 4)
    assert all(v == 0 for v in rep.dims["HC"].values())
    for n in range(1, 4):
        assert rep.dims["HH"][n] == rep.dims["HC+1"][n - 1]


def test_scaled_necklace():
    n = Necklace({(e0, f0): 1})
    assert (2 * n).terms == {(e0, f0): 2 * ONE}
