from math import comb

import pytest

from hodgecyclic.kassel_route import (KasselModel, all_equal, cross_validate, derham_map,
                                      hc_via_kernel, hh_via_coefficients, mixed_complex_check,
                                      row_exactness)
from hodgecyclic.koszul_models import LieAlgebraSpec, ModelError

from . import oracles
from .conftest import abelian, sl2_algebra


def affine_line():
    # the two-dimensional nonabelian Lie algebra [a, b] = b
    return LieAlgebraSpec(["a", "b"], {"a": 0, "b": 0}, {("a", "b"): {"b": 1}})


@pytest.mark.parametrize("make", [sl2_algebra, affine_line, lambda: abelian(3)])
def test_mixed_complex(make):
    rep = mixed_complex_check(KasselModel(make()), 3)
    assert rep.ok, rep


def test_rows_are_exact_in_positive_weight():
    defects = row_exactness(KasselModel(sl2_algebra()), 4)
    assert defects and all(v == 0 for v in defects.values())


def test_abelian_boundary_vanishes():
    m = KasselModel(abelian(2))
    for p in range(3):
        for labs in m.space(p).basis.values():
            assert all(not m.delta(lab) for lab in labs)


@pytest.mark.parametrize("p", range(4))
def test_abelian_dims(p):
    for d in (1, 2, 3):
        a = abelian(d)
        hh = hh_via_coefficients(a, p, d)
        assert hh == {n: comb(d + p - 1, p) * comb(d, n) for n in range(d + 1)}
        if p:
            assert hc_via_kernel(a, p, d - 1) == {n: oracles.abelian_hc(d, p, n) for n in range(d)}


def test_sl2_weight_one_cyclic():
    assert hc_via_kernel(sl2_algebra(), 1, 3) == {0: 0, 1: 0, 2: 1, 3: 0}


def test_sl2_hochschild_in_weight_two():
    # Sym^2 sl2 = trivial + five-dimensional; the trivial summand gives H_0 and H_3
    assert hh_via_coefficients(sl2_algebra(), 2, 3) == {0: 1, 1: 0, 2: 0, 3: 1}


def test_derham_needs_positive_weight():
    with pytest.raises(ValueError):
        derham_map(sl2_algebra(), 0)


def test_graded_input_rejected():
    g = LieAlgebraSpec(["x", "z"], {"x": 1, "z": 2}, {("x", "x"): {"z": 1}})
    with pytest.raises(ModelError):
        KasselModel(g)


@pytest.mark.parametrize("make,top", [(lambda: abelian(1), 4), (lambda: abelian(2), 3),
                                      (sl2_algebra, 2), (affine_line, 3)])
def test_routes_agree(make, top):
    rows = cross_validate(make(), range(top + 1), 2)
    assert all(r.safe for r in rows)
    assert all_equal(rows), [r for r in rows if not r.equal]
