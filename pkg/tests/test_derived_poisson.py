import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgecyclic.cyclic_complexes import Necklace, OneForm, necklace_canonical
from hodgecyclic.derived_poisson import (UNIT, CyclicPairing, HomologyBrackets, PairingError,
                                         bracket_gates, bracket_r, chain_filtration_check,
                                         conjecture_probe, filtration_report, poisson_for,
                                         volume_pairing)
from hodgecyclic.exact_linear import ONE, scalar, vadd
from hodgecyclic.free_structures import Tensor, word_degree, word_weight

from . import oracles

FIXTURES = ["necklace", "ab1", "ab2", "sl2", "s2"]


# ---- pairings ----------------------------------------------------------------

def test_volume_pairing_on_plane(ab2):
    P = volume_pairing(ab2.coalgebra)
    assert P.degree == -2
    assert P(UNIT, "x^y") == 1 and P("x", "y") == 1 and P("y", "x") == -1
    assert P.nondegenerate()


def test_volume_pairing_of_sl2_is_ad_invariant(sl2):
    P = volume_pairing(sl2.coalgebra)
    assert P("e", "f^h") == 1 and P("f", "e^h") == -1 and P("h", "e^f") == 1


def test_degree_mismatch_is_reported(ab2):
    with pytest.raises(PairingError) as err:
        CyclicPairing(ab2.coalgebra, {(UNIT, "x"): 1}, -2)
    assert err.value.axiom == "degree"


def test_symmetry_conflict(ab2):
    with pytest.raises(PairingError) as err:
        CyclicPairing(ab2.coalgebra, {("x", "y"): 1, ("y", "x"): 1}, -2)
    assert err.value.axiom == "symmetry"


def test_cyclicity_failure(ab2):
    # pairing the degree-one letters alone breaks cyclicity against the unit
    with pytest.raises(PairingError):
        CyclicPairing(ab2.coalgebra, {("x", "y"): 1}, -2)


def test_nondegeneracy_required_for_poincare(ab2):
    with pytest.raises(PairingError) as err:
        CyclicPairing(ab2.coalgebra, {}, -2, poincare=True)
    assert err.value.axiom == "nondegeneracy"


def test_unknown_label(ab2):
    with pytest.raises(PairingError):
        CyclicPairing(ab2.coalgebra, {("x", "q"): 1}, -2)


# ---- brackets on words over two degree-0 letters ---------------------------------

cyclic_words = st.lists(st.sampled_from("vw"), min_size=1, max_size=5).map(tuple)


def to_letters(spec, w):
    return tuple(spec.letter(c) for c in w)


@settings(max_examples=150, deadline=None)
@given(cyclic_words, cyclic_words)
def test_necklace_bracket_against_oracle(necklace, a, b):
    dp = poisson_for(necklace.R, necklace.pairing)
    omega = {(x, y): int(necklace.pairing(x, y)) for x in "vw" for y in "vw"}
    want = oracles.necklace_bracket(a, b, omega)
    got = dp.necklace_bracket({to_letters(necklace, a): ONE}, {to_letters(necklace, b): ONE})
    have = {}
    for u, c in got.terms.items():
        have[oracles.rotate_min(tuple(x.id for x in u))] = c
    assert have == {w: scalar(c) for w, c in want.items()}


def test_single_letter_double_bracket(necklace):
    dp = poisson_for(necklace.R, necklace.pairing)
    v, w = necklace.letter("v"), necklace.letter("w")
    assert dp.double_bracket({(v,): ONE}, {(w,): ONE}) == {((), ()): 1}
    assert dp.double_bracket({(v,): ONE}, {(v,): ONE}) == {}


def test_unit_brackets_to_zero(ab2):
    dp = poisson_for(ab2.R, ab2.pairing)
    x = ab2.letter("x")
    assert dp.double_bracket({(x,): ONE}, {(): ONE}) == {}


def test_double_bracket_term_count(necklace):
    # three v's against three w's: one term per letter pair
    dp = poisson_for(necklace.R, necklace.pairing)
    v, w = necklace.letter("v"), necklace.letter("w")
    db = dp.double_bracket({(v, v, v): ONE}, {(w, w, w): ONE})
    assert sum(abs(int(c)) for c in db.values()) == 9


def test_double_bracket_degree(ab2):
    dp = poisson_for(ab2.R, ab2.pairing)
    letters = ab2.R.letters
    rng = random.Random(1)
    for _ in range(100):
        u = tuple(rng.choice(letters) for _ in range(rng.randint(1, 3)))
        w = tuple(rng.choice(letters) for _ in range(rng.randint(1, 3)))
        for (l, r) in dp.double_word(u, w):
            assert word_degree(l) + word_degree(r) == word_degree(u) + word_degree(w) + dp.N


def test_letter_brackets_itself_to_zero(necklace):
    dp = poisson_for(necklace.R, necklace.pairing)
    v = necklace.letter("v")
    assert not dp.necklace_bracket({(v,): ONE}, {(v,): ONE})


@pytest.mark.parametrize("name", FIXTURES)
def test_bracket_is_well_defined_on_necklaces(request, name):
    spec = request.getfixturevalue(name)
    dp = poisson_for(spec.R, spec.pairing)
    rng = random.Random(2)
    letters = spec.R.letters
    for _ in range(60):
        u = tuple(rng.choice(letters) for _ in range(rng.randint(1, 3)))
        w = tuple(rng.choice(letters) for _ in range(rng.randint(1, 3)))
        cu = necklace_canonical(u)
        if cu is None:
            continue
        k = rng.randrange(len(u))
        rot = u[k:] + u[:k]
        s = (-1) ** (word_degree(u[:k]) * word_degree(u[k:]))
        lhs = dp.necklace_bracket({u: ONE}, {w: ONE})
        rhs = dp.necklace_bracket({rot: scalar(s)}, {w: ONE})
        assert lhs == rhs


def concat(vec: dict, word, left: bool) -> dict:
    return {(word + u if left else u + word): c for u, c in vec.items()}


@pytest.mark.parametrize("name", FIXTURES)
def test_bracket_is_a_derivation(request, name):
    spec = request.getfixturevalue(name)
    dp = poisson_for(spec.R, spec.pairing)
    rng = random.Random(5)
    letters = spec.R.letters
    for _ in range(150):
        x, a, b = (tuple(rng.choice(letters) for _ in range(rng.randint(1, 2))) for _ in range(3))
        lhs = dp.bracket({x: ONE}, {a + b: ONE}).terms
        rhs = concat(dp.bracket({x: ONE}, {a: ONE}).terms, b, left=False)
        s = (-1) ** ((word_degree(x) + dp.N) * word_degree(a))
        vadd(rhs, concat(dp.bracket({x: ONE}, {b: ONE}).terms, a, left=True), s)
        assert lhs == rhs


def test_linear_necklaces_bracket_to_constants(sl2):
    # a single letter against a single letter gives a scalar
    dp = poisson_for(sl2.R, sl2.pairing)
    for a in sl2.R.letters:
        for b in sl2.R.letters:
            val = dp.bracket({(a,): ONE}, {(b,): ONE}).terms
            assert set(val) <= {()}


@pytest.mark.parametrize("name", FIXTURES)
def test_forms_are_a_module(request, name):
    spec = request.getfixturevalue(name)
    dp = poisson_for(spec.R, spec.pairing)
    rng = random.Random(7)
    letters = spec.R.letters
    N = dp.N
    for _ in range(80):
        a = tuple(rng.choice(letters) for _ in range(rng.randint(1, 2)))
        b = tuple(rng.choice(letters) for _ in range(rng.randint(1, 2)))
        q = tuple(rng.choice(letters) for _ in range(rng.randint(0, 2)))
        f = OneForm._raw({(q, rng.choice(letters)): ONE})
        na, nb = {a: ONE}, {b: ONE}
        s = (-1) ** ((word_degree(a) + N) * (word_degree(b) + N))
        lhs = dp.bracket_on_forms(na, dp.bracket_on_forms(nb, f)) \
            - dp.bracket_on_forms(nb, dp.bracket_on_forms(na, f)).scale(s)
        rhs = dp.bracket_on_forms(dp.necklace_bracket(na, nb).terms, f)
        assert lhs == rhs


def test_hodge_profile_sums_to_value(necklace):
    v, w = necklace.letter("v"), necklace.letter("w")
    res = bracket_r({(v, v, w): ONE}, {(w, v): ONE}, necklace.pairing, necklace.R)
    assert res.consistent()


# ---- gates and filtrations ---------------------------------------------------------

@pytest.mark.parametrize("name,weight", [("necklace", 4), ("ab1", 4), ("ab2", 4), ("sl2", 3),
                                         ("s2", 4)])
def test_lie_gates(request, name, weight):
    spec = request.getfixturevalue(name)
    rep = bracket_gates(spec.R, spec.pairing, weight)
    assert rep.checked["antisymmetry"] > 0
    assert rep.ok, rep.failures


@pytest.mark.parametrize("name", ["necklace", "ab2", "s2"])
def test_chain_level_filtration(request, name):
    spec = request.getfixturevalue(name)
    rep = chain_filtration_check(spec.R, spec.pairing, 4)
    assert rep.checked["R"] > 0 and rep.checked["forms"] > 0
    assert rep.ok, rep.failures


def test_homology_filtration_on_plane(ab2):
    hb = HomologyBrackets(ab2.R, ab2.pairing, 2)
    for p in range(4):
        assert {n: len(c) for n, c in hb.classes(p).items()} == {
            n: oracles.abelian_hc(2, p, n) for n in range(3)}
    for p in range(1, 4):
        for q in range(1, 4):
            rep = filtration_report(hb, p, q)
            assert rep.ok and rep.graded


@pytest.mark.parametrize("name,degree,weight", [("necklace", 1, 5), ("ab1", 3, None),
                                                 ("ab2", 3, None), ("sl2", 3, None), ("s2", 4, 6)])
def test_weight_one_classes_commute(request, name, degree, weight):
    spec = request.getfixturevalue(name)
    rep = filtration_report(HomologyBrackets(spec.R, spec.pairing, degree, weight), 1, 1)
    assert rep.entries and rep.ok
    assert not any(e.classes for e in rep.entries)


def perturbation_failures(hb, max_p: int, seed: int) -> tuple:
    """Compare bracket classes before and after adding boundaries to the first argument."""
    rng = random.Random(seed)
    N = hb.dp.N
    checked = bad = 0
    for p in range(1, max_p + 1):
        for q in range(1, max_p + 1):
            A, B = hb.classes(p), hb.classes(q)
            for a, ca in A.items():
                for b, cb in B.items():
                    m = a + b + N
                    if m < 0:
                        continue
                    for x in ca:
                        wt = max(word_weight(u) for u in x)
                        nc, _ = hb.necklace_complex(p, a + 1, wt)
                        chains = [v for vs in nc.chains(a + 1).values() for v in vs]
                        pert = dict(x)
                        for v in rng.sample(chains, min(3, len(chains))):
                            vadd(pert, nc.d(v), scalar(rng.randint(1, 3)))
                        for y in cb:
                            v0 = hb.dp.necklace_bracket(x, y).terms
                            v1 = hb.dp.necklace_bracket(pert, y).terms
                            c0 = {r: c for r, (c, _) in hb.classify(v0, m).items() if c} if v0 else {}
                            c1 = {r: c for r, (c, _) in hb.classify(v1, m).items() if c} if v1 else {}
                            checked += 1
                            bad += c0 != c1
    return checked, bad


def test_bracket_classes_ignore_boundaries(ab2):
    checked, bad = perturbation_failures(HomologyBrackets(ab2.R, ab2.pairing, 2), 3, 3)
    assert checked > 100 and bad == 0


def test_bracket_classes_ignore_boundaries_necklace(necklace):
    checked, bad = perturbation_failures(HomologyBrackets(necklace.R, necklace.pairing, 1, 5), 3, 3)
    assert checked > 100 and bad == 0


def test_probe_on_sphere(s2):
    rows = conjecture_probe(s2.R, s2.pairing, 3, 4, 6)
    assert len(rows) == 9
    assert all(r.consistent for r in rows)
    assert {r.verdict for r in rows} <= {"zero", "graded"}


def test_probe_rejects_degenerate_pairing(ab2):
    P = CyclicPairing(ab2.coalgebra, {(UNIT, "x^y"): 1, ("x", "y"): 1}, -2)
    assert P.nondegenerate()
    degenerate = CyclicPairing(ab2.coalgebra, {}, -2)
    with pytest.raises(PairingError):
        conjecture_probe(ab2.R, degenerate, 1, 1)


def test_necklace_zero_comparison():
    assert Necklace() == 0 and not Tensor()
