"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every check is exact (rational arithmetic, zero tolerance).  Run with
``pytest tests/test_acceptance.py -v`` or directly as a script."""
import itertools

import pytest
import sympy as sp

from hodgecyclic.cyclic_complexes import Necklace, connes_les
from hodgecyclic.derived_poisson import (HomologyBrackets, bracket_gates, chain_filtration_check,
                                         conjecture_probe, filtration_report, necklace_bracket)
from hodgecyclic.exact_linear import ONE, rank, vadd
from hodgecyclic.free_structures import (Letter, Tensor, cyclic_norm,
                                         embed_fixing_first, eulerian_idempotent, group_product,
                                         hodge_component, lyndon_basis, pbw_decompose,
                                         words_by_weight)
from hodgecyclic.kassel_route import cross_validate
from hodgecyclic.koszul_models import adams_operation
from hodgecyclic.rep_hom import verify_trace_lie_hom

from . import oracles
from .conftest import load

TOL = 0            # every comparison is exact


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} crit {n}: {detail}")
        assert ok, detail
    return emit


def test_crit01_cubes_bracket(report, necklace):
    v, w = necklace.letter("v"), necklace.letter("w")
    res = necklace_bracket({(v, v, v): ONE}, {(w, w, w): ONE}, necklace.pairing, necklace.R)
    want = Necklace({(v, v, w, w): 9})
    report(1, res.value == want, f"{{[v^3],[w^3]}} = {res.value!r} (want 9*[v,v,w,w])")


def test_crit02_cubes_profile(report, necklace):
    v, w = necklace.letter("v"), necklace.letter("w")
    res = necklace_bracket({(v, v, v): ONE}, {(w, w, w): ONE}, necklace.pairing, necklace.R)
    sup = res.support
    ok = res.consistent() and all(r <= 4 for r in sup) and any(r != 4 for r in sup)
    report(2, ok, f"Hodge support {sup}: within weights <= 4 and not only weight 4")


def test_crit03_chain_filtration(report, necklace):
    rep = chain_filtration_check(necklace.R, necklace.pairing, 6)
    fails = sum(len(v) for v in rep.failures.values())
    report(3, rep.ok, f"{rep.checked['R']} bracket pairs and {rep.checked['forms']} one-form "
                      f"pairs up to weight 6, {fails} failures")


def test_crit04_eulerian(report):
    bad = []
    for n in range(1, 7):
        es = {p: eulerian_idempotent(n, p) for p in range(1, n + 1)}
        total: dict = {}
        for e in es.values():
            vadd(total, e)
        if total != {tuple(range(n)): ONE}:
            bad.append(("completeness", n))
        for p, q in itertools.product(es, repeat=2):
            if group_product(es[p], es[q]) != (es[p] if p == q else {}):
                bad.append(("product", n, p, q))
        N = cyclic_norm(n)
        for p in es:
            lower = embed_fixing_first(eulerian_idempotent(n - 1, p - 1)) if n > 1 else {}
            if n > 1 and group_product(es[p], N) != group_product(N, lower):
                bad.append(("norm", n, p))
    report(4, not bad, f"idempotent, orthogonal, complete and norm-compatible for n <= 6; "
                       f"failures {bad}")


def test_crit05_pbw_witt(report):
    a, b = Letter(0, "a", 0), Letter(1, "b", 0)
    lie_dims, totals = [], []
    for n in range(1, 7):
        ws = words_by_weight([a, b], n)
        dims = [rank(hodge_component(Tensor.word(w), p).terms for w in ws) for p in range(1, n + 1)]
        totals.append(sum(dims) == 2 ** n)
        lie_dims.append(dims[0])
    witt = [oracles.witt(2, n) for n in range(1, 7)]
    lyndon = [oracles.lyndon_count(2, n) for n in range(1, 7)]
    basis = [len(lyndon_basis([a, b], n)) for n in range(1, 7)]
    ok = all(totals) and lie_dims == witt == lyndon == basis == [2, 1, 2, 3, 6, 9]
    report(5, ok, f"dim L_n = {lie_dims}, Witt {witt}, Lyndon count {lyndon}; "
                  f"Hodge pieces sum to 2^n: {all(totals)}")


@pytest.mark.parametrize("name", ["abelian1", "abelian2", "sl2"])
def test_crit06_connes(report, name):
    spec = load(name)
    lines, ok = [], True
    for p in (0, 1, 2):
        rep = connes_les(spec.R, p, 3, p + 4)
        safe = [n for n, s in rep.safe.items() if s]
        exact = rep.exact_in(safe)
        ok = ok and exact and safe == [0, 1, 2, 3]
        lines.append(f"p={p} safe {safe} exact {exact}")
        if p == 0:
            degenerate = (all(v == 0 for v in rep.dims["HC"].values())
                          and all(rep.dims["HH"][n] == rep.dims["HC+1"][n - 1] for n in range(1, 4)))
            ok = ok and degenerate
            lines.append(f"p=0 HC vanishes and B is an isomorphism: {degenerate}")
    report(6, ok, f"{name}: " + "; ".join(lines))


@pytest.mark.parametrize("name", ["abelian1", "abelian2", "sl2"])
def test_crit07_two_routes(report, name):
    spec = load(name)
    rows = cross_validate(spec.lie, range(4), 3)
    safe = [r for r in rows if r.safe]
    diff = [(r.kind, r.p, r.degree, r.engine, r.kassel) for r in safe if not r.equal]
    ok = len(safe) == len(rows) and not diff
    report(7, ok, f"{name}: {len(safe)} HH/HC dimensions for p <= 3, degree <= 3 agree; "
                  f"differences {diff}")


def test_crit08_adams(report):
    alphabets = {name: load(name).R.letters for name in ("necklace", "abelian2", "s2", "sl2")}
    checked, bad = 0, 0
    for letters in alphabets.values():
        for n in range(1, 5):
            for w in itertools.product(letters, repeat=n):
                t = Tensor.word(w)
                comps = pbw_decompose(t)
                for k in (2, 3):
                    want = Tensor()
                    for p, c in comps.items():
                        want = want + c.scale(k ** p)
                    bad += adams_operation(k, t) != want
                bad += adams_operation(2, adams_operation(3, t)) != adams_operation(6, t)
                checked += 1
    report(8, bad == 0, f"psi^2, psi^3 eigenvalues and psi^2 psi^3 = psi^6 on {checked} words "
                        f"of length <= 4, {bad} failures")


@pytest.mark.parametrize("name", ["necklace", "sl2", "s2", "abelian1", "abelian2"])
def test_crit09_gates(report, name):
    spec = load(name)
    rep = bracket_gates(spec.R, spec.pairing, 4)
    fails = {g: len(v) for g, v in rep.failures.items()}
    report(9, rep.ok, f"{name}: checked {rep.checked}, failures {fails}")


def test_crit10_abelian_graded(report):
    spec = load("abelian2")
    hb = HomologyBrackets(spec.R, spec.pairing, 2)

    def plain(v):
        return {tuple(a.id for a in w): c for w, c in v.items()}

    def encode(v, deg):
        if not v:
            return sp.Integer(0)
        return oracles.abelianize(plain(v)) if deg == 0 else oracles.two_form_of(plain(v))

    graded, compared, mismatches = True, 0, []
    for p in range(1, 4):
        for q in range(1, 4):
            rep = filtration_report(hb, p, q)
            graded = graded and rep.ok and rep.graded
            A, B = hb.classes(p), hb.classes(q)
            for e in rep.entries:
                if e.deg_a + e.deg_b > 1:
                    continue            # target degree has no cyclic classes
                got = encode(e.value, e.deg_a + e.deg_b)
                want = oracles.plane_bracket(e.deg_a, encode(A[e.deg_a][e.i], e.deg_a),
                                             e.deg_b, encode(B[e.deg_b][e.j], e.deg_b))
                compared += 1
                if sp.expand(got - want) != TOL:
                    mismatches.append((p, q, e.deg_a, e.deg_b, e.i, e.j))
    report(10, graded and not mismatches,
           f"brackets land only in weight p+q-2 for p,q <= 3: {graded}; "
           f"{compared} brackets equal the differential-forms oracle, mismatches {mismatches}")


def test_crit11_drinfeld_trace(report, necklace):
    rep = verify_trace_lie_hom(necklace.R, necklace.pairing, load("sl2").lie, 2, 0)
    certs = sum(1 for p in rep.pairs if p.ok)
    report(11, rep.ok, f"{len(rep.classes)} weight-2 classes, {certs}/{len(rep.pairs)} pairs "
                       f"with a boundary certificate")


def test_crit12_probe(report):
    spec = load("s2")
    first = conjecture_probe(spec.R, spec.pairing, 3, 4, 6)
    second = conjecture_probe(spec.R, spec.pairing, 3, 4, 6)
    ok = first == second and len(first) == 9 and all(r.consistent for r in first)
    table = ", ".join(f"({r.p},{r.q}):{r.verdict}" for r in first)
    report(12, ok, f"deterministic and consistent; verdicts {table}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
