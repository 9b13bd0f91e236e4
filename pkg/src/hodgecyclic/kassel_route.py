"""Hodge pieces of a Lie algebra through Chevalley-Eilenberg complexes with
symmetric-power coefficients.

Chains of weight p are ``Sym^p(a) (x) Lambda(a)`` monomials, labelled by a
pair ``(sym, wedge)`` of index tuples (``sym`` sorted, ``wedge`` strictly
increasing).  Homological degree is the exterior degree.  Only ordinary
(degree 0, no differential) Lie algebras are supported; everything is finite
so no truncation is involved.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cyclic_complexes import cyclic_hodge, hochschild_hodge
from .exact_linear import (ONE, ChainComplex, GradedVectorSpace, LinearAlgebraError, LinearMap,
                           rank, vadd)
from .koszul_models import LieAlgebraSpec, ModelError, ce_coalgebra, cobar


def _wedge_insert(i: int, wedge: tuple):
    """i ^ wedge as (sign, sorted wedge) or None if i already occurs."""
    if i in wedge:
        return None
    k = sum(1 for j in wedge if j < i)
    return (-1 if k & 1 else 1), wedge[:k] + (i,) + wedge[k:]


def _sym_mul(sym: tuple, i: int) -> tuple:
    return tuple(sorted(sym + (i,)))


class KasselModel:
    """CE complexes C(a; Sym^p a) and the de Rham maps between them."""

    def __init__(self, a: LieAlgebraSpec):
        if not a.is_ordinary:
            raise ModelError("the coefficient route handles ordinary Lie algebras only")
        self.a = a
        self.labels = list(a.labels)
        self.dim = len(self.labels)
        idx = {x: i for i, x in enumerate(self.labels)}
        # structure constants on indices
        self.br = {(i, j): {idx[z]: c for z, c in a.br(x, y).items()}
                   for i, x in enumerate(self.labels) for j, y in enumerate(self.labels)}
        self._cx: dict = {}

    # ---- bases ----
    def basis(self, p: int, k: int) -> list:
        if p < 0 or k < 0 or k > self.dim:
            return []
        syms = itertools.combinations_with_replacement(range(self.dim), p)
        wedges = list(itertools.combinations(range(self.dim), k))
        return [(s, w) for s in syms for w in wedges]

    def space(self, p: int) -> GradedVectorSpace:
        return GradedVectorSpace({k: self.basis(p, k) for k in range(self.dim + 1)})

    # ---- maps on labels ----
    def ad_sym(self, i: int, sym: tuple) -> dict:
        """x_i acting on a symmetric monomial as a derivation."""
        out: dict = {}
        for t in range(len(sym)):
            rest = sym[:t] + sym[t + 1:]
            for z, c in self.br[(i, sym[t])].items():
                vadd(out, {_sym_mul(rest, z): c})
        return out

    def delta(self, lab) -> dict:
        """CE boundary with coefficients in Sym^p via the adjoint action:
        m (x) x_1..x_k -> sum_{i<j} (-1)^{i+j} m (x) [x_i,x_j] x_1..^..^..x_k
                          - sum_i (-1)^i (x_i . m) (x) x_1..^..x_k
        (indices from 1; the adjoint left action turned into a right one)."""
        sym, wedge = lab
        out: dict = {}
        k = len(wedge)
        for i in range(k):
            rest = wedge[:i] + wedge[i + 1:]
            s = 1 if i & 1 else -1
            for m, c in self.ad_sym(wedge[i], sym).items():
                vadd(out, {(m, rest): c * s})
            for j in range(i + 1, k):
                rest2 = wedge[:i] + wedge[i + 1:j] + wedge[j + 1:]
                s2 = -1 if (i + j) & 1 else 1
                for z, c in self.br[(wedge[i], wedge[j])].items():
                    ins = _wedge_insert(z, rest2)
                    if ins:
                        vadd(out, {(sym, ins[1]): c * s2 * ins[0]})
        return out

    def derham(self, lab) -> dict:
        """y_1..y_p (x) xi -> sum_t y_1..^..y_p (x) (y_t ^ xi)."""
        sym, wedge = lab
        out: dict = {}
        for t in range(len(sym)):
            if t and sym[t] == sym[t - 1]:
                continue
            mult = sym.count(sym[t])
            ins = _wedge_insert(sym[t], wedge)
            if ins:
                vadd(out, {(sym[:t] + sym[t + 1:], ins[1]): ONE * mult * ins[0]})
        return out

    # ---- complexes ----
    def ce_complex(self, p: int, check: bool = True) -> ChainComplex:
        if p not in self._cx:
            sp = self.space(p)
            imgs = {k: {lab: self.delta(lab) for lab in labs} for k, labs in sp.basis.items()}
            self._cx[p] = ChainComplex(sp, LinearMap(sp, sp, -1, imgs), check=check)
        return self._cx[p]

    def derham_map(self, p: int) -> LinearMap:
        """Sym^p (x) Lambda^k -> Sym^{p-1} (x) Lambda^{k+1}, degree +1."""
        src, tgt = self.space(p), self.space(p - 1)
        imgs = {k: {lab: self.derham(lab) for lab in labs} for k, labs in src.basis.items()}
        return LinearMap(src, tgt, 1, imgs)

    # ---- homology ----
    def hh_dims(self, p: int, max_degree: int) -> dict:
        """dim H_k(a; Sym^p a) for k <= max_degree."""
        cx = self.ce_complex(p)
        out = {}
        for k in range(0, max_degree + 1):
            n = len(cx.space.basis.get(k, ()))
            out[k] = n - cx.d.rank(k) - cx.d.rank(k + 1)
        return out

    def kernel_complex(self, p: int) -> dict:
        """Degreewise kernel of the de Rham map on C(a; Sym^{p-1})."""
        if p - 1 < 0:
            return {}
        src = self.space(p - 1)
        if p - 2 < 0:
            return {k: [{lab: ONE} for lab in labs] for k, labs in src.basis.items()}
        dr = self.derham_map(p - 1)
        return {k: dr.kernel(k) for k in src.basis}

    def hc_dims(self, p: int, max_degree: int) -> dict:
        """HC^(p)_n = H_{n+1} of the kernel subcomplex, n <= max_degree."""
        K = self.kernel_complex(p)
        cx = self.ce_complex(p - 1) if p >= 1 else None

        def img(k):
            return [cx.d.apply(k, v) for v in K.get(k, ())] if cx else []

        ranks = {}

        def rk(k):
            if k not in ranks:
                ranks[k] = rank(img(k))
            return ranks[k]

        out = {}
        for n in range(0, max_degree + 1):
            k = n + 1
            out[n] = len(K.get(k, ())) - rk(k) - rk(k + 1)
        return out


@dataclass
class MixedReport:
    delta_squared: int = 0          # labels where delta^2 != 0
    d_squared: int = 0
    anticommute: int = 0            # labels where delta d + d delta != 0
    row_defects: dict = field(default_factory=dict)   # (weight, k) -> defect

    @property
    def ok(self) -> bool:
        return not (self.delta_squared or self.d_squared or self.anticommute
                    or any(self.row_defects.values()))


def mixed_complex_check(model: KasselModel, max_p: int) -> MixedReport:
    """delta^2 = 0, d^2 = 0, delta d + d delta = 0 on every basis label of
    weight <= max_p, plus exactness of the de Rham rows in positive weight."""
    rep = MixedReport()
    for p in range(0, max_p + 1):
        for labs in model.space(p).basis.values():
            for lab in labs:
                dl = model.delta(lab)
                if _apply(model.delta, dl):
                    rep.delta_squared += 1
                if p >= 1:
                    dr = model.derham(lab)
                    if _apply(model.derham, dr):
                        rep.d_squared += 1
                    x = _apply(model.derham, dl)
                    vadd(x, _apply(model.delta, dr))
                    if x:
                        rep.anticommute += 1
    rep.row_defects = row_exactness(model, max_p)
    return rep


def _apply(f, v: dict) -> dict:
    out: dict = {}
    for lab, c in v.items():
        vadd(out, f(lab), c)
    return out


def row_exactness(model: KasselModel, max_total: int) -> dict:
    """For total weight t = p + k in 1..max_total, the de Rham row
    Sym^t -> Sym^{t-1} (x) Lambda^1 -> ... is exact: defect at each spot."""
    out = {}
    for t in range(1, max_total + 1):
        for k in range(0, min(t, model.dim) + 1):
            p = t - k
            here = model.basis(p, k)
            outgoing = rank(model.derham(lab) for lab in here) if p >= 1 else 0
            incoming = rank(model.derham(lab) for lab in model.basis(p + 1, k - 1)) if k >= 1 else 0
            out[(t, k)] = len(here) - outgoing - incoming
    return out


def ce_with_coefficients(a: LieAlgebraSpec, p: int) -> ChainComplex:
    return KasselModel(a).ce_complex(p)


def derham_map(a: LieAlgebraSpec, p: int) -> LinearMap:
    if p < 1:
        raise ValueError("the de Rham map needs p >= 1")
    return KasselModel(a).derham_map(p)


def hh_via_coefficients(a: LieAlgebraSpec, p: int, max_degree: int) -> dict:
    return KasselModel(a).hh_dims(p, max_degree)


def hc_via_kernel(a: LieAlgebraSpec, p: int, max_degree: int) -> dict:
    return KasselModel(a).hc_dims(p, max_degree)


@dataclass
class CrossRow:
    kind: str        # "HH" or "HC"
    p: int
    degree: int
    engine: int
    kassel: int
    safe: bool

    @property
    def equal(self) -> bool:
        return self.engine == self.kassel


def cross_validate(a: LieAlgebraSpec, p_range, max_degree: int,
                   max_weight: int | None = None) -> list:
    """Engine dimensions (on the cobar side) against this route, per
    (kind, p, degree).  Reduced homology on the engine side: the unit class
    in HH^(0)_0 is removed from the coefficient route before comparing."""
    model = KasselModel(a)
    R = cobar(ce_coalgebra(a))
    rows = []
    for p in p_range:
        hh = hochschild_hodge(R, p, max_degree, max_weight, reps=False)
        hc = cyclic_hodge(R, p, max_degree, max_weight, reps=False)
        kh = model.hh_dims(p, max_degree)
        if p == 0:
            kh[0] -= 1
        kc = model.hc_dims(p, max_degree)
        for n in range(0, max_degree + 1):
            rows.append(CrossRow("HH", p, n, hh.dims.get(n, 0), kh[n], hh.safe.get(n, False)))
            rows.append(CrossRow("HC", p, n, hc.dims.get(n, 0), kc[n], hc.safe.get(n, False)))
    return rows


def all_equal(rows: list) -> bool:
    """True when every truncation-safe row agrees."""
    safe = [r for r in rows if r.safe]
    if not safe:
        raise LinearAlgebraError("no truncation-safe rows to compare")
    return all(r.equal for r in safe)
