"""Cyclic words, one-forms and the Hodge pieces of Hochschild and cyclic
homology computed from the bicomplex built on a cobar algebra.

Ambient labels used by the total complexes:

* ``(c, word)`` for an element of an even column c (a word of R-bar),
* ``(c, word, letter)`` for ``word (x) letter`` in an odd column c.

Column 2k carries Sym^(p+k)(L) and column 2k+1 carries Sym^(p+k)(L) (x) V.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache

from .exact_linear import (ONE, Echelon, GradedVectorSpace, HomologyGroup, LinearMap,
                           Q, homology_group, rank, vadd, verify_exact_sequence)
from .free_structures import (Tensor, content, fmt_word, hodge_split, sym_basis,
                              word_degree, word_weight)
from .koszul_models import CobarAlgebra


class ColumnError(ArithmeticError):
    """A differential left the subspace it should preserve."""


def _sgn(k: int) -> int:
    return -1 if k & 1 else 1


# ---- cyclic words ----------------------------------------------------------

@lru_cache(maxsize=200000)
def necklace_canonical(w):
    """Minimal rotation of w and the Koszul sign to reach it, or None when
    the cyclic word vanishes (a rotation fixes it with sign -1) or w = ()."""
    n = len(w)
    if n == 0:
        return None
    degs = [a.degree for a in w]
    best = None
    signs = set()
    for k in range(n):
        r = w[k:] + w[:k]
        s = _sgn(sum(degs[:k]) * sum(degs[k:]))
        if best is None or r < best:
            best, signs = r, {s}
        elif r == best:
            signs.add(s)
    if len(signs) > 1:
        return None
    return best, signs.pop()


class Necklace:
    """Element of R_nat = R/(k + [R,R]) on canonical cyclic words."""
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for w, c in (terms or {}).items():
            vadd(self.terms, natural_projection_vec({tuple(w): Q(c)}))

    @classmethod
    def _raw(cls, d):
        n = cls()
        n.terms = d
        return n

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Necklace):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other):
        return Necklace._raw(vadd(dict(self.terms), other.terms))

    def __sub__(self, other):
        return Necklace._raw(vadd(dict(self.terms), other.terms, -ONE))

    def scale(self, c):
        c = Q(c)
        return Necklace._raw({w: c * x for w, x in self.terms.items()} if c else {})

    def __rmul__(self, c):
        return self.scale(c)

    def lift(self) -> Tensor:
        t = Tensor()
        t.terms = dict(self.terms)
        return t

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            out.append(fmt_word(w) if c == 1 else f"{c}*{fmt_word(w)}")
        return " + ".join(out)


def natural_projection_vec(v: dict) -> dict:
    out: dict = {}
    for w, c in v.items():
        r = necklace_canonical(w)
        if r is not None:
            vadd(out, {r[0]: c * r[1]})
    return out


def natural_projection(x) -> Necklace:
    """Project a tensor onto cyclic words, dropping constants."""
    terms = x.terms if isinstance(x, Tensor) else x
    return Necklace._raw(natural_projection_vec(terms))


class OneForm:
    """Element of R (x) V, standing for the cyclic one-forms of R."""
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for k, c in (terms or {}).items():
            vadd(self.terms, {(tuple(k[0]), k[1]): Q(c)})

    @classmethod
    def _raw(cls, d):
        f = cls()
        f.terms = d
        return f

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, OneForm):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other):
        return OneForm._raw(vadd(dict(self.terms), other.terms))

    def __sub__(self, other):
        return OneForm._raw(vadd(dict(self.terms), other.terms, -ONE))

    def scale(self, c):
        c = Q(c)
        return OneForm._raw({k: c * x for k, x in self.terms.items()} if c else {})

    def by_letter(self) -> dict:
        out: dict = defaultdict(dict)
        for (w, a), c in self.terms.items():
            out[a][w] = c
        return dict(out)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{fmt_word(w)}(x){a.id}" for (w, a), c in
                          sorted(self.terms.items(), key=lambda t: (len(t[0][0]), t[0])))


def derham_word(w) -> dict:
    """Cyclic de Rham differential of one word as ``{(word, letter): c}``."""
    out: dict = {}
    degs = [a.degree for a in w]
    tot = sum(degs)
    pre = 0
    for i, a in enumerate(w):
        pre += degs[i]
        s = _sgn(pre * (tot - pre))
        vadd(out, {(w[i + 1:] + w[:i], a): Q(s)})
    return out


def cyclic_derham(x) -> OneForm:
    terms = x.terms if isinstance(x, Tensor) else x
    out: dict = {}
    for w, c in terms.items():
        if not w:
            raise ValueError("cyclic de Rham differential is defined on the augmentation ideal")
        vadd(out, derham_word(w), c)
    return OneForm._raw(out)


def beta_term(w, a) -> dict:
    s = _sgn(word_degree(w) * a.degree)
    out: dict = {}
    vadd(out, {w + (a,): ONE})
    vadd(out, {(a,) + w: Q(-s)})
    out.pop((), None)
    return out


def beta(form: OneForm) -> Tensor:
    """q (x) y -> q y - (-1)^{|q||y|} y q, constants dropped."""
    out: dict = {}
    for (w, a), c in form.terms.items():
        vadd(out, beta_term(w, a), c)
    t = Tensor()
    t.terms = out
    return t


def form_d_term(R: CobarAlgebra, w, a) -> dict:
    """Differential of q (x) v on R (x) V: (dq)(x)v + (-1)^{|q|} nat(q D(dv))."""
    out: dict = {}
    for u, c in R.d_word(w).items():
        vadd(out, {(u, a): c})
    dq = word_degree(w)
    for u, c in R.d_letter(a).items():
        # q . D(u) = sum_i q u_<i (D u_i) u_>i  and  x D(y) z == (-1)^{|z|(|x|+|y|)} (z x) D(y)
        k = len(u)
        for i in range(k):
            left = w + u[:i]
            right = u[i + 1:]
            s = _sgn(word_degree(right) * (word_degree(left) + u[i].degree))
            vadd(out, {(right + left, u[i]): c * s * _sgn(dq)})
    return out


def form_differential(R: CobarAlgebra, form: OneForm) -> OneForm:
    out: dict = {}
    for (w, a), c in form.terms.items():
        vadd(out, form_d_term(R, w, a), c)
    return OneForm._raw(out)


# ---- the Hodge engine ------------------------------------------------------

class HodgeEngine:
    """Caches words, Sym^r(L) blocks and total-complex differentials for one
    cobar algebra.

    ``diagonal`` marks Koszul duals of finite-dimensional ordinary Lie
    algebras, where homology of Hodge weight p in degree n sits in letter
    weight n + p; this is what makes weight truncations conclusive.
    """

    def __init__(self, R: CobarAlgebra):
        self.R = R
        self.diagonal = R.diagonal
        self._words: dict = {}
        self._blocks: dict = {}
        self._D: dict = {}
        self.letters = list(R.letters)
        self.weight_homogeneous = all(
            word_weight(u) == a.weight for a in R.letters for u in R.d_letter(a))
        self.min_letter_degree = min((a.degree for a in R.letters), default=0)
        self.max_letter_weight = max((a.weight for a in R.letters), default=1)

    # words and blocks
    def words(self, weight: int, degree: int):
        key = (weight, degree)
        if key not in self._words:
            out = []
            if weight == 0:
                out = [()] if degree == 0 else []
            else:
                for a in self.letters:
                    if a.weight <= weight:
                        for w in self.words(weight - a.weight, degree - a.degree):
                            out.append((a,) + w)
            self._words[key] = out
        return self._words[key]

    def sym_block(self, r, weight: int, degree: int) -> list[dict]:
        """Basis of Sym^r(L) (r=None: all of R) in one weight and degree."""
        return self._block(r, weight, degree)[0]

    def sym_pivots(self, r, weight: int, degree: int) -> list:
        """Words whose coordinates determine a vector of the block uniquely."""
        return self._block(r, weight, degree)[1]

    def _block(self, r, weight, degree):
        key = (r, weight, degree)
        if key not in self._blocks:
            ws = self.words(weight, degree)
            if r is None:
                out, piv = [{w: ONE} for w in ws], list(ws)
            elif r == 0:
                out = [{(): ONE}] if weight == 0 and degree == 0 else []
                piv = [()] if out else []
            else:
                groups: dict = defaultdict(list)
                for w in ws:
                    if len(w) >= r:
                        groups[content(w)].append(w)
                out, piv = [], []
                for c in sorted(groups):
                    vecs, pv = sym_basis(groups[c], r, pivots=True)
                    out.extend(vecs)
                    piv.extend(pv)
            self._blocks[key] = (out, piv)
        return self._blocks[key]

    def grading_key(self, lab) -> tuple:
        if len(lab) == 2:
            return self.R.grading_key(lab[1])
        return self.R.grading_key(lab[1] + (lab[2],))

    # differentials on ambient labels
    def D(self, lab) -> dict:
        """Total differential D = (-1)^c (vertical + horizontal) on column c."""
        out = self._D.get(lab)
        if out is not None:
            return out
        c = lab[0]
        out = {}
        s = _sgn(c)
        if len(lab) == 2:
            w = lab[1]
            for u, x in self.R.d_word(w).items():
                if u:
                    vadd(out, {(c, u): x * s})
            if c >= 2:
                for (u, a), x in derham_word(w).items():
                    vadd(out, {(c - 1, u, a): x * s})
        else:
            w, a = lab[1], lab[2]
            for (u, b), x in form_d_term(self.R, w, a).items():
                vadd(out, {(c, u, b): x * s})
            for u, x in beta_term(w, a).items():
                vadd(out, {(c - 1, u): x * s})
        self._D[lab] = out
        return out

    def D_vec(self, v: dict) -> dict:
        out: dict = {}
        for lab, c in v.items():
            vadd(out, self.D(lab), c)
        return out

    # truncation rule
    def safe(self, p: int, n: int, W: int) -> bool:
        if self.diagonal:
            return n + p + 1 <= W
        if self.weight_homogeneous and self.min_letter_degree >= 1:
            return (n + 2) * self.max_letter_weight <= W
        return False


@dataclass
class HodgeHomology:
    """Homology of one Hodge piece: dims, safety flags and representatives."""
    kind: str            # "HH" or "HC"
    p: int | None
    max_weight: dict     # degree -> weight cap used
    groups: dict         # degree -> HomologyGroup (empty if dims only)
    safe: dict           # degree -> bool
    dim_only: dict = field(default_factory=dict)

    @property
    def dims(self) -> dict:
        if self.groups:
            return {n: g.dim for n, g in sorted(self.groups.items())}
        return dict(sorted(self.dim_only.items()))


class TotalComplex:
    """Weight-truncated total complex of X^{+,(p)} (or its first two columns).

    ``p=None`` gives the undecomposed complex built on all of R.
    """

    def __init__(self, engine: HodgeEngine, p, columns: int | None, max_weight: int):
        self.E = engine
        self.p = p
        self.columns = columns
        self.W = max_weight
        self._basis: dict = {}
        self._ranks: dict = {}
        self._pivots: dict = {}

    def _r(self, c):
        if self.p is None:
            return None
        return self.p + c // 2

    def chain_basis(self, n: int) -> dict:
        """Basis of total degree n grouped by grading key: key -> [vector]."""
        if n not in self._basis:
            self._build(n)
        return self._basis[n]

    def chain_pivots(self, n: int) -> dict:
        """key -> set of labels on which projection of degree-n chains is injective."""
        if n not in self._basis:
            self._build(n)
        return self._pivots[n]

    def _build(self, n: int):
        E = self.E
        out: dict = defaultdict(list)
        piv: dict = defaultdict(set)

        def put(vecs, pivs, tag):
            for vec in vecs:
                lab_vec = {tag(u): x for u, x in vec.items()}
                out[E.grading_key(next(iter(lab_vec)))].append(lab_vec)
            for u in pivs:
                lab = tag(u)
                piv[E.grading_key(lab)].add(lab)

        if n >= 0:
            # letters have degree >= 0, so column c only meets total degree >= c
            maxc = n if self.columns is None else min(n, self.columns - 1)
            for c in range(0, maxc + 1):
                q = n - c
                r = self._r(c)
                if c % 2 == 0:
                    for w in range(1, self.W + 1):
                        put(E.sym_block(r, w, q), E.sym_pivots(r, w, q),
                            lambda u, c=c: (c, u))
                else:
                    for a in E.letters:
                        for w in range(0, self.W - a.weight + 1):
                            put(E.sym_block(r, w, q - a.degree), E.sym_pivots(r, w, q - a.degree),
                                lambda u, c=c, a=a: (c, u, a))
        self._basis[n] = dict(out)
        self._pivots[n] = dict(piv)

    def D(self, v: dict) -> dict:
        out = self.E.D_vec(v)
        if self.columns is not None:
            out = {k: x for k, x in out.items() if k[0] < self.columns}
        return out

    def rank_D(self, n: int, key) -> int:
        """Rank of D on the degree-n chains of one grading block.

        D lands in the span of the degree n-1 basis, so the images are first
        restricted to that block's pivot labels, which loses no rank."""
        k = (n, key)
        if k not in self._ranks:
            vecs = self.chain_basis(n).get(key, ())
            piv = self.chain_pivots(n - 1).get(key, set()) if vecs else set()
            self._ranks[k] = rank({lab: x for lab, x in self.D(v).items() if lab in piv}
                                  for v in vecs)
        return self._ranks[k]

    def homology_dim(self, n: int) -> int:
        """dim H_n by rank-nullity, block by block (no representatives)."""
        Cn = self.chain_basis(n)
        return sum(len(vecs) - self.rank_D(n, key) - self.rank_D(n + 1, key)
                   for key, vecs in Cn.items())

    def homology(self, n: int) -> HomologyGroup:
        Cn = self.chain_basis(n)
        Cn1 = self.chain_basis(n + 1)
        Pn, Pm = self.chain_pivots(n), self.chain_pivots(n - 1)
        reps = []
        merged = Echelon()
        support: set = set()
        for key in sorted(set(Cn) | set(Cn1)):
            src = Cn.get(key, [])
            bnd = [self.D(v) for v in Cn1.get(key, [])]
            sup = Pn.get(key, set())
            g = homology_group(n, src, self.D, bnd, sup, Pm.get(key, set()))
            reps.extend(g.reps)
            support |= sup
            merged.rows.update(g.boundaries.rows)
            merged.payload.update(g.boundaries.payload)
            for k, s in g.boundaries._occ.items():
                merged._occ.setdefault(k, set()).update(s)
        return HomologyGroup(n, reps, merged, support)

    def check_columns(self, n: int, sample: int | None = None):
        """Verify that D maps each basis vector of degree n back into the
        claimed Hodge columns (projector fixed-point test)."""
        if self.p is None:
            return
        count = 0
        for key, vecs in sorted(self.chain_basis(n).items()):
            for v in vecs:
                if sample is not None and count >= sample:
                    return
                count += 1
                img = self.D(v)
                cols: dict = defaultdict(dict)
                for lab, x in img.items():
                    cols[lab[0]][lab[1:]] = x
                for c, part in cols.items():
                    r = self._r(c)
                    if c % 2 == 0:
                        words = part
                    else:
                        words = {}
                        by: dict = defaultdict(dict)
                        for (u, a), x in part.items():
                            by[a][u] = x
                        for a, ws in by.items():
                            if not _is_fixed(ws, r):
                                raise ColumnError(f"D leaves column {c} (letter {a.id})")
                        continue
                    if not _is_fixed({k[0]: x for k, x in words.items()}, r):
                        raise ColumnError(f"D leaves column {c} in degree {n - 1}")


def _is_fixed(vec: dict, r: int) -> bool:
    acc: dict = {}
    for w, x in vec.items():
        comps = hodge_split(w)
        if r < len(comps):
            vadd(acc, comps[r], x)
    return not vadd(acc, vec, -ONE)


# ---- public computations ---------------------------------------------------

def engine_for(R: CobarAlgebra) -> HodgeEngine:
    eng = getattr(R, "_hodge_engine", None)
    if eng is None:
        eng = HodgeEngine(R)
        R._hodge_engine = eng
    return eng


def _weight_caps(E: HodgeEngine, p, max_degree: int, max_weight):
    if max_weight is not None:
        return {n: max_weight for n in range(max_degree + 1)}
    if not E.diagonal:
        raise ValueError("max_weight is required for this input")
    pp = p or 0
    return {n: n + pp + 1 for n in range(max_degree + 1)}


def _run(E: HodgeEngine, p, columns, max_degree, max_weight, kind, check=True, reps=True):
    caps = _weight_caps(E, p, max_degree, max_weight)
    groups, safe, dims = {}, {}, {}
    cache: dict = {}
    for n in range(max_degree + 1):
        W = caps[n]
        tc = cache.get(W)
        if tc is None:
            tc = cache[W] = TotalComplex(E, p, columns, W)
        if check:
            tc.check_columns(n, sample=200)
        if reps:
            groups[n] = tc.homology(n)
        else:
            dims[n] = tc.homology_dim(n)
        safe[n] = E.safe(p or 0, n, W)
    return HodgeHomology(kind, p, caps, groups, safe, dims)


def hochschild_hodge(R: CobarAlgebra, p, max_degree: int,
                     max_weight: int | None = None, reps: bool = True) -> HodgeHomology:
    """HH^(p) as homology of the two-column complex X_2^{+,(p)}.

    With ``max_weight=None`` each degree n uses the smallest conclusive cap
    n + p + 1 (Koszul duals of ordinary Lie algebras only)."""
    E = engine_for(R)
    return _run(E, p, 2, max_degree, max_weight, "HH", reps=reps)


def cyclic_hodge(R: CobarAlgebra, p, max_degree: int,
                 max_weight: int | None = None, reps: bool = True) -> HodgeHomology:
    """HC^(p) as homology of Tot X^{+,(p)}."""
    E = engine_for(R)
    return _run(E, p, None, max_degree, max_weight, "HC", reps=reps)


def build_hodge_bicomplex(R: CobarAlgebra, p: int, max_degree: int, max_weight: int,
                          columns: int | None = None) -> TotalComplex:
    """Total complex of X^{+,(p)} truncated at letter weight max_weight.

    Verifies D^2 = 0 and column preservation up to total degree max_degree."""
    if columns is not None and columns < max_degree + 2 and columns != 2:
        raise ValueError("need at least max_degree + 2 columns")
    E = engine_for(R)
    tc = TotalComplex(E, p, 2 if columns == 2 else None, max_weight)
    for n in range(max_degree + 1):
        tc.check_columns(n)
        for vecs in tc.chain_basis(n).values():
            for v in vecs:
                if tc.D(tc.D(v)):
                    raise ColumnError(f"D^2 != 0 in total degree {n}")
    return tc


# ---- Connes long exact sequence --------------------------------------------

def _shift_cols(v: dict, k: int) -> dict:
    return {(lab[0] + k,) + lab[1:]: x for lab, x in v.items() if lab[0] + k >= 0}


@dataclass
class LESReport:
    p: int
    max_weight: int
    dims: dict                    # name -> {degree: dim}
    defects: dict                 # (junction name, degree) -> defect
    safe: dict                    # degree -> bool
    maps: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(d == 0 for d in self.defects.values())

    def exact_in(self, degrees) -> bool:
        return all(d == 0 for (j, n), d in self.defects.items() if n in degrees)


def connes_les(R: CobarAlgebra, p: int, max_degree: int, max_weight: int) -> LESReport:
    """Hodge-graded Connes sequence ... HC^(p+1)_{n-1} -B-> HH^(p)_n -I-> HC^(p)_n
    -S-> HC^(p+1)_{n-2} -B-> ... from one weight truncation."""
    E = engine_for(R)
    W = max_weight
    D = max_degree
    X2 = TotalComplex(E, p, 2, W)
    Xp = TotalComplex(E, p, None, W)
    Xq = TotalComplex(E, p + 1, None, W)
    HH = {n: X2.homology(n) for n in range(D + 2)}
    HCp = {n: Xp.homology(n) for n in range(D + 2)}
    HCq = {n: Xq.homology(n) for n in range(D + 2)}

    def space(groups, shift=0):
        return GradedVectorSpace({n + shift: [(n + shift, i) for i in range(g.dim)]
                                  for n, g in groups.items()})

    A = space(HH)
    B_ = space(HCp)
    C_ = space(HCq, 2)
    I_imgs, S_imgs, B_imgs = {}, {}, {}
    for n, g in HH.items():
        I_imgs[n] = {(n, i): {(n, j): x for j, x in HCp[n].coords(z).items()}
                     for i, z in enumerate(g.reps)}
    for n, g in HCp.items():
        S_imgs[n] = {}
        for i, z in enumerate(g.reps):
            tail = _shift_cols({k: x for k, x in z.items() if k[0] >= 2}, -2)
            img = {}
            if n - 2 >= 0 and tail:
                img = {(n, j): x for j, x in HCq[n - 2].coords(tail).items()}
            elif tail:
                raise ColumnError("projection of a cycle landed in negative degree")
            S_imgs[n][(n, i)] = img
    for m, g in HCq.items():
        n = m + 2
        B_imgs[n] = {}
        for i, z in enumerate(g.reps):
            lifted = _shift_cols(z, 2)
            bz = Xp.D(lifted)
            if any(k[0] >= 2 for k in bz):
                raise ColumnError("connecting map did not land in the first two columns")
            img = {}
            if bz:
                if n - 1 not in HH:
                    raise ColumnError("connecting map outside computed range")
                img = {(n - 1, j): x for j, x in HH[n - 1].coords(bz).items()}
            B_imgs[n][(n, i)] = img
    I = LinearMap(A, B_, 0, I_imgs)
    S = LinearMap(B_, C_, 0, S_imgs)
    Bm = LinearMap(C_, A, -1, B_imgs)
    raw = verify_exact_sequence([I, S, Bm, I], degrees=None)
    names = {0: "HC(p)", 1: "HC(p+1)[2]", 2: "HH(p)"}
    defects = {}
    for (j, n), dfc in raw.items():
        if 0 <= n <= D:
            defects[(names[j], n)] = dfc
    safe = {n: all(E.safe(pp, m, W) for pp, m in ((p, n), (p + 1, n - 2), (p, n - 1), (p + 1, n - 1))
                   if m >= 0) for n in range(D + 1)}
    dims = {"HH": {n: g.dim for n, g in HH.items() if n <= D},
            "HC": {n: g.dim for n, g in HCp.items() if n <= D},
            "HC+1": {n: g.dim for n, g in HCq.items() if n <= D}}
    return LESReport(p, W, dims, defects, safe, {"I": I, "S": S, "B": Bm})
