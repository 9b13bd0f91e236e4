"""Representation algebras, the derived representation complex of a cobar
model, its Poisson bracket, and Drinfeld traces out of Sym^p(L).

Polynomials live in the free graded-commutative algebra on generators
``(letter, i)``: a letter of the cobar model paired with the dual of the
i-th basis vector of g.  A monomial is a sorted tuple of generators (odd
generators occur at most once); a polynomial is a dict monomial -> mpq.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache

from .derived_poisson import CyclicPairing, HomologyBrackets, poisson_for
from .exact_linear import ONE, ZERO, Echelon, LinearAlgebraError, vadd
from .free_structures import (Letter, Tensor, bracketing, hodge_split, lyndon_words,
                              standard_factorization, symmetrize, word_degree, word_weight)
from .koszul_models import CobarAlgebra, LieAlgebraSpec, ModelError


def _sgn(k: int) -> int:
    return -1 if k & 1 else 1


# ---- graded-commutative polynomials -----------------------------------------

def _gdeg(g) -> int:
    return g[0].degree


def mono_mul(m1: tuple, m2: tuple):
    """(sign, monomial) of m1 * m2, or (0, None) if an odd generator repeats."""
    odd2 = [g for g in m2 if _gdeg(g) & 1]
    s = 0
    for g in m1:
        if _gdeg(g) & 1:
            if g in odd2:
                return 0, None
            s += sum(1 for h in odd2 if h < g)
    return _sgn(s), tuple(sorted(m1 + m2))


def poly_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for m1, a in f.items():
        for m2, b in g.items():
            s, m = mono_mul(m1, m2)
            if s:
                vadd(out, {m: a * b * s})
    return out


def poly_deg(m: tuple) -> int:
    return sum(_gdeg(g) for g in m)


def poly_weight(m: tuple) -> int:
    return sum(g[0].weight for g in m)


def _pull(m: tuple, k: int, side: str):
    """Remove position k, moving that generator to the far left/right:
    (sign, remaining monomial)."""
    g = m[k]
    rest = m[:k] + m[k + 1:]
    passed = m[:k] if side == "left" else m[k + 1:]
    return _sgn(_gdeg(g) * poly_deg(passed)), rest


def derivation(f: dict, images) -> dict:
    """Apply the derivation determined on generators by ``images(g)``;
    its degree is read from ``images.degree`` (Koszul signs from the left)."""
    dd = images.degree
    out: dict = {}
    for m, c in f.items():
        for k, g in enumerate(m):
            img = images(g)
            if not img:
                continue
            s = _sgn(dd * poly_deg(m[:k]))
            left = {m[:k]: ONE}
            right = {m[k + 1:]: ONE}
            vadd(out, poly_mul(poly_mul(left, img), right), c * s)
    return out


def fmt_poly(f: dict, names=None) -> str:
    if not f:
        return "0"
    parts = []
    for m, c in sorted(f.items(), key=lambda t: (len(t[0]), t[0])):
        body = "*".join(f"{g[0].id}_{names[g[1]] if names else g[1]}" for g in m) or "1"
        parts.append(f"{c}*{body}")
    return " + ".join(parts)


# ---- invariant forms on g ----------------------------------------------------

@dataclass
class InvariantForm:
    """Symmetric invariant bilinear form on g, given on basis indices."""
    g: LieAlgebraSpec
    matrix: dict                      # (i, j) -> mpq, symmetric

    def __post_init__(self):
        n = len(self.g.labels)
        for i, j in itertools.product(range(n), repeat=2):
            if self.matrix.get((i, j), ZERO) != self.matrix.get((j, i), ZERO):
                raise ModelError("invariant form is not symmetric")
        if self.invariance_defects():
            raise ModelError("form is not ad-invariant")

    def __call__(self, i, j):
        return self.matrix.get((i, j), ZERO)

    def invariance_defects(self) -> list:
        """Triples (x, y, z) with B([x,y],z) + B(y,[x,z]) != 0."""
        L = self.g.labels
        idx = {x: i for i, x in enumerate(L)}
        bad = []
        for x, y, z in itertools.product(L, repeat=3):
            t = ZERO
            for w, c in self.g.br(x, y).items():
                t += c * self(idx[w], idx[z])
            for w, c in self.g.br(x, z).items():
                t += c * self(idx[y], idx[w])
            if t:
                bad.append((x, y, z))
        return bad

    def inverse(self) -> dict:
        """(i, j) -> entries of the inverse matrix; degenerate forms raise."""
        n = len(self.g.labels)
        e = Echelon()
        for i in range(n):
            row = {j: self(i, j) for j in range(n) if self(i, j)}
            if e.add(row, {i: ONE}) is not None:
                raise ModelError("invariant form is degenerate")
        inv = {}
        for j in range(n):
            coeff, r = e.coefficients({j: ONE})
            # e_j = sum_piv coeff * row_piv; row_piv = sum payload * B_i
            vec: dict = {}
            for piv, c in coeff.items():
                vadd(vec, e.payload[piv], c)
            for i, c in vec.items():
                inv[(i, j)] = c
        return {k: v for k, v in inv.items() if v}


def killing_form(g: LieAlgebraSpec) -> InvariantForm:
    """B(x, y) = tr(ad x ad y)."""
    L = g.labels
    n = len(L)
    idx = {x: i for i, x in enumerate(L)}

    def ad(x):
        m = {}
        for z in L:
            for w, c in g.br(x, z).items():
                m[(idx[w], idx[z])] = c
        return m

    ads = [ad(x) for x in L]
    mat = {}
    for i, j in itertools.product(range(n), repeat=2):
        t = ZERO
        for (a, b), c in ads[i].items():
            for (b2, a2), d in ads[j].items():
                if b2 == b and a2 == a:
                    t += c * d
        if t:
            mat[(i, j)] = t
    return InvariantForm(g, mat)


# ---- the representation functor on an ordinary Lie algebra ------------------

@dataclass
class RepAlgebraPresentation:
    generators: list                  # (a-label, i)
    relations: list                   # polynomials over generators


def rep_algebra(a: LieAlgebraSpec, g: LieAlgebraSpec) -> RepAlgebraPresentation:
    """Sym(a (x) g*) modulo sum_ij c^k_ij X(x,i) X(y,j) - X([x,y],k) for x < y
    in the basis of a and every k."""
    if not a.is_ordinary:
        raise ModelError("rep_algebra takes an ordinary Lie algebra")
    letters = {x: Letter(i, x, 0, 1) for i, x in enumerate(a.labels)}
    n = len(g.labels)
    gens = [(letters[x], i) for x in a.labels for i in range(n)]
    rels = []
    for x, y in itertools.combinations(a.labels, 2):
        for k in range(n):
            rel: dict = {}
            for i, j in itertools.product(range(n), repeat=2):
                c = g.br(g.labels[i], g.labels[j]).get(g.labels[k], ZERO)
                if c:
                    vadd(rel, poly_mul({((letters[x], i),): ONE}, {((letters[y], j),): ONE}), c)
            for z, c in a.br(x, y).items():
                vadd(rel, {((letters[z], k),): -c})
            rels.append(rel)
    return RepAlgebraPresentation(gens, rels)


# ---- universal representation ------------------------------------------------

class UniversalRep:
    """pi : L -> g (x) L_g on Lie elements of the cobar model, together with
    the induced differential on L_g = Sym(g* (x) V)."""

    def __init__(self, R: CobarAlgebra, g: LieAlgebraSpec):
        if not g.is_ordinary:
            raise ModelError("g must be an ordinary Lie algebra")
        self.R = R
        self.g = g
        self.n = len(g.labels)
        gi = {z: i for i, z in enumerate(g.labels)}
        self.c = {}
        for i, j in itertools.product(range(self.n), repeat=2):
            for z, c in g.br(g.labels[i], g.labels[j]).items():
                self.c.setdefault((i, j), {})[gi[z]] = c
        self._pi: dict = {}
        self._d: dict = {}

    def gen(self, a: Letter, i: int) -> dict:
        return {((a, i),): ONE}

    def pi_lyndon(self, l: tuple) -> dict:
        """Image of the standard bracketing of a Lyndon word: i -> poly."""
        if l in self._pi:
            return self._pi[l]
        if len(l) == 1:
            out = {i: self.gen(l[0], i) for i in range(self.n)}
        else:
            u, v = standard_factorization(l)
            out = self.bracket_images(self.pi_lyndon(u), self.pi_lyndon(v))
        self._pi[l] = out
        return out

    def bracket_images(self, A: dict, B: dict) -> dict:
        """[sum e_i (x) f_i, sum e_j (x) g_j] = sum [e_i,e_j] (x) f_i g_j."""
        out: dict = {}
        for i, f in A.items():
            for j, h in B.items():
                cij = self.c.get((i, j))
                if not cij:
                    continue
                fh = poly_mul(f, h)
                if not fh:
                    continue
                for k, c in cij.items():
                    vadd(out.setdefault(k, {}), fh, c)
        return {k: v for k, v in out.items() if v}

    def pi_tensor(self, t: dict) -> dict:
        """Image of a Lie element given as a word vector, via its Lyndon
        coordinates."""
        out: dict = {}
        for key, c in lie_coordinates(t).items():
            for k, f in self._pi_key(key).items():
                vadd(out.setdefault(k, {}), f, c)
        return {k: v for k, v in out.items() if v}

    def _pi_key(self, key):
        kind, l = key
        if kind == "l":
            return self.pi_lyndon(l)
        p = self.pi_lyndon(l)
        return self.bracket_images(p, p)

    # differential on L_g
    def d_gen(self, gnr) -> dict:
        """d(x_{a,k}) = k-th component of pi(d a)."""
        if gnr not in self._d:
            a, k = gnr
            da = self.R.d_letter(a)
            self._d[gnr] = self.pi_tensor(da).get(k, {}) if da else {}
        return self._d[gnr]

    def d(self, f: dict) -> dict:
        img = lambda g: self.d_gen(g)
        img.degree = -1
        return derivation(f, img)


def lie_coordinates(t: dict) -> dict:
    """Coordinates of a Lie element (word vector) on standard bracketings of
    Lyndon words and squares of odd ones: ("l", word) / ("sq", word) -> c."""
    if not t:
        return {}
    out = {}
    by_len: dict = defaultdict(dict)
    for w, c in t.items():
        by_len[len(w)][w] = c
    for n, part in by_len.items():
        letters = sorted({a for w in part for a in w})
        basis = _lie_basis(tuple(letters), n)
        e = Echelon()
        for key, vec in basis:
            e.add(vec, {key: ONE})
        r, p = e.reduce(part, {})
        if r:
            raise LinearAlgebraError("element is not in the free Lie algebra")
        for key, c in p.items():
            out[key] = -c
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _lie_basis(letters: tuple, n: int) -> tuple:
    out = []
    for l in lyndon_words(letters, n):
        if len(l) == n:
            out.append((("l", l), bracketing(l).terms))
    if n % 2 == 0:
        for l in lyndon_words(letters, n // 2):
            if len(l) == n // 2 and word_degree(l) & 1:
                p = bracketing(l)
                out.append((("sq", l), (p * p + p * p).terms))
    return tuple(out)


# ---- Drinfeld traces ---------------------------------------------------------

@dataclass
class SymmetricForm:
    """P in Sym^p(g*) given by coefficients on sorted index tuples (the
    multilinear form is the symmetric extension)."""
    p: int
    coeffs: dict                      # sorted index tuple -> value

    def __call__(self, idx: tuple):
        return self.coeffs.get(tuple(sorted(idx)), ZERO)

    @classmethod
    def from_bilinear(cls, B: InvariantForm) -> "SymmetricForm":
        n = len(B.g.labels)
        return cls(2, {(i, j): B(i, j) for i in range(n) for j in range(i, n) if B(i, j)})


def _pbw_basis(letters: tuple, content: tuple, p: int) -> list:
    """Symmetrized products of p Lyndon-basis Lie elements with total letter
    content ``content`` (sorted tuple): (factor keys, word vector)."""
    n = len(content)
    pieces = []
    for m in range(1, n + 1):
        for key, vec in _lie_basis(letters, m):
            c = tuple(sorted(next(iter(vec))))
            pieces.append((key, c, vec))
    out = []

    def rec(start, chosen, used):
        if len(chosen) == p:
            if tuple(sorted(used)) == content:
                facs = [Tensor._from(dict(pieces[k][2])) for k in chosen]
                out.append((tuple(pieces[k][0] for k in chosen), symmetrize(facs).terms))
            return
        for k in range(start, len(pieces)):
            c = pieces[k][1]
            if len(used) + len(c) > n:
                continue
            odd_repeat = k in chosen and (word_degree(c) & 1)
            if odd_repeat:
                continue
            rec(k, chosen + [k], used + list(c))

    rec(0, [], [])
    return out


def sym_coordinates(x: dict, p: int) -> dict:
    """Coordinates of x in Sym^p(L) on symmetrized Lyndon products."""
    out: dict = {}
    blocks: dict = defaultdict(dict)
    for w, c in x.items():
        blocks[tuple(sorted(w))][w] = c
    for content, part in blocks.items():
        letters = tuple(sorted(set(content)))
        e = Echelon()
        for key, vec in _pbw_basis(letters, content, p):
            e.add(vec, {key: ONE})
        r, pay = e.reduce(part, {})
        if r:
            raise ValueError("element is not in Sym^p(L)")
        for key, c in pay.items():
            vadd(out, {key: -c})
    return out


def drinfeld_trace(rep: UniversalRep, P: SymmetricForm, x: dict) -> dict:
    """sum over symmetrized products s(l_1..l_p) of P(pi l_1, ..., pi l_p)."""
    out: dict = {}
    for keys, c in sym_coordinates(x, P.p).items():
        imgs = [rep._pi_key(k) for k in keys]
        for idx in itertools.product(*[sorted(im) for im in imgs]):
            coef = P(idx)
            if not coef:
                continue
            f = {(): ONE}
            for im, i in zip(imgs, idx):
                f = poly_mul(f, im[i])
                if not f:
                    break
            if f:
                vadd(out, f, c * coef)
    return out


def necklace_lift(alpha: dict, p: int) -> dict:
    """Sym^p(L) component of a word lift of a pure-weight necklace vector."""
    out: dict = {}
    for u, c in alpha.items():
        comps = hodge_split(u)
        if p < len(comps):
            vadd(out, comps[p], c)
    return out


# ---- Poisson bracket on L_g --------------------------------------------------

class RepPoisson:
    """Biderivation on L_g with {x_(a,i), x_(b,j)} = B^{ij} {{a,b}} where
    {{a,b}} is the scalar double bracket of two letters and B^{ij} the
    inverse of the invariant form."""

    def __init__(self, rep: UniversalRep, pairing: CyclicPairing, form: InvariantForm):
        self.rep = rep
        self.dp = poisson_for(rep.R, pairing)
        self.N = self.dp.N
        self.inv = form.inverse()
        self._gen: dict = {}

    def gen_bracket(self, x, y):
        key = (x, y)
        if key not in self._gen:
            (a, i), (b, j) = x, y
            kij = self.inv.get((i, j), ZERO)
            val = ZERO
            if kij:
                dw = self.dp.double_word((a,), (b,))
                val = dw.get(((), ()), ZERO) * kij
            self._gen[key] = val
        return self._gen[key]

    def __call__(self, f: dict, g: dict) -> dict:
        out: dict = {}
        for m1, a in f.items():
            for m2, b in g.items():
                for k in range(len(m1)):
                    s1, r1 = _pull(m1, k, "right")
                    for l in range(len(m2)):
                        c = self.gen_bracket(m1[k], m2[l])
                        if not c:
                            continue
                        s2, r2 = _pull(m2, l, "left")
                        s, m = mono_mul(r1, r2)
                        if s:
                            vadd(out, {m: a * b * c * s * s1 * s2})
        return out


# ---- derived representation complex -----------------------------------------

class DerivedRepComplex:
    """L_g with its differential, truncated by letter weight."""

    def __init__(self, rep: UniversalRep, max_weight: int):
        self.rep = rep
        self.W = max_weight
        self.gens = [(a, i) for a in rep.R.letters for i in range(rep.n)]
        self._basis: dict = {}

    def basis(self, weight: int, degree: int) -> list:
        key = (weight, degree)
        if key not in self._basis:
            out = []

            def rec(start, m, w, d):
                if w == weight:
                    if d == degree:
                        out.append(tuple(m))
                    return
                for k in range(start, len(self.gens)):
                    g = self.gens[k]
                    if w + g[0].weight > weight:
                        continue
                    if _gdeg(g) & 1 and m and m[-1] == g:
                        continue
                    rec(k, m + [g], w + g[0].weight, d + _gdeg(g))

            rec(0, [], 0, 0)
            self._basis[key] = out
        return self._basis[key]

    def d(self, f: dict) -> dict:
        return self.rep.d(f)

    def d_squared_defects(self) -> list:
        bad = []
        top = max((a.degree for a in self.rep.R.letters), default=0)
        for w in range(1, self.W + 1):
            for deg in range(0, w * top + 1):
                for m in self.basis(w, deg):
                    if self.d(self.d({m: ONE})):
                        bad.append(m)
        return bad

    def boundary_certificate(self, z: dict):
        """Some y with d y = z (exact), or None when z is not a boundary
        inside the truncation; z must be homogeneous."""
        if not z:
            return {}
        m0 = next(iter(z))
        w, deg = poly_weight(m0), poly_deg(m0)
        e = Echelon()
        for m in self.basis(w, deg + 1):
            e.add(self.d({m: ONE}), {m: ONE})
        r, p = e.reduce(z, {})
        if r:
            return None
        y = {m: -c for m, c in p.items() if c}
        if self.d(y) != {k: v for k, v in z.items() if v}:
            raise LinearAlgebraError("boundary certificate does not verify")
        return y

    def h0_dims(self, max_weight: int) -> dict:
        """dim of degree-0 polynomials modulo d(degree 1), per weight."""
        out = {}
        for w in range(0, max_weight + 1):
            c0 = self.basis(w, 0)
            r = Echelon()
            for m in self.basis(w, 1):
                r.add(self.d({m: ONE}))
            out[w] = len(c0) - r.rank
        return out


def quotient_dims(pres: RepAlgebraPresentation, max_degree: int) -> dict:
    """Polynomial-degree dims of Sym(generators) / (relations), by linear
    algebra on the ideal truncated at each degree (relations are
    homogeneous quadratic-linear only for abelian a: then degree = weight)."""
    gens = sorted(pres.generators)
    out = {}
    for n in range(0, max_degree + 1):
        monos = list(itertools.combinations_with_replacement(gens, n))
        e = Echelon()
        for rel in pres.relations:
            for m in itertools.combinations_with_replacement(gens, n - _rel_deg(rel)) \
                    if n - _rel_deg(rel) >= 0 else []:
                e.add(poly_mul(rel, {tuple(m): ONE}))
        out[n] = len(monos) - e.rank
    return out


def _rel_deg(rel: dict) -> int:
    return max(len(m) for m in rel)


# ---- the trace is a Lie map up to boundaries ---------------------------------

@dataclass
class TracePair:
    i: int
    j: int
    lhs: dict                 # Tr({alpha, beta})
    rhs: dict                 # {Tr alpha, Tr beta}
    certificate: dict | None  # y with d y = lhs - rhs

    @property
    def ok(self) -> bool:
        return self.certificate is not None


@dataclass
class TraceReport:
    classes: list
    traces: list
    pairs: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.pairs) and all(p.ok for p in self.pairs)


def verify_trace_lie_hom(R: CobarAlgebra, pairing: CyclicPairing, g: LieAlgebraSpec,
                         max_weight: int = 2, max_degree: int = 0,
                         form: InvariantForm | None = None) -> TraceReport:
    """For representatives of HC^(2) classes of weight <= max_weight: the
    trace of their bracket minus the rep-side bracket of their traces is a
    boundary of the derived representation complex (solved exactly)."""
    form = form or killing_form(g)
    P = SymmetricForm.from_bilinear(form)
    rep = UniversalRep(R, g)
    pb = RepPoisson(rep, pairing, form)
    hb = HomologyBrackets(R, pairing, max_degree, max_weight)
    classes = [a for _, cs in sorted(hb.classes(2).items()) for a in cs
               if max(word_weight(u) for u in a) <= max_weight]
    lifts = [necklace_lift(a, 2) for a in classes]
    traces = [drinfeld_trace(rep, P, x) for x in lifts]
    cx = DerivedRepComplex(rep, 2 * max_weight)
    report = TraceReport(classes, traces)
    for i, j in itertools.product(range(len(classes)), repeat=2):
        br = hb.dp.bracket(lifts[i], lifts[j]).terms
        comps = [k for k, v in enumerate(hodge_split_vec(br)) if v]
        if any(k != 2 for k in comps):
            raise LinearAlgebraError("bracket of Sym^2 elements left Sym^2")
        lhs = drinfeld_trace(rep, P, br)
        rhs = pb(traces[i], traces[j])
        diff = dict(lhs)
        vadd(diff, rhs, -ONE)
        report.pairs.append(TracePair(i, j, lhs, rhs, cx.boundary_certificate(diff)))
    return report


def hodge_split_vec(v: dict) -> list:
    out: list = []
    for u, c in v.items():
        for r, comp in enumerate(hodge_split(u)):
            while len(out) <= r:
                out.append({})
            vadd(out[r], comp, c)
    return out
