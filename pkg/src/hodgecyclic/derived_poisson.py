"""Cyclic pairings on a coalgebra and the brackets they induce on its cobar
algebra R: the double bracket on R, the necklace Lie bracket on R_nat, the
action on cyclic one-forms, and Hodge profiles of all of these at chain and
homology level.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

from .cyclic_complexes import (Necklace, OneForm, TotalComplex, cyclic_hodge, engine_for,
                               hochschild_hodge, natural_projection_vec, necklace_canonical)
from .exact_linear import (ONE, ZERO, Echelon, HomologyGroup, LinearAlgebraError, Q,
                           homology_group, kernel, rank, scalar, vadd)
from .free_structures import Letter, Tensor, hodge_split, reorder_sign, word_degree, word_weight
from .koszul_models import CoalgebraSpec, CobarAlgebra

UNIT = "1"


def _sgn(k: int) -> int:
    return -1 if k & 1 else 1


class PairingError(ValueError):
    """A pairing axiom fails; ``axiom`` names it and ``pair`` is the witness."""

    def __init__(self, axiom: str, pair, detail: str = ""):
        self.axiom = axiom
        self.pair = pair
        msg = f"{axiom} fails at {pair!r}"
        super().__init__(msg + (f": {detail}" if detail else ""))


# ---- cyclic pairings -------------------------------------------------------

def full_coproduct(C: CoalgebraSpec, c) -> dict:
    """Counital coproduct, the unit written as ``UNIT``."""
    if c == UNIT:
        return {(UNIT, UNIT): ONE}
    out = dict(C.cop(c))
    out[(UNIT, c)] = out.get((UNIT, c), ZERO) + 1
    out[(c, UNIT)] = out.get((c, UNIT), ZERO) + 1
    return out


def _constraints(C: CoalgebraSpec, n: int, value, deg: dict):
    """Cyclicity and differential constraints on a pairing of degree n.

    ``value(a, b)`` returns the pairing as a linear form ``{key: coeff}``; the
    result is a list of (axiom, pair, residual form) with nonzero residuals.
    Cyclicity:  sum (-1)^{|v''||w|} <v',w> v''  =  (-1)^{n+|v|+|w|} sum (-1)^{|w'||w''|} <v,w''> w'.
    Compatibility with d (a chain map C[n] (x) C[n] -> k[n]):
    <du,v> + (-1)^{|u|+n} <u,dv> = 0.
    """
    labels = [UNIT] + list(C.labels)
    cop = {c: full_coproduct(C, c) for c in labels}
    out = []
    for v in labels:
        for w in labels:
            acc: dict = {}
            for (a, b), c in cop[v].items():
                s = c * _sgn(deg[b] * deg[w])
                for k, x in value(a, w).items():
                    vadd(acc, {(b, k): s * x})
            e = _sgn(n + deg[v] + deg[w])
            for (a, b), c in cop[w].items():
                s = -c * e * _sgn(deg[a] * deg[b])
                for k, x in value(v, b).items():
                    vadd(acc, {(a, k): s * x})
            if acc:
                by: dict = defaultdict(dict)
                for (lab, k), x in acc.items():
                    by[lab][k] = x
                for lab, form in sorted(by.items(), key=lambda t: str(t[0])):
                    out.append(("cyclicity", (v, w), form))
    for u in labels:
        for v in labels:
            acc = {}
            for b, x in C.d(u).items() if u != UNIT else ():
                vadd(acc, value(b, v), x)
            for b, x in C.d(v).items() if v != UNIT else ():
                vadd(acc, value(u, b), x * _sgn(deg[u] + n))
            if acc:
                out.append(("differential", (u, v), acc))
    return out


class CyclicPairing:
    """Graded symmetric pairing of degree n on a coaugmented coalgebra C,
    unit included (label ``UNIT``), satisfying the cyclicity identity and
    compatibility with d.  Entries for one order are completed by symmetry.
    """

    def __init__(self, C: CoalgebraSpec, values: dict, degree: int,
                 poincare: bool = False, check: bool = True):
        self.C = C
        self.degree = degree
        self.poincare = poincare
        self.deg = {UNIT: 0, **C.degrees}
        self.labels = [UNIT] + list(C.labels)
        table: dict = {}
        for (a, b), x in values.items():
            x = scalar(x)
            if not x:
                continue
            for lab in (a, b):
                if lab not in self.deg:
                    raise PairingError("basis", (a, b), f"unknown label {lab!r}")
            mirrored = x * _sgn(self.deg[a] * self.deg[b])
            for key, val in (((a, b), x), ((b, a), mirrored)):
                if key in table and table[key] != val:
                    raise PairingError("symmetry", (a, b))
                table[key] = val
        self.table = table
        self._poisson = {}
        if check:
            self.validate()

    def __call__(self, a, b):
        return self.table.get((a, b), ZERO)

    def violations(self) -> list:
        """All failing axioms as (axiom, pair) in a fixed order."""
        out = []
        n = self.degree
        for (a, b) in sorted(self.table, key=str):
            if self.deg[a] + self.deg[b] + n != 0:
                out.append(("degree", (a, b)))
        seen = set()
        for axiom, pair, _ in _constraints(self.C, n, lambda a, b: ({0: self(a, b)} if self(a, b) else {}),
                                           self.deg):
            if (axiom, pair) not in seen:
                seen.add((axiom, pair))
                out.append((axiom, pair))
        if self.poincare and not self.nondegenerate():
            out.append(("nondegeneracy", None))
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise PairingError(*bad[0])

    def nondegenerate(self) -> bool:
        rows = [{b: self(a, b) for b in self.labels if self(a, b)} for a in self.labels]
        return rank(rows) == len(self.labels)

    def letter_value(self, a: Letter, b: Letter):
        """Pairing of the coalgebra elements behind two cobar letters."""
        return self(a.id, b.id)


def volume_pairing(C: CoalgebraSpec, top=None, poincare: bool = True) -> CyclicPairing:
    """The cyclic pairing normalized by <1, top> = 1, required to be unique.

    ``top`` defaults to the unique basis element of maximal degree."""
    deg = {UNIT: 0, **C.degrees}
    if top is None:
        m = max(C.degrees.values())
        tops = [c for c in C.labels if C.degrees[c] == m]
        if len(tops) != 1:
            raise PairingError("uniqueness", tuple(tops), "no unique top class")
        top = tops[0]
    n = -deg[top]
    labels = [UNIT] + list(C.labels)
    var = {}
    for i, u in enumerate(labels):
        for v in labels[i:]:
            if deg[u] + deg[v] + n == 0 and not (u == v and deg[u] & 1):
                var[(u, v)] = len(var)

    def form(a, b):
        if (a, b) in var:
            return {var[(a, b)]: ONE}
        if (b, a) in var:
            return {var[(b, a)]: Q(_sgn(deg[a] * deg[b]))}
        return {}

    rows = [f for _, _, f in _constraints(C, n, form, deg)]
    cols = [dict() for _ in var]
    for i, f in enumerate(rows):
        for k, x in f.items():
            cols[k][i] = x
    sol = kernel(cols)
    if len(sol) != 1:
        raise PairingError("uniqueness", (UNIT, top), f"{len(sol)}-dimensional solution space")
    z = sol[0]
    lead = z.get(var[(UNIT, top)], ZERO)
    if not lead:
        raise PairingError("uniqueness", (UNIT, top), "cyclic pairings vanish on the top class")
    values = {pair: z[k] / lead for pair, k in var.items() if z.get(k)}
    return CyclicPairing(C, values, n, poincare=poincare)


# ---- brackets --------------------------------------------------------------

@dataclass
class BracketResult:
    """A bracket value with its Hodge components (r -> component)."""
    value: object
    hodge_profile: dict

    def consistent(self) -> bool:
        total = None
        for comp in self.hodge_profile.values():
            total = comp if total is None else total + comp
        if total is None:
            return not self.value
        return total == self.value

    @property
    def support(self) -> list:
        return sorted(r for r, c in self.hodge_profile.items() if c)


def _words_split(terms: dict) -> dict:
    """Hodge components of a sparse word vector: r -> vector."""
    out: dict = defaultdict(dict)
    for w, c in terms.items():
        for r, comp in enumerate(hodge_split(w)):
            if comp:
                vadd(out[r], comp, c)
    return {r: v for r, v in out.items() if v}


def hodge_profile(x) -> dict:
    """Hodge components of a tensor, necklace or one-form."""
    if isinstance(x, Tensor):
        return {r: Tensor._from(v) for r, v in _words_split(x.terms).items()}
    if isinstance(x, Necklace):
        out = {}
        for r, v in _words_split(x.terms).items():
            nv = natural_projection_vec(v)
            if nv:
                out[r] = Necklace._raw(nv)
        return out
    if isinstance(x, OneForm):
        out: dict = defaultdict(dict)
        for a, part in x.by_letter().items():
            for r, v in _words_split(part).items():
                for w, c in v.items():
                    vadd(out[r], {(w, a): c})
        return {r: OneForm._raw(v) for r, v in out.items() if v}
    raise TypeError(f"no Hodge profile for {type(x).__name__}")


class DerivedPoisson:
    """Brackets induced on R = cobar(C) by a cyclic pairing of degree n.

    The double bracket has degree N = n + 2; for words u, w it is
    sum over letter pairs <u_i, w_j> (w_<j u_>i) (x) (u_<i w_>j), with the
    Koszul sign of bringing u_i, w_j to the front and the remaining letters
    into the output order, times (-1)^{n|u|} for the pairing (degree n)
    passing the first argument.
    """

    def __init__(self, R: CobarAlgebra, pairing: CyclicPairing):
        if set(pairing.C.labels) != set(a.id for a in R.letters):
            raise PairingError("basis", None, "pairing and cobar algebra disagree on the basis")
        self.R = R
        self.pairing = pairing
        self.n = pairing.degree
        self.N = pairing.degree + 2
        self.partners: dict = defaultdict(list)
        for a in R.letters:
            for b in R.letters:
                x = pairing.letter_value(a, b)
                if x:
                    self.partners[a].append((b, x))
        self._dw: dict = {}
        self._bw: dict = {}

    # double bracket and bracket on R
    def double_word(self, u, w) -> dict:
        key = (u, w)
        out = self._dw.get(key)
        if out is not None:
            return out
        out = {}
        if u and w:
            n, m = len(u), len(w)
            degs = [a.degree for a in u + w]
            s0 = _sgn(self.n * word_degree(u))
            pos = {}
            for j, b in enumerate(w):
                pos.setdefault(b, []).append(j)
            for i, a in enumerate(u):
                for b, x in self.partners.get(a, ()):
                    for j in pos.get(b, ()):
                        order = ([i, n + j] + list(range(n, n + j)) + list(range(i + 1, n))
                                 + list(range(i)) + list(range(n + j + 1, n + m)))
                        s = s0 * reorder_sign(degs, order)
                        vadd(out, {(w[:j] + u[i + 1:], u[:i] + w[j + 1:]): x * s})
        self._dw[key] = out
        return out

    def double_bracket(self, x, y) -> dict:
        """{{x, y}} as ``{(left word, right word): coeff}``."""
        out: dict = {}
        for u, a in _terms(x).items():
            for w, b in _terms(y).items():
                vadd(out, self.double_word(u, w), a * b)
        return out

    def bracket_word(self, u, w) -> dict:
        key = (u, w)
        out = self._bw.get(key)
        if out is None:
            out = {}
            for (l, r), c in self.double_word(u, w).items():
                vadd(out, {l + r: c})
            self._bw[key] = out
        return out

    def bracket(self, x, y) -> Tensor:
        """{x, y} = multiplication after the double bracket."""
        out: dict = {}
        for u, a in _terms(x).items():
            for w, b in _terms(y).items():
                vadd(out, self.bracket_word(u, w), a * b)
        return Tensor._from(out)

    def necklace_bracket(self, a, b) -> Necklace:
        """Bracket on R_nat computed on canonical lifts."""
        out: dict = {}
        for u, x in _terms(a).items():
            for w, y in _terms(b).items():
                vadd(out, self.bracket_word(u, w), x * y)
        return Necklace._raw(natural_projection_vec(out))

    # action on one-forms R (x) V
    def forms_word(self, rw, q, v) -> dict:
        """{r, q (x) v} for a word r, word q and letter v, on R (x) V."""
        out: dict = {}
        for u, c in self.bracket_word(rw, q).items():
            vadd(out, {(u, v): c})
        s = _sgn((word_degree(rw) + self.n) * word_degree(q))
        dq = word_degree(q)
        for beta, c in self.bracket_word(rw, (v,)).items():
            # nat(q b_<i d(b_i) b_>i) = (-1)^{|b_>i|(|q b_<i| + |b_i|)} (b_>i q b_<i) (x) b_i
            pre = 0
            for i, b in enumerate(beta):
                post = word_degree(beta[i + 1:])
                t = _sgn(post * (dq + pre + b.degree))
                vadd(out, {(beta[i + 1:] + q + beta[:i], b): c * s * t})
                pre += b.degree
        return out

    def bracket_on_forms(self, r, form: OneForm) -> OneForm:
        out: dict = {}
        for rw, a in _terms(r).items():
            for (q, v), b in form.terms.items():
                vadd(out, self.forms_word(rw, q, v), a * b)
        return OneForm._raw(out)

    # differentials on the three spaces
    def d_necklace(self, a) -> Necklace:
        return Necklace._raw(natural_projection_vec(self.R.d_vec(_terms(a))))


def _terms(x) -> dict:
    if isinstance(x, (Tensor, Necklace, OneForm)):
        return x.terms
    return x


def poisson_for(R: CobarAlgebra, pairing: CyclicPairing) -> DerivedPoisson:
    dp = pairing._poisson.get(id(R))
    if dp is None:
        dp = pairing._poisson[id(R)] = DerivedPoisson(R, pairing)
    return dp


def double_bracket(u, w, pairing: CyclicPairing, R: CobarAlgebra) -> dict:
    return poisson_for(R, pairing).double_bracket(u, w)


def bracket_r(u, w, pairing: CyclicPairing, R: CobarAlgebra) -> BracketResult:
    val = poisson_for(R, pairing).bracket(u, w)
    return BracketResult(val, hodge_profile(val))


def necklace_bracket(a, b, pairing: CyclicPairing, R: CobarAlgebra) -> BracketResult:
    val = poisson_for(R, pairing).necklace_bracket(a, b)
    return BracketResult(val, hodge_profile(val))


def bracket_on_forms(r, form: OneForm, pairing: CyclicPairing, R: CobarAlgebra) -> BracketResult:
    val = poisson_for(R, pairing).bracket_on_forms(r, form)
    return BracketResult(val, hodge_profile(val))


# ---- gates: antisymmetry, Jacobi, chain map ---------------------------------

def basis_necklaces(R: CobarAlgebra, max_weight: int) -> list:
    """Canonical nonvanishing cyclic words of weight <= max_weight."""
    E = engine_for(R)
    top = max((a.degree for a in R.letters), default=0)
    out = set()
    for w in range(1, max_weight + 1):
        for d in range(0, w * top + 1):
            for u in E.words(w, d):
                c = necklace_canonical(u)
                if c is not None:
                    out.add(c[0])
    return sorted(out, key=lambda u: (word_weight(u), word_degree(u), u))


@dataclass
class GateReport:
    checked: dict = field(default_factory=dict)     # gate -> number of instances
    failures: dict = field(default_factory=dict)    # gate -> list of witnesses

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def fail(self, gate, witness):
        self.failures.setdefault(gate, []).append(witness)

    def count(self, gate, k=1):
        self.checked[gate] = self.checked.get(gate, 0) + k


def bracket_gates(R: CobarAlgebra, pairing: CyclicPairing, max_weight: int = 4) -> GateReport:
    """Antisymmetry, chain-map property and Jacobi on basis necklaces of
    weight <= max_weight (Jacobi on all triples with some nonzero bracket)."""
    dp = poisson_for(R, pairing)
    N = dp.N
    B = basis_necklaces(R, max_weight)
    rep = GateReport()
    for g in ("antisymmetry", "chain map", "Jacobi"):
        rep.checked[g] = 0
        rep.failures[g] = []

    def nk(u):
        return Necklace._raw({u: ONE})

    br = {(a, b): dp.necklace_bracket(nk(a), nk(b)) for a in B for b in B}
    dB = {a: dp.d_necklace(nk(a)) for a in B}
    for a in B:
        da = word_degree(a)
        for b in B:
            db = word_degree(b)
            rep.count("antisymmetry")
            if br[(a, b)] != br[(b, a)].scale(-_sgn((da + N) * (db + N))):
                rep.fail("antisymmetry", (a, b))
            rep.count("chain map")
            lhs = dp.d_necklace(br[(a, b)])
            rhs = (dp.necklace_bracket(dB[a], nk(b))
                   + dp.necklace_bracket(nk(a), dB[b]).scale(_sgn(da + N)))
            if lhs != rhs:
                rep.fail("chain map", (a, b))
    for a, b, c in itertools.product(B, repeat=3):
        ab, ac, bc = br[(a, b)], br[(a, c)], br[(b, c)]
        if not (ab or ac or bc):
            continue
        rep.count("Jacobi")
        s = _sgn((word_degree(a) + N) * (word_degree(b) + N))
        lhs = dp.necklace_bracket(nk(a), bc)
        rhs = dp.necklace_bracket(ab, nk(c)) + dp.necklace_bracket(nk(b), ac).scale(s)
        if lhs != rhs:
            rep.fail("Jacobi", (a, b, c))
    return rep


# ---- chain-level Hodge filtration --------------------------------------------

def allowed_weights(q: int, p: int, symmetric: bool = False):
    """Hodge weights allowed for a bracket of weight-q and weight-p inputs.
    The sharp cases apply to the acting argument; symmetric=True also
    applies them to the second one (antisymmetric brackets only)."""
    if q == 1:
        return lambda r: r == p - 1
    if q == 2:
        return lambda r: r == p
    if not symmetric:
        return lambda r: r <= p + q - 2
    if p == 1:
        return lambda r: r == q - 1
    if p == 2:
        return lambda r: r == q
    return lambda r: r <= p + q - 2


def hodge_basis(R: CobarAlgebra, max_weight: int, min_weight: int = 1) -> list:
    """(r, weight, vector) for a basis of every Sym^r(L) block of R."""
    E = engine_for(R)
    top = max((a.degree for a in R.letters), default=0)
    out = []
    for w in range(min_weight, max_weight + 1):
        for d in range(0, w * top + 1):
            for r in range(0 if w == 0 else 1, w + 1):
                for v in E.sym_block(r, w, d):
                    out.append((r, w, v))
    return out


def chain_filtration_check(R: CobarAlgebra, pairing: CyclicPairing, max_weight: int,
                           forms: bool = True) -> GateReport:
    """Hodge inclusions for {R^(q), R^(p)} on R and {R^(m), R^(p) (x) V} on
    one-forms, over all basis pairs whose bracket has weight <= max_weight
    (input weights a, b with a + b - 2 <= max_weight; one-forms count the
    letter)."""
    dp = poisson_for(R, pairing)
    rep = GateReport()
    rep.checked = {"R": 0, "forms": 0}
    rep.failures = {"R": [], "forms": []}
    basis = hodge_basis(R, max_weight + 1)
    for qa, wa, alpha in basis:
        for pb, wb, beta in basis:
            if wa + wb - 2 > max_weight:
                continue
            rep.count("R")
            ok = allowed_weights(qa, pb)
            val = dp.bracket(alpha, beta)
            bad = [r for r in _words_split(val.terms) if not ok(r)]
            if bad:
                rep.fail("R", (qa, pb, alpha, beta, bad))
    if forms:
        fbasis = [(0, 0, {(): ONE})] + basis
        for ma, wa, alpha in basis:
            for pb, wb, q in fbasis:
                for v in R.letters:
                    if wa + wb + v.weight - 2 > max_weight:
                        continue
                    rep.count("forms")
                    ok = allowed_weights(ma, pb)
                    form = OneForm._raw({(w, v): c for w, c in q.items()})
                    val = dp.bracket_on_forms(alpha, form)
                    bad = [r for r in hodge_profile(val) if not ok(r)]
                    if bad:
                        rep.fail("forms", (ma, pb, alpha, q, v, bad))
    return rep


# ---- homology of the cyclic quotient, Hodge piece by piece -------------------

class NecklaceComplex:
    """(Sym^r L)_nat with the induced differential, truncated at weight W."""

    def __init__(self, R: CobarAlgebra, r: int, max_weight: int):
        self.R = R
        self.E = engine_for(R)
        self.r = r
        self.W = max_weight
        self._chains: dict = {}
        self._hom: dict = {}

    def chains(self, m: int) -> dict:
        """grading key -> independent necklace vectors spanning degree m."""
        if m not in self._chains:
            out: dict = defaultdict(list)
            ech: dict = defaultdict(Echelon)
            if m >= 0:
                for w in range(1, self.W + 1):
                    for v in self.E.sym_block(self.r, w, m):
                        nv = natural_projection_vec(v)
                        if not nv:
                            continue
                        key = self.R.grading_key(next(iter(nv)))
                        if ech[key].add(nv) is None:
                            out[key].append(nv)
            self._chains[m] = dict(out)
        return self._chains[m]

    def d(self, v: dict) -> dict:
        return natural_projection_vec(self.R.d_vec(v))

    def homology(self, m: int) -> HomologyGroup:
        if m not in self._hom:
            Cm, Cm1 = self.chains(m), self.chains(m + 1)
            reps = []
            merged = Echelon()
            for key in sorted(set(Cm) | set(Cm1)):
                g = homology_group(m, Cm.get(key, []), self.d,
                                   [self.d(v) for v in Cm1.get(key, [])])
                reps.extend(g.reps)
                merged.rows.update(g.boundaries.rows)
                merged.payload.update(g.boundaries.payload)
                for k, s in g.boundaries._occ.items():
                    merged._occ.setdefault(k, set()).update(s)
            self._hom[m] = HomologyGroup(m, reps, merged)
        return self._hom[m]


def column_zero_necklace(z: dict) -> dict:
    """Cyclic image of the column-0 part of a total-complex chain."""
    return natural_projection_vec({lab[1]: x for lab, x in z.items()
                                   if lab[0] == 0 and len(lab) == 2})


class HomologyBrackets:
    """Brackets of Hodge-graded cyclic homology classes, re-projected to
    homology Hodge piece by Hodge piece."""

    def __init__(self, R: CobarAlgebra, pairing: CyclicPairing, max_degree: int,
                 max_weight: int | None = None):
        self.R = R
        self.dp = poisson_for(R, pairing)
        self.E = engine_for(R)
        self.D = max_degree
        self.W = max_weight
        self._classes: dict = {}
        self._nc: dict = {}

    def classes(self, p: int) -> dict:
        """degree -> list of necklace cycles representing a basis of HC^(p)."""
        if p not in self._classes:
            hc = cyclic_hodge(self.R, p, self.D, self.W)
            out = {}
            for n, g in hc.groups.items():
                cyc = []
                for z in g.reps:
                    a = column_zero_necklace(z)
                    if self.dp.d_necklace(a):
                        raise LinearAlgebraError("column-0 image of a cyclic class is not a cycle")
                    cyc.append(a)
                out[n] = cyc
            self._classes[p] = (out, hc)
        return self._classes[p][0]

    def safe(self, p: int) -> dict:
        self.classes(p)
        return self._classes[p][1].safe

    def necklace_complex(self, r: int, m: int, weight: int) -> tuple:
        cap = weight
        if self.E.diagonal:
            cap = max(cap, m + r + 1)
        key = (r, cap)
        if key not in self._nc:
            self._nc[key] = NecklaceComplex(self.R, r, cap)
        certain = self.E.weight_homogeneous or self.E.safe(r, m, cap)
        return self._nc[key], certain

    def classify(self, x: dict, m: int) -> dict:
        """Hodge components of a necklace cycle of degree m as homology
        coordinates: r -> (coords, certain)."""
        out = {}
        for r, comp in _words_split(x).items():
            nv = natural_projection_vec(comp)
            if not nv:
                continue
            wt = max(word_weight(u) for u in nv)
            nc, certain = self.necklace_complex(r, m, wt)
            out[r] = (nc.homology(m).coords(nv), certain)
        return out

    def transfer_rank(self, p: int, n: int) -> int:
        """Rank of the column-0 map from HC^(p)_n into H_n((Sym^p L)_nat)."""
        cyc = self.classes(p).get(n, [])
        if not cyc:
            return 0
        wt = max(word_weight(u) for a in cyc for u in a) if any(cyc) else 1
        nc, _ = self.necklace_complex(p, n, wt)
        return rank(nc.homology(n).coords(a) for a in cyc)


@dataclass
class BracketEntry:
    p: int
    q: int
    deg_a: int
    deg_b: int
    i: int
    j: int
    value: dict             # necklace vector of the chain-level bracket
    classes: dict           # r -> homology coordinates (nonzero only)
    certain: bool
    consistent: bool        # Hodge components sum to the value

    @property
    def support(self) -> list:
        return sorted(self.classes)


@dataclass
class FiltrationReport:
    p: int
    q: int
    entries: list
    violations: list
    noncycles: list = field(default_factory=list)   # (a, b, i, j, r) left unclassified

    @property
    def ok(self) -> bool:
        return not self.violations and not self.noncycles

    @property
    def graded(self) -> bool:
        target = self.p + self.q - 2
        return all(set(e.support) <= {target} for e in self.entries)


def filtration_report(hb: HomologyBrackets, p: int, q: int) -> FiltrationReport:
    """Brackets {HC^(p)_a, HC^(q)_b} for all class pairs in the computed range,
    with homology Hodge profiles and the filtration assertions."""
    A, B = hb.classes(p), hb.classes(q)
    ok = allowed_weights(p, q, symmetric=True)
    N = hb.dp.N
    entries, bad = [], []
    for a, ca in sorted(A.items()):
        for b, cb in sorted(B.items()):
            for i, x in enumerate(ca):
                for j, y in enumerate(cb):
                    val = hb.dp.necklace_bracket(x, y).terms
                    m = a + b + N
                    total: dict = {}
                    for comp in _words_split(val).values():
                        vadd(total, natural_projection_vec(comp))
                    consistent = total == val
                    cls = hb.classify(val, m) if val else {}
                    certain = all(c for _, c in cls.values())
                    nz = {r: co for r, (co, _) in cls.items() if co}
                    e = BracketEntry(p, q, a, b, i, j, val, nz, certain, consistent)
                    entries.append(e)
                    if not consistent or any(not ok(r) for r in nz):
                        bad.append(e)
    return FiltrationReport(p, q, entries, bad)


# ---- action of cyclic classes on Hochschild classes -------------------------

def act_on_x2(dp: DerivedPoisson, alpha: dict, z: dict) -> dict:
    """Action of a homogeneous cyclic word vector on a chain of the two-column
    complex: the bracket on column 0 and the one-form action on column 1,
    the latter twisted by the Koszul sign of passing the column shift."""
    out: dict = {}
    s = _sgn(word_degree(next(iter(alpha))) + dp.N) if alpha else 1
    col0 = {lab[1]: x for lab, x in z.items() if lab[0] == 0}
    col1 = OneForm._raw({(lab[1], lab[2]): x for lab, x in z.items() if lab[0] == 1})
    for u, x in dp.bracket(alpha, col0).terms.items():
        if u:
            vadd(out, {(0, u): x})
    for (u, a), x in dp.bracket_on_forms(alpha, col1).terms.items():
        vadd(out, {(1, u, a): x * s})
    return out


def _split_x2(v: dict) -> dict:
    """Hodge components of a two-column chain: r -> chain."""
    out: dict = defaultdict(dict)
    for lab, x in v.items():
        for r, comp in enumerate(hodge_split(lab[1])):
            for u, y in comp.items():
                vadd(out[r], {(lab[0], u) + lab[2:]: x * y})
    return {r: c for r, c in out.items() if c}


def hh_action_report(hb: HomologyBrackets, p: int, q: int) -> FiltrationReport:
    """{HC^(p)_a, HH^(q)_b} on explicit cycles, classified in HH^(r).

    The action is a chain map only when the double bracket is DG on R (x) R;
    Hodge components of the action that fail to be cycles are listed in
    ``noncycles`` rather than classified."""
    R = hb.R
    A = hb.classes(p)
    hh = hochschild_hodge(R, q, hb.D, hb.W)
    ok = allowed_weights(p, q)
    N = hb.dp.N
    tcs: dict = {}
    entries, bad, noncycles = [], [], []
    for a, ca in sorted(A.items()):
        for b, g in sorted(hh.groups.items()):
            for i, x in enumerate(ca):
                for j, z in enumerate(g.reps):
                    val = act_on_x2(hb.dp, x, z)
                    m = a + b + N
                    comps = _split_x2(val)
                    total: dict = {}
                    for c in comps.values():
                        vadd(total, c)
                    nz, certain = {}, True
                    for r, c in comps.items():
                        wt = max(word_weight(lab[1]) + (lab[2].weight if len(lab) == 3 else 0)
                                 for lab in c)
                        cap = max(wt, m + r + 1) if hb.E.diagonal else wt
                        key = (r, cap)
                        if key not in tcs:
                            tcs[key] = TotalComplex(hb.E, r, 2, cap)
                        tc = tcs[key]
                        if tc.D(c):
                            # only happens when the double bracket is not DG on R (x) R
                            noncycles.append((a, b, i, j, r))
                            continue
                        co = tc.homology(m).coords(c) if m >= 0 else {}
                        certain = certain and (hb.E.weight_homogeneous or hb.E.safe(r, m, cap))
                        if co:
                            nz[r] = co
                    e = BracketEntry(p, q, a, b, i, j, val, nz, certain, total == val)
                    entries.append(e)
                    if total != val or any(not ok(r) for r in nz):
                        bad.append(e)
    return FiltrationReport(p, q, entries, bad, noncycles)


# ---- conjecture probe --------------------------------------------------------

@dataclass
class ProbeRow:
    p: int
    q: int
    pairs: int
    nonzero: int
    support: list
    verdict: str          # "graded", "spread", or "zero" when no bracket survives
    consistent: bool
    certain: bool


def _verdict(rep: FiltrationReport) -> str:
    if not any(e.classes for e in rep.entries):
        return "zero"
    return "graded" if rep.graded else "spread"


def conjecture_probe(R: CobarAlgebra, pairing: CyclicPairing, max_p: int, max_degree: int,
                     max_weight: int | None = None) -> list:
    """For p, q <= max_p: is every bracket of HC^(p), HC^(q) classes
    concentrated in Hodge weight p + q - 2?  Exploratory; asserts nothing."""
    if not pairing.nondegenerate():
        raise PairingError("nondegeneracy", None, "the probe needs a Poincare duality pairing")
    hb = HomologyBrackets(R, pairing, max_degree, max_weight)
    rows = []
    for p in range(1, max_p + 1):
        for q in range(1, max_p + 1):
            rep = filtration_report(hb, p, q)
            sup = sorted({r for e in rep.entries for r in e.support})
            rows.append(ProbeRow(p, q, len(rep.entries),
                                 sum(1 for e in rep.entries if e.classes), sup,
                                 _verdict(rep),
                                 all(e.consistent for e in rep.entries),
                                 all(e.certain for e in rep.entries)))
    return rows
