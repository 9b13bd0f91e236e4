"""Coalgebra models: Chevalley-Eilenberg coalgebras, cobar constructions,
and the Hopf structure of the tensor algebra (coproduct, Adams operations).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .exact_linear import ONE, Echelon, Q, scalar, vadd
from .free_structures import Letter, Tensor, reorder_sign


class ModelError(ValueError):
    pass


def _sgn(k: int) -> int:
    return -1 if k & 1 else 1


# ---- Lie algebras ----------------------------------------------------------

@dataclass
class LieAlgebraSpec:
    """Graded Lie algebra on named basis vectors.

    ``bracket[(x, y)]`` and ``differential[x]`` are sparse dicts over labels.
    Brackets given for one order are completed by graded antisymmetry.
    """
    labels: list[str]
    degrees: dict[str, int]
    bracket: dict[tuple, dict] = field(default_factory=dict)
    differential: dict[str, dict] = field(default_factory=dict)

    def __post_init__(self):
        full = {}
        for (x, y), v in self.bracket.items():
            v = {k: scalar(c) for k, c in v.items() if scalar(c)}
            for lab in (x, y, *v):
                if lab not in self.degrees:
                    raise ModelError(f"unknown basis element {lab!r}")
            s = -_sgn(self.degrees[x] * self.degrees[y])
            mirrored = {k: s * c for k, c in v.items()}
            for key, val in (((x, y), v), ((y, x), mirrored)):
                if key in full and full[key] != val:
                    raise ModelError(f"bracket of {key} is not graded antisymmetric")
                full[key] = val
        self.bracket = full
        self.differential = {x: {k: scalar(c) for k, c in v.items() if scalar(c)}
                             for x, v in self.differential.items()}
        self.validate()

    @property
    def is_ordinary(self) -> bool:
        return all(d == 0 for d in self.degrees.values()) and not any(self.differential.values())

    def br(self, x: str, y: str) -> dict:
        return self.bracket.get((x, y), {})

    def br_vec(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for a, c in u.items():
            for b, e in v.items():
                vadd(out, self.br(a, b), c * e)
        return out

    def d(self, x: str) -> dict:
        return self.differential.get(x, {})

    def d_vec(self, u: dict) -> dict:
        out: dict = {}
        for a, c in u.items():
            vadd(out, self.d(a), c)
        return out

    def validate(self):
        deg = self.degrees
        for (x, y), v in self.bracket.items():
            for k in v:
                if deg[k] != deg[x] + deg[y]:
                    raise ModelError(f"bracket [{x},{y}] is not homogeneous")
        for x, v in self.differential.items():
            for k in v:
                if deg[k] != deg[x] - 1:
                    raise ModelError(f"d({x}) has the wrong degree")
        L = self.labels
        for x, y, z in itertools.product(L, repeat=3):
            # [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
            lhs = self.br_vec({x: ONE}, self.br(y, z))
            rhs = self.br_vec(self.br(x, y), {z: ONE})
            vadd(rhs, self.br_vec({y: ONE}, self.br(x, z)), Q(_sgn(deg[x] * deg[y])))
            if vadd(lhs, rhs, -ONE):
                raise ModelError(f"Jacobi identity fails on ({x},{y},{z})")
        for x in L:
            if self.d_vec(self.d(x)):
                raise ModelError(f"d^2 != 0 on {x}")
        for x, y in itertools.product(L, repeat=2):
            lhs = self.d_vec(self.br(x, y))
            rhs = self.br_vec(self.d(x), {y: ONE})
            vadd(rhs, self.br_vec({x: ONE}, self.d(y)), Q(_sgn(deg[x])))
            if vadd(lhs, rhs, -ONE):
                raise ModelError(f"d is not a derivation on ({x},{y})")


# ---- coalgebras ------------------------------------------------------------

@dataclass
class CoalgebraSpec:
    """Coaugmented DG coalgebra given on a basis of the coaugmentation coideal.

    ``coproduct[c]`` is the reduced coproduct as ``{(a, b): coeff}``;
    ``differential[c]`` is ``{b: coeff}`` (degree -1).  Weights are positive
    and additive under the coproduct; the differential must not raise them.
    """
    labels: list[str]
    degrees: dict[str, int]
    weights: dict[str, int]
    coproduct: dict[str, dict] = field(default_factory=dict)
    differential: dict[str, dict] = field(default_factory=dict)
    cocommutative: bool = True
    check: bool = True
    # set when this is the CE coalgebra of a finite-dimensional ordinary Lie algebra
    lie_source: "LieAlgebraSpec | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.coproduct = {c: {k: scalar(v) for k, v in t.items() if scalar(v)}
                          for c, t in self.coproduct.items()}
        self.differential = {c: {k: scalar(v) for k, v in t.items() if scalar(v)}
                             for c, t in self.differential.items()}
        if self.check:
            self.validate()

    def cop(self, c) -> dict:
        return self.coproduct.get(c, {})

    def d(self, c) -> dict:
        return self.differential.get(c, {})

    def validate(self):
        deg, wt = self.degrees, self.weights
        for c in self.labels:
            if wt[c] < 1:
                raise ModelError(f"weight of {c} must be positive")
            for (a, b) in self.cop(c):
                if deg[a] + deg[b] != deg[c]:
                    raise ModelError(f"coproduct of {c} is not homogeneous")
                if wt[a] + wt[b] != wt[c]:
                    raise ModelError(f"coproduct of {c} does not add weights")
            for b in self.d(c):
                if deg[b] != deg[c] - 1 or wt[b] > wt[c]:
                    raise ModelError(f"d({c}) has the wrong degree or raises weight")
        for c in self.labels:
            # coassociativity of the reduced coproduct
            left: dict = {}
            right: dict = {}
            for (a, b), x in self.cop(c).items():
                for (a1, a2), y in self.cop(a).items():
                    vadd(left, {(a1, a2, b): x * y})
                for (b1, b2), y in self.cop(b).items():
                    vadd(right, {(a, b1, b2): x * y})
            if vadd(left, right, -ONE):
                raise ModelError(f"coproduct is not coassociative on {c}")
            if self.cocommutative:
                flip: dict = {}
                for (a, b), x in self.cop(c).items():
                    vadd(flip, {(b, a): x * _sgn(deg[a] * deg[b])})
                if vadd(flip, self.cop(c), -ONE):
                    raise ModelError(f"coproduct is not cocommutative on {c}")
            dd: dict = {}
            for b, x in self.d(c).items():
                vadd(dd, self.d(b), x)
            if dd:
                raise ModelError(f"d^2 != 0 on {c}")
            lhs: dict = {}
            for b, x in self.d(c).items():
                vadd(lhs, self.cop(b), x)
            rhs: dict = {}
            for (a, b), x in self.cop(c).items():
                for a2, y in self.d(a).items():
                    vadd(rhs, {(a2, b): x * y})
                for b2, y in self.d(b).items():
                    vadd(rhs, {(a, b2): x * y * _sgn(deg[a])})
            if vadd(lhs, rhs, -ONE):
                raise ModelError(f"d is not a coderivation on {c}")


def _sym_normalize(items, odd):
    """Sort a list of generator indices in the free graded-commutative
    algebra; returns (sorted tuple, sign) or (None, 0) for a repeated odd."""
    order = sorted(range(len(items)), key=lambda k: items[k])
    out = tuple(items[k] for k in order)
    for a, b in zip(out, out[1:]):
        if a == b and odd[a]:
            return None, 0
    return out, reorder_sign([odd[i] for i in items], order)


def ce_coalgebra(a: LieAlgebraSpec, max_weight: int | None = None) -> CoalgebraSpec:
    """Chevalley-Eilenberg coalgebra Sym^c(a[1]) with d_1 + d_2.

    Weight = number of factors.  Needed as a finite truncation when a has
    even shifted generators (odd-degree elements of a)."""
    labels = a.labels
    n = len(labels)
    sdeg = [a.degrees[x] + 1 for x in labels]
    odd = [d & 1 for d in sdeg]
    idx = {x: i for i, x in enumerate(labels)}
    if max_weight is None:
        if not all(odd):
            raise ModelError("CE coalgebra is infinite here; pass max_weight")
        max_weight = n
    monos = []
    for k in range(1, max_weight + 1):
        for m in itertools.combinations_with_replacement(range(n), k):
            if all(not (x == y and odd[x]) for x, y in zip(m, m[1:])):
                monos.append(m)
    name = {m: "^".join(labels[i] for i in m) for m in monos}
    degrees = {name[m]: sum(sdeg[i] for i in m) for m in monos}
    weights = {name[m]: len(m) for m in monos}
    mset = set(monos)

    cop = {}
    for m in monos:
        t: dict = {}
        k = len(m)
        for r in range(1, k):
            for S in itertools.combinations(range(k), r):
                Sc = [i for i in range(k) if i not in S]
                s = reorder_sign([sdeg[i] for i in m], list(S) + Sc)
                vadd(t, {(name[tuple(m[i] for i in S)], name[tuple(m[i] for i in Sc)]): Q(s)})
        cop[name[m]] = t

    diff = {}
    for m in monos:
        t: dict = {}
        k = len(m)
        pre = 0
        for i in range(k):
            x = labels[m[i]]
            for y, c in a.d(x).items():
                rest = list(m[:i]) + [idx[y]] + list(m[i + 1:])
                mono, s = _sym_normalize(rest, odd)
                if mono is not None and mono in mset:
                    vadd(t, {name[mono]: -c * s * _sgn(pre)})
            pre += sdeg[m[i]]
        for i, j in itertools.combinations(range(k), 2):
            rest = [m[l] for l in range(k) if l not in (i, j)]
            s0 = reorder_sign([sdeg[l] for l in m], [i, j] + [l for l in range(k) if l not in (i, j)])
            x, y = labels[m[i]], labels[m[j]]
            for z, c in a.br(x, y).items():
                mono, s = _sym_normalize([idx[z]] + rest, odd)
                if mono is not None and mono in mset:
                    vadd(t, {name[mono]: c * s * s0 * _sgn(a.degrees[x])})
        diff[name[m]] = t
    C = CoalgebraSpec([name[m] for m in monos], degrees, weights, cop, diff)
    if a.is_ordinary:
        C.lie_source = a
    return C


# ---- cobar -----------------------------------------------------------------

class CobarAlgebra:
    """Cobar construction T(C-bar[-1]) with its derivation differential."""

    def __init__(self, C: CoalgebraSpec):
        self.coalgebra = C
        # homology of Hodge weight p in degree n lives in letter weight n + p
        self.diagonal = C.lie_source is not None
        self.letters = [Letter(i, lab, C.degrees[lab] - 1, C.weights[lab])
                        for i, lab in enumerate(C.labels)]
        self.letter = {a.id: a for a in self.letters}
        self._dl = {}
        for a in self.letters:
            t: dict = {}
            for b, c in C.d(a.id).items():
                vadd(t, {(self.letter[b],): -c})
            for (x, y), c in C.cop(a.id).items():
                vadd(t, {(self.letter[x], self.letter[y]): c * _sgn(C.degrees[x])})
            self._dl[a] = t
        self.d_word = lru_cache(maxsize=500000)(self._d_word)
        for a in self.letters:
            dd = self.d(Tensor(self._dl[a]))
            if dd:
                raise ModelError(f"cobar differential squares to {dd} on letter {a.id}")
        self.gradings = self._find_gradings()

    def d_letter(self, a) -> dict:
        return self._dl[a]

    def _d_word(self, w) -> dict:
        out: dict = {}
        pre = 0
        for i, a in enumerate(w):
            s = _sgn(pre)
            head, tail = w[:i], w[i + 1:]
            for u, c in self._dl[a].items():
                vadd(out, {head + u + tail: c * s})
            pre += a.degree
        return out

    def d_vec(self, v: dict) -> dict:
        out: dict = {}
        for w, c in v.items():
            vadd(out, self.d_word(w), c)
        return out

    def d(self, t: Tensor) -> Tensor:
        r = Tensor()
        r.terms = self.d_vec(t.terms)
        return r

    def _find_gradings(self):
        """Integer vectors lambda on letters making d homogeneous."""
        L = self.letters
        e = Echelon()
        for a in L:
            for u in self._dl[a]:
                row: dict = {a.rank: ONE}
                for b in u:
                    vadd(row, {b.rank: -ONE})
                if row:
                    e.add(row)
        # basis of the solution space of the homogeneous system
        pivots = set(e.rows)
        free = [a.rank for a in L if a.rank not in pivots]
        sols = []
        for f in free:
            v = {f: ONE}
            for piv, row in e.rows.items():
                c = row.get(f)
                if c:
                    v[piv] = -c
            den = 1
            for c in v.values():
                den = den * c.denominator // _gcd(den, c.denominator)
            sols.append(tuple(int(v.get(i, 0) * den) for i in range(len(L))))
        return sols

    def grading_key(self, w) -> tuple:
        return tuple(sum(g[a.rank] for a in w) for g in self.gradings)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def cobar(C: CoalgebraSpec) -> CobarAlgebra:
    return CobarAlgebra(C)


# ---- Hopf structure on T(V) ------------------------------------------------

def hopf_coproduct(x: Tensor) -> dict:
    """Unshuffle coproduct with primitive letters: {(w1, w2): coeff}."""
    out: dict = {}
    for w, c in x.terms.items():
        n = len(w)
        degs = [a.degree for a in w]
        for r in range(n + 1):
            for S in itertools.combinations(range(n), r):
                Sc = [i for i in range(n) if i not in S]
                s = reorder_sign(degs, list(S) + Sc)
                vadd(out, {(tuple(w[i] for i in S), tuple(w[i] for i in Sc)): c * s})
    return out


def adams_operation(k: int, x: Tensor) -> Tensor:
    """psi^k = k-fold product after k-fold coproduct."""
    out: dict = {}
    for w, c in x.terms.items():
        n = len(w)
        degs = [a.degree for a in w]
        for f in itertools.product(range(k), repeat=n):
            order = sorted(range(n), key=lambda i: f[i])
            nw = tuple(w[i] for i in order)
            vadd(out, {nw: c * reorder_sign(degs, order)})
    r = Tensor()
    r.terms = out
    return r
