"""Free graded tensor algebras, free Lie algebras and the Eulerian splitting.

Words are tuples of :class:`Letter`.  A tensor element is a dict
``word -> mpq``; the thin :class:`Tensor` wrapper adds arithmetic.  The
symmetric group acts on the right, ``(v_1..v_n).s = (v_s(1)..v_s(n))``, with
the Koszul sign, and group-algebra elements are dicts ``perm -> mpq`` with
perms stored 0-based as tuples ``s`` meaning ``position k <- s[k]``.

Hodge weight always refers to word length.  The internal weight a letter
carries (its CE weight, say) only matters for truncation.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from functools import lru_cache
from operator import itemgetter
from typing import Iterable, NamedTuple

from .exact_linear import ONE, ZERO, Echelon, Q, vadd


class Letter(NamedTuple):
    rank: int          # position in the fixed letter order
    id: str
    degree: int
    weight: int = 1

    def __repr__(self):
        return self.id


Word = tuple  # tuple[Letter, ...]


def word_degree(w) -> int:
    return sum(a.degree for a in w)


def word_weight(w) -> int:
    return sum(a.weight for a in w)


def content(w) -> tuple:
    return tuple(sorted(w))


def fmt_word(w) -> str:
    return "[" + ",".join(a.id for a in w) + "]"


# ---- Koszul signs ----------------------------------------------------------

def koszul_sign(perm, degrees) -> int:
    """Sign of moving element i (degree degrees[i]) to position perm[i]."""
    s = 0
    n = len(perm)
    for i in range(n):
        if degrees[i] & 1:
            for j in range(i + 1, n):
                if degrees[j] & 1 and perm[i] > perm[j]:
                    s ^= 1
    return -1 if s else 1


def reorder_sign(degrees, order) -> int:
    """Sign of the rearrangement whose k-th entry is the old entry order[k]."""
    s = 0
    odd = [k for k in range(len(order)) if degrees[order[k]] & 1]
    for a in range(len(odd)):
        oa = order[odd[a]]
        for b in range(a + 1, len(odd)):
            if oa > order[odd[b]]:
                s ^= 1
    return -1 if s else 1


def act(w, perm):
    """Right action on a word: returns (new word, sign)."""
    return tuple(w[i] for i in perm), reorder_sign([a.degree for a in w], perm)


# ---- tensor elements -------------------------------------------------------

class Tensor:
    """Element of the free graded algebra T(V) with exact coefficients."""
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in (terms.items() if isinstance(terms, dict) else terms):
                c = Q(c)
                if c:
                    w = tuple(w)
                    x = self.terms.get(w, ZERO) + c
                    if x:
                        self.terms[w] = x
                    else:
                        self.terms.pop(w, None)

    @classmethod
    def _from(cls, terms: dict):
        """Wrap an already clean sparse dict without copying."""
        t = cls()
        t.terms = terms
        return t

    @classmethod
    def word(cls, w, c=1):
        return cls({tuple(w): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Tensor):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other):
        t = Tensor()
        t.terms = vadd(dict(self.terms), other.terms)
        return t

    def __sub__(self, other):
        t = Tensor()
        t.terms = vadd(dict(self.terms), other.terms, -ONE)
        return t

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        t = Tensor()
        c = Q(c)
        if c:
            t.terms = {w: c * x for w, x in self.terms.items()}
        return t

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, Tensor):
            return self.scale(other)
        out: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                vadd(out, {u + v: a * b})
        t = Tensor()
        t.terms = out
        return t

    def lengths(self):
        return sorted({len(w) for w in self.terms})

    def homogeneous_degree(self):
        ds = {word_degree(w) for w in self.terms}
        if len(ds) > 1:
            raise ValueError("element is not homogeneous in degree")
        return ds.pop() if ds else 0

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            parts.append(f"{c}*{fmt_word(w)}")
        return " + ".join(parts)


def commutator(x: Tensor, y: Tensor) -> Tensor:
    """Graded commutator xy - (-1)^{|x||y|} yx (bihomogeneous in degree)."""
    out: dict = {}
    for u, a in x.terms.items():
        du = word_degree(u)
        for v, b in y.terms.items():
            s = -1 if (du * word_degree(v)) & 1 else 1
            vadd(out, {u + v: a * b})
            vadd(out, {v + u: -s * a * b})
    t = Tensor()
    t.terms = out
    return t


# ---- Lyndon words and the free Lie algebra ---------------------------------

def lyndon_words(letters, max_len: int):
    """Lyndon words over the ordered letters, length <= max_len (Duval)."""
    letters = sorted(letters)
    k = len(letters)
    if not k:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(letters[i] for i in w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def standard_factorization(l):
    """l = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(l)):
        v = l[i:]
        if _is_lyndon(v):
            return l[:i], v
    raise ValueError("not a Lyndon word of length >= 2")


def _is_lyndon(w) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def bracketing(l) -> Tensor:
    """Standard bracketing P_l of a Lyndon word."""
    if len(l) == 1:
        return Tensor.word(l)
    u, v = standard_factorization(l)
    return commutator(bracketing(u), bracketing(v))


def lyndon_basis(letters, weight: int) -> list[Tensor]:
    """Basis of the free graded Lie algebra in a given total letter weight.

    Standard bracketings of Lyndon words, plus [P_l, P_l] for Lyndon words
    of odd degree (these squares are nonzero in the graded setting).
    """
    letters = list(letters)
    if not letters or weight < 1:
        return []
    minw = min(a.weight for a in letters)
    out = []
    for l in lyndon_words(letters, weight // minw):
        if word_weight(l) == weight:
            out.append(bracketing(l))
    if weight % 2 == 0:
        for l in lyndon_words(letters, (weight // 2) // minw):
            if word_weight(l) * 2 == weight and word_degree(l) & 1:
                p = bracketing(l)
                out.append(commutator(p, p))
    return out


# ---- Eulerian idempotents --------------------------------------------------

def descents(perm) -> int:
    return sum(1 for k in range(len(perm) - 1) if perm[k] > perm[k + 1])


@lru_cache(maxsize=None)
def _perms(n: int):
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def _eulerian_coefficients(n: int) -> tuple:
    """a[p][j] = coefficient of X^p in binomial(X - j + n, n), j = 1..n."""
    table = [[ZERO] * (n + 1) for _ in range(n + 1)]
    for j in range(1, n + 1):
        poly = [ONE]  # coefficients in X, low degree first
        for i in range(n):
            c = Q(n - j - i)  # factor (X + c)
            new = [ZERO] * (len(poly) + 1)
            for k, a in enumerate(poly):
                new[k] += a * c
                new[k + 1] += a
            poly = new
        f = Q(math.factorial(n))
        for p in range(n + 1):
            table[p][j] = poly[p] / f
    return tuple(tuple(r) for r in table)


def eulerian_idempotent(n: int, p: int) -> dict:
    """Eulerian idempotent e_n^(p) in Q[S_n] as ``{perm: coeff}``.

    Convention: e_0^(0) = id, e_n^(0) = 0 for n >= 1, e_n^(p) = 0 for p > n.
    """
    if n == 0:
        return {(): ONE} if p == 0 else {}
    if p < 1 or p > n:
        return {}
    a = _eulerian_coefficients(n)[p]
    out = {}
    for s in _perms(n):
        c = a[descents(s) + 1]
        if c:
            out[s] = c
    return out


def group_product(x: dict, y: dict) -> dict:
    """Product in Q[S_n] compatible with the right action: w.(xy) = (w.x).y."""
    out: dict = {}
    for a, c in x.items():
        for b, d in y.items():
            vadd(out, {tuple(a[i] for i in b): c * d})
    return out


def cyclic_norm(n: int) -> dict:
    """N = sum of powers of the cyclic shift (v_1..v_n) -> (v_2..v_n v_1)."""
    return {tuple((k + i) % n for k in range(n)): ONE for i in range(n)}


def embed_fixing_first(x: dict) -> dict:
    """S_{n-1} -> S_n acting on positions 2..n."""
    return {(0,) + tuple(i + 1 for i in s): c for s, c in x.items()}


def act_group(t: Tensor, g: dict) -> Tensor:
    out: dict = {}
    for w, c in t.terms.items():
        degs = [a.degree for a in w]
        for s, a in g.items():
            if len(s) != len(w):
                continue
            nw = tuple(w[i] for i in s)
            vadd(out, {nw: c * a * reorder_sign(degs, s)})
    r = Tensor()
    r.terms = out
    return r


# fast per-word splitting ----------------------------------------------------

@lru_cache(maxsize=None)
def _descent_classes(n: int):
    """Perms of length n grouped by descent count, as itemgetters."""
    groups = [[] for _ in range(n)]
    for s in _perms(n):
        groups[descents(s)].append(s)
    return tuple(tuple(g) for g in groups)


@lru_cache(maxsize=None)
def _getters(n: int):
    return tuple(tuple(itemgetter(*s) if n > 1 else (lambda w: (w[0],)) for s in g)
                 for g in _descent_classes(n))


@lru_cache(maxsize=None)
def _signs(n: int, mask: int):
    """Koszul signs of every perm (grouped like _descent_classes) for a word
    whose odd positions are the set bits of mask."""
    degs = [(mask >> i) & 1 for i in range(n)]
    return tuple(tuple(reorder_sign(degs, s) for s in g) for g in _descent_classes(n))


@lru_cache(maxsize=200000)
def hodge_split(w) -> tuple:
    """Hodge components of a single word: tuple indexed by p of dicts."""
    n = len(w)
    if n == 0:
        return ({(): ONE},)
    mask = 0
    for i, a in enumerate(w):
        if a.degree & 1:
            mask |= 1 << i
    counts = []
    getters = _getters(n)
    if mask == 0:
        for g in getters:
            counts.append(Counter(f(w) for f in g))
    else:
        signs = _signs(n, mask)
        for g, sg in zip(getters, signs):
            cnt: Counter = Counter()
            for f, s in zip(g, sg):
                cnt[f(w)] += s
            counts.append(cnt)
    a = _eulerian_coefficients(n)
    comps = [{} for _ in range(n + 1)]
    keys = set()
    for cnt in counts:
        keys.update(cnt)
    for u in keys:
        cs = [cnt.get(u, 0) for cnt in counts]
        for p in range(1, n + 1):
            row = a[p]
            x = ZERO
            for j, c in enumerate(cs):
                if c:
                    x += row[j + 1] * c
            if x:
                comps[p][u] = x
    return tuple(comps)


def hodge_component(t: Tensor, p: int) -> Tensor:
    out: dict = {}
    for w, c in t.terms.items():
        comps = hodge_split(w)
        if p < len(comps):
            vadd(out, comps[p], c)
    r = Tensor()
    r.terms = out
    return r


def pbw_decompose(t: Tensor) -> dict[int, Tensor]:
    """Split t into its Sym^p(L) components (all p present, nonzero only)."""
    acc: dict[int, dict] = {}
    for w, c in t.terms.items():
        for p, comp in enumerate(hodge_split(w)):
            if comp:
                vadd(acc.setdefault(p, {}), comp, c)
    out = {}
    for p, d in sorted(acc.items()):
        if d:
            r = Tensor()
            r.terms = d
            out[p] = r
    return out


def is_in_sym_p(t: Tensor, p: int) -> bool:
    comps = pbw_decompose(t)
    return all(q == p for q in comps)


def is_lie(t: Tensor) -> bool:
    return is_in_sym_p(t, 1)


def symmetrize(factors: list[Tensor]) -> Tensor:
    """(1/p!) sum over reorderings of the product of Lie factors, with Koszul
    signs from the factor degrees."""
    for f in factors:
        if f and not is_lie(f):
            raise ValueError("symmetrize: factor is not a Lie element")
    p = len(factors)
    if p == 0:
        return Tensor.word(())
    degs = [f.homogeneous_degree() for f in factors]
    out = Tensor()
    for s in _perms(p):
        prod = Tensor.word(())
        for i in s:
            prod = prod * factors[i]
        out = out + prod.scale(reorder_sign(degs, s))
    return out.scale(Q(1, math.factorial(p)))


# ---- enumeration -----------------------------------------------------------

def words_by_weight(letters, weight: int, degree: int | None = None):
    """All words of exact total weight (and degree, if given)."""
    letters = sorted(letters)
    out = []

    def rec(prefix, w, d):
        if w == weight:
            if degree is None or d == degree:
                out.append(tuple(prefix))
            return
        for a in letters:
            if w + a.weight <= weight:
                prefix.append(a)
                rec(prefix, w + a.weight, d + a.degree)
                prefix.pop()

    rec([], 0, 0)
    return out


def lyndon_factor_count(w) -> int:
    """Number of factors in the nonincreasing Lyndon factorization (Duval)."""
    n = len(w)
    i = 0
    k = 0
    while i < n:
        j, m = i + 1, i
        while j < n and w[m] <= w[j]:
            m = i if w[m] < w[j] else m + 1
            j += 1
        while i <= m:
            i += j - m
            k += 1
    return k


def sym_basis(block_words, p: int, pivots: bool = False):
    """Echelon-independent images e^(p)(w) spanning Sym^p(L) on a block of
    words closed under permutation (a single letter content).

    With ``pivots=True`` also return words on which the coordinate projection
    is injective for this span (the pivots of a reduced echelon form)."""
    e = Echelon()
    vecs = []
    first = [w for w in block_words if lyndon_factor_count(w) == p]
    rest = [w for w in block_words if lyndon_factor_count(w) != p]
    target = sym_dimension(block_words[0], p) if block_words else 0
    for w in itertools.chain(first, rest):
        if len(vecs) == target:
            break
        comps = hodge_split(w)
        v = comps[p] if p < len(comps) else {}
        if v and e.add(v) is None:
            vecs.append(v)
    if len(vecs) != target:
        raise ArithmeticError("Eulerian image rank disagrees with its trace")
    if pivots:
        return vecs, list(e.rows)
    return vecs


# dimension of e^(p) on a letter content via the trace of the idempotent -----

def _cycle_type(s) -> tuple:
    seen = [False] * len(s)
    out = []
    for i in range(len(s)):
        if not seen[i]:
            k = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = s[j]
                k += 1
            out.append(k)
    return tuple(sorted(out, reverse=True))


@lru_cache(maxsize=None)
def _type_descent_table(n: int) -> dict:
    t: Counter = Counter()
    for s in _perms(n):
        t[(_cycle_type(s), descents(s))] += 1
    return dict(t)


def _signed_fixed_count(cycles, counts, odd) -> int:
    """Signed number of words with the given letter counts fixed by a perm of
    the given cycle type (each cycle carries a single letter)."""

    @lru_cache(maxsize=None)
    def rec(i, rem):
        if i == len(cycles):
            return 1 if not any(rem) else 0
        ln = cycles[i]
        tot = 0
        for k, r in enumerate(rem):
            if r >= ln:
                nr = rem[:k] + (r - ln,) + rem[k + 1:]
                s = -1 if (odd[k] and (ln - 1) & 1) else 1
                tot += s * rec(i + 1, nr)
        return tot

    return rec(0, tuple(counts))


@lru_cache(maxsize=None)
def sym_dimension(w, p: int) -> int:
    """dim of Sym^p(L) on the letter content of w = trace of e^(p) there."""
    n = len(w)
    if n == 0:
        return 1 if p == 0 else 0
    if p < 1 or p > n:
        return 0
    c = Counter(w)
    lets = sorted(c)
    counts = [c[a] for a in lets]
    odd = [a.degree & 1 for a in lets]
    a = _eulerian_coefficients(n)[p]
    tr = ZERO
    for (ct, d), m in _type_descent_table(n).items():
        f = _signed_fixed_count(ct, counts, tuple(odd))
        if f:
            tr += a[d + 1] * m * f
    if tr.denominator != 1:
        raise ArithmeticError("non-integral trace")
    return int(tr)


# ---- Adams-type helpers shared with coalgebra code -------------------------

def all_letters(words: Iterable) -> list:
    s = set()
    for w in words:
        s.update(w)
    return sorted(s)
