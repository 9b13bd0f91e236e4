"""Exact rational linear algebra over graded vector spaces.

Vectors are plain dicts ``label -> mpq`` (zero entries never stored).  The
workhorse is :class:`Echelon`, an incrementally built, fully reduced row
echelon form that can also carry a payload vector for every row, which is how
kernels and homology coordinates are tracked.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable

from gmpy2 import mpq

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


class LinearAlgebraError(ValueError):
    pass


def scalar(x) -> mpq:
    """Coerce ints, strings like '-3/4', Fractions and mpq to mpq."""
    if isinstance(x, str):
        x = x.strip()
        if "/" in x:
            a, b = x.split("/")
            return mpq(int(a), int(b))
        return mpq(int(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return mpq(x)


# ---- sparse vector helpers -------------------------------------------------

def vadd(acc: dict, v: dict, c=ONE) -> dict:
    """acc += c*v in place; returns acc."""
    if not c:
        return acc
    for k, x in v.items():
        y = acc.get(k)
        if y is None:
            acc[k] = c * x
        else:
            y = y + c * x
            if y:
                acc[k] = y
            else:
                del acc[k]
    return acc


def vscale(v: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vclean(v: dict) -> dict:
    return {k: x for k, x in v.items() if x}


def _height(x: mpq) -> int:
    return abs(x.numerator) + x.denominator


class Echelon:
    """Fully reduced echelon basis of a subspace of a sparse vector space.

    Every stored row has a pivot label that occurs in no other row, so a
    vector is reduced by a single pass over its pivot entries.  ``payload``
    rows are transformed alongside (same linear combinations), which gives
    kernel vectors and coordinates for free.
    """

    def __init__(self):
        self.rows: dict[Hashable, dict] = {}
        self.payload: dict[Hashable, dict] = {}
        # label -> pivots of rows in which the label occurs (non-pivot columns)
        self._occ: dict[Hashable, set] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict, pay: dict | None = None):
        """Return (residual, payload residual) of v against the basis."""
        r = dict(v)
        p = dict(pay) if pay is not None else None
        for piv in [k for k in v if k in self.rows]:
            c = r.get(piv)
            if not c:
                continue
            vadd(r, self.rows[piv], -c)
            if p is not None:
                vadd(p, self.payload[piv], -c)
        return r, p

    def coefficients(self, v: dict) -> tuple[dict, dict]:
        """Coefficients of v on the rows (keyed by pivot) and the residual."""
        coeff = {}
        r = dict(v)
        for piv in [k for k in v if k in self.rows]:
            c = r.get(piv)
            if not c:
                continue
            coeff[piv] = c
            vadd(r, self.rows[piv], -c)
        return coeff, r

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]

    def add(self, v: dict, pay: dict | None = None):
        """Insert v.  Returns None if v was independent, else the payload
        residual (a relation among the inserted payloads)."""
        r, p = self.reduce(v, pay if pay is not None else {})
        if not r:
            return p
        piv = min(r, key=lambda k: _height(r[k]))
        c = r[piv]
        if c != 1:
            inv = 1 / c
            r = {k: x * inv for k, x in r.items()}
            p = {k: x * inv for k, x in p.items()}
        # eliminate the new pivot from older rows that mention it
        for other in list(self._occ.pop(piv, ())):
            row = self.rows[other]
            c2 = row.get(piv)
            if not c2:
                continue
            for k in r:
                if k != piv and k not in row:
                    self._occ.setdefault(k, set()).add(other)
            vadd(row, r, -c2)
            vadd(self.payload[other], p, -c2)
        self.rows[piv] = r
        self.payload[piv] = p
        for k in r:
            if k != piv:
                self._occ.setdefault(k, set()).add(piv)
        return None


def rank(vectors: Iterable[dict]) -> int:
    """Exact rank by triangular (not fully reduced) elimination.

    Sparse vectors go first and each row is reduced against earlier pivots
    in insertion order, which keeps fill-in low compared with :class:`Echelon`.
    """
    piv: dict = {}
    order = 0
    for v in sorted((v for v in vectors if v), key=len):
        r = dict(v)
        heap = [(piv[k][0], k) for k in r if k in piv]
        heapq.heapify(heap)
        while heap:
            _, k = heapq.heappop(heap)
            c = r.get(k)
            if not c:
                continue
            row = piv[k][1]
            for kk, x in row.items():
                y = r.get(kk)
                if y is None:
                    r[kk] = -c * x
                    if kk in piv:
                        heapq.heappush(heap, (piv[kk][0], kk))
                else:
                    y = y - c * x
                    if y:
                        r[kk] = y
                    else:
                        del r[kk]
        if r:
            k = min(r, key=lambda t: _height(r[t]))
            inv = 1 / r[k]
            piv[k] = (order, {kk: x * inv for kk, x in r.items()})
            order += 1
    return len(piv)


def kernel(columns: list[dict]) -> list[dict]:
    """Kernel of the map sending basis vector i to columns[i].

    Kernel vectors are dicts ``i -> coefficient``.
    """
    e = Echelon()
    out = []
    for i, col in enumerate(columns):
        rel = e.add(col, {i: ONE})
        if rel is not None:
            out.append(rel)
    return out


# ---- graded spaces and maps ------------------------------------------------

@dataclass
class GradedVectorSpace:
    """Finite-dimensional graded space: degree -> ordered basis labels."""
    basis: dict[int, list] = field(default_factory=dict)

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def degrees(self):
        return sorted(d for d, b in self.basis.items() if b)

    def index(self, n: int) -> dict:
        return {b: i for i, b in enumerate(self.basis.get(n, ()))}


@dataclass
class LinearMap:
    """Graded map of degree ``shift``; ``images[n][label]`` is a sparse vector
    in ``target.basis[n + shift]``.  Missing labels map to zero."""
    source: GradedVectorSpace
    target: GradedVectorSpace
    shift: int = 0
    images: dict[int, dict] = field(default_factory=dict)

    def image(self, n: int, label) -> dict:
        return self.images.get(n, {}).get(label, {})

    def apply(self, n: int, v: dict) -> dict:
        out: dict = {}
        for k, c in v.items():
            vadd(out, self.image(n, k), c)
        return out

    def columns(self, n: int) -> list[dict]:
        return [self.image(n, b) for b in self.source.basis.get(n, ())]

    def rank(self, n: int) -> int:
        return rank(self.columns(n))

    def kernel(self, n: int) -> list[dict]:
        labels = self.source.basis.get(n, ())
        return [{labels[i]: c for i, c in k.items()} for k in kernel(self.columns(n))]

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        imgs = {}
        for n, b in other.source.basis.items():
            imgs[n] = {lab: self.apply(n + other.shift, other.image(n, lab)) for lab in b}
        return LinearMap(other.source, self.target, self.shift + other.shift, imgs)


@dataclass
class ChainComplex:
    """Homologically graded complex; ``d`` has degree -1."""
    space: GradedVectorSpace
    d: LinearMap
    check: bool = True

    def __post_init__(self):
        if self.d.shift != -1:
            raise LinearAlgebraError("differential must have degree -1")
        if self.check:
            for n in self.space.degrees():
                for lab in self.space.basis[n]:
                    dd = self.d.apply(n - 1, self.d.image(n, lab))
                    if dd:
                        raise LinearAlgebraError(f"d^2 != 0 on {lab!r} in degree {n}")


@dataclass
class Bicomplex:
    """Columns ``i`` graded by internal degree, vertical maps v_i (degree -1)
    and horizontal maps h_i : column i -> column i-1 (degree 0).

    Labels of different columns must be distinct; ``totalize`` tags them.
    """
    columns: dict[int, GradedVectorSpace]
    vertical: dict[int, LinearMap]
    horizontal: dict[int, LinearMap]


def totalize(bc: Bicomplex, check: bool = True) -> ChainComplex:
    """Total complex with D = v + (-1)^i h on column i (total degree i + q).

    Requires v h + h v = 0 (anticommuting squares); D^2 = 0 is re-checked.
    """
    basis: dict[int, list] = {}
    imgs: dict[int, dict] = {}
    for i, col in sorted(bc.columns.items()):
        for q, labs in col.basis.items():
            n = i + q
            for lab in labs:
                basis.setdefault(n, []).append((i, lab))
                img: dict = {}
                if i in bc.vertical:
                    for k, c in bc.vertical[i].image(q, lab).items():
                        img[(i, k)] = c
                if i in bc.horizontal:
                    s = ONE if i % 2 == 0 else -ONE
                    for k, c in bc.horizontal[i].image(q, lab).items():
                        vadd(img, {(i - 1, k): c}, s)
                imgs.setdefault(n, {})[(i, lab)] = img
    space = GradedVectorSpace(basis)
    return ChainComplex(space, LinearMap(space, space, -1, imgs), check=check)


# ---- homology --------------------------------------------------------------

@dataclass
class HomologyGroup:
    """Homology in one degree: representatives plus coordinate extraction.

    If ``support`` is given, every chain of this degree is determined by its
    entries on those labels, and all reductions happen after restricting to
    them (chains outside the ambient chain space are not detected then)."""
    degree: int
    reps: list[dict]
    boundaries: Echelon
    support: set | None = None
    _coord: Echelon | None = None

    @property
    def dim(self) -> int:
        return len(self.reps)

    def _cut(self, z: dict) -> dict:
        if self.support is None:
            return z
        return {k: x for k, x in z.items() if k in self.support}

    def _ensure(self):
        if self._coord is None:
            e = Echelon()
            e.rows = {k: dict(v) for k, v in self.boundaries.rows.items()}
            e.payload = {k: {} for k in e.rows}
            e._occ = {k: set(v) for k, v in self.boundaries._occ.items()}
            for i, z in enumerate(self.reps):
                if e.add(self._cut(z), {i: ONE}) is not None:
                    raise LinearAlgebraError("homology representatives are dependent")
            self._coord = e

    def coords(self, z: dict) -> dict:
        """Coordinates of the class of cycle z on ``reps``."""
        self._ensure()
        r, p = self._coord.reduce(self._cut(z), {})
        if r:
            raise LinearAlgebraError("vector is not a cycle of this complex")
        return {i: -c for i, c in p.items() if c}

    def is_boundary(self, z: dict) -> bool:
        return self.boundaries.contains(self._cut(z))


def homology_group(n: int, cycles_source: list[dict], d_out: Callable[[dict], dict],
                   boundary_vectors: Iterable[dict], support: set | None = None,
                   target_support: set | None = None) -> HomologyGroup:
    """Homology at degree n from a spanning set of chains, the outgoing
    differential and a spanning set of incoming boundaries.

    ``support`` / ``target_support``: label sets on which chains of degree n /
    n-1 are determined (coordinate projections injective on the chain spaces).
    """
    def cut(v, sup):
        return v if sup is None else {k: x for k, x in v.items() if k in sup}

    b = Echelon()
    for v in boundary_vectors:
        b.add(cut(v, support))
    cols = [cut(d_out(c), target_support) for c in cycles_source]
    ker = kernel(cols)
    e = Echelon()
    e.rows = {k: dict(v) for k, v in b.rows.items()}
    e.payload = {k: {} for k in e.rows}
    e._occ = {k: set(v) for k, v in b._occ.items()}
    reps = []
    for kv in ker:
        z: dict = {}
        for i, c in kv.items():
            vadd(z, cycles_source[i], c)
        if e.add(cut(z, support), {}) is None:
            reps.append(z)
    return HomologyGroup(n, reps, b, support)


def homology(c: ChainComplex, degrees: Iterable[int] | None = None) -> dict[int, HomologyGroup]:
    """Homology groups with representatives (as vectors in the chain basis)."""
    degs = c.space.degrees() if degrees is None else list(degrees)
    out = {}
    for n in degs:
        chains = [{lab: ONE} for lab in c.space.basis.get(n, ())]
        incoming = [c.d.image(n + 1, lab) for lab in c.space.basis.get(n + 1, ())]
        out[n] = homology_group(n, chains, lambda v, n=n: c.d.apply(n, v), incoming)
    return out


def verify_exact_sequence(maps: list[LinearMap], degrees: Iterable[int] | None = None) -> dict:
    """Check im(f_k) = ker(f_{k+1}) at every junction and degree.

    Returns ``{(junction, degree): defect}`` with defect = dim ker - dim im
    (0 means exact there).  Raises if consecutive maps are not composable or
    a composite is nonzero.
    """
    report = {}
    for j in range(len(maps) - 1):
        f, g = maps[j], maps[j + 1]
        if f.target is not g.source and f.target.basis != g.source.basis:
            raise LinearAlgebraError(f"maps {j} and {j + 1} are not composable")
        degs = degrees if degrees is not None else sorted(
            {n + f.shift for n in f.source.degrees()} | set(g.source.degrees()))
        for n in degs:
            src = n - f.shift
            ims = [f.image(src, b) for b in f.source.basis.get(src, ())]
            for v in ims:
                if g.apply(n, v):
                    raise LinearAlgebraError(f"composite of maps {j},{j + 1} nonzero in degree {n}")
            rk = rank(ims)
            ker = g.source.dim(n) - g.rank(n)
            report[(j, n)] = ker - rk
    return report
