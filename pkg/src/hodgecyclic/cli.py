"""Batch front end: algebra spec files in, dimension tables and verification
reports out (json, csv or aligned text).

Spec file format (line oriented, ``#`` starts a comment)::

    kind lie-algebra            # lie-algebra | coalgebra | necklace
    name sl2

    [basis]
    e 0                         # label degree [weight]
    f 0
    h 0

    [bracket]                   # lie-algebra only
    [e,f] = h
    [h,e] = 2 e
    [h,f] = -2 f

    [coproduct]                 # coalgebra only, reduced coproduct
    D(c) = a|b + b|a

    [differential]
    d(x) = 1/2 y

    [pairing]
    volume                      # unique cyclic pairing with <1,top> = 1
    <v,w> = 1                   # or explicit entries, unit written as 1
    degree -2                   # inferred from the first entry if omitted
    flags poincare symplectic unimodular-check

    [form]                      # optional, for target Lie algebras g
    killing                     # or entries <e,f> = 4

For ``kind necklace`` the basis declares the letters of V with their degrees;
the coalgebra is V[1] with zero coproduct, so a letter of degree k becomes a
coalgebra element of degree k + 1.  Coefficients are integers or ``p/q``.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import random
import re
import sys
import time
from dataclasses import dataclass, field
from functools import cached_property

from .cyclic_complexes import connes_les, cyclic_hodge, hochschild_hodge
from .derived_poisson import (UNIT, CyclicPairing, HomologyBrackets, PairingError, bracket_gates,
                              chain_filtration_check, conjecture_probe, filtration_report,
                              hodge_profile, poisson_for, volume_pairing)
from .exact_linear import ONE, LinearAlgebraError, rank, scalar, vadd
from .free_structures import Tensor, fmt_word, pbw_decompose, word_degree
from .kassel_route import KasselModel, all_equal, cross_validate, mixed_complex_check
from .koszul_models import (CoalgebraSpec, CobarAlgebra, LieAlgebraSpec, ModelError,
                            adams_operation, ce_coalgebra, cobar)
from .rep_hom import InvariantForm, fmt_poly, killing_form, verify_trace_lie_hom

SCHEMA = "hodgecyclic.result/1"
KINDS = ("lie-algebra", "coalgebra", "necklace")
SECTIONS = ("basis", "bracket", "coproduct", "differential", "pairing", "form")
FLAGS = ("poincare", "symplectic", "unimodular-check")


class SpecParseError(ValueError):
    def __init__(self, path, line, fld, message):
        self.path, self.line, self.field = path, line, fld
        super().__init__(f"{path}:{line}: [{fld}] {message}")


# ---- spec files -------------------------------------------------------------

_RAT = re.compile(r"^-?\d+(/\d+)?$")
_TERM = re.compile(r"^(-)?\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z_][\w|^']*)$")
_LABEL = re.compile(r"^[A-Za-z_][\w^']*$")


def parse_rational(text: str, line=0, fld="value", path="<spec>"):
    t = text.strip()
    if not _RAT.match(t):
        raise SpecParseError(path, line, fld, f"not an exact rational: {text!r}")
    if re.search(r"/0+$", t):
        raise SpecParseError(path, line, fld, "zero denominator")
    return scalar(t)


def parse_combination(text: str, line=0, fld="value", path="<spec>") -> dict:
    """'2 a - 1/3 b|c + d' -> {label: coeff}."""
    t = text.strip()
    if t == "0":
        return {}
    out: dict = {}
    for piece in t.replace("-", "+-").split("+"):
        piece = piece.strip()
        if not piece:
            continue
        m = _TERM.match(piece)
        if not m:
            raise SpecParseError(path, line, fld, f"cannot read term {piece!r}")
        num = m.group(2) or "1"
        if re.search(r"/0+$", num):
            raise SpecParseError(path, line, fld, f"zero denominator in {piece!r}")
        c = scalar(num)
        if m.group(1):
            c = -c
        vadd(out, {m.group(3): c})
    return out


@dataclass
class AlgebraSpec:
    """A parsed spec file with the objects it defines."""
    kind: str
    name: str
    source_hash: str
    path: str
    coalgebra: CoalgebraSpec
    lie: LieAlgebraSpec | None = None
    pairing: CyclicPairing | None = None
    form: InvariantForm | None = None
    flags: tuple = ()

    @cached_property
    def R(self) -> CobarAlgebra:
        return cobar(self.coalgebra)

    def letter(self, label: str):
        for a in self.R.letters:
            if a.id == label:
                return a
        raise KeyError(label)


def _loc(path, line, fld):
    return lambda msg: SpecParseError(path, line, fld, msg)


def parse_spec(text: str, path: str = "<spec>") -> AlgebraSpec:
    kind = None
    name = None
    section = None
    basis: list = []              # (label, degree, weight, line)
    bracket: dict = {}
    cop: dict = {}
    diff: dict = {}
    pairing_entries: dict = {}
    pairing_degree = None
    volume = None                 # None, or top label ("" for automatic)
    flags: list = []
    form_entries: dict = {}
    form_killing = False
    seen_pairing = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^\[([\w-]+)\]$", line)
        if m:
            section = m.group(1)
            if section not in SECTIONS:
                raise SpecParseError(path, lineno, "section", f"unknown section {section!r}")
            seen_pairing = seen_pairing or section == "pairing"
            continue
        if section is None:
            key, _, val = line.partition(" ")
            val = val.strip()
            if key == "kind":
                if val not in KINDS:
                    raise SpecParseError(path, lineno, "kind", f"expected one of {', '.join(KINDS)}")
                kind = val
            elif key == "name":
                name = val
            else:
                raise SpecParseError(path, lineno, "header", f"unknown directive {key!r}")
            continue
        err = _loc(path, lineno, section)
        if section == "basis":
            parts = line.split()
            if len(parts) not in (2, 3) or not _LABEL.match(parts[0]):
                raise err("expected 'label degree [weight]'")
            try:
                deg = int(parts[1])
                wt = int(parts[2]) if len(parts) == 3 else 1
            except ValueError:
                raise err("degree and weight must be integers") from None
            if parts[0] in [b[0] for b in basis]:
                raise err(f"duplicate basis label {parts[0]!r}")
            basis.append((parts[0], deg, wt, lineno))
        elif section == "bracket":
            m = re.match(r"^\[\s*([\w']+)\s*,\s*([\w']+)\s*\]\s*=\s*(.+)$", line)
            if not m:
                raise err("expected '[x,y] = combination'")
            key = (m.group(1), m.group(2))
            if key in bracket:
                raise err(f"bracket {key} given twice")
            bracket[key] = (parse_combination(m.group(3), lineno, "bracket", path), lineno)
        elif section in ("coproduct", "differential"):
            m = re.match(r"^(?:[dD]\(\s*([\w^']+)\s*\)|([\w^']+))\s*=\s*(.+)$", line)
            if not m:
                raise err("expected 'd(x) = combination'")
            lab = m.group(1) or m.group(2)
            target = cop if section == "coproduct" else diff
            if lab in target:
                raise err(f"{section} of {lab!r} given twice")
            target[lab] = (parse_combination(m.group(3), lineno, section, path), lineno)
        elif section in ("pairing", "form"):
            m = re.match(r"^<\s*([\w^']+)\s*,\s*([\w^']+)\s*>\s*=\s*(.+)$", line)
            if m:
                a, b = m.group(1), m.group(2)
                x = parse_rational(m.group(3), lineno, section, path)
                target = pairing_entries if section == "pairing" else form_entries
                target[(a, b)] = (x, lineno)
                continue
            parts = line.split()
            if section == "form":
                if parts == ["killing"]:
                    form_killing = True
                    continue
                raise err("expected 'killing' or '<x,y> = value'")
            if parts[0] == "degree" and len(parts) == 2:
                try:
                    pairing_degree = int(parts[1])
                except ValueError:
                    raise err("pairing degree must be an integer") from None
            elif parts[0] == "volume" and len(parts) <= 2:
                volume = parts[1] if len(parts) == 2 else ""
            elif parts[0] == "flags":
                for f in parts[1:]:
                    if f not in FLAGS:
                        raise err(f"unknown flag {f!r}; known: {', '.join(FLAGS)}")
                    flags.append(f)
            else:
                raise err(f"unknown pairing directive {parts[0]!r}")
    if kind is None:
        raise SpecParseError(path, 1, "kind", "missing 'kind' directive")
    if not basis:
        raise SpecParseError(path, 1, "basis", "empty basis")
    labels = [b[0] for b in basis]
    digest = hashlib.sha256(text.encode()).hexdigest()

    def known(lab, line, fld, pool=labels):
        if lab not in pool:
            raise SpecParseError(path, line, fld, f"unknown label {lab!r}")

    lie = None
    try:
        if kind == "lie-algebra":
            if cop:
                raise SpecParseError(path, next(iter(cop.values()))[1], "coproduct",
                                     "a Lie algebra takes brackets, not a coproduct")
            for (x, y), (v, ln) in bracket.items():
                for lab in (x, y, *v):
                    known(lab, ln, "bracket")
            for x, (v, ln) in diff.items():
                for lab in (x, *v):
                    known(lab, ln, "differential")
            lie = LieAlgebraSpec(labels, {b[0]: b[1] for b in basis},
                                 {k: v for k, (v, _) in bracket.items()},
                                 {k: v for k, (v, _) in diff.items()})
            C = ce_coalgebra(lie)
        else:
            if bracket:
                raise SpecParseError(path, next(iter(bracket.values()))[1], "bracket",
                                     "brackets are only allowed for kind lie-algebra")
            if kind == "necklace" and cop:
                raise SpecParseError(path, next(iter(cop.values()))[1], "coproduct",
                                     "necklace specs have zero coproduct")
            shift = 1 if kind == "necklace" else 0
            degs = {b[0]: b[1] + shift for b in basis}
            wts = {b[0]: b[2] for b in basis}
            coprod = {}
            for c, (v, ln) in cop.items():
                known(c, ln, "coproduct")
                t = {}
                for key, x in v.items():
                    parts = key.split("|")
                    if len(parts) != 2:
                        raise SpecParseError(path, ln, "coproduct", f"expected a|b, got {key!r}")
                    for lab in parts:
                        known(lab, ln, "coproduct")
                    t[tuple(parts)] = x
                coprod[c] = t
            for x, (v, ln) in diff.items():
                for lab in (x, *v):
                    known(lab, ln, "differential")
            C = CoalgebraSpec(labels, degs, wts, coprod, {k: v for k, (v, _) in diff.items()})
    except ModelError as e:
        raise SpecParseError(path, 0, "structure", str(e)) from None

    pairing = None
    if seen_pairing:
        poincare = "poincare" in flags
        try:
            if volume is not None:
                if pairing_entries:
                    raise SpecParseError(path, 0, "pairing", "give either 'volume' or entries")
                pairing = volume_pairing(C, volume or None, poincare=poincare)
            else:
                pool = [UNIT] + list(C.labels)
                vals = {}
                for (a, b), (x, ln) in pairing_entries.items():
                    known(a, ln, "pairing", pool)
                    known(b, ln, "pairing", pool)
                    vals[(a, b)] = x
                if not vals:
                    raise SpecParseError(path, 0, "pairing", "empty pairing block")
                n = pairing_degree
                if n is None:
                    a, b = next(iter(vals))
                    deg = {UNIT: 0, **C.degrees}
                    n = -(deg[a] + deg[b])
                pairing = CyclicPairing(C, vals, n, poincare=poincare)
            if pairing_degree is not None and pairing.degree != pairing_degree:
                raise SpecParseError(path, 0, "pairing",
                                     f"declared degree {pairing_degree}, derived {pairing.degree}")
        except PairingError as e:
            raise SpecParseError(path, 0, "pairing", f"{e} ({e.axiom} axiom)") from None
        if "symplectic" in flags:
            letters = list(C.labels)
            rows = [{b: pairing(a, b) for b in letters if pairing(a, b)} for a in letters]
            if rank(rows) != len(letters):
                raise SpecParseError(path, 0, "pairing", "pairing is not symplectic on the letters")
        if "unimodular-check" in flags:
            if lie is None:
                raise SpecParseError(path, 0, "pairing", "unimodular-check needs a Lie algebra")
            for x in lie.labels:
                tr = sum((lie.br(x, z).get(z, 0) for z in lie.labels), scalar(0))
                if tr:
                    raise SpecParseError(path, 0, "pairing", f"tr ad({x}) = {tr}, not unimodular")
    elif flags or pairing_entries or volume is not None:
        raise SpecParseError(path, 0, "pairing", "pairing data outside a [pairing] section")

    form = None
    if form_killing or form_entries:
        if lie is None:
            raise SpecParseError(path, 0, "form", "an invariant form needs a Lie algebra")
        try:
            if form_killing:
                form = killing_form(lie)
            else:
                idx = {x: i for i, x in enumerate(lie.labels)}
                mat = {}
                for (a, b), (x, ln) in form_entries.items():
                    known(a, ln, "form")
                    known(b, ln, "form")
                    mat[(idx[a], idx[b])] = x
                    mat[(idx[b], idx[a])] = x
                form = InvariantForm(lie, mat)
        except ModelError as e:
            raise SpecParseError(path, 0, "form", str(e)) from None
    return AlgebraSpec(kind, name or path, digest, path, C, lie, pairing, form, tuple(flags))


def load_spec(path: str) -> AlgebraSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SpecParseError(path, 0, "file", e.strerror) from None
    return parse_spec(text, path)


# ---- element syntax ---------------------------------------------------------

def parse_element(text: str, spec: AlgebraSpec) -> Tensor:
    """'[v,v,w] - 1/2 [w]' -> tensor on the letters of an algebra spec file."""
    out: dict = {}
    pos = 0
    t = text.strip()
    pat = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*[*·]?\s*\[([^\]]*)\]\s*")
    while pos < len(t):
        m = pat.match(t, pos)
        if not m or m.end() == pos or (pos and not m.group(1)):
            raise SpecParseError("<argument>", 0, "element", f"cannot read {t[pos:]!r}")
        c = scalar(m.group(2) or "1")
        if m.group(1) == "-":
            c = -c
        names = [s.strip() for s in m.group(3).split(",") if s.strip()]
        try:
            w = tuple(spec.letter(s) for s in names)
        except KeyError as e:
            raise SpecParseError("<argument>", 0, "element", f"unknown letter {e.args[0]!r}") from None
        vadd(out, {w: c})
        pos = m.end()
    return Tensor._from(out)


def fmt_vector(v: dict) -> str:
    if not v:
        return "0"
    parts = []
    for w, c in sorted(v.items(), key=lambda t: (len(t[0]), t[0])):
        mag = -c if c < 0 else c
        body = fmt_word(w) if mag == 1 else f"{mag}·{fmt_word(w)}"
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


# ---- result tables ----------------------------------------------------------

@dataclass
class ResultTable:
    command: str
    metadata: dict
    columns: list
    rows: list = field(default_factory=list)
    ok: bool = True
    summary: str = ""

    def payload(self) -> dict:
        return {"schema": SCHEMA, "command": self.command, "metadata": self.metadata,
                "columns": self.columns, "rows": self.rows, "ok": self.ok,
                "summary": self.summary}

    @property
    def digest(self) -> str:
        return hashlib.sha256(_canonical(self.payload()).encode()).hexdigest()


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _plain(x):
    """JSON-safe copy: exact rationals become strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def emit(table: ResultTable, fmt: str, timestamp: float | None = None) -> bytes:
    if fmt == "json":
        doc = table.payload()
        doc["digest"] = table.digest
        doc["timestamp"] = time.time() if timestamp is None else timestamp
        return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(table.columns)
        for r in table.rows:
            wr.writerow([_cell(r.get(c)) for c in table.columns])
        return buf.getvalue().encode()
    if fmt == "text":
        return render_text(table).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return ""
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return str(v)


def render_text(table: ResultTable) -> str:
    cols = table.columns
    cells = [[_cell(r.get(c)) for c in cols] for r in table.rows]
    widths = [max([len(c)] + [len(row[k]) for row in cells]) for k, c in enumerate(cols)]
    lines = [f"# {table.command}  " + "  ".join(f"{k}={_cell(v)}" for k, v in
                                                sorted(table.metadata.items())
                                                if k not in ("input_hash",))]
    if cols:
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        for row in cells:
            lines.append("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    if table.summary:
        lines.append(table.summary)
    return "\n".join(lines) + "\n"


def parse_json(data) -> ResultTable:
    doc = json.loads(data)
    if doc.get("schema") != SCHEMA:
        raise ValueError("not a result table")
    return ResultTable(doc["command"], doc["metadata"], doc["columns"], doc["rows"],
                       doc["ok"], doc["summary"])


# ---- commands ---------------------------------------------------------------

def parse_range(text: str) -> list:
    """'2' -> [2], '1-3' -> [1, 2, 3], '0,2' -> [0, 2]."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        m = re.match(r"^(\d+)(?:-(\d+))?$", part)
        if not m:
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) else lo
        out.extend(range(lo, hi + 1))
    return out


def _meta(args, spec: AlgebraSpec, **extra) -> dict:
    m = {"input": spec.name, "input_hash": spec.source_hash, "kind": spec.kind,
         "max_degree": args.max_degree, "max_weight": args.max_weight,
         "route": getattr(args, "route", None), "seed": args.seed}
    m.update(extra)
    return _plain(m)


def _require_pairing(spec):
    if spec.pairing is None:
        raise UsageError(f"{spec.path} declares no [pairing]")
    return spec.pairing


class UsageError(ValueError):
    pass


def cmd_hodge(args, spec, kind):
    ps = args.p or [0, 1, 2]
    rows = []
    if args.route == "kassel":
        if spec.lie is None:
            raise UsageError("the kassel route needs kind lie-algebra")
        try:
            model = KasselModel(spec.lie)
        except ModelError as e:
            raise UsageError(str(e)) from None
        for p in ps:
            dims = model.hh_dims(p, args.max_degree) if kind == "HH" else model.hc_dims(p, args.max_degree)
            if kind == "HH" and p == 0:
                dims[0] -= 1          # reduced: drop the unit
            for n, d in sorted(dims.items()):
                rows.append({"p": p, "degree": n, "dim": d, "safe": True})
    else:
        fn = hochschild_hodge if kind == "HH" else cyclic_hodge
        for p in ps:
            h = fn(spec.R, p, args.max_degree, args.max_weight, reps=args.reps)
            for n, d in h.dims.items():
                row = {"p": p, "degree": n, "dim": d, "safe": bool(h.safe.get(n))}
                if args.reps:
                    row["representatives"] = [fmt_chain(z) for z in h.groups[n].reps]
                rows.append(row)
    cols = ["p", "degree", "dim", "safe"] + (["representatives"] if args.reps and args.route != "kassel" else [])
    return ResultTable(f"hodge-{kind.lower()}", _meta(args, spec, p=ps), cols, rows)


def fmt_chain(z: dict) -> str:
    parts = []
    for lab, c in sorted(z.items(), key=str):
        body = fmt_word(lab[1]) + (f"d{lab[2].id}" if len(lab) == 3 else "")
        parts.append(f"{c}*c{lab[0]}{body}")
    return " + ".join(parts) or "0"


def _auto_weight(args, spec, p):
    if args.max_weight is not None:
        return args.max_weight
    if spec.coalgebra.lie_source is None:
        raise UsageError("--max-weight is required for this input")
    return args.max_degree + p + 3


def cmd_connes(args, spec):
    rows = []
    ok = True
    for p in args.p or [0, 1, 2]:
        rep = connes_les(spec.R, p, args.max_degree, _auto_weight(args, spec, p))
        for (junction, n), defect in sorted(rep.defects.items(), key=lambda t: (t[0][1], t[0][0])):
            safe = bool(rep.safe.get(n))
            rows.append({"p": p, "degree": n, "junction": junction, "defect": defect, "safe": safe})
            if safe and defect:
                ok = False
    return ResultTable("connes", _meta(args, spec, p=args.p), ["p", "degree", "junction", "defect", "safe"],
                       rows, ok, "exact in all safe degrees" if ok else "NOT EXACT")


def cmd_bracket(args, spec):
    pairing = _require_pairing(spec)
    dp = poisson_for(spec.R, pairing)
    a, b = parse_element(args.a, spec), parse_element(args.b, spec)
    if args.space == "necklace":
        val = dp.necklace_bracket(a, b)
    else:
        val = dp.bracket(a, b)
    prof = hodge_profile(val)
    total = None
    for c in prof.values():
        total = c if total is None else total + c
    consistent = (not val) if total is None else total == val
    rows = [{"weight": r, "component": fmt_vector(c.terms)} for r, c in sorted(prof.items())]
    return ResultTable("bracket", _meta(args, spec, a=args.a, b=args.b, space=args.space),
                       ["weight", "component"], rows, consistent, fmt_vector(val.terms))


def cmd_filtration(args, spec):
    pairing = _require_pairing(spec)
    if args.level == "chain":
        W = args.max_weight or 4
        rep = chain_filtration_check(spec.R, pairing, W)
        rows = [{"space": k, "checked": rep.checked.get(k, 0), "failures": len(v)}
                for k, v in sorted(rep.failures.items())]
        return ResultTable("filtration", _meta(args, spec, level="chain"),
                           ["space", "checked", "failures"], rows, rep.ok,
                           "all inclusions hold" if rep.ok else "INCLUSION FAILURES")
    hb = HomologyBrackets(spec.R, pairing, args.max_degree, args.max_weight)
    ps = args.p or [1, 2, 3]
    qs = args.q or ps
    rows, ok = [], True
    for p in ps:
        for q in qs:
            rep = filtration_report(hb, p, q)
            ok = ok and rep.ok
            for e in rep.entries:
                rows.append({"p": p, "q": q, "deg_a": e.deg_a, "deg_b": e.deg_b, "i": e.i, "j": e.j,
                             "support": e.support, "certain": e.certain,
                             "consistent": e.consistent})
    cols = ["p", "q", "deg_a", "deg_b", "i", "j", "support", "certain", "consistent"]
    return ResultTable("filtration", _meta(args, spec, level="homology"), cols, rows, ok,
                       "all inclusions hold" if ok else "FILTRATION VIOLATED")


def cmd_kassel(args, spec):
    if spec.lie is None:
        raise UsageError("kassel-check needs kind lie-algebra")
    try:
        model = KasselModel(spec.lie)
    except ModelError as e:
        raise UsageError(str(e)) from None
    ps = args.p or [0, 1, 2, 3]
    mixed = mixed_complex_check(model, max(ps) + 1)
    crows = cross_validate(spec.lie, ps, args.max_degree, args.max_weight)
    rows = [{"kind": r.kind, "p": r.p, "degree": r.degree, "engine": r.engine,
             "kassel": r.kassel, "safe": r.safe, "equal": r.equal} for r in crows]
    try:
        eq = all_equal(crows)
    except LinearAlgebraError:
        eq = False
    ok = eq and mixed.ok
    summary = "all equal" if ok else ("MISMATCH" if not eq else "mixed complex check failed")
    return ResultTable("kassel-check", _meta(args, spec, p=ps, mixed_complex_ok=mixed.ok),
                       ["kind", "p", "degree", "engine", "kassel", "safe", "equal"], rows, ok, summary)


def adams_rows(letters, max_len: int) -> list:
    rows = []
    for n in range(1, max_len + 1):
        bad = 0
        count = 0
        for w in itertools.product(letters, repeat=n):
            count += 1
            t = Tensor.word(w)
            comps = pbw_decompose(t)
            for k in (2, 3):
                want = Tensor()
                for p, c in comps.items():
                    want = want + c.scale(k ** p)
                if adams_operation(k, t) != want:
                    bad += 1
            if adams_operation(2, adams_operation(3, t)) != adams_operation(6, t):
                bad += 1
        rows.append({"length": n, "words": count, "failures": bad})
    return rows


def cmd_adams(args, spec):
    W = args.max_weight or 4
    rows = adams_rows(spec.R.letters, W)
    ok = all(r["failures"] == 0 for r in rows)
    return ResultTable("adams-check", _meta(args, spec), ["length", "words", "failures"], rows, ok,
                       "eigenvalue law holds" if ok else "EIGENVALUE LAW FAILS")


def cmd_rep_trace(args, spec):
    pairing = _require_pairing(spec)
    if not args.g:
        raise UsageError("rep-trace needs --g SPEC for the target Lie algebra")
    gspec = load_spec(args.g)
    if gspec.lie is None:
        raise UsageError("--g must be a lie-algebra spec")
    rep = verify_trace_lie_hom(spec.R, pairing, gspec.lie, args.max_weight or 2,
                               args.max_degree, gspec.form)
    names = gspec.lie.labels
    rows = []
    for pr in rep.pairs:
        diff = dict(pr.lhs)
        vadd(diff, pr.rhs, -ONE)
        rows.append({"i": pr.i, "j": pr.j,
                     "alpha": fmt_vector(rep.classes[pr.i]), "beta": fmt_vector(rep.classes[pr.j]),
                     "difference": fmt_poly(diff, names),
                     "certificate": None if pr.certificate is None else fmt_poly(pr.certificate, names)})
    ok = rep.ok
    return ResultTable("rep-trace", _meta(args, spec, g=gspec.name, g_hash=gspec.source_hash),
                       ["i", "j", "alpha", "beta", "difference", "certificate"], rows, ok,
                       "every difference is a boundary" if ok else "NO CERTIFICATE FOR SOME PAIR")


def cmd_probe(args, spec):
    pairing = _require_pairing(spec)
    max_p = max(args.p) if args.p else 3
    try:
        rows_ = conjecture_probe(spec.R, pairing, max_p, args.max_degree, args.max_weight)
    except PairingError as e:
        raise UsageError(str(e)) from None
    rows = [{"p": r.p, "q": r.q, "pairs": r.pairs, "nonzero": r.nonzero, "support": r.support,
             "verdict": r.verdict, "consistent": r.consistent, "certain": r.certain} for r in rows_]
    ok = all(r.consistent for r in rows_)
    return ResultTable("conjecture-probe", _meta(args, spec, max_p=max_p),
                       ["p", "q", "pairs", "nonzero", "support", "verdict", "consistent", "certain"],
                       rows, ok, "profiles consistent" if ok else "INCONSISTENT PROFILES")


def leibniz_spot_check(R: CobarAlgebra, rng: random.Random, trials: int = 50, max_len: int = 3) -> int:
    """d(uv) = d(u) v + (-1)^|u| u d(v) on random words; returns failures."""
    bad = 0
    letters = R.letters
    for _ in range(trials):
        u = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_len)))
        v = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_len)))
        lhs = R.d(Tensor.word(u + v))
        rhs = R.d(Tensor.word(u)) * Tensor.word(v) + Tensor.word(u) * R.d(Tensor.word(v)).scale(
            -1 if word_degree(u) & 1 else 1)
        if lhs != rhs:
            bad += 1
    return bad


def cmd_validate(args, spec):
    rows = []
    if spec.lie is not None:
        rows.append({"check": "lie: antisymmetry, Jacobi, d^2, derivation", "failures": 0})
    rows.append({"check": "coalgebra: homogeneity, coassociativity, cocommutativity, d^2, coderivation",
                 "failures": 0})
    rows.append({"check": "cobar: d^2 on letters", "failures": 0})
    rng = random.Random(args.seed)
    rows.append({"check": f"cobar: Leibniz rule on random words (seed {args.seed})",
                 "failures": leibniz_spot_check(spec.R, rng)})
    if spec.pairing is not None:
        extra = ", nondegeneracy" if spec.pairing.poincare else ""
        rows.append({"check": "pairing: degree, symmetry, cyclicity, d-compatibility" + extra,
                     "failures": len(spec.pairing.violations())})
        for f in spec.flags:
            if f != "poincare":
                rows.append({"check": f"pairing flag: {f}", "failures": 0})
        W = args.max_weight or 3
        g = bracket_gates(spec.R, spec.pairing, W)
        for k in sorted(g.checked):
            rows.append({"check": f"bracket gate: {k} (weight <= {W})", "failures": len(g.failures.get(k, ()))})
    if spec.form is not None:
        rows.append({"check": "form: symmetric, ad-invariant", "failures": len(spec.form.invariance_defects())})
    ok = all(r["failures"] == 0 for r in rows)
    return ResultTable("validate", _meta(args, spec), ["check", "failures"], rows, ok,
                       "all axioms checked" if ok else "VALIDATION FAILED")


COMMANDS = {
    "hodge-hh": lambda a, s: cmd_hodge(a, s, "HH"),
    "hodge-hc": lambda a, s: cmd_hodge(a, s, "HC"),
    "connes": cmd_connes,
    "bracket": cmd_bracket,
    "filtration": cmd_filtration,
    "kassel-check": cmd_kassel,
    "adams-check": cmd_adams,
    "rep-trace": cmd_rep_trace,
    "conjecture-probe": cmd_probe,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hodgecyclic",
                                 description="Hodge decomposition of cyclic homology, exact arithmetic.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("spec", help="algebra spec file")
        sp.add_argument("--max-weight", type=int, default=None)
        sp.add_argument("--max-degree", type=int, default=3)
        sp.add_argument("--p", type=parse_range, default=None, help="e.g. 2, 1-3 or 0,2")
        sp.add_argument("--route", choices=["engine", "kassel"], default="engine")
        sp.add_argument("--format", choices=["json", "csv", "text"], default="text")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", "-o", default=None, help="write to a file instead of stdout")
        if name in ("hodge-hh", "hodge-hc"):
            sp.add_argument("--reps", action="store_true", help="include cycle representatives")
        if name == "bracket":
            sp.add_argument("--a", required=True)
            sp.add_argument("--b", required=True)
            sp.add_argument("--space", choices=["necklace", "algebra"], default="necklace")
        if name == "filtration":
            sp.add_argument("--q", type=parse_range, default=None)
            sp.add_argument("--level", choices=["homology", "chain"], default="homology")
        if name == "rep-trace":
            sp.add_argument("--g", default=None, help="spec file of the target Lie algebra")
    return ap


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.spec)
        table = COMMANDS[args.command](args, spec)
    except (SpecParseError, UsageError, ValueError, ZeroDivisionError) as e:
        # ValueError covers missing truncation bounds and model errors
        print(f"error: {e}", file=stderr)
        return 2
    data = emit(table, args.format)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        stdout.write(data.decode())
    return 0 if table.ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
