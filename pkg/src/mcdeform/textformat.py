"""Plain-text descriptions of DGLAs, Artinian cdgas, complexes, maps and elements.

Grammar (one statement per line; ``#`` starts a comment)::

    document   := { section }
    section    := "[" [ prefix "." ] name "]" { statement }
    name       := meta | space | differential | bracket | multiplication
                | delta | partial | element | map
    meta       := key "=" value
    space      := label ":" int                  (DGLA/complex: cochain degree,
                                                  artin: chain degree)
                | label ":" int "," int          (bigraded: cochain, chain)
    unary      := label " -> " combination       (differential, delta, partial, map)
    binary     := label "," label " -> " combination   (bracket, multiplication)
    element    := label "," label "=" rational    (DGLA label, algebra label)
                | label "=" rational             (plain vector)
    combination:= term { (" + " | " - ") term } | "0"
    term       := [ "-" ] [ rational "*" ] label
    rational   := integer [ "/" integer ]

The arrow separating a left-hand side from its value must be surrounded by
blanks, so labels such as ``y->1`` are allowed.  The comma in a binary
left-hand side is the first one outside square or round brackets.  A
``prefix`` lets one file carry several structures, as in an extension file
with ``[source.space]``, ``[target.space]`` and ``[map]``.

The ``kind`` meta key selects the structure: ``dgla``, ``artin``,
``complex``, ``bigraded``, ``element``, ``gauge``, ``extension``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .artin import ArtinCdga, CdgaMap
from .complexes import CochainComplex, GradedSpace
from .dgla import DGLA
from .errors import ParseError
from .qlinalg import RatMatrix

__all__ = [
    "Document",
    "parse_document",
    "parse_rational",
    "format_rational",
    "load",
    "loads",
    "dgla_from_document",
    "artin_from_document",
    "complex_from_document",
    "bigraded_from_document",
    "extension_from_document",
    "element_coefficients",
    "dump_dgla",
    "dump_artin",
    "dump_complex",
    "dump_bigraded",
    "dump_extension",
    "dump_element",
]

SECTIONS = {"meta", "space", "differential", "bracket", "multiplication", "delta",
            "partial", "element", "map"}

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_HEADER = re.compile(r"^\[\s*(?:([A-Za-z_][\w-]*)\.)?([A-Za-z_]+)\s*\]$")


@dataclass
class Line:
    number: int
    column: int  # 1-based column of ``text`` in the source line
    text: str


@dataclass
class Document:
    meta: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)  # (prefix, name) -> [Line]
    source: str = ""

    @property
    def kind(self) -> str | None:
        return self.meta.get("kind")

    def lines(self, name: str, prefix: str | None = None) -> list[Line]:
        return self.sections.get((prefix, name), [])

    def has(self, name: str, prefix: str | None = None) -> bool:
        return (prefix, name) in self.sections


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str, line: int = 0, column: int = 0) -> Fraction:
    t = text.strip()
    if not _RATIONAL.match(t):
        raise ParseError(f"expected a rational number p/q, got {t!r}", line, column)
    num, _, den = t.partition("/")
    if den and int(den) == 0:
        raise ParseError("zero denominator", line, column)
    return Fraction(int(num), int(den) if den else 1)


def _looks_like_header(text: str) -> bool:
    # bracketed labels such as [x,y] may open a statement, headers carry no operator
    return text.startswith("[") and not any(op in text for op in (":", " -> ", "="))


def parse_document(text: str) -> Document:
    doc = Document(source=text)
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if not stripped:
            continue
        column = len(body) - len(stripped) + 1
        m = _HEADER.match(stripped)
        if m is None and _looks_like_header(stripped):
            raise ParseError(f"malformed section header {stripped!r}", number, column)
        if m is not None:
            prefix, name = m.group(1), m.group(2)
            if name not in SECTIONS:
                raise ParseError(f"unknown section [{name}]", number, column)
            current = (prefix, name)
            if current in doc.sections:
                raise ParseError(f"section [{stripped[1:-1]}] appears twice", number, column)
            doc.sections[current] = []
            continue
        if current is None:
            raise ParseError("statement outside of any section", number, column)
        if current == (None, "meta"):
            key, eq, value = stripped.partition("=")
            if not eq or not key.strip():
                raise ParseError("meta lines look like key = value", number, column)
            doc.meta[key.strip()] = value.strip()
            continue
        doc.sections[current].append(Line(number, column, stripped))
    return doc


# low-level statement parsing ----------------------------------------------------

def _split_top_comma(text: str):
    depth = 0
    for k, ch in enumerate(text):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        elif ch == "," and depth == 0:
            return text[:k], text[k + 1:], k
    return None


def _split_arrow(ln: Line):
    m = re.search(r"\s->\s", ln.text)
    if not m:
        raise ParseError("expected 'lhs -> value' with blanks around the arrow",
                         ln.number, ln.column)
    return ln.text[:m.start()].strip(), ln.text[m.end():], ln.column + m.end()


def _label(text: str, known: dict, ln: Line, col: int) -> str:
    lab = text.strip()
    if lab not in known:
        raise ParseError(f"unknown basis label {lab!r}", ln.number, col)
    return lab


def _combination(text: str, known: dict, ln: Line, col: int) -> dict:
    """``{label: Fraction}`` from ``2*u - 1/3*v``."""
    body = text.strip()
    col += len(text) - len(text.lstrip())
    if body == "0":
        return {}
    if not body:
        raise ParseError("empty linear combination", ln.number, col)
    pieces = []
    sign, start = 1, 0
    for m in re.finditer(r"\s([+-])\s", body):
        pieces.append((sign, body[start:m.start()], start))
        sign = -1 if m.group(1) == "-" else 1
        start = m.end()
    pieces.append((sign, body[start:], start))
    out: dict = {}
    for sign, term, off in pieces:
        term = term.strip()
        tcol = col + off
        if term.startswith("-"):
            sign, term = -sign, term[1:].strip()
        coeff = Fraction(1)
        head, star, tail = term.partition("*")
        if star and _RATIONAL.match(head.strip()):
            coeff = parse_rational(head, ln.number, tcol)
            term = tail.strip()
        elif _RATIONAL.match(term):
            raise ParseError(f"coefficient {term!r} needs a basis label", ln.number, tcol)
        lab = _label(term, known, ln, tcol)
        out[lab] = out.get(lab, 0) + sign * coeff
    return {k: v for k, v in out.items() if v}


def _space(doc: Document, prefix=None, bigraded=False):
    lines = doc.lines("space", prefix)
    if not doc.has("space", prefix):
        where = f"[{prefix}.space]" if prefix else "[space]"
        raise ParseError(f"missing {where} section", 1, 1)
    labels, degs = [], []
    for ln in lines:
        lab, colon, rest = ln.text.rpartition(":")
        if not colon or not lab.strip():
            raise ParseError("space lines look like 'label : degree'", ln.number, ln.column)
        lab = lab.strip()
        if lab in labels:
            raise ParseError(f"label {lab!r} declared twice", ln.number, ln.column)
        col = ln.column + len(ln.text) - len(rest)
        parts = [p.strip() for p in rest.split(",")]
        want = 2 if bigraded else 1
        if len(parts) != want or not all(re.fullmatch(r"[+-]?\d+", p) for p in parts):
            raise ParseError(f"expected {'two integer degrees' if bigraded else 'an integer degree'}",
                             ln.number, col)
        labels.append(lab)
        degs.append(tuple(int(p) for p in parts) if bigraded else int(parts[0]))
    return labels, degs


def _unary(doc: Document, name: str, known: dict, prefix=None, rhs_known: dict | None = None):
    out = {}
    for ln in doc.lines(name, prefix):
        lhs, rhs, col = _split_arrow(ln)
        lab = _label(lhs, known, ln, ln.column)
        if lab in out:
            raise ParseError(f"{name} of {lab!r} given twice", ln.number, ln.column)
        out[lab] = _combination(rhs, rhs_known or known, ln, col)
    return out


def _binary(doc: Document, name: str, known: dict, prefix=None):
    out = {}
    for ln in doc.lines(name, prefix):
        lhs, rhs, col = _split_arrow(ln)
        split = _split_top_comma(lhs)
        if split is None:
            raise ParseError("expected 'label, label -> value'", ln.number, ln.column)
        a, b, k = split
        key = (_label(a, known, ln, ln.column), _label(b, known, ln, ln.column + k + 1))
        if key in out:
            raise ParseError(f"{name} of {key} given twice", ln.number, ln.column)
        out[key] = _combination(rhs, known, ln, col)
    return out


def _wrap(doc: Document, build):
    """Turn structural errors into parse errors pointing at the document."""
    try:
        return build()
    except ParseError:
        raise
    except KeyError as exc:
        raise ParseError(str(exc), 1, 1) from exc


# builders ---------------------------------------------------------------------------

def dgla_from_document(doc: Document, validate: bool = True) -> DGLA:
    labels, degs = _space(doc)
    known = {x: i for i, x in enumerate(labels)}
    d = _unary(doc, "differential", known)
    br = _binary(doc, "bracket", known)
    return DGLA(labels, degs, br, d, validate=validate, name=doc.meta.get("name"))


def artin_from_document(doc: Document, prefix=None, validate: bool = True) -> ArtinCdga:
    labels, degs = _space(doc, prefix)
    known = {x: i for i, x in enumerate(labels)}
    d = _unary(doc, "differential", known, prefix)
    mult = _binary(doc, "multiplication", known, prefix)
    name = doc.meta.get(f"{prefix}.name" if prefix else "name")
    return ArtinCdga(labels, degs, mult, d, validate=validate, name=name)


def complex_from_document(doc: Document) -> CochainComplex:
    labels, degs = _space(doc)
    known = {x: i for i, x in enumerate(labels)}
    d = _unary(doc, "differential", known)
    by_deg: dict = {}
    for lab, n in zip(labels, degs):
        by_deg.setdefault(n, []).append(lab)
    space = GradedSpace(by_deg)
    pos = {lab: (n, by_deg[n].index(lab)) for lab, n in zip(labels, degs)}
    diff: dict = {}
    for lab, vec in d.items():
        n, c = pos[lab]
        for tgt, v in vec.items():
            m, r = pos[tgt]
            if m != n + 1:
                ln = next(ln for ln in doc.lines("differential") if ln.text.startswith(lab))
                raise ParseError(f"d({lab}) must land in degree {n + 1}", ln.number, ln.column)
            mat = diff.setdefault(n, RatMatrix(space.dim(n + 1), space.dim(n)))
            mat._set(r, c, mat[r, c] + v)
    return CochainComplex(space, diff)


def bigraded_from_document(doc: Document, validate: bool = True):
    from .simplicial import BigradedArtin
    labels, degs = _space(doc, bigraded=True)
    known = {x: i for i, x in enumerate(labels)}
    return BigradedArtin(labels, degs, _binary(doc, "multiplication", known),
                         _unary(doc, "delta", known), _unary(doc, "partial", known),
                         validate=validate, name=doc.meta.get("name"))


def extension_from_document(doc: Document, validate: bool = True) -> CdgaMap:
    A = artin_from_document(doc, "source", validate)
    B = artin_from_document(doc, "target", validate)
    images = _unary(doc, "map", {x: 1 for x in A.labels}, rhs_known={x: 1 for x in B.labels})
    return CdgaMap(A, B, images, check=validate)


def element_coefficients(doc: Document) -> dict:
    """``{(L label, A label): c}`` or ``{label: c}`` from the ``[element]`` section."""
    out = {}
    for ln in doc.lines("element"):
        lhs, eq, rhs = ln.text.rpartition("=")
        if not eq:
            raise ParseError("element lines look like 'label, label = coefficient'",
                             ln.number, ln.column)
        c = parse_rational(rhs, ln.number, ln.column + len(lhs) + 1)
        split = _split_top_comma(lhs)
        key = (split[0].strip(), split[1].strip()) if split else lhs.strip()
        if key in out:
            raise ParseError(f"coefficient of {key} given twice", ln.number, ln.column)
        if c:
            out[key] = c
    return out


_BUILDERS = {
    "dgla": dgla_from_document,
    "artin": artin_from_document,
    "complex": complex_from_document,
    "bigraded": bigraded_from_document,
    "extension": extension_from_document,
}


def loads(text: str, validate: bool = True):
    """Parse and build; element documents return their coefficient dict."""
    doc = parse_document(text)
    kind = doc.kind
    if kind in ("element", "gauge"):
        return element_coefficients(doc)
    if kind not in _BUILDERS:
        raise ParseError(f"unknown or missing kind {kind!r} in [meta]", 1, 1)
    if kind == "complex":
        return _wrap(doc, lambda: complex_from_document(doc))
    return _wrap(doc, lambda: _BUILDERS[kind](doc, validate=validate))


def load(path: str, validate: bool = True):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), validate)


# serialisers -------------------------------------------------------------------------

def _fmt_comb(vec: dict, labels) -> str:
    items = sorted(vec.items())
    if not items:
        return "0"
    out = []
    for k, (i, c) in enumerate(items):
        c = Fraction(c)
        lead = "-" if c < 0 else ""
        if k:
            out.append(" - " if c < 0 else " + ")
            lead = ""
        mag = abs(c)
        out.append(lead + (labels[i] if mag == 1 else f"{format_rational(mag)}*{labels[i]}"))
    return "".join(out)


def _meta(kind: str, name: str | None, extra=()) -> list[str]:
    out = ["[meta]", f"kind = {kind}"]
    if name:
        out.append(f"name = {name}")
    out += [f"{k} = {v}" for k, v in extra]
    return out


def _structure_body(S, degrees, mult_name: str, prefix: str = "") -> list[str]:
    p = f"{prefix}." if prefix else ""
    out = [f"[{p}space]"] + [f"{lab} : {d}" for lab, d in zip(S.labels, degrees)]
    if S.diff:
        out.append(f"[{p}differential]")
        out += [f"{S.labels[i]} -> {_fmt_comb(v, S.labels)}" for i, v in sorted(S.diff.items())]
    if S.product:
        out.append(f"[{p}{mult_name}]")
        out += [f"{S.labels[i]}, {S.labels[j]} -> {_fmt_comb(v, S.labels)}"
                for (i, j), v in sorted(S.product.items())]
    return out


def dump_dgla(L: DGLA) -> str:
    return "\n".join(_meta("dgla", L.name) + _structure_body(L, L.cdeg, "bracket")) + "\n"


def dump_artin(A: ArtinCdga) -> str:
    body = _structure_body(A, [-d for d in A.cdeg], "multiplication")
    return "\n".join(_meta("artin", A.name) + body) + "\n"


def dump_complex(V: CochainComplex) -> str:
    lines = _meta("complex", None) + ["[space]"]
    for n in V.degrees:
        lines += [f"{lab} : {n}" for lab in V.space.labels(n)]
    diff = []
    for n in V.degrees:
        src, tgt = V.space.labels(n), V.space.labels(n + 1)
        for c, lab in enumerate(src):
            vec = {r: v for r, v in enumerate(V.d(n).column(c)) if v}
            if vec:
                diff.append(f"{lab} -> {_fmt_comb(vec, tgt)}")
    if diff:
        lines += ["[differential]"] + diff
    return "\n".join(lines) + "\n"


def dump_bigraded(B) -> str:
    lines = _meta("bigraded", B.name) + ["[space]"]
    lines += [f"{lab} : {i}, {j}" for lab, (i, j) in zip(B.labels, B.bideg)]
    for nm, table in (("delta", B.delta), ("partial", B.partial)):
        if table:
            lines.append(f"[{nm}]")
            lines += [f"{B.labels[i]} -> {_fmt_comb(v, B.labels)}" for i, v in sorted(table.items())]
    if B.product:
        lines.append("[multiplication]")
        lines += [f"{B.labels[i]}, {B.labels[j]} -> {_fmt_comb(v, B.labels)}"
                  for (i, j), v in sorted(B.product.items())]
    return "\n".join(lines) + "\n"


def dump_extension(e: CdgaMap) -> str:
    A, B = e.source, e.target
    extra = [(f"{p}.name", X.name) for p, X in (("source", A), ("target", B)) if X.name]
    lines = _meta("extension", None, extra)
    lines += _structure_body(A, [-d for d in A.cdeg], "multiplication", "source")
    lines += _structure_body(B, [-d for d in B.cdeg], "multiplication", "target")
    lines.append("[map]")
    lines += [f"{A.labels[i]} -> {_fmt_comb(im, B.labels)}" for i, im in enumerate(e.images)]
    return "\n".join(lines) + "\n"


def dump_element(element, kind: str = "element") -> str:
    """An MC or gauge element as ``L label, A label = c`` lines."""
    N = element.host
    lines = _meta(kind, None) + ["[element]"]
    for k, c in sorted(element.coeffs.items()):
        p, a = N.pairs[k]
        lines.append(f"{N.L.labels[p]}, {N.A.labels[a]} = {format_rational(c)}")
    return "\n".join(lines) + "\n"
