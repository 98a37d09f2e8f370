"""Deterministic TriG and N-Quads output, and a strict N-Quads reader.

TriG output is byte-stable: prefix block first (in prefix-map order),
graphs sorted by IRI, subjects sorted within each graph, predicate
lists grouped with ';' and ',', and 'a' for rdf:type. N-Quads output is
one expanded quad per line, lines sorted. The parser accepts any valid
N-Quads document except blank nodes and default-graph (3-term)
statements, which this model cannot represent.
"""

from __future__ import annotations

import re
from typing import Optional

from .errors import InvalidIri, ParseError
from .rdf import (
    Dataset,
    IRI_LANG_STRING,
    IRI_RDF_TYPE,
    IRI_XSD_STRING,
    Iri,
    Literal,
    PrefixMap,
    Quad,
    Term,
    term_key,
)

_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


# ----------------------------------------------------------------- TriG


def _trig_term(term: Term, prefixes: PrefixMap) -> str:
    if isinstance(term, Iri):
        return prefixes.compress(term)
    if term.langtag:
        return f'"{_escape(term.lexical)}"@{term.langtag}'
    return f'"{_escape(term.lexical)}"^^{prefixes.compress(term.datatype)}'


def serialize_trig(dataset: Dataset) -> str:
    """Byte-deterministic TriG for the whole dataset."""
    prefixes = dataset.prefixes
    lines = [f"@prefix {label}: <{ns.value}> ." for label, ns in prefixes.items()]
    lines.append("")
    for graph in dataset.graphs():
        lines.append(f"{prefixes.compress(graph)} {{")
        by_subject: dict[Iri, list[Quad]] = {}
        for quad in dataset.quads_in(graph):
            by_subject.setdefault(quad.subject, []).append(quad)
        for subject in sorted(by_subject):
            quads = by_subject[subject]
            groups: dict[Iri, list[Term]] = {}
            for q in quads:
                groups.setdefault(q.predicate, []).append(q.object)
            ordered = sorted(groups, key=lambda p: (p != IRI_RDF_TYPE, p.value))
            parts = []
            for predicate in ordered:
                objects = sorted(set(groups[predicate]), key=term_key)
                pred_str = "a" if predicate == IRI_RDF_TYPE else prefixes.compress(predicate)
                obj_str = ", ".join(_trig_term(o, prefixes) for o in objects)
                parts.append(f"{pred_str} {obj_str}")
            first, rest = parts[0], parts[1:]
            if rest:
                lines.append(f"  {prefixes.compress(subject)} {first} ;")
                for part in rest[:-1]:
                    lines.append(f"    {part} ;")
                lines.append(f"    {rest[-1]} .")
            else:
                lines.append(f"  {prefixes.compress(subject)} {first} .")
        lines.append("}")
        lines.append("")
    return "\n".join(lines)


# --------------------------------------------------------------- N-Quads


def _nq_term(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if term.langtag:
        return f'"{_escape(term.lexical)}"@{term.langtag}'
    if term.datatype == IRI_XSD_STRING:
        return f'"{_escape(term.lexical)}"'
    return f'"{_escape(term.lexical)}"^^<{term.datatype.value}>'


def serialize_nquads(dataset: Dataset) -> str:
    """One quad per line, expanded IRIs, lines sorted lexicographically."""
    lines = sorted(
        f"{_nq_term(q.subject)} {_nq_term(q.predicate)} {_nq_term(q.object)} "
        f"{_nq_term(q.graph)} ."
        for q in dataset
    )
    return "\n".join(lines) + ("\n" if lines else "")


_UNESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


def _unescape(text: str, line_no: int) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(text):
            raise ParseError("dangling backslash", line_no)
        esc = text[i + 1]
        if esc in _UNESCAPES:
            out.append(_UNESCAPES[esc])
            i += 2
        elif esc == "u":
            if i + 6 > len(text):
                raise ParseError("short \\u escape", line_no)
            out.append(chr(int(text[i + 2:i + 6], 16)))
            i += 6
        elif esc == "U":
            if i + 10 > len(text):
                raise ParseError("short \\U escape", line_no)
            out.append(chr(int(text[i + 2:i + 10], 16)))
            i += 10
        else:
            raise ParseError(f"unknown escape \\{esc}", line_no)
    return "".join(out)


_IRIREF_RE = re.compile(r'<([^<>"{}|^`\\\x00-\x20]*)>')
_STRING_RE = re.compile(r'"((?:[^"\\\n\r]|\\.)*)"')
_LANG_SUFFIX_RE = re.compile(r"@([A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*)")


class _LineScanner:
    def __init__(self, text: str, line_no: int):
        self.text = text
        self.pos = 0
        self.line_no = line_no

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def take_iri(self) -> Iri:
        self.skip_ws()
        m = _IRIREF_RE.match(self.text, self.pos)
        if not m:
            if self.text.startswith("_:", self.pos):
                raise ParseError("blank nodes are not supported", self.line_no)
            raise ParseError(f"expected IRI at column {self.pos + 1}", self.line_no)
        self.pos = m.end()
        try:
            return Iri(_unescape(m.group(1), self.line_no))
        except InvalidIri as exc:
            raise ParseError(str(exc), self.line_no) from exc

    def take_term(self) -> Term:
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == '"':
            m = _STRING_RE.match(self.text, self.pos)
            if not m:
                raise ParseError("unterminated string", self.line_no)
            self.pos = m.end()
            lexical = _unescape(m.group(1), self.line_no)
            if self.text.startswith("^^", self.pos):
                self.pos += 2
                datatype = self.take_iri()
                if datatype == IRI_LANG_STRING:
                    raise ParseError("rdf:langString needs a langtag", self.line_no)
                return Literal(lexical, datatype)
            m = _LANG_SUFFIX_RE.match(self.text, self.pos)
            if m:
                self.pos = m.end()
                return Literal(lexical, IRI_LANG_STRING, m.group(1))
            return Literal(lexical)
        return self.take_iri()

    def take_dot(self):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ".":
            raise ParseError("expected final '.'", self.line_no)
        self.pos += 1


def parse_nquads(text: str, prefixes: Optional[PrefixMap] = None) -> Dataset:
    """Parse an N-Quads document into a Dataset.

    Raises ParseError (with the 1-based line number) on syntax errors,
    blank nodes, or triples without a graph term.
    """
    dataset = Dataset(prefixes if prefixes is not None else PrefixMap())
    for line_no, raw_line in enumerate(text.split("\n"), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        scanner = _LineScanner(line, line_no)
        subject = scanner.take_iri()
        predicate = scanner.take_iri()
        obj = scanner.take_term()
        scanner.skip_ws()
        if scanner.pos < len(scanner.text) and scanner.text[scanner.pos] == ".":
            scanner.pos += 1
            if not scanner.at_end():
                raise ParseError("trailing content after '.'", line_no)
            raise ParseError(
                "statement has no graph term; the model requires named graphs",
                line_no,
            )
        graph_term = scanner.take_term()
        if not isinstance(graph_term, Iri):
            raise ParseError("graph term must be an IRI", line_no)
        scanner.take_dot()
        if not scanner.at_end():
            raise ParseError("trailing content after '.'", line_no)
        from .errors import InvalidLiteral

        try:
            dataset.add(Quad(subject, predicate, obj, graph_term))
        except (InvalidIri, InvalidLiteral) as exc:
            raise ParseError(str(exc), line_no) from exc
    return dataset
