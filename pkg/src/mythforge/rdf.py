"""Core RDF model: terms, quads, datasets, prefix maps, IRI minting.

Deliberately minimal. Every node is a named IRI (no blank nodes), every
literal carries an explicit datatype, and a Dataset is a plain set of
quads plus a prefix map. That keeps equality, diffing and deterministic
serialization trivial.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .errors import InvalidIri, InvalidLiteral, InvalidSegment, PrefixError

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

_IRI_RE = re.compile(r'^[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>"{}|\\^`]*$')
# local part of a compressed name: no leading '-'/'.', no trailing '.'
_LOCAL_RE = re.compile(r"^[A-Za-z0-9_](?:[A-Za-z0-9_./\-]*[A-Za-z0-9_/\-])?$")
_SEGMENT_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._\-]*$")
_DATE_RE = re.compile(r"^(-?\d{4,})-(\d{2})-(\d{2})$")
_TIME_RE = re.compile(r"^(\d{2}):(\d{2}):(\d{2})(?:\.\d+)?$")
_LANG_RE = re.compile(r"^[A-Za-z]{1,8}(-[A-Za-z0-9]{1,8})*$")

_MONTH_DAYS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def _is_leap(year: int) -> bool:
    return year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)


def _check_date(lexical: str) -> bool:
    m = _DATE_RE.match(lexical)
    if not m:
        return False
    year, month, day = int(m.group(1)), int(m.group(2)), int(m.group(3))
    if not 1 <= month <= 12:
        return False
    limit = _MONTH_DAYS[month - 1]
    if month == 2 and _is_leap(year):
        limit = 29
    return 1 <= day <= limit


def _check_datetime(lexical: str) -> bool:
    if "T" not in lexical:
        return False
    date_part, _, time_part = lexical.partition("T")
    if not _check_date(date_part):
        return False
    m = _TIME_RE.match(time_part)
    if not m:
        return False
    h, mi, s = int(m.group(1)), int(m.group(2)), int(m.group(3))
    return h <= 23 and mi <= 59 and s <= 59


def date_key(lexical: str) -> tuple:
    """Sort key for xsd:date lexicals, correct for negative years."""
    m = _DATE_RE.match(lexical)
    if not m:
        raise InvalidLiteral(f"not a date: {lexical!r}")
    return (int(m.group(1)), int(m.group(2)), int(m.group(3)))


@dataclass(frozen=True, order=True)
class Iri:
    """An absolute IRI, NFC-normalized at construction."""

    value: str

    def __post_init__(self):
        value = unicodedata.normalize("NFC", self.value)
        object.__setattr__(self, "value", value)
        if not _IRI_RE.match(value):
            raise InvalidIri(f"not an absolute IRI: {value!r}")

    def __str__(self) -> str:
        return self.value


IRI_RDF_TYPE = Iri(RDF_NS + "type")
IRI_LANG_STRING = Iri(RDF_NS + "langString")
IRI_XSD_STRING = Iri(XSD_NS + "string")
IRI_XSD_DATE = Iri(XSD_NS + "date")
IRI_XSD_DATETIME = Iri(XSD_NS + "dateTime")
IRI_XSD_ANYURI = Iri(XSD_NS + "anyURI")


@dataclass(frozen=True)
class Literal:
    """A typed literal. langtag is only legal with rdf:langString."""

    lexical: str
    datatype: Iri = IRI_XSD_STRING
    langtag: Optional[str] = None

    def __post_init__(self):
        if self.langtag is not None:
            if self.datatype != IRI_LANG_STRING:
                raise InvalidLiteral("langtag requires rdf:langString datatype")
            if not _LANG_RE.match(self.langtag):
                raise InvalidLiteral(f"bad langtag: {self.langtag!r}")
        elif self.datatype == IRI_LANG_STRING:
            raise InvalidLiteral("rdf:langString requires a langtag")
        if self.datatype == IRI_XSD_DATE and not _check_date(self.lexical):
            raise InvalidLiteral(f"bad xsd:date lexical: {self.lexical!r}")
        if self.datatype == IRI_XSD_DATETIME and not _check_datetime(self.lexical):
            raise InvalidLiteral(f"bad xsd:dateTime lexical: {self.lexical!r}")
        if self.datatype == IRI_XSD_ANYURI and re.search(r'[\s<>"]', self.lexical):
            raise InvalidLiteral(f"bad xsd:anyURI lexical: {self.lexical!r}")

    def __str__(self) -> str:
        if self.langtag:
            return f'"{self.lexical}"@{self.langtag}'
        return f'"{self.lexical}"^^{self.datatype}'


Term = Union[Iri, Literal]


def term_key(term: Term) -> tuple:
    """Total order over terms: IRIs before literals, then lexicographic."""
    if isinstance(term, Iri):
        return (0, term.value, "", "")
    return (1, term.lexical, term.datatype.value, term.langtag or "")


@dataclass(frozen=True)
class Quad:
    subject: Iri
    predicate: Iri
    object: Term
    graph: Iri

    def __post_init__(self):
        for name in ("subject", "predicate", "graph"):
            if not isinstance(getattr(self, name), Iri):
                raise InvalidIri(f"quad {name} must be an Iri")
        if not isinstance(self.object, (Iri, Literal)):
            raise InvalidIri("quad object must be an Iri or Literal")


def quad_key(q: Quad) -> tuple:
    return (q.graph.value, q.subject.value, q.predicate.value, term_key(q.object))


class PrefixMap:
    """Ordered label -> namespace bindings. Insertion order is kept and is
    the order the TriG serializer prints the prefix block in."""

    def __init__(self, bindings: Optional[Iterable[tuple[str, Iri]]] = None):
        self._map: dict[str, Iri] = {}
        for label, ns in bindings or ():
            self.bind(label, ns)

    def bind(self, label: str, namespace: Iri) -> None:
        if label in self._map:
            raise PrefixError(f"label bound twice: {label!r}")
        self._map[label] = namespace

    def __contains__(self, label: str) -> bool:
        return label in self._map

    def __len__(self) -> int:
        return len(self._map)

    def items(self) -> list[tuple[str, Iri]]:
        return list(self._map.items())

    def namespace(self, label: str) -> Iri:
        try:
            return self._map[label]
        except KeyError:
            raise PrefixError(f"unknown prefix: {label!r}") from None

    def merged(self, other: "PrefixMap") -> "PrefixMap":
        """New map: self's bindings, then other's that do not clash."""
        out = PrefixMap(self.items())
        for label, ns in other.items():
            if label not in out:
                out.bind(label, ns)
        return out

    def compress(self, iri: Iri) -> str:
        """`label:local` under the longest matching namespace whose remainder
        is a valid local name, else `<iri>`."""
        best = None
        for label, ns in self._map.items():
            prefix = ns.value
            if iri.value.startswith(prefix):
                local = iri.value[len(prefix):]
                if _LOCAL_RE.match(local):
                    if best is None or len(prefix) > len(best[1].value):
                        best = (label, ns, local)
        if best is None:
            return f"<{iri.value}>"
        return f"{best[0]}:{best[2]}"

    def expand(self, qname: str) -> Iri:
        """Inverse of compress for `label:local` forms; `<...>` also accepted."""
        if qname.startswith("<") and qname.endswith(">"):
            return Iri(qname[1:-1])
        label, sep, local = qname.partition(":")
        if not sep:
            raise PrefixError(f"not a prefixed name: {qname!r}")
        return Iri(self.namespace(label).value + local)


def compress(iri: Iri, prefixes: PrefixMap) -> str:
    return prefixes.compress(iri)


def mint_iri(base: Iri, segments: Iterable[str]) -> Iri:
    """Join path segments under a base ending in '/'.

    Segments must be URL-safe tokens (letters, digits, '.', '_', '-',
    not starting with punctuation). An empty segment list or a bad
    segment raises InvalidSegment.
    """
    if not base.value.endswith("/"):
        raise InvalidIri(f"base must end with '/': {base.value!r}")
    parts = list(segments)
    if not parts:
        raise InvalidSegment("empty segment list")
    for seg in parts:
        if not isinstance(seg, str) or not _SEGMENT_RE.match(seg):
            raise InvalidSegment(f"bad segment: {seg!r}")
    return Iri(base.value + "/".join(parts))


class Dataset:
    """A set of quads plus a prefix map. Duplicate insertion is a no-op."""

    def __init__(self, prefixes: Optional[PrefixMap] = None):
        self._quads: set[Quad] = set()
        self.prefixes = prefixes if prefixes is not None else PrefixMap()

    def add(self, quad: Quad) -> bool:
        """Insert; returns False when the quad was already present."""
        if quad in self._quads:
            return False
        self._quads.add(quad)
        return True

    def add_all(self, quads: Iterable[Quad]) -> int:
        return sum(1 for q in quads if self.add(q))

    def __len__(self) -> int:
        return len(self._quads)

    def __contains__(self, quad: Quad) -> bool:
        return quad in self._quads

    def __iter__(self) -> Iterator[Quad]:
        return iter(self._quads)

    def sorted_quads(self) -> list[Quad]:
        return sorted(self._quads, key=quad_key)

    def graphs(self) -> list[Iri]:
        """Each named graph exactly once, sorted by IRI."""
        return sorted({q.graph for q in self._quads})

    def quads_in(self, graph: Iri) -> list[Quad]:
        return sorted((q for q in self._quads if q.graph == graph), key=quad_key)

    def match(
        self,
        subject: Optional[Iri] = None,
        predicate: Optional[Iri] = None,
        object: Optional[Term] = None,
        graph: Optional[Iri] = None,
    ) -> Iterator[Quad]:
        for q in self._quads:
            if subject is not None and q.subject != subject:
                continue
            if predicate is not None and q.predicate != predicate:
                continue
            if object is not None and q.object != object:
                continue
            if graph is not None and q.graph != graph:
                continue
            yield q

    def objects(
        self,
        subject: Optional[Iri] = None,
        predicate: Optional[Iri] = None,
        graph: Optional[Iri] = None,
    ) -> list[Term]:
        found = {q.object for q in self.match(subject, predicate, None, graph)}
        return sorted(found, key=term_key)
