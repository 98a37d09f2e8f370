"""Source citation parsing: canonical citations (CTS URNs) and free refs.

A classical source cell like 'Eneide, IV, 337-396' resolves against a
registry of known works and becomes a passage-level CTS URN plus a
Perseus resolver URL. Anything else is a general reference split into
author and title.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from .errors import CitationError, UnknownWork
from .normalize import int_to_roman, roman_to_int

PERSEUS_CITATION_PREFIX = "http://data.perseus.org/citations/"

# source category tags and their graph ids / display labels
SOURCE_TYPES = {
    "FonteClassica": ("fonteClassica", "Fonte Classica"),
    "RiscritturaLetteraria": ("riscritturaLetteraria", "Riscrittura Letteraria"),
    "FonteMedievaleOModerna": ("fonteMedievaleOModerna", "Fonte Medievale o Moderna"),
    "RiscritturaCinematografica": ("riscritturaCinematografica", "Riscrittura Cinematografica"),
}


def _norm_name(name: str) -> str:
    return " ".join(name.split()).lower()


@dataclass(frozen=True)
class RegistryEntry:
    cts_base_urn: str
    author_label: str
    author_slug: str
    work_slug: str
    work_label: str = ""
    viaf_id: Optional[str] = None


class WorkRegistry:
    """Known classical works, matched by name case-insensitively."""

    def __init__(self, entries: dict[str, RegistryEntry]):
        self._entries = {_norm_name(k): v for k, v in entries.items()}

    @classmethod
    def from_json(cls, path) -> "WorkRegistry":
        with open(path, encoding="utf-8") as fh:
            return cls.from_data(json.load(fh))

    @classmethod
    def from_data(cls, data: list[dict]) -> "WorkRegistry":
        entries: dict[str, RegistryEntry] = {}
        for row in data:
            entry = RegistryEntry(
                cts_base_urn=row["cts_base_urn"],
                author_label=row["author_label"],
                author_slug=row["author_slug"],
                work_slug=row["work_slug"],
                work_label=row.get("work_label", ""),
                viaf_id=row.get("viaf_id"),
            )
            for name in row.get("names", []):
                entries[name] = entry
        return cls(entries)

    def lookup(self, name: str) -> Optional[RegistryEntry]:
        return self._entries.get(_norm_name(name))

    def entry_by_slug(self, work_slug: str) -> Optional[RegistryEntry]:
        for entry in self._entries.values():
            if entry.work_slug == work_slug:
                return entry
        return None

    def names(self) -> list[str]:
        return sorted(self._entries)


@dataclass(frozen=True)
class CanonicalCitationRef:
    """A passage-level reference to a registry work."""

    raw_label: str
    work_key: str  # normalized registry key
    book: Optional[int]
    line_start: Optional[int]
    line_end: Optional[int]
    urn: str
    perseus_url: str
    content_slug: str


_RANGE_PART_RE = re.compile(r"^(?:vv?\.\s*)?(\d+)(?:\s*-\s*(\d+))?$")
_ROMAN_PART_RE = re.compile(r"^[IVXLCDM]+$")


def parse_canonical_citation(raw: str, registry: WorkRegistry) -> CanonicalCitationRef:
    """Parse 'WorkName[, Book][, [vv.] N[-M]]' against the registry.

    The work name may itself contain commas ('Seneca, Medea'); the book
    and range are recognized from the end of the string. Unknown works
    raise UnknownWork, backwards ranges raise CitationError.
    """
    text = " ".join(raw.split())
    if not text:
        raise CitationError("empty citation")
    parts = [p.strip() for p in text.split(",")]
    book: Optional[int] = None
    start: Optional[int] = None
    end: Optional[int] = None

    m = _RANGE_PART_RE.match(parts[-1]) if parts else None
    if m and len(parts) > 1:
        start = int(m.group(1))
        end = int(m.group(2)) if m.group(2) else start
        parts.pop()
    if parts and len(parts) > 1 and _ROMAN_PART_RE.match(parts[-1]):
        book = roman_to_int(parts.pop())

    work_name = ", ".join(p for p in parts if p)
    if not work_name:
        raise CitationError(f"no work name in citation {raw!r}")
    entry = registry.lookup(work_name)
    if entry is None:
        raise UnknownWork(work_name)
    if start is not None and end is not None and end < start:
        raise CitationError(f"range ends before it starts: {raw!r}")

    def ref(line: int) -> str:
        return f"{book}.{line}" if book is not None else str(line)

    if start is None:
        passage = str(book) if book is not None else ""
    elif start == end:
        passage = ref(start)
    else:
        passage = f"{ref(start)}-{ref(end)}"

    urn = entry.cts_base_urn + (f":{passage}" if passage else "")

    slug_parts = []
    if book is not None:
        slug_parts.append(int_to_roman(book))
    if start is not None:
        slug_parts.append(str(start))
        if end != start:
            slug_parts.append(str(end))
    content_slug = "-".join(slug_parts)

    return CanonicalCitationRef(
        raw_label=text,
        work_key=_norm_name(work_name),
        book=book,
        line_start=start,
        line_end=end,
        urn=urn,
        perseus_url=PERSEUS_CITATION_PREFIX + urn,
        content_slug=content_slug,
    )


def render_citation(ref: CanonicalCitationRef) -> str:
    """Canonical rendering; re-parsing it yields the same structure."""
    parts = [ref.work_key]
    if ref.book is not None:
        parts.append(int_to_roman(ref.book))
    if ref.line_start is not None:
        if ref.line_end != ref.line_start:
            parts.append(f"{ref.line_start}-{ref.line_end}")
        else:
            parts.append(str(ref.line_start))
    return ", ".join(parts)


@dataclass(frozen=True)
class GeneralReference:
    raw: str
    author_raw: str
    work_title: str
    type_tag: str


def parse_general_reference(
    raw: str, type_tag: str, overrides: Optional[dict[str, tuple[str, str]]] = None
) -> GeneralReference:
    """Split 'Author, Title' at the first comma. An override table fixes
    known problem strings where that split is wrong."""
    text = " ".join(raw.split())
    if overrides and text in overrides:
        author, title = overrides[text]
        return GeneralReference(raw=text, author_raw=author, work_title=title, type_tag=type_tag)
    author, sep, title = text.partition(",")
    if not sep:
        return GeneralReference(raw=text, author_raw="", work_title=text, type_tag=type_tag)
    return GeneralReference(
        raw=text, author_raw=author.strip(), work_title=title.strip(), type_tag=type_tag
    )


def load_overrides(path) -> dict[str, tuple[str, str]]:
    """Override file: {"raw string": ["author", "title"], ...}"""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return {" ".join(k.split()): (v[0], v[1]) for k, v in data.items()}
