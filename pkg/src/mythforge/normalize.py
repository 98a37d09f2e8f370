"""Cell-level cleaning: noise stripping, slugs, names, places, time-spans.

These functions take the raw spreadsheet strings and produce the
controlled labels, slugs and date bounds the graph is built from.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Optional

from .errors import (
    EmptyField,
    EmptySlug,
    NoiseError,
    RomanError,
    TimeFormatError,
)

SLUG_RE = re.compile(r"^[a-z0-9]+(-[a-z0-9]+)*$")

# Latin-1 / Latin Extended-A letters that NFKD does not decompose.
_TRANSLIT = {
    "\u00df": "ss",  # sharp s
    "\u00e6": "ae", "\u00c6": "ae",
    "\u00f8": "o", "\u00d8": "o",
    "\u00f0": "d", "\u00d0": "d",
    "\u00fe": "th", "\u00de": "th",
    "\u0111": "d", "\u0110": "d",
    "\u0127": "h", "\u0126": "h",
    "\u0131": "i",
    "\u0138": "k",
    "\u0142": "l", "\u0141": "l",
    "\u0149": "n",
    "\u014b": "ng", "\u014a": "ng",
    "\u0153": "oe", "\u0152": "oe",
    "\u017f": "s",
    "\u0167": "t", "\u0166": "t",
}


def slugify(label: str) -> str:
    """Lowercase ASCII slug: transliterate diacritics, collapse every run
    of non-alphanumerics to a single hyphen, trim hyphens.

    Idempotent. Raises EmptySlug when nothing alphanumeric survives.
    """
    text = "".join(_TRANSLIT.get(ch, ch) for ch in label)
    text = unicodedata.normalize("NFKD", text)
    text = "".join(ch for ch in text if not unicodedata.combining(ch))
    text = text.encode("ascii", "ignore").decode("ascii").lower()
    text = re.sub(r"[^a-z0-9]+", "-", text).strip("-")
    if not text:
        raise EmptySlug(f"no slug material in {label!r}")
    return text


def strip_serialization_noise(raw: str) -> str:
    """Decode serialized-array cell noise like
    a:1:{i:0;s:17:"Pittura vascolare";} into its payload strings,
    joined with '; '. Strings not starting with 'a:' pass through.

    Declared lengths are UTF-8 byte counts and win when they land on a
    closing quote; a wrong count falls back to the nearest '";'. Any
    other deviation from the grammar raises NoiseError.
    """
    text = raw.strip()
    if not text.startswith("a:"):
        return text

    def fail(why: str):
        raise NoiseError(f"{why} in serialized cell {raw!r}")

    m = re.match(r"^a:(\d+):\{", text)
    if not m:
        fail("bad header")
    count = int(m.group(1))
    pos = m.end()
    payloads = []
    for _ in range(count):
        m = re.compile(r'i:\d+;s:(\d+):"').match(text, pos)
        if not m:
            fail("bad element header")
        want = int(m.group(1))
        start = m.end()
        got = 0
        pos = start
        while got < want and pos < len(text):
            got += len(text[pos].encode("utf-8"))
            pos += 1
        if got != want or not text.startswith('";', pos):
            # declared count is off; trust the quote delimiter instead
            end = text.find('";', start)
            if end < 0:
                fail("unterminated payload")
            pos = end
        payloads.append(text[start:pos])
        pos += 2
    if not text.startswith("}", pos):
        fail("unbalanced braces")
    if text[pos + 1:].strip():
        fail("trailing garbage")
    return "; ".join(payloads)


@dataclass(frozen=True)
class ThemeRef:
    slug: str
    label: str


def split_theme(raw: str) -> ThemeRef:
    """'slug:Label' becomes (slug, label); a bare label is slugified.

    The left part is trusted only when it already looks like a slug,
    otherwise the colon is treated as part of the label.
    """
    text = raw.strip()
    if not text:
        raise EmptyField("empty theme cell")
    left, sep, right = text.partition(":")
    if sep and right.strip() and SLUG_RE.match(left.strip()):
        return ThemeRef(slug=left.strip(), label=right.strip())
    return ThemeRef(slug=slugify(text), label=text)


@dataclass(frozen=True)
class PersonRef:
    raw: str
    display_label: str
    slug: str


def normalize_person(raw: str, name_order: str = "given-first") -> PersonRef:
    """Standardize a person name to 'Surname, Given' and slug it.

    name_order says how the source column writes names: 'surname-first'
    takes the first token as surname, 'given-first' the last. A raw value
    already containing a comma is taken as standardized. Single tokens
    stay as-is.
    """
    text = " ".join(raw.split())
    if not text:
        raise EmptyField("empty person cell")
    if "," in text:
        surname, _, given = text.partition(",")
        surname, given = surname.strip(), given.strip()
    else:
        tokens = text.split(" ")
        if len(tokens) == 1:
            return PersonRef(raw=raw, display_label=text, slug=slugify(text))
        if name_order == "surname-first":
            surname, given = tokens[0], " ".join(tokens[1:])
        else:
            surname, given = tokens[-1], " ".join(tokens[:-1])
    display = f"{surname}, {given}" if given else surname
    return PersonRef(raw=raw, display_label=display, slug=slugify(f"{surname} {given}"))


@dataclass(frozen=True)
class PlaceRef:
    institution_label: str
    city_label: Optional[str] = None
    country_label: Optional[str] = None


def split_location(raw: str) -> PlaceRef:
    """Split on the last comma: left institution, right city."""
    text = raw.strip()
    if not text:
        raise EmptyField("empty location cell")
    if "," in text:
        institution, _, city = text.rpartition(",")
        return PlaceRef(institution_label=institution.strip(), city_label=city.strip())
    return PlaceRef(institution_label=text)


_ROMAN_RE = re.compile(r"^M{0,3}(CM|CD|D?C{0,3})(XC|XL|L?X{0,3})(IX|IV|V?I{0,3})$")
_ROMAN_VALUES = (
    (1000, "M"), (900, "CM"), (500, "D"), (400, "CD"),
    (100, "C"), (90, "XC"), (50, "L"), (40, "XL"),
    (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"),
)


def roman_to_int(text: str) -> int:
    """Strict canonical form only: IIII and friends are rejected."""
    if not text or not _ROMAN_RE.match(text):
        raise RomanError(f"not a canonical Roman numeral: {text!r}")
    total, i = 0, 0
    for value, symbol in _ROMAN_VALUES:
        while text.startswith(symbol, i):
            total += value
            i += len(symbol)
    if total < 1 or total > 3999:
        raise RomanError(f"out of range: {text!r}")
    return total


def int_to_roman(number: int) -> str:
    if not 1 <= number <= 3999:
        raise RomanError(f"out of range: {number}")
    out = []
    for value, symbol in _ROMAN_VALUES:
        while number >= value:
            out.append(symbol)
            number -= value
    return "".join(out)


@dataclass(frozen=True)
class TimeSpan:
    label: str
    kind: str  # "secolo" | "anno"
    begin: str  # xsd:date lexical
    end: str


def _year_lex(year: int) -> str:
    # astronomical numbering: year 0 is 1 BCE
    if year < 0:
        return f"-{-year:04d}"
    return f"{year:04d}"


_CENTURY_RE = re.compile(
    r"^(?:(?P<era>[^,]+),\s*)?(?P<rn>[IVXLCDM]+)\s+secolo(?P<bce>\s+a\.C\.)?$"
)
_RANGE_RE = re.compile(r"^(\d{4})\s*-\s*(\d{4})$")
_YEAR_RE = re.compile(r"^(\d{4})$")


def parse_timespan(raw: str) -> TimeSpan:
    """Century ('XVII secolo', optional era prefix and ' a.C.'), year range
    ('1624-1663') or single year ('1977') to calendar bounds.

    Centuries span exactly 100 years, Jan 1 to Dec 31. BCE centuries use
    proleptic astronomical years (year 0 is 1 BCE).
    """
    text = " ".join(raw.split())
    if not text:
        raise TimeFormatError("empty time cell")
    m = _CENTURY_RE.match(text)
    if m:
        try:
            n = roman_to_int(m.group("rn"))
        except RomanError as exc:
            raise TimeFormatError(str(exc)) from exc
        if m.group("bce"):
            begin_year = -(n * 100 - 1)
            end_year = -((n - 1) * 100)
        else:
            begin_year = (n - 1) * 100
            end_year = n * 100 - 1
        return TimeSpan(
            label=text,
            kind="secolo",
            begin=f"{_year_lex(begin_year)}-01-01",
            end=f"{_year_lex(end_year)}-12-31",
        )
    m = _RANGE_RE.match(text)
    if m:
        begin, end = int(m.group(1)), int(m.group(2))
        if begin > end:
            raise TimeFormatError(f"range begins after it ends: {text!r}")
        return TimeSpan(
            label=text, kind="anno",
            begin=f"{begin:04d}-01-01", end=f"{end:04d}-12-31",
        )
    m = _YEAR_RE.match(text)
    if m:
        year = int(m.group(1))
        return TimeSpan(
            label=text, kind="anno",
            begin=f"{year:04d}-01-01", end=f"{year:04d}-12-31",
        )
    raise TimeFormatError(f"unrecognized time format: {raw!r}")


_DATETIME_RE = re.compile(r"^(\d{2})/(\d{2})/(\d{4})\s+(\d{2}):(\d{2})$")


def parse_interpretation_datetime(raw: str) -> str:
    """DD/MM/YYYY HH:MM to ISO 'YYYY-MM-DDTHH:MM:00', no timezone."""
    text = raw.strip()
    m = _DATETIME_RE.match(text)
    if not m:
        raise TimeFormatError(f"not DD/MM/YYYY HH:MM: {raw!r}")
    day, month, year, hour, minute = (int(g) for g in m.groups())
    if not (1 <= month <= 12 and 1 <= day <= 31 and hour <= 23 and minute <= 59):
        raise TimeFormatError(f"out-of-range datetime: {raw!r}")
    import calendar

    if day > calendar.monthrange(year, month)[1]:
        raise TimeFormatError(f"impossible day: {raw!r}")
    return f"{year:04d}-{month:02d}-{day:02d}T{hour:02d}:{minute:02d}:00"
