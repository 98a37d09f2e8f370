"""Tabular input: column mapping config and CSV parsing into raw records.

No cleaning happens here beyond trimming outer whitespace; list cells are
split on the configured delimiter. Everything else is normalize's job.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Optional

from .citations import SOURCE_TYPES
from .errors import ConfigError, RowError, SchemaError

# scalar RawRecord fields and their mapping keys
SCALAR_FIELDS = (
    "item_id",
    "title",
    "typology",
    "theme",
    "artwork_author",
    "interpreter",
    "century",
    "year",
    "interpretation_date",
    "location",
    "classical_sources",
    "keywords",
    "description",
    "image_url",
    "see_also",
)
REQUIRED_FIELDS = tuple(f for f in SCALAR_FIELDS if f != "item_id")


@dataclass(frozen=True)
class ColumnMapping:
    """Field -> header mapping plus per-tag columns for other sources."""

    fields: dict[str, str]
    other_sources: dict[str, str]
    delimiter: str = ";"

    def __post_init__(self):
        for name in REQUIRED_FIELDS:
            if name not in self.fields:
                raise ConfigError(f"column mapping misses field {name!r}")
        unknown = set(self.fields) - set(SCALAR_FIELDS)
        if unknown:
            raise ConfigError(f"unknown mapped fields: {sorted(unknown)}")
        bad_tags = set(self.other_sources) - set(SOURCE_TYPES)
        if bad_tags:
            raise ConfigError(f"unknown source type tags: {sorted(bad_tags)}")

    @classmethod
    def from_json(cls, path) -> "ColumnMapping":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(
            fields=dict(data.get("fields", {})),
            other_sources=dict(data.get("other_sources", {})),
            delimiter=data.get("delimiter", ";"),
        )


@dataclass(frozen=True)
class RawRecord:
    """One collection row, untouched apart from outer trims and splits."""

    item_id: Optional[str]
    title: str
    typology_raw: str
    theme_raw: str
    artwork_author_raw: str
    interpreter_raw: str
    century_raw: str
    year_raw: str
    interpretation_date_raw: str
    location_raw: str
    classical_sources_raw: tuple[str, ...]
    other_sources_raw: tuple[tuple[str, str], ...]
    keywords_raw: str
    description: str
    image_url: str
    see_also: str


def _split_list(cell: str, delimiter: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in cell.split(delimiter) if p.strip())


def parse_table(path, mapping: ColumnMapping) -> list[RawRecord]:
    """Read a UTF-8 CSV with a header row.

    A mapped column missing from the header raises SchemaError; a row
    whose cell count differs from the header raises RowError with the
    1-based data row number.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty file: no header row") from None
        index: dict[str, int] = {}
        wanted = dict(mapping.fields)
        for tag, column in mapping.other_sources.items():
            wanted[f"other:{tag}"] = column
        for name, column in wanted.items():
            if column not in header:
                raise SchemaError(f"missing column {column!r} for {name}")
            index[name] = header.index(column)

        records: list[RawRecord] = []
        row_no = 0
        for row in reader:
            if not row:
                continue
            row_no += 1
            if len(row) != len(header):
                raise RowError(
                    f"row {row_no} has {len(row)} cells, header has {len(header)}",
                    row=row_no,
                )

            def cell(name: str) -> str:
                pos = index.get(name)
                return row[pos].strip() if pos is not None else ""

            others = []
            for tag in mapping.other_sources:
                for item in _split_list(cell(f"other:{tag}"), mapping.delimiter):
                    others.append((tag, item))
            records.append(
                RawRecord(
                    item_id=cell("item_id") or None,
                    title=cell("title"),
                    typology_raw=cell("typology"),
                    theme_raw=cell("theme"),
                    artwork_author_raw=cell("artwork_author"),
                    interpreter_raw=cell("interpreter"),
                    century_raw=cell("century"),
                    year_raw=cell("year"),
                    interpretation_date_raw=cell("interpretation_date"),
                    location_raw=cell("location"),
                    classical_sources_raw=_split_list(
                        cell("classical_sources"), mapping.delimiter
                    ),
                    other_sources_raw=tuple(others),
                    keywords_raw=cell("keywords"),
                    description=cell("description"),
                    image_url=cell("image_url"),
                    see_also=cell("see_also"),
                )
            )
    return records


def assign_item_id(record: RawRecord, row_index: int) -> str:
    """Source id when present, else the 1-based row index as a string."""
    if record.item_id:
        return record.item_id
    return str(row_index)


def write_table(records: list[RawRecord], mapping: ColumnMapping, path) -> None:
    """Inverse of parse_table for round-trip checks and fixture authoring."""
    columns: list[tuple[str, str]] = list(mapping.fields.items())
    columns += [(f"other:{tag}", col) for tag, col in mapping.other_sources.items()]
    sep = f"{mapping.delimiter} "
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([col for _, col in columns])
        for rec in records:
            row = []
            for name, _ in columns:
                if name == "item_id":
                    row.append(rec.item_id or "")
                elif name == "classical_sources":
                    row.append(sep.join(rec.classical_sources_raw))
                elif name.startswith("other:"):
                    tag = name.split(":", 1)[1]
                    row.append(
                        sep.join(s for t, s in rec.other_sources_raw if t == tag)
                    )
                elif name in ("title", "description", "image_url", "see_also"):
                    row.append(getattr(rec, name))
                else:
                    row.append(getattr(rec, f"{name}_raw"))
            writer.writerow(row)
