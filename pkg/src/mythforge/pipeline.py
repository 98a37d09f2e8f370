"""Curation: raw records to graph-ready CuratedRecord values.

Field errors are non-fatal by policy: the offending field is dropped or
downgraded, the error is logged into the result, and the record stays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .citations import (
    WorkRegistry,
    parse_canonical_citation,
    parse_general_reference,
)
from .errors import (
    CitationError,
    EmptyField,
    EmptySlug,
    NoiseError,
    TimeFormatError,
    UnknownWork,
)
from .graph import (
    CitationEntity,
    CuratedRecord,
    InterpretationRecord,
    PersonEntity,
    PlaceEntity,
    ReferenceEntity,
    TypeEntity,
    WorkEntity,
)
from .ingest import RawRecord, assign_item_id
from .normalize import (
    normalize_person,
    parse_interpretation_datetime,
    parse_timespan,
    slugify,
    split_location,
    split_theme,
    strip_serialization_noise,
)
from .reconcile import (
    AuthorityLink,
    Reconciler,
    ReviewRow,
    apply_links,
    review_rows,
)


@dataclass(frozen=True)
class CurationError:
    item_id: str
    field: str
    kind: str
    message: str


@dataclass
class CurationResult:
    records: list[CuratedRecord] = field(default_factory=list)
    errors: list[CurationError] = field(default_factory=list)
    review: list[ReviewRow] = field(default_factory=list)

    def error_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for err in self.errors:
            counts[err.kind] = counts.get(err.kind, 0) + 1
        return dict(sorted(counts.items()))


class Curator:
    def __init__(
        self,
        registry: WorkRegistry,
        reconciler: Reconciler,
        name_order: Optional[dict] = None,
        overrides: Optional[dict] = None,
    ):
        self.registry = registry
        self.reconciler = reconciler
        self.name_order = name_order or {}
        self.overrides = overrides or {}
        self._review: dict[tuple[str, str], list[ReviewRow]] = {}

    def curate(self, raw_records: list[RawRecord]) -> CurationResult:
        self._review = {}
        result = CurationResult()
        for index, record in enumerate(raw_records, start=1):
            result.records.append(self._curate_record(record, index, result.errors))
        for key in sorted(self._review):
            result.review.extend(self._review[key])
        return result

    # -- helpers

    def _log(self, errors: list[CurationError], item_id: str, field_name: str, exc: Exception):
        errors.append(
            CurationError(item_id, field_name, type(exc).__name__, str(exc))
        )

    def _order(self, column: str) -> str:
        return self.name_order.get(column, "given-first")

    def _reconciled(self, kind: str, raw: str, fallback_slug: str, label: str):
        """(final slug, ranked links); queues a review row when nothing
        was auto-accepted."""
        slug = self.reconciler.canonical_slug(raw, fallback_slug)
        links = self.reconciler.lookup_slug(kind, slug, label)
        accepted = any(l.score >= self.reconciler.accept_score for l in links)
        if not accepted:
            self._review.setdefault(
                (kind, raw), review_rows(kind, raw, links, self.reconciler.accept_score)
            )
        return slug, links

    def _person(self, raw: str, column: str) -> Optional[PersonEntity]:
        if not raw.strip():
            return None
        ref = normalize_person(raw, self._order(column))
        slug, links = self._reconciled("person", raw, ref.slug, ref.display_label)
        return apply_links(PersonEntity(slug=slug, label=ref.display_label), links)

    def _registry_work(self, entry) -> WorkEntity:
        links = []
        if entry.viaf_id:
            links.append(
                AuthorityLink("VIAF", entry.viaf_id, entry.work_label, score=1.0)
            )
        links.extend(self.reconciler.lookup_slug("work", entry.work_slug, entry.work_label))
        author = None
        if entry.author_label:
            author = PersonEntity(slug=entry.author_slug, label=entry.author_label)
        return WorkEntity(
            slug=entry.work_slug,
            label=entry.work_label,
            category_tag="FonteClassica",
            author=author,
            links=tuple(links),
            cts_base_urn=entry.cts_base_urn,
        )

    def _reference(self, raw: str, tag: str) -> ReferenceEntity:
        ref = parse_general_reference(raw, tag, self.overrides)
        author = self._person(ref.author_raw, "reference_author")
        if author is not None:
            base = slugify(f"{author.slug} {ref.work_title}")
        else:
            base = slugify(ref.work_title)
        slug, links = self._reconciled("work", ref.raw, base, ref.raw)
        work = apply_links(
            WorkEntity(slug=slug, label=ref.raw, category_tag=tag, author=author),
            links,
        )
        return ReferenceEntity(raw=ref.raw, work=work)

    def _curate_record(
        self, record: RawRecord, index: int, errors: list[CurationError]
    ) -> CuratedRecord:
        item_id = assign_item_id(record, index)

        typologies: list[TypeEntity] = []
        if record.typology_raw:
            try:
                cleaned = strip_serialization_noise(record.typology_raw)
            except NoiseError as exc:
                self._log(errors, item_id, "typology", exc)
                cleaned = ""
            for part in (p.strip() for p in cleaned.split(";")):
                if not part:
                    continue
                try:
                    typologies.append(TypeEntity(slugify(part), part))
                except EmptySlug as exc:
                    self._log(errors, item_id, "typology", exc)

        theme = None
        if record.theme_raw:
            try:
                theme = split_theme(record.theme_raw)
            except (EmptyField, EmptySlug) as exc:
                self._log(errors, item_id, "theme", exc)

        author = self._person(record.artwork_author_raw, "artwork_author")
        interpreter = self._person(record.interpreter_raw, "interpreter")

        timespans = []
        for field_name, raw in (("century", record.century_raw), ("year", record.year_raw)):
            if not raw.strip():
                continue
            try:
                timespans.append(parse_timespan(raw))
            except TimeFormatError as exc:
                self._log(errors, item_id, field_name, exc)

        generated_at = None
        if record.interpretation_date_raw.strip():
            try:
                generated_at = parse_interpretation_datetime(record.interpretation_date_raw)
            except TimeFormatError as exc:
                self._log(errors, item_id, "interpretation_date", exc)

        place = None
        if record.location_raw.strip():
            place_ref = split_location(record.location_raw)
            slug, links = self._reconciled(
                "place",
                place_ref.institution_label,
                slugify(place_ref.institution_label),
                place_ref.institution_label,
            )
            place = apply_links(
                PlaceEntity(
                    slug=slug,
                    label=place_ref.institution_label,
                    city_label=place_ref.city_label,
                ),
                links,
            )

        citations: list[CitationEntity] = []
        references: list[ReferenceEntity] = []
        for raw in record.classical_sources_raw:
            if not raw.strip():
                continue
            try:
                cit_ref = parse_canonical_citation(raw, self.registry)
            except (UnknownWork, CitationError) as exc:
                self._log(errors, item_id, "classical_sources", exc)
                references.append(self._reference(raw, "FonteClassica"))
                continue
            entry = self.registry.lookup(cit_ref.work_key)
            citations.append(CitationEntity(cit_ref, self._registry_work(entry)))
        for tag, raw in record.other_sources_raw:
            if raw.strip():
                references.append(self._reference(raw, tag))

        keywords = tuple(
            part.strip() for part in record.keywords_raw.split(";") if part.strip()
        )

        interpretation = None
        if theme is not None:
            interpretation = InterpretationRecord(
                item_id=item_id,
                theme=theme,
                interpreter=interpreter,
                generated_at=generated_at,
                citations=tuple(citations),
                references=tuple(references),
            )
        elif citations or references:
            self._log(
                errors, item_id, "theme",
                EmptyField("cited sources dropped: record has no theme"),
            )

        return CuratedRecord(
            item_id=item_id,
            title=record.title,
            description=record.description,
            image_url=record.image_url,
            see_also=record.see_also,
            keywords=keywords,
            typologies=tuple(typologies),
            author=author,
            timespans=tuple(timespans),
            place=place,
            interpretation=interpretation,
        )


def curate(
    raw_records: list[RawRecord],
    registry: WorkRegistry,
    reconciler: Reconciler,
    name_order: Optional[dict] = None,
    overrides: Optional[dict] = None,
) -> CurationResult:
    return Curator(registry, reconciler, name_order, overrides).curate(raw_records)
