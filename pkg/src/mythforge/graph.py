"""Knowledge-graph assembly: the shared factual graph plus one
nanopublication (head, assertion, provenance, publication info) per
interpreted object, and the structural integrity checks over the result.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable, Optional, Union

from .citations import CanonicalCitationRef, SOURCE_TYPES
from .errors import IntegrityError
from .normalize import PersonRef, ThemeRef, TimeSpan, slugify
from .rdf import (
    Dataset,
    IRI_RDF_TYPE,
    IRI_XSD_ANYURI,
    IRI_XSD_DATE,
    IRI_XSD_DATETIME,
    Iri,
    Literal,
    PrefixMap,
    Quad,
    Term,
    mint_iri,
)

log = logging.getLogger(__name__)

DEFAULT_BASE = "https://purl.org/vpq/mythlod/data/"

NS_DCT = "http://purl.org/dc/terms/"
NS_ECRM = "http://erlangen-crm.org/current/"
NS_EFRBROO = "http://erlangen-crm.org/efrbroo/"
NS_CRM = "http://www.cidoc-crm.org/cidoc-crm/"
NS_HICO = "http://purl.org/emmedi/hico/"
NS_HUCIT = "http://purl.org/net/hucit#"
NS_NP = "http://www.nanopub.org/nschema#"
NS_OWL = "http://www.w3.org/2002/07/owl#"
NS_PROV = "http://www.w3.org/ns/prov#"
NS_RDFS = "http://www.w3.org/2000/01/rdf-schema#"
NS_SCHEMA = "http://schema.org/"
NS_XSD = "http://www.w3.org/2001/XMLSchema#"
NS_CO = "http://purl.org/co/"
NS_WDT = "http://www.wikidata.org/prop/direct/"


def default_prefix_map(base: str = DEFAULT_BASE) -> PrefixMap:
    """The fifteen standard bindings, in the order the TriG header prints."""
    return PrefixMap(
        [
            ("dct", Iri(NS_DCT)),
            ("ecrm", Iri(NS_ECRM)),
            ("efrbroo", Iri(NS_EFRBROO)),
            ("crm", Iri(NS_CRM)),
            ("hico", Iri(NS_HICO)),
            ("hucit", Iri(NS_HUCIT)),
            ("myth", Iri(base)),
            ("np", Iri(NS_NP)),
            ("owl", Iri(NS_OWL)),
            ("prov", Iri(NS_PROV)),
            ("rdfs", Iri(NS_RDFS)),
            ("schema", Iri(NS_SCHEMA)),
            ("xsd", Iri(NS_XSD)),
            ("co", Iri(NS_CO)),
            ("wdt", Iri(NS_WDT)),
        ]
    )


A = IRI_RDF_TYPE
RDFS_LABEL = Iri(NS_RDFS + "label")
RDFS_SEEALSO = Iri(NS_RDFS + "seeAlso")
OWL_SAMEAS = Iri(NS_OWL + "sameAs")
DCT_TITLE = Iri(NS_DCT + "title")
DCT_SUBJECT = Iri(NS_DCT + "subject")
DCT_CREATOR = Iri(NS_DCT + "creator")
DCT_DESCRIPTION = Iri(NS_DCT + "description")
SCHEMA_IMAGE = Iri(NS_SCHEMA + "image")
ECRM_P2 = Iri(NS_ECRM + "P2_has_type")
ECRM_P4 = Iri(NS_ECRM + "P4_has_time-span")
ECRM_P55 = Iri(NS_ECRM + "P55_has_current_location")
ECRM_P67 = Iri(NS_ECRM + "P67_refers_to")
ECRM_P89 = Iri(NS_ECRM + "P89_falls_within")
ECRM_E52 = Iri(NS_ECRM + "E52_Time-Span")
ECRM_E53 = Iri(NS_ECRM + "E53_Place")
CRM_P82A = Iri(NS_CRM + "P82a_begin_of_the_begin")
CRM_P82B = Iri(NS_CRM + "P82b_end_of_the_end")
EFRBROO_F1 = Iri(NS_EFRBROO + "F1_Work")
EFRBROO_F2 = Iri(NS_EFRBROO + "F2_Expression")
EFRBROO_F4 = Iri(NS_EFRBROO + "F4_Manifestation_Singleton")
EFRBROO_R42 = Iri(NS_EFRBROO + "R42_is_representative_manifestation_singleton_for")
HUCIT_CITATION = Iri(NS_HUCIT + "CanonicalCitation")
HUCIT_HAS_CONTENT = Iri(NS_HUCIT + "has_content")
NP_NANOPUB = Iri(NS_NP + "Nanopublication")
NP_HAS_ASSERTION = Iri(NS_NP + "hasAssertion")
NP_HAS_PROVENANCE = Iri(NS_NP + "hasProvenance")
NP_HAS_PUBINFO = Iri(NS_NP + "hasPublicationInfo")
PROV_GENERATED_AT = Iri(NS_PROV + "wasGeneratedAtTime")
PROV_GENERATED_BY = Iri(NS_PROV + "wasGeneratedBy")
PROV_ATTRIBUTED_TO = Iri(NS_PROV + "wasAttributedTo")
WDT_P625 = Iri(NS_WDT + "P625")
HICO_HAS_CRITERION = Iri(NS_HICO + "hasInterpretationCriterion")
HICO_HAS_TYPE = Iri(NS_HICO + "hasInterpretationType")

INTERPRETATION_CRITERION_SLUG = "sources-association"
INTERPRETATION_CRITERION_LABEL = "Associazione di Fonti"
INTERPRETATION_TYPE_SLUG = "iconographic-approach"
INTERPRETATION_TYPE_LABEL = "Iconographical Approach"

SYSTEM_TYPE_LABELS = {"secolo": "secolo", "anno": "anno", "collocazione": "collocazione"}


def s(text: str) -> Literal:
    return Literal(text)


def anyuri(text: str) -> Literal:
    return Literal(text, IRI_XSD_ANYURI)


# ---------------------------------------------------------------- entities


@dataclass(frozen=True)
class TypeEntity:
    slug: str
    label: str


@dataclass(frozen=True)
class PersonEntity:
    slug: str
    label: str
    links: tuple = ()

    def viaf_id(self) -> Optional[str]:
        for link in self.links:
            if link.source == "VIAF":
                return link.external_id
        return None


@dataclass(frozen=True)
class WorkEntity:
    slug: str
    label: str
    category_tag: str  # key of SOURCE_TYPES
    author: Optional[PersonEntity] = None
    links: tuple = ()
    cts_base_urn: Optional[str] = None

    def viaf_id(self) -> Optional[str]:
        for link in self.links:
            if link.source == "VIAF":
                return link.external_id
        return None


@dataclass(frozen=True)
class PlaceEntity:
    slug: str
    label: str
    city_label: Optional[str] = None
    country_label: Optional[str] = None
    coordinates: Optional[tuple[Decimal, Decimal]] = None
    links: tuple = ()


@dataclass(frozen=True)
class CitationEntity:
    ref: CanonicalCitationRef
    work: WorkEntity


@dataclass(frozen=True)
class ReferenceEntity:
    raw: str
    work: WorkEntity


@dataclass(frozen=True)
class InterpretationRecord:
    """The assertion-level slice of one record: who read what into the
    object, when, citing which sources."""

    item_id: str
    theme: ThemeRef
    interpreter: Optional[PersonEntity] = None
    generated_at: Optional[str] = None
    citations: tuple[CitationEntity, ...] = ()
    references: tuple[ReferenceEntity, ...] = ()
    criterion_slug: str = INTERPRETATION_CRITERION_SLUG
    type_slug: str = INTERPRETATION_TYPE_SLUG


@dataclass(frozen=True)
class CuratedRecord:
    """A fully normalized and reconciled object, ready for graph emission."""

    item_id: str
    title: str = ""
    description: str = ""
    image_url: str = ""
    see_also: str = ""
    keywords: tuple[str, ...] = ()
    typologies: tuple[TypeEntity, ...] = ()
    author: Optional[PersonEntity] = None
    timespans: tuple[TimeSpan, ...] = ()
    place: Optional[PlaceEntity] = None
    interpretation: Optional[InterpretationRecord] = None


@dataclass(frozen=True)
class Nanopublication:
    item_id: str
    np_iri: Iri
    head_graph: Iri
    assertion_graph: Iri
    provenance_graph: Iri
    pubinfo_graph: Iri


# ---------------------------------------------------------------- builder


class GraphBuilder:
    """Emits the four-level dataset for a list of curated records.

    Output is fully deterministic: entity nodes are emitted once (first
    occurrence wins), citation nodes are numbered in build order and
    deduplicated by URN.
    """

    def __init__(
        self,
        base: str = DEFAULT_BASE,
        build_time: str = "",
        publisher_iri: str = "",
        publisher_label: str = "",
        skip_empty_literals: bool = False,
        interpretation_act_namespace: str = "prov",
    ):
        self.base = Iri(base)
        self.build_time = build_time
        self.publisher_iri = Iri(publisher_iri) if publisher_iri else None
        self.publisher_label = publisher_label
        self.skip_empty_literals = skip_empty_literals
        if interpretation_act_namespace not in ("prov", "hico"):
            raise IntegrityError(
                f"unknown interpretation act namespace: {interpretation_act_namespace!r}"
            )
        ns = NS_PROV if interpretation_act_namespace == "prov" else NS_HICO
        self.act_class = Iri(ns + "InterpretationAct")
        self.factual_graph = self.mint("factual_data")
        self.hico_criterion = HICO_HAS_CRITERION
        self.hico_type = HICO_HAS_TYPE
        self._emitted: set[Iri] = set()
        self._cit_nodes: dict[str, Iri] = {}

    def mint(self, *segments: str) -> Iri:
        return mint_iri(self.base, segments)

    # -- public API

    def build(self, records: Iterable[CuratedRecord]) -> Dataset:
        records = list(records)
        dataset = Dataset(default_prefix_map(self.base.value))
        self._emitted = set()
        self._cit_nodes = {}
        for quad in self.build_factual_graph(records):
            dataset.add(quad)
        for record in records:
            if record.interpretation is None:
                continue
            _, quads = self.build_nanopub(record.interpretation)
            dataset.add_all(quads)
        return dataset

    def build_factual_graph(self, records: Iterable[CuratedRecord]) -> list[Quad]:
        quads: list[Quad] = []
        for record in records:
            quads.extend(self._item_quads(record))
        if self.publisher_iri is not None and self.publisher_label:
            self._entity(quads, self.publisher_iri, label=self.publisher_label)
        return quads

    def build_nanopub(self, interp: InterpretationRecord) -> tuple[Nanopublication, list[Quad]]:
        """Head (exactly four quads), assertion, provenance and pubinfo
        for one interpretation."""
        item_id = interp.item_id
        np_iri = self.mint(f"np-{item_id}")
        head = self.mint(f"head{item_id}")
        assertion = self.mint(f"assertion{item_id}")
        provenance = self.mint(f"provenance{item_id}")
        pubinfo = self.mint(f"pubInfo{item_id}")
        nanopub = Nanopublication(item_id, np_iri, head, assertion, provenance, pubinfo)
        quads = [
            Quad(np_iri, A, NP_NANOPUB, head),
            Quad(np_iri, NP_HAS_ASSERTION, assertion, head),
            Quad(np_iri, NP_HAS_PROVENANCE, provenance, head),
            Quad(np_iri, NP_HAS_PUBINFO, pubinfo, head),
        ]

        expression = self.mint("item", f"{item_id}-expression")
        theme = self.mint("categ", interp.theme.slug)
        quads.append(Quad(expression, ECRM_P67, theme, assertion))
        cited_subjects: set[Iri] = set()
        for citation in interp.citations:
            cited_subjects.add(self._citation_node(citation))
            cited_subjects.add(self.mint("work", citation.work.slug))
        for reference in interp.references:
            cited_subjects.add(self.mint("work", reference.work.slug))
        for subject in sorted(cited_subjects):
            quads.append(Quad(subject, ECRM_P67, theme, assertion))

        act = self.mint("int-act", item_id)
        if interp.generated_at:
            quads.append(
                Quad(assertion, PROV_GENERATED_AT,
                     Literal(interp.generated_at, IRI_XSD_DATETIME), provenance)
            )
        quads.append(Quad(assertion, PROV_GENERATED_BY, act, provenance))
        quads.append(Quad(act, A, self.act_class, provenance))
        quads.append(Quad(act, self.hico_criterion, self.mint(interp.criterion_slug), provenance))
        quads.append(Quad(act, self.hico_type, self.mint(interp.type_slug), provenance))
        if interp.interpreter is not None:
            quads.append(
                Quad(act, PROV_ATTRIBUTED_TO, self.mint("person", interp.interpreter.slug), provenance)
            )

        if self.publisher_iri is not None:
            quads.append(Quad(np_iri, PROV_ATTRIBUTED_TO, self.publisher_iri, pubinfo))
        if self.build_time:
            quads.append(
                Quad(np_iri, PROV_GENERATED_AT,
                     Literal(self.build_time, IRI_XSD_DATETIME), pubinfo)
            )
        return nanopub, quads

    # -- factual emission helpers

    def _lit_quads(self, subject: Iri, predicate: Iri, literal: Literal) -> list[Quad]:
        if self.skip_empty_literals and not literal.lexical:
            return []
        return [Quad(subject, predicate, literal, self.factual_graph)]

    def _entity(self, quads: list[Quad], node: Iri, *, label: str = "", type_iri: Optional[Iri] = None) -> Iri:
        """Emit a node's type/label once; later calls are no-ops."""
        if node in self._emitted:
            return node
        self._emitted.add(node)
        if type_iri is not None:
            quads.append(Quad(node, A, type_iri, self.factual_graph))
        if label:
            quads.append(Quad(node, RDFS_LABEL, s(label), self.factual_graph))
        return node

    def _links(self, quads: list[Quad], node: Iri, links: tuple) -> None:
        for link in links:
            url = link.url()
            if url and link.score >= 0.9:
                quads.append(Quad(node, OWL_SAMEAS, Iri(url), self.factual_graph))

    def _type_entity(self, quads: list[Quad], type_entity: TypeEntity) -> Iri:
        node = self.mint("type", type_entity.slug)
        return self._entity(quads, node, label=type_entity.label)

    def _system_type(self, quads: list[Quad], slug: str) -> Iri:
        return self._type_entity(quads, TypeEntity(slug, SYSTEM_TYPE_LABELS.get(slug, slug)))

    def _category_type(self, quads: list[Quad], tag: str) -> Iri:
        type_id, label = SOURCE_TYPES[tag]
        return self._type_entity(quads, TypeEntity(type_id, label))

    def _person_node(self, quads: list[Quad], person: PersonEntity) -> Iri:
        node = self.mint("person", person.slug)
        if node not in self._emitted:
            self._entity(quads, node, label=person.label)
            self._links(quads, node, person.links)
        return node

    def _work_node(self, quads: list[Quad], work: WorkEntity) -> Iri:
        node = self.mint("work", work.slug)
        if node in self._emitted:
            return node
        self._entity(quads, node, label=work.label, type_iri=EFRBROO_F1)
        quads.append(Quad(node, ECRM_P2, self._category_type(quads, work.category_tag), self.factual_graph))
        if work.author is not None:
            quads.append(Quad(node, DCT_CREATOR, self._person_node(quads, work.author), self.factual_graph))
        if work.cts_base_urn:
            from .citations import PERSEUS_CITATION_PREFIX

            quads.append(
                Quad(node, RDFS_SEEALSO, anyuri(PERSEUS_CITATION_PREFIX + work.cts_base_urn), self.factual_graph)
            )
        self._links(quads, node, work.links)
        return node

    def _place_node(self, quads: list[Quad], place: PlaceEntity) -> Iri:
        node = self.mint("place", place.slug)
        if node in self._emitted:
            return node
        self._entity(quads, node, label=place.label, type_iri=ECRM_E53)
        quads.append(Quad(node, ECRM_P2, self._system_type(quads, "collocazione"), self.factual_graph))
        city = self.mint("place", slugify(place.city_label)) if place.city_label else None
        country = self.mint("place", slugify(place.country_label)) if place.country_label else None
        if city is not None:
            # the city->country edge distinguishes the two levels downstream
            chain = country is not None and country != city and city not in self._emitted
            self._entity(quads, city, label=place.city_label, type_iri=ECRM_E53)
            quads.append(Quad(node, ECRM_P89, city, self.factual_graph))
            if chain:
                quads.append(Quad(city, ECRM_P89, country, self.factual_graph))
        if country is not None and country != city:
            self._entity(quads, country, label=place.country_label, type_iri=ECRM_E53)
            quads.append(Quad(node, ECRM_P89, country, self.factual_graph))
        if place.coordinates is not None:
            lat, lon = place.coordinates
            quads.append(Quad(node, WDT_P625, s(f"{lat},{lon}"), self.factual_graph))
        self._links(quads, node, place.links)
        return node

    def _timespan_node(self, quads: list[Quad], span: TimeSpan) -> Iri:
        node = self.mint("time", slugify(span.label))
        if node in self._emitted:
            return node
        self._entity(quads, node, label=span.label, type_iri=ECRM_E52)
        quads.append(Quad(node, ECRM_P2, self._system_type(quads, span.kind), self.factual_graph))
        quads.append(Quad(node, CRM_P82A, Literal(span.begin, IRI_XSD_DATE), self.factual_graph))
        quads.append(Quad(node, CRM_P82B, Literal(span.end, IRI_XSD_DATE), self.factual_graph))
        return node

    def _citation_node(self, citation: CitationEntity, quads: Optional[list[Quad]] = None) -> Iri:
        """Citation nodes are numbered by first appearance and shared
        between factual data and assertions (dedup key: the URN)."""
        ref = citation.ref
        node = self._cit_nodes.get(ref.urn)
        if node is None:
            node = self.mint("cit", str(len(self._cit_nodes) + 1))
            self._cit_nodes[ref.urn] = node
        if quads is not None and node not in self._emitted:
            self._emit_citation_quads(quads, node, citation)
        return node

    def _emit_citation_quads(self, quads: list[Quad], node: Iri, citation: CitationEntity) -> None:
        self._entity(quads, node, label=citation.ref.raw_label, type_iri=HUCIT_CITATION)
        quads.append(Quad(node, ECRM_P2, self._category_type(quads, "FonteClassica"), self.factual_graph))
        if citation.ref.content_slug:
            content = self.mint("str", citation.ref.content_slug)
            self._entity(quads, content, label=citation.ref.content_slug)
            quads.append(Quad(node, HUCIT_HAS_CONTENT, content, self.factual_graph))
        quads.append(Quad(node, RDFS_SEEALSO, anyuri(citation.ref.perseus_url), self.factual_graph))

    def _item_quads(self, record: CuratedRecord) -> list[Quad]:
        quads: list[Quad] = []
        g = self.factual_graph
        item = self.mint("item", record.item_id)
        quads.append(Quad(item, A, EFRBROO_F4, g))
        for typology in record.typologies:
            quads.append(Quad(item, ECRM_P2, self._type_entity(quads, typology), g))
        if record.place is not None:
            quads.append(Quad(item, ECRM_P55, self._place_node(quads, record.place), g))
        if record.author is not None:
            quads.append(Quad(item, DCT_CREATOR, self._person_node(quads, record.author), g))
        for span in record.timespans:
            quads.append(Quad(item, ECRM_P4, self._timespan_node(quads, span), g))
        expression = self.mint("item", f"{record.item_id}-expression")
        quads.append(Quad(item, EFRBROO_R42, expression, g))
        quads.append(Quad(expression, A, EFRBROO_F2, g))
        quads.extend(self._lit_quads(item, DCT_TITLE, s(record.title)))
        for keyword in record.keywords:
            quads.append(Quad(item, DCT_SUBJECT, s(keyword), g))
        if record.description:
            quads.append(Quad(item, DCT_DESCRIPTION, s(record.description), g))
        quads.extend(self._lit_quads(item, SCHEMA_IMAGE, anyuri(record.image_url)))
        quads.extend(self._lit_quads(item, RDFS_SEEALSO, anyuri(record.see_also)))

        interp = record.interpretation
        if interp is not None:
            theme = self.mint("categ", interp.theme.slug)
            self._entity(quads, theme, label=interp.theme.label)
            for citation in interp.citations:
                self._citation_node(citation, quads)
                self._work_node(quads, citation.work)
            for reference in interp.references:
                self._work_node(quads, reference.work)
            if interp.interpreter is not None:
                self._person_node(quads, interp.interpreter)
            self._entity(
                quads, self.mint(interp.criterion_slug), label=INTERPRETATION_CRITERION_LABEL
            )
            self._entity(
                quads, self.mint(interp.type_slug), label=INTERPRETATION_TYPE_LABEL
            )
        return quads


# ---------------------------------------------------------------- integrity

_REF_PREDICATES = (ECRM_P67, ECRM_P2, ECRM_P55, ECRM_P89, EFRBROO_R42)
_HEAD_PREDICATES = {NP_HAS_ASSERTION, NP_HAS_PROVENANCE, NP_HAS_PUBINFO, A}


def check_dataset(dataset: Dataset, base: str = DEFAULT_BASE) -> list[str]:
    """All structural problems found, as human-readable strings.

    Checks the four-level partition, head-graph arity, nanopub
    completeness, and referential integrity of the linking predicates.
    """
    problems: list[str] = []
    factual = Iri(base + "factual_data")
    ids: dict[str, set[str]] = {"head": set(), "assertion": set(), "provenance": set(), "pubInfo": set()}
    for graph in dataset.graphs():
        if graph == factual:
            continue
        name = graph.value[len(base):] if graph.value.startswith(base) else None
        matched = False
        if name:
            for part in ids:
                if name.startswith(part) and len(name) > len(part):
                    ids[part].add(name[len(part):])
                    matched = True
                    break
        if not matched:
            problems.append(f"graph outside the four-level scheme: {graph.value}")

    all_ids = set().union(*ids.values())
    for item_id in sorted(all_ids):
        head = Iri(f"{base}head{item_id}")
        head_quads = dataset.quads_in(head)
        if not head_quads:
            problems.append(f"nanopub {item_id}: missing head graph")
            continue
        if len(head_quads) != 4:
            problems.append(
                f"nanopub {item_id}: head has {len(head_quads)} quads, expected 4"
            )
        preds = {q.predicate for q in head_quads}
        if preds != _HEAD_PREDICATES:
            problems.append(f"nanopub {item_id}: head predicates are off: "
                            f"{sorted(p.value for p in preds)}")
        for part in ("assertion", "provenance", "pubInfo"):
            part_graph = Iri(f"{base}{part}{item_id}")
            if not dataset.quads_in(part_graph):
                problems.append(f"nanopub {item_id}: empty or missing {part} graph")

    described: set[Iri] = set()
    for quad in dataset.quads_in(factual):
        if quad.predicate in (A, RDFS_LABEL):
            described.add(quad.subject)
    for quad in dataset.sorted_quads():
        if quad.predicate in _REF_PREDICATES and isinstance(quad.object, Iri):
            if quad.object not in described:
                problems.append(
                    f"dangling {quad.predicate.value.rsplit('/', 1)[-1].rsplit('#', 1)[-1]} "
                    f"object: {quad.object.value}"
                )
        # a cited entity must exist as a factual node
        if quad.predicate == ECRM_P67 and quad.subject not in described:
            problems.append(f"dangling P67_refers_to subject: {quad.subject.value}")
    return sorted(set(problems))


def validate_dataset(dataset: Dataset, base: str = DEFAULT_BASE) -> None:
    """Raise IntegrityError listing every offender, or return silently."""
    problems = check_dataset(dataset, base)
    if problems:
        raise IntegrityError(f"{len(problems)} integrity problem(s)", offenders=problems)
