"""Derives the catalog and storytelling JSON bundles from a built Dataset.

Everything here is read back out of the quads; no pipeline state is
consulted. The bundle layouts are the data contract of the web client:
catalog.json (cards), facets.json (facet index), storytelling-<slug>.json.
"""

from __future__ import annotations

import json
import os
import re
from typing import Optional

from .citations import PERSEUS_CITATION_PREFIX, SOURCE_TYPES
from .errors import UnknownWork
from .graph import (
    A,
    CRM_P82A,
    CRM_P82B,
    DCT_CREATOR,
    DCT_DESCRIPTION,
    DCT_SUBJECT,
    DCT_TITLE,
    DEFAULT_BASE,
    ECRM_P2,
    ECRM_P4,
    ECRM_P55,
    ECRM_P67,
    ECRM_P89,
    EFRBROO_F4,
    HICO_HAS_CRITERION,
    HICO_HAS_TYPE,
    OWL_SAMEAS,
    PROV_ATTRIBUTED_TO,
    PROV_GENERATED_BY,
    RDFS_LABEL,
    RDFS_SEEALSO,
    SCHEMA_IMAGE,
    WDT_P625,
)
from .rdf import Dataset, Iri, Literal, date_key

SCHEMA_VERSION = 1
DEFAULT_BUCKET_WIDTH = 50

FACET_LEVELS = {
    "factual": ["typology", "period"],
    "assertion": ["category", "source_type"],
    "provenance": ["interpreter"],
}

_CATEGORY_IDS = {type_id for type_id, _ in SOURCE_TYPES.values()}
_VIAF_RE = re.compile(r"^https?://viaf\.org/viaf/([^/]+)/?$")

# passage component of a CTS URN, as this pipeline constructs them
_PASSAGE_RES = (
    re.compile(r"^(\d+)\.(\d+)-(?:\d+)\.(\d+)$"),  # book.start-book.end
    re.compile(r"^(\d+)\.(\d+)()$"),               # book.line
    re.compile(r"^()(\d+)-(\d+)$"),                # start-end, no book
)


def _id_key(item_id: str) -> tuple:
    return (len(item_id), item_id)


class DatasetView:
    """Read helpers over one Dataset; all lookups are deterministic."""

    def __init__(self, dataset: Dataset, base: str = DEFAULT_BASE):
        self.d = dataset
        self.base = base
        self.factual = Iri(base + "factual_data")

    def tail(self, iri: Iri) -> str:
        return iri.value[len(self.base):] if iri.value.startswith(self.base) else iri.value

    def node(self, *segments: str) -> Iri:
        return Iri(self.base + "/".join(segments))

    def label(self, node: Iri) -> str:
        for obj in self.d.objects(node, RDFS_LABEL, self.factual):
            if isinstance(obj, Literal):
                return obj.lexical
        return ""

    def literal(self, subject: Iri, predicate: Iri, graph: Optional[Iri] = None) -> str:
        for obj in self.d.objects(subject, predicate, graph or self.factual):
            if isinstance(obj, Literal):
                return obj.lexical
        return ""

    def literals(self, subject: Iri, predicate: Iri) -> list[str]:
        return [o.lexical for o in self.d.objects(subject, predicate, self.factual)
                if isinstance(o, Literal)]

    def iris(self, subject: Iri, predicate: Iri, graph: Optional[Iri] = None) -> list[Iri]:
        return [o for o in self.d.objects(subject, predicate, graph or self.factual)
                if isinstance(o, Iri)]

    def viaf_id(self, node: Iri) -> Optional[str]:
        for obj in self.iris(node, OWL_SAMEAS):
            m = _VIAF_RE.match(obj.value)
            if m:
                return m.group(1)
        return None

    def item_ids(self) -> list[str]:
        ids = []
        for quad in self.d.match(None, A, EFRBROO_F4, self.factual):
            tail = self.tail(quad.subject)
            if tail.startswith("item/"):
                ids.append(tail[len("item/"):])
        return sorted(set(ids), key=_id_key)

    def assertion_graph(self, item_id: str) -> Iri:
        return Iri(f"{self.base}assertion{item_id}")

    def provenance_graph(self, item_id: str) -> Iri:
        return Iri(f"{self.base}provenance{item_id}")

    def item_themes(self, item_id: str) -> list[Iri]:
        expression = self.node("item", f"{item_id}-expression")
        graph = self.assertion_graph(item_id)
        return [t for t in self.iris(expression, ECRM_P67, graph)
                if self.tail(t).startswith("categ/")]

    def cited_subjects(self, item_id: str) -> tuple[list[Iri], list[Iri]]:
        """(citation nodes, work nodes) appearing in the item's assertion."""
        graph = self.assertion_graph(item_id)
        cits: list[Iri] = []
        works: list[Iri] = []
        for quad in self.d.match(None, ECRM_P67, None, graph):
            tail = self.tail(quad.subject)
            if tail.startswith("cit/"):
                cits.append(quad.subject)
            elif tail.startswith("work/"):
                works.append(quad.subject)
        cit_num = lambda iri: int(self.tail(iri).rsplit("/", 1)[-1])
        return sorted(set(cits), key=cit_num), sorted(set(works))

    def person_of(self, item_id: str) -> Optional[Iri]:
        item = self.node("item", item_id)
        for obj in self.iris(item, DCT_CREATOR):
            if self.tail(obj).startswith("person/"):
                return obj
        return None

    def interpreter_of(self, item_id: str) -> Optional[Iri]:
        graph = self.provenance_graph(item_id)
        act = None
        for quad in self.d.match(None, PROV_GENERATED_BY, None, graph):
            if isinstance(quad.object, Iri):
                act = quad.object
        if act is None:
            return None
        for obj in self.iris(act, PROV_ATTRIBUTED_TO, graph):
            if self.tail(obj).startswith("person/"):
                return obj
        return None

    def timespans(self, item_id: str) -> list[dict]:
        """Each item span as {node, label, kind, begin, end}, narrowest last."""
        item = self.node("item", item_id)
        spans = []
        for node in self.iris(item, ECRM_P4):
            begin = self.literal(node, CRM_P82A)
            end = self.literal(node, CRM_P82B)
            if not begin or not end:
                continue
            kinds = [self.tail(t)[len("type/"):]
                     for t in self.iris(node, ECRM_P2)
                     if self.tail(t).startswith("type/")]
            spans.append({
                "node": node,
                "label": self.label(node),
                "kind": kinds[0] if kinds else "",
                "begin": begin,
                "end": end,
            })
        width = lambda sp: tuple(b - a for a, b in zip(date_key(sp["begin"]), date_key(sp["end"])))
        return sorted(spans, key=lambda sp: (width(sp), sp["label"]), reverse=True)

    def collocation(self, item_id: str) -> dict:
        item = self.node("item", item_id)
        places = [p for p in self.iris(item, ECRM_P55) if self.tail(p).startswith("place/")]
        if not places:
            return {"institution": None, "city": None, "country": None, "coordinates": None}
        place = places[0]
        parents = self.iris(place, ECRM_P89)
        city = country = None
        for parent in parents:
            for target in self.iris(parent, ECRM_P89):
                if target in parents:
                    city, country = parent, target
                    break
            if city is not None:
                break
        if city is None and parents:
            city = parents[0]
        coords = None
        raw = self.literal(place, WDT_P625)
        if raw and "," in raw:
            lat, lon = raw.split(",", 1)
            try:
                coords = [float(lat), float(lon)]
            except ValueError:
                coords = None
        return {
            "institution": self.label(place) or None,
            "city": self.label(city) if city is not None else None,
            "country": self.label(country) if country is not None else None,
            "coordinates": coords,
        }


# ---------------------------------------------------------------- catalog


def _person_dict(view: DatasetView, node: Optional[Iri]) -> Optional[dict]:
    if node is None:
        return None
    person = {"label": view.label(node)}
    viaf = view.viaf_id(node)
    if viaf:
        person["viaf"] = viaf
    return person


def _citation_work(view: DatasetView, cit: Iri, works: list[Iri]) -> Optional[Iri]:
    """The registry work a citation belongs to, matched by Perseus URL."""
    cit_url = view.literal(cit, RDFS_SEEALSO)
    if not cit_url:
        return None
    for work in works:
        work_url = view.literal(work, RDFS_SEEALSO)
        if work_url and (cit_url == work_url or cit_url.startswith(work_url + ":")):
            return work
    return None


def _item_facets(view: DatasetView, item_id: str) -> dict[str, list[tuple[str, str]]]:
    item = view.node("item", item_id)
    facets: dict[str, list[tuple[str, str]]] = {
        "typology": [], "period": [], "category": [], "source_type": [], "interpreter": [],
    }
    for t in view.iris(item, ECRM_P2):
        tail = view.tail(t)
        if tail.startswith("type/"):
            facets["typology"].append((tail[len("type/"):], view.label(t)))
    for span in view.timespans(item_id):
        facets["period"].append((view.tail(span["node"])[len("time/"):], span["label"]))
    for theme in view.item_themes(item_id):
        facets["category"].append((view.tail(theme)[len("categ/"):], view.label(theme)))
    cits, works = view.cited_subjects(item_id)
    tags = set()
    for source in cits + works:
        for t in view.iris(source, ECRM_P2):
            tail = view.tail(t)
            if tail.startswith("type/") and tail[len("type/"):] in _CATEGORY_IDS:
                tags.add((tail[len("type/"):], view.label(t)))
    facets["source_type"] = sorted(tags)
    interpreter = view.interpreter_of(item_id)
    if interpreter is not None:
        facets["interpreter"].append(
            (view.tail(interpreter)[len("person/"):], view.label(interpreter))
        )
    return facets


def _card(view: DatasetView, item_id: str) -> dict:
    item = view.node("item", item_id)
    spans = view.timespans(item_id)
    period: Optional[dict] = None
    if spans:
        century = [sp for sp in spans if sp["kind"] == "secolo"]
        years = [sp for sp in spans if sp["kind"] == "anno"]
        label = century[0]["label"] if century else spans[-1]["label"]
        if century and years:
            label = f"{century[0]['label']} ({years[0]['label']})"
        narrowest = spans[-1]
        period = {"label": label, "years": {"begin": narrowest["begin"], "end": narrowest["end"]}}

    colloc = view.collocation(item_id)
    factual = {
        "title": view.literal(item, DCT_TITLE),
        "author": _person_dict(view, view.person_of(item_id)),
        "keywords": view.literals(item, DCT_SUBJECT),
        "typology": [view.label(t) for t in view.iris(item, ECRM_P2)
                     if view.tail(t).startswith("type/")],
        "collocation": {k: colloc[k] for k in ("institution", "city", "country")},
        "period": period,
        "description": view.literal(item, DCT_DESCRIPTION),
        "image": view.literal(item, SCHEMA_IMAGE),
        "see_also": view.literal(item, RDFS_SEEALSO),
    }

    cits, works = view.cited_subjects(item_id)
    citation_works = []
    canonical = []
    for cit in cits:
        work = _citation_work(view, cit, works)
        if work is not None and work not in citation_works:
            citation_works.append(work)
        canonical.append({
            "label": view.label(cit),
            "perseus_url": view.literal(cit, RDFS_SEEALSO),
        })
    related = view.label(citation_works[0]) if citation_works else None
    references = []
    for work in works:
        if work in citation_works:
            continue
        type_labels = [view.label(t) for t in view.iris(work, ECRM_P2)
                       if view.tail(t).startswith("type/")]
        author_node = next(
            (p for p in view.iris(work, DCT_CREATOR) if view.tail(p).startswith("person/")),
            None,
        )
        reference = {
            "label": view.label(work),
            "type": type_labels[0] if type_labels else None,
            "author": _person_dict(view, author_node),
        }
        if related:
            reference["related_work"] = related
        references.append(reference)

    assertion = {
        "categories": [view.label(t) for t in view.item_themes(item_id)],
        "canonical_citations": canonical,
        "general_references": references,
    }

    provenance = None
    prov_graph = view.provenance_graph(item_id)
    act = None
    for quad in view.d.match(None, PROV_GENERATED_BY, None, prov_graph):
        if isinstance(quad.object, Iri):
            act = quad.object
    if act is not None:
        criterion = view.iris(act, HICO_HAS_CRITERION, prov_graph)
        act_type = view.iris(act, HICO_HAS_TYPE, prov_graph)
        interpreter = view.interpreter_of(item_id)
        provenance = {
            "interpretation_type": view.label(act_type[0]) if act_type else None,
            "interpretation_criterion": view.label(criterion[0]) if criterion else None,
            "performer": view.label(interpreter) if interpreter is not None else None,
        }

    return {
        "item_id": item_id,
        "factual": factual,
        "assertion": assertion,
        "provenance": provenance,
        "facet_values": {name: [vid for vid, _ in values]
                         for name, values in _item_facets(view, item_id).items()},
    }


def export_catalog(dataset: Dataset, base: str = DEFAULT_BASE) -> tuple[list[dict], dict]:
    """One card per museal object plus the facet index."""
    view = DatasetView(dataset, base)
    cards = []
    acc: dict[str, dict[str, dict]] = {name: {} for group in FACET_LEVELS.values() for name in group}
    for item_id in view.item_ids():
        cards.append(_card(view, item_id))
        for facet, values in _item_facets(view, item_id).items():
            for value_id, value_label in values:
                slot = acc[facet].setdefault(value_id, {"label": value_label, "ids": set()})
                slot["ids"].add(item_id)
    facets = {
        facet: [
            {
                "value_label": slot["label"],
                "value_id": value_id,
                "count": len(slot["ids"]),
                "item_ids": sorted(slot["ids"], key=_id_key),
            }
            for value_id, slot in sorted(
                values.items(), key=lambda kv: (kv[1]["label"], kv[0])
            )
        ]
        for facet, values in acc.items()
    }
    return cards, {"levels": FACET_LEVELS, "facets": facets}


# ------------------------------------------------------------ storytelling


def parse_passage(passage: str) -> Optional[tuple[Optional[int], int, int]]:
    """(book, line_start, line_end) out of a URN passage; None when the
    passage carries no line information."""
    for rx in _PASSAGE_RES:
        m = rx.match(passage)
        if m:
            book_s, start_s, end_s = m.group(1), m.group(2), m.group(3)
            book = int(book_s) if book_s else None
            start = int(start_s)
            end = int(end_s) if end_s else start
            return (book, start, end)
    return None


def bucket_range(start: int, end: int, width: int) -> list[int]:
    """Bucket start lines (1-aligned) overlapped by the line interval."""
    first = ((start - 1) // width) * width + 1
    return list(range(first, end + 1, width))


def count_theme_pairs(dataset: Dataset, base: str = DEFAULT_BASE) -> dict[str, int]:
    """Distinct (expression, theme) pairs per theme label, whole dataset."""
    view = DatasetView(dataset, base)
    pairs = set()
    for quad in dataset.match(None, ECRM_P67, None):
        tail = view.tail(quad.subject)
        if not (tail.startswith("item/") and tail.endswith("-expression")):
            continue
        if isinstance(quad.object, Iri) and view.tail(quad.object).startswith("categ/"):
            pairs.add((quad.subject, quad.object))
    counts: dict[str, int] = {}
    for _, theme in pairs:
        label = view.label(theme)
        counts[label] = counts.get(label, 0) + 1
    return counts


def _ranked(counts: dict[str, int], key_name: str) -> list[dict]:
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [{key_name: name, "count": count} for name, count in ordered]


def export_storytelling(
    dataset: Dataset,
    work_slug: str,
    base: str = DEFAULT_BASE,
    bucket_width: int = DEFAULT_BUCKET_WIDTH,
) -> dict:
    """The dashboard bundle for one focus work: restricted to objects
    whose theme the work also refers to."""
    view = DatasetView(dataset, base)
    work = view.node("work", work_slug)
    if not list(dataset.match(work, None, None, view.factual)):
        raise UnknownWork(f"no such work in the dataset: {work_slug!r}")

    work_themes = {q.object for q in dataset.match(work, ECRM_P67, None)
                   if isinstance(q.object, Iri)}
    selected: list[tuple[str, list[Iri]]] = []
    for item_id in view.item_ids():
        themes = [t for t in view.item_themes(item_id) if t in work_themes]
        if themes:
            selected.append((item_id, themes))

    timeline = []
    map_points = []
    omitted_timeline = []
    omitted_map = []
    theme_counts: dict[str, int] = {}
    keyword_counts: dict[str, int] = {}
    cells: dict[tuple, dict] = {}
    artist_edges = set()
    artist_nodes: dict[str, str] = {}

    for item_id, themes in selected:
        item = view.node("item", item_id)
        title = view.literal(item, DCT_TITLE)
        author = view.person_of(item_id)
        theme_labels = sorted(view.label(t) for t in themes)

        spans = view.timespans(item_id)
        if spans:
            narrowest = spans[-1]
            timeline.append({
                "item_id": item_id,
                "title": title,
                "begin": narrowest["begin"],
                "end": narrowest["end"],
                "image": view.literal(item, SCHEMA_IMAGE),
                "author": view.label(author) if author is not None else None,
            })
        else:
            omitted_timeline.append(item_id)

        colloc = view.collocation(item_id)
        if colloc["coordinates"]:
            map_points.append({
                "item_id": item_id,
                "lat": colloc["coordinates"][0],
                "lon": colloc["coordinates"][1],
                "institution": colloc["institution"],
                "title": title,
            })
        else:
            omitted_map.append(item_id)

        for label in theme_labels:
            theme_counts[label] = theme_counts.get(label, 0) + 1
        for keyword in view.literals(item, DCT_SUBJECT):
            keyword_counts[keyword] = keyword_counts.get(keyword, 0) + 1

        cits, _ = view.cited_subjects(item_id)
        for cit in cits:
            cit_url = view.literal(cit, RDFS_SEEALSO)
            if not cit_url.startswith(PERSEUS_CITATION_PREFIX):
                continue
            urn_parts = cit_url[len(PERSEUS_CITATION_PREFIX):].split(":")
            # a work-level URN has four fields; the fifth is the passage
            if len(urn_parts) != 5:
                continue
            parsed = parse_passage(urn_parts[4])
            if parsed is None:
                continue
            book, start, end = parsed
            for bucket in bucket_range(start, end, bucket_width):
                key = (book is None, book or 0, bucket)
                cell = cells.setdefault(
                    key,
                    {"book": book, "bucket_start": bucket,
                     "bucket_end": bucket + bucket_width - 1,
                     "count": 0, "themes": set()},
                )
                cell["count"] += 1
                cell["themes"].update(theme_labels)

        if author is not None:
            author_id = view.tail(author)
            artist_nodes[author_id] = view.label(author)
            for theme in themes:
                artist_edges.add((author_id, view.tail(theme)))

    heatmap = []
    for key in sorted(cells):
        cell = cells[key]
        heatmap.append({**cell, "themes": sorted(cell["themes"])})

    work_nodes: dict[str, str] = {view.tail(work): view.label(work)}
    theme_nodes: dict[str, str] = {}
    work_edges = set()
    for theme in sorted(work_themes):
        theme_id = view.tail(theme)
        theme_nodes[theme_id] = view.label(theme)
        for quad in dataset.match(None, ECRM_P67, theme):
            tail = view.tail(quad.subject)
            if tail.startswith("work/"):
                work_nodes[tail] = view.label(quad.subject)
                work_edges.add((tail, theme_id))

    def network(node_kinds: list[tuple[dict, str]], edges: set) -> dict:
        nodes = []
        for mapping, kind in node_kinds:
            for node_id in sorted(mapping):
                nodes.append({"id": node_id, "label": mapping[node_id], "kind": kind})
        return {
            "nodes": nodes,
            "edges": [{"source": a, "target": b} for a, b in sorted(edges)],
        }

    artist_theme_nodes = {theme_id: theme_nodes[theme_id] for _, theme_id in artist_edges}

    timeline.sort(key=lambda entry: (date_key(entry["begin"]), _id_key(entry["item_id"])))
    return {
        "work": {"slug": work_slug, "label": view.label(work)},
        "timeline": timeline,
        "map_points": map_points,
        "themes": _ranked(theme_counts, "theme"),
        "keywords": _ranked(keyword_counts, "keyword"),
        "top10_themes": _ranked(theme_counts, "theme")[:10],
        "top10_keywords": _ranked(keyword_counts, "keyword")[:10],
        "heatmap": heatmap,
        "work_network": network([(work_nodes, "work"), (theme_nodes, "theme")], work_edges),
        "artist_network": network(
            [(artist_nodes, "artist"), (artist_theme_nodes, "theme")], artist_edges
        ),
        "omissions": {"timeline": omitted_timeline, "map": omitted_map},
    }


# ---------------------------------------------------------------- writers


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def write_bundles(
    dataset: Dataset,
    out_dir: str,
    work_slug: str,
    base: str = DEFAULT_BASE,
    bucket_width: int = DEFAULT_BUCKET_WIDTH,
) -> list[str]:
    """catalog.json + facets.json + storytelling-<slug>.json; returns paths."""
    cards, facet_index = export_catalog(dataset, base)
    bundle = export_storytelling(dataset, work_slug, base, bucket_width)
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, payload in (
        ("catalog.json", {"schema": SCHEMA_VERSION, "cards": cards}),
        ("facets.json", {"schema": SCHEMA_VERSION, **facet_index}),
        (f"storytelling-{work_slug}.json", {"schema": SCHEMA_VERSION, **bundle}),
    ):
        path = os.path.join(out_dir, name)
        _write_json(path, payload)
        paths.append(path)
    return paths
