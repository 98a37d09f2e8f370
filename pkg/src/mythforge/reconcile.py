"""Entity reconciliation against authority files and (optионally) live APIs.

Offline mode reads a curated JSON fixture keyed by (kind, slug); online
mode merges candidates from a W3C Reconciliation endpoint and the VIAF
AutoSuggest API on top of it. Network failure degrades to offline with a
warning. Either way the result is a ranked list of AuthorityLink
candidates; links only ever change display labels, never slugs or IRIs.
"""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from decimal import Decimal
from typing import Optional

from .errors import ConfigError, EmptySlug
from .normalize import slugify

log = logging.getLogger(__name__)

SOURCES = ("VIAF", "Wikidata", "HuCitKB")
_SOURCE_RANK = {name: i for i, name in enumerate(SOURCES)}

ACCEPT_SCORE = 0.9

REVIEW_HEADER = (
    "kind",
    "raw",
    "candidate_source",
    "candidate_id",
    "candidate_label",
    "score",
    "accepted",
)


@dataclass(frozen=True)
class AuthorityLink:
    source: str
    external_id: str
    controlled_label: str
    coordinates: Optional[tuple[Decimal, Decimal]] = None
    score: float = 1.0
    # place enrichment carried by curated fixture entries
    city_label: Optional[str] = None
    country_label: Optional[str] = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ConfigError(f"unknown authority source: {self.source!r}")
        if not 0.0 <= self.score <= 1.0:
            raise ConfigError(f"score out of [0,1]: {self.score}")
        if self.coordinates is not None:
            lat, lon = self.coordinates
            if not (-90 <= lat <= 90 and -180 <= lon <= 180):
                raise ConfigError(f"coordinates out of range: {self.coordinates}")

    def url(self) -> Optional[str]:
        if self.source == "VIAF":
            return f"https://viaf.org/viaf/{self.external_id}"
        if self.source == "Wikidata":
            return f"http://www.wikidata.org/entity/{self.external_id}"
        return None


def rank_links(links: list[AuthorityLink]) -> list[AuthorityLink]:
    """Score desc; ties by source preference VIAF > Wikidata > HuCitKB,
    then lexicographic external id."""
    return sorted(
        links,
        key=lambda l: (-l.score, _SOURCE_RANK.get(l.source, 99), l.external_id),
    )


class AliasTable:
    """Normalized variant key -> canonical entity slug."""

    def __init__(self, mapping: Optional[dict[str, str]] = None):
        self._map = dict(mapping or {})

    @classmethod
    def from_json(cls, path) -> "AliasTable":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def get(self, key: str) -> Optional[str]:
        return self._map.get(key)

    def __len__(self) -> int:
        return len(self._map)


def resolve_alias(raw: str, table: AliasTable) -> Optional[str]:
    """Canonical slug for a raw variant, keyed by its slugified form."""
    try:
        key = slugify(raw)
    except EmptySlug:
        return None
    return table.get(key)


class AuthorityStore:
    """Offline authority fixture: (kind, slug) -> ranked links."""

    def __init__(self, entries: Optional[dict[tuple[str, str], list[AuthorityLink]]] = None):
        self._entries = {k: rank_links(v) for k, v in (entries or {}).items()}

    @classmethod
    def from_json(cls, path) -> "AuthorityStore":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh, parse_float=Decimal)
        entries: dict[tuple[str, str], list[AuthorityLink]] = {}
        for row in data:
            coords = None
            if row.get("coordinates") is not None:
                lat, lon = row["coordinates"]
                coords = (Decimal(str(lat)), Decimal(str(lon)))
            link = AuthorityLink(
                source=row["source"],
                external_id=str(row["external_id"]),
                controlled_label=row["controlled_label"],
                coordinates=coords,
                score=float(row.get("score", 1.0)),
                city_label=row.get("city_label"),
                country_label=row.get("country_label"),
            )
            entries.setdefault((row["kind"], row["key"]), []).append(link)
        return cls(entries)

    def lookup(self, kind: str, slug: str) -> list[AuthorityLink]:
        return list(self._entries.get((kind, slug), ()))


class ReconciliationClient:
    """Minimal W3C Reconciliation Service API client (batched POST)."""

    def __init__(self, endpoint: str, timeout: float = 10.0, session=None):
        self.endpoint = endpoint
        self.timeout = timeout
        if session is None:
            import requests

            session = requests.Session()
        self.session = session

    def suggest(self, label: str, kind: str) -> list[AuthorityLink]:
        import requests

        payload = {"queries": json.dumps({"q0": {"query": label, "type": kind}})}
        try:
            resp = self.session.post(self.endpoint, data=payload, timeout=self.timeout)
            resp.raise_for_status()
            body = resp.json()
        except (requests.RequestException, ValueError) as exc:
            log.warning("reconciliation endpoint failed (%s); offline results only", exc)
            return []
        links = []
        for cand in body.get("q0", {}).get("result", []):
            score = float(cand.get("score", 0.0))
            if score > 1.0:  # endpoints commonly score 0..100
                score = score / 100.0
            links.append(
                AuthorityLink(
                    source="Wikidata",
                    external_id=str(cand.get("id", "")),
                    controlled_label=cand.get("name", ""),
                    score=max(0.0, min(1.0, score)),
                )
            )
        return links


class ViafClient:
    """VIAF AutoSuggest client. AutoSuggest has no scores, so candidates
    get a deterministic rank-based score (exact label match scores 1.0)."""

    def __init__(self, endpoint: str, timeout: float = 10.0, session=None):
        self.endpoint = endpoint
        self.timeout = timeout
        if session is None:
            import requests

            session = requests.Session()
        self.session = session

    def suggest(self, label: str, kind: str) -> list[AuthorityLink]:
        import requests

        try:
            resp = self.session.get(
                self.endpoint, params={"query": label}, timeout=self.timeout
            )
            resp.raise_for_status()
            body = resp.json()
        except (requests.RequestException, ValueError) as exc:
            log.warning("VIAF endpoint failed (%s); offline results only", exc)
            return []
        links = []
        for i, cand in enumerate(body.get("result") or []):
            term = cand.get("term", "")
            score = 1.0 if term.lower() == label.lower() else round(max(0.1, 0.8 - 0.1 * i), 2)
            links.append(
                AuthorityLink(
                    source="VIAF",
                    external_id=str(cand.get("viafid", "")),
                    controlled_label=term,
                    score=score,
                )
            )
        return links


class Reconciler:
    """Lookup façade over the store, alias table and optional clients."""

    def __init__(
        self,
        store: AuthorityStore,
        aliases: Optional[AliasTable] = None,
        mode: str = "offline",
        clients: tuple = (),
        accept_score: float = ACCEPT_SCORE,
        max_concurrency: int = 4,
    ):
        if mode not in ("offline", "online"):
            raise ConfigError(f"unknown mode: {mode!r}")
        self.store = store
        self.aliases = aliases or AliasTable()
        self.mode = mode
        self.clients = tuple(clients)
        self.accept_score = accept_score
        self.max_concurrency = max(1, max_concurrency)

    def canonical_slug(self, raw: str, fallback_slug: str) -> str:
        return resolve_alias(raw, self.aliases) or fallback_slug

    def lookup_slug(self, kind: str, slug: str, label: str = "") -> list[AuthorityLink]:
        links = self.store.lookup(kind, slug)
        if self.mode == "online" and self.clients:
            merged = {(l.source, l.external_id): l for l in links}
            for client in self.clients:
                for cand in client.suggest(label or slug, kind):
                    key = (cand.source, cand.external_id)
                    if key not in merged or cand.score > merged[key].score:
                        merged[key] = cand
            links = list(merged.values())
        return rank_links(links)

    def reconcile_entity(self, kind: str, label: str) -> list[AuthorityLink]:
        """Candidates for a display label: alias-resolve, then look up."""
        try:
            slug = slugify(label)
        except EmptySlug:
            return []
        slug = self.aliases.get(slug) or slug
        return self.lookup_slug(kind, slug, label)

    def reconcile_batch(self, items: list[tuple[str, str, str]]) -> dict[tuple[str, str], list[AuthorityLink]]:
        """(kind, slug, label) triplets to ranked links, possibly concurrent."""
        if self.mode != "online" or len(items) <= 1:
            return {(k, s): self.lookup_slug(k, s, l) for k, s, l in items}
        with ThreadPoolExecutor(max_workers=self.max_concurrency) as pool:
            futures = {
                (kind, slug): pool.submit(self.lookup_slug, kind, slug, label)
                for kind, slug, label in items
            }
            return {key: fut.result() for key, fut in futures.items()}


def apply_links(entity, links: list[AuthorityLink]):
    """Accepted top link replaces the display label; slug and IRI never
    change. Place entities additionally pick up coordinates and
    city/country labels when they are still missing."""
    if not links:
        return entity
    ranked = rank_links(links)
    best = ranked[0]
    changes: dict = {"links": tuple(ranked)}
    if best.score >= ACCEPT_SCORE and best.controlled_label:
        changes["label"] = best.controlled_label
    # enrichment only from accepted links; rejected candidates stay inert
    accepted = [l for l in ranked if l.score >= ACCEPT_SCORE]
    fields = {f.name for f in entity.__dataclass_fields__.values()} if hasattr(entity, "__dataclass_fields__") else set()
    if "coordinates" in fields and getattr(entity, "coordinates", None) is None:
        for link in accepted:
            if link.coordinates is not None:
                changes["coordinates"] = link.coordinates
                break
    if "city_label" in fields and not getattr(entity, "city_label", None):
        for link in accepted:
            if link.city_label:
                changes["city_label"] = link.city_label
                break
    if "country_label" in fields and not getattr(entity, "country_label", None):
        for link in accepted:
            if link.country_label:
                changes["country_label"] = link.country_label
                break
    return replace(entity, **changes)


@dataclass(frozen=True)
class ReviewRow:
    kind: str
    raw: str
    candidate_source: str = ""
    candidate_id: str = ""
    candidate_label: str = ""
    score: str = ""
    accepted: str = ""


def review_rows(kind: str, raw: str, links: list[AuthorityLink], accept_score: float = ACCEPT_SCORE) -> list[ReviewRow]:
    """Rows for the human review file: all candidates below the auto-accept
    threshold, or a single empty-candidate row when there are none."""
    if not links:
        return [ReviewRow(kind=kind, raw=raw)]
    return [
        ReviewRow(
            kind=kind,
            raw=raw,
            candidate_source=l.source,
            candidate_id=l.external_id,
            candidate_label=l.controlled_label,
            score=f"{l.score:.2f}",
            accepted="",
        )
        for l in rank_links(links)
    ]


def write_review_csv(rows: list[ReviewRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REVIEW_HEADER)
        for row in rows:
            writer.writerow(
                [row.kind, row.raw, row.candidate_source, row.candidate_id,
                 row.candidate_label, row.score, row.accepted]
            )
