#!/usr/bin/env python3
"""Export the catalog and storytelling bundles and walk through them.

Builds the sample dataset in memory, derives the faceted catalog and the
storytelling views for the Aeneid, prints the highlights and writes the
three JSON bundles into demos/out/bundles/.
"""

import json
from importlib import resources
from pathlib import Path

from mythforge.citations import WorkRegistry, load_overrides
from mythforge.config import load_config
from mythforge.export import export_catalog, export_storytelling, write_bundles
from mythforge.graph import GraphBuilder
from mythforge.ingest import ColumnMapping, parse_table
from mythforge.pipeline import curate
from mythforge.reconcile import AliasTable, AuthorityStore, Reconciler

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"
OUT = ROOT / "demos" / "out" / "bundles"


def build_dataset():
    config = load_config(FIXTURES / "config.json")
    mapping = ColumnMapping.from_json(config.column_mapping)
    raw_records = parse_table(FIXTURES / "collection.csv", mapping)
    reconciler = Reconciler(
        AuthorityStore.from_json(config.authority),
        AliasTable.from_json(config.aliases),
        mode="offline",
        accept_score=config.accept_score,
    )
    packaged = resources.files("mythforge").joinpath("data/work_registry.json")
    registry = WorkRegistry.from_data(json.loads(packaged.read_text(encoding="utf-8")))
    curation = curate(
        raw_records,
        registry,
        reconciler,
        name_order=config.name_order,
        overrides=load_overrides(config.reference_overrides),
    )
    builder = GraphBuilder(
        base=config.base_iri,
        build_time=config.build_time,
        publisher_iri=config.publisher_iri,
        publisher_label=config.publisher_label,
        interpretation_act_namespace=config.interpretation_act_namespace,
    )
    return config, builder.build(curation.records)


def main() -> None:
    config, dataset = build_dataset()

    cards, facets = export_catalog(dataset, base=config.base_iri)
    print(f"catalog: {len(cards)} cards")
    for card in cards:
        factual = card["factual"]
        author = factual["author"]["label"] if factual["author"] else "unknown"
        print(f"  {card['item_id']:>4}  {factual['title']}  ({author})")

    print("\nfacet index:")
    for level, names in facets["levels"].items():
        for facet in names:
            values = facets["facets"][facet]
            summary = ", ".join(f"{v['value_label']} ({v['count']})" for v in values[:4])
            more = f", +{len(values) - 4} more" if len(values) > 4 else ""
            print(f"  [{level}] {facet}: {summary}{more}")

    bundle = export_storytelling(
        dataset, "virgil-aeneis", base=config.base_iri,
        bucket_width=config.heatmap_bucket_width,
    )
    print(f"\nstorytelling for {bundle['work']['label']}:")
    print(f"  timeline: {len(bundle['timeline'])} artworks, "
          f"{bundle['timeline'][0]['begin']} to {bundle['timeline'][-1]['end']}")
    print(f"  map points: {len(bundle['map_points'])}")
    for point in bundle["map_points"]:
        print(f"    {point['institution']} ({point['lat']}, {point['lon']})")
    themes = ", ".join(f"{t['theme']} x{t['count']}" for t in bundle["top10_themes"])
    print(f"  top themes: {themes}")
    keywords = ", ".join(f"{k['keyword']} x{k['count']}" for k in bundle["top10_keywords"][:5])
    print(f"  top keywords: {keywords}")
    booked = [c for c in bundle["heatmap"] if c["book"] is not None]
    print(f"  heatmap: {len(bundle['heatmap'])} cells, {len(booked)} tied to a book")
    print(f"  co-citation network: {len(bundle['work_network']['nodes'])} nodes, "
          f"{len(bundle['work_network']['edges'])} edges")
    skipped = {section: ids for section, ids in bundle["omissions"].items() if ids}
    print(f"  omissions: {skipped or 'none'}")

    paths = write_bundles(
        dataset, OUT, "virgil-aeneis", base=config.base_iri,
        bucket_width=config.heatmap_bucket_width,
    )
    print()
    for path in paths:
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
