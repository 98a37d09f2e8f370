#!/usr/bin/env python3
"""Interrogate the built dataset with the restricted query engine.

Builds the sample dataset in memory, runs the bundled competency
question suite, then evaluates a few ad-hoc queries, including one the
engine refuses so the error surface is visible too.
"""

import json
from importlib import resources
from pathlib import Path

from mythforge.citations import WorkRegistry, load_overrides
from mythforge.config import load_config
from mythforge.errors import QueryParseError
from mythforge.graph import GraphBuilder, check_dataset, default_prefix_map
from mythforge.ingest import ColumnMapping, parse_table
from mythforge.pipeline import curate
from mythforge.query import (
    evaluate,
    load_cq_suite,
    parse_query,
    render_cq_report,
    run_cq_suite,
)
from mythforge.reconcile import AliasTable, AuthorityStore, Reconciler

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"

WORKS_BY_TYPE = """
PREFIX myth: <https://purl.org/vpq/mythlod/data/>
PREFIX efrbroo: <http://erlangen-crm.org/efrbroo/>
PREFIX ecrm: <http://erlangen-crm.org/current/>
SELECT DISTINCT ?work ?type WHERE {
  GRAPH myth:factual_data {
    ?work a efrbroo:F1_Work ;
          ecrm:P2_has_type ?type .
  }
}
"""

INTERPRETERS = """
PREFIX prov: <http://www.w3.org/ns/prov#>
SELECT DISTINCT ?who WHERE {
  GRAPH ?g {
    ?act a prov:InterpretationAct ;
         prov:wasAttributedTo ?who .
  }
}
"""

# OPTIONAL is outside the supported subset on purpose
REJECTED = """
SELECT ?s WHERE {
  GRAPH ?g { ?s ?p ?o . }
  OPTIONAL { ?s ?q ?v . }
}
"""


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


def show(title: str, query_text: str, dataset) -> None:
    print(f"\n{title}")
    table = evaluate(parse_query(query_text), dataset)
    print("  " + "\t".join(f"?{name}" for name in table.columns))
    for row in table.rows:
        print("  " + "\t".join(term.value if hasattr(term, "value") else str(term) for term in row))


def main() -> None:
    config, dataset = build_dataset()
    problems = check_dataset(dataset, config.base_iri)
    print(f"dataset: {len(dataset)} quads, integrity problems: {problems or 'none'}")

    cases = load_cq_suite(FIXTURES / "cq_suite.json")
    results = run_cq_suite(cases, dataset, extra_prefixes=default_prefix_map(config.base_iri))
    print("\ncompetency question suite:")
    print(render_cq_report(results))

    show("works in the dataset, with their source typology:", WORKS_BY_TYPE, dataset)
    show("people credited with an interpretation:", INTERPRETERS, dataset)

    print("\na query outside the supported subset:")
    try:
        parse_query(REJECTED)
    except QueryParseError as exc:
        print(f"  rejected as expected: {exc}")


if __name__ == "__main__":
    main()
