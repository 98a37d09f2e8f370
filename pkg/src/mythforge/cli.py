"""Command-line front-end: build, validate, query, export.

Exit codes are a stable contract: 0 success, 1 usage or configuration
problems, 2 build integrity failure, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from typing import Optional

from .citations import WorkRegistry, load_overrides
from .config import PipelineConfig, load_config
from .errors import (
    ConfigError,
    IntegrityError,
    MythforgeError,
    ParseError,
    PrefixError,
    QueryParseError,
    RowError,
    SchemaError,
    UnknownWork,
)
from .export import write_bundles
from .graph import DEFAULT_BASE, GraphBuilder, check_dataset, default_prefix_map
from .ingest import ColumnMapping, parse_table
from .query import (
    cq_report_json,
    evaluate,
    load_cq_suite,
    parse_query,
    render_cq_report,
    run_cq_suite,
)
from .reconcile import (
    AliasTable,
    AuthorityStore,
    ReconciliationClient,
    Reconciler,
    ViafClient,
    write_review_csv,
)
from .pipeline import curate
from .rdf import Dataset, Iri, Literal
from .serialize import parse_nquads, serialize_nquads, serialize_trig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTEGRITY = 2
EXIT_VALIDATION = 3

DEFAULT_WORK_SLUG = "virgil-aeneis"


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _load_registry(config: Optional[PipelineConfig]) -> WorkRegistry:
    if config is not None and config.work_registry:
        return WorkRegistry.from_json(config.work_registry)
    packaged = resources.files("mythforge").joinpath("data/work_registry.json")
    return WorkRegistry.from_data(json.loads(packaged.read_text(encoding="utf-8")))


def _build_reconciler(config: PipelineConfig) -> Reconciler:
    store = AuthorityStore.from_json(config.authority) if config.authority else AuthorityStore()
    aliases = AliasTable.from_json(config.aliases) if config.aliases else AliasTable()
    clients = []
    if config.mode == "online":
        if config.endpoints.recon_url:
            clients.append(
                ReconciliationClient(config.endpoints.recon_url, config.endpoints.timeout)
            )
        if config.endpoints.viaf_url:
            clients.append(ViafClient(config.endpoints.viaf_url, config.endpoints.timeout))
    return Reconciler(
        store,
        aliases,
        mode=config.mode,
        clients=tuple(clients),
        accept_score=config.accept_score,
    )


def _read_dataset(path: str, base: str) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return parse_nquads(fh.read(), default_prefix_map(base))


def cmd_build(config: PipelineConfig, input_csv: str, out_dir: str) -> int:
    mapping = ColumnMapping.from_json(config.column_mapping)
    raw_records = parse_table(input_csv, mapping)
    registry = _load_registry(config)
    overrides = (
        load_overrides(config.reference_overrides) if config.reference_overrides else {}
    )
    curation = curate(
        raw_records,
        registry,
        _build_reconciler(config),
        name_order=config.name_order,
        overrides=overrides,
    )
    builder = GraphBuilder(
        base=config.base_iri,
        build_time=config.build_time,
        publisher_iri=config.publisher_iri,
        publisher_label=config.publisher_label,
        skip_empty_literals=config.skip_empty_literals,
        interpretation_act_namespace=config.interpretation_act_namespace,
    )
    dataset = builder.build(curation.records)
    problems = check_dataset(dataset, config.base_iri)

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "dataset.trig"), "w", encoding="utf-8") as fh:
        fh.write(serialize_trig(dataset))
    with open(os.path.join(out_dir, "dataset.nq"), "w", encoding="utf-8") as fh:
        fh.write(serialize_nquads(dataset))
    nanopubs = sum(1 for r in curation.records if r.interpretation is not None)
    report = {
        "schema": 1,
        "records": len(curation.records),
        "quads": len(dataset),
        "nanopubs": nanopubs,
        "errors": curation.error_counts(),
        "error_detail": [
            {"item_id": e.item_id, "field": e.field, "kind": e.kind, "message": e.message}
            for e in curation.errors
        ],
        "review_rows": len(curation.review),
        "integrity_problems": problems,
    }
    with open(os.path.join(out_dir, "build-report.json"), "w", encoding="utf-8") as fh:
        json.dump(report, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    if curation.review:
        write_review_csv(curation.review, os.path.join(out_dir, "review.csv"))

    print(f"{len(curation.records)} records, {len(dataset)} quads, {nanopubs} nanopublications")
    if curation.errors:
        print(f"{len(curation.errors)} field error(s) logged in build-report.json")
    if problems:
        for problem in problems:
            print(f"integrity: {problem}", file=sys.stderr)
        return EXIT_INTEGRITY
    return EXIT_OK


def cmd_validate(
    config: Optional[PipelineConfig],
    dataset_path: str,
    suite_path: Optional[str],
    report_path: str,
) -> int:
    base = config.base_iri if config is not None else DEFAULT_BASE
    dataset = _read_dataset(dataset_path, base)
    problems = check_dataset(dataset, base)
    results = []
    if suite_path:
        cases = load_cq_suite(suite_path)
        results = run_cq_suite(cases, dataset, extra_prefixes=default_prefix_map(base))

    report = {
        "schema": 1,
        "integrity": {"ok": not problems, "problems": problems},
        "cq": cq_report_json(results),
    }
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, ensure_ascii=False, indent=2)
        fh.write("\n")

    for problem in problems:
        print(f"integrity: {problem}")
    if results:
        print(render_cq_report(results))
    failed = problems or any(r.status != "PASS" for r in results)
    if failed:
        return EXIT_VALIDATION
    print("dataset valid")
    return EXIT_OK


def _tsv_cell(term) -> str:
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, Literal):
        return str(term)
    return str(term)


def cmd_query(config: Optional[PipelineConfig], dataset_path: str, query_path: str) -> int:
    base = config.base_iri if config is not None else DEFAULT_BASE
    dataset = _read_dataset(dataset_path, base)
    with open(query_path, encoding="utf-8") as fh:
        query = parse_query(fh.read())
    table = evaluate(query, dataset)
    print("\t".join(f"?{name}" for name in table.columns))
    for row in table.rows:
        print("\t".join(_tsv_cell(term) for term in row))
    return EXIT_OK


def cmd_export(
    config: Optional[PipelineConfig], dataset_path: str, out_dir: str, work_slug: str
) -> int:
    base = config.base_iri if config is not None else DEFAULT_BASE
    width = config.heatmap_bucket_width if config is not None else 50
    dataset = _read_dataset(dataset_path, base)
    paths = write_bundles(dataset, out_dir, work_slug, base=base, bucket_width=width)
    for path in paths:
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mythforge",
        description="Tabular collection to nanopublication knowledge graph, "
                    "with validation and catalog/storytelling exports.",
    )
    parser.add_argument(
        "--config",
        default=os.environ.get("MYTHFORGE_CONFIG"),
        help="pipeline config JSON (falls back to $MYTHFORGE_CONFIG)",
    )
    parser.add_argument(
        "--mode",
        choices=("offline", "online"),
        default=None,
        help="override the reconciliation mode from the config",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="run the full conversion pipeline")
    p_build.add_argument("input_csv")
    p_build.add_argument("out_dir")

    p_validate = sub.add_parser("validate", help="integrity checks plus a CQ suite")
    p_validate.add_argument("dataset_nq")
    p_validate.add_argument("cq_suite", nargs="?", default=None)
    p_validate.add_argument("--report", default="validation-report.json")

    p_query = sub.add_parser("query", help="evaluate one query, print TSV")
    p_query.add_argument("dataset_nq")
    p_query.add_argument("query_file")

    p_export = sub.add_parser("export", help="write the catalog and storytelling bundles")
    p_export.add_argument("dataset_nq")
    p_export.add_argument("out_dir")
    p_export.add_argument("--work", default=DEFAULT_WORK_SLUG)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    config: Optional[PipelineConfig] = None
    try:
        if args.config:
            config = load_config(args.config, mode_override=args.mode)
    except ConfigError as exc:
        return _fail(str(exc))

    try:
        if args.command == "build":
            if config is None:
                return _fail("build requires --config (or $MYTHFORGE_CONFIG)")
            return cmd_build(config, args.input_csv, args.out_dir)
        if args.command == "validate":
            return cmd_validate(config, args.dataset_nq, args.cq_suite, args.report)
        if args.command == "query":
            return cmd_query(config, args.dataset_nq, args.query_file)
        if args.command == "export":
            return cmd_export(config, args.dataset_nq, args.out_dir, args.work)
    except FileNotFoundError as exc:
        return _fail(f"file does not exist: {exc.filename}")
    except (ConfigError, SchemaError, RowError, ParseError, QueryParseError,
            PrefixError, UnknownWork) as exc:
        return _fail(str(exc))
    except IntegrityError as exc:
        for offender in exc.offenders:
            print(f"integrity: {offender}", file=sys.stderr)
        return EXIT_INTEGRITY
    except MythforgeError as exc:
        return _fail(str(exc))
    return _fail(f"unknown command: {args.command}")


if __name__ == "__main__":
    sys.exit(main())
