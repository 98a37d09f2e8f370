import json
import os

import pytest

from mythforge.citations import WorkRegistry, load_overrides
from mythforge.config import load_config
from mythforge.graph import GraphBuilder
from mythforge.ingest import ColumnMapping, parse_table
from mythforge.pipeline import curate
from mythforge.reconcile import AliasTable, AuthorityStore, Reconciler

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def config():
    return load_config(fixture_path("config.json"))


@pytest.fixture(scope="session")
def registry():
    import importlib.resources as resources

    with resources.files("mythforge").joinpath("data/work_registry.json").open(
        encoding="utf-8"
    ) as fh:
        return WorkRegistry.from_data(json.load(fh))


@pytest.fixture(scope="session")
def reconciler(config):
    return Reconciler(
        store=AuthorityStore.from_json(config.authority),
        aliases=AliasTable.from_json(config.aliases),
        mode="offline",
        accept_score=config.accept_score,
    )


@pytest.fixture(scope="session")
def raw_records(config):
    mapping = ColumnMapping.from_json(config.column_mapping)
    return parse_table(fixture_path("collection.csv"), mapping)


@pytest.fixture(scope="session")
def overrides(config):
    return load_overrides(config.reference_overrides)


@pytest.fixture(scope="session")
def curated(raw_records, registry, reconciler, config, overrides):
    return curate(raw_records, registry, reconciler, config.name_order, overrides)


@pytest.fixture(scope="session")
def builder(config):
    return GraphBuilder(
        base=config.base_iri,
        build_time=config.build_time,
        publisher_iri=config.publisher_iri,
        publisher_label=config.publisher_label,
        skip_empty_literals=config.skip_empty_literals,
        interpretation_act_namespace=config.interpretation_act_namespace,
    )


@pytest.fixture(scope="session")
def dataset(curated, builder):
    return builder.build(curated.records)
