"""Table reading: mapping, splitting, ids, round trip."""

import dataclasses
import json

import pytest

from conftest import fixture_path
from mythforge.errors import ConfigError, RowError, SchemaError
from mythforge.ingest import ColumnMapping, assign_item_id, parse_table, write_table


@pytest.fixture(scope="module")
def mapping(config):
    return ColumnMapping.from_json(config.column_mapping)


def _by_id(records):
    return {r.item_id: r for r in records}


def test_one_record_per_row(raw_records):
    assert len(raw_records) == 7


def test_values_kept_verbatim(raw_records):
    rec = _by_id(raw_records)["284"]
    assert rec.typology_raw == 'a:1:{i:0;s:17:"Pittura vascolare";}'
    assert rec.theme_raw == "medea-figlicida:Medea figlicida"
    assert rec.location_raw == "Metropolitan Museum of Art, New York"
    assert rec.interpretation_date_raw == "03/05/2019 07:57"


def test_list_cells_split_on_delimiter(raw_records):
    rec = _by_id(raw_records)["302"]
    assert rec.other_sources_raw == (
        ("RiscritturaLetteraria", "G. Leopardi, Canti"),
        ("RiscritturaLetteraria", "Henry Purcell, Dido and Aeneas"),
        ("FonteMedievaleOModerna", "Francesco Petrarca, Trionfi"),
    )


def test_missing_id_left_unset(raw_records):
    blanks = [r for r in raw_records if not r.item_id]
    assert len(blanks) == 1
    assert blanks[0].title == "Ratto di Proserpina"


def test_header_only_file_yields_no_records(tmp_path, mapping):
    src = tmp_path / "empty.csv"
    with open(fixture_path("collection.csv"), encoding="utf-8") as fh:
        src.write_text(fh.readline(), encoding="utf-8")
    assert parse_table(src, mapping) == []


def test_ragged_row_is_rejected_with_row_number(tmp_path, mapping):
    src = tmp_path / "ragged.csv"
    with open(fixture_path("collection.csv"), encoding="utf-8") as fh:
        header = fh.readline()
    src.write_text(header + "a,b,c\n", encoding="utf-8")
    with pytest.raises(RowError) as err:
        parse_table(src, mapping)
    assert "1" in str(err.value)


def test_missing_mapped_column(tmp_path, mapping):
    src = tmp_path / "short.csv"
    src.write_text("ID,Titolo\n1,x\n", encoding="utf-8")
    with pytest.raises(SchemaError):
        parse_table(src, mapping)


def test_mapping_requires_every_field(tmp_path):
    with open(fixture_path("column_mapping.json"), encoding="utf-8") as fh:
        data = json.load(fh)
    del data["fields"]["title"]
    bad = tmp_path / "mapping.json"
    bad.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(ConfigError):
        ColumnMapping.from_json(bad)


def test_assign_id_prefers_source_id(raw_records):
    rec = _by_id(raw_records)["284"]
    assert assign_item_id(rec, 7) == "284"
    assert assign_item_id(dataclasses.replace(rec, item_id="449"), 1) == "449"


def test_assign_id_falls_back_to_row_index(raw_records):
    rec = next(r for r in raw_records if not r.item_id)
    assert assign_item_id(rec, 7) == "7"


def test_write_then_parse_round_trip(tmp_path, raw_records, mapping):
    out = tmp_path / "copy.csv"
    write_table(raw_records, mapping, out)
    again = parse_table(out, mapping)
    assert again == raw_records
