import json

import pytest
from pydantic import ValidationError

from biotac_sim.dataio import load_model, read_structured, write_json
from biotac_sim.schema import ExperimentConfig, WindowSpec


def test_json_and_yaml_agree(tmp_path):
    (tmp_path / "a.json").write_text(json.dumps({"combo": 4, "include_temperature": True}))
    (tmp_path / "a.yaml").write_text("combo: 4\ninclude_temperature: true\n")
    assert load_model(tmp_path / "a.json", WindowSpec) == load_model(tmp_path / "a.yaml", WindowSpec)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError, match="file not found"):
        read_structured(tmp_path / "none.json")


def test_unsupported_extension(tmp_path):
    path = tmp_path / "a.toml"
    path.write_text("combo = 1")
    with pytest.raises(ValueError):
        read_structured(path)


def test_top_level_must_be_mapping(tmp_path):
    path = tmp_path / "a.json"
    path.write_text("[1, 2]")
    with pytest.raises(ValueError):
        read_structured(path)


def test_unparseable_content(tmp_path):
    path = tmp_path / "a.json"
    path.write_text("{not json")
    with pytest.raises(ValueError):
        read_structured(path)


def test_schema_violation(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"combo": 12}))
    with pytest.raises(ValidationError):
        load_model(path, WindowSpec)


def test_write_json_is_sorted(tmp_path):
    path = write_json(tmp_path / "out" / "a.json", {"b": 1, "a": 2})
    assert path.read_text() == '{\n  "a": 2,\n  "b": 1\n}\n'


def test_experiment_paths_are_anchored(tmp_path):
    config = ExperimentConfig.model_validate(
        {"dataset": "data/ds.csv", "model": {"family": "gbt"}, "output_dir": "runs"}
    )
    resolved = config.resolve_paths(tmp_path)
    assert resolved.dataset == str(tmp_path / "data" / "ds.csv")
    assert resolved.output_dir == str(tmp_path / "runs")
    assert resolved.layout is None
