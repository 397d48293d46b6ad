import json
from pathlib import Path
from typing import Any

import pytest

from circlepoc.config import ConfigError, ScenarioConfigModel, dump_scenario_config, load_scenario_config
from circlepoc.gaussian import RandomSeed
from circlepoc.scenario import scenario_a, scenario_b


def _document() -> dict[str, Any]:
    return {
        "name": "crossing",
        "ego": {"pose": {"x": 0, "y": 4}, "speed": 1},
        "object": {"pose": {"x": 4, "y": 0, "heading": 1.5707963267948966}, "speed": 1},
        "ego_shape": {"length": 4.5, "width": 2},
        "object_radius": 2,
        "uncertainty": {"lambda": 6, "d0": 1, "sigma_max_1": 2, "sigma_max_2": 5},
        "horizon": 1,
        "mcs_samples": 1000,
    }


def _write(tmp_path: Path, document: dict[str, Any]) -> Path:
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(document, indent=2), encoding="utf-8")
    return path


@pytest.mark.parametrize("preset", [scenario_a, scenario_b])
def test_dump_and_load(tmp_path: Path, preset: Any) -> None:
    config = preset()
    path = dump_scenario_config(config, tmp_path / "config.json")
    assert load_scenario_config(path) == config
    raw = path.read_bytes()
    assert raw.endswith(b"}\n")
    assert b"\r\n" not in raw
    assert '"lambda": 6.0' in raw.decode("utf-8")


def test_defaults_are_filled_in(tmp_path: Path) -> None:
    config = load_scenario_config(_write(tmp_path, _document()))
    assert config.name == "crossing"
    assert config.dt == 0.1
    assert config.n_steps == 11
    assert config.mcs_seed == RandomSeed(0)
    assert config.uncertainty.steepness == 6.0
    assert config.uncertainty.midpoint_distance == 1.0
    assert config.ego.pose.heading == 0.0
    assert config.quadrature.max_subdivisions == 50


def test_field_names_are_accepted_next_to_aliases() -> None:
    uncertainty = {"steepness": 6, "midpoint_distance": 1, "sigma_max_1": 2, "sigma_max_2": 5}
    model = ScenarioConfigModel.model_validate({**_document(), "uncertainty": uncertainty})
    assert model.to_config().uncertainty == scenario_a().uncertainty


def test_missing_field(tmp_path: Path) -> None:
    document = _document()
    del document["uncertainty"]
    with pytest.raises(ConfigError, match="uncertainty"):
        load_scenario_config(_write(tmp_path, document))


def test_syntax_error_names_the_line(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text('{\n  "name": "crossing",\n  "ego": ,\n}\n', encoding="utf-8")
    with pytest.raises(ConfigError, match="line 3"):
        load_scenario_config(path)


def test_error_location_is_relative_to_the_working_directory(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    Path("broken.json").write_text("{\n  ,\n}\n", encoding="utf-8")
    with pytest.raises(ConfigError, match=r'File "\./broken\.json", line 2'):
        load_scenario_config(tmp_path / "broken.json")


def test_unreadable_file(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="cannot be read"):
        load_scenario_config(tmp_path / "missing.json")


@pytest.mark.parametrize(
    ("changes", "match"),
    [
        ({"colour": "red"}, "colour"),
        ({"horizon": 0.05}, "horizon"),
        ({"ego_shape": {"length": 2, "width": 2}}, "ego_shape"),
        ({"object_radius": -1}, "object_radius"),
        ({"mcs_seed": 2**64}, "mcs_seed"),
        ({"n_circles": 5, "n_axes": 2}, "divisible"),
        ({"uncertainty": {"lambda": 0, "d0": 1, "sigma_max_1": 2, "sigma_max_2": 5}}, "uncertainty.lambda"),
    ],
)
def test_invalid_documents(tmp_path: Path, changes: dict[str, Any], match: str) -> None:
    with pytest.raises(ConfigError, match=match):
        load_scenario_config(_write(tmp_path, {**_document(), **changes}))
