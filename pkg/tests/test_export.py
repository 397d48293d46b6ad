import json
from pathlib import Path

import pytest

from circlepoc.bench import BenchReport, BenchRow
from circlepoc.circle import PocMethod
from circlepoc.export import (
    BenchCSVExporter,
    ScenarioCSVExporter,
    ScenarioJSONExporter,
    read_scenario_csv,
)
from circlepoc.export.csv import SCENARIO_COLUMNS, format_number
from circlepoc.scenario import TimeSeriesRow

HEADER = "t,ego_x,ego_y,ego_heading,obj_x,obj_y,distance,sigma1,sigma2,poc_lower,poc_upper,delta,poc_mcs_rect"


def test_number_format() -> None:
    assert format_number(0.1) == "0.1"
    assert format_number(1.0 / 3.0) == "0.333333333"
    assert format_number(2.5e-12) == "2.5e-12"
    assert format_number(0.0) == "0"


def test_scenario_csv(tmp_path: Path, scenario_rows: list[TimeSeriesRow]) -> None:
    target = ScenarioCSVExporter("Scenario A", scenario_rows).export(tmp_path)
    assert target == tmp_path / "scenario-a.csv"
    raw = target.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == HEADER
    assert len(lines) == len(scenario_rows) + 1
    assert lines[1].split(",")[:4] == ["0", "0", "4", "0"]
    assert lines[2].split(",")[-1] == "0.011"


def test_scenario_csv_reads_back(tmp_path: Path, scenario_rows: list[TimeSeriesRow]) -> None:
    target = ScenarioCSVExporter("roundtrip", scenario_rows).export(tmp_path / "out")
    loaded = read_scenario_csv(target)
    assert len(loaded) == len(scenario_rows)
    for row, other in zip(scenario_rows, loaded, strict=True):
        assert other.t == pytest.approx(row.t, rel=1e-8)
        assert other.sigma1 == pytest.approx(row.sigma1, rel=1e-8)
        assert other.poc_upper == pytest.approx(row.poc_upper, rel=1e-8)
        assert other.ego_pose.position.x == pytest.approx(row.ego_pose.position.x, rel=1e-8)
        assert other.ego_pose.position.y == pytest.approx(row.ego_pose.position.y, rel=1e-8)
        assert other.object_position.y == pytest.approx(row.object_position.y, rel=1e-8)
        assert other.mcs_samples == 0


def test_read_rejects_foreign_header(tmp_path: Path) -> None:
    path = tmp_path / "foreign.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="scenario header"):
        read_scenario_csv(path)


def test_explicit_file_path(tmp_path: Path, scenario_rows: list[TimeSeriesRow]) -> None:
    path = tmp_path / "nested" / "trace.txt"
    assert ScenarioCSVExporter("ignored", scenario_rows).export(path) == path
    assert path.read_text(encoding="utf-8").startswith(HEADER + "\n")


def test_scenario_json(tmp_path: Path, scenario_rows: list[TimeSeriesRow]) -> None:
    target = ScenarioJSONExporter("scenario-b", scenario_rows).export(tmp_path)
    assert target.name == "scenario-b.json"
    document = json.loads(target.read_text(encoding="utf-8"))
    assert document["name"] == "scenario-b"
    assert document["columns"] == list(SCENARIO_COLUMNS)
    assert len(document["rows"]) == len(scenario_rows)
    assert document["rows"][3]["poc_lower"] == pytest.approx(0.03)
    assert document["summary"]["max_upper_time"] == pytest.approx(0.4)
    assert document["summary"]["corridor_violations"] == 0


def test_bench_csv(tmp_path: Path) -> None:
    report = BenchReport(
        (
            BenchRow(PocMethod.LOCAL_SINGLE, 0.125, 100, 0.25),
            BenchRow(PocMethod.MCS, 12.5, 100, 0.2503, 0.004),
        ),
        warmup=0,
    )
    target = BenchCSVExporter(report).export(tmp_path)
    assert target == tmp_path / "bench.csv"
    assert target.read_text(encoding="utf-8") == (
        "method,mean_ms,repetitions,value\nlocal_single,0.125,100,0.25\nmcs,12.5,100,0.2503\n"
    )


def test_name_must_slugify() -> None:
    with pytest.raises(ValueError, match="file name"):
        ScenarioCSVExporter("???", [])
