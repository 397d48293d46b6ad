import csv
from pathlib import Path
from typing import TextIO

from circlepoc.bench import BenchReport
from circlepoc.geometry import Pose, Vec2
from circlepoc.scenario import TimeSeriesRow

from .base import Exporter

__all__ = [
    "SCENARIO_COLUMNS",
    "BenchCSVExporter",
    "ScenarioCSVExporter",
    "format_number",
    "read_scenario_csv",
    "scenario_record",
]

SCENARIO_COLUMNS = (
    "t",
    "ego_x",
    "ego_y",
    "ego_heading",
    "obj_x",
    "obj_y",
    "distance",
    "sigma1",
    "sigma2",
    "poc_lower",
    "poc_upper",
    "delta",
    "poc_mcs_rect",
)


def format_number(value: float) -> str:
    return f"{value:.9g}"


def scenario_record(row: TimeSeriesRow) -> dict[str, float]:
    return {
        "t": row.t,
        "ego_x": row.ego_pose.position.x,
        "ego_y": row.ego_pose.position.y,
        "ego_heading": row.ego_pose.heading,
        "obj_x": row.object_position.x,
        "obj_y": row.object_position.y,
        "distance": row.distance,
        "sigma1": row.sigma1,
        "sigma2": row.sigma2,
        "poc_lower": row.poc_lower,
        "poc_upper": row.poc_upper,
        "delta": row.delta,
        "poc_mcs_rect": row.poc_mcs_rect,
    }


class ScenarioCSVExporter(Exporter):
    suffix = ".csv"

    def __init__(self, name: str, rows: list[TimeSeriesRow]) -> None:
        super().__init__(name)
        self.rows = rows

    def write(self, file: TextIO) -> None:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(SCENARIO_COLUMNS)
        for row in self.rows:
            record = scenario_record(row)
            writer.writerow(format_number(record[column]) for column in SCENARIO_COLUMNS)


class BenchCSVExporter(Exporter):
    suffix = ".csv"

    def __init__(self, report: BenchReport, name: str = "bench") -> None:
        super().__init__(name)
        self.report = report

    def write(self, file: TextIO) -> None:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(("method", "mean_ms", "repetitions", "value"))
        for row in self.report.rows:
            writer.writerow((row.method.value, format_number(row.mean_ms), row.repetitions, format_number(row.value)))


def read_scenario_csv(path: Path | str) -> list[TimeSeriesRow]:
    """Parse a file written by `ScenarioCSVExporter` back into rows"""
    with Path(path).open(encoding="utf-8", newline="") as file:
        reader = csv.DictReader(file)
        if tuple(reader.fieldnames or ()) != SCENARIO_COLUMNS:
            raise ValueError(f"{path} does not have the scenario header {','.join(SCENARIO_COLUMNS)}")
        rows = []
        for record in reader:
            values = {column: float(record[column]) for column in SCENARIO_COLUMNS}
            rows.append(
                TimeSeriesRow(
                    t=values["t"],
                    ego_pose=Pose(Vec2(values["ego_x"], values["ego_y"]), values["ego_heading"]),
                    object_position=Vec2(values["obj_x"], values["obj_y"]),
                    distance=values["distance"],
                    sigma1=values["sigma1"],
                    sigma2=values["sigma2"],
                    poc_lower=values["poc_lower"],
                    poc_upper=values["poc_upper"],
                    delta=values["delta"],
                    poc_mcs_rect=values["poc_mcs_rect"],
                )
            )
    return rows
