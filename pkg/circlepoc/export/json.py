import json
from typing import TextIO

from circlepoc.scenario import TimeSeriesRow, summarize

from .base import Exporter
from .csv import SCENARIO_COLUMNS, format_number, scenario_record


class ScenarioJSONExporter(Exporter):
    """Scenario rows with the same columns and precision as the CSV, plus the summary"""

    suffix = ".json"

    def __init__(self, name: str, rows: list[TimeSeriesRow]) -> None:
        super().__init__(name)
        self.name = name
        self.rows = rows

    def write(self, file: TextIO) -> None:
        summary = summarize(self.rows)
        document = {
            "name": self.name,
            "summary": {
                "max_upper": float(format_number(summary.max_upper)),
                "max_upper_time": float(format_number(summary.max_upper_time)),
                "max_upper_distance": float(format_number(summary.max_upper_distance)),
                "max_delta": float(format_number(summary.max_delta)),
                "corridor_violations": summary.corridor_violations,
            },
            "rows": [
                {column: float(format_number(value)) for column, value in scenario_record(row).items()}
                for row in self.rows
            ],
            "columns": list(SCENARIO_COLUMNS),
        }
        json.dump(document, file, indent=2)
        file.write("\n")
