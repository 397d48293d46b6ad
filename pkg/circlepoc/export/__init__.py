from .base import Exporter
from .csv import BenchCSVExporter, ScenarioCSVExporter, read_scenario_csv
from .json import ScenarioJSONExporter

__all__ = [
    "BenchCSVExporter",
    "Exporter",
    "ScenarioCSVExporter",
    "ScenarioJSONExporter",
    "read_scenario_csv",
]
