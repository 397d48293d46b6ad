from abc import ABC, abstractmethod
from pathlib import Path
from typing import TextIO

from slugify import slugify

from circlepoc.log import get_logger

logger = get_logger(__name__)


class Exporter(ABC):
    suffix: str

    def __init__(self, name: str) -> None:
        self.file_basename = slugify(name)
        if not self.file_basename:
            raise ValueError(f"Cannot derive a file name from {name!r}")

    def target(self, path: Path | str) -> Path:
        """Resolve the output file: a directory (existing, or without suffix) receives `<slug><suffix>`"""
        path = Path(path)
        if path.is_dir() or not path.suffix:
            return path / f"{self.file_basename}{self.suffix}"
        return path

    def export(self, path: Path | str) -> Path:
        target = self.target(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="\n") as file:
            self.write(file)
        logger.info("Wrote %s", target)
        return target

    @abstractmethod
    def write(self, file: TextIO) -> None:
        pass  # pragma: no cover
