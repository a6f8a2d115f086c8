"""Reader for qsdlab sweep CSVs.

The file format is `# config: key=value ...` on the first line, a header
row, then data rows with floats in scientific notation.  The reader never
computes physics; it only parses, validates the schema against the panel's
documented columns, and hands numpy arrays to the panel code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SweepTable", "SchemaError", "read_table", "require_columns"]


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class SweepTable:
    config: dict[str, str]
    columns: tuple[str, ...]
    rows: list[tuple]
    path: str

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise SchemaError(
                f"{self.path}: missing column {name!r}; found {', '.join(self.columns)}"
            )
        k = self.columns.index(name)
        return np.array([row[k] for row in self.rows])

    @property
    def experiment(self) -> str:
        return self.config.get("experiment", "")

    def ok_mask(self) -> np.ndarray:
        if "status" not in self.columns:
            return np.ones(len(self.rows), dtype=bool)
        k = self.columns.index("status")
        return np.array([row[k] == "ok" for row in self.rows])


def _cell(text: str):
    try:
        return float(text)
    except ValueError:
        return text


def read_table(path: str) -> SweepTable:
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    lines = [line for line in lines if line]
    if not lines:
        raise SchemaError(f"{path}: empty file")
    config: dict[str, str] = {}
    if lines[0].startswith("# config:"):
        for item in lines[0][len("# config:") :].split():
            key, _, value = item.partition("=")
            config[key] = value
        lines = lines[1:]
    if not lines:
        raise SchemaError(f"{path}: header row missing")
    columns = tuple(lines[0].split(","))
    rows = []
    for lineno, line in enumerate(lines[1:], 3):
        cells = line.split(",")
        if len(cells) != len(columns):
            raise SchemaError(
                f"{path}:{lineno}: {len(cells)} cells, expected {len(columns)}"
            )
        rows.append(tuple(_cell(c) for c in cells))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return SweepTable(config=config, columns=columns, rows=rows, path=path)


def require_columns(table: SweepTable, names) -> None:
    missing = [n for n in names if n not in table.columns]
    if missing:
        raise SchemaError(
            f"{table.path}: missing column(s) {', '.join(missing)}; "
            f"found {', '.join(table.columns)}"
        )
