"""CSV ingestion and export with configurable missing-value tokens.

Cells are kept verbatim as strings; nothing is type-coerced. A cell whose
whitespace-trimmed form equals one of the configured null tokens becomes a
missing value (``None``). Exporting writes missing values as the first
configured token, so a load/export/load round trip is cell-identical.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .core import Relation, Row, Schema

__all__ = [
    "DatasetStats",
    "IngestConfig",
    "IngestError",
    "dataset_stats",
    "load_csv",
    "schema_from_header",
    "write_csv",
]


class IngestError(ValueError):
    """Malformed CSV input (empty file, ragged rows, bad config)."""


@dataclass(frozen=True)
class IngestConfig:
    delimiter: str = ","
    null_tokens: tuple[str, ...] = ("?", "", "NULL")
    has_header: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "null_tokens", tuple(self.null_tokens))
        if len(self.delimiter) != 1:
            raise IngestError("delimiter must be a single character")
        for tok in self.null_tokens:
            if self.delimiter in tok:
                raise IngestError(f"null token {tok!r} contains the delimiter")


@dataclass(frozen=True)
class DatasetStats:
    rows: int
    cols: int
    nulls: int


def schema_from_header(header: Iterable[str]) -> Schema:
    """Schema from CSV header cells: trimmed, blanks and duplicates get
    their column index appended."""
    names: list[str] = []
    seen: set[str] = set()
    for i, raw in enumerate(header):
        name = raw.strip() or str(i)
        if name in seen:
            name = f"{name}_{i}"
        seen.add(name)
        names.append(name)
    return Schema(tuple(names))


def load_csv(source: str | Path | io.TextIOBase, config: IngestConfig = IngestConfig()) -> Relation:
    """Load a CSV file into a :class:`Relation`.

    Row ids are assigned in file order starting at 0. Raises
    :class:`IngestError` on an empty file or on ragged rows.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            records = list(csv.reader(fh, delimiter=config.delimiter))
    else:
        records = list(csv.reader(source, delimiter=config.delimiter))
    if not records:
        raise IngestError("empty csv input")

    if config.has_header:
        schema = schema_from_header(records[0])
        data = records[1:]
    else:
        schema = Schema(tuple(str(i) for i in range(len(records[0]))))
        data = records

    nulls = set(config.null_tokens)
    width = len(schema)
    rows: list[Row] = []
    for i, record in enumerate(data):
        if len(record) != width:
            raise IngestError(f"row {i} has {len(record)} cells, expected {width}")
        values = tuple(None if cell.strip() in nulls else cell for cell in record)
        rows.append(Row(i, values))
    return Relation(schema, tuple(rows))


def write_csv(
    relation: Relation,
    target: str | Path | io.TextIOBase,
    config: IngestConfig = IngestConfig(),
) -> None:
    """Export a relation; missing values become ``config.null_tokens[0]``."""
    if not config.null_tokens:
        if any(v is None for row in relation.rows for v in row.values):
            raise IngestError("relation has missing values but no null token is configured")
        null_out = ""
    else:
        null_out = config.null_tokens[0]

    def emit(fh: io.TextIOBase) -> None:
        writer = csv.writer(fh, delimiter=config.delimiter, lineterminator="\n")
        if config.has_header:
            writer.writerow(relation.schema.attributes)
        for row in relation.rows:
            writer.writerow([null_out if v is None else v for v in row.values])

    if isinstance(target, (str, Path)):
        with open(target, "w", newline="", encoding="utf-8") as fh:
            emit(fh)
    else:
        emit(target)


def dataset_stats(relation: Relation) -> DatasetStats:
    nulls = sum(1 for row in relation.rows for v in row.values if v is None)
    return DatasetStats(rows=len(relation.rows), cols=len(relation.schema), nulls=nulls)
