"""CSV ingestion: dialect handling, typed cell parsing and projection of
records onto the analyzed fields.

Readers are forward-only, stream one record at a time and deliver dense
1-based record ordinals. Rows whose cell count disagrees with the
declared width are surfaced as ragged records, never as exceptions.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

from .lang import ast
from .values import (
    ASCII_WS,
    T_DATE,
    T_ENUM,
    TYPE_CODE_BY_NAME,
    ParseFailure,
    compile_date_format,
    parse_cell,
)


class DataError(Exception):
    """I/O or structural problem that aborts a run (exit code 3)."""


class HeaderMissingColumn(DataError):
    pass


@dataclass(frozen=True)
class DialectConfig:
    delimiter: str = ","
    quote: str = '"'
    has_header: bool = True
    null_tokens: tuple[str, ...] = ("",)

    def __post_init__(self):
        if len(self.delimiter) != 1 or len(self.quote) != 1:
            raise ValueError("delimiter and quote must be single characters")
        if self.delimiter == self.quote:
            raise ValueError("delimiter and quote must differ")


def dialect_from_source(src: ast.SourceDecl) -> DialectConfig:
    return DialectConfig(
        delimiter=src.delimiter,
        quote=src.quote,
        has_header=src.has_header,
        null_tokens=src.null_tokens,
    )


@dataclass(frozen=True)
class DataObjectInstance:
    """One record projected onto the analyzed fields only."""

    record_ordinal: int
    values: dict[str, tuple[str, object]]  # field -> (raw cell, typed value)


class DatasetReader:
    """Single-consumer forward reader over one CSV file.

    Iterating yields (ordinal, cells, ragged): ordinal is the dense
    1-based data-row position, cells the raw cell list, and ragged is
    True when the width disagrees with the expected column count (such
    records must be skipped by rule evaluation but still counted).
    """

    def __init__(self, path: str, dialect: DialectConfig):
        self.path = path
        self.dialect = dialect
        try:
            # utf-8-sig tolerates and strips a BOM
            self._fh = open(path, "r", encoding="utf-8-sig", newline="")
        except OSError as exc:
            raise DataError(f"cannot open dataset {path!r}: {exc}") from None
        self._rows = csv.reader(
            self._fh, delimiter=dialect.delimiter, quotechar=dialect.quote
        )
        self.header: list[str] | None = None
        self.width: int | None = None
        self.data_rows_read = 0
        self._pending: list[str] | None = None
        try:
            first = next(self._rows)
        except StopIteration:
            first = None
        except UnicodeDecodeError as exc:
            raise DataError(f"{path}: not valid UTF-8: {exc}") from None
        if dialect.has_header:
            self.header = first
            if first is not None:
                self.width = len(first)
        elif first is not None:
            # headerless: the first data row fixes the expected width
            self._pending = first
            self.width = len(first)

    def resolve(self, column: str | int) -> int:
        """Map a 1-based index or header name to a 0-based cell index."""
        if isinstance(column, int):
            if column < 1:
                raise DataError(f"{self.path}: column index {column} is not 1-based")
            if self.width is not None and column > self.width:
                raise HeaderMissingColumn(
                    f"{self.path}: column index {column} exceeds width {self.width}"
                )
            return column - 1
        if self.header is None:
            raise HeaderMissingColumn(
                f"{self.path}: no header row; cannot bind column {column!r}"
            )
        try:
            return self.header.index(column)
        except ValueError:
            raise HeaderMissingColumn(
                f"{self.path}: header has no column {column!r}"
            ) from None

    def __iter__(self):
        ordinal = 0
        if self._pending is not None:
            ordinal = 1
            self.data_rows_read = 1
            cells, self._pending = self._pending, None
            yield 1, cells, len(cells) != self.width
        try:
            for cells in self._rows:
                ordinal += 1
                self.data_rows_read = ordinal
                if self.width is None:
                    self.width = len(cells)
                yield ordinal, cells, len(cells) != self.width
        except UnicodeDecodeError as exc:
            raise DataError(
                f"{self.path}: not valid UTF-8 near record {ordinal + 1}: {exc}"
            ) from None

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


def open_dataset(path: str, dialect: DialectConfig | None = None) -> DatasetReader:
    if not os.path.exists(path):
        raise DataError(f"dataset not found: {path}")
    return DatasetReader(path, dialect or DialectConfig())


def _type_descriptor(ftype: ast.FieldType):
    """(tcode, targ) pair used by parse_cell and the row kernels."""
    tcode = TYPE_CODE_BY_NAME[ast.type_name(ftype)]
    if tcode == T_DATE:
        return tcode, compile_date_format(ftype.fmt)
    if tcode == T_ENUM:
        return tcode, frozenset(ftype.values)
    return tcode, None


def parse_value(raw: str, ftype: ast.FieldType, dialect: DialectConfig | None = None):
    """Parse one raw cell into its typed value; never raises.

    Returns None for null tokens, the typed value on success, or a
    ParseFailure carrying the raw text and a reason.
    """
    dialect = dialect or DialectConfig()
    tcode, targ = _type_descriptor(ftype)
    return parse_cell(raw, tcode, targ, dialect.null_tokens)


class ObjectProjector:
    """Binds an ObjectDecl's columns against a reader once, then projects
    records onto DataObjectInstances."""

    def __init__(self, obj: ast.ObjectDecl, reader: DatasetReader, dialect: DialectConfig | None = None):
        self.obj = obj
        self.dialect = dialect or reader.dialect
        self._slots = []
        for f in obj.fields:
            col = reader.resolve(f.column if f.column is not None else f.name)
            tcode, targ = _type_descriptor(f.ftype)
            self._slots.append((f.name, col, tcode, targ))

    def project(self, ordinal: int, cells: list[str]) -> DataObjectInstance:
        values: dict[str, tuple[str, object]] = {}
        null_tokens = self.dialect.null_tokens
        for name, col, tcode, targ in self._slots:
            raw = cells[col]
            values[name] = (raw, parse_cell(raw, tcode, targ, null_tokens))
        return DataObjectInstance(record_ordinal=ordinal, values=values)


def project_object(
    record: tuple[int, list[str]],
    obj: ast.ObjectDecl,
    reader: DatasetReader,
    dialect: DialectConfig | None = None,
) -> DataObjectInstance:
    """Project one (ordinal, cells) record onto the object's fields."""
    ordinal, cells = record
    return ObjectProjector(obj, reader, dialect).project(ordinal, cells)


__all__ = [
    "DataError",
    "HeaderMissingColumn",
    "DialectConfig",
    "DataObjectInstance",
    "DatasetReader",
    "ObjectProjector",
    "dialect_from_source",
    "open_dataset",
    "parse_value",
    "project_object",
    "ParseFailure",
]
