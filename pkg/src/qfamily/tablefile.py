"""JSON table files: ``{"n": 2, "table": [[0, 1], [1, 0]], "label": "Z/2"}``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from .finsemigroup import MAX_ORDER, CayleyTable

__all__ = ["TableParseError", "TableFile", "parse_table", "read_table_file", "dump_table"]


class TableParseError(ValueError):
    pass


@dataclass(frozen=True)
class TableFile:
    table: CayleyTable
    label: Optional[str] = None


def read_table_file(data: Union[bytes, str]) -> TableFile:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise TableParseError("table file is not UTF-8: %s" % exc) from None
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise TableParseError("malformed JSON at line %d, column %d: %s" % (exc.lineno, exc.colno, exc.msg)) from None
    if not isinstance(obj, dict):
        raise TableParseError("table file must hold a JSON object, got %s" % type(obj).__name__)
    unknown = sorted(set(obj) - {"n", "table", "label"})
    if unknown:
        raise TableParseError("unknown field(s): %s" % ", ".join(unknown))
    for key in ("n", "table"):
        if key not in obj:
            raise TableParseError("missing field %r" % key)
    n = obj["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise TableParseError("field 'n' must be an integer, got %r" % (n,))
    if not 1 <= n <= MAX_ORDER:
        raise TableParseError("field 'n' must lie in 1..%d, got %d" % (MAX_ORDER, n))
    rows = obj["table"]
    if not isinstance(rows, list):
        raise TableParseError("field 'table' must be a list of rows")
    if len(rows) != n:
        raise TableParseError("field 'table' has %d rows, expected %d" % (len(rows), n))
    for r, row in enumerate(rows):
        if not isinstance(row, list):
            raise TableParseError("row %d is not a list" % r)
        if len(row) != n:
            raise TableParseError("ragged table: row %d has %d entries, expected %d" % (r, len(row), n))
        for s, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, int):
                raise TableParseError("entry %r is not an integer at row %d, col %d" % (v, r, s))
            if not 0 <= v < n:
                raise TableParseError("entry %d out of range at row %d, col %d" % (v, r, s))
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise TableParseError("field 'label' must be a string")
    return TableFile(CayleyTable(n, tuple(tuple(row) for row in rows)), label)


def parse_table(data: Union[bytes, str]) -> CayleyTable:
    return read_table_file(data).table


def dump_table(table: CayleyTable, label: Optional[str] = None) -> str:
    obj = {"n": table.n, "table": table.rows()}
    if label is not None:
        obj["label"] = label
    return json.dumps(obj, sort_keys=True)
