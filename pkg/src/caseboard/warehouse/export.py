"""File exports for downstream analysis tools.

record-lines: a self-describing text format, one record per line. The first
line is a header object naming the format and field order; every following
line is one record with fields in that order. Parsing an export reproduces
the warehouse contents exactly.

aggregate-table: the category x action grid as comma-separated values, one
row per category that has records, with a trailing totals row.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from caseboard.domain.taxonomy import CATEGORY_BY_ID
from caseboard.errors import DestinationUnwritable
from caseboard.warehouse.analytics import (
    ALL_ACTIONS,
    aggregate_category_action,
    nonzero_categories,
)
from caseboard.warehouse.records import FIELD_ORDER, WarehouseRecord
from caseboard.warehouse.store import WarehouseStore

RECORD_LINES_HEADER = {
    "format": "caseboard-records",
    "version": 1,
    "fields": list(FIELD_ORDER),
}

AGGREGATE_COLUMNS = ("category_id", "category_name", "Create", "Update", "Delete", "Move", "total")


def render_record_lines(store: WarehouseStore) -> str:
    import json

    lines = [json.dumps(RECORD_LINES_HEADER, separators=(", ", ": "))]
    lines.extend(record.to_line() for record in store.iter_records())
    return "\n".join(lines) + "\n"


def render_aggregate_table(store: WarehouseStore) -> str:
    table = aggregate_category_action(store)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(AGGREGATE_COLUMNS)
    totals = {action: 0 for action in ALL_ACTIONS}
    for category_id in nonzero_categories(table):
        counts = {action: table[(category_id, action)] for action in ALL_ACTIONS}
        for action, n in counts.items():
            totals[action] += n
        writer.writerow(
            [
                category_id,
                CATEGORY_BY_ID[category_id].name,
                *counts.values(),
                sum(counts.values()),
            ]
        )
    if any(totals.values()):
        writer.writerow(
            ["total", "", *totals.values(), sum(totals.values())]
        )
    return buffer.getvalue()


def export(store: WarehouseStore, fmt: str, destination: str | Path) -> Path:
    if fmt == "record-lines":
        content = render_record_lines(store)
    elif fmt == "aggregate-table":
        content = render_aggregate_table(store)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    destination = Path(destination)
    try:
        destination.parent.mkdir(parents=True, exist_ok=True)
        destination.write_text(content, encoding="utf-8")
    except OSError as exc:
        raise DestinationUnwritable(f"cannot write {destination}: {exc}") from exc
    return destination


def parse_record_lines(path: str | Path) -> list[WarehouseRecord]:
    import json

    with open(path, encoding="utf-8") as handle:
        header_line = handle.readline()
        header = json.loads(header_line) if header_line.strip() else {}
        if header.get("format") != RECORD_LINES_HEADER["format"]:
            raise ValueError(f"{path} is not a record-lines export")
        return [WarehouseRecord.from_line(line) for line in handle if line.strip()]
