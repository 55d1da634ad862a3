"""SQLite-backed single-table warehouse.

One `records` table keyed by (source, event_id) plus a small `etl_state`
key-value table. Batches commit records and the new watermark in one
transaction, which is what makes a killed-and-restarted load safe: either a
batch is fully visible with its watermark, or not at all.
"""

from __future__ import annotations

import sqlite3
from pathlib import Path
from typing import Any, Iterable, Iterator

from caseboard.errors import SinkUnavailable
from caseboard.warehouse.records import FIELD_ORDER, JOURNAL, WarehouseRecord

_BOOL_COLUMNS = ("relating_to_whole_company", "rolling", "customer_added")

_COLUMN_TYPES = {
    "source": "TEXT NOT NULL",
    "event_id": "INTEGER NOT NULL",
    "timestamp": "TEXT NOT NULL",
    "event_category": "INTEGER NOT NULL",
    "action_type": "TEXT NOT NULL",
    "relating_to_whole_company": "INTEGER",
    "rolling": "INTEGER",
    "customer_added": "INTEGER",
    "period_months": "INTEGER",
    "customers_low": "INTEGER",
    "customers_high": "INTEGER",
    "year": "INTEGER",
    "value": "REAL",
    "average_score": "REAL",
    "share_low": "REAL",
    "share_high": "REAL",
    "value_per_customer_low": "REAL",
    "value_per_customer_high": "REAL",
}

_SCHEMA = """
CREATE TABLE IF NOT EXISTS records (
    {columns},
    PRIMARY KEY (source, event_id)
);
CREATE INDEX IF NOT EXISTS idx_records_category ON records (event_category, action_type);
CREATE INDEX IF NOT EXISTS idx_records_case ON records (case_id);
CREATE INDEX IF NOT EXISTS idx_records_time ON records (timestamp);
CREATE TABLE IF NOT EXISTS etl_state (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
"""


def _column_defs() -> str:
    return ",\n    ".join(
        f"{name} {_COLUMN_TYPES.get(name, 'TEXT')}" for name in FIELD_ORDER
    )


def _to_row(record: WarehouseRecord) -> tuple:
    row = []
    for name in FIELD_ORDER:
        value = getattr(record, name)
        if name in _BOOL_COLUMNS and value is not None:
            value = int(value)
        row.append(value)
    return tuple(row)


def _from_row(row: sqlite3.Row) -> WarehouseRecord:
    values: dict[str, Any] = {}
    for name in FIELD_ORDER:
        value = row[name]
        if name in _BOOL_COLUMNS and value is not None:
            value = bool(value)
        values[name] = value
    return WarehouseRecord(**values)


class WarehouseStore:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._conn = sqlite3.connect(self.path)
        except OSError as exc:
            raise SinkUnavailable(f"cannot open warehouse at {self.path}: {exc}") from exc
        self._conn.row_factory = sqlite3.Row
        self._conn.executescript(_SCHEMA.format(columns=_column_defs()))
        self._conn.commit()

    def close(self) -> None:
        self._conn.close()

    def __enter__(self) -> "WarehouseStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- state ------------------------------------------------------------

    def get_state(self, key: str, default: str | None = None) -> str | None:
        row = self._conn.execute("SELECT value FROM etl_state WHERE key = ?", (key,)).fetchone()
        return default if row is None else row["value"]

    def set_state(self, key: str, value: str) -> None:
        self._conn.execute(
            "INSERT INTO etl_state (key, value) VALUES (?, ?) "
            "ON CONFLICT(key) DO UPDATE SET value = excluded.value",
            (key, value),
        )
        self._conn.commit()

    def watermark(self) -> int:
        return int(self.get_state("watermark", "0"))

    # -- loading ------------------------------------------------------------

    def upsert_batch(
        self, records: Iterable[WarehouseRecord], watermark: int | None = None
    ) -> int:
        """Insert-or-replace records; commits watermark in the same transaction."""
        placeholders = ", ".join("?" for _ in FIELD_ORDER)
        sql = f"INSERT OR REPLACE INTO records ({', '.join(FIELD_ORDER)}) VALUES ({placeholders})"
        rows = [_to_row(r) for r in records]
        try:
            with self._conn:
                self._conn.executemany(sql, rows)
                if watermark is not None:
                    self._conn.execute(
                        "INSERT INTO etl_state (key, value) VALUES ('watermark', ?) "
                        "ON CONFLICT(key) DO UPDATE SET value = excluded.value",
                        (str(watermark),),
                    )
        except sqlite3.Error as exc:
            raise SinkUnavailable(f"warehouse write failed: {exc}") from exc
        return len(rows)

    def delete_case(self, case_id: str) -> int:
        with self._conn:
            cursor = self._conn.execute("DELETE FROM records WHERE case_id = ?", (case_id,))
        return cursor.rowcount

    def delete_registry_company(self, organization_number: str) -> int:
        with self._conn:
            cursor = self._conn.execute(
                "DELETE FROM records WHERE source != ? AND organization_number = ?",
                (JOURNAL, organization_number),
            )
        return cursor.rowcount

    # -- queries ------------------------------------------------------------

    def count(self, source: str | None = None) -> int:
        if source is None:
            row = self._conn.execute("SELECT COUNT(*) AS n FROM records").fetchone()
        else:
            row = self._conn.execute(
                "SELECT COUNT(*) AS n FROM records WHERE source = ?", (source,)
            ).fetchone()
        return row["n"]

    def iter_records(self) -> Iterator[WarehouseRecord]:
        cursor = self._conn.execute("SELECT * FROM records ORDER BY source, event_id")
        for row in cursor:
            yield _from_row(row)

    def records_for_case(self, case_id: str) -> list[WarehouseRecord]:
        cursor = self._conn.execute(
            "SELECT * FROM records WHERE case_id = ? ORDER BY source, event_id", (case_id,)
        )
        return [_from_row(row) for row in cursor]

    def case_ids(self) -> list[str]:
        cursor = self._conn.execute(
            "SELECT DISTINCT case_id FROM records WHERE case_id IS NOT NULL ORDER BY case_id"
        )
        return [row["case_id"] for row in cursor]

    def journal_orgs(self) -> list[str]:
        cursor = self._conn.execute(
            "SELECT DISTINCT organization_number FROM records "
            "WHERE source = ? AND organization_number IS NOT NULL",
            (JOURNAL,),
        )
        return sorted(row["organization_number"] for row in cursor)

    def category_action_counts(self) -> dict[tuple[int, str], int]:
        cursor = self._conn.execute(
            "SELECT event_category, action_type, COUNT(*) AS n FROM records "
            "WHERE source = ? GROUP BY event_category, action_type",
            (JOURNAL,),
        )
        return {(row["event_category"], row["action_type"]): row["n"] for row in cursor}

    def monthly_counts(self, group_by: str | None = None) -> dict:
        # The alias must not be called "month": that name would resolve to the
        # payload column of the same name instead of the timestamp bucket.
        if group_by is None:
            cursor = self._conn.execute(
                "SELECT substr(timestamp, 1, 7) AS bucket, COUNT(*) AS n "
                "FROM records GROUP BY substr(timestamp, 1, 7) ORDER BY bucket"
            )
            return {row["bucket"]: row["n"] for row in cursor}
        if group_by == "action":
            key_expr = "action_type"
        elif group_by == "category":
            key_expr = "event_category"
        else:
            raise ValueError(f"group_by must be 'action' or 'category', got {group_by!r}")
        cursor = self._conn.execute(
            f"SELECT substr(timestamp, 1, 7) AS bucket, {key_expr} AS k, COUNT(*) AS n "
            f"FROM records GROUP BY substr(timestamp, 1, 7), {key_expr} ORDER BY bucket, k"
        )
        out: dict[str, dict] = {}
        for row in cursor:
            out.setdefault(row["bucket"], {})[row["k"]] = row["n"]
        return out

    def per_case_counts(self) -> dict[str, int]:
        cursor = self._conn.execute(
            "SELECT case_id, COUNT(*) AS n FROM records "
            "WHERE case_id IS NOT NULL GROUP BY case_id"
        )
        return {row["case_id"]: row["n"] for row in cursor}

    def case_category_action_counts(self, case_id: str) -> dict[tuple[int, str], int]:
        cursor = self._conn.execute(
            "SELECT event_category, action_type, COUNT(*) AS n FROM records "
            "WHERE source = ? AND case_id = ? GROUP BY event_category, action_type",
            (JOURNAL, case_id),
        )
        return {(row["event_category"], row["action_type"]): row["n"] for row in cursor}

    def case_category_action_counts_until(
        self, case_id: str, cutoff_timestamp: str
    ) -> dict[tuple[int, str], int]:
        cursor = self._conn.execute(
            "SELECT event_category, action_type, COUNT(*) AS n FROM records "
            "WHERE source = ? AND case_id = ? AND timestamp <= ? "
            "GROUP BY event_category, action_type",
            (JOURNAL, case_id, cutoff_timestamp),
        )
        return {(row["event_category"], row["action_type"]): row["n"] for row in cursor}

    def registry_records_for_org(self, organization_number: str) -> list[WarehouseRecord]:
        cursor = self._conn.execute(
            "SELECT * FROM records WHERE source != ? AND organization_number = ? "
            "ORDER BY year, event_category",
            (JOURNAL, organization_number),
        )
        return [_from_row(row) for row in cursor]

    def org_for_case(self, case_id: str) -> str | None:
        row = self._conn.execute(
            "SELECT organization_number FROM records "
            "WHERE case_id = ? AND organization_number IS NOT NULL LIMIT 1",
            (case_id,),
        ).fetchone()
        return None if row is None else row["organization_number"]
