"""UTC timestamp helpers.

All timestamps in journal files, warehouse rows and exports use
second-precision ISO-8601 UTC (``YYYY-MM-DDThh:mm:ssZ``).
"""

from __future__ import annotations

from datetime import datetime, timezone

ISO_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def utc_now() -> datetime:
    return datetime.now(tz=timezone.utc).replace(microsecond=0)


def format_timestamp(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).strftime(ISO_FORMAT)


def parse_timestamp(text: str) -> datetime:
    return datetime.strptime(text, ISO_FORMAT).replace(tzinfo=timezone.utc)


def year_end(year: int) -> datetime:
    """Final second of a calendar year, UTC."""
    return datetime(year, 12, 31, 23, 59, 59, tzinfo=timezone.utc)


def month_key(ts: datetime) -> str:
    """Calendar-month bucket (``YYYY-MM``) of a UTC timestamp."""
    ts = ts.astimezone(timezone.utc)
    return f"{ts.year:04d}-{ts.month:02d}"
