"""Registry records as time-series events.

Annual figures have no intrinsic moment, only a year, so each value is
stamped at the last second of its accounting year (YYYY-12-31T23:59:59Z).
That places registry facts after every user edit of the same year when the
warehouse is sorted by time, and keeps the stamping reproducible: re-running
the mapping yields byte-identical events.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import datetime
from typing import Any

from caseboard.domain.payloads import RegistrationStatus
from caseboard.registry.types import (
    BANKRUPTCY_CATEGORY,
    FINANCIAL_CATEGORIES,
    REGISTERED_CATEGORY,
    CompanyRecord,
)
from caseboard.timeutil import year_end


@dataclass(frozen=True)
class RegistryEvent:
    event_id: int
    organization_number: str
    company_name: str
    country: str
    category_id: int
    timestamp: datetime
    payload: dict[str, Any]


def registry_event_id(organization_number: str, category_id: int, year: int) -> int:
    """Stable id for the (company, category, year) cell.

    Journal ids are small sequential integers; hashing keeps the two id
    spaces from colliding without any shared counter, and re-extraction maps
    a cell to the same id every time (which is what makes the warehouse
    upsert idempotent across runs).
    """
    digest = hashlib.sha256(
        f"{organization_number}:{category_id}:{year}".encode()
    ).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def registry_to_events(company: CompanyRecord) -> list[RegistryEvent]:
    """One event per known annual value, plus one status event."""
    events: list[RegistryEvent] = []

    def emit(category_id: int, year: int, payload: dict[str, Any]) -> None:
        events.append(
            RegistryEvent(
                event_id=registry_event_id(company.organization_number, category_id, year),
                organization_number=company.organization_number,
                company_name=company.company_name,
                country=company.country,
                category_id=category_id,
                timestamp=year_end(year),
                payload=payload,
            )
        )

    for figures in company.annual_figures:
        for category_id in sorted(FINANCIAL_CATEGORIES):
            value = figures.value_for(category_id)
            if value is not None:
                emit(category_id, figures.year, {"year": figures.year, "value": float(value)})

    if company.status_year is not None:
        category = (
            BANKRUPTCY_CATEGORY
            if company.status is RegistrationStatus.BANKRUPT
            else REGISTERED_CATEGORY
        )
        emit(
            category,
            company.status_year,
            {"year": company.status_year, "status": company.status.value},
        )

    events.sort(key=lambda e: (e.timestamp, e.category_id))
    return events
