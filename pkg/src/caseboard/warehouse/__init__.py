from caseboard.warehouse.analytics import (
    DEFAULT_GROUP_MAP,
    DEFAULT_WEIGHTS,
    EventsPerCase,
    SuccessScore,
    aggregate_category_action,
    aggregate_monthly,
    events_per_case,
    grand_total,
    join_financials,
    rank_cases,
    success_score,
)
from caseboard.warehouse.export import export, parse_record_lines
from caseboard.warehouse.records import JOURNAL, REGISTRY, WarehouseRecord, validate_record
from caseboard.warehouse.store import WarehouseStore

__all__ = [
    "DEFAULT_GROUP_MAP",
    "DEFAULT_WEIGHTS",
    "EventsPerCase",
    "JOURNAL",
    "REGISTRY",
    "SuccessScore",
    "WarehouseRecord",
    "WarehouseStore",
    "aggregate_category_action",
    "aggregate_monthly",
    "events_per_case",
    "export",
    "grand_total",
    "join_financials",
    "parse_record_lines",
    "rank_cases",
    "success_score",
    "validate_record",
]
