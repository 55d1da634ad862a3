"""The single-table warehouse record.

Every row carries the same 17 common fields (explicit null where a field
genuinely doesn't apply: company fields for company-less cases, case and
participant fields for registry-sourced rows), an optional idea/model title,
and the union of all category-specific fields, null outside the record's own
category.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields as dataclass_fields
from typing import Any

from caseboard.domain.payloads import PAYLOAD_FIELDS
from caseboard.domain.taxonomy import ActionType, CATEGORY_BY_ID
from caseboard.errors import InvalidPayloadValue
from caseboard.timeutil import parse_timestamp

JOURNAL = "journal"
REGISTRY = "registry"

COMMON_FIELDS = (
    "case_id",
    "case_title",
    "event_id",
    "timestamp",
    "event_category",
    "action_type",
    "case_participant",
    "company_name",
    "organization_number",
    "country",
    "postcode",
    "nace_code",
    "added_by_case_role",
    "client_id",
    "relating_to_whole_company",
    "event_title",
    "event_description",
)

SPECIFIC_FIELDS = (
    "participant_type",
    "canvas_model",
    "period_months",
    "rolling",
    "polarity",
    "subject_company",
    "objective_category",
    "objective_type",
    "actual_vs_forecast",
    "month",
    "value",
    "kind",
    "probability",
    "consequence",
    "cost_group",
    "status",
    "average_score",
    "customer_added",
    "customers_low",
    "customers_high",
    "share_low",
    "share_high",
    "value_per_customer_low",
    "value_per_customer_high",
    "year",
)

# Serialization order: source key, common fields, idea/model link, specifics.
FIELD_ORDER = ("source",) + COMMON_FIELDS + ("idea_model_title",) + SPECIFIC_FIELDS

ACTION_VALUES = frozenset(a.value for a in ActionType)


@dataclass
class WarehouseRecord:
    source: str
    event_id: int
    timestamp: str
    event_category: int
    action_type: str
    case_id: str | None = None
    case_title: str | None = None
    case_participant: str | None = None
    company_name: str | None = None
    organization_number: str | None = None
    country: str | None = None
    postcode: str | None = None
    nace_code: str | None = None
    added_by_case_role: str | None = None
    client_id: str | None = None
    relating_to_whole_company: bool | None = None
    event_title: str | None = None
    event_description: str | None = None
    idea_model_title: str | None = None
    participant_type: str | None = None
    canvas_model: str | None = None
    period_months: int | None = None
    rolling: bool | None = None
    polarity: str | None = None
    subject_company: str | None = None
    objective_category: str | None = None
    objective_type: str | None = None
    actual_vs_forecast: str | None = None
    month: str | None = None
    value: float | None = None
    kind: str | None = None
    probability: str | None = None
    consequence: str | None = None
    cost_group: str | None = None
    status: str | None = None
    average_score: float | None = None
    customer_added: bool | None = None
    customers_low: int | None = None
    customers_high: int | None = None
    share_low: float | None = None
    share_high: float | None = None
    value_per_customer_low: float | None = None
    value_per_customer_high: float | None = None
    year: int | None = None

    def to_ordered_dict(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in FIELD_ORDER}

    def to_line(self) -> str:
        return json.dumps(self.to_ordered_dict(), ensure_ascii=False, separators=(", ", ": "))

    @classmethod
    def from_line(cls, line: str) -> "WarehouseRecord":
        doc = json.loads(line)
        return cls(**{name: doc.get(name) for name in FIELD_ORDER})


_RECORD_FIELD_NAMES = {f.name for f in dataclass_fields(WarehouseRecord)}
assert set(FIELD_ORDER) == _RECORD_FIELD_NAMES


def validate_record(record: WarehouseRecord) -> None:
    """Schema invariant checker; raises InvalidPayloadValue on violation."""

    def fail(message: str) -> None:
        raise InvalidPayloadValue(
            f"record ({record.source}, {record.event_id}): {message}"
        )

    if record.source not in (JOURNAL, REGISTRY):
        fail(f"unknown source {record.source!r}")
    if not isinstance(record.event_id, int) or record.event_id < 0:
        fail(f"event_id must be a non-negative integer, got {record.event_id!r}")
    try:
        parse_timestamp(record.timestamp)
    except (ValueError, TypeError):
        fail(f"unparseable timestamp {record.timestamp!r}")
    if record.event_category not in CATEGORY_BY_ID:
        fail(f"unknown category {record.event_category!r}")
    if record.action_type not in ACTION_VALUES:
        fail(f"unknown action {record.action_type!r}")

    if record.source == JOURNAL:
        if record.case_id is None or record.case_title is None:
            fail("journal records must carry case identity")
    else:
        if record.case_id is not None or record.case_participant is not None:
            fail("registry records must not carry case or participant fields")
        if record.organization_number is None or record.company_name is None:
            fail("registry records must carry company identity")
        if record.action_type != ActionType.CREATE.value:
            fail("registry records are Create-only")

    allowed = set(PAYLOAD_FIELDS.get(record.event_category, ()))
    for name in SPECIFIC_FIELDS:
        if getattr(record, name) is not None and name not in allowed:
            fail(f"field {name} is set but not part of category {record.event_category}")
