"""Aggregations and the success metric over the warehouse.

The success score sums, per configurable category group, the number of a
case's journal records (Create/Update/Delete; Move is process noise and
excluded), each group scaled by its weight:

    s_value = sum over groups g of weights[g] * delta_counts[g]

Default groups cover the idea, model, project-development and
customer-interaction categories; administrative, resource, gap and
registry categories are left out unless a custom map pulls them in.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from caseboard.domain.taxonomy import ActionType, CATEGORY_BY_ID
from caseboard.errors import EmptyWarehouse, NoFinancials, UnknownCase
from caseboard.timeutil import format_timestamp, year_end
from caseboard.warehouse.store import WarehouseStore

SCORED_ACTIONS = (ActionType.CREATE.value, ActionType.UPDATE.value, ActionType.DELETE.value)
ALL_ACTIONS = tuple(a.value for a in ActionType)

DEFAULT_GROUP_MAP: dict[str, frozenset[int]] = {
    "BI": frozenset({6, 7, 8, 9}),
    "BM": frozenset(range(10, 16)),
    "PD": frozenset({17, 18, 19}),
    "CI": frozenset({20, 21, 22}),
}

DEFAULT_WEIGHTS: dict[str, float] = {name: 1.0 for name in DEFAULT_GROUP_MAP}


@dataclass(frozen=True)
class SuccessScore:
    case_id: str
    delta_counts: dict[str, int]
    weights: dict[str, float]
    s_value: float


@dataclass(frozen=True)
class EventsPerCase:
    mean: float
    min: int
    max: int
    per_case: dict[str, int]


def validate_group_map(group_map: dict[str, frozenset[int]]) -> None:
    seen: set[int] = set()
    for name, ids in group_map.items():
        for category_id in ids:
            if category_id not in CATEGORY_BY_ID:
                raise ValueError(f"group {name!r} names unknown category {category_id}")
            if category_id in seen:
                raise ValueError(f"category {category_id} appears in more than one group")
        seen.update(ids)


def aggregate_category_action(store: WarehouseStore) -> dict[tuple[int, str], int]:
    """Full category x action grid over journal records, zero-filled."""
    table = {
        (category_id, action): 0
        for category_id in sorted(CATEGORY_BY_ID)
        for action in ALL_ACTIONS
    }
    table.update(store.category_action_counts())
    return table


def grand_total(table: dict[tuple[int, str], int]) -> int:
    return sum(table.values())


def nonzero_categories(table: dict[tuple[int, str], int]) -> list[int]:
    return sorted({cid for (cid, _), n in table.items() if n > 0})


def aggregate_monthly(store: WarehouseStore, group_by: str | None = None) -> dict:
    """Sparse month buckets (UTC calendar months) over all records."""
    return store.monthly_counts(group_by)


def events_per_case(store: WarehouseStore) -> EventsPerCase:
    per_case = store.per_case_counts()
    if not per_case:
        raise EmptyWarehouse("no cases loaded")
    counts = list(per_case.values())
    return EventsPerCase(
        mean=sum(counts) / len(counts),
        min=min(counts),
        max=max(counts),
        per_case=per_case,
    )


def _score_from_counts(
    case_id: str,
    counts: dict[tuple[int, str], int],
    group_map: dict[str, frozenset[int]],
    weights: dict[str, float],
) -> SuccessScore:
    delta_counts = {
        name: sum(
            n
            for (category_id, action), n in counts.items()
            if category_id in ids and action in SCORED_ACTIONS
        )
        for name, ids in group_map.items()
    }
    s_value = sum(weights.get(name, 1.0) * delta_counts[name] for name in group_map)
    return SuccessScore(
        case_id=case_id,
        delta_counts=delta_counts,
        weights={name: weights.get(name, 1.0) for name in group_map},
        s_value=s_value,
    )


def success_score(
    store: WarehouseStore,
    case_id: str,
    group_map: dict[str, frozenset[int]] | None = None,
    weights: dict[str, float] | None = None,
) -> SuccessScore:
    group_map = DEFAULT_GROUP_MAP if group_map is None else group_map
    weights = DEFAULT_WEIGHTS if weights is None else weights
    validate_group_map(group_map)
    counts = store.case_category_action_counts(case_id)
    if not counts:
        raise UnknownCase(f"case {case_id} has no records in the warehouse")
    return _score_from_counts(case_id, counts, group_map, weights)


def rank_cases(
    store: WarehouseStore,
    group_map: dict[str, frozenset[int]] | None = None,
    weights: dict[str, float] | None = None,
) -> list[SuccessScore]:
    """All cases ordered by s_value, highest first; ties break on case id."""
    scores = [
        success_score(store, case_id, group_map, weights) for case_id in store.case_ids()
    ]
    scores.sort(key=lambda s: (-s.s_value, s.case_id))
    return scores


def join_financials(
    store: WarehouseStore,
    case_id: str,
    group_map: dict[str, frozenset[int]] | None = None,
    weights: dict[str, float] | None = None,
) -> dict[int, dict[str, float | None]]:
    """Per registry year: cumulative success score vs. that year's figures.

    The score at year Y counts only the case's events timestamped at or
    before Y-12-31T23:59:59Z, so each row answers "how much had happened by
    the time these financials were filed".
    """
    group_map = DEFAULT_GROUP_MAP if group_map is None else group_map
    weights = DEFAULT_WEIGHTS if weights is None else weights
    validate_group_map(group_map)
    if not store.records_for_case(case_id):
        raise UnknownCase(f"case {case_id} has no records in the warehouse")
    org = store.org_for_case(case_id)
    if org is None:
        raise NoFinancials(f"case {case_id} is not linked to a company")
    registry_records = store.registry_records_for_org(org)
    if not registry_records:
        raise NoFinancials(f"no registry data for company {org}")

    by_year: dict[int, dict[str, float | None]] = {}
    value_fields = {24: "revenue", 25: "profit_loss", 34: "employees"}
    for record in registry_records:
        if record.year is None:
            continue
        row = by_year.setdefault(
            record.year, {"revenue": None, "profit_loss": None, "employees": None}
        )
        field = value_fields.get(record.event_category)
        if field is not None:
            row[field] = record.value

    out: dict[int, dict[str, float | None]] = {}
    for year in sorted(by_year):
        cutoff = format_timestamp(year_end(year))
        counts = store.case_category_action_counts_until(case_id, cutoff)
        score = _score_from_counts(case_id, counts, group_map, weights)
        out[year] = {"s_value_through_year": score.s_value, **by_year[year]}
    return out


def parse_group_map_text(text: str) -> dict[str, frozenset[int]]:
    """One `NAME = id, id, ...` per line; blank lines and # comments skipped."""
    groups: dict[str, frozenset[int]] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {line_number}: expected NAME = ids")
        name, _, ids = line.partition("=")
        groups[name.strip()] = frozenset(
            int(part) for part in ids.replace(",", " ").split()
        )
    validate_group_map(groups)
    return groups


def parse_weights_text(text: str) -> dict[str, float]:
    """One `NAME = weight` per line; blank lines and # comments skipped."""
    weights: dict[str, float] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {line_number}: expected NAME = weight")
        name, _, value = line.partition("=")
        weights[name.strip()] = float(value.strip())
    return weights


def load_group_map(path: str | Path) -> dict[str, frozenset[int]]:
    return parse_group_map_text(Path(path).read_text(encoding="utf-8"))


def load_weights(path: str | Path) -> dict[str, float]:
    return parse_weights_text(Path(path).read_text(encoding="utf-8"))
