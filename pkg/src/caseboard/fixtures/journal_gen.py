"""Deterministic synthetic journal generation.

Given a seed, a case count, a period, and optionally an exact table of
(category, action) counts, emits a lifecycle-legal NDJSON journal whose
timestamps are uniform over the period, plus the cases.json the ETL reads
for case context. Same seed, same bytes.

The built-in `table5` preset carries the published per-category operational
counts (41 968 creates, 29 202 updates, 7 126 deletes over 1 377 cases) so
the aggregate reports can be checked cell by cell.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

from caseboard.domain.cards import CaseSettings, Participant
from caseboard.domain.months import YearMonth, month_range
from caseboard.domain.payloads import (
    ActualVsForecast,
    CanvasModel,
    CaseRole,
    CostGroup,
    EmptyPayload,
    GapPayload,
    GapPolarity,
    MONEY_OBJECTIVE_TYPES,
    MarketSizePayload,
    NON_MONEY_OBJECTIVE_TYPES,
    ObjectiveCategory,
    ObjectivePayload,
    ParticipantPayload,
    ParticipantType,
    Payload,
    RiskKind,
    RiskLevel,
    RiskPayload,
    SettingsPayload,
    TaskPayload,
    TaskStatus,
    TestScorePayload,
)
from caseboard.domain.taxonomy import ActionType, CATEGORY_BY_ID
from caseboard.errors import InfeasibleCounts
from caseboard.journal import EventJournal
from caseboard.platform.service import Case
from caseboard.platform.state import case_to_dict

JOURNAL_CATEGORY_IDS = tuple(range(1, 23))

# (creates, updates, deletes) per category id for the `table5` preset.
TABLE5_COUNTS: dict[int, tuple[int, int, int]] = {
    1: (2688, 64, 783),
    2: (1194, 8565, 49),
    3: (1486, 458, 180),
    4: (804, 334, 99),
    5: (926, 298, 95),
    6: (1317, 2106, 239),
    7: (3356, 1922, 542),
    8: (2754, 818, 357),
    9: (3266, 1385, 549),
    10: (1478, 376, 164),
    11: (1316, 517, 200),
    12: (3650, 690, 1021),
    13: (3297, 740, 790),
    14: (1696, 324, 177),
    15: (1091, 229, 125),
    16: (3367, 1119, 286),
    17: (2568, 3275, 577),
    18: (929, 364, 65),
    19: (4324, 5421, 748),
    20: (354, 135, 69),
    21: (67, 40, 9),
    22: (40, 22, 2),
}

TABLE5_CASES = 1377
TABLE5_PERIOD = (
    datetime(2017, 2, 1, tzinfo=timezone.utc),
    datetime(2017, 5, 16, tzinfo=timezone.utc),
)


@dataclass(frozen=True)
class FixtureSpec:
    seed: int
    cases: int
    period_start: datetime
    period_end: datetime  # exclusive
    per_category_counts: dict[int, tuple[int, int, int]] | None = None
    events_per_case: int = 20

    def validate(self) -> None:
        if self.cases < 1:
            raise InfeasibleCounts("cases must be >= 1")
        if self.period_end <= self.period_start:
            raise InfeasibleCounts("period must be non-empty")
        if self.per_category_counts is None:
            if self.events_per_case < 1:
                raise InfeasibleCounts("events_per_case must be >= 1")
            return
        for category_id, (creates, updates, deletes) in self.per_category_counts.items():
            if category_id not in JOURNAL_CATEGORY_IDS:
                raise InfeasibleCounts(
                    f"category {category_id} cannot appear in a journal fixture"
                )
            if min(creates, updates, deletes) < 0:
                raise InfeasibleCounts(f"category {category_id}: counts must be non-negative")
            if deletes > creates:
                raise InfeasibleCounts(
                    f"category {category_id}: {deletes} deletes exceed {creates} creates"
                )
            if updates > 0 and creates == 0:
                raise InfeasibleCounts(
                    f"category {category_id}: updates require at least one create"
                )


def table5_spec(seed: int = 20170201) -> FixtureSpec:
    return FixtureSpec(
        seed=seed,
        cases=TABLE5_CASES,
        period_start=TABLE5_PERIOD[0],
        period_end=TABLE5_PERIOD[1],
        per_category_counts=dict(TABLE5_COUNTS),
    )


PRESETS = {"table5": table5_spec}


def parse_fixture_spec(text: str) -> FixtureSpec:
    """Plain `key = value` lines; `preset = table5` loads the built-in shape,
    later keys override it. Count rows look like `count.19.Create = 4324`."""
    values: dict[str, str] = {}
    counts: dict[int, list[int]] = {}
    preset: FixtureSpec | None = None
    action_slot = {"Create": 0, "Update": 1, "Delete": 2}

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InfeasibleCounts(f"spec line {line_number}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "preset":
            if value not in PRESETS:
                raise InfeasibleCounts(f"unknown preset {value!r}")
            preset = PRESETS[value]()
        elif key.startswith("count."):
            parts = key.split(".")
            if len(parts) != 3 or parts[2] not in action_slot:
                raise InfeasibleCounts(
                    f"spec line {line_number}: count keys look like count.<id>.<Action>"
                )
            category_id = int(parts[1])
            counts.setdefault(category_id, [0, 0, 0])[action_slot[parts[2]]] = int(value)
        else:
            values[key] = value

    def _date(key: str, default: datetime | None) -> datetime:
        if key not in values:
            if default is None:
                raise InfeasibleCounts(f"spec needs {key}")
            return default
        parsed = datetime.strptime(values[key], "%Y-%m-%d").replace(tzinfo=timezone.utc)
        # period_end names the last day of the period, inclusive.
        return parsed + timedelta(days=1) if key == "period_end" else parsed

    base_counts = dict(preset.per_category_counts) if preset and preset.per_category_counts else {}
    for category_id, triple in counts.items():
        base_counts[category_id] = tuple(triple)

    spec = FixtureSpec(
        seed=int(values.get("seed", preset.seed if preset else 0)),
        cases=int(values.get("cases", preset.cases if preset else 1)),
        period_start=_date("period_start", preset.period_start if preset else None),
        period_end=_date("period_end", preset.period_end if preset else None),
        per_category_counts=base_counts or None,
        events_per_case=int(values.get("events_per_case", 20)),
    )
    spec.validate()
    return spec


def load_fixture_spec(path: str | Path) -> FixtureSpec:
    return parse_fixture_spec(Path(path).read_text(encoding="utf-8"))


# -- generation --------------------------------------------------------------


@dataclass
class _CardPlan:
    index: int
    category_id: int
    case_index: int
    updates: int
    deleted: bool
    task_status: TaskStatus | None = None
    fractions: list[float] = field(default_factory=list)


def _synthesize_counts(rng: random.Random, spec: FixtureSpec) -> dict[int, tuple[int, int, int]]:
    """Random but feasible counts: roughly 55% creates, 37% updates, the rest
    deletes capped by per-category create counts."""
    total = spec.cases * spec.events_per_case
    creates_total = max(len(JOURNAL_CATEGORY_IDS), int(total * 0.55))
    counts = {cid: [0, 0, 0] for cid in JOURNAL_CATEGORY_IDS}
    for _ in range(creates_total):
        counts[rng.choice(JOURNAL_CATEGORY_IDS)][0] += 1
    eligible = [cid for cid in JOURNAL_CATEGORY_IDS if counts[cid][0] > 0]
    for _ in range(int(total * 0.37)):
        counts[rng.choice(eligible)][1] += 1
    for _ in range(max(0, total - creates_total - int(total * 0.37))):
        pool = [cid for cid in eligible if counts[cid][2] < counts[cid][0]]
        if not pool:
            break
        counts[rng.choice(pool)][2] += 1
    return {cid: tuple(triple) for cid, triple in counts.items()}


def _plan_cards(rng: random.Random, spec: FixtureSpec) -> list[_CardPlan]:
    counts = spec.per_category_counts or _synthesize_counts(rng, spec)
    plans: list[_CardPlan] = []
    for category_id in sorted(counts):
        creates, updates, deletes = counts[category_id]
        if creates == 0:
            continue
        first = len(plans)
        for _ in range(creates):
            plans.append(
                _CardPlan(
                    index=len(plans),
                    category_id=category_id,
                    case_index=rng.randrange(spec.cases),
                    updates=0,
                    deleted=False,
                )
            )
        for _ in range(updates):
            plans[first + rng.randrange(creates)].updates += 1
        for offset in rng.sample(range(creates), deletes):
            plans[first + offset].deleted = True
    _fill_empty_cases(plans, spec.cases)
    for plan in plans:
        if plan.category_id == 19:
            plan.task_status = rng.choice(tuple(TaskStatus))
        draws = 1 + plan.updates + (1 if plan.deleted else 0)
        plan.fractions = sorted(rng.random() for _ in range(draws))
    return plans


def _fill_empty_cases(plans: list[_CardPlan], cases: int) -> None:
    """Reassign spare cards so every case owns at least one (a case with no
    events would silently drop out of per-case statistics)."""
    load: dict[int, int] = {i: 0 for i in range(cases)}
    for plan in plans:
        load[plan.case_index] += 1
    empty = [i for i in range(cases) if load[i] == 0]
    if not empty:
        return
    by_case: dict[int, list[_CardPlan]] = {}
    for plan in plans:
        by_case.setdefault(plan.case_index, []).append(plan)
    for case_index in empty:
        donor = max(load, key=lambda k: (load[k], -k))
        if load[donor] < 2:
            break
        moved = by_case[donor].pop()
        moved.case_index = case_index
        by_case.setdefault(case_index, []).append(moved)
        load[donor] -= 1
        load[case_index] += 1


def _random_payload(
    rng: random.Random,
    category_id: int,
    months: list[YearMonth],
    task_status: TaskStatus | None,
) -> Payload:
    if category_id == 1:
        return ParticipantPayload(participant_type=rng.choice(tuple(ParticipantType)))
    if category_id == 2:
        return SettingsPayload(
            canvas_model=rng.choice(tuple(CanvasModel)),
            period_months=rng.choice((3, 6, 9, 12)),
            rolling=rng.random() < 0.5,
        )
    if category_id == 16:
        return GapPayload(
            polarity=rng.choice(tuple(GapPolarity)),
            subject_company=f"Competitor {rng.randrange(1, 4)}",
        )
    if category_id == 17:
        objective_category = rng.choice(tuple(ObjectiveCategory))
        pool = (
            MONEY_OBJECTIVE_TYPES
            if objective_category is ObjectiveCategory.MONEY
            else NON_MONEY_OBJECTIVE_TYPES
        )
        return ObjectivePayload(
            objective_category=objective_category,
            objective_type=rng.choice(sorted(pool, key=lambda t: t.value)),
            actual_vs_forecast=rng.choice(tuple(ActualVsForecast)),
            month=rng.choice(months),
            value=round(rng.uniform(0, 500_000), 2),
        )
    if category_id == 18:
        return RiskPayload(
            kind=rng.choice(tuple(RiskKind)),
            probability=rng.choice(tuple(RiskLevel)),
            consequence=rng.choice(tuple(RiskLevel)),
        )
    if category_id == 19:
        return TaskPayload(
            cost_group=rng.choice(tuple(CostGroup)),
            month=rng.choice(months),
            actual_vs_forecast=rng.choice(tuple(ActualVsForecast)),
            value=round(rng.uniform(0, 100_000), 2),
            status=task_status or TaskStatus.QUEUE,
        )
    if category_id in (20, 21):
        return TestScorePayload(
            average_score=round(rng.uniform(1.0, 7.0), 4),
            customer_added=rng.random() < 0.3,
        )
    if category_id == 22:
        customers = sorted(rng.randrange(10, 100_000) for _ in range(2))
        shares = sorted(round(rng.uniform(0.01, 1.0), 4) for _ in range(2))
        prices = sorted(round(rng.uniform(1, 10_000), 2) for _ in range(2))
        return MarketSizePayload(
            customers_low=customers[0],
            customers_high=customers[1],
            share_low=shares[0],
            share_high=shares[1],
            value_per_customer_low=prices[0],
            value_per_customer_high=prices[1],
        )
    return EmptyPayload()


def generate_journal(spec: FixtureSpec, out_path: str | Path) -> dict:
    """Write the journal and its cases.json; returns summary counts."""
    spec.validate()
    rng = random.Random(spec.seed)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    if out_path.exists():
        out_path.unlink()

    case_ids = [f"case-{i + 1:05d}" for i in range(spec.cases)]
    participants: list[list[str]] = []
    roles: list[list[CaseRole]] = []
    for case_id in case_ids:
        n = rng.randint(1, 3)
        participants.append([f"{case_id}-p{j + 1}" for j in range(n)])
        roles.append([rng.choice(tuple(CaseRole)) for _ in range(n)])

    plans = _plan_cards(rng, spec)

    events: list[tuple[float, int, int, ActionType]] = []
    for plan in plans:
        actions: list[ActionType] = [ActionType.CREATE]
        actions.extend([ActionType.UPDATE] * plan.updates)
        if plan.deleted:
            actions.append(ActionType.DELETE)
        for seq, action in enumerate(actions):
            events.append((plan.fractions[seq], plan.index, seq, action))
    events.sort(key=lambda e: (e[0], e[1], e[2]))

    span_seconds = (spec.period_end - spec.period_start).total_seconds()
    timestamps = [
        spec.period_start + timedelta(seconds=int(fraction * span_seconds))
        for fraction, _, _, _ in events
    ]
    months = month_range(
        YearMonth.of(spec.period_start),
        YearMonth.of(spec.period_end - timedelta(seconds=1)),
    )

    clock_iter = iter(timestamps)
    journal = EventJournal(out_path, clock=lambda: next(clock_iter))
    try:
        for fraction, card_index, seq, action in events:
            plan = plans[card_index]
            case_index = plan.case_index
            case_id = case_ids[case_index]
            payload = (
                None
                if action is ActionType.DELETE
                else _random_payload(rng, plan.category_id, months, plan.task_status)
            )
            journal.append(
                case_id=case_id,
                card_id=f"{case_id}-k{plan.index:06d}",
                category=plan.category_id,
                action=action,
                participant_id=rng.choice(participants[case_index]),
                title=f"{CATEGORY_BY_ID[plan.category_id].name} {plan.index}",
                payload=payload,
            )
    finally:
        journal.close()

    _write_cases(out_path, spec, case_ids, participants, roles)
    return {
        "path": str(out_path),
        "events": len(events),
        "cases": spec.cases,
        "cards": len(plans),
    }


def _write_cases(
    journal_path: Path,
    spec: FixtureSpec,
    case_ids: list[str],
    participants: list[list[str]],
    roles: list[list[CaseRole]],
) -> None:
    cases = []
    start_month = YearMonth.of(spec.period_start)
    for i, case_id in enumerate(case_ids):
        case = Case(
            case_id=case_id,
            title=f"Case {i + 1}",
            settings=CaseSettings(
                period_months=12,
                rolling=False,
                canvas_model=CanvasModel.LEAN_BUSINESS,
            ),
            period_start=start_month,
            period_end=start_month.plus(11),
            last_roll=start_month,
        )
        for pid, role in zip(participants[i], roles[i]):
            case.participants[pid] = Participant(
                participant_id=pid,
                name=pid,
                case_role=role,
                participant_type=ParticipantType.EMPLOYEE,
            )
        cases.append(case)
    doc = {"cases": [case_to_dict(c) for c in cases]}
    path = journal_path.with_name("cases.json")
    path.write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
