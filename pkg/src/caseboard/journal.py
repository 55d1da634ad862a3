"""Append-only, totally ordered event journal.

Every card mutation on the platform serializes through here. Events are
immutable once appended; event ids increase strictly in append order and
timestamps never decrease. Per card, the journal enforces the lifecycle
Unknown -> Live (Create), Live -> Live (Update/Move), Live -> Deleted
(Delete); deleted ids are never resurrected.

When constructed with a path the journal is durable: one JSON record per
line, UTF-8, second-precision UTC timestamps.
"""

from __future__ import annotations

import io
import json
import threading
from bisect import bisect_right
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator

from caseboard.domain.payloads import Payload, make_payload
from caseboard.domain.taxonomy import (
    ActionType,
    CATEGORY_BY_ID,
    EventCategory,
    TASK_CATEGORY_ID,
)
from caseboard.errors import CategoryMismatch, LifecycleViolation
from caseboard.timeutil import format_timestamp, parse_timestamp, utc_now

UNKNOWN = "unknown"
LIVE = "live"
DELETED = "deleted"


@dataclass(frozen=True)
class JournalEvent:
    event_id: int
    case_id: str
    card_id: str | None
    category: EventCategory
    action: ActionType
    participant_id: str | None
    timestamp: datetime
    title: str
    description: str
    payload: Payload | None
    idea_ref: str | None = None


@dataclass
class CardState:
    """Fold of one card's event sequence: last payload wins."""

    status: str = UNKNOWN
    category_id: int | None = None
    title: str = ""
    description: str = ""
    payload: Payload | None = None
    case_id: str | None = None


def event_to_json(event: JournalEvent) -> dict[str, Any]:
    return {
        "case_id": event.case_id,
        "card_id": event.card_id,
        "event_id": event.event_id,
        "timestamp": format_timestamp(event.timestamp),
        "category": event.category.id,
        "action": event.action.value,
        "participant_id": event.participant_id,
        "title": event.title,
        "description": event.description,
        "idea_ref": event.idea_ref,
        "payload": event.payload.to_fields() if event.payload is not None else {},
    }


def event_from_json(record: dict[str, Any]) -> JournalEvent:
    category = CATEGORY_BY_ID[int(record["category"])]
    action = ActionType(record["action"])
    raw_payload = record.get("payload") or {}
    # Deletes are tombstones: no content of their own.
    payload = (
        None
        if action is ActionType.DELETE and not raw_payload
        else make_payload(category.id, raw_payload)
    )
    return JournalEvent(
        event_id=int(record["event_id"]),
        case_id=record["case_id"],
        card_id=record.get("card_id"),
        category=category,
        action=action,
        participant_id=record.get("participant_id"),
        timestamp=parse_timestamp(record["timestamp"]),
        title=record.get("title", ""),
        description=record.get("description", ""),
        payload=payload,
        idea_ref=record.get("idea_ref"),
    )


class EventJournal:
    """Single serialization point for all platform events.

    Appends are atomic and totally ordered; readers see a consistent prefix.
    """

    def __init__(
        self,
        path: str | Path | None = None,
        clock: Callable[[], datetime] | None = None,
    ):
        self._lock = threading.Lock()
        self._events: list[JournalEvent] = []
        self._event_ids: list[int] = []
        self._cards: dict[str, CardState] = {}
        self._clock = clock or utc_now
        self._path = Path(path) if path is not None else None
        self._fh: io.TextIOBase | None = None
        if self._path is not None:
            if self._path.exists():
                self._replay_file(self._path)
            else:
                self._path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = open(self._path, "a", encoding="utf-8")

    # -- write path ---------------------------------------------------------

    def append(
        self,
        *,
        case_id: str,
        category: EventCategory | int,
        action: ActionType | str,
        card_id: str | None = None,
        participant_id: str | None = None,
        title: str = "",
        description: str = "",
        payload: Payload | None = None,
        idea_ref: str | None = None,
    ) -> JournalEvent:
        """Validate lifecycle legality, assign id + timestamp, persist."""
        if isinstance(category, int):
            category = CATEGORY_BY_ID[category]
        action = ActionType(action)
        if payload is None and action is not ActionType.DELETE:
            payload = make_payload(category.id, {})
        with self._lock:
            self._check_lifecycle(card_id, category, action)
            now = self._clock()
            if self._events and now < self._events[-1].timestamp:
                now = self._events[-1].timestamp
            event = JournalEvent(
                event_id=(self._events[-1].event_id + 1) if self._events else 1,
                case_id=case_id,
                card_id=card_id,
                category=category,
                action=action,
                participant_id=participant_id,
                timestamp=now,
                title=title,
                description=description,
                payload=payload,
                idea_ref=idea_ref,
            )
            self._ingest(event)
            if self._fh is not None:
                self._fh.write(json.dumps(event_to_json(event), ensure_ascii=False) + "\n")
                self._fh.flush()
            return event

    def _check_lifecycle(
        self, card_id: str | None, category: EventCategory, action: ActionType
    ) -> None:
        if action is ActionType.MOVE and category.id != TASK_CATEGORY_ID:
            raise CategoryMismatch(f"Move is only valid for Task events, not {category.name}")
        if card_id is None:
            return
        status = self._cards.get(card_id, CardState()).status
        if action is ActionType.CREATE:
            if status == LIVE:
                raise LifecycleViolation(f"duplicate create for card {card_id}")
            if status == DELETED:
                raise LifecycleViolation(f"card {card_id} was deleted and cannot be recreated")
        else:
            if status == UNKNOWN:
                raise LifecycleViolation(f"{action.value} before create for card {card_id}")
            if status == DELETED:
                raise LifecycleViolation(f"{action.value} after delete for card {card_id}")

    def _ingest(self, event: JournalEvent) -> None:
        self._events.append(event)
        self._event_ids.append(event.event_id)
        if event.card_id is None:
            return
        state = self._cards.setdefault(event.card_id, CardState())
        if event.action is ActionType.DELETE:
            state.status = DELETED
        else:
            state.status = LIVE
            state.title = event.title
            state.description = event.description
            state.payload = event.payload
        state.category_id = event.category.id
        state.case_id = event.case_id

    def _replay_file(self, path: Path) -> None:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                event = event_from_json(json.loads(line))
                if self._event_ids and event.event_id <= self._event_ids[-1]:
                    raise LifecycleViolation(
                        f"{path}:{line_no}: event_id {event.event_id} not increasing"
                    )
                self._check_lifecycle(event.card_id, event.category, event.action)
                self._ingest(event)

    # -- read path ----------------------------------------------------------

    def read_since(self, watermark: int, limit: int | None = None) -> list[JournalEvent]:
        """Events with id > watermark, ascending, at most `limit`.

        Pure function of (journal prefix, watermark): concurrent appends only
        ever extend the suffix, so the returned batch is a consistent prefix.
        """
        with self._lock:
            start = bisect_right(self._event_ids, watermark)
            end = len(self._events) if limit is None else min(start + limit, len(self._events))
            return self._events[start:end]

    def card_state(self, card_id: str) -> CardState:
        with self._lock:
            state = self._cards.get(card_id)
            return replace(state) if state is not None else CardState()

    def card_ids(self) -> list[str]:
        with self._lock:
            return list(self._cards)

    @property
    def last_event_id(self) -> int:
        with self._lock:
            return self._events[-1].event_id if self._events else 0

    def __len__(self) -> int:
        with self._lock:
            return len(self._events)

    def __iter__(self) -> Iterator[JournalEvent]:
        return iter(self.read_since(0))

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self) -> "EventJournal":
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()


def replay_card_states(events: Iterable[JournalEvent]) -> dict[str, CardState]:
    """Fold an event sequence into per-card states; deterministic."""
    cards: dict[str, CardState] = {}
    for event in events:
        if event.card_id is None:
            continue
        state = cards.setdefault(event.card_id, CardState())
        if event.action is ActionType.DELETE:
            state.status = DELETED
        else:
            state.status = LIVE
            state.title = event.title
            state.description = event.description
            state.payload = event.payload
        state.category_id = event.category.id
        state.case_id = event.case_id
    return cards
