"""Shared helpers: deterministic clocks and pre-wired service instances."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from caseboard.domain.cards import CaseSettings, Participant
from caseboard.domain.payloads import CanvasModel, CaseRole, ParticipantType
from caseboard.journal import EventJournal
from caseboard.platform.service import CompanyLink, PlatformService

EPOCH = datetime(2017, 3, 1, 12, 0, 0, tzinfo=timezone.utc)


def ticking_clock(start: datetime = EPOCH, step_seconds: int = 60):
    """Deterministic clock: first call returns `start`, then +step each call."""
    state = {"n": -1}

    def clock() -> datetime:
        state["n"] += 1
        return start + timedelta(seconds=step_seconds * state["n"])

    return clock


def default_settings(**overrides) -> CaseSettings:
    base = dict(period_months=12, rolling=False, canvas_model=CanvasModel.LEAN_BUSINESS)
    base.update(overrides)
    return CaseSettings(**base)


def make_participant(pid: str = "p1", name: str = "Ada") -> Participant:
    return Participant(
        participant_id=pid,
        name=name,
        case_role=CaseRole.ENTREPRENEUR,
        participant_type=ParticipantType.EMPLOYEE,
    )


@pytest.fixture
def journal(tmp_path):
    with EventJournal(tmp_path / "journal.ndjson", clock=ticking_clock()) as j:
        yield j


@pytest.fixture
def service(journal):
    return PlatformService(journal)


@pytest.fixture
def case(service):
    """One case with a consenting company link and one participant."""
    created = service.create_case(
        "Fjellvik Drone Survey",
        default_settings(),
        CompanyLink(
            company_name="Fjellvik AS",
            organization_number="912345678",
            country="NO",
        ),
        period_start="2017-02",
    )
    service.add_participant(created.case_id, make_participant())
    return created
