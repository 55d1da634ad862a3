"""Case-level state persisted next to the journal.

The journal holds card history; case metadata that isn't card-shaped
(company link, consent flag, participants, idea membership, period) lives in
a JSON file alongside it. The ETL reads the same file to denormalize case
context into warehouse records.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any

from caseboard.domain.cards import BusinessIdea, CaseSettings, Participant
from caseboard.domain.months import YearMonth
from caseboard.domain.payloads import CanvasModel, CaseRole, ParticipantType
from caseboard.platform.service import Case, CompanyLink, PlatformService


def case_to_dict(case: Case) -> dict[str, Any]:
    link = None
    if case.company_link is not None:
        link = {
            "company_name": case.company_link.company_name,
            "organization_number": case.company_link.organization_number,
            "country": case.company_link.country,
            "consent": case.company_link.consent,
            "postcode": case.company_link.postcode,
            "nace_code": case.company_link.nace_code,
        }
    return {
        "case_id": case.case_id,
        "title": case.title,
        "settings": {
            "period_months": case.settings.period_months,
            "rolling": case.settings.rolling,
            "canvas_model": case.settings.canvas_model.value,
            "template_id": case.settings.template_id,
            "relates_to_whole_company": case.settings.relates_to_whole_company,
        },
        "period_start": str(case.period_start),
        "period_end": str(case.period_end),
        "last_roll": str(case.last_roll),
        "company_link": link,
        "participants": [
            {
                "participant_id": p.participant_id,
                "name": p.name,
                "case_role": p.case_role.value,
                "participant_type": p.participant_type.value,
                "internal": p.internal,
            }
            for p in case.participants.values()
        ],
        "ideas": [
            {
                "idea_id": idea.idea_id,
                "title": idea.title,
                "contribution_cards": sorted(idea.contribution_cards),
                "market_cards": sorted(idea.market_cards),
                "distinction_cards": sorted(idea.distinction_cards),
            }
            for idea in case.ideas.values()
        ],
    }


def case_from_dict(doc: dict[str, Any]) -> Case:
    raw_link = doc.get("company_link")
    link = None
    if raw_link is not None:
        link = CompanyLink(
            company_name=raw_link["company_name"],
            organization_number=raw_link["organization_number"],
            country=raw_link["country"],
            consent=bool(raw_link.get("consent", True)),
            postcode=raw_link.get("postcode"),
            nace_code=raw_link.get("nace_code"),
        )
    settings_doc = doc["settings"]
    case = Case(
        case_id=doc["case_id"],
        title=doc["title"],
        settings=CaseSettings(
            period_months=settings_doc["period_months"],
            rolling=settings_doc["rolling"],
            canvas_model=CanvasModel(settings_doc["canvas_model"]),
            template_id=settings_doc.get("template_id"),
            relates_to_whole_company=settings_doc.get("relates_to_whole_company", True),
        ),
        period_start=YearMonth.parse(doc["period_start"]),
        period_end=YearMonth.parse(doc["period_end"]),
        last_roll=YearMonth.parse(doc.get("last_roll", doc["period_start"])),
        company_link=link,
    )
    for p in doc.get("participants", ()):
        case.participants[p["participant_id"]] = Participant(
            participant_id=p["participant_id"],
            name=p["name"],
            case_role=CaseRole(p["case_role"]),
            participant_type=ParticipantType(p["participant_type"]),
            internal=bool(p.get("internal", True)),
        )
    for i in doc.get("ideas", ()):
        case.ideas[i["idea_id"]] = BusinessIdea(
            idea_id=i["idea_id"],
            title=i["title"],
            contribution_cards=frozenset(i.get("contribution_cards", ())),
            market_cards=frozenset(i.get("market_cards", ())),
            distinction_cards=frozenset(i.get("distinction_cards", ())),
        )
    return case


def save_cases(service: PlatformService, path: str | Path) -> None:
    path = Path(path)
    doc = {"cases": [case_to_dict(c) for c in service.cases.values()]}
    # Write-then-rename so a crash mid-write never leaves a truncated file.
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            json.dump(doc, handle, indent=2, sort_keys=True)
            handle.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_cases(path: str | Path) -> dict[str, Case]:
    path = Path(path)
    if not path.exists():
        return {}
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    return {d["case_id"]: case_from_dict(d) for d in doc.get("cases", ())}


def attach_persistence(service: PlatformService, path: str | Path) -> None:
    """Restore cases from `path` and save after every mutation."""
    path = Path(path)
    service.cases.update(load_cases(path))
    service._on_change = lambda svc: save_cases(svc, path)
