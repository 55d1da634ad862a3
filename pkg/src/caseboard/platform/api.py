"""HTTP surface over PlatformService.

Every handler is a thin adapter: parse request, call the service, shape the
response. Domain errors map to {code, message} bodies so clients can branch
on `code` without parsing prose.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from caseboard.domain.cards import CaseSettings, Participant
from caseboard.domain.payloads import CanvasModel, CaseRole, ParticipantType
from caseboard.errors import CaseboardError
from caseboard.journal import JournalEvent, event_to_json
from caseboard.platform.service import (
    Case,
    CompanyLink,
    MarketEstimate,
    PlatformService,
    TestResponse,
)

NOT_FOUND_CODES = {"unknown_case", "unknown_card", "not_found"}
CONFLICT_CODES = {"lifecycle_violation", "illegal_transition", "competitor_limit_exceeded"}


class CompanyLinkBody(BaseModel):
    company_name: str
    organization_number: str
    country: str = "NO"
    consent: bool = True
    postcode: str | None = None
    nace_code: str | None = None


class CreateCaseBody(BaseModel):
    title: str
    period_months: int = 12
    rolling: bool = False
    canvas_model: str = CanvasModel.LEAN_BUSINESS.value
    period_start: str | None = None
    template_id: str | None = None
    relates_to_whole_company: bool = True
    company: CompanyLinkBody | None = None


class ParticipantBody(BaseModel):
    participant_id: str
    name: str
    case_role: str = CaseRole.ENTREPRENEUR.value
    participant_type: str = ParticipantType.EMPLOYEE.value
    internal: bool = True


class CardBody(BaseModel):
    participant_id: str
    board: str
    box: str
    action: str = "Create"
    card_id: str | None = None
    title: str = ""
    description: str = ""
    payload: dict[str, Any] = Field(default_factory=dict)
    idea_ref: str | None = None


class MoveTaskBody(BaseModel):
    participant_id: str
    to_status: str
    actual_cost: float | None = None


class ObjectiveBody(BaseModel):
    participant_id: str
    objective_category: str
    objective_type: str
    actual_vs_forecast: str
    month: str
    value: float
    title: str = ""
    description: str = ""


class TestResponseBody(BaseModel):
    interviewee_id: str
    ratings: dict[str, int]
    added_items: list[str] = Field(default_factory=list)
    comments: dict[str, str] = Field(default_factory=dict)


class InterviewTestBody(BaseModel):
    participant_id: str
    test_type: int
    responses: list[TestResponseBody]


class MarketEstimateBody(BaseModel):
    market_name: str
    customers_low: int
    customers_high: int
    share_low: float
    share_high: float
    value_low: float
    value_high: float


class MarketSizeBody(BaseModel):
    participant_id: str
    estimates: list[MarketEstimateBody]


class ConsentBody(BaseModel):
    consent: bool


class IdeaBody(BaseModel):
    participant_id: str
    title: str
    idea_id: str | None = None
    contribution_cards: list[str] = Field(default_factory=list)
    market_cards: list[str] = Field(default_factory=list)
    distinction_cards: list[str] = Field(default_factory=list)


def _case_view(case: Case) -> dict[str, Any]:
    return {
        "case_id": case.case_id,
        "title": case.title,
        "period_months": case.settings.period_months,
        "rolling": case.settings.rolling,
        "canvas_model": case.settings.canvas_model.value,
        "period_start": str(case.period_start),
        "period_end": str(case.period_end),
        "company": None
        if case.company_link is None
        else {
            "company_name": case.company_link.company_name,
            "organization_number": case.company_link.organization_number,
            "country": case.company_link.country,
            "consent": case.company_link.consent,
        },
        "participants": sorted(case.participants),
        "ideas": sorted(case.ideas),
    }


def _event_view(event: JournalEvent) -> dict[str, Any]:
    return event_to_json(event)


def _http_status(error: CaseboardError) -> int:
    if error.code in NOT_FOUND_CODES:
        return 404
    if error.code in CONFLICT_CODES:
        return 409
    return 400


def create_app(service: PlatformService) -> FastAPI:
    app = FastAPI(title="caseboard", version="0.1.0")

    @app.exception_handler(CaseboardError)
    async def _domain_error(request: Request, exc: CaseboardError) -> JSONResponse:
        return JSONResponse(
            status_code=_http_status(exc),
            content={"code": exc.code, "message": str(exc)},
        )

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/cases", status_code=201)
    def create_case(body: CreateCaseBody) -> dict[str, Any]:
        link = None
        if body.company is not None:
            link = CompanyLink(
                company_name=body.company.company_name,
                organization_number=body.company.organization_number,
                country=body.company.country,
                consent=body.company.consent,
                postcode=body.company.postcode,
                nace_code=body.company.nace_code,
            )
        case = service.create_case(
            title=body.title,
            settings=CaseSettings(
                period_months=body.period_months,
                rolling=body.rolling,
                canvas_model=CanvasModel(body.canvas_model),
                template_id=body.template_id,
                relates_to_whole_company=body.relates_to_whole_company,
            ),
            company_link=link,
            period_start=body.period_start,
        )
        return _case_view(case)

    @app.get("/cases")
    def list_cases() -> list[dict[str, Any]]:
        return [_case_view(c) for c in service.cases.values()]

    @app.get("/cases/{case_id}")
    def get_case(case_id: str) -> dict[str, Any]:
        return _case_view(service.get_case(case_id))

    @app.post("/cases/{case_id}/participants", status_code=201)
    def add_participant(case_id: str, body: ParticipantBody) -> dict[str, Any]:
        participant = Participant(
            participant_id=body.participant_id,
            name=body.name,
            case_role=CaseRole(body.case_role),
            participant_type=ParticipantType(body.participant_type),
            internal=body.internal,
        )
        event = service.add_participant(case_id, participant)
        return {"event": _event_view(event)}

    @app.get("/cases/{case_id}/cards")
    def list_cards(case_id: str, board: str | None = Query(default=None)) -> list[dict[str, Any]]:
        return service.live_cards(case_id, board)

    @app.post("/cases/{case_id}/cards", status_code=201)
    def mutate_card(case_id: str, body: CardBody) -> dict[str, Any]:
        event = service.mutate_card(
            case_id,
            body.participant_id,
            body.board,
            body.box,
            body.action,
            card_id=body.card_id,
            title=body.title,
            description=body.description,
            payload_fields=body.payload,
            idea_ref=body.idea_ref,
        )
        return {"card_id": event.card_id, "event": _event_view(event)}

    @app.post("/cases/{case_id}/tasks/{card_id}/move")
    def move_task(case_id: str, card_id: str, body: MoveTaskBody) -> dict[str, Any]:
        event = service.move_task(
            case_id,
            body.participant_id,
            card_id,
            body.to_status,
            actual_cost=body.actual_cost,
        )
        return {"event": _event_view(event)}

    @app.post("/cases/{case_id}/objectives", status_code=201)
    def record_objective(case_id: str, body: ObjectiveBody) -> dict[str, Any]:
        event = service.record_objective(
            case_id,
            body.participant_id,
            objective_category=body.objective_category,
            objective_type=body.objective_type,
            actual_vs_forecast=body.actual_vs_forecast,
            month=body.month,
            value=body.value,
            title=body.title,
            description=body.description,
        )
        return {"card_id": event.card_id, "event": _event_view(event)}

    @app.post("/cases/{case_id}/tests/interview", status_code=201)
    def run_interview_test(case_id: str, body: InterviewTestBody) -> dict[str, Any]:
        responses = [
            TestResponse(
                interviewee_id=r.interviewee_id,
                ratings=r.ratings,
                added_items=tuple(r.added_items),
                comments=r.comments,
            )
            for r in body.responses
        ]
        event = service.run_test(case_id, body.participant_id, body.test_type, responses)
        return {
            "card_id": event.card_id,
            "average_score": event.payload.average_score,
            "customer_added": event.payload.customer_added,
            "event": _event_view(event),
        }

    @app.post("/cases/{case_id}/tests/market-size", status_code=201)
    def run_market_size(case_id: str, body: MarketSizeBody) -> dict[str, Any]:
        estimates = [
            MarketEstimate(
                market_name=e.market_name,
                customers_low=e.customers_low,
                customers_high=e.customers_high,
                share_low=e.share_low,
                share_high=e.share_high,
                value_low=e.value_low,
                value_high=e.value_high,
            )
            for e in body.estimates
        ]
        results = service.compute_market_size(case_id, body.participant_id, estimates)
        return {
            "markets": [
                {
                    "market_name": r.market_name,
                    "revenue_min": r.revenue_min,
                    "revenue_max": r.revenue_max,
                    "card_id": r.event.card_id,
                }
                for r in results
            ]
        }

    @app.get("/cases/{case_id}/overview")
    def overview(case_id: str, clock_month: str | None = Query(default=None)) -> dict[str, Any]:
        view = service.compute_overview(case_id, clock_month)
        return {
            "pnl_forecast": {
                str(month): {"revenue": p.revenue, "cost": p.cost, "net": p.net}
                for month, p in view.pnl_forecast.items()
            },
            "unfinished_tasks": view.unfinished_tasks,
            "period_objectives": view.period_objectives,
        }

    @app.post("/cases/{case_id}/roll-forecast")
    def roll_forecast(case_id: str, clock_month: str = Query(...)) -> dict[str, Any]:
        case = service.roll_forecast(case_id, clock_month)
        return _case_view(case)

    @app.put("/cases/{case_id}/consent")
    def set_consent(case_id: str, body: ConsentBody) -> dict[str, Any]:
        service.set_consent(case_id, body.consent)
        return _case_view(service.get_case(case_id))

    @app.post("/cases/{case_id}/ideas", status_code=201)
    def save_idea(case_id: str, body: IdeaBody) -> dict[str, Any]:
        idea, validation, event = service.save_idea(
            case_id,
            body.participant_id,
            title=body.title,
            contribution_cards=body.contribution_cards,
            market_cards=body.market_cards,
            distinction_cards=body.distinction_cards,
            idea_id=body.idea_id,
        )
        return {
            "idea_id": idea.idea_id,
            "valid": validation.valid,
            "missing_boxes": list(validation.missing_boxes),
            "event": _event_view(event),
        }

    @app.get("/cases/{case_id}/ideas/of-card/{card_id}")
    def ideas_of_card(case_id: str, card_id: str) -> list[dict[str, Any]]:
        return [
            {
                "idea_id": idea.idea_id,
                "title": idea.title,
                "contribution_cards": sorted(idea.contribution_cards),
                "market_cards": sorted(idea.market_cards),
                "distinction_cards": sorted(idea.distinction_cards),
            }
            for idea in service.ideas_of_card(case_id, card_id)
        ]

    @app.get("/cases/{case_id}/events")
    def case_events(
        case_id: str,
        since: int = Query(default=0, ge=0),
        limit: int | None = Query(default=None, ge=1),
    ) -> list[dict[str, Any]]:
        return [_event_view(e) for e in service.case_events(case_id, since, limit)]

    return app
