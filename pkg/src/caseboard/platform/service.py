"""Service surface of the planning platform.

Cases, participants, boards, cards, customer tests, forecasts and the
overview; every mutation is routed through the event journal. Handlers are
stateless over the journal: concurrent mutations of the same card are
resolved by journal serialization, and losers of a lifecycle race get
LifecycleViolation.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Mapping

from caseboard.domain.cards import (
    BusinessIdea,
    CaseSettings,
    IDEA_COMPONENT_BOXES,
    IdeaValidation,
    Participant,
    validate_business_idea,
)
from caseboard.domain.months import YearMonth, month_range, months_between
from caseboard.domain.payloads import (
    ActualVsForecast,
    CostGroup,
    MarketSizePayload,
    ObjectiveCategory,
    SettingsPayload,
    TaskStatus,
    TestScorePayload,
    make_payload,
)
from caseboard.domain.taxonomy import ActionType, Board, classify
from caseboard.errors import (
    CompetitorLimitExceeded,
    EmptyResponses,
    ForeignParticipant,
    IllegalTransition,
    InvalidEstimate,
    InvalidIdea,
    InvalidOrgNumber,
    LifecycleViolation,
    MonthOutsidePeriod,
    NoCompanyLink,
    NotFound,
    RatingOutOfRange,
    RegistryUnavailable,
    UnknownCard,
    UnknownCase,
)
from caseboard.journal import EventJournal, JournalEvent, LIVE
from caseboard.timeutil import utc_now

log = logging.getLogger(__name__)

MAX_COMPETITORS = 3

LEGAL_TASK_MOVES = {
    (TaskStatus.QUEUE, TaskStatus.ACTIVE),
    (TaskStatus.ACTIVE, TaskStatus.QUEUE),
    (TaskStatus.ACTIVE, TaskStatus.DONE),
}


@dataclass
class CompanyLink:
    company_name: str
    organization_number: str
    country: str
    consent: bool = True
    postcode: str | None = None
    nace_code: str | None = None


@dataclass
class Case:
    case_id: str
    title: str
    settings: CaseSettings
    period_start: YearMonth
    period_end: YearMonth
    last_roll: YearMonth
    company_link: CompanyLink | None = None
    participants: dict[str, Participant] = field(default_factory=dict)
    ideas: dict[str, BusinessIdea] = field(default_factory=dict)

    @property
    def settings_object_id(self) -> str:
        return f"{self.case_id}:settings"


@dataclass(frozen=True)
class MarketEstimate:
    market_name: str
    customers_low: int
    customers_high: int
    share_low: float
    share_high: float
    value_low: float
    value_high: float

    def validate(self) -> None:
        pairs = (
            ("customers", self.customers_low, self.customers_high),
            ("share", self.share_low, self.share_high),
            ("value", self.value_low, self.value_high),
        )
        for name, low, high in pairs:
            if low < 0 or high < 0:
                raise InvalidEstimate(f"{name} estimates must be non-negative")
            if low > high:
                raise InvalidEstimate(f"{name} low exceeds high")
        if self.share_high > 1.0:
            raise InvalidEstimate("market share must be a fraction in [0, 1]")


@dataclass(frozen=True)
class TestResponse:
    interviewee_id: str
    ratings: Mapping[str, int]
    added_items: tuple[str, ...] = ()
    comments: Mapping[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        for item, rating in self.ratings.items():
            if not 1 <= int(rating) <= 7:
                raise RatingOutOfRange(f"rating {rating} for {item!r} outside the 7-point scale")


@dataclass(frozen=True)
class MarketSizeResult:
    market_name: str
    revenue_min: float
    revenue_max: float
    event: JournalEvent


@dataclass(frozen=True)
class MonthlyPnl:
    revenue: float
    cost: float
    net: float


@dataclass(frozen=True)
class Overview:
    pnl_forecast: dict[YearMonth, MonthlyPnl]
    unfinished_tasks: list[str]
    period_objectives: list[str]


def market_revenue_bounds(estimate: MarketEstimate) -> tuple[float, float]:
    """Expected revenue interval: customers x share x value, per bound."""
    low = estimate.customers_low * estimate.share_low * estimate.value_low
    high = estimate.customers_high * estimate.share_high * estimate.value_high
    return low, high


def valid_org_number(org: str, length: int = 9) -> bool:
    return org.isdigit() and len(org) == length


class PlatformService:
    """In-process implementation of the platform API.

    `registry` is any object with fetch_company(org); used to verify company
    links at case creation when configured. `on_change` is invoked after each
    state mutation (persistence hook).
    """

    def __init__(
        self,
        journal: EventJournal,
        registry: Any | None = None,
        on_change: Callable[["PlatformService"], None] | None = None,
    ):
        self.journal = journal
        self.registry = registry
        self.cases: dict[str, Case] = {}
        self._on_change = on_change
        self._lock = threading.Lock()
        self._case_seq = itertools.count(1)
        self._card_seq = itertools.count(1)

    # -- cases ---------------------------------------------------------------

    def create_case(
        self,
        title: str,
        settings: CaseSettings,
        company_link: CompanyLink | None = None,
        *,
        period_start: YearMonth | str | None = None,
        case_id: str | None = None,
        creator_id: str | None = None,
    ) -> Case:
        settings.validate()
        if company_link is not None:
            company_link = self._verify_company(company_link)
        start = YearMonth.of(period_start) if period_start else YearMonth.of(utc_now())
        with self._lock:
            if case_id is None:
                case_id = f"case-{next(self._case_seq):05d}"
            if case_id in self.cases:
                raise InvalidIdea(f"case id {case_id} already exists")
            case = Case(
                case_id=case_id,
                title=title,
                settings=settings,
                period_start=start,
                period_end=start.plus(settings.period_months - 1),
                last_roll=start,
                company_link=company_link,
            )
            self.cases[case_id] = case
        self.journal.append(
            case_id=case_id,
            card_id=case.settings_object_id,
            category=2,
            action=ActionType.CREATE,
            participant_id=creator_id,
            title=title,
            payload=self._settings_payload(settings),
        )
        self._changed()
        return case

    def _verify_company(self, link: CompanyLink) -> CompanyLink:
        if not valid_org_number(link.organization_number):
            raise InvalidOrgNumber(
                f"organization number must be a 9-digit string, got {link.organization_number!r}"
            )
        if self.registry is None:
            return link
        try:
            record = self.registry.fetch_company(link.organization_number)
        except NotFound:
            # Company not in the registry (e.g. non-Nordic): keep user-provided
            # identifiers; the pipeline proceeds without registry events.
            return link
        except RegistryUnavailable:
            log.warning("registry unavailable; keeping unverified company link")
            return link
        return replace(
            link,
            company_name=record.company_name,
            country=record.country,
            postcode=record.postcode,
            nace_code=record.nace_code,
        )

    @staticmethod
    def _settings_payload(settings: CaseSettings) -> SettingsPayload:
        return SettingsPayload(
            canvas_model=settings.canvas_model,
            period_months=settings.period_months,
            rolling=settings.rolling,
        )

    def get_case(self, case_id: str) -> Case:
        try:
            return self.cases[case_id]
        except KeyError:
            raise UnknownCase(f"no case {case_id}") from None

    def add_participant(
        self, case_id: str, participant: Participant, *, added_by: str | None = None
    ) -> JournalEvent:
        case = self.get_case(case_id)
        case.participants[participant.participant_id] = participant
        event = self.journal.append(
            case_id=case_id,
            card_id=participant.participant_id,
            category=1,
            action=ActionType.CREATE,
            participant_id=added_by or participant.participant_id,
            title=participant.name,
            payload=make_payload(1, {"participant_type": participant.participant_type}),
        )
        self._changed()
        return event

    def _require_participant(self, case: Case, participant_id: str) -> Participant:
        participant = case.participants.get(participant_id)
        if participant is None:
            raise ForeignParticipant(
                f"participant {participant_id} does not belong to case {case.case_id}"
            )
        return participant

    # -- cards ----------------------------------------------------------------

    def mutate_card(
        self,
        case_id: str,
        participant_id: str,
        board: Board | str,
        box: str,
        action: ActionType | str,
        *,
        card_id: str | None = None,
        title: str = "",
        description: str = "",
        payload_fields: Mapping[str, Any] | None = None,
        idea_ref: str | None = None,
    ) -> JournalEvent:
        case = self.get_case(case_id)
        self._require_participant(case, participant_id)
        action = ActionType(action)
        if action is ActionType.MOVE:
            raise IllegalTransition("task moves go through move_task")
        category = classify(board, box)
        payload = (
            None
            if action is ActionType.DELETE
            else make_payload(category.id, payload_fields)
        )
        if payload is not None and category.id == 16:
            self._check_competitor_limit(case, payload.subject_company, card_id)
        if action is ActionType.CREATE and card_id is None:
            card_id = f"{case_id}-card-{next(self._card_seq):06d}"
        if card_id is None:
            raise UnknownCard(f"{action.value} requires a card id")
        if action is not ActionType.CREATE:
            state = self.journal.card_state(card_id)
            if state.status == LIVE and state.case_id != case_id:
                raise UnknownCard(f"card {card_id} belongs to another case")
        event = self.journal.append(
            case_id=case_id,
            card_id=card_id,
            category=category,
            action=action,
            participant_id=participant_id,
            title=title,
            description=description,
            payload=payload,
            idea_ref=idea_ref,
        )
        self._changed()
        return event

    def _check_competitor_limit(
        self, case: Case, subject: str, card_id: str | None
    ) -> None:
        """At most three distinct competitors may be named on the Gap board."""
        own_names = {case.title}
        if case.company_link is not None:
            own_names.add(case.company_link.company_name)
        if subject in own_names:
            return
        competitors = set()
        for state in self._live_states(case.case_id).values():
            if state.category_id == 16 and state.payload is not None:
                name = state.payload.subject_company
                if name not in own_names:
                    competitors.add(name)
        if subject not in competitors and len(competitors) >= MAX_COMPETITORS:
            raise CompetitorLimitExceeded(
                f"case {case.case_id} already names {MAX_COMPETITORS} competitors"
            )

    def _live_states(self, case_id: str):
        states = {}
        for card_id in self.journal.card_ids():
            state = self.journal.card_state(card_id)
            if state.status == LIVE and state.case_id == case_id:
                states[card_id] = state
        return states

    def live_cards(self, case_id: str, board: Board | str | None = None) -> list[dict[str, Any]]:
        """Card projections for rendering: Deleted cards are absent."""
        self.get_case(case_id)
        wanted = Board(board) if board is not None else None
        out = []
        for card_id, state in sorted(self._live_states(case_id).items()):
            card_board, box = self._board_box_of(state)
            if wanted is not None and card_board is not wanted:
                continue
            out.append(
                {
                    "card_id": card_id,
                    "board": card_board.value if card_board else None,
                    "box": box,
                    "category": state.category_id,
                    "title": state.title,
                    "description": state.description,
                    "payload": state.payload.to_fields() if state.payload else {},
                }
            )
        return out

    @staticmethod
    def _board_box_of(state) -> tuple[Board | None, str | None]:
        from caseboard.domain.taxonomy import BOX_CATEGORIES

        if state.category_id is None:
            return None, None
        if state.category_id == 19:
            return Board.TASK, state.payload.status.value if state.payload else "Queue"
        for brd, boxes in BOX_CATEGORIES.items():
            for box, cid in boxes.items():
                if cid == state.category_id:
                    return brd, box
        return None, None

    # -- tasks ----------------------------------------------------------------

    def move_task(
        self,
        case_id: str,
        participant_id: str,
        card_id: str,
        to_status: TaskStatus | str,
        *,
        actual_cost: float | None = None,
    ) -> JournalEvent:
        case = self.get_case(case_id)
        self._require_participant(case, participant_id)
        to_status = TaskStatus(to_status)
        state = self.journal.card_state(card_id)
        if state.status != LIVE:
            raise LifecycleViolation(f"card {card_id} is not a live card")
        if state.category_id != 19 or state.payload is None:
            raise UnknownCard(f"card {card_id} is not a task")
        from_status = state.payload.status
        if (from_status, to_status) not in LEGAL_TASK_MOVES:
            raise IllegalTransition(f"cannot move task from {from_status.value} to {to_status.value}")
        fields = state.payload.to_fields()
        fields["status"] = to_status.value
        if to_status is TaskStatus.DONE and actual_cost is not None:
            fields["value"] = float(actual_cost)
            fields["actual_vs_forecast"] = ActualVsForecast.ACTUAL.value
        event = self.journal.append(
            case_id=case_id,
            card_id=card_id,
            category=19,
            action=ActionType.MOVE,
            participant_id=participant_id,
            title=state.title,
            description=state.description,
            payload=make_payload(19, fields),
        )
        self._changed()
        return event

    # -- objectives -------------------------------------------------------------

    def record_objective(
        self,
        case_id: str,
        participant_id: str,
        *,
        objective_category: str,
        objective_type: str,
        actual_vs_forecast: str,
        month: YearMonth | str,
        value: float,
        title: str = "",
        description: str = "",
    ) -> JournalEvent:
        case = self.get_case(case_id)
        self._require_participant(case, participant_id)
        month = YearMonth.of(month)
        if not case.period_start <= month <= case.period_end:
            raise MonthOutsidePeriod(
                f"{month} is outside the case period {case.period_start}..{case.period_end}"
            )
        payload = make_payload(
            17,
            {
                "objective_category": objective_category,
                "objective_type": objective_type,
                "actual_vs_forecast": actual_vs_forecast,
                "month": month,
                "value": float(value),
            },
        )
        event = self.journal.append(
            case_id=case_id,
            card_id=f"{case_id}-card-{next(self._card_seq):06d}",
            category=17,
            action=ActionType.CREATE,
            participant_id=participant_id,
            title=title,
            description=description,
            payload=payload,
        )
        self._changed()
        return event

    # -- customer tests ----------------------------------------------------------

    def run_test(
        self,
        case_id: str,
        participant_id: str,
        test_type: int,
        responses: Iterable[TestResponse],
    ) -> JournalEvent:
        case = self.get_case(case_id)
        self._require_participant(case, participant_id)
        if test_type not in (20, 21):
            raise InvalidEstimate(f"interview tests are categories 20 and 21, got {test_type}")
        responses = list(responses)
        ratings: list[int] = []
        customer_added = False
        for response in responses:
            response.validate()
            ratings.extend(int(r) for r in response.ratings.values())
            customer_added = customer_added or bool(response.added_items)
        if not ratings:
            raise EmptyResponses("test run contains no ratings")
        average = sum(ratings) / len(ratings)
        box = "Problem Worth Solving?" if test_type == 20 else "Solve the Problem?"
        payload = TestScorePayload(average_score=average, customer_added=customer_added)
        event = self.journal.append(
            case_id=case_id,
            card_id=f"{case_id}-card-{next(self._card_seq):06d}",
            category=test_type,
            action=ActionType.CREATE,
            participant_id=participant_id,
            title=box,
            payload=payload,
        )
        self._changed()
        return event

    def compute_market_size(
        self,
        case_id: str,
        participant_id: str,
        estimates: Iterable[MarketEstimate],
    ) -> list[MarketSizeResult]:
        case = self.get_case(case_id)
        self._require_participant(case, participant_id)
        results = []
        estimates = list(estimates)
        for estimate in estimates:
            estimate.validate()
        for estimate in estimates:
            low, high = market_revenue_bounds(estimate)
            payload = MarketSizePayload(
                customers_low=estimate.customers_low,
                customers_high=estimate.customers_high,
                share_low=estimate.share_low,
                share_high=estimate.share_high,
                value_per_customer_low=estimate.value_low,
                value_per_customer_high=estimate.value_high,
            )
            event = self.journal.append(
                case_id=case_id,
                card_id=f"{case_id}-card-{next(self._card_seq):06d}",
                category=22,
                action=ActionType.CREATE,
                participant_id=participant_id,
                title=estimate.market_name,
                payload=payload,
            )
            results.append(
                MarketSizeResult(
                    market_name=estimate.market_name,
                    revenue_min=low,
                    revenue_max=high,
                    event=event,
                )
            )
        self._changed()
        return results

    # -- forecasting ---------------------------------------------------------------

    def roll_forecast(self, case_id: str, clock_month: YearMonth | str) -> Case:
        """Extend a rolling case by one month per elapsed month boundary."""
        case = self.get_case(case_id)
        clock_month = YearMonth.of(clock_month)
        if not case.settings.rolling:
            return case
        boundaries = months_between(case.last_roll, clock_month)
        if boundaries <= 0:
            return case
        for _ in range(boundaries):
            case.period_end = case.period_end.plus(1)
            self.journal.append(
                case_id=case_id,
                card_id=case.settings_object_id,
                category=2,
                action=ActionType.UPDATE,
                title=case.title,
                payload=self._settings_payload(case.settings),
            )
        case.last_roll = clock_month
        self._changed()
        return case

    def compute_overview(
        self, case_id: str, clock_month: YearMonth | str | None = None
    ) -> Overview:
        """Monthly P&L forecast plus the end-of-month worklists.

        Revenue per month sums live Money-objective values (a card updated
        from Forecast to Actual carries the actual). One-off task costs hit
        their month once; Monthly tasks accrue from their month through the
        period end. net = revenue - cost, exactly.
        """
        case = self.get_case(case_id)
        clock = YearMonth.of(clock_month) if clock_month else YearMonth.of(utc_now())
        months = month_range(case.period_start, case.period_end)
        revenue = {m: 0.0 for m in months}
        cost = {m: 0.0 for m in months}
        unfinished: list[str] = []
        objectives: list[str] = []
        for card_id, state in sorted(self._live_states(case_id).items()):
            payload = state.payload
            if state.category_id == 17 and payload is not None:
                if case.period_start <= payload.month <= case.period_end:
                    objectives.append(card_id)
                    if payload.objective_category is ObjectiveCategory.MONEY:
                        revenue[payload.month] += payload.value
            elif state.category_id == 19 and payload is not None:
                if payload.status is not TaskStatus.DONE and payload.month <= clock:
                    unfinished.append(card_id)
                if payload.cost_group is CostGroup.MONTHLY:
                    start = max(payload.month, case.period_start)
                    for m in month_range(start, case.period_end):
                        cost[m] += payload.value
                elif case.period_start <= payload.month <= case.period_end:
                    cost[payload.month] += payload.value
        pnl = {
            m: MonthlyPnl(revenue=revenue[m], cost=cost[m], net=revenue[m] - cost[m])
            for m in months
        }
        return Overview(pnl_forecast=pnl, unfinished_tasks=unfinished, period_objectives=objectives)

    # -- consent ---------------------------------------------------------------------

    def set_consent(self, case_id: str, flag: bool) -> None:
        """Research opt-out; takes effect on the next ETL run, journal unchanged."""
        case = self.get_case(case_id)
        if case.company_link is None:
            raise NoCompanyLink(f"case {case_id} is not linked to a company")
        case.company_link.consent = bool(flag)
        self._changed()

    # -- business ideas -----------------------------------------------------------------

    def save_idea(
        self,
        case_id: str,
        participant_id: str,
        *,
        title: str,
        contribution_cards: Iterable[str] = (),
        market_cards: Iterable[str] = (),
        distinction_cards: Iterable[str] = (),
        idea_id: str | None = None,
    ) -> tuple[BusinessIdea, IdeaValidation, JournalEvent]:
        """Create or update an idea card and its component-card links."""
        case = self.get_case(case_id)
        self._require_participant(case, participant_id)
        is_update = idea_id is not None and idea_id in case.ideas
        if idea_id is None:
            idea_id = f"{case_id}-idea-{next(self._card_seq):06d}"
        idea = BusinessIdea(
            idea_id=idea_id,
            title=title,
            contribution_cards=frozenset(contribution_cards),
            market_cards=frozenset(market_cards),
            distinction_cards=frozenset(distinction_cards),
        )
        expected = dict(zip(IDEA_COMPONENT_BOXES, (7, 8, 9)))
        for box, cards in idea.component_sets().items():
            for ref in cards:
                state = self.journal.card_state(ref)
                if state.status != LIVE or state.case_id != case_id:
                    raise InvalidIdea(f"idea references {ref}, which is not a live card of this case")
                if state.category_id != expected[box]:
                    raise InvalidIdea(f"card {ref} is not in the {box} box")
        event = self.journal.append(
            case_id=case_id,
            card_id=idea_id,
            category=6,
            action=ActionType.UPDATE if is_update else ActionType.CREATE,
            participant_id=participant_id,
            title=title,
        )
        case.ideas[idea_id] = idea
        self._changed()
        return idea, validate_business_idea(idea), event

    def ideas_of_card(self, case_id: str, card_id: str) -> list[BusinessIdea]:
        case = self.get_case(case_id)
        return [
            idea
            for idea in case.ideas.values()
            if card_id in idea.all_cards() or card_id == idea.idea_id
        ]

    # -- events feed -----------------------------------------------------------------------

    def case_events(self, case_id: str, since: int = 0, limit: int | None = None) -> list[JournalEvent]:
        self.get_case(case_id)
        events = [e for e in self.journal.read_since(since) if e.case_id == case_id]
        return events if limit is None else events[:limit]

    def _changed(self) -> None:
        if self._on_change is not None:
            self._on_change(self)
