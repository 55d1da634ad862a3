"""Cards, business ideas, case settings and participants.

Pure immutable values; nothing here touches storage.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from caseboard.domain.payloads import (
    CanvasModel,
    CaseRole,
    ParticipantType,
    Payload,
)
from caseboard.domain.taxonomy import Board, classify
from caseboard.errors import InvalidSettings

VALID_PERIODS = (3, 6, 9, 12)

# Box names of the Business Idea board that an idea draws its components from.
IDEA_COMPONENT_BOXES = ("Key Contribution", "Key Market", "Distinction")


class Lifecycle(str, Enum):
    LIVE = "Live"
    DELETED = "Deleted"


@dataclass(frozen=True)
class Card:
    card_id: str
    case_id: str
    board: Board
    box: str
    title: str
    description: str
    payload: Payload
    lifecycle: Lifecycle = Lifecycle.LIVE

    def __post_init__(self) -> None:
        classify(self.board, self.box)  # raises UnknownBox for undefined pairs

    @property
    def category_id(self) -> int:
        return classify(self.board, self.box).id

    def deleted(self) -> "Card":
        return replace(self, lifecycle=Lifecycle.DELETED)


@dataclass(frozen=True)
class BusinessIdea:
    """An idea links cards from the three Business Idea boxes; a card may sit
    in many ideas and an idea may hold many cards."""

    idea_id: str
    title: str
    contribution_cards: frozenset[str] = frozenset()
    market_cards: frozenset[str] = frozenset()
    distinction_cards: frozenset[str] = frozenset()

    def component_sets(self) -> dict[str, frozenset[str]]:
        return {
            IDEA_COMPONENT_BOXES[0]: self.contribution_cards,
            IDEA_COMPONENT_BOXES[1]: self.market_cards,
            IDEA_COMPONENT_BOXES[2]: self.distinction_cards,
        }

    def all_cards(self) -> frozenset[str]:
        return self.contribution_cards | self.market_cards | self.distinction_cards


@dataclass(frozen=True)
class IdeaValidation:
    valid: bool
    missing_boxes: tuple[str, ...] = ()


def validate_business_idea(idea: BusinessIdea) -> IdeaValidation:
    """An idea is valid iff each of its three component boxes is non-empty."""
    missing = tuple(
        box for box, cards in idea.component_sets().items() if not cards
    )
    return IdeaValidation(valid=not missing, missing_boxes=missing)


@dataclass(frozen=True)
class CaseSettings:
    period_months: int
    rolling: bool
    canvas_model: CanvasModel
    template_id: str | None = None
    relates_to_whole_company: bool = True

    def validate(self) -> None:
        if self.period_months not in VALID_PERIODS:
            raise InvalidSettings(
                f"period must be one of {VALID_PERIODS} months, got {self.period_months}"
            )


@dataclass(frozen=True)
class Participant:
    participant_id: str
    name: str
    case_role: CaseRole
    participant_type: ParticipantType
    internal: bool = True
