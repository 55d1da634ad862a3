from caseboard.domain.canvas import CanvasField, canvas_fields, map_canvas_field
from caseboard.domain.cards import (
    BusinessIdea,
    Card,
    CaseSettings,
    IdeaValidation,
    Lifecycle,
    Participant,
    validate_business_idea,
)
from caseboard.domain.months import YearMonth, month_range, months_between
from caseboard.domain.payloads import (
    ActualVsForecast,
    CanvasModel,
    CaseRole,
    CostGroup,
    GapPolarity,
    MarketSizePayload,
    ObjectiveCategory,
    ObjectivePayload,
    ObjectiveType,
    ParticipantType,
    Payload,
    RegistrationStatus,
    RiskKind,
    RiskLevel,
    SettingsPayload,
    TaskPayload,
    TaskStatus,
    TestScorePayload,
    make_payload,
)
from caseboard.domain.taxonomy import (
    ActionType,
    Board,
    CATEGORIES,
    CATEGORY_BY_ID,
    EventCategory,
    Source,
    classify,
)

__all__ = [
    "ActionType",
    "ActualVsForecast",
    "Board",
    "BusinessIdea",
    "CATEGORIES",
    "CATEGORY_BY_ID",
    "CanvasField",
    "CanvasModel",
    "Card",
    "CaseRole",
    "CaseSettings",
    "CostGroup",
    "EventCategory",
    "GapPolarity",
    "IdeaValidation",
    "Lifecycle",
    "MarketSizePayload",
    "ObjectiveCategory",
    "ObjectivePayload",
    "ObjectiveType",
    "Participant",
    "ParticipantType",
    "Payload",
    "RegistrationStatus",
    "RiskKind",
    "RiskLevel",
    "SettingsPayload",
    "Source",
    "TaskPayload",
    "TaskStatus",
    "TestScorePayload",
    "YearMonth",
    "canvas_fields",
    "classify",
    "make_payload",
    "map_canvas_field",
    "month_range",
    "months_between",
    "validate_business_idea",
]
