"""Category-specific payload schemas.

Each event category carries a fixed field set. Construction goes through
:func:`make_payload`, which rejects any field/category mismatch; value rules
(enum membership, ranges, low<=high pairs, objective type consistency) are
enforced by the payload classes themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, fields as dc_fields
from enum import Enum
from typing import Any, ClassVar, Mapping

from caseboard.domain.months import YearMonth
from caseboard.errors import (
    InvalidPayloadValue,
    PayloadMismatch,
    TypeCategoryMismatch,
)


class ParticipantType(str, Enum):
    PARTNER = "Partner"
    EMPLOYEE = "Employee"


class CaseRole(str, Enum):
    ENTREPRENEUR = "Entrepreneur"
    ENABLER = "Enabler"
    EDUCATOR = "Educator"


class CanvasModel(str, Enum):
    LEAN_BUSINESS = "LeanBusiness"
    BMC = "BMC"
    LEAN_CANVAS = "LeanCanvas"


class GapPolarity(str, Enum):
    STRENGTH = "Strength"
    WEAKNESS = "Weakness"


class ObjectiveCategory(str, Enum):
    SKILLS = "Skills"
    PRODUCT_MARKET = "ProductMarket"
    MONEY = "Money"


class ObjectiveType(str, Enum):
    MILESTONE = "Milestone"
    NUMERICAL = "Numerical"
    REVENUE = "Revenue"
    LOAN = "Loan"
    EQUITY = "Equity"
    GRANT = "Grant"


MONEY_OBJECTIVE_TYPES = frozenset(
    {ObjectiveType.REVENUE, ObjectiveType.LOAN, ObjectiveType.EQUITY, ObjectiveType.GRANT}
)
NON_MONEY_OBJECTIVE_TYPES = frozenset({ObjectiveType.MILESTONE, ObjectiveType.NUMERICAL})


class ActualVsForecast(str, Enum):
    ACTUAL = "Actual"
    FORECAST = "Forecast"


class RiskKind(str, Enum):
    OPPORTUNITY = "Opportunity"
    THREAT = "Threat"


class RiskLevel(str, Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class TaskStatus(str, Enum):
    QUEUE = "Queue"
    ACTIVE = "Active"
    DONE = "Done"


class CostGroup(str, Enum):
    """Task cost recurrence: a monthly task accrues its cost every month."""

    MONTHLY = "Monthly"
    ONE_OFF = "One-off"


class RegistrationStatus(str, Enum):
    REGISTERED = "Registered"
    BANKRUPT = "Bankrupt"


class Payload:
    """Base for all category payloads; subclasses declare their categories."""

    category_ids: ClassVar[tuple[int, ...]] = ()

    def to_fields(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in dc_fields(self):  # type: ignore[arg-type]
            value = getattr(self, f.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, YearMonth):
                value = str(value)
            out[f.name] = value
        return out


@dataclass(frozen=True)
class EmptyPayload(Payload):
    """Categories 3-15 carry only the common title/description fields."""

    category_ids: ClassVar[tuple[int, ...]] = tuple(range(3, 16))


@dataclass(frozen=True)
class ParticipantPayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = (1,)

    participant_type: ParticipantType


@dataclass(frozen=True)
class SettingsPayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = (2,)

    canvas_model: CanvasModel
    period_months: int
    rolling: bool

    def __post_init__(self) -> None:
        if self.period_months not in (3, 6, 9, 12):
            raise InvalidPayloadValue(f"period_months must be 3, 6, 9 or 12, got {self.period_months}")


@dataclass(frozen=True)
class GapPayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = (16,)

    polarity: GapPolarity
    subject_company: str


@dataclass(frozen=True)
class ObjectivePayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = (17,)

    objective_category: ObjectiveCategory
    objective_type: ObjectiveType
    actual_vs_forecast: ActualVsForecast
    month: YearMonth
    value: float

    def __post_init__(self) -> None:
        allowed = (
            MONEY_OBJECTIVE_TYPES
            if self.objective_category is ObjectiveCategory.MONEY
            else NON_MONEY_OBJECTIVE_TYPES
        )
        if self.objective_type not in allowed:
            raise TypeCategoryMismatch(
                f"{self.objective_type.value} objective is not valid for "
                f"category {self.objective_category.value}"
            )
        if self.value < 0:
            raise InvalidPayloadValue("objective value must be non-negative")


@dataclass(frozen=True)
class RiskPayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = (18,)

    kind: RiskKind
    probability: RiskLevel
    consequence: RiskLevel


@dataclass(frozen=True)
class TaskPayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = (19,)

    cost_group: CostGroup
    month: YearMonth
    actual_vs_forecast: ActualVsForecast
    value: float
    status: TaskStatus

    def __post_init__(self) -> None:
        if self.value < 0:
            raise InvalidPayloadValue("task value must be non-negative")


@dataclass(frozen=True)
class TestScorePayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = (20, 21)

    average_score: float
    customer_added: bool

    def __post_init__(self) -> None:
        if not 1.0 <= self.average_score <= 7.0:
            raise InvalidPayloadValue(f"average_score must be in [1, 7], got {self.average_score}")


@dataclass(frozen=True)
class MarketSizePayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = (22,)

    customers_low: int
    customers_high: int
    share_low: float
    share_high: float
    value_per_customer_low: float
    value_per_customer_high: float

    def __post_init__(self) -> None:
        for low_name, high_name in (
            ("customers_low", "customers_high"),
            ("share_low", "share_high"),
            ("value_per_customer_low", "value_per_customer_high"),
        ):
            low, high = getattr(self, low_name), getattr(self, high_name)
            if low < 0:
                raise InvalidPayloadValue(f"{low_name} must be non-negative")
            if low > high:
                raise InvalidPayloadValue(f"{low_name} > {high_name}")
        if self.share_high > 1.0:
            raise InvalidPayloadValue("market share must be a fraction in [0, 1]")


@dataclass(frozen=True)
class RegistryStatusPayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = (23, 33)

    year: int
    status: RegistrationStatus


@dataclass(frozen=True)
class RegistryValuePayload(Payload):
    category_ids: ClassVar[tuple[int, ...]] = tuple(range(24, 33)) + (34,)

    year: int
    value: float


_PAYLOAD_CLASSES: tuple[type[Payload], ...] = (
    ParticipantPayload,
    SettingsPayload,
    EmptyPayload,
    GapPayload,
    ObjectivePayload,
    RiskPayload,
    TaskPayload,
    TestScorePayload,
    MarketSizePayload,
    RegistryStatusPayload,
    RegistryValuePayload,
)

PAYLOAD_CLASS_BY_CATEGORY: dict[int, type[Payload]] = {
    cid: cls for cls in _PAYLOAD_CLASSES for cid in cls.category_ids
}

PAYLOAD_FIELDS: dict[int, tuple[str, ...]] = {
    cid: tuple(f.name for f in dc_fields(cls))  # type: ignore[arg-type]
    for cid, cls in PAYLOAD_CLASS_BY_CATEGORY.items()
}

_ENUM_FIELDS = {
    "participant_type": ParticipantType,
    "canvas_model": CanvasModel,
    "polarity": GapPolarity,
    "objective_category": ObjectiveCategory,
    "objective_type": ObjectiveType,
    "actual_vs_forecast": ActualVsForecast,
    "kind": RiskKind,
    "probability": RiskLevel,
    "consequence": RiskLevel,
    "cost_group": CostGroup,
}


def _coerce(category_id: int, name: str, value: Any) -> Any:
    """Map JSON-ish primitives onto the payload's value types."""
    if name == "month":
        return YearMonth.of(value)
    if name == "status":
        enum_cls = TaskStatus if category_id == 19 else RegistrationStatus
        return _to_enum(enum_cls, value)
    enum_cls = _ENUM_FIELDS.get(name)
    if enum_cls is not None:
        return _to_enum(enum_cls, value)
    return value


def _to_enum(enum_cls: type[Enum], value: Any) -> Enum:
    try:
        return enum_cls(value)
    except ValueError:
        raise InvalidPayloadValue(
            f"{value!r} is not a valid {enum_cls.__name__}"
        ) from None


def make_payload(category_id: int, fields: Mapping[str, Any] | None = None) -> Payload:
    """Build and validate the payload for a category from a plain field map.

    Raises PayloadMismatch when the field set differs from the category's
    schema in either direction.
    """
    cls = PAYLOAD_CLASS_BY_CATEGORY.get(category_id)
    if cls is None:
        raise PayloadMismatch(f"no payload schema for category {category_id}")
    fields = dict(fields or {})
    expected = set(PAYLOAD_FIELDS[category_id])
    given = set(fields)
    if given != expected:
        extra = sorted(given - expected)
        missing = sorted(expected - given)
        parts = []
        if extra:
            parts.append(f"unexpected fields {extra}")
        if missing:
            parts.append(f"missing fields {missing}")
        raise PayloadMismatch(f"category {category_id}: " + "; ".join(parts))
    coerced = {name: _coerce(category_id, name, value) for name, value in fields.items()}
    try:
        return cls(**coerced)
    except TypeError as exc:
        raise InvalidPayloadValue(str(exc)) from None
