"""Exception hierarchy shared across the package.

Every error carries a stable ``code`` string; the HTTP layer surfaces it
verbatim in ``{code, message}`` error bodies, so codes are part of the
public contract and must stay distinct per failure mode.
"""


class CaseboardError(Exception):
    code = "error"


# domain
class UnknownBox(CaseboardError):
    code = "unknown_box"


class UnknownField(CaseboardError):
    code = "unknown_field"


class PayloadMismatch(CaseboardError):
    """Payload field set does not match the event category."""

    code = "payload_mismatch"


class InvalidPayloadValue(CaseboardError):
    code = "invalid_payload_value"


class TypeCategoryMismatch(CaseboardError):
    code = "type_category_mismatch"


class InvalidSettings(CaseboardError):
    code = "invalid_settings"


# journal
class LifecycleViolation(CaseboardError):
    code = "lifecycle_violation"


class CategoryMismatch(CaseboardError):
    """Move action on a non-Task category."""

    code = "category_mismatch"


# platform
class UnknownCase(CaseboardError):
    code = "unknown_case"


class UnknownCard(CaseboardError):
    code = "unknown_card"


class ForeignParticipant(CaseboardError):
    code = "foreign_participant"


class IllegalTransition(CaseboardError):
    code = "illegal_transition"


class MonthOutsidePeriod(CaseboardError):
    code = "month_outside_period"


class EmptyResponses(CaseboardError):
    code = "empty_responses"


class RatingOutOfRange(CaseboardError):
    code = "rating_out_of_range"


class InvalidEstimate(CaseboardError):
    code = "invalid_estimate"


class NoCompanyLink(CaseboardError):
    code = "no_company_link"


class CompetitorLimitExceeded(CaseboardError):
    code = "competitor_limit_exceeded"


class NoFinancials(CaseboardError):
    """Case has no linked company with registry data to join against."""

    code = "no_financials"


class InvalidIdea(CaseboardError):
    code = "invalid_idea"


# registry
class InvalidOrgNumber(CaseboardError):
    code = "invalid_org_number"


class NotFound(CaseboardError):
    code = "not_found"


class RegistryUnavailable(CaseboardError):
    code = "registry_unavailable"


# etl / warehouse
class SourceUnavailable(CaseboardError):
    code = "source_unavailable"


class SinkUnavailable(CaseboardError):
    code = "sink_unavailable"


class OrphanEvent(CaseboardError):
    code = "orphan_event"


class EmptyWarehouse(CaseboardError):
    code = "empty_warehouse"


class DestinationUnwritable(CaseboardError):
    code = "destination_unwritable"


# fixtures
class InfeasibleCounts(CaseboardError):
    code = "infeasible_counts"
