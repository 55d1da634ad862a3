"""Per-category payload schemas: field sets, coercion, and value rules."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from caseboard.domain.months import YearMonth
from caseboard.domain.payloads import (
    EmptyPayload,
    MarketSizePayload,
    ObjectivePayload,
    PAYLOAD_FIELDS,
    SettingsPayload,
    TaskStatus,
    TestScorePayload as ScorePayload,
    make_payload,
)
from caseboard.errors import (
    InvalidPayloadValue,
    PayloadMismatch,
    TypeCategoryMismatch,
)

GOOD_FIELDS = {
    1: {"participant_type": "Employee"},
    2: {"canvas_model": "LeanBusiness", "period_months": 12, "rolling": False},
    16: {"polarity": "Strength", "subject_company": "Acme"},
    17: {
        "objective_category": "Money",
        "objective_type": "Revenue",
        "actual_vs_forecast": "Forecast",
        "month": "2017-03",
        "value": 1000.0,
    },
    18: {"kind": "Threat", "probability": "Low", "consequence": "High"},
    19: {
        "cost_group": "Monthly",
        "month": "2017-03",
        "actual_vs_forecast": "Forecast",
        "value": 50.0,
        "status": "Queue",
    },
    20: {"average_score": 4.5, "customer_added": True},
    22: {
        "customers_low": 10,
        "customers_high": 20,
        "share_low": 0.1,
        "share_high": 0.2,
        "value_per_customer_low": 5.0,
        "value_per_customer_high": 9.0,
    },
    24: {"year": 2016, "value": 1.5e6},
    33: {"year": 2017, "status": "Bankrupt"},
}


def test_every_category_has_a_schema():
    assert set(PAYLOAD_FIELDS) == set(range(1, 35))


@pytest.mark.parametrize("category_id", sorted(GOOD_FIELDS))
def test_construct_and_roundtrip(category_id):
    fields = GOOD_FIELDS[category_id]
    payload = make_payload(category_id, fields)
    assert category_id in type(payload).category_ids
    # to_fields flattens enums/months back to the wire values.
    assert make_payload(category_id, payload.to_fields()) == payload


def test_empty_payload_covers_plain_card_categories():
    for category_id in range(3, 16):
        assert isinstance(make_payload(category_id, {}), EmptyPayload)


def test_missing_field_rejected():
    with pytest.raises(PayloadMismatch, match="missing"):
        make_payload(16, {"polarity": "Strength"})


def test_unexpected_field_rejected():
    with pytest.raises(PayloadMismatch, match="unexpected"):
        make_payload(3, {"polarity": "Strength"})


def test_unknown_category_rejected():
    with pytest.raises(PayloadMismatch):
        make_payload(35, {})


def test_bad_enum_value_named_in_error():
    fields = dict(GOOD_FIELDS[19], cost_group="Hourly")
    with pytest.raises(InvalidPayloadValue, match="Hourly"):
        make_payload(19, fields)


def test_month_field_coerces_to_year_month():
    payload = make_payload(19, GOOD_FIELDS[19])
    assert payload.month == YearMonth(2017, 3)
    assert payload.to_fields()["month"] == "2017-03"


def test_status_field_is_per_category():
    assert make_payload(19, GOOD_FIELDS[19]).status is TaskStatus.QUEUE
    assert make_payload(33, GOOD_FIELDS[33]).status.value == "Bankrupt"
    with pytest.raises(InvalidPayloadValue):
        make_payload(33, {"year": 2017, "status": "Queue"})


def test_settings_period_months_domain():
    for months in (3, 6, 9, 12):
        SettingsPayload(canvas_model="LeanBusiness", period_months=months, rolling=True)
    with pytest.raises(InvalidPayloadValue):
        SettingsPayload(canvas_model="LeanBusiness", period_months=5, rolling=True)


def test_money_objectives_need_money_types():
    with pytest.raises(TypeCategoryMismatch):
        make_payload(17, dict(GOOD_FIELDS[17], objective_type="Milestone"))
    skills = dict(GOOD_FIELDS[17], objective_category="Skills", objective_type="Milestone")
    assert make_payload(17, skills).objective_category.value == "Skills"
    with pytest.raises(TypeCategoryMismatch):
        make_payload(17, dict(skills, objective_type="Loan"))


def test_negative_values_rejected():
    with pytest.raises(InvalidPayloadValue):
        make_payload(17, dict(GOOD_FIELDS[17], value=-1))
    with pytest.raises(InvalidPayloadValue):
        make_payload(19, dict(GOOD_FIELDS[19], value=-0.5))


def test_test_score_range():
    ScorePayload(average_score=1.0, customer_added=False)
    ScorePayload(average_score=7.0, customer_added=False)
    for bad in (0.99, 7.01):
        with pytest.raises(InvalidPayloadValue):
            ScorePayload(average_score=bad, customer_added=False)


@given(
    low=st.integers(min_value=0, max_value=10_000),
    span=st.integers(min_value=0, max_value=10_000),
    share_low=st.floats(min_value=0, max_value=1),
    share_extra=st.floats(min_value=0, max_value=1),
    value_low=st.floats(min_value=0, max_value=1e6),
    value_extra=st.floats(min_value=0, max_value=1e6),
)
def test_market_payload_accepts_all_ordered_inputs(
    low, span, share_low, share_extra, value_low, value_extra
):
    share_high = min(1.0, share_low + share_extra)
    payload = MarketSizePayload(
        customers_low=low,
        customers_high=low + span,
        share_low=share_low,
        share_high=share_high,
        value_per_customer_low=value_low,
        value_per_customer_high=value_low + value_extra,
    )
    assert payload.customers_low <= payload.customers_high


def test_market_payload_rejects_inverted_and_overflowing():
    base = GOOD_FIELDS[22]
    with pytest.raises(InvalidPayloadValue):
        make_payload(22, dict(base, customers_low=30))
    with pytest.raises(InvalidPayloadValue):
        make_payload(22, dict(base, share_high=1.2))
    with pytest.raises(InvalidPayloadValue):
        make_payload(22, dict(base, customers_low=-1, customers_high=5))
