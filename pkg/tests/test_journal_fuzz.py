"""Lifecycle fuzzing: the journal's accept/reject decisions against a
reference finite-state oracle.

The oracle is three states per card (unknown, live, deleted) with the
transition table written out long-hand; the journal must agree with it on
every action of every random sequence.
"""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from caseboard.domain.payloads import make_payload
from caseboard.errors import CaseboardError
from caseboard.journal import EventJournal
from tests.conftest import ticking_clock

ACTIONS = ("Create", "Update", "Delete", "Move")

TASK_FIELDS = {
    "cost_group": "One-off",
    "month": "2017-03",
    "actual_vs_forecast": "Forecast",
    "value": 1.0,
    "status": "Queue",
}


def oracle_accepts(state: str, action: str) -> bool:
    """Reference lifecycle automaton, written independently of the journal."""
    if state == "unknown":
        return action == "Create"
    if state == "live":
        return action in ("Update", "Delete", "Move")
    assert state == "deleted"
    return False


def oracle_next(state: str, action: str) -> str:
    assert oracle_accepts(state, action)
    if action == "Create":
        return "live"
    if action == "Delete":
        return "deleted"
    return "live"


def run_sequence(seq: list[tuple[str, str]]) -> None:
    """Replay one multi-card action sequence against journal and oracle."""
    journal = EventJournal(clock=ticking_clock())
    oracle: dict[str, str] = {}
    for card_id, action in seq:
        state = oracle.get(card_id, "unknown")
        expected = oracle_accepts(state, action)
        payload = None if action == "Delete" else make_payload(19, TASK_FIELDS)
        try:
            journal.append(
                case_id="fuzz",
                card_id=card_id,
                category=19,  # tasks, so Move is category-legal
                action=action,
                payload=payload,
            )
            accepted = True
        except CaseboardError:
            accepted = False
        assert accepted == expected, (card_id, action, state)
        if expected:
            oracle[card_id] = oracle_next(state, action)
    # Final journal view agrees with the oracle's surviving states.
    for card_id, state in oracle.items():
        assert journal.card_state(card_id).status == state


@given(
    st.lists(
        st.tuples(st.sampled_from(["a", "b", "c"]), st.sampled_from(ACTIONS)),
        max_size=40,
    )
)
@settings(max_examples=300, deadline=None)
def test_journal_matches_lifecycle_oracle(seq):
    run_sequence(seq)


def test_seeded_bulk_fuzz():
    rng = random.Random(0xCA5E)
    for _ in range(500):
        seq = [
            (rng.choice("abcd"), rng.choice(ACTIONS))
            for _ in range(rng.randint(1, 30))
        ]
        run_sequence(seq)
