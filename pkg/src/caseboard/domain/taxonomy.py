"""The fixed 34-category event taxonomy and the board/box classification.

Every event in the system belongs to exactly one of 34 categories. Categories
1-22 originate on the platform (admin objects, the seven planning boards and
the three customer-test surfaces); categories 23-34 are yearly facts merged
from the company registry.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from caseboard.errors import UnknownBox


class Source(str, Enum):
    ADM = "ADM"
    RES = "RES"
    BI = "BI"
    BM = "BM"
    GAP = "GAP"
    OBJ = "OBJ"
    RISK = "RISK"
    TASK = "TASK"
    TEST = "TEST"
    PROFF = "PROFF"


class ActionType(str, Enum):
    CREATE = "Create"
    UPDATE = "Update"
    DELETE = "Delete"
    MOVE = "Move"


class Board(str, Enum):
    """Card surfaces: the seven planning boards plus the customer-test surface.

    `TEST` is not a user board; it hosts the three customer-test features so
    that every platform category is reachable from a (board, box) pair.
    """

    RESOURCE = "Resource"
    BUSINESS_IDEA = "BusinessIdea"
    BUSINESS_MODEL = "BusinessModel"
    GAP = "Gap"
    OBJECTIVES = "Objectives"
    RISK = "Risk"
    TASK = "Task"
    TEST = "Test"


PLANNING_BOARDS = (
    Board.RESOURCE,
    Board.BUSINESS_IDEA,
    Board.BUSINESS_MODEL,
    Board.GAP,
    Board.OBJECTIVES,
    Board.RISK,
    Board.TASK,
)


@dataclass(frozen=True)
class EventCategory:
    id: int
    source: Source
    name: str


CATEGORIES: tuple[EventCategory, ...] = (
    EventCategory(1, Source.ADM, "Participants"),
    EventCategory(2, Source.ADM, "Case Settings"),
    EventCategory(3, Source.RES, "Values"),
    EventCategory(4, Source.RES, "Vision"),
    EventCategory(5, Source.RES, "Owner's Objectives"),
    EventCategory(6, Source.BI, "Business Idea"),
    EventCategory(7, Source.BI, "Key Contribution"),
    EventCategory(8, Source.BI, "Key Market"),
    EventCategory(9, Source.BI, "Distinction"),
    EventCategory(10, Source.BM, "Early Market Customer"),
    EventCategory(11, Source.BM, "Unique Value Proposition"),
    EventCategory(12, Source.BM, "Product Feature"),
    EventCategory(13, Source.BM, "Partner"),
    EventCategory(14, Source.BM, "How to Sell"),
    EventCategory(15, Source.BM, "How to Get Paid"),
    EventCategory(16, Source.GAP, "Strength & Weaknesses"),
    EventCategory(17, Source.OBJ, "Objectives"),
    EventCategory(18, Source.RISK, "Opportunities & Threats"),
    EventCategory(19, Source.TASK, "Task"),
    EventCategory(20, Source.TEST, "Problem Worth Solving?"),
    EventCategory(21, Source.TEST, "Solve the Problem?"),
    EventCategory(22, Source.TEST, "Market Big Enough?"),
    EventCategory(23, Source.PROFF, "Registration"),
    EventCategory(24, Source.PROFF, "Revenue"),
    EventCategory(25, Source.PROFF, "Profit & Loss"),
    EventCategory(26, Source.PROFF, "Balance Sum"),
    EventCategory(27, Source.PROFF, "Return On Assets"),
    EventCategory(28, Source.PROFF, "Profit & Loss Percentage"),
    EventCategory(29, Source.PROFF, "Return on Equity"),
    EventCategory(30, Source.PROFF, "Current Ratio"),
    EventCategory(31, Source.PROFF, "Equity Ratio"),
    EventCategory(32, Source.PROFF, "Gearing"),
    EventCategory(33, Source.PROFF, "Registration or Bankruptcy"),
    EventCategory(34, Source.PROFF, "Number of Employees"),
)

CATEGORY_BY_ID: dict[int, EventCategory] = {c.id: c for c in CATEGORIES}

TASK_CATEGORY_ID = 19
PLATFORM_CATEGORY_IDS = tuple(range(1, 23))
REGISTRY_CATEGORY_IDS = tuple(range(23, 35))

# Closed box vocabulary. Task's kanban columns all classify as Task; every
# other box maps to its own category.
BOX_CATEGORIES: dict[Board, dict[str, int]] = {
    Board.RESOURCE: {
        "Values": 3,
        "Vision": 4,
        "Owner's Objectives": 5,
    },
    Board.BUSINESS_IDEA: {
        "Business Idea": 6,
        "Key Contribution": 7,
        "Key Market": 8,
        "Distinction": 9,
    },
    Board.BUSINESS_MODEL: {
        "Early Market Customer": 10,
        "Unique Value Proposition": 11,
        "Product Feature": 12,
        "Partner": 13,
        "How to Sell": 14,
        "How to Get Paid": 15,
    },
    Board.GAP: {
        "Strength & Weaknesses": 16,
    },
    Board.OBJECTIVES: {
        "Objectives": 17,
    },
    Board.RISK: {
        "Opportunities & Threats": 18,
    },
    Board.TASK: {
        "Queue": 19,
        "Active": 19,
        "Done": 19,
    },
    Board.TEST: {
        "Problem Worth Solving?": 20,
        "Solve the Problem?": 21,
        "Market Big Enough?": 22,
    },
}


def classify(board: Board | str, box: str) -> EventCategory:
    """Resolve the unique event category of a (board, box) pair."""
    try:
        board = Board(board)
    except ValueError:
        raise UnknownBox(f"unknown board: {board!r}") from None
    boxes = BOX_CATEGORIES[board]
    if box not in boxes:
        raise UnknownBox(f"board {board.value} has no box {box!r}")
    return CATEGORY_BY_ID[boxes[box]]


def boxes_for(board: Board) -> tuple[str, ...]:
    return tuple(BOX_CATEGORIES[Board(board)])


def all_board_box_pairs() -> list[tuple[Board, str]]:
    return [(board, box) for board, boxes in BOX_CATEGORIES.items() for box in boxes]
