"""Row-wise mapping between the three supported canvas models.

Cases can plan against our lean-business canvas, the Business Model Canvas
or the Lean Canvas; fields that describe the same thing map onto each other
row by row, and fields without a counterpart map to nothing.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from caseboard.domain.payloads import CanvasModel
from caseboard.errors import UnknownField


class CanvasField(NamedTuple):
    model: CanvasModel
    field_name: str


# Columns: (LeanBusiness, BMC, LeanCanvas); None = no counterpart.
CANVAS_ROWS: tuple[tuple[Optional[str], Optional[str], Optional[str]], ...] = (
    ("key contribution", None, "problem"),
    ("key market", "customer segments", "customer segments"),
    ("distinction", None, "unfair advantage"),
    ("early market customers", None, None),
    ("unique value proposition", "value proposition", "unique value proposition"),
    ("product features", None, "solution"),
    ("partners", "key partners", None),
    ("how the startups sell", "channels", "channels"),
    ("how the startups get paid", "revenue streams", "revenue streams"),
    (None, None, "key metrics"),
    (None, "key activities", None),
    (None, "relationships", None),
)

_COLUMN_OF = {
    CanvasModel.LEAN_BUSINESS: 0,
    CanvasModel.BMC: 1,
    CanvasModel.LEAN_CANVAS: 2,
}


def canvas_fields(model: CanvasModel) -> tuple[str, ...]:
    """The closed field vocabulary of one canvas model."""
    col = _COLUMN_OF[CanvasModel(model)]
    return tuple(row[col] for row in CANVAS_ROWS if row[col] is not None)


def map_canvas_field(
    from_model: CanvasModel, field_name: str, to_model: CanvasModel
) -> Optional[CanvasField]:
    """Translate a field between canvas models; None when there is no counterpart.

    Raises UnknownField when field_name is not part of from_model's vocabulary.
    Lookup is case-insensitive; the returned name is canonical.
    """
    from_model = CanvasModel(from_model)
    to_model = CanvasModel(to_model)
    from_col = _COLUMN_OF[from_model]
    to_col = _COLUMN_OF[to_model]
    wanted = field_name.strip().lower()
    for row in CANVAS_ROWS:
        cell = row[from_col]
        if cell is not None and cell == wanted:
            target = row[to_col]
            if target is None:
                return None
            return CanvasField(to_model, target)
    raise UnknownField(f"{from_model.value} has no field {field_name!r}")
