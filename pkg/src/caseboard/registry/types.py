"""Company registry data shapes.

A company has identity fields, a registration status, and one row of annual
figures per accounting year: nine financial measures plus the employee count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from caseboard.domain.payloads import RegistrationStatus

# Warehouse category id -> annual-figure field name.
FINANCIAL_CATEGORIES: dict[int, str] = {
    24: "revenue",
    25: "profit_loss",
    26: "balance_sum",
    27: "return_on_assets",
    28: "profit_loss_percentage",
    29: "return_on_equity",
    30: "current_ratio",
    31: "equity_ratio",
    32: "gearing",
    34: "employees",
}

REGISTERED_CATEGORY = 23
BANKRUPTCY_CATEGORY = 33


@dataclass(frozen=True)
class AnnualFigures:
    year: int
    revenue: float | None = None
    profit_loss: float | None = None
    balance_sum: float | None = None
    return_on_assets: float | None = None
    profit_loss_percentage: float | None = None
    return_on_equity: float | None = None
    current_ratio: float | None = None
    equity_ratio: float | None = None
    gearing: float | None = None
    employees: int | None = None

    def value_for(self, category_id: int) -> float | int | None:
        return getattr(self, FINANCIAL_CATEGORIES[category_id])


@dataclass(frozen=True)
class CompanyRecord:
    organization_number: str
    company_name: str
    country: str = "NO"
    postcode: str | None = None
    nace_code: str | None = None
    status: RegistrationStatus = RegistrationStatus.REGISTERED
    status_year: int | None = None
    annual_figures: tuple[AnnualFigures, ...] = field(default_factory=tuple)


def company_from_dict(doc: dict[str, Any]) -> CompanyRecord:
    figures = tuple(
        AnnualFigures(
            year=int(f["year"]),
            **{
                name: f.get(name)
                for name in FINANCIAL_CATEGORIES.values()
                if name != "year"
            },
        )
        for f in doc.get("annual_figures", ())
    )
    return CompanyRecord(
        organization_number=doc["organization_number"],
        company_name=doc["company_name"],
        country=doc.get("country", "NO"),
        postcode=doc.get("postcode"),
        nace_code=doc.get("nace_code"),
        status=RegistrationStatus(doc.get("status", "Registered")),
        status_year=doc.get("status_year"),
        annual_figures=figures,
    )


def company_to_dict(record: CompanyRecord) -> dict[str, Any]:
    return {
        "organization_number": record.organization_number,
        "company_name": record.company_name,
        "country": record.country,
        "postcode": record.postcode,
        "nace_code": record.nace_code,
        "status": record.status.value,
        "status_year": record.status_year,
        "annual_figures": [
            {"year": f.year, **{name: getattr(f, name) for name in FINANCIAL_CATEGORIES.values()}}
            for f in record.annual_figures
        ],
    }
