"""Deterministic registry fixtures.

Each company gets a 9-digit organization number, identity fields, a
registration status, and up to five years of annual figures ending 2017,
with a random subset of value fields present per year. Company 0 is the
fully-populated anchor: five years, every field, so counting oracles have
one completely known company to check against.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

MAX_YEARS = 5
LAST_YEAR = 2017

VALUE_FIELDS = (
    "revenue",
    "profit_loss",
    "balance_sum",
    "return_on_assets",
    "profit_loss_percentage",
    "return_on_equity",
    "current_ratio",
    "equity_ratio",
    "gearing",
    "employees",
)

_NAME_STEMS = (
    "Fjord", "Delta", "Nordic", "Polar", "Bergen", "Viking", "Summit", "Aurora",
    "Coastal", "Granite", "Cedar", "Harbor", "Meridian", "Juniper", "Basalt", "Atlas",
)
_NAME_SUFFIXES = ("Systems", "Foods", "Energi", "Consult", "Media", "Logistics", "Labs", "AS")


def fixture_org_number(seed: int, index: int) -> str:
    """Stable 9-digit number; distinct per index for any fixed seed."""
    return str(900_000_000 + ((seed % 997) * 99_991 + index * 7_919) % 100_000_000)


def _draw_value(rng: random.Random, field: str) -> float | int:
    if field == "employees":
        return rng.randint(0, 250)
    if field == "revenue":
        return round(rng.uniform(1e5, 5e7), 2)
    if field == "profit_loss":
        return round(rng.uniform(-5e6, 1e7), 2)
    if field == "balance_sum":
        return round(rng.uniform(1e5, 1e8), 2)
    if field == "current_ratio":
        return round(rng.uniform(0.1, 5.0), 2)
    if field == "gearing":
        return round(rng.uniform(0.0, 10.0), 2)
    return round(rng.uniform(-100.0, 150.0), 1)


def generate_registry_fixture(
    seed: int, companies: int, years: int | None = None
) -> dict:
    """Fixture document; `years` fixes the span per company, None draws 1-5."""
    if companies < 1:
        raise ValueError("companies must be >= 1")
    if years is not None and not 1 <= years <= MAX_YEARS:
        raise ValueError(f"years must be in 1..{MAX_YEARS}")
    rng = random.Random(seed)
    docs = []
    for index in range(companies):
        org = fixture_org_number(seed, index)
        if index == 0:
            span = MAX_YEARS if years is None else years
        else:
            span = years if years is not None else rng.randint(1, MAX_YEARS)
        figures = []
        for year in range(LAST_YEAR - span + 1, LAST_YEAR + 1):
            if index == 0:
                present = VALUE_FIELDS
            else:
                present = tuple(
                    sorted(rng.sample(VALUE_FIELDS, rng.randint(0, len(VALUE_FIELDS))))
                )
            row: dict = {"year": year}
            for field in VALUE_FIELDS:
                row[field] = _draw_value(rng, field) if field in present else None
            figures.append(row)
        bankrupt = index != 0 and rng.random() < 0.1
        docs.append(
            {
                "organization_number": org,
                "company_name": f"{rng.choice(_NAME_STEMS)} {rng.choice(_NAME_SUFFIXES)} {index:03d}",
                "country": "NO",
                "postcode": f"{rng.randint(1000, 9999)}",
                "nace_code": f"{rng.randint(10, 99)}.{rng.randint(100, 999)}",
                "status": "Bankrupt" if bankrupt else "Registered",
                "status_year": LAST_YEAR,
                "annual_figures": figures,
            }
        )
    return {"companies": docs}


def write_registry_fixture(
    seed: int, companies: int, out_path: str | Path, years: int | None = None
) -> Path:
    doc = generate_registry_fixture(seed, companies, years)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return out_path
