from caseboard.fixtures.journal_gen import (
    FixtureSpec,
    TABLE5_CASES,
    TABLE5_COUNTS,
    generate_journal,
    load_fixture_spec,
    parse_fixture_spec,
    table5_spec,
)
from caseboard.fixtures.registry_gen import (
    fixture_org_number,
    generate_registry_fixture,
    write_registry_fixture,
)

__all__ = [
    "FixtureSpec",
    "TABLE5_CASES",
    "TABLE5_COUNTS",
    "fixture_org_number",
    "generate_journal",
    "generate_registry_fixture",
    "load_fixture_spec",
    "parse_fixture_spec",
    "table5_spec",
    "write_registry_fixture",
]
