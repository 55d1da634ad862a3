"""Generate synthetic journals and registry fixtures."""

from __future__ import annotations

import argparse
import sys

from caseboard.errors import CaseboardError
from caseboard.fixtures.journal_gen import generate_journal, load_fixture_spec
from caseboard.fixtures.registry_gen import write_registry_fixture


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="fixtures", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    journal = sub.add_parser("journal", help="generate a journal from a spec file")
    journal.add_argument("--spec", required=True, help="fixture spec file (key = value)")
    journal.add_argument("--out", required=True, help="journal output path")

    registry = sub.add_parser("registry", help="generate a registry fixtures file")
    registry.add_argument("--seed", type=int, required=True)
    registry.add_argument("--companies", type=int, required=True)
    registry.add_argument("--years", type=int, default=None, help="fixed years per company")
    registry.add_argument("--out", required=True)

    args = parser.parse_args(argv)

    try:
        if args.command == "journal":
            summary = generate_journal(load_fixture_spec(args.spec), args.out)
            print(
                f"wrote {summary['events']} events over {summary['cases']} cases "
                f"to {summary['path']}"
            )
        else:
            path = write_registry_fixture(args.seed, args.companies, args.out, args.years)
            print(f"wrote {path}")
    except (CaseboardError, ValueError) as exc:
        code = getattr(exc, "code", "error")
        print(f"{code}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
