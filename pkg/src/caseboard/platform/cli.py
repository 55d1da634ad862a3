"""Run the platform HTTP API backed by a journal file."""

from __future__ import annotations

import argparse
from pathlib import Path

from caseboard.journal import EventJournal
from caseboard.platform.api import create_app
from caseboard.platform.service import PlatformService
from caseboard.platform.state import attach_persistence


def build_service(journal_path: str | Path) -> PlatformService:
    journal_path = Path(journal_path)
    journal_path.parent.mkdir(parents=True, exist_ok=True)
    journal = EventJournal(journal_path)
    service = PlatformService(journal)
    attach_persistence(service, journal_path.with_name("cases.json"))
    return service


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="caseboard-api", description=__doc__)
    parser.add_argument("--journal", required=True, help="path to the NDJSON journal file")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args(argv)

    import uvicorn

    app = create_app(build_service(args.journal))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
