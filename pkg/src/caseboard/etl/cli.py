"""Run and inspect the ETL pipeline."""

from __future__ import annotations

import argparse
import json
import sys

from caseboard.errors import CaseboardError
from caseboard.etl.config import load_config
from caseboard.etl.pipeline import rebuild, run, status


def _print_stats(stats) -> None:
    for key, value in stats.as_dict().items():
        print(f"{key}: {value}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="etl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="incremental run from the stored watermark")
    run_parser.add_argument("--config", required=True)

    status_parser = sub.add_parser("status", help="watermark and warehouse counts")
    status_parser.add_argument("--config", required=True)

    rebuild_parser = sub.add_parser(
        "rebuild", help="full re-run from watermark 0 into a fresh warehouse"
    )
    rebuild_parser.add_argument("--config", required=True)

    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
        if args.command == "run":
            _print_stats(run(config))
        elif args.command == "rebuild":
            _print_stats(rebuild(config))
        else:
            print(json.dumps(status(config), indent=2, sort_keys=True))
    except CaseboardError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
