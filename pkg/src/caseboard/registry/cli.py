"""Serve registry fixtures over HTTP for local development and tests."""

from __future__ import annotations

import argparse


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="mock-registry", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="serve a fixtures file")
    serve.add_argument("--fixtures", required=True, help="path to the registry fixtures JSON")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8001)

    args = parser.parse_args(argv)

    import uvicorn

    from caseboard.registry.server import create_registry_app

    app = create_registry_app(args.fixtures)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
