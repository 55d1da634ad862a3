"""Query and export the warehouse from the command line."""

from __future__ import annotations

import argparse
import sys

from caseboard.domain.taxonomy import CATEGORY_BY_ID
from caseboard.errors import CaseboardError
from caseboard.warehouse.analytics import (
    ALL_ACTIONS,
    aggregate_category_action,
    aggregate_monthly,
    events_per_case,
    grand_total,
    join_financials,
    load_group_map,
    load_weights,
    nonzero_categories,
    success_score,
)
from caseboard.warehouse.export import export
from caseboard.warehouse.store import WarehouseStore


def _report(store: WarehouseStore, by: str) -> None:
    if by == "category-action":
        table = aggregate_category_action(store)
        print(f"{'id':>3}  {'category':<28} {'Create':>8} {'Update':>8} {'Delete':>8} {'Move':>8} {'total':>8}")
        for category_id in nonzero_categories(table):
            counts = [table[(category_id, action)] for action in ALL_ACTIONS]
            name = CATEGORY_BY_ID[category_id].name
            print(
                f"{category_id:>3}  {name:<28} "
                + " ".join(f"{n:>8}" for n in counts)
                + f" {sum(counts):>8}"
            )
        print(f"{'':>3}  {'total':<28} {'':>8} {'':>8} {'':>8} {'':>8} {grand_total(table):>8}")
    else:
        monthly = aggregate_monthly(store)
        for month, count in monthly.items():
            print(f"{month}  {count:>8}")
        print(f"total    {sum(monthly.values()):>8}")
        try:
            stats = events_per_case(store)
        except CaseboardError:
            return
        print(f"cases    {len(stats.per_case):>8}")
        print(f"mean events per case  {stats.mean:.2f}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="warehouse", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--db", default="warehouse.db", help="warehouse database path")
    sub = parser.add_subparsers(dest="command", required=True)

    report = sub.add_parser("report", parents=[common], help="print an aggregate report")
    report.add_argument("--by", choices=["category-action", "month"], required=True)

    exp = sub.add_parser("export", parents=[common], help="write an export file")
    exp.add_argument("--format", choices=["record-lines", "aggregate-table"], required=True)
    exp.add_argument("--out", required=True)

    score = sub.add_parser("score", parents=[common], help="success score for one case")
    score.add_argument("--case", required=True)
    score.add_argument("--group-map", help="file with one `NAME = id, id, ...` per line")
    score.add_argument("--weights", help="file with one `NAME = weight` per line")

    join = sub.add_parser(
        "join-financials", parents=[common], help="score-vs-financials rows for one case"
    )
    join.add_argument("--case", required=True)

    args = parser.parse_args(argv)

    try:
        with WarehouseStore(args.db) as store:
            if args.command == "report":
                _report(store, args.by)
            elif args.command == "export":
                path = export(store, args.format, args.out)
                print(f"wrote {path}")
            elif args.command == "score":
                group_map = load_group_map(args.group_map) if args.group_map else None
                weights = load_weights(args.weights) if args.weights else None
                result = success_score(store, args.case, group_map, weights)
                for name in sorted(result.delta_counts):
                    print(
                        f"{name}: count={result.delta_counts[name]} "
                        f"weight={result.weights[name]}"
                    )
                print(f"s_value = {result.s_value}")
            elif args.command == "join-financials":
                rows = join_financials(store, args.case)
                print(f"{'year':>6} {'s_through_year':>14} {'revenue':>14} {'profit_loss':>14} {'employees':>10}")
                for year, row in rows.items():
                    def cell(key: str, width: int) -> str:
                        value = row[key]
                        return f"{'':>{width}}" if value is None else f"{value:>{width}}"

                    print(
                        f"{year:>6} {row['s_value_through_year']:>14} "
                        + cell("revenue", 14)
                        + " "
                        + cell("profit_loss", 14)
                        + " "
                        + cell("employees", 10)
                    )
    except (CaseboardError, ValueError, OSError) as exc:
        code = getattr(exc, "code", "error")
        print(f"{code}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
