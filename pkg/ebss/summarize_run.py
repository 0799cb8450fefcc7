"""
ebss/summarize_run.py

Reads the SQLite DB from a completed benchmark run and prints basic diagnostics:
run metadata, record counts by status, per-instance lines and the aggregate table.

Usage:
  python -m ebss.summarize_run out/<run_id>/runs.db [--run-id <run_id>]
"""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Optional

from ebss.db import RunDB
from ebss.report import emit_table


def summarize(db_path: Path, run_id: Optional[str] = None) -> str:
    lines = []
    with RunDB(str(db_path)) as db:
        run_id = run_id or db.get_latest_run_id()
        run = db.get_run(run_id)
        records = db.load_records(run_id)

    lines.append("Run metadata")
    lines.append(f"  run_id    : {run['run_id']}")
    lines.append(f"  created   : {run['created_at_utc']}")
    lines.append(f"  domain    : {run['domain']}")
    lines.append(f"  algorithm : {run['label']}")
    lines.append(f"  instances : {run['config'].get('instances')}")
    lines.append("")

    counts: dict[str, int] = {}
    for r in records:
        counts[r.status] = counts.get(r.status, 0) + 1
    lines.append("Records by status")
    for status, cnt in sorted(counts.items()):
        lines.append(f"  {status:<10}: {cnt}")
    lines.append("")

    lines.append("Per instance")
    for r in records:
        cost = "-" if r.cost_int is None else str(r.cost_int)
        cached = sum(1 for it in r.iterations if it.cache_hit)
        lines.append(
            f"  {r.instance:>8} {r.status:<10} cost={cost} exp={r.expansions} "
            f"gen={r.generations} iters={len(r.iterations)} cached={cached} t={r.time_s:.3f}s"
        )
    lines.append("")
    lines.append(emit_table(records))
    return "\n".join(lines)


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("db", help="Path to out/<run_id>/runs.db")
    parser.add_argument("--run-id", default=None, help="Run to summarize (default: latest in the DB)")
    args = parser.parse_args()

    db_path = Path(args.db).resolve()
    if not db_path.exists():
        raise SystemExit(f"DB not found: {db_path}")
    print(summarize(db_path, args.run_id))


if __name__ == "__main__":
    main()
